"""
Builders for Chevalley-Eilenberg algebras and the structures they carry.

Cochain degrees are used on input (generators of the dual have degree 1)
and converted to homological degrees in the resulting complexes.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .dgalg import DgAlgebra, MultilinearOp, expand_orbits
from .exactla import Q
from .graded import GradedBasis, GradedComplex, HVector, build_contraction
from .operads import alpha_sign, builtin
from .reports import CheckReport


class ConstructionError(ValueError):
    pass


class ExteriorAlgebra:
    """Square-free monomials on ordered odd generators, sorted by length then index."""

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        n = len(self.generators)
        self.monomials = [m for k in range(n + 1) for m in itertools.combinations(range(n), k)]
        sep = "" if all(len(g) == 1 for g in self.generators) else "*"
        self._name = {}
        for m in self.monomials:
            self._name[m] = sep.join(self.generators[i] for i in m) if m else "1"
        self._mono = {v: k for k, v in self._name.items()}
        self.basis = GradedBasis((self._name[m], -len(m)) for m in self.monomials)

    def name(self, mono: tuple) -> str:
        return self._name[mono]

    def mono(self, name: str) -> tuple:
        return self._mono[name]

    def generator(self, g: str) -> tuple:
        return (self.generators.index(g),)

    def mono_product(self, a: tuple, b: tuple):
        """``(sign, monomial)`` of ``a * b``, or None when they share a generator."""
        if set(a) & set(b):
            return None
        inversions = sum(1 for i in a for j in b if i > j)
        return (-1 if inversions % 2 else 1), tuple(sorted(a + b))

    def mul(self, u: Mapping[tuple, Fraction], v: Mapping[tuple, Fraction]) -> dict:
        out = defaultdict(Fraction)
        for a, ca in u.items():
            for b, cb in v.items():
                p = self.mono_product(a, b)
                if p:
                    out[p[1]] += p[0] * ca * cb
        return {k: c for k, c in out.items() if c}

    def to_vector(self, coeffs: Mapping[tuple, Fraction], degree: int) -> HVector:
        return HVector(degree, {self._name[m]: c for m, c in coeffs.items()})

    def from_vector(self, v: HVector) -> dict:
        return {self._mono[k]: c for k, c in v.items()}

    def product_table(self) -> dict:
        table = {}
        for a in self.monomials:
            for b in self.monomials:
                p = self.mono_product(a, b)
                if p:
                    table[(self._name[a], self._name[b])] = HVector(
                        -len(a) - len(b), {self._name[p[1]]: p[0]})
        return table


@dataclass
class LieData:
    """Structure constants ``[e_a, e_b] = sum_k c^k_ab e_k``, keyed by basis names."""

    names: tuple
    brackets: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        full: dict[tuple, dict] = {}
        for (a, b), out in self.brackets.items():
            if a not in self.names or b not in self.names:
                raise ValueError(f"bracket [{a},{b}] uses unknown names")
            out = {k: Q(c) for k, c in out.items() if Q(c)}
            for k in out:
                if k not in self.names:
                    raise ValueError(f"bracket [{a},{b}] has unknown output {k!r}")
            if a == b:
                if out:
                    raise ValueError(f"[{a},{a}] must vanish")
                continue
            neg = {k: -c for k, c in out.items()}
            if (b, a) in full and full[(b, a)] != neg:
                raise ValueError(f"[{a},{b}] and [{b},{a}] are not antisymmetric")
            full[(a, b)] = out
            full[(b, a)] = neg
        self.brackets = full

    def bracket(self, a: str, b: str) -> dict:
        return self.brackets.get((a, b), {})

    def _bracket_vec(self, u: Mapping[str, Fraction], v: Mapping[str, Fraction]) -> dict:
        out = defaultdict(Fraction)
        for a, ca in u.items():
            for b, cb in v.items():
                for k, c in self.bracket(a, b).items():
                    out[k] += ca * cb * c
        return {k: c for k, c in out.items() if c}

    def jacobi_failures(self) -> list[tuple]:
        bad = []
        for a, b, c in itertools.combinations(self.names, 3):
            total = defaultdict(Fraction)
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in self._bracket_vec(self.bracket(x, y), {z: 1}).items():
                    total[k] += v
            if any(total.values()):
                bad.append((a, b, c))
        return bad


@dataclass
class LieBialgebraData:
    """``lie`` drives the differential; ``dual_bracket`` is the bracket on the dual generators."""

    lie: LieData
    dual_bracket: LieData

    def __post_init__(self):
        if self.lie.names != self.dual_bracket.names:
            raise ValueError("both brackets must use the same (dual) generator names")


class DegreeMinus2Operator:
    """Linear map on basis names lowering cochain degree by two."""

    def __init__(self, table: Mapping[str, HVector]):
        self.table = {k: v for k, v in table.items() if v}

    def __call__(self, v: HVector) -> HVector:
        out = HVector(v.degree + 2)
        for k, c in v.items():
            img = self.table.get(k)
            if img:
                out = out + c * img
        return out

    def check(self, complex: GradedComplex) -> CheckReport:
        """Degree and chain-map condition ``d i = i d`` on every basis element."""
        report = CheckReport("operator")
        basis = complex.basis
        for k, v in self.table.items():
            if k not in basis or v.degree != basis.degree(k) + 2:
                report.fail(k, "image has the wrong degree")
        if not report.ok:
            return report
        for e in basis:
            report.checked += 1
            u = basis.unit(e.name)
            if complex.d(self(u)) != self(complex.d(u)):
                report.fail(e.name, "d i != i d")
        return report


def ce_differential(ext: ExteriorAlgebra, data: LieData) -> dict[str, HVector]:
    """``d xi^k = sum_{a<b} c^k_ab xi^a xi^b`` extended as a derivation."""
    gens = {}
    for k in data.names:
        out = defaultdict(Fraction)
        for a, b in itertools.combinations(data.names, 2):
            c = data.bracket(a, b).get(k)
            if c:
                sign, m = ext.mono_product(ext.generator(a), ext.generator(b))
                out[m] += sign * c
        gens[k] = dict(out)
    diff = {}
    for m in ext.monomials:
        total = defaultdict(Fraction)
        for s, gi in enumerate(m):
            dg = gens[ext.generators[gi]]
            if not dg:
                continue
            left = {m[:s]: Fraction(-1 if s % 2 else 1)}
            piece = ext.mul(ext.mul(left, dg), {m[s + 1:]: Fraction(1)})
            for k, c in piece.items():
                total[k] += c
        v = ext.to_vector(total, -len(m) - 1)
        if v:
            diff[ext.name(m)] = v
    return diff


def ce_complex(data: LieData) -> tuple[ExteriorAlgebra, GradedComplex]:
    ext = ExteriorAlgebra(data.names)
    return ext, GradedComplex(ext.basis, ce_differential(ext, data))


def chevalley_eilenberg(data: LieData, name: str = "chevalley-eilenberg") -> DgAlgebra:
    """The commutative DG algebra ``Lambda g^*`` with the CE differential."""
    bad = data.jacobi_failures()
    if bad:
        raise ConstructionError(f"Jacobi identity fails on {bad[0]}")
    ext, complex = ce_complex(data)
    pres = builtin("com")
    c = MultilinearOp(pres.generator("c"), ext.product_table())
    alg = DgAlgebra(complex, pres, {"c": c}, name)
    alg.exterior = ext
    return alg


class GerstenhaberBracket:
    """
    The bracket on ``Lambda g^*`` extending one on the generators.

    Uses ``[a, bc] = [a,b]c + (-1)^{(|a|-1)|b|} b[a,c]`` and
    ``[a,b] = -(-1)^{(|a|-1)(|b|-1)} [b,a]`` with cochain degrees.
    """

    def __init__(self, ext: ExteriorAlgebra, dual: LieData):
        self.ext = ext
        self.dual = dual
        self._cache = {}

    def _gen_bracket(self, i: int, j: int) -> dict:
        ext = self.ext
        out = self.dual.bracket(ext.generators[i], ext.generators[j])
        return {ext.generator(k): c for k, c in out.items()}

    def __call__(self, a: tuple, b: tuple) -> dict:
        key = (a, b)
        if key not in self._cache:
            self._cache[key] = self._compute(a, b)
        return self._cache[key]

    def _compute(self, a, b):
        ext = self.ext
        if not a or not b:
            return {}
        if len(a) == 1 and len(b) == 1:
            return self._gen_bracket(a[0], b[0])
        if len(b) >= 2:
            head, rest = b[:1], b[1:]
            one = ext.mul(self(a, head), {rest: Fraction(1)})
            sign = -1 if (len(a) - 1) % 2 else 1
            two = ext.mul({head: Fraction(sign)}, self(a, rest))
            return _add(one, two)
        # [a, g] = -[g, a] for a single generator g
        return {k: -c for k, c in self(b, a).items()}

    def split_last(self, a: tuple, b: tuple) -> dict:
        """``[a, b]`` expanded along the last generator of ``b`` (a consistency probe)."""
        ext = self.ext
        init, last = b[:-1], b[-1:]
        one = ext.mul(self(a, init), {last: Fraction(1)})
        sign = -1 if ((len(a) - 1) * len(init)) % 2 else 1
        two = ext.mul({init: Fraction(sign)}, self(a, last))
        return _add(one, two)


def _add(u, v):
    out = defaultdict(Fraction)
    for d in (u, v):
        for k, c in d.items():
            out[k] += c
    return {k: c for k, c in out.items() if c}


def gerstenhaber_from_bialgebra(data: LieBialgebraData,
                                name: str = "gerstenhaber") -> DgAlgebra:
    """
    CE algebra with product ``c`` and bracket operation ``l``,
    where ``[a, b] = (-1)^{|a|} l(a, b)``.
    """
    bad = data.dual_bracket.jacobi_failures()
    if bad:
        raise ConstructionError(f"dual bracket fails Jacobi on {bad[0]}")
    ce = chevalley_eilenberg(data.lie)
    ext = ce.exterior
    br = GerstenhaberBracket(ext, data.dual_bracket)
    table = {}
    for a in ext.monomials:
        for b in ext.monomials:
            val = br(a, b)
            if val:
                sign = -1 if len(a) % 2 else 1
                table[(ext.name(a), ext.name(b))] = ext.to_vector(
                    {k: sign * c for k, c in val.items()}, -len(a) - len(b) + 1)
    pres = builtin("gerstenhaber")
    ops = {
        "c": MultilinearOp(pres.generator("c"), ce.ops["c"].table),
        "l": MultilinearOp(pres.generator("l"), table),
    }
    alg = DgAlgebra(ce.complex, pres, ops, name)
    alg.exterior = ext
    alg.bracket = br
    if not alg.check_derivation("l").ok:
        raise ConstructionError("not a Lie bialgebra (compatibility fails)")
    for rep in alg.validate():
        if not rep.ok:
            raise ConstructionError(f"{rep.check} fails at {rep.failures[0]}")
    return alg


def koszul_cubic(ext: ExteriorAlgebra, D: DegreeMinus2Operator, a: str, b: str, c: str) -> HVector:
    """
    Third Koszul bracket of an even operator ``D`` w.r.t. the exterior product:

        sum over S of (-1)^{3-|S|} eps(S) D(prod a_S) prod a_{not S}

    with ``eps(S)`` the Koszul sign moving the ``S`` entries to the front.
    It vanishes identically iff ``D`` is a differential operator of order <= 2.
    """
    args = (a, b, c)
    monos = [ext.mono(n) for n in args]
    degs = [len(m) for m in monos]
    out = defaultdict(Fraction)
    for k in range(4):
        for S in itertools.combinations(range(3), k):
            rest = [i for i in range(3) if i not in S]
            order = list(S) + rest
            sigma = [order.index(i) for i in range(3)]
            front = _mono_prod(ext, [monos[i] for i in S])
            if front is None:
                continue
            fsign, fmono = front
            img = D.table.get(ext.name(fmono))
            if not img:
                continue
            back = _mono_prod(ext, [monos[i] for i in rest])
            if back is None:
                continue
            bsign, bmono = back
            sign = (-1) ** ((3 - k) + alpha_sign(degs, sigma)) * fsign * bsign
            piece = ext.mul(ext.from_vector(img), {bmono: Fraction(sign)})
            for m, coef in piece.items():
                out[m] += coef
    return ext.to_vector(out, sum(-d for d in degs) + 2)


def _mono_prod(ext, monos):
    sign, acc = 1, ()
    for m in monos:
        p = ext.mono_product(acc, m)
        if p is None:
            return None
        sign *= p[0]
        acc = p[1]
    return sign, acc


def bv_trivialized_hypercom3(ce: DgAlgebra, i_op: DegreeMinus2Operator,
                             m3_override: Mapping | None = None,
                             relation_scope: list | None = None,
                             name: str = "hypercommutative") -> DgAlgebra:
    """
    Arity 2 and 3 hypercommutative operations on a CE algebra with zero BV operator.

    ``m2`` is the product.  ``m3`` is the cubic Koszul bracket of ``i`` unless
    an explicit table is supplied.  The result is gated on graded symmetry,
    compatibility with ``d`` and the arity 4 relation (on ``relation_scope``,
    all tuples by default); any failure raises ConstructionError.
    """
    rep = i_op.check(ce.complex)
    if not rep.ok:
        raise ConstructionError(f"operator i: {rep.failures[0]}")
    ext = ce.exterior
    pres = builtin("hypercom3")
    m3gen = pres.generator("m3")
    if m3_override is not None:
        try:
            table = expand_orbits(m3gen, m3_override, ce.basis.degree)
        except ValueError as exc:
            raise ConstructionError(f"m3 override: {exc}") from None
    else:
        table = {}
        names = ext.basis.names
        for key in itertools.product(names, repeat=3):
            v = koszul_cubic(ext, i_op, *key)
            if v:
                table[key] = v
    ops = {
        "m2": MultilinearOp(pres.generator("m2"), ce.ops["c"].table),
        "m3": MultilinearOp(m3gen, table),
    }
    alg = DgAlgebra(ce.complex, pres, ops, name)
    alg.exterior = ext
    alg.i_operator = i_op
    gate = [
        alg.check_symmetry("m2"),
        alg.check_symmetry("m3"),
        alg.check_derivation("m2"),
        alg.check_derivation("m3"),
        alg.check_relation("hypercommutative", relation_scope),
    ]
    for r in gate:
        if not r.ok:
            raise ConstructionError(f"{r.check} fails at {r.failures[0]}")
    return alg


# canned data


def heisenberg_lie(extra: Sequence[str] = ()) -> LieData:
    """Heisenberg algebra, optionally plus an abelian factor with dual names ``extra``."""
    return LieData(tuple(extra) + ("x", "y", "z"), {("x", "y"): {"z": 1}})


def heisenberg_bialgebra() -> LieBialgebraData:
    dual = LieData(("x", "y", "z"), {
        ("z", "x"): {"x": 1},
        ("z", "y"): {"x": 1, "y": 1},
    })
    return LieBialgebraData(heisenberg_lie(), dual)


def heisenberg_i_operator() -> DegreeMinus2Operator:
    return DegreeMinus2Operator({"vwx": HVector(-1, {"y": 1})})


HYPERCOM_DECLARED_SCOPE = tuple(itertools.product(("vw", "vx", "x", "vz"), repeat=4))


@lru_cache(maxsize=None)
def heisenberg_ce() -> DgAlgebra:
    return chevalley_eilenberg(heisenberg_lie(), name="heisenberg-ce")


@lru_cache(maxsize=None)
def heisenberg_gerstenhaber() -> DgAlgebra:
    return gerstenhaber_from_bialgebra(heisenberg_bialgebra(), name="heisenberg-gerstenhaber")


@lru_cache(maxsize=None)
def k2_heisenberg_ce() -> DgAlgebra:
    return chevalley_eilenberg(heisenberg_lie(("v", "w")), name="k2-heisenberg-ce")


HYPERCOM_TABLE_CHECKS = {
    ("vw", "vx", "x"): {"vxy": -1},
    ("vw", "wx", "x"): {"wxy": -1},
    ("vw", "xz", "x"): {"xyz": 1},
}


@lru_cache(maxsize=None)
def heisenberg_hypercom() -> DgAlgebra:
    """
    ``k^2 + h`` CE algebra with the hypercommutative structure from ``i(vwx) = y``.

    Besides the generic gate this checks three cochain-level values of
    ``m3`` and the homology product ``m3([vw], [xz], [x]) = [x][yz]``.
    """
    alg = bv_trivialized_hypercom3(k2_heisenberg_ce(), heisenberg_i_operator(),
                                   name="heisenberg-hypercom")
    for key, expected in HYPERCOM_TABLE_CHECKS.items():
        got = alg.evaluate("m3", [alg.unit(n) for n in key])
        if got != HVector(got.degree, expected):
            raise ConstructionError(f"m3{key} = {got!r}, expected {expected}")
    K = build_contraction(alg.complex)
    lhs = K.p(alg.evaluate("m3", [alg.unit(n) for n in ("vw", "xz", "x")]))
    rhs = K.p(alg.evaluate("m2", [alg.unit("x"), alg.unit("yz")]))
    if not lhs or lhs != rhs:
        raise ConstructionError("homology product m3([vw],[xz],[x]) != [x][yz]")
    return alg
