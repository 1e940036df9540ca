"""
Massey products attached to a single quadratic relation.

Given homology classes ``x_1..x_r`` whose inner composites vanish in
homology, choose cycles ``y_i`` and bounding chains ``rho`` for every
summand ``(outer o_l inner) . sigma`` of the relation; the gamma-signed sum
of ``outer(..., rho, ...)`` is a cycle whose class is well defined modulo the
span of ``outer(y, ..., H, ..., y)`` over all summands.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import exactla as la
from .dgalg import DgAlgebra, substituted_inputs
from .graded import Contraction, HomologyClass, HVector, is_boundary
from .operads import Relation, RelationTerm


class MasseyUndefined(ValueError):
    """Some inner composite is nonzero in homology."""

    def __init__(self, index: int, term: RelationTerm, value: HomologyClass):
        self.index = index
        self.term = term
        self.value = value
        super().__init__(
            f"Massey product undefined: summand {index} "
            f"({term.outer.name} o_{term.slot} {term.inner.name}) has inner class {value!r}"
        )


class MasseyInternalError(AssertionError):
    pass


@dataclass
class Choices:
    """Explicit cycles ``y_i`` and/or bounding chains keyed by summand index."""

    representatives: list[HVector] | None = None
    bounding_chains: dict[int, HVector] = field(default_factory=dict)


@dataclass
class MasseyProblem:
    algebra: DgAlgebra
    contraction: Contraction
    relation: Relation
    inputs: list[HomologyClass]
    choices: Choices | None = None

    def __post_init__(self):
        self.inputs = list(self.inputs)
        if len(self.inputs) != self.relation.arity:
            raise ValueError(f"relation {self.relation.name!r} takes {self.relation.arity} inputs")
        if self.choices and self.choices.representatives is not None:
            ys = self.choices.representatives
            if len(ys) != len(self.inputs):
                raise ValueError("one representative per input is required")
            for k, (y, x) in enumerate(zip(ys, self.inputs)):
                if self.algebra.d(y):
                    raise ValueError(f"representative {k} is not a cycle")
                if self.contraction.p(y) != x or y.degree != x.degree:
                    raise ValueError(f"representative {k} does not represent its input class")

    @property
    def degree(self) -> int:
        return self.relation.degree + sum(x.degree for x in self.inputs) + 1

    def representatives(self) -> list[HVector]:
        if self.choices and self.choices.representatives is not None:
            return list(self.choices.representatives)
        return [self.contraction.i(x) for x in self.inputs]

    def with_choices(self, choices: Choices | None) -> "MasseyProblem":
        return MasseyProblem(self.algebra, self.contraction, self.relation, self.inputs, choices)


@dataclass
class TermVanishing:
    index: int
    term: RelationTerm
    value: HVector
    homology: HomologyClass
    is_cycle: bool

    @property
    def vanishes(self) -> bool:
        return not self.homology and self.is_cycle


def check_vanishing(problem: MasseyProblem, strict: bool = True) -> list[TermVanishing]:
    """Inner composites of every summand on the chosen cycles."""
    A, K = problem.algebra, problem.contraction
    ys = problem.representatives()
    out = []
    for k, t in enumerate(problem.relation.terms):
        z = A.inner_value(t, ys)
        out.append(TermVanishing(k, t, z, K.p(z), not A.d(z)))
    if strict:
        for tv in out:
            if not tv.vanishes:
                raise MasseyUndefined(tv.index, tv.term, tv.homology)
    return out


def _random_cycle(problem: MasseyProblem, degree: int, rng: random.Random, spread: int = 3):
    v = HVector(degree)
    for z in problem.algebra.complex.cycle_basis(degree):
        c = rng.randint(-spread, spread)
        if c:
            v = v + c * z
    return v


def bounding_chain(problem: MasseyProblem, index: int, mode: str = "canonical",
                   rng: random.Random | None = None,
                   vanishing: Sequence[TermVanishing] | None = None) -> HVector:
    """
    A chain ``rho`` with ``d(rho)`` equal to the inner composite of summand ``index``.

    ``canonical`` uses the contraction homotopy (zero when the composite is
    zero on the nose), ``random`` adds a random cycle, ``explicit`` takes the
    chain from the problem's choices and falls back to ``canonical`` for
    summands without one.
    """
    if vanishing is None:
        vanishing = check_vanishing(problem)
    z = vanishing[index].value
    explicit = problem.choices.bounding_chains if problem.choices else {}
    if mode == "explicit" and index in explicit:
        rho = explicit[index]
    elif mode == "explicit":
        rho = problem.contraction.h(z) if z else HVector(z.degree + 1)
    elif mode in ("canonical", "random"):
        rho = problem.contraction.h(z) if z else HVector(z.degree + 1)
        if mode == "random":
            rho = rho + _random_cycle(problem, z.degree + 1, rng or random.Random())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if rho.degree != z.degree + 1 or problem.algebra.d(rho) != z:
        raise MasseyInternalError(f"chain for summand {index} does not bound its composite")
    return rho


def representative(problem: MasseyProblem, chains: Sequence[HVector]) -> HVector:
    """The gamma-signed sum of ``outer(y, ..., rho, ..., y)``; must be a cycle."""
    A = problem.algebra
    ys = problem.representatives()
    out = HVector(problem.degree)
    for t, rho in zip(problem.relation.terms, chains):
        out = out + A.evaluate_term(t, ys, substitute=rho)
    if A.d(out):
        raise MasseyInternalError(f"representative is not a cycle: d = {A.d(out)!r}")
    return out


def indeterminacy(problem: MasseyProblem) -> list[HomologyClass]:
    """Rref-canonical basis of the span of ``outer(y, ..., H, ..., y)`` over all summands."""
    A, K = problem.algebra, problem.contraction
    H = K.homology
    ys = problem.representatives()
    n = problem.degree
    names = H.basis.in_degree(n)
    vectors = []
    for t in problem.relation.terms:
        hdeg = t.inner.degree + sum(ys[j].degree for j in t.inner_inputs()) + 1
        for u in H.basis.in_degree(hdeg):
            payload = K.i(H.unit(u))
            val = A.evaluate(t.outer.name, substituted_inputs(t, ys, payload))
            cls = K.p(val)
            if cls:
                vectors.append(tuple(cls[k] for k in names))
    return [H.basis.from_coords(n, v, cls=HomologyClass)
            for v in la.row_basis(vectors, len(names))]


@dataclass
class Coset:
    """``representative + span(indeterminacy)`` inside one degree of homology."""

    degree: int
    names: tuple
    representative: HomologyClass
    indeterminacy: list[HomologyClass]

    def coords(self, cls: HVector) -> tuple:
        if cls and cls.degree != self.degree:
            raise ValueError(f"class of degree {cls.degree} compared with a degree {self.degree} coset")
        return tuple(cls[k] for k in self.names)

    def _cls(self, coords) -> HomologyClass:
        return HomologyClass(self.degree, dict(zip(self.names, coords)))

    def normal_form(self) -> HomologyClass:
        """The representative with every indeterminacy pivot coordinate cleared."""
        v = list(self.coords(self.representative))
        for row in (self.coords(b) for b in self.indeterminacy):
            p = next(j for j, a in enumerate(row) if a)
            if v[p]:
                f = v[p] / row[p]
                v = [a - f * b for a, b in zip(v, row)]
        return self._cls(v)

    @property
    def is_singleton(self) -> bool:
        return not self.indeterminacy


def coset_contains(coset: Coset, cls: HVector) -> bool:
    diff = la.add(coset.coords(cls), la.scale(-1, coset.coords(coset.representative)))
    return la.membership([coset.coords(b) for b in coset.indeterminacy], diff) is not None


def coset_equal(a: Coset, b: Coset) -> bool:
    if a.degree != b.degree or a.names != b.names:
        raise ValueError("cosets live in different degrees")
    span_a = la.row_basis([a.coords(v) for v in a.indeterminacy], len(a.names))
    span_b = la.row_basis([b.coords(v) for v in b.indeterminacy], len(b.names))
    return span_a == span_b and coset_contains(a, b.representative)


@dataclass
class AffineSubspace:
    point: HomologyClass
    directions: list[HomologyClass]

    @property
    def is_point(self) -> bool:
        return not self.directions


def coset_intersect_subspace(coset: Coset, subspace: Sequence[HVector]) -> AffineSubspace | None:
    """``coset`` intersected with ``span(subspace)``; None when empty."""
    dim = len(coset.names)
    I = [coset.coords(v) for v in coset.indeterminacy]
    S = [coset.coords(v) for v in subspace]
    r = coset.coords(coset.representative)
    cols = I + [la.scale(-1, s) for s in S]
    if not cols:
        return AffineSubspace(coset._cls(r), []) if not any(r) else None
    M = la.Matrix.from_columns(cols, dim)
    sol = la.solve(M, la.scale(-1, r))
    if sol is None:
        return None
    point = la.add(r, la.combination(sol[:len(I)], I, dim))
    dirs = [la.combination(k[:len(I)], I, dim) for k in la.kernel_basis(M)]
    dirs = la.row_basis(dirs, dim)
    result = Coset(coset.degree, coset.names, coset._cls(point), [coset._cls(d) for d in dirs])
    return AffineSubspace(result.normal_form(), result.indeterminacy)


@dataclass
class MasseyResult:
    problem: MasseyProblem
    vanishing: list[TermVanishing]
    chains: list[HVector]
    cochain: HVector
    coset: Coset


def compute(problem: MasseyProblem, mode: str = "canonical",
            rng: random.Random | None = None) -> MasseyResult:
    vanishing = check_vanishing(problem)
    if mode == "canonical" and problem.choices and problem.choices.bounding_chains:
        mode = "explicit"
    chains = [bounding_chain(problem, k, mode, rng, vanishing)
              for k in range(len(problem.relation.terms))]
    cochain = representative(problem, chains)
    K = problem.contraction
    n = problem.degree
    rep = K.p(cochain)
    if cochain.degree != n:
        raise MasseyInternalError("degree audit failed")
    rep = HomologyClass(n, rep.coeffs)
    coset = Coset(n, K.homology.basis.in_degree(n), rep, indeterminacy(problem))
    return MasseyResult(problem, vanishing, chains, cochain, coset)


def massey_product(problem: MasseyProblem, mode: str = "canonical",
                   rng: random.Random | None = None) -> Coset:
    return compute(problem, mode, rng).coset


def transfer_value(problem: MasseyProblem) -> HomologyClass:
    """The class from ``y_i = i(x_i)`` and ``rho = h(z)``: the transferred weight-two operation."""
    canonical = problem.with_choices(None)
    vanishing = check_vanishing(canonical)
    chains = [bounding_chain(canonical, k, "canonical", vanishing=vanishing)
              for k in range(len(canonical.relation.terms))]
    cls = canonical.contraction.p(representative(canonical, chains))
    return HomologyClass(canonical.degree, cls.coeffs)


def random_choices(problem: MasseyProblem, rng: random.Random, spread: int = 3) -> Choices:
    """Cycles ``i(x) + d(w)`` and bounding chains solved exactly plus random cycles."""
    A = problem.algebra
    basis = A.basis
    ys = []
    for x in problem.inputs:
        y = problem.contraction.i(x)
        names = basis.in_degree(x.degree + 1)
        w = HVector(x.degree + 1, {k: rng.randint(-spread, spread) for k in names})
        ys.append(y + A.d(w))
    trial = problem.with_choices(Choices(ys))
    chains = {}
    for k, tv in enumerate(check_vanishing(trial)):
        rho = is_boundary(A.complex, tv.value)
        if rho is None:
            raise MasseyInternalError(f"inner composite {k} vanishes in homology but does not bound")
        chains[k] = rho + _random_cycle(problem, tv.value.degree + 1, rng, spread)
    return Choices(ys, chains)
