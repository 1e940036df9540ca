"""
Graded vector spaces with named bases, chain complexes and their homology.

Degrees are homological throughout: the differential lowers degree by one.
Cochain complexes are stored with negated degrees (``H^n = H_{-n}``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import exactla as la
from .reports import CheckReport


class StructuralError(ValueError):
    """The input does not define a chain complex."""


class HVector:
    """A homogeneous vector: a degree plus a sparse name -> coefficient map."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping | None = None):
        self.degree = int(degree)
        self.coeffs = {}
        if coeffs:
            for name, c in coeffs.items():
                c = la.Q(c)
                if c:
                    self.coeffs[name] = c

    @classmethod
    def zero(cls, degree: int):
        return cls(degree)

    @classmethod
    def unit(cls, name: str, degree: int):
        return cls(degree, {name: 1})

    def _check(self, other):
        if not isinstance(other, HVector):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"adding degree {self.degree} and degree {other.degree} vectors")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return type(self)(self.degree, out)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) - c
        return type(self)(self.degree, out)

    def __neg__(self):
        return type(self)(self.degree, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, scalar):
        s = la.Q(scalar)
        return type(self)(self.degree, {k: s * c for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HVector):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    __hash__ = None

    def __getitem__(self, name) -> Fraction:
        return self.coeffs.get(name, Fraction(0))

    def items(self):
        return self.coeffs.items()

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return f"0[{self.degree}]"
        terms = " + ".join(f"{la.format_rational(c)}*{k}" for k, c in self.coeffs.items())
        return f"({terms})[{self.degree}]"


class HomologyClass(HVector):
    """Coordinates over a homology basis."""

    __slots__ = ()


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int


class GradedBasis:
    """Ordered named basis; every element carries a homological degree."""

    def __init__(self, elements: Iterable):
        elems = []
        for e in elements:
            if not isinstance(e, BasisElement):
                name, degree = e
                e = BasisElement(str(name), int(degree))
            elems.append(e)
        self.elements = tuple(elems)
        self._degree = {}
        self._by_degree: dict[int, list[str]] = {}
        for e in self.elements:
            if e.name in self._degree:
                raise ValueError(f"duplicate basis name {e.name!r}")
            self._degree[e.name] = e.degree
            self._by_degree.setdefault(e.degree, []).append(e.name)
        self._index = {
            name: i for names in self._by_degree.values() for i, name in enumerate(names)
        }

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, name):
        return name in self._degree

    def __eq__(self, other):
        return isinstance(other, GradedBasis) and self.elements == other.elements

    __hash__ = None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.elements)

    def degree(self, name: str) -> int:
        try:
            return self._degree[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def in_degree(self, n: int) -> tuple[str, ...]:
        return tuple(self._by_degree.get(n, ()))

    def dim(self, n: int) -> int:
        return len(self._by_degree.get(n, ()))

    def position(self, name: str) -> int:
        """Index of ``name`` inside its own degree."""
        return self._index[name]

    def unit(self, name: str) -> HVector:
        return HVector(self.degree(name), {name: 1})

    def vector(self, coeffs: Mapping, degree: int | None = None, cls=HVector) -> HVector:
        coeffs = {k: la.Q(c) for k, c in coeffs.items()}
        live = [k for k, c in coeffs.items() if c]
        degs = {self.degree(k) for k in live}
        if degree is None:
            if len(degs) != 1:
                raise ValueError("cannot infer the degree of an inhomogeneous or zero vector")
            degree = degs.pop()
        elif degs - {degree}:
            raise ValueError(f"vector is not homogeneous of degree {degree}")
        return cls(degree, coeffs)

    def coords(self, v: HVector) -> tuple:
        names = self.in_degree(v.degree)
        for k in v.coeffs:
            if self._degree.get(k) != v.degree:
                raise ValueError(f"{k!r} is not a degree {v.degree} basis element")
        return tuple(v[k] for k in names)

    def from_coords(self, degree: int, coords, cls=HVector) -> HVector:
        names = self.in_degree(degree)
        return cls(degree, {k: c for k, c in zip(names, coords) if c})


class GradedComplex:
    """A graded basis with a differential given on basis elements."""

    def __init__(self, basis: GradedBasis, differential: Mapping[str, HVector]):
        self.basis = basis
        for name in differential:
            if name not in basis:
                raise ValueError(f"differential given on unknown element {name!r}")
        self.differential = {k: v for k, v in differential.items() if v}

    def d(self, v: HVector) -> HVector:
        out = HVector(v.degree - 1)
        for name, c in v.items():
            dv = self.differential.get(name)
            if dv:
                out = out + c * dv
        return out

    def matrix(self, n: int) -> la.Matrix:
        """Matrix of ``d: C_n -> C_{n-1}`` in the basis order."""
        src = self.basis.in_degree(n)
        tgt_dim = self.basis.dim(n - 1)
        cols = [self.basis.coords(self.d(self.basis.unit(s))) for s in src]
        return la.Matrix.from_columns(cols, tgt_dim) if cols else la.Matrix.zeros(tgt_dim, 0)

    def degrees(self) -> list[int]:
        return self.basis.degrees()

    def cycle_basis(self, n: int) -> list[HVector]:
        return [self.basis.from_coords(n, v) for v in la.kernel_basis(self.matrix(n))]

    def boundary_basis(self, n: int) -> list[HVector]:
        return [self.basis.from_coords(n, v) for v in la.image_basis(self.matrix(n + 1))]


def check_differential(C: GradedComplex) -> CheckReport:
    """Degree of ``d`` and ``d(d(e)) = 0`` on every basis element."""
    report = CheckReport("differential")
    basis = C.basis
    for e in basis:
        report.checked += 1
        de = C.differential.get(e.name)
        if not de:
            continue
        bad = [k for k in de.coeffs if k not in basis or basis.degree(k) != e.degree - 1]
        if de.degree != e.degree - 1 or bad:
            report.fail(e.name, f"d({e.name}) is not homogeneous of degree {e.degree - 1}")
            continue
        try:
            dde = C.d(de)
        except ValueError as exc:
            report.fail(e.name, f"d(d({e.name})) undefined: {exc}")
            continue
        if dde:
            report.fail(e.name, f"d(d({e.name})) = {dde!r}")
    return report


@dataclass
class Homology:
    """Betti numbers and a homology basis with chosen representing cycles."""

    betti: dict[int, int]
    basis: GradedBasis
    representatives: dict[str, HVector]

    def representative(self, name: str) -> HVector:
        return self.representatives[name]

    def unit(self, name: str) -> HomologyClass:
        return HomologyClass(self.basis.degree(name), {name: 1})

    def zero(self, degree: int) -> HomologyClass:
        return HomologyClass(degree)

    def vector(self, coeffs, degree: int | None = None) -> HomologyClass:
        return self.basis.vector(coeffs, degree, cls=HomologyClass)


def _complement_by_units(vectors: list[tuple], dim: int) -> list[tuple]:
    """Standard vectors completing ``vectors`` (independent) to a basis."""
    comp, _ = la.quotient_data(vectors, dim)
    return comp


def _class_name(rep: HVector, n: int, k: int) -> str:
    if len(rep.coeffs) == 1:
        (name, c), = rep.items()
        if c == 1:
            return name
    return f"h[{n}]{k}"


def compute_homology(C: GradedComplex) -> Homology:
    """
    Homology of ``C`` with deterministic representatives.

    In each degree the representatives are the first rref kernel vectors not
    in the span of the boundaries and the representatives chosen before them.
    """
    report = check_differential(C)
    if not report.ok:
        raise StructuralError("; ".join(map(str, report.failures)))
    data = _decompose(C)
    elements, reps, betti = [], {}, {}
    for n in C.degrees():
        names = []
        for k, rep in enumerate(data[n]["harmonic"]):
            v = C.basis.from_coords(n, rep)
            name = _class_name(v, n, k)
            if name in reps:
                name = f"h[{n}]{k}"
            names.append(name)
            reps[name] = v
            elements.append((name, n))
        betti[n] = len(names)
    return Homology(betti, GradedBasis(elements), reps)


def _decompose(C: GradedComplex, harmonic: Mapping[int, list] | None = None):
    """Split each ``C_n`` as boundaries + harmonic + complement of cycles."""
    basis = C.basis
    data = {}
    for n in C.degrees():
        dim = basis.dim(n)
        Z = la.kernel_basis(C.matrix(n))
        K = _complement_by_units(Z, dim)
        data[n] = {"dim": dim, "Z": Z, "K": K}
    for n in C.degrees():
        dim = data[n]["dim"]
        upper = data.get(n + 1)
        if upper:
            Dn1 = C.matrix(n + 1)
            B = [Dn1 @ k for k in upper["K"]]
        else:
            B = []
        if harmonic is not None:
            H = [tuple(v) for v in harmonic.get(n, [])]
        else:
            H = []
            span = list(B)
            r = la.rank(la.Matrix(span, dim)) if span else 0
            for z in data[n]["Z"]:
                if la.rank(la.Matrix(span + [z], dim)) > r:
                    span.append(z)
                    H.append(z)
                    r += 1
        data[n]["B"] = B
        data[n]["harmonic"] = H
    return data


class Contraction:
    """
    Deformation retract data ``(i, p, h)`` from a complex onto its homology.

    ``h`` inverts ``d`` on boundaries (landing in a fixed complement of the
    cycles) and vanishes on harmonic and complement vectors, so
    ``d h + h d = 1 - i p`` and ``h i = 0``, ``p h = 0``, ``h h = 0``.
    """

    def __init__(self, complex: GradedComplex, homology: Homology):
        self.complex = complex
        self.homology = homology
        basis = complex.basis
        harmonic = {}
        for n in complex.degrees():
            harmonic[n] = [basis.coords(homology.representatives[name])
                           for name in homology.basis.in_degree(n)]
        for n in homology.basis.degrees():
            if n not in harmonic and homology.basis.dim(n):
                raise StructuralError(f"homology in degree {n} but no chains there")
        data = _decompose(complex, harmonic)
        self._inv = {}
        self._split = {}
        self._K = {}
        for n, dd in data.items():
            cols = list(dd["B"]) + list(dd["harmonic"]) + list(dd["K"])
            if len(cols) != dd["dim"]:
                raise StructuralError(f"representatives in degree {n} do not complete a basis")
            if cols:
                try:
                    inv = la.inverse(la.Matrix.from_columns(cols, dd["dim"]))
                except ValueError:
                    raise StructuralError(
                        f"representatives in degree {n} are not independent modulo boundaries"
                    ) from None
            else:
                inv = la.Matrix.zeros(0, 0)
            self._inv[n] = inv
            self._split[n] = (len(dd["B"]), len(dd["harmonic"]))
            self._K[n] = [basis.from_coords(n, k) for k in dd["K"]]
        for n in complex.degrees():
            nb, nh = self._split[n]
            if nh != homology.basis.dim(n):
                raise StructuralError(f"wrong number of representatives in degree {n}")

    def _coords(self, v: HVector):
        if v.degree not in self._inv:
            return ()
        return self._inv[v.degree] @ self.complex.basis.coords(v)

    def i(self, cls: HVector) -> HVector:
        out = HVector(cls.degree)
        for name, c in cls.items():
            out = out + c * self.homology.representatives[name]
        return out

    def p(self, v: HVector) -> HomologyClass:
        n = v.degree
        if not v or n not in self._inv:
            return HomologyClass(n)
        nb, nh = self._split[n]
        coords = self._coords(v)
        return self.homology.basis.from_coords(n, coords[nb:nb + nh], cls=HomologyClass)

    def h(self, v: HVector) -> HVector:
        n = v.degree
        out = HVector(n + 1)
        if not v or n not in self._inv:
            return out
        nb, _ = self._split[n]
        coords = self._coords(v)
        for c, k in zip(coords[:nb], self._K.get(n + 1, [])):
            if c:
                out = out + c * k
        return out

    def verify(self) -> CheckReport:
        """Check all contraction identities on every basis element."""
        report = CheckReport("contraction")
        C = self.complex
        for e in C.basis:
            v = C.basis.unit(e.name)
            report.checked += 1
            lhs = C.d(self.h(v)) + self.h(C.d(v))
            rhs = v - self.i(self.p(v))
            if lhs != rhs:
                report.fail(e.name, "d h + h d != 1 - i p")
            if self.h(self.h(v)):
                report.fail(e.name, "h h != 0")
            if self.p(self.h(v)):
                report.fail(e.name, "p h != 0")
            if self.p(C.d(v)):
                report.fail(e.name, "p is not a chain map")
        for name in self.homology.basis.names:
            u = self.homology.unit(name)
            report.checked += 1
            rep = self.i(u)
            if C.d(rep):
                report.fail(name, "i(u) is not a cycle")
            if self.p(rep) != u:
                report.fail(name, "p i != 1")
            if self.h(rep):
                report.fail(name, "h i != 0")
        return report


def build_contraction(C: GradedComplex, homology: Homology | None = None) -> Contraction:
    if homology is None:
        homology = compute_homology(C)
    return Contraction(C, homology)


def is_boundary(C: GradedComplex, v: HVector) -> HVector | None:
    """A chain ``w`` with ``d(w) = v``, or None when ``v`` does not bound."""
    if not v:
        return HVector(v.degree + 1)
    coords = C.basis.coords(v)
    x = la.solve(C.matrix(v.degree + 1), coords)
    if x is None:
        return None
    return C.basis.from_coords(v.degree + 1, x)
