"""
Quadratic operad presentations and the Koszul sign calculus.

Permutations are tuples of 0-based images: ``sigma[i]`` is the image of
``i``.  A permuted operation acts by

    (mu . sigma)(x_1, ..., x_r) = (-1)^alpha mu(x_{sigma^-1(1)}, ..., x_{sigma^-1(r)})

with ``alpha`` the Koszul sign of the reordering.  Generator degrees are
homological.  All sign helpers return a parity, 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exactla import Q


class Symmetry(str, Enum):
    NONE = "none"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


Permutation = tuple


def identity_perm(n: int) -> Permutation:
    return tuple(range(n))


def inverse_perm(sigma: Sequence[int]) -> Permutation:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def compose_perm(tau: Sequence[int], sigma: Sequence[int]) -> Permutation:
    """``tau o sigma``: first sigma, then tau."""
    return tuple(tau[s] for s in sigma)


def is_permutation(sigma: Sequence[int]) -> bool:
    return sorted(sigma) == list(range(len(sigma)))


def cycles(n: int, *cyc: Sequence[int]) -> Permutation:
    """Permutation of ``n`` points from 1-based cycles, e.g. ``cycles(3, (1, 2, 3))``."""
    img = list(range(n))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    if not is_permutation(img):
        raise ValueError(f"cycles {cyc} do not define a permutation of {n} points")
    return tuple(img)


def from_images(images: Sequence[int]) -> Permutation:
    """From the serialized 1-based image list ``[sigma(1), ..., sigma(r)]``."""
    sigma = tuple(int(a) - 1 for a in images)
    if not is_permutation(sigma):
        raise ValueError(f"{list(images)} is not a permutation")
    return sigma


def to_images(sigma: Sequence[int]) -> list[int]:
    return [s + 1 for s in sigma]


def perm_parity(sigma: Sequence[int]) -> int:
    n = len(sigma)
    return sum(1 for s in range(n) for t in range(s + 1, n) if sigma[s] > sigma[t]) % 2


def permute(items: Sequence, sigma: Sequence[int]) -> list:
    """``[items[sigma^-1(0)], ..., items[sigma^-1(r-1)]]``: item ``i`` moves to ``sigma[i]``."""
    out = [None] * len(items)
    for i, s in enumerate(sigma):
        out[s] = items[i]
    return out


def alpha_sign(degrees: Sequence[int], sigma: Sequence[int]) -> int:
    """Koszul parity: sum of ``|x_s||x_t|`` over inversions ``s < t, sigma(s) > sigma(t)``."""
    if len(degrees) != len(sigma):
        raise ValueError("degrees and permutation have different lengths")
    n = len(sigma)
    odd = [d % 2 for d in degrees]
    total = 0
    for s in range(n):
        if not odd[s]:
            continue
        for t in range(s + 1, n):
            if odd[t] and sigma[s] > sigma[t]:
                total += 1
    return total % 2


def beta_sign(op_degree: int, degrees: Sequence[int], s: int) -> int:
    """Parity of ``|mu| + |x_1| + ... + |x_{s-1}|`` (``s`` is 1-based)."""
    if not 1 <= s <= len(degrees):
        raise ValueError(f"slot {s} out of range")
    return (op_degree + sum(degrees[: s - 1])) % 2


@dataclass(frozen=True)
class Generator:
    name: str
    arity: int
    degree: int
    symmetry: Symmetry = Symmetry.NONE

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"generator {self.name!r} needs arity >= 1")
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))


@dataclass(frozen=True)
class RelationTerm:
    """``coefficient * (outer o_slot inner) . perm`` with a 1-based slot."""

    coefficient: Fraction
    outer: Generator
    inner: Generator
    slot: int
    perm: Permutation

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Q(self.coefficient))
        object.__setattr__(self, "perm", tuple(self.perm))
        if not 1 <= self.slot <= self.outer.arity:
            raise ValueError(f"slot {self.slot} outside 1..{self.outer.arity}")
        if len(self.perm) != self.arity or not is_permutation(self.perm):
            raise ValueError(f"perm {self.perm} is not a permutation of {self.arity} points")

    @property
    def arity(self) -> int:
        return self.outer.arity + self.inner.arity - 1

    @property
    def degree(self) -> int:
        return self.outer.degree + self.inner.degree

    def inner_positions(self) -> range:
        """0-based positions, after permuting, that feed the inner operation."""
        return range(self.slot - 1, self.slot - 1 + self.inner.arity)

    def inner_inputs(self) -> list[int]:
        """0-based indices ``i`` of the inputs ``x_i`` consumed by the inner operation."""
        inv = inverse_perm(self.perm)
        return [inv[m] for m in self.inner_positions()]


def gamma_sign(term: RelationTerm, degrees: Sequence[int]) -> int:
    """Parity of ``alpha + |outer| + (|inner| - 1) * (degrees before the slot)``."""
    if len(degrees) != term.arity:
        raise ValueError("wrong number of degrees for this term")
    inv = inverse_perm(term.perm)
    prefix = sum(degrees[inv[m]] for m in range(term.slot - 1))
    return (alpha_sign(degrees, term.perm) + term.outer.degree
            + (term.inner.degree - 1) * prefix) % 2


def composite_sign(term: RelationTerm, degrees: Sequence[int]) -> int:
    """Sign of the plain composite ``(outer o_l inner) . perm`` on inputs of these degrees."""
    inv = inverse_perm(term.perm)
    prefix = sum(degrees[inv[m]] for m in range(term.slot - 1))
    return (alpha_sign(degrees, term.perm) + term.inner.degree * prefix) % 2


@dataclass(frozen=True)
class Relation:
    name: str
    terms: tuple[RelationTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError(f"relation {self.name!r} has no terms")
        if len({t.arity for t in self.terms}) != 1:
            raise ValueError(f"relation {self.name!r} mixes arities")
        if len({t.degree for t in self.terms}) != 1:
            raise ValueError(f"relation {self.name!r} is not homogeneous in degree")

    @property
    def arity(self) -> int:
        return self.terms[0].arity

    @property
    def degree(self) -> int:
        return self.terms[0].degree


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        known = {g.name: g for g in self.generators}
        if len(known) != len(self.generators):
            raise ValueError("duplicate generator names")
        for rel in self.relations:
            for t in rel.terms:
                for g in (t.outer, t.inner):
                    if known.get(g.name) != g:
                        raise ValueError(f"relation {rel.name!r} uses undeclared generator {g.name!r}")

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"no generator {name!r} in presentation {self.name!r}")

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(f"no relation {name!r} in presentation {self.name!r}")


def term(coefficient, outer, inner, slot, perm=None) -> RelationTerm:
    r = outer.arity + inner.arity - 1
    return RelationTerm(Q(coefficient), outer, inner, slot, perm or identity_perm(r))


def _associativity(mu: Generator) -> Relation:
    return Relation("associativity", (term(1, mu, mu, 1), term(-1, mu, mu, 2)))


def _jacobi(l: Generator) -> Relation:
    return Relation("jacobi", (
        term(1, l, l, 1),
        term(1, l, l, 1, cycles(3, (1, 2, 3))),
        term(1, l, l, 1, cycles(3, (3, 2, 1))),
    ))


def builtin(name: str) -> Presentation:
    """One of ``assoc``, ``com``, ``lie``, ``gerstenhaber``, ``hypercom3``."""
    if name == "assoc":
        mu = Generator("mu", 2, 0)
        return Presentation("assoc", (mu,), (_associativity(mu),))
    if name == "com":
        c = Generator("c", 2, 0, Symmetry.SYMMETRIC)
        return Presentation("com", (c,), (_associativity(c),))
    if name == "lie":
        l = Generator("l", 2, 0, Symmetry.ANTISYMMETRIC)
        return Presentation("lie", (l,), (_jacobi(l),))
    if name == "gerstenhaber":
        c = Generator("c", 2, 0, Symmetry.SYMMETRIC)
        l = Generator("l", 2, 1, Symmetry.SYMMETRIC)
        gerst = Relation("gerstenhaber", (
            term(1, l, c, 2),
            term(-1, c, l, 1),
            term(-1, c, l, 2, cycles(3, (1, 2))),
        ))
        return Presentation("gerstenhaber", (c, l), (_associativity(c), _jacobi(l), gerst))
    if name == "hypercom3":
        m2 = Generator("m2", 2, 0, Symmetry.SYMMETRIC)
        m3 = Generator("m3", 3, 2, Symmetry.SYMMETRIC)
        rel = Relation("hypercommutative", (
            term(1, m3, m2, 1),
            term(1, m2, m3, 1, cycles(4, (3, 4))),
            term(-1, m3, m2, 2),
            term(-1, m2, m3, 2),
        ))
        return Presentation("hypercom3", (m2, m3), (rel,))
    raise KeyError(f"unknown builtin presentation {name!r}")


BUILTINS = ("assoc", "com", "lie", "gerstenhaber", "hypercom3")
