"""
DG algebras over a quadratic presentation.

Each generator is realized by a sparse table on basis tuples; evaluation
extends it multilinearly.  Validators are exhaustive over all basis tuples
but only visit tuples where some summand can be nonzero.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graded import GradedComplex, HVector, check_differential
from .operads import (
    Generator,
    Presentation,
    Relation,
    RelationTerm,
    Symmetry,
    alpha_sign,
    beta_sign,
    composite_sign,
    gamma_sign,
    perm_parity,
    permute,
)
from .reports import CheckReport


def _sign(parity: int) -> int:
    return -1 if parity % 2 else 1


class MultilinearOp:
    """A generator's structure map: basis-name tuples -> output vectors."""

    def __init__(self, generator: Generator, table: Mapping[tuple, HVector]):
        self.generator = generator
        self.table = {}
        for key, val in table.items():
            key = tuple(key)
            if len(key) != generator.arity:
                raise ValueError(f"{generator.name}: entry {key} has the wrong arity")
            if val:
                self.table[key] = val

    def with_entry(self, key: tuple, value: HVector) -> "MultilinearOp":
        table = dict(self.table)
        table[tuple(key)] = value
        return MultilinearOp(self.generator, table)


def symmetry_sign(gen: Generator, degrees: Sequence[int], sigma: Sequence[int]) -> int:
    """``s`` with ``mu(x permuted by sigma) = s * mu(x)`` for a symmetric-tagged generator."""
    s = _sign(alpha_sign(degrees, sigma))
    if gen.symmetry is Symmetry.ANTISYMMETRIC:
        s *= _sign(perm_parity(sigma))
    return s


def expand_orbits(gen: Generator, table: Mapping[tuple, HVector], degree_of) -> dict:
    """Fill in every ordering of each entry through the equivariance rule."""
    if gen.symmetry is Symmetry.NONE:
        return dict(table)
    out: dict[tuple, HVector] = {}
    for key, val in table.items():
        degs = [degree_of(n) for n in key]
        for sigma in itertools.permutations(range(gen.arity)):
            u = tuple(permute(key, sigma))
            v = symmetry_sign(gen, degs, sigma) * val
            if u in out and out[u] != v:
                raise ValueError(f"{gen.name}: entries for {key} and {u} disagree")
            out[u] = v
    return out


class DgAlgebra:
    def __init__(self, complex: GradedComplex, presentation: Presentation,
                 ops: Mapping[str, MultilinearOp], name: str = ""):
        self.complex = complex
        self.presentation = presentation
        self.name = name
        self.ops = dict(ops)
        basis = complex.basis
        for g in presentation.generators:
            if g.name not in self.ops:
                raise ValueError(f"no structure map for generator {g.name!r}")
        for gname, op in self.ops.items():
            g = presentation.generator(gname)
            if op.generator != g:
                raise ValueError(f"structure map for {gname!r} has a different generator")
            for key, val in op.table.items():
                for n in key:
                    if n not in basis:
                        raise ValueError(f"{gname}{key}: unknown basis element {n!r}")
                expected = g.degree + sum(basis.degree(n) for n in key)
                if val.degree != expected:
                    raise ValueError(f"{gname}{key} has degree {val.degree}, expected {expected}")
                for n in val.coeffs:
                    if n not in basis or basis.degree(n) != expected:
                        raise ValueError(f"{gname}{key}: output is not homogeneous")

    @property
    def basis(self):
        return self.complex.basis

    def d(self, v: HVector) -> HVector:
        return self.complex.d(v)

    def unit(self, name: str) -> HVector:
        return self.basis.unit(name)

    def replace_op(self, op: MultilinearOp) -> "DgAlgebra":
        ops = dict(self.ops)
        ops[op.generator.name] = op
        return DgAlgebra(self.complex, self.presentation, ops, self.name)

    def replace_complex(self, complex: GradedComplex) -> "DgAlgebra":
        return DgAlgebra(complex, self.presentation, self.ops, self.name)

    # evaluation

    def evaluate(self, gen: str, args: Sequence[HVector]) -> HVector:
        op = self.ops.get(gen)
        if op is None:
            raise KeyError(f"no operation {gen!r}")
        g = op.generator
        if len(args) != g.arity:
            raise ValueError(f"{gen} takes {g.arity} arguments, got {len(args)}")
        degree = g.degree + sum(a.degree for a in args)
        out: dict[str, Fraction] = defaultdict(Fraction)
        if all(args):
            for combo in itertools.product(*(tuple(a.items()) for a in args)):
                val = op.table.get(tuple(n for n, _ in combo))
                if val is None:
                    continue
                coef = Fraction(1)
                for _, c in combo:
                    coef *= c
                for k, c in val.items():
                    out[k] += coef * c
        return HVector(degree, out)

    def evaluate_term(self, term: RelationTerm, args: Sequence[HVector],
                      substitute: HVector | None = None) -> HVector:
        """
        One summand of a relation on ``args``.

        Without ``substitute`` this is the signed composite
        ``coefficient * (outer o_slot inner) . perm`` applied to ``args``.
        With ``substitute`` the inner value is replaced by that chain and the
        sign is ``gamma``, as in a Massey representative.
        """
        if len(args) != term.arity:
            raise ValueError(f"term takes {term.arity} arguments, got {len(args)}")
        degs = [a.degree for a in args]
        u = permute(list(args), term.perm)
        lo = term.slot - 1
        hi = lo + term.inner.arity
        if substitute is None:
            middle = self.evaluate(term.inner.name, u[lo:hi])
            parity = composite_sign(term, degs)
        else:
            middle = substitute
            parity = gamma_sign(term, degs)
        val = self.evaluate(term.outer.name, u[:lo] + [middle] + u[hi:])
        return (_sign(parity) * term.coefficient) * val

    def inner_value(self, term: RelationTerm, args: Sequence[HVector]) -> HVector:
        u = permute(list(args), term.perm)
        lo = term.slot - 1
        return self.evaluate(term.inner.name, u[lo:lo + term.inner.arity])

    def relation_value(self, relation: Relation, args: Sequence[HVector]) -> HVector:
        out = HVector(relation.degree + sum(a.degree for a in args))
        for t in relation.terms:
            out = out + self.evaluate_term(t, args)
        return out

    # validators

    def check_derivation(self, gen: str, tuples: Iterable[tuple] | None = None,
                         beta=beta_sign) -> CheckReport:
        """``d mu(e) = sum_s (-1)^beta mu(e_1, ..., d e_s, ..., e_r)`` on basis tuples."""
        g = self.ops[gen].generator
        report = CheckReport(f"derivation[{gen}]")
        if tuples is None:
            tuples = self._derivation_candidates(gen)
        for t in tuples:
            report.checked += 1
            args = [self.unit(n) for n in t]
            degs = [a.degree for a in args]
            lhs = self.d(self.evaluate(gen, args))
            rhs = HVector(lhs.degree)
            for s in range(g.arity):
                ds = self.d(args[s])
                if ds:
                    rest = args[:s] + [ds] + args[s + 1:]
                    rhs = rhs + _sign(beta(g.degree, degs, s + 1)) * self.evaluate(gen, rest)
            if lhs != rhs:
                report.fail(",".join(t), f"d {gen}(...) - sum = {lhs - rhs!r}")
        return report

    def _derivation_candidates(self, gen: str) -> list[tuple]:
        table = self.ops[gen].table
        preimages = defaultdict(set)
        for e, de in self.complex.differential.items():
            for b in de.coeffs:
                preimages[b].add(e)
        cands = set(table)
        for key in table:
            for s, b in enumerate(key):
                for e in preimages.get(b, ()):
                    cands.add(key[:s] + (e,) + key[s + 1:])
        order = {n: i for i, n in enumerate(self.basis.names)}
        return sorted(cands, key=lambda t: [order[n] for n in t])

    def check_symmetry(self, gen: str) -> CheckReport:
        op = self.ops[gen]
        g = op.generator
        report = CheckReport(f"symmetry[{gen}]")
        if g.symmetry is Symmetry.NONE:
            return report
        for key, val in sorted(op.table.items()):
            degs = [self.basis.degree(n) for n in key]
            for sigma in itertools.permutations(range(g.arity)):
                report.checked += 1
                u = tuple(permute(key, sigma))
                expected = symmetry_sign(g, degs, sigma) * val
                got = op.table.get(u, HVector(val.degree))
                if got != expected:
                    report.fail(",".join(u), f"{gen}{u} = {got!r}, equivariance requires {expected!r}")
        return report

    def relation_tensor(self, relation: Relation) -> dict[tuple, HVector]:
        """All nonzero values of the relation on basis tuples, by sparse composition."""
        basis = self.basis
        acc: dict[tuple, dict] = defaultdict(lambda: defaultdict(Fraction))
        for t in relation.terms:
            outer = self.ops[t.outer.name].table
            inner = self.ops[t.inner.name].table
            lo = t.slot - 1
            by_slot = defaultdict(list)
            for okey, w in outer.items():
                by_slot[okey[lo]].append((okey, w))
            for ikey, v in inner.items():
                for b, cb in v.items():
                    for okey, w in by_slot.get(b, ()):
                        u = okey[:lo] + ikey + okey[lo + 1:]
                        x = tuple(u[t.perm[j]] for j in range(t.arity))
                        degs = [basis.degree(n) for n in x]
                        coef = _sign(composite_sign(t, degs)) * t.coefficient * cb
                        slot = acc[x]
                        for k, c in w.items():
                            slot[k] += coef * c
        out = {}
        for x, coeffs in acc.items():
            deg = relation.degree + sum(basis.degree(n) for n in x)
            v = HVector(deg, coeffs)
            if v:
                out[x] = v
        return out

    def check_relation(self, relation: Relation | str,
                       tuples: Iterable[tuple] | None = None) -> CheckReport:
        """The relation vanishes on every basis tuple (or on the given tuples)."""
        if isinstance(relation, str):
            relation = self.presentation.relation(relation)
        report = CheckReport(f"relation[{relation.name}]")
        if tuples is None:
            report.checked = len(self.basis) ** relation.arity
            for x, v in sorted(self.relation_tensor(relation).items()):
                report.fail(",".join(x), f"residual {v!r}")
            return report
        for x in tuples:
            report.checked += 1
            v = self.relation_value(relation, [self.unit(n) for n in x])
            if v:
                report.fail(",".join(x), f"residual {v!r}")
        return report

    def validate(self, relation_scope: Mapping[str, list] | None = None) -> list[CheckReport]:
        """Differential, derivation, symmetry and relation checks."""
        relation_scope = relation_scope or {}
        reports = [check_differential(self.complex)]
        if not reports[0].ok:
            return reports
        for g in self.presentation.generators:
            reports.append(self.check_derivation(g.name))
        for g in self.presentation.generators:
            if g.symmetry is not Symmetry.NONE:
                reports.append(self.check_symmetry(g.name))
        for rel in self.presentation.relations:
            reports.append(self.check_relation(rel, relation_scope.get(rel.name)))
        return reports


def substituted_inputs(term: RelationTerm, args: Sequence, payload) -> list:
    """Outer-operation arguments of a term with ``payload`` in the slot."""
    u = permute(list(args), term.perm)
    lo = term.slot - 1
    return u[:lo] + [payload] + u[lo + term.inner.arity:]


__all__ = [
    "DgAlgebra",
    "MultilinearOp",
    "expand_orbits",
    "substituted_inputs",
    "symmetry_sign",
]
