import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from opmassey.dgalg import DgAlgebra, MultilinearOp, expand_orbits
from opmassey.graded import GradedBasis, GradedComplex, HVector
from opmassey.operads import (
    beta_sign,
    builtin,
    composite_sign,
    cycles,
    gamma_sign,
    term,
)


def sgn(parity):
    return -1 if parity % 2 else 1


def random_vector(alg, degree, rng):
    return HVector(degree, {n: rng.randint(-3, 3) for n in alg.basis.in_degree(degree)})


def so3():
    pres = builtin("lie")
    l = pres.generator("l")
    basis = GradedBasis([("e1", 0), ("e2", 0), ("e3", 0)])
    table = {}
    for a, b, c in (("e1", "e2", "e3"), ("e2", "e3", "e1"), ("e3", "e1", "e2")):
        table[(a, b)] = HVector(0, {c: 1})
    table = expand_orbits(l, table, basis.degree)
    return DgAlgebra(GradedComplex(basis, {}), pres, {"l": MultilinearOp(l, table)}, "so3")


def test_evaluate_product(ce):
    assert ce.evaluate("c", [ce.unit("x"), ce.unit("y")]) == HVector(-2, {"xy": 1})
    assert ce.evaluate("c", [ce.unit("y"), ce.unit("x")]) == HVector(-2, {"xy": -1})
    assert not ce.evaluate("c", [HVector(-1), ce.unit("y")])
    with pytest.raises(ValueError):
        ce.evaluate("c", [ce.unit("x")])


def test_bracket_table(gerst):
    def bracket(a, b):
        va, vb = gerst.unit(a), gerst.unit(b)
        return sgn(va.degree) * gerst.evaluate("l", [va, vb])

    assert bracket("z", "x") == HVector(-1, {"x": 1})
    assert bracket("z", "y") == HVector(-1, {"x": 1, "y": 1})
    assert not bracket("x", "y")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_multilinear(seed):
    from opmassey import construct
    alg = construct.heisenberg_gerstenhaber()
    rng = random.Random(seed)
    degs = [rng.choice([0, -1, -2, -3]) for _ in range(2)]
    u, v, w = (random_vector(alg, degs[0], rng) for _ in range(3))
    lam = rng.randint(-5, 5)
    for gen in ("c", "l"):
        lhs = alg.evaluate(gen, [u + lam * v, w])
        rhs = alg.evaluate(gen, [u, w]) + lam * alg.evaluate(gen, [v, w])
        assert lhs == rhs
        w2 = random_vector(alg, degs[1], rng)
        assert alg.evaluate(gen, [w2, u + lam * v]) == alg.evaluate(gen, [w2, u]) + lam * alg.evaluate(gen, [w2, v])


def test_substitute_sign_plumbing(gerst):
    for rel in gerst.presentation.relations:
        for t in rel.terms:
            for names in itertools.product(gerst.basis.names, repeat=t.arity):
                args = [gerst.unit(n) for n in names]
                degs = [a.degree for a in args]
                raw = gerst.evaluate_term(t, args)
                sub = gerst.evaluate_term(t, args, substitute=gerst.inner_value(t, args))
                assert sub == sgn(gamma_sign(t, degs) + composite_sign(t, degs)) * raw


def test_associativity_term_substitution(ce):
    t1 = ce.presentation.relation("associativity").terms[0]
    rho = ce.unit("z")
    args = [ce.unit("x"), ce.unit("x"), ce.unit("y")]
    # first summand contributes +rho * c
    assert ce.evaluate_term(t1, args, substitute=rho) == ce.evaluate("c", [rho, ce.unit("y")])


def test_zero_argument_term(gerst):
    t = gerst.presentation.relation("gerstenhaber").terms[0]
    assert not gerst.evaluate_term(t, [HVector(-1), gerst.unit("x"), gerst.unit("y")])


def test_symmetric_equivalent_terms(gerst):
    c, l = gerst.presentation.generator("c"), gerst.presentation.generator("l")
    a = term(1, c, l, 1)
    b = term(1, c, l, 2, cycles(3, (1, 2, 3)))
    for names in itertools.product(gerst.basis.names, repeat=3):
        args = [gerst.unit(n) for n in names]
        assert gerst.evaluate_term(a, args) == gerst.evaluate_term(b, args)


def test_relation_random_triples(gerst):
    rng = random.Random(5)
    rel = gerst.presentation.relation("gerstenhaber")
    for _ in range(50):
        args = [random_vector(gerst, rng.choice([0, -1, -2, -3]), rng) for _ in range(3)]
        assert not gerst.relation_value(rel, args)


@pytest.mark.parametrize("fixture", ["ce", "gerst"])
def test_sparse_checks_match_brute_force(fixture, request):
    alg = request.getfixturevalue(fixture)
    names = alg.basis.names
    for rel in alg.presentation.relations:
        fast = alg.check_relation(rel)
        slow = alg.check_relation(rel, itertools.product(names, repeat=rel.arity))
        assert fast.ok and slow.ok and fast.checked == slow.checked
    for g in alg.presentation.generators:
        assert alg.check_derivation(g.name).ok
        assert alg.check_derivation(g.name, itertools.product(names, repeat=g.arity)).ok


def test_sparse_relation_finds_every_brute_force_failure(gerst):
    bad = gerst.replace_op(gerst.ops["l"].with_entry(("x", "z"), HVector(-1, {"y": 1})))
    rel = bad.presentation.relation("gerstenhaber")
    fast = {f.where for f in bad.check_relation(rel).failures}
    slow = {f.where for f in bad.check_relation(rel, itertools.product(bad.basis.names, repeat=3)).failures}
    assert fast == slow and fast


def test_derivation_beta_sensitivity(ce):
    assert ce.check_derivation("c").ok
    shifted = ce.check_derivation("c", beta=lambda *a: beta_sign(*a) + 1)
    assert not shifted.ok


def test_corrupted_differential_breaks_derivation(ce):
    diff = dict(ce.complex.differential)
    diff["z"] = HVector(-2, {"xy": 1, "yz": 1})
    bad = ce.replace_complex(GradedComplex(ce.basis, diff))
    assert not bad.check_derivation("c").ok


def test_gerstenhaber_bracket_is_derivation(gerst):
    assert gerst.check_derivation("l").ok


def test_lie_algebra_jacobi():
    alg = so3()
    assert all(r.ok for r in alg.validate())
    bad = alg.replace_op(alg.ops["l"].with_entry(("e1", "e2"), HVector(0, {"e1": 1, "e3": 1}))
                         .with_entry(("e2", "e1"), HVector(0, {"e1": -1, "e3": -1})))
    assert bad.check_symmetry("l").ok
    assert not bad.check_relation("jacobi").ok


def test_symmetry_checks(ce, gerst, hyper):
    assert ce.check_symmetry("c").ok
    assert gerst.check_symmetry("l").ok
    assert hyper.check_symmetry("m3").ok
    bad = ce.replace_op(ce.ops["c"].with_entry(("y", "x"), HVector(-2, {"xy": 1})))
    assert not bad.check_symmetry("c").ok


def test_m3_vanishes_on_repeated_odd(hyper):
    odd = [n for n in hyper.basis.names if hyper.basis.degree(n) % 2]
    for a in hyper.basis.names:
        for x in odd:
            assert not hyper.evaluate("m3", [hyper.unit(a), hyper.unit(x), hyper.unit(x)])


def test_orbit_storage_expands_to_full_table(gerst):
    for gname in ("c", "l"):
        op = gerst.ops[gname]
        reps = {}
        for key, val in op.table.items():
            canon = tuple(sorted(key))
            if canon not in {tuple(sorted(k)) for k in reps}:
                reps[key] = val
        full = expand_orbits(op.generator, reps, gerst.basis.degree)
        assert MultilinearOp(op.generator, full).table == op.table


def test_construction_rejects_bad_degree(ce):
    c = ce.presentation.generator("c")
    with pytest.raises(ValueError):
        DgAlgebra(ce.complex, ce.presentation,
                  {"c": MultilinearOp(c, {("x", "y"): HVector(-1, {"z": 1})})})
    with pytest.raises(ValueError):
        DgAlgebra(ce.complex, ce.presentation, {})


def test_validate_reports_all_checks(gerst):
    checks = [r.check for r in gerst.validate()]
    assert checks == ["differential", "derivation[c]", "derivation[l]", "symmetry[c]", "symmetry[l]",
                      "relation[associativity]", "relation[jacobi]", "relation[gerstenhaber]"]


def test_rescaled_differential_is_still_valid(ce):
    # d(z) = 2xy is the CE algebra of [x, y] = 2z, an isomorphic Lie algebra
    diff = dict(ce.complex.differential)
    diff["z"] = 2 * diff["z"]
    assert all(r.ok for r in ce.replace_complex(GradedComplex(ce.basis, diff)).validate())
