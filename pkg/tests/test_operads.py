
import pytest
from hypothesis import given, settings, strategies as st

from opmassey import operads as op
from opmassey.operads import (
    Generator,
    Relation,
    alpha_sign,
    beta_sign,
    builtin,
    compose_perm,
    cycles,
    gamma_sign,
    permute,
    term,
)


def koszul_by_reordering(degrees, sigma):
    """Bubble-sort the symbols into their target positions, one sign per odd-odd swap."""
    items = list(zip(sigma, degrees))
    parity = 0
    for _ in range(len(items)):
        for k in range(len(items) - 1):
            (ta, da), (tb, db) = items[k], items[k + 1]
            if ta > tb:
                items[k], items[k + 1] = items[k + 1], items[k]
                parity += da * db
    return parity % 2


perms = st.integers(1, 6).flatmap(lambda n: st.permutations(list(range(n))))


def test_alpha_examples():
    assert alpha_sign([1, 1, 1], (0, 1, 2)) == 0
    assert alpha_sign([1, 1], cycles(2, (1, 2))) == 1
    assert alpha_sign([0, 1], cycles(2, (1, 2))) == 0
    degs = [2, 1, 1, 3]
    sigma = cycles(4, (3, 4))
    assert alpha_sign(degs, sigma) == koszul_by_reordering(degs, sigma) == 1


@settings(max_examples=200, deadline=None)
@given(perms, st.data())
def test_alpha_matches_reordering_oracle(sigma, data):
    degs = data.draw(st.lists(st.integers(-4, 4), min_size=len(sigma), max_size=len(sigma)))
    assert alpha_sign(degs, sigma) == koszul_by_reordering(degs, sigma)


@settings(max_examples=200, deadline=None)
@given(perms, st.data())
def test_alpha_composes(sigma, data):
    n = len(sigma)
    tau = tuple(data.draw(st.permutations(list(range(n)))))
    degs = data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n))
    lhs = alpha_sign(degs, compose_perm(sigma, tau))
    rhs = (alpha_sign(degs, tau) + alpha_sign(permute(degs, tau), sigma)) % 2
    assert lhs == rhs
    assert permute(permute(list(range(n)), tau), sigma) == permute(list(range(n)), compose_perm(sigma, tau))


def test_permutation_helpers():
    c = cycles(3, (1, 2, 3))
    assert op.to_images(c) == [2, 3, 1]
    assert op.from_images([2, 3, 1]) == c
    assert permute(["a", "b", "c"], c) == ["c", "a", "b"]
    assert op.compose_perm(c, op.inverse_perm(c)) == op.identity_perm(3)
    assert op.perm_parity(c) == 0
    with pytest.raises(ValueError):
        op.from_images([1, 1])


def test_beta_examples():
    assert beta_sign(0, [1, 3], 1) == 0
    assert beta_sign(2, [1, 3], 1) == 0
    assert beta_sign(0, [1, 1, 1], 3) == 0
    assert beta_sign(1, [1, 1, 1], 2) == 0
    with pytest.raises(ValueError):
        beta_sign(0, [1], 2)


def test_gamma_empty_prefix():
    mu = Generator("mu", 2, 0)
    assert gamma_sign(term(1, mu, mu, 1), [1, 1, 1]) == 0


def test_gamma_gerstenhaber_terms():
    terms = builtin("gerstenhaber").relation("gerstenhaber").terms
    degs = [-2, -1, -1]
    assert [gamma_sign(t, degs) for t in terms] == [1, 0, 0]


def test_gamma_associativity_second_term():
    t = builtin("assoc").relation("associativity").terms[1]
    assert gamma_sign(t, [1, 0, 0]) == 1
    assert gamma_sign(t, [-1, 4, 2]) == 1
    assert gamma_sign(t, [2, 1, 1]) == 0


def test_builtin_assoc():
    P = builtin("assoc")
    assert len(P.generators) == 1 and len(P.relations) == 1
    assert P.relations[0].arity == 3 and P.relations[0].degree == 0


def test_builtin_gerstenhaber():
    rel = builtin("gerstenhaber").relation("gerstenhaber")
    assert len(rel.terms) == 3
    assert [t.slot for t in rel.terms] == [2, 1, 2]
    assert [op.to_images(t.perm) for t in rel.terms] == [[1, 2, 3], [1, 2, 3], [2, 1, 3]]
    assert rel.degree == 1


def test_builtin_hypercom3_degrees():
    P = builtin("hypercom3")
    rel = P.relation("hypercommutative")
    assert rel.degree == 2 and rel.arity == 4
    # <vw, vx, x, x>: cohomological degrees 2, 2, 1, 1
    inputs = [-2, -2, -1, -1]
    assert rel.degree + sum(inputs) + 1 == -3


@pytest.mark.parametrize("name", op.BUILTINS)
def test_builtins_homogeneous(name):
    P = builtin(name)
    for rel in P.relations:
        assert len({t.arity for t in rel.terms}) == 1
        assert len({t.degree for t in rel.terms}) == 1


def test_inhomogeneous_relation_rejected():
    a = Generator("a", 2, 0)
    b = Generator("b", 2, 1)
    with pytest.raises(ValueError):
        Relation("bad", (term(1, a, a, 1), term(1, a, b, 1)))
    with pytest.raises(ValueError):
        term(1, a, a, 3)
    with pytest.raises(ValueError):
        op.Presentation("p", (a,), (Relation("r", (term(1, a, b, 1),)),))
    with pytest.raises(KeyError):
        builtin("nope")


def test_inner_inputs():
    t = builtin("hypercom3").relation("hypercommutative").terms[1]
    # (m2 o_1 m3).(34): inputs 1, 2, 4 feed m3
    assert t.inner_inputs() == [0, 1, 3]
    assert list(t.inner_positions()) == [0, 1, 2]
