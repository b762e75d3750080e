import random
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_W1, inversions
from period_ledger.hecke_cm import InfinityType
from period_ledger.symlaurent import DomainError
from period_ledger.weights import (
    CompactShape,
    WeightVector,
    WeylElem,
    conj_weight,
    dot_action,
    dual_weight,
    enumerate_W1,
    flat,
    hodge_decomposition_indices,
    hodge_pq,
    identity,
    in_W1,
    is_dominant,
    is_self_conjugate,
    lambda_flat,
    length,
    longest,
    longest_compact,
    longest_coset,
    mu_of_eta,
    xi,
)


def W(*rows, a0=0):
    return WeightVector.of(rows, a0)


def shapes(n_max=5, e_max=2):
    for n in range(1, n_max + 1):
        for e in range(1, e_max + 1):
            for rs in product(range(n + 1), repeat=e):
                yield CompactShape(tuple((r, n - r) for r in rs))


def random_dominant(rng, shape, lo=-4, hi=4):
    return WeightVector.of(
        [sorted((rng.randint(lo, hi) for _ in range(shape.n)), reverse=True) for _ in range(shape.e)],
        rng.randint(-3, 3),
    )


def random_self_conjugate(rng, shape):
    rows = []
    for _ in range(shape.e):
        half = sorted((rng.randint(0, 5) for _ in range(shape.n // 2)), reverse=True)
        rows.append(half + [0] * (shape.n % 2) + [-x for x in reversed(half)])
    return WeightVector.of(rows, rng.randint(-3, 3))


def test_xi_examples():
    assert xi(W((0, 0, 0), a0=4)) == 8
    assert xi(W((1, 0, -1))) == 0
    assert xi(W((2, 1), a0=3)) == 9


def test_dominance_examples():
    s21 = CompactShape(((2, 1),))
    assert is_dominant(W((3, 1, 0)), s21)
    assert not is_dominant(W((1, 3, 0)), s21)
    assert not is_dominant(W((1, 3, 0)), s21, "compact")
    assert is_dominant(W((1, 3)), CompactShape(((1, 1),)), "compact")


def test_conjugate_and_dual_examples():
    assert conj_weight(W((1, -1))) == W((1, -1))
    assert conj_weight(W((2, 1))) == W((-1, -2), a0=3)
    assert conj_weight(W((0, 0, 0), a0=5)) == W((0, 0, 0), a0=5)
    assert dual_weight(W((2, 1), a0=1)) == W((-1, -2), a0=-1)


def test_w1_examples():
    assert enumerate_W1(CompactShape(((3, 0),))) == [identity(CompactShape(((3, 0),)))]
    s21 = CompactShape(((2, 1),))
    assert sorted(length(w) for w in enumerate_W1(s21)) == [0, 1, 2]
    assert len(enumerate_W1(CompactShape(((2, 2),)))) == 6


@pytest.mark.parametrize("shape", list(shapes()), ids=lambda s: str(s.places))
def test_w1_count_and_membership(shape):
    elems = enumerate_W1(shape)
    expected = 1
    for r, _ in shape.places:
        expected *= comb(shape.n, r)
    assert len(elems) == expected == shape.coset_count()
    assert len(set(elems)) == len(elems)
    per_place = [brute_force_W1(shape.n, r) for r, _ in shape.places]
    assert {w.perms for w in elems} == set(product(*per_place))


@pytest.mark.parametrize("shape", list(shapes(4, 2)), ids=lambda s: str(s.places))
def test_flat_involution_and_length(shape):
    d = shape.d
    for w in enumerate_W1(shape):
        f = flat(w, shape)
        assert in_W1(f, shape)
        assert flat(f, shape) == w
        assert length(f) == d - length(w)
        assert length(w) == sum(inversions(p) for p in w.perms)


def test_length_examples():
    s = CompactShape(((2, 1),))
    assert length(identity(s)) == 0
    assert length(longest(CompactShape(((3, 0),)))) == 3
    assert length(longest_coset(s)) == s.d == 2
    assert flat(longest(s), s) == longest_compact(s)
    assert flat(identity(s), s) == longest_coset(s)


def test_dot_action_examples():
    s = CompactShape(((1, 1),))
    swap = WeylElem(((2, 1),))
    assert dot_action(identity(s), W((1, -1)), s) == W((1, -1))
    assert dot_action(swap, W((1, -1)), s) == W((-2, 2))


def test_lambda_flat_examples():
    assert lambda_flat(W((1, -1)), CompactShape(((1, 1),))) == W((-2, 2))
    s = CompactShape(((2, 3),))
    assert lambda_flat(W((0,) * 5), s) == W((-3, -3, 2, 2, 2))
    with pytest.raises(DomainError):
        lambda_flat(W((0, 1, 0)), CompactShape(((2, 1),)))


def test_hodge_pq_examples():
    assert hodge_pq(W((1, -1)), CompactShape(((1, 1),))) == (-1, 1)
    assert hodge_pq(W((0, 0)), CompactShape(((1, 1),))) == (0, 0)
    assert hodge_pq(W((0, 0), a0=3), CompactShape(((1, 1),))) == (-3, -3)


def test_mu_of_eta_examples():
    assert mu_of_eta(InfinityType.from_pairs([(1, 0)]), 2) == W((1, 1))
    assert mu_of_eta(InfinityType.from_pairs([(0, 0)]), 2) == W((0, 0))
    assert mu_of_eta(InfinityType.from_pairs([(2, -2)]), 3) == W((4, 4, 4), a0=-6)


@pytest.mark.parametrize("shape", list(shapes(4, 1)), ids=lambda s: str(s.places))
def test_dot_action_lands_in_compact_dominant(shape):
    rng = random.Random(shape.n * 10 + shape.places[0][0])
    for _ in range(10):
        mu = random_dominant(rng, shape)
        assert dot_action(identity(shape), mu, shape) == mu
        for w in enumerate_W1(shape):
            moved = dot_action(w, mu, shape)
            assert is_dominant(moved, shape, "compact")
            assert xi(moved) == xi(mu)


def test_flat_commutes_with_dot_action_on_self_conjugate_weights():
    rng = random.Random(20240601)
    pool = [s for s in shapes(4, 2) if s.d > 0]
    for _ in range(100):
        shape = rng.choice(pool)
        mu = random_self_conjugate(rng, shape)
        assert is_self_conjugate(mu)
        for w in enumerate_W1(shape):
            assert lambda_flat(dot_action(w, mu, shape), shape) == dot_action(flat(w, shape), mu, shape)


def test_hodge_indices_worked_example():
    s = CompactShape(((2, 1),))
    rows = hodge_decomposition_indices(W((1, 0, -1)), s, 2)
    assert len(rows) == 3
    assert len({r.p for r in rows}) == 3
    assert all(r.p + r.q == 2 for r in rows)
    single = hodge_decomposition_indices(W((2, 0)), CompactShape(((2, 0),)), 0)
    assert len(single) == 1 and single[0].q == -xi(W((2, 0))) - single[0].p


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 4), st.randoms(use_true_random=False))
def test_middle_degree_types_pair_with_flat(n, r, rng):
    r = min(r, n)
    shape = CompactShape(((r, n - r),))
    mu = random_self_conjugate(rng, shape)
    # raises internally when q disagrees with p of the flat component
    rows = hodge_decomposition_indices(mu, shape, shape.d)
    assert all(row.p + row.q == shape.d - xi(mu) for row in rows)
