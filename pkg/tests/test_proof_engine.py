import random

import pytest
from hypothesis import given, settings, strategies as st

from period_ledger import proof_engine as pe
from period_ledger.critical_values import admissible_m_range, assign_signatures, critical_set, profile_from_gl_weights
from period_ledger.hecke_cm import chi_from_psi
from period_ledger.ledger import lattice_check, sym
from period_ledger.symlaurent import DomainError
from period_ledger.weights import CompactShape, WeightVector, xi as weight_xi


@pytest.mark.parametrize("d,r,s", [(3, 1, 2), (2, 0, 2), (4, 1, 3), (8, 3, 5)])
def test_duality_examples(d, r, s):
    assert pe.verify_duality_lemma(d, r, s).passed


@pytest.mark.parametrize("d,r,s", [(4, 2, 2), (4, 3, 1), (3, 1, 1)])
def test_duality_preconditions(d, r, s):
    with pytest.raises(DomainError):
        pe.verify_duality_lemma(d, r, s)


def test_duality_needs_the_pairing_axioms():
    rep = pe.verify_duality_lemma(4, 1, 3)
    stripped = rep.derivation.without("frobenius_pairing")
    assert not stripped.check().member


@pytest.mark.parametrize("args", [(2, 1, 1, True), (3, 2, 1, False), (5, 2, -1, True), (1, 0, -1, False)])
def test_cplus_cminus_examples(args):
    rep = pe.verify_cplus_cminus(*args)
    assert rep.passed, rep.failed_steps()
    assert any(s.name.startswith("determinant") for s in rep.steps)
    assert any(s.name.startswith("ledger") for s in rep.steps)


def test_cplus_cminus_wrong_delta_power_fails():
    rep = pe.verify_cplus_cminus(3, 2, 1, False)
    bumped = rep.derivation.retarget(rep.derivation.target * sym("DeltaA(A,sigma1)"))
    verdict = bumped.check()
    assert not verdict.member and not verdict.residual.is_one()


@pytest.mark.parametrize("args", [(2, 1, 2), (3, 2, 2), (3, 2, 3), (4, 2, 3), (1, 1, 1)])
def test_thmfact_examples(args):
    rep = pe.verify_thmfact(*args)
    assert rep.passed, rep.failed_steps()


@pytest.mark.parametrize("args", [(4, 2, 2), (3, 2, 1), (2, 1, 3)])
def test_thmfact_preconditions(args):
    with pytest.raises(DomainError):
        pe.verify_thmfact(*args)


def test_thmfact_without_rm_relations_fails_at_the_ledger_step():
    rep = pe.verify_thmfact(3, 2, 2)
    broken = rep.derivation.without("c_from_a")
    assert not broken.check().member


def test_thmfact_a_star_matters_for_odd_rank():
    rep = pe.verify_thmfact(3, 2, 2)
    swapped = rep.derivation.target * sym("aPM(chi,sigma1,-)") / sym("aPM(chi,sigma1,+)")
    # a-(chi) ~ e_tau a+(chi), so swapping the sign is invisible up to units
    assert rep.derivation.retarget(swapped).check().member
    assert not rep.derivation.retarget(rep.derivation.target * sym("aPM(chi,sigma1,+)")).check().member


def test_dS_examples():
    v = pe.evaluate_dS(3, 4, 1)
    assert (v.expr["DiscKHalf"], v.expr["DeltaEpsL"], v.expr["TwoPiI"]) == (2, 1, 21)
    assert v.factors == ((8, "even"), (7, "odd"), (6, "even"))
    v = pe.evaluate_dS(1, 2, 1)
    assert (v.expr["DiscKHalf"], v.expr.get("DeltaEpsL"), v.expr["TwoPiI"]) == (1, 0, 4)
    v = pe.evaluate_dS(2, 3, 2)
    assert (v.expr["DiscKHalf"], v.expr["DeltaEpsL"], v.expr["TwoPiI"]) == (1, 1, 22)
    with pytest.raises(DomainError):
        pe.evaluate_dS(3, 3)


def test_maintheorem_worked_exponent():
    rep = pe.derive_maintheorem(3, 1, 4, 0, CompactShape(((2, 1),)))
    assert rep.passed
    assert rep.derivation.target["TwoPiI"] == -9


@pytest.mark.parametrize("xi", [-4, 2, 6])
def test_maintheorem_xi_shift(xi):
    base = pe.derive_maintheorem(3, 1, 4, 0).derivation.target
    shifted = pe.derive_maintheorem(3, 1, 4, xi)
    assert shifted.passed
    assert shifted.derivation.target["TwoPiI"] - base["TwoPiI"] == xi


def test_maintheorem_negative_controls():
    rep = pe.derive_maintheorem(4, 2, 6)
    assert not rep.derivation.without("holomorphic_antiholomorphic").check().member
    for delta in (1, -1):
        bumped = rep.derivation.retarget(rep.derivation.target * sym("DiscKHalf", delta))
        v = bumped.check()
        assert not v.member and v.residual
    controls = pe.negative_controls(rep.derivation)
    assert controls and all(not v.member for _, v in controls)


def test_maintheorem_requires_m_above_n():
    with pytest.raises(DomainError):
        pe.derive_maintheorem(3, 1, 3)


def test_full_discriminant_variant_needs_galois_inputs():
    rep = pe.derive_maintheorem(3, 2, 5, variant="full-discriminant")
    assert rep.passed
    assert not rep.derivation.without("global_delta[epsL]").check().member


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("e", [1, 2, 3])
def test_boundary_unit(n, e):
    rep = pe.derive_boundary_unit(n, e)
    assert rep.passed, rep.failed_steps()
    grades = {a.grade for a in rep.derivation.axioms}
    assert ("conjecture" in grades) == (n % 2 == 1)


def _tuples(count, seed=5, **kw):
    rng = random.Random(seed)
    return [pe.random_theorem_grade_tuple(rng, **kw) for _ in range(count)]


def test_generated_tuples_are_theorem_grade():
    for t in _tuples(25):
        assert t.m > t.n
        profile = profile_from_gl_weights(t.weights.rows, t.n)
        chi = chi_from_psi(t.psi)
        crit = critical_set(profile, chi, assign_signatures(profile, chi))
        assert t.m + t.w in crit.values()
        assert t.m in admissible_m_range(t.weights, t.psi.infinity, t.shape).theorem_values()


def test_prediction_on_random_tuples():
    for t in _tuples(15, seed=9):
        rep = pe.derive_prediction(t.n, t.e, t.w, t.m, t.shape, True, t.weights, t.psi)
        assert rep.passed, (t, rep.failed_steps())
        off = pe.derive_prediction(t.n, t.e, t.w, t.m, t.shape, False, t.weights, t.psi)
        assert not off.passed
        assert any(name.startswith("cPM(X(") for name in off.verdict.residual)


def test_prediction_discriminant_control():
    t = _tuples(1, seed=21, n=3, e=1)[0]
    rep = pe.derive_prediction(t.n, t.e, t.w, t.m, t.shape, True, t.weights, t.psi)
    dropped = rep.derivation.target * sym("DiscKHalf", t.n)
    strict = rep.derivation.retarget(dropped)
    assert not strict.check().member
    assert lattice_check(dropped, rep.derivation.axioms, "E_PSI_E_LGAL").member


def test_prediction_rejects_non_critical_m():
    t = _tuples(1, seed=2)[0]
    bad_m = max(admissible_m_range(t.weights, t.psi.infinity, t.shape).values()) + 1
    with pytest.raises(DomainError):
        pe.derive_prediction(t.n, t.e, t.w, bad_m, t.shape, True, t.weights, t.psi)


@pytest.mark.parametrize("shape", [((1, 1),), ((2, 0),), ((2, 1), (1, 2)), ((3, 0), (0, 3))])
def test_tate_equivalence(shape):
    cs = CompactShape(shape)
    for rename in (False, True):
        rep = pe.check_tate_equivalence(cs.n, cs.e, cs, rename)
        assert rep.passed and len(rep.steps) == 2


def test_tate_equivalence_needs_boundary_unit():
    cs = CompactShape(((2, 1),))
    rep = pe.check_tate_equivalence(3, 1, cs)
    assert not rep.derivation.without("boundary_unit").check().member


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(1, 3),
    st.integers(-5, 12),
    st.integers(-4, 4),
    st.integers(-5, 5),
    st.lists(st.integers(0, 6), min_size=3, max_size=3),
)
def test_exponent_routes_agree(n, e, m, w, a0, rs):
    shape = CompactShape(tuple((min(r, n), n - min(r, n)) for r in rs[:e]))
    rows = []
    for k in range(e):
        half = sorted((rs[(k + i) % 3] for i in range(n // 2)), reverse=True)
        rows.append(half + [0] * (n % 2) + [-x for x in reversed(half)])
    mu = WeightVector.of(rows, a0)
    assert pe.intro_theorem1_exponent(n, e, m, a0) == pe.maintheorem_exponent(n, e, m, weight_xi(mu))
    assert pe.intro_theorem2_exponent(e, m, n, w, shape) == pe.critical_shift_exponent(e, m, n, w, shape)


def test_exponent_routes_differ_without_self_duality():
    mu = WeightVector.of([(2, 0, 0)], 1)
    assert pe.intro_theorem1_exponent(3, 1, 4, 1) != pe.maintheorem_exponent(3, 1, 4, weight_xi(mu))


def test_reports_are_deterministic():
    a = pe.verify_thmfact(3, 2, 2).as_dict()
    b = pe.verify_thmfact(3, 2, 2).as_dict()
    assert a == b and "wall_time" not in a
    assert "wall_time" in pe.verify_thmfact(3, 2, 2).as_dict(timing=True)
