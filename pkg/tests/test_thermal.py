import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entbounds import (
    Alignment,
    DegenerateRegime,
    EntanglementOutOfRange,
    InvalidParameter,
    JointLevels,
    align_max,
    align_min,
    bound_curve,
    bound_energies,
    e_max,
    e_min,
    evaluate_thermal,
    local_energy,
    max_state,
    min_state,
    solve_beta,
)

# entropy of weights (2/3, 1/3)
TWO_THIRDS_ENT = math.log(3) - (2 / 3) * math.log(2)


def joint(levels):
    return JointLevels(tuple(float(x) for x in levels), Alignment.MIN)


def test_two_thirds_constant():
    assert TWO_THIRDS_ENT == pytest.approx(0.636514, abs=1e-6)


def test_evaluate_thermal_uniform_at_zero_beta():
    p = evaluate_thermal(joint([0, 3, 10]), 0.0)
    np.testing.assert_allclose(p.weights, [1 / 3] * 3, atol=1e-15)
    assert p.entropy == pytest.approx(math.log(3), abs=1e-14)
    assert p.mean_energy == pytest.approx(13 / 3, abs=1e-14)
    assert p.lnZ == pytest.approx(math.log(3), abs=1e-14)


def test_evaluate_thermal_ln2():
    p = evaluate_thermal(joint([0, 1]), math.log(2))
    np.testing.assert_allclose(p.weights, [2 / 3, 1 / 3], atol=1e-15)
    assert p.entropy == pytest.approx(TWO_THIRDS_ENT, abs=1e-14)
    assert p.mean_energy == pytest.approx(1 / 3, abs=1e-14)


def test_evaluate_thermal_ground_limit():
    p = evaluate_thermal(joint([0, 3, 10]), 1e3)
    assert p.weights[0] == pytest.approx(1.0)
    assert p.entropy == pytest.approx(0.0, abs=1e-12)
    assert p.mean_energy == pytest.approx(0.0, abs=1e-12)


def test_evaluate_thermal_huge_beta_is_stable():
    p = evaluate_thermal(joint([1000, 2000, 5000]), 1e6)
    assert np.all(np.isfinite(p.weights))
    assert p.mean_energy == 1000.0
    assert p.lnZ == pytest.approx(-1e9)


def test_lnz_unshifted():
    levels = [2.0, 3.5, 7.0]
    beta = 0.7
    p = evaluate_thermal(joint(levels), beta)
    assert p.lnZ == pytest.approx(math.log(sum(math.exp(-beta * e) for e in levels)), abs=1e-13)


@pytest.mark.parametrize("beta", [-0.1, float("nan"), float("inf")])
def test_evaluate_thermal_rejects(beta):
    with pytest.raises(InvalidParameter):
        evaluate_thermal(joint([0, 1]), beta)


def test_solve_beta_examples():
    assert solve_beta(joint([0, 1]), math.log(2)).beta == pytest.approx(0.0, abs=1e-10)
    p = solve_beta(joint([0, 1]), TWO_THIRDS_ENT)
    assert p.beta == pytest.approx(math.log(2), abs=1e-10)
    p = solve_beta(joint([0, 3, 10]), math.log(3))
    assert p.beta == pytest.approx(0.0, abs=1e-10)
    assert p.mean_energy == pytest.approx(13 / 3, abs=1e-10)


def test_solve_beta_errors():
    with pytest.raises(EntanglementOutOfRange):
        solve_beta(joint([0, 1]), math.log(2) + 1e-6)
    with pytest.raises(EntanglementOutOfRange):
        solve_beta(joint([0, 1]), -0.1)
    with pytest.raises(DegenerateRegime):
        solve_beta(joint([0, 0, 1]), math.log(2))
    with pytest.raises(DegenerateRegime):
        solve_beta(joint([0, 1]), 0.0)
    with pytest.raises(InvalidParameter):
        solve_beta(joint([0, 1]), 0.3, tol=0.0)


def test_solve_beta_near_degenerate_edge():
    j = joint([0, 0, 5, 7])
    ent = math.log(2) + 1e-8
    p = solve_beta(j, ent)
    assert abs(p.entropy - ent) <= 1e-12
    assert p.beta > 1


def test_e_min_e_max_ref34(ref34):
    assert e_min(*ref34, 0.0) == (0.0, None)
    assert e_min(*ref34, math.log(3))[0] == pytest.approx(13 / 3, abs=1e-10)
    assert e_max(*ref34, 0.0) == (13.0, None)
    assert e_max(*ref34, math.log(3))[0] == pytest.approx(22 / 3, abs=1e-10)


def test_e_min_e_max_qubits(qubits):
    e, beta = e_min(*qubits, TWO_THIRDS_ENT)
    assert e == pytest.approx(2 / 3, abs=1e-10)
    assert beta == pytest.approx(math.log(2) / 2, abs=1e-10)
    e, beta = e_max(*qubits, TWO_THIRDS_ENT)
    assert e == pytest.approx(4 / 3, abs=1e-10)
    assert beta == pytest.approx(math.log(2) / 2, abs=1e-10)


def test_e_min_qubits_against_root_finder():
    # independent oracle: solve the binary entropy for the larger weight
    brentq = pytest.importorskip("scipy.optimize").brentq
    a, b = [0.0, 0.4], [0.0, 1.3]
    for ent in np.linspace(0.05, math.log(2) - 0.01, 12):
        lam = brentq(lambda x: -x * math.log(x) - (1 - x) * math.log(1 - x) - ent, 0.5, 1 - 1e-15,
                     xtol=1e-15)
        assert e_min(a, b, ent)[0] == pytest.approx((1 - lam) * 1.7, abs=1e-10)
        assert e_max(a, b, ent)[0] == pytest.approx(lam * 1.7, abs=1e-10)


def test_flat_segment_with_degenerate_ground():
    a, b = [0, 0, 5], [0, 0, 0, 1]
    for ent in (0.0, 0.3, math.log(2)):
        assert e_min(a, b, ent) == (0.0, None)
    e, beta = e_min(a, b, math.log(2) + 0.01)
    assert e > 0 and beta > 0


def test_out_of_range(ref34):
    for f in (e_min, e_max):
        with pytest.raises(EntanglementOutOfRange):
            f(*ref34, math.log(3) + 1e-6)
        with pytest.raises(EntanglementOutOfRange):
            f(*ref34, float("nan"))


def test_bound_energies_matches_scalar(ref34):
    ents = np.linspace(0.0, math.log(3), 25)
    for kind, f in (("min", e_min), ("max", e_max)):
        energies, betas = bound_energies(*ref34, ents, kind)
        for x, e, bt in zip(ents, energies, betas):
            ref_e, ref_b = f(*ref34, x)
            assert e == pytest.approx(ref_e, abs=1e-10)
            if ref_b is None:
                assert math.isnan(bt)
            else:
                assert bt == pytest.approx(ref_b, rel=1e-9, abs=1e-10)


def test_bound_energies_bad_kind(ref34):
    with pytest.raises(InvalidParameter):
        bound_energies(*ref34, [0.1], "middle")


def test_min_state_examples(qubits):
    s = min_state(*qubits, 0.0)
    np.testing.assert_allclose(np.abs(s.amplitudes), [[1, 0], [0, 0]], atol=1e-15)
    s = min_state(*qubits, math.log(2))
    np.testing.assert_allclose(s.amplitudes, np.eye(2) / math.sqrt(2), atol=1e-10)
    s = min_state(*qubits, TWO_THIRDS_ENT)
    np.testing.assert_allclose(np.diag(s.amplitudes), [math.sqrt(2 / 3), math.sqrt(1 / 3)], atol=1e-10)
    assert s.norm_squared == pytest.approx(1.0, abs=1e-12)


def test_max_state_examples(ref34, qubits):
    s = max_state(*ref34, 0.0)
    assert abs(s.amplitudes[2, 3]) == pytest.approx(1.0)
    s = max_state(*ref34, math.log(3))
    expected = np.zeros((3, 4))
    expected[0, 1] = expected[1, 2] = expected[2, 3] = 1 / math.sqrt(3)
    np.testing.assert_allclose(s.amplitudes, expected, atol=1e-10)
    s = max_state(*qubits, TWO_THIRDS_ENT)
    np.testing.assert_allclose(np.diag(s.amplitudes), [math.sqrt(1 / 3), math.sqrt(2 / 3)], atol=1e-10)


def test_state_orientation_when_first_system_larger(ref34):
    a, b = ref34
    s = max_state(b, a, 0.9)
    t = max_state(a, b, 0.9)
    assert s.dims == (4, 3)
    np.testing.assert_allclose(s.amplitudes, t.amplitudes.T, atol=1e-14)
    assert local_energy(s, b, a) == pytest.approx(e_max(a, b, 0.9)[0], abs=1e-10)


def test_phases(qubits):
    s = min_state(*qubits, 0.5, phases=[0.0, math.pi / 2])
    plain = min_state(*qubits, 0.5)
    assert s.amplitudes[1, 1] == pytest.approx(1j * plain.amplitudes[1, 1])
    with pytest.raises(InvalidParameter):
        min_state(*qubits, 0.5, phases=[0.0])


def test_states_reach_bounds(ref34):
    for ent in np.linspace(0.0, math.log(3), 11):
        assert local_energy(min_state(*ref34, ent), *ref34) == pytest.approx(e_min(*ref34, ent)[0], abs=1e-10)
        assert local_energy(max_state(*ref34, ent), *ref34) == pytest.approx(e_max(*ref34, ent)[0], abs=1e-10)


def test_flat_regime_state_has_requested_entanglement():
    from entbounds import entanglement_entropy

    a, b = [0, 0, 5], [0, 0, 0, 1]
    s = min_state(a, b, 0.5)
    assert entanglement_entropy(s) == pytest.approx(0.5, abs=1e-10)
    assert local_energy(s, a, b) == pytest.approx(0.0, abs=1e-12)


def test_bound_curve_two_points(qubits):
    c = bound_curve(*qubits, "min", 2)
    assert len(c.points) == 2
    assert c.points[0].entanglement == pytest.approx(0.0, abs=1e-8)
    assert c.points[0].energy == pytest.approx(0.0, abs=1e-6)
    assert c.points[-1].entanglement == pytest.approx(math.log(2))
    assert c.points[-1].energy == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(InvalidParameter):
        bound_curve(*qubits, "min", 1)


def test_bound_curve_ref34(ref34):
    c = bound_curve(*ref34, "min", 200)
    assert c.points[-1].energy == pytest.approx(13 / 3, abs=1e-10)
    x = c.entanglements
    assert np.all(np.diff(x) > 0)
    assert x[0] >= 0 and x[-1] <= math.log(3)
    betas = c.betas
    assert np.all(np.diff(betas) < 0)
    # betas reproduce the energies through the thermal weights
    j = align_min(*ref34)
    for p in c.points[::20]:
        q = evaluate_thermal(j, p.beta)
        assert q.mean_energy == pytest.approx(p.energy, abs=1e-10)
        assert q.entropy == pytest.approx(p.entanglement, abs=1e-11)


def test_bound_curve_with_flat_segment():
    c = bound_curve([0, 0, 5], [0, 0, 0, 1], "min", 50)
    x = c.entanglements
    assert np.all(np.diff(x) > 0)
    flat = [p for p in c.points if p.beta is None]
    assert flat and all(p.energy == 0.0 for p in flat)
    assert flat[-1].entanglement == pytest.approx(math.log(2))


def test_bound_curve_fully_degenerate():
    c = bound_curve([1, 1], [2, 2], "max", 5)
    assert all(p.beta is None and p.energy == 3.0 for p in c.points)


def test_curve_csv(qubits):
    text = bound_curve(*qubits, "max", 3).to_csv()
    lines = text.splitlines()
    assert lines[0] == "entanglement_nats,entanglement_normalized,beta,energy,energy_normalized"
    assert len(lines) == 4
    last = lines[-1].split(",")
    assert float(last[1]) == pytest.approx(1.0)
    assert float(last[3]) == pytest.approx(1.0)


levels_strategy = st.lists(st.floats(-20, 20, allow_nan=False), min_size=2, max_size=6).map(sorted).filter(
    lambda v: v[-1] - v[0] > 1e-3)
# quarter-unit lattice: gaps are 0 or >= 1/4, so shifting or scaling cannot
# merge or split degenerate levels through rounding
lattice_levels = st.lists(st.integers(-80, 80), min_size=2, max_size=6).map(
    lambda v: sorted(x / 4 for x in v)).filter(lambda v: v[-1] > v[0])


@settings(max_examples=60, deadline=None)
@given(levels_strategy, st.floats(0.0, 1.0))
def test_round_trip(levels, frac):
    j = joint(levels)
    lo = math.log(j.ground_degeneracy)
    ent = lo + (math.log(j.size) - lo) * (0.02 + 0.96 * frac)
    if ent <= lo:
        return
    p = solve_beta(j, ent)
    assert abs(evaluate_thermal(j, p.beta).entropy - ent) <= 1e-12
    assert abs(sum(p.weights) - 1.0) <= 1e-12
    assert all(x >= y for x, y in zip(p.weights, p.weights[1:]))


@settings(max_examples=60, deadline=None)
@given(lattice_levels, st.floats(-50, 50), st.floats(0.1, 0.9))
def test_shift_invariance(levels, c, frac):
    j = joint(levels)
    lo = math.log(j.ground_degeneracy)
    ent = lo + (math.log(j.size) - lo) * frac
    p = solve_beta(j, ent)
    q = solve_beta(joint([x + c for x in levels]), ent)
    assert q.beta == pytest.approx(p.beta, rel=1e-8, abs=1e-10)
    np.testing.assert_allclose(q.weights, p.weights, atol=1e-9)
    assert q.mean_energy == pytest.approx(p.mean_energy + c, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(lattice_levels, st.floats(0.05, 20), st.floats(0.1, 0.9))
def test_scale_covariance(levels, s, frac):
    j = joint(levels)
    lo = math.log(j.ground_degeneracy)
    ent = lo + (math.log(j.size) - lo) * frac
    p = solve_beta(j, ent)
    q = solve_beta(joint([x * s for x in levels]), ent)
    assert q.beta == pytest.approx(p.beta / s, rel=1e-8, abs=1e-10)
    np.testing.assert_allclose(q.weights, p.weights, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(levels_strategy)
def test_entropy_decreasing_in_beta(levels):
    j = joint(levels)
    betas = np.linspace(0, 5 / (levels[-1] - levels[0]), 60)
    ent = [evaluate_thermal(j, b).entropy for b in betas]
    assert all(x > y for x, y in zip(ent, ent[1:]))


def test_e_shift_moves_bounds(ref34):
    a, b = ref34
    shifted = [x + 2.5 for x in a.levels]
    for ent in (0.0, 0.4, 1.0):
        assert e_min(shifted, b, ent)[0] == pytest.approx(e_min(a, b, ent)[0] + 2.5, abs=1e-10)
        assert e_max(shifted, b, ent)[0] == pytest.approx(e_max(a, b, ent)[0] + 2.5, abs=1e-10)


def test_max_is_min_of_negated(ref34):
    a, b = ref34
    na = [-x for x in a.levels]
    nb = [-x for x in b.levels]
    for ent in (0.2, 0.7, 1.05):
        assert e_max(a, b, ent)[0] == pytest.approx(-e_min(na, nb, ent)[0], abs=1e-10)
    assert align_max(a, b).negated().levels == align_min(na, nb).levels
