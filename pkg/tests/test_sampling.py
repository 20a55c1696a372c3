import json
import math
from fractions import Fraction

import numpy as np
import pytest

from entbounds import (
    InvalidParameter,
    MixedEnsemble,
    PureState,
    e_max,
    e_min,
    ensemble_point,
    haar_mean_energy,
    haar_pure,
    page_entropy,
    random_ensemble,
    scan,
)
from entbounds.sampling import block_rng, haar_grids


def page_exact(m: int, n: int) -> Fraction:
    m, n = sorted((m, n))
    return sum(Fraction(1, k) for k in range(n + 1, m * n + 1)) - Fraction(m - 1, 2 * n)


def test_page_entropy():
    assert page_entropy(3, 4) == pytest.approx(float(page_exact(3, 4)), abs=1e-15)
    assert page_entropy(3, 4) == pytest.approx(0.76988, abs=5e-6)
    assert page_entropy(4, 3) == page_entropy(3, 4)
    # qubit pair: 1/3 + 1/4 - 1/4
    assert page_entropy(2, 2) == pytest.approx(1 / 3, abs=1e-15)
    assert page_entropy(1, 5) == 0.0


def test_haar_mean_energy(ref34):
    assert haar_mean_energy(*ref34) == 6.0


def test_haar_pure():
    s = haar_pure(1, 1, 0)
    assert abs(s.amplitudes[0, 0]) == pytest.approx(1.0)
    t = haar_pure(3, 4, 11)
    assert t.is_normalized(1e-12)
    np.testing.assert_array_equal(t.amplitudes, haar_pure(3, 4, 11).amplitudes)
    with pytest.raises(InvalidParameter):
        haar_pure(0, 2, 1)


def test_block_streams_differ():
    a = block_rng(5, 0).standard_normal(4)
    b = block_rng(5, 1).standard_normal(4)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(a, block_rng(5, 0).standard_normal(4))


def test_haar_means_small_sample(ref34):
    # 10^5 samples: both means within 3 standard errors
    from entbounds.states import local_energies, schmidt_coefficients, shannon_entropy

    psi = haar_grids(np.random.default_rng(123), 100_000, 3, 4)
    e = local_energies(psi, *ref34)
    s = shannon_entropy(schmidt_coefficients(psi))
    n = len(e)
    assert abs(e.mean() - 6.0) <= 3 * e.std(ddof=1) / math.sqrt(n)
    assert abs(s.mean() - page_entropy(3, 4)) <= 3 * s.std(ddof=1) / math.sqrt(n)


def test_scan_single_sample(ref34):
    h = scan(*ref34, 1, bins=(10, 10), seed=3)
    assert h.total == 1
    assert h.counts.sum() == 1
    assert np.count_nonzero(h.counts) == 1
    assert h.summary()["sem_energy"] is None


def test_scan_counts_and_bounds(ref34):
    h = scan(*ref34, 20_000, bins=(20, 30), seed=1, block_size=4096)
    assert h.shape == (20, 30)
    assert h.counts.sum() == 20_000
    assert h.counts.min() >= 0
    s = h.summary()
    assert s["bound_violations"] == 0
    assert s["outside_unit_square"] == 0
    assert s["worst_margin"] > 0
    assert 0.0 <= s["near_bound_fraction"] < 0.01


def test_scan_deterministic_over_workers(ref34):
    a = scan(*ref34, 10_000, bins=(16, 16), seed=9, block_size=1000, workers=1)
    b = scan(*ref34, 10_000, bins=(16, 16), seed=9, block_size=1000, workers=4)
    np.testing.assert_array_equal(a.counts, b.counts)
    assert a.to_json() == b.to_json()


def test_scan_matches_pointwise_bounds(ref34):
    # every sample of block 0 lies between the bounds evaluated one by one
    from entbounds.states import entanglement_entropy, local_energy

    psi = haar_grids(block_rng(4, 0), 200, 3, 4)
    for g in psi:
        s = PureState(g)
        ent = min(entanglement_entropy(s), math.log(3))
        e = local_energy(s, *ref34)
        assert e_min(*ref34, ent)[0] - 1e-9 <= e <= e_max(*ref34, ent)[0] + 1e-9


def test_scan_rejects(ref34):
    with pytest.raises(InvalidParameter):
        scan(*ref34, 0)
    with pytest.raises(InvalidParameter):
        scan(*ref34, 10, bins=(0, 3))
    with pytest.raises(InvalidParameter):
        scan(*ref34, 10, block_size=0)


def test_histogram_exports(ref34):
    h = scan(*ref34, 500, bins=(3, 2), seed=2)
    lines = h.to_csv().splitlines()
    assert lines[0] == "bin_x,bin_y,count"
    assert len(lines) == 7
    assert sum(int(l.split(",")[2]) for l in lines[1:]) == 500
    d = json.loads(h.to_json())
    assert d["seed"] == 2
    assert d["total"] == 500
    assert d["spectrum_a"] == [0.0, 2.0, 4.0]
    assert d["summary"]["page_entanglement"] == page_entropy(3, 4)
    assert np.array(d["counts"]).sum() == 500


def test_shifted_spectra_normalize(ref34):
    a = [x + 10 for x in ref34[0].levels]
    h = scan(a, ref34[1], 2000, bins=(10, 10), seed=5)
    assert h.stats.outside_unit_square == 0
    assert h.stats.violations == 0


def test_random_ensemble():
    e = random_ensemble(2, 2, 1, 0)
    assert e.weights == (1.0,)
    e = random_ensemble(3, 4, 6, 8)
    assert abs(sum(e.weights) - 1.0) <= 1e-12
    assert all(s.is_normalized() for s in e.states)
    assert e.dims == (3, 4)
    rho = e.density_matrix()
    assert np.trace(rho).real == pytest.approx(1.0)
    with pytest.raises(InvalidParameter):
        random_ensemble(2, 2, 0, 0)


def test_ensemble_validation():
    s = PureState.product((2, 2), 0, 0)
    with pytest.raises(InvalidParameter):
        MixedEnsemble((0.5,), (s, s))
    with pytest.raises(InvalidParameter):
        MixedEnsemble((0.7, 0.7), (s, s))
    with pytest.raises(InvalidParameter):
        MixedEnsemble((0.5, 0.5), (s, PureState.product((2, 3), 0, 0)))


def test_ensemble_point(qubits):
    ground = PureState.product((2, 2), 0, 0)
    bell = PureState(np.eye(2) / math.sqrt(2))
    assert ensemble_point(MixedEnsemble((1.0,), (ground,)), *qubits) == (0.0, 0.0)
    e, ent = ensemble_point(MixedEnsemble((0.5, 0.5), (bell, ground)), *qubits)
    assert e == pytest.approx(0.5, abs=1e-15)
    assert ent == pytest.approx(math.log(2) / 2, abs=1e-15)


def test_four_state_mixture_segment(qubits):
    for seed in range(50):
        ens = random_ensemble(2, 2, 4, seed)
        energy, upper = ensemble_point(ens, *qubits)
        for x in np.linspace(0.0, upper, 7):
            assert e_min(*qubits, x)[0] - 1e-9 <= energy <= e_max(*qubits, x)[0] + 1e-9
