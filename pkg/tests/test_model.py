import numpy as np
import pytest
from numpy.testing import assert_allclose

import wqed
from wqed.api.common import singular_set, check_momentum, nearest_singular

PHI = 0.3 * np.pi

def test_rates_sum_to_twice_gamma_1d():
    for xi in [0.0, 0.1, 0.4, 0.9, 1.0]:
        p = wqed.ModelParams(PHI, gamma_1d=1.5, xi=xi)
        assert_allclose(p.gamma_r + p.gamma_l, 3.0, rtol=1e-15)
        assert_allclose(p.ratio, xi, rtol=1e-15)

def test_limits_of_chirality():
    p = wqed.ModelParams(PHI, xi=0.0)
    assert p.gamma_l == 0 and p.gamma_r == 2.0 and p.chiral
    p = wqed.ModelParams(PHI, xi=1.0)
    assert p.gamma_l == p.gamma_r == 1.0

@pytest.mark.parametrize("kwargs", [
    dict(phi=0.0), dict(phi=np.pi), dict(phi=PHI, gamma_1d=0.0),
    dict(phi=PHI, xi=-0.1), dict(phi=PHI, xi=1.5)])
def test_invalid_params(kwargs):
    with pytest.raises(wqed.DomainError):
        wqed.ModelParams(**kwargs)

def test_from_ratio_above_one_is_mirrored():
    p = wqed.ModelParams.from_ratio(PHI, 4.0)
    assert p.mirrored
    assert_allclose(p.ratio, 4.0)
    assert_allclose((p.gamma_r, p.gamma_l), (0.4, 1.6))
    q = p.swapped()
    assert_allclose((q.gamma_r, q.gamma_l), (1.6, 0.4))

def test_pair_momentum():
    pm = wqed.PairMomentum(PHI, 1.1)
    assert_allclose(pm.phi_r + pm.phi_l, 2 * PHI)

def test_singular_set():
    ks = [k / np.pi for k, _ in singular_set(PHI)]
    assert_allclose(ks, [0.4, 0.6, 1.4, 1.6])
    names = dict((round(k / np.pi, 6), n) for k, n in singular_set(PHI))
    assert names[0.6] == 'sin(phi_r)'
    assert names[1.4] == 'sin(phi_l)'

def test_check_momentum():
    check_momentum(PHI, np.pi)
    with pytest.raises(wqed.SingularMomentumError) as e:
        check_momentum(PHI, 0.6 * np.pi + 1e-4)
    assert e.value.denominator == 'sin(phi_r)'
    d, k, _ = nearest_singular(PHI, 0.0)
    assert_allclose((d, k), (0.4 * np.pi, 0.4 * np.pi))

@pytest.mark.parametrize("xi", [0.0, 0.4, 1.0])
def test_dispersion_at_zero(xi):
    p = wqed.ModelParams(PHI, xi=xi)
    assert_allclose(wqed.polariton_dispersion(p, 0.0), 1 / np.tan(PHI / 2))

def test_dispersion_symmetric_without_chirality():
    p = wqed.ModelParams(PHI, xi=1.0)
    for q in np.linspace(-3, 3, 13):
        assert_allclose(wqed.polariton_dispersion(p, q),
                        wqed.polariton_dispersion(p, -q), rtol=1e-12)

def test_dispersion_pole():
    p = wqed.ModelParams(PHI, xi=0.4)
    with pytest.raises(wqed.DomainError):
        wqed.polariton_dispersion(p, PHI)

@pytest.mark.parametrize("q", [np.pi, 0.5, -2.0])
def test_dispersion_matches_lattice_sum(q):
    p = wqed.ModelParams(PHI, xi=0.4)
    assert wqed.single_excitation_check(p, q) < 1e-10

def test_bands_have_valid_intervals():
    p = wqed.ModelParams(PHI, xi=0.4)
    bands = wqed.continuum_bands(p, 1.2 * np.pi)
    assert bands.bands
    for label in ('UU', 'UL', 'LL'):
        intervals = bands.intervals(label)
        for lo, hi in intervals:
            assert lo <= hi
        for (_, hi), (lo, _) in zip(intervals[:-1], intervals[1:]):
            assert hi < lo

def test_too_few_samples():
    with pytest.raises(wqed.DomainError):
        wqed.continuum_bands(wqed.ModelParams(PHI), np.pi, q_samples=100)

@pytest.mark.parametrize("K", np.linspace(0.62, 1.38, 9) * np.pi)
def test_gap_inside_the_window(K):
    p = wqed.ModelParams(PHI, xi=0.4)
    assert wqed.continuum_bands(p, K).finite_gaps()

def test_bands_swap_symmetry():
    p = wqed.ModelParams(PHI, xi=0.4)
    K = 0.9 * np.pi
    a = wqed.continuum_bands(p, K).finite_gaps()
    b = wqed.continuum_bands(p.swapped(), 2 * np.pi - K).finite_gaps()
    assert len(a) == len(b)
    assert_allclose(np.array(a), np.array(b), atol=1e-3)

def test_classify_energy():
    bands = wqed.ContinuumBands(1.0, [
        wqed.api.model.Band(-np.inf, -1.0, 'LL'),
        wqed.api.model.Band(2.0, 3.0, 'UL'),
        wqed.api.model.Band(2.5, np.inf, 'UU')])
    assert wqed.classify_energy(bands, 0.0 - 0.1j).in_gap
    assert str(wqed.classify_energy(bands, 0.0)) == 'gap'
    assert wqed.classify_energy(bands, 2.2).labels == {'UL'}
    assert str(wqed.classify_energy(bands, 2.7)) == 'UU+UL'
    assert bands.finite_gaps() == [(-1.0, 2.0)]

def test_bound_state_in_gap():
    p = wqed.ModelParams(PHI, xi=0.9)
    bands = wqed.continuum_bands(p, np.pi)
    assert wqed.classify_energy(bands, -0.6430723453).in_gap
