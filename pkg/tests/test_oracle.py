import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.optimize import linear_sum_assignment

import wqed
from wqed.api.oracle import HK_DIRECT, GENERALIZED, F_DENSE, DenseOperator
from wqed.api.solver import BOUND

PHI = 0.3 * np.pi

def test_hk_small_by_hand():
    p = wqed.ModelParams(PHI, xi=0.0)
    K = np.pi
    op = wqed.build_hk(p, K, 50)
    assert op.provenance == HK_DIRECT and op.entries.shape == (50, 50)
    phi_r = PHI - K / 2
    r, s = 1, 3
    expected = -2j * (np.exp(1j * phi_r * abs(r - s))
                      + np.exp(1j * phi_r * (r + s)))
    assert_allclose(op.entries[r - 1, s - 1], expected)

def test_hk_is_not_hermitian():
    op = wqed.build_hk(wqed.ModelParams(PHI, xi=0.4), np.pi, 60)
    assert np.abs(op.entries - op.entries.conj().T).max() > 1e-3

def test_hk_swap_symmetry():
    p = wqed.ModelParams(PHI, xi=0.4)
    K = 0.9 * np.pi
    a = wqed.build_hk(p, K, 80).entries
    b = wqed.build_hk(p.swapped(), 2 * np.pi - K, 80).entries
    # phi_r -> phi_l - pi flips the sign of every odd power
    r = np.arange(1, 81)
    sign = (-1.0) ** (r[:, None] + r[None, :])
    assert_allclose(b, a * sign, atol=1e-12)

def test_hk_rejects_small_or_singular():
    p = wqed.ModelParams(PHI, xi=0.4)
    with pytest.raises(ValueError):
        wqed.build_hk(p, np.pi, 10)
    with pytest.raises(wqed.SingularMomentumError):
        wqed.build_hk(p, 2 * PHI, 60)

def test_eig_all_diagonal():
    op = DenseOperator(np.diag([3.0, 1.0, 2.0]).astype(complex), 3, F_DENSE)
    assert_allclose(wqed.eig_all(op), [1.0, 2.0, 3.0])

def test_eig_all_halves_direct_build():
    op = DenseOperator(np.array([[2.0, 1.0], [0.0, 4.0]], dtype=complex), 2,
                       HK_DIRECT)
    values, vectors = wqed.eig_all(op, vectors=True)
    assert_allclose(values, [1.0, 2.0])
    assert vectors.shape == (2, 2)

def test_eig_all_non_normal_fixture():
    m = np.array([[1.0, 1e3], [0.0, 1.0 + 1e-3]], dtype=complex)
    values = wqed.eig_all(DenseOperator(m, 2, F_DENSE))
    assert_allclose(values, [1.0, 1.001], rtol=1e-9)

def test_dense_spectrum_decays():
    p = wqed.ModelParams(PHI, xi=0.4)
    values = wqed.eig_all(wqed.build_hk(p, 1.2 * np.pi, 120))
    assert values.imag.max() < 1e-10

def test_generalized_matches_direct():
    p = wqed.ModelParams(PHI, xi=0.9)
    op = wqed.build_generalized(p, np.pi, 200)
    assert op.provenance == GENERALIZED
    direct = wqed.eig_all(wqed.build_hk(p, np.pi, 200))
    banded = wqed.eig_all(op)
    cost = np.abs(direct[:, None] - banded[None, :])
    rows, cols = linear_sum_assignment(cost)
    assert cost[rows, cols].max() < 1e-8 * max(1, np.abs(direct).max())

def test_generalized_band_structure():
    op = wqed.build_generalized(wqed.ModelParams(PHI, xi=0.4), np.pi, 60)
    lhs, rhs = op.entries, op.rhs
    i, j = np.indices(lhs.shape)
    assert np.abs(lhs[np.abs(i - j) > 1]).max() == 0
    assert np.abs(rhs[np.abs(i - j) > 2]).max() == 0

def test_real_corner_pairs_conjugates():
    p = wqed.ModelParams(PHI, xi=0.4)
    values = wqed.generalized_eigvals(p, 1.2 * np.pi, 100, real_corner=True)
    for w in values:
        assert np.abs(values - np.conj(w)).min() < 1e-6 * max(1, abs(w))

def test_bound_state_in_dense_spectrum():
    p = wqed.ModelParams(PHI, xi=0.9)
    state = [s for s in wqed.solve_states(p, np.pi) if s.kind == BOUND][0]
    eigs, vecs = wqed.eig_all(wqed.build_hk(p, np.pi, 400), vectors=True)
    distance, overlap = wqed.match_state(eigs, vecs, state, params=p,
                                         K=np.pi)
    assert distance < 1e-6
    assert overlap > 0.999

@pytest.mark.parametrize("K", [np.pi, 0.95 * np.pi])
def test_bound_state_converges_with_size(K):
    p = wqed.ModelParams(PHI, xi=0.9)
    state = [s for s in wqed.solve_states(p, K) if s.kind == BOUND][0]
    d = [wqed.match_state(wqed.eig_all(wqed.build_hk(p, K, n)), None,
                          state)[0] for n in (100, 200, 400)]
    # truncation error falls geometrically until it reaches roundoff
    for prev, nxt in zip(d, d[1:]):
        assert nxt <= max(0.5 * prev, 1e-9)
    assert d[-1] < 1e-8

def test_moderate_chirality_state_overlap():
    p = wqed.ModelParams(PHI, xi=0.4)
    states = [s for s in wqed.solve_states(p, np.pi) if s.kind == BOUND]
    assert states
    eigs, vecs = wqed.eig_all(wqed.build_hk(p, np.pi, 400), vectors=True)
    for s in states:
        distance, overlap = wqed.match_state(eigs, vecs, s, params=p,
                                             K=np.pi)
        assert distance < 1e-6
        assert overlap > 0.999

@pytest.mark.parametrize("q", [0.0, 1.0, np.pi, -2.5])
def test_single_excitation_geometric(q):
    p = wqed.ModelParams(PHI, xi=0.4)
    assert wqed.single_excitation_check(p, q) < 1e-10
    assert abs(wqed.bloch_sum(p, q).imag) < 1e-12

def test_single_excitation_damped():
    p = wqed.ModelParams(PHI, xi=0.4)
    assert wqed.single_excitation_check(p, 2.0, method='damped') < 1e-6

def test_single_excitation_unknown_method():
    with pytest.raises(ValueError):
        wqed.single_excitation_check(wqed.ModelParams(PHI), 1.0, 'exact')
