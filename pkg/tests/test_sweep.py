import numpy as np
import pytest
from numpy.testing import assert_allclose

import wqed
from wqed.api.common import singular_set, nearest_singular
from wqed.api.solver import PairEigenstate, BOUND, ANTIBOUND
from wqed.api.sweep import make_grid, link, ep_signature, DIVERGENT

PHI = 0.3 * np.pi

def _state(omega, kind=BOUND):
    return PairEigenstate(complex(omega), 0.5, 0.6, 1.0, 0.0, kind=kind)

def test_make_grid_skips_windows():
    window = 0.01
    Ks = make_grid(PHI, 0.0, 2 * np.pi, 500, window=window)
    assert Ks[0] > 0 and Ks[-1] < 2 * np.pi
    assert all(nearest_singular(PHI, K)[0] > window for K in Ks)
    with pytest.raises(wqed.DomainError):
        make_grid(PHI, 1.0, 0.5, 10)

def test_link_two_lines_with_a_hole():
    Ks = np.linspace(0.7, 1.3, 13) * np.pi
    states = [[_state(-1 + 0.1 * K), _state(1 - 0.1 * K)] for K in Ks]
    states[5] = states[5][:1]
    branches = link(Ks, states, wqed.ModelParams(PHI, xi=0.4))
    assert [b.id for b in branches] == ['I', 'II']
    for b in branches:
        assert len(b) == 13
        assert np.all(np.diff(b.Ks) > 0)
        assert b.start_reason == 'grid' and b.end_reason == 'grid'
    filled = branches[1].points[5][1]
    assert filled.interpolated
    assert_allclose(filled.omega, 1 - 0.1 * Ks[5])

def test_link_closes_at_divergence():
    Ks = np.linspace(0.5, 0.7, 10) * np.pi
    states = [[_state(1.0 / (2 * PHI - K))] for K in Ks]
    branches = link(Ks, states, wqed.ModelParams(PHI, xi=0.4))
    assert len(branches) == 2
    assert branches[0].end_reason == 'singular'
    assert branches[1].start_reason == 'singular'
    assert branches[0].reconnects_to == 'II'

def test_link_follows_growth_near_divergence():
    # a single-point branch must already match the next point
    Ks = np.linspace(1.41, 1.6, 40) * np.pi
    k_s = 2 * np.pi - 2 * PHI
    states = [[_state(1.0 / (K - k_s), kind='Resonance')] for K in Ks]
    branches = link(Ks, states, wqed.ModelParams(PHI, xi=0.4))
    assert len(branches) == 1
    assert len(branches[0]) == 40

def test_link_follows_growth_near_zero_momentum():
    Ks = np.linspace(0.005, 0.2, 40) * np.pi
    states = [[_state(-2.0 / K - 1j / K, kind='Resonance'),
               _state(-2.0 / K + 0.5, kind=BOUND)] for K in Ks]
    branches = link(Ks, states, wqed.ModelParams(PHI, xi=0.4))
    assert [len(b) for b in branches] == [40, 40]

def test_link_starts_new_branch_when_far():
    Ks = np.linspace(0.8, 1.0, 5) * np.pi
    states = [[_state(0.0)], [_state(0.0)], [_state(5.0)], [_state(5.0)],
              [_state(5.0)]]
    branches = link(Ks, states, wqed.ModelParams(PHI, xi=0.4), max_gap=0)
    assert len(branches) == 2
    assert branches[1].start_reason == 'emerged'
    assert branches[0].end_reason == 'lost'

def test_branch_predict():
    b = wqed.Branch('I', [(0.0, _state(1.0)), (1.0, _state(2.0))])
    omega, step = b.predict(1.5)
    assert_allclose((omega, step), (2.5, 0.5))

def test_divergent_points_are_named():
    names = [n for _, n in singular_set(PHI)]
    assert all(d in names for d in DIVERGENT)

def test_sweep_independent_of_jobs():
    p = wqed.ModelParams(PHI, xi=0.4)
    grid = (0.1, 2 * np.pi - 0.1, 40)
    a = wqed.sweep_K(p, grid, jobs=1)
    b = wqed.sweep_K(p, grid, jobs=2)
    assert [x.id for x in a] == [x.id for x in b]
    for x, y in zip(a, b):
        assert_allclose(x.Ks, y.Ks)
        assert_allclose(x.omegas, y.omegas)

def test_sweep_bound_branch_in_window():
    p = wqed.ModelParams(PHI, xi=0.9)
    branches = wqed.sweep_K(p, (0.05, 2 * np.pi - 0.05, 120))
    lo, hi = 0.8 * np.pi, 1.2 * np.pi
    inside = [b for b in branches
              if any(lo < K < hi and s.kind == BOUND for K, s in b.points)]
    assert inside
    for b in inside:
        for K, s in b.points:
            if lo < K < hi and not s.interpolated:
                assert s.kind in (BOUND, ANTIBOUND)

def test_sweep_branch_continuity():
    p = wqed.ModelParams(PHI, xi=0.9)
    branches = wqed.sweep_K(p, (0.75 * np.pi, 1.25 * np.pi, 60))
    for b in branches:
        if len(b) < 5:
            continue
        jumps = np.abs(np.diff(b.omegas))
        assert jumps.max() < 0.1 + 10 * np.median(jumps)

def test_sweep_chiral_is_one_kind():
    p = wqed.ModelParams(PHI, xi=0.0)
    branches = wqed.sweep_K(p, (0.05, 2 * np.pi - 0.05, 80))
    assert len(branches) >= 2
    assert all(set(b.kinds) == {BOUND} for b in branches)
    first = branches[0]
    assert first.Ks[-1] < 2 * PHI
    assert first.end_reason in ('singular', 'cap')
    assert first.reconnects_to == branches[1].id
    assert np.all(np.diff(first.omegas.real) > 0)

def test_sweep_keeps_branches_whole():
    p = wqed.ModelParams(PHI, xi=0.9)
    branches = wqed.sweep_K(p, (0.01, 2 * np.pi - 0.01, 200))
    total = sum(len(b) for b in branches)
    short = sum(len(b) for b in branches if len(b) <= 2)
    assert short <= 0.05 * total

def test_resonance_signature_changes_with_ratio():
    k_lo, k_hi = 2 * np.pi - 2 * PHI + 0.02 * np.pi, 2 * np.pi - 0.02 * np.pi
    weak = ep_signature(wqed.ModelParams.from_ratio(PHI, 0.1), k_lo, k_hi)
    strong = ep_signature(wqed.ModelParams.from_ratio(PHI, 0.4), k_lo, k_hi)
    assert weak is not None and strong is not None
    assert weak != strong

def test_non_chiral_mirror_symmetry():
    p = wqed.ModelParams(PHI, xi=1.0)
    for K in [0.3, 0.8 * np.pi, 1.1 * np.pi]:
        a = sorted(s.omega.real for s in wqed.solve_states(p, K))
        b = sorted(s.omega.real for s in wqed.solve_states(p, 2 * np.pi - K))
        assert_allclose(a, b, atol=1e-9)

def test_real_coverage():
    Ks = np.linspace(0.8, 1.0, 3)
    b1 = wqed.Branch('I', [(k, _state(w)) for k, w in zip(Ks, [-10, -2, 1])])
    b2 = wqed.Branch('II', [(k, _state(w)) for k, w in zip(Ks, [2, 6, 10])])
    assert_allclose(wqed.real_coverage([b1, b2]), 1.0)
    assert_allclose(wqed.real_coverage([b1]), 9.0)

def test_coalescence_exponent():
    edge = 1.0
    points = [(edge + d, 3 * d ** 0.5) for d in np.geomspace(1e-2, 1e-4, 5)]
    assert_allclose(wqed.coalescence_exponent(points, edge), 0.5)

def test_edge_coalescence_arguments():
    p = wqed.ModelParams(PHI, xi=0.9)
    with pytest.raises(ValueError):
        wqed.edge_coalescence(p, side='middle')
    with pytest.raises(wqed.DomainError):
        wqed.edge_coalescence(p, offsets=[-0.1])

def test_edge_gap_is_finite_away_from_edge():
    p = wqed.ModelParams(PHI, xi=0.9)
    points = (wqed.edge_coalescence(p, 'lower', [1e-2 * 2 * np.pi])
              + wqed.edge_coalescence(p, 'upper', [1e-2 * 2 * np.pi]))
    assert points
    assert all(gap > 0 for _, gap in points)

def test_ep_result():
    r = wqed.EpResult(PHI, 0.2, 1.8 * np.pi, 1e-3)
    assert r.ok
    assert not wqed.EpResult(PHI, np.nan, np.nan, error='x').ok

def test_find_ep_rejects_bad_bracket():
    with pytest.raises(wqed.DomainError):
        wqed.find_ep(PHI, ratio_bracket=(0.5, 0.2))

@pytest.mark.slow
def test_edge_square_root_coalescence():
    p = wqed.ModelParams(PHI, xi=0.9)
    slopes = []
    for side, edge in [('lower', 2 * PHI), ('upper', 2 * np.pi - 2 * PHI)]:
        points = wqed.edge_coalescence(p, side)
        if len(points) >= 4:
            gaps = [g for _, g in points]
            assert gaps[-1] < gaps[0]
            slopes.append(wqed.coalescence_exponent(points, edge))
    assert any(abs(s - 0.5) < 0.1 for s in slopes)

@pytest.mark.slow
def test_gapless_real_part():
    p = wqed.ModelParams(PHI, xi=0.4)
    branches = wqed.sweep_K(p, (0.001, 2 * np.pi - 0.001, 4000), jobs=-1)
    assert wqed.real_coverage(branches, -10, 10) < 0.5

@pytest.mark.slow
def test_find_ep_location():
    r = wqed.find_ep(PHI, jobs=-1)
    assert r.ok
    assert_allclose(r.ratio_ep, 0.236, atol=0.01)
    assert_allclose(r.K_ep / np.pi, 1.8, atol=0.05)
    assert r.min_distance < 1e-2

@pytest.mark.slow
def test_ep_curve_increases_with_phase():
    results = wqed.ep_curve([0.2 * np.pi, 0.3 * np.pi], jobs=-1)
    assert all(r.ok for r in results)
    assert results[0].ratio_ep < results[1].ratio_ep
    assert all(0 < r.ratio_ep < 1 for r in results)

@pytest.mark.slow
def test_no_transition_above_ep():
    with pytest.raises(wqed.BracketError):
        wqed.find_ep(PHI, ratio_bracket=(0.5, 0.9), n_scan=4)
