import logging
from dataclasses import replace

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment

from ..api.common import (WqedError, DomainError, RESIDUAL_GATE,
                          nearest_singular)
from ..api.model import PairMomentum
from ..api.kernel import inverse_F, coeffs, row_residuals
from ..api.solver import solve_states, BOUND
from ..api.asymptotics import omega_edge, sigma_closed, sigma_numeric
from ..api.oracle import (dense_F, build_hk, eig_all, generalized_eigvals,
                          single_excitation_check, match_state)
from .config import from_flags

logger = logging.getLogger(__name__)

def _check_K(phi, window):
    K = np.pi
    for shift in np.linspace(0, 0.5, 26):
        if nearest_singular(phi, K + shift)[0] > max(0.05, 2 * window):
            return K + shift
    return K

def inverse_identity(params, K, N):
    p = PairMomentum(params.phi, K)
    worst = 0.0
    for phase in (p.phi_r, p.phi_l):
        prod = dense_F(phase, N) @ inverse_F(phase, N).toarray()
        worst = max(worst, np.abs(prod - np.eye(N)).max())
    return worst < 1e-10, f"max |F F^-1 - 1| = {worst:.2e} (N={N})"

def similarity(params, K, N=200):
    direct = eig_all(build_hk(params, K, N))
    banded = generalized_eigvals(params, K, N)
    cost = np.abs(direct[:, None] - banded[None, :])
    rows, cols = linear_sum_assignment(cost)
    worst = cost[rows, cols].max()
    scale = max(1.0, np.abs(direct).max())
    return worst < 1e-8 * scale, f"max |diff| = {worst:.2e} (N={N})"

def bound_state_match(params, K, N):
    states = [s for s in solve_states(params, K) if s.kind == BOUND]
    if not states:
        return True, "no bound state at this K"
    eigs, vecs = eig_all(build_hk(params, K, N), vectors=True)
    worst_d, worst_o = 0.0, 1.0
    for s in states:
        d, o = match_state(eigs, vecs, s, params=params, K=K)
        worst_d, worst_o = max(worst_d, d), min(worst_o, o)
    ok = worst_d < 1e-6 * params.gamma_1d and worst_o > 0.999
    return ok, (f"{len(states)} bound, distance = {worst_d:.2e}, "
                f"overlap = {worst_o:.6f} (N={N})")

def residual_gate(params, K, corrupt_dt1=False):
    states = solve_states(params, K, strict=False)
    worst = 0.0
    for s in states:
        c = coeffs(params, K, s.omega)
        if corrupt_dt1:
            c = replace(c, dt1=c.dt1 * 1.01 + 0.01)
        worst = max(worst, row_residuals(c, s))
    note = ", dt1 corrupted" if corrupt_dt1 else ""
    return (worst <= RESIDUAL_GATE,
            f"{len(states)} states, max residual = {worst:.2e}{note}")

def single_excitation(params, n_points=64):
    worst = 0.0
    for q in np.linspace(-np.pi, np.pi, n_points, endpoint=False):
        if min(abs(np.sin((params.phi - q) / 2)),
               abs(np.sin((params.phi + q) / 2))) < 1e-3:
            continue
        worst = max(worst, single_excitation_check(params, q))
    return worst < 1e-10, f"max |closed - Bloch sum| = {worst:.2e}"

def edge_three_way(params, n_samples=20, seed=0):
    rng = np.random.default_rng(seed)
    worst, done = 0.0, 0
    while done < n_samples:
        phi = rng.uniform(0.1, 0.45) * np.pi
        xi = rng.uniform(0.05, 0.95)
        K = rng.uniform(0.05, 2 * np.pi - 0.05)
        sample = replace(params, phi=phi, xi=xi, mirrored=False)
        p = PairMomentum(phi, K)
        if abs(np.cos(p.phi_r)) > 0.9 or nearest_singular(phi, K)[0] < 0.05:
            continue
        try:
            shift = (omega_edge(sample, K)
                     - sample.gamma_r / np.tan(p.phi_r))
            closed = sigma_closed(sample, K)
            summed = sigma_numeric(sample, K)
        except DomainError:
            continue
        scale = max(1.0, abs(closed))
        worst = max(worst, abs(shift - closed) / scale,
                    abs(summed - closed) / scale)
        done += 1
    return worst < 1e-10, f"{n_samples} samples, max rel diff = {worst:.2e}"

def verify(config=None, corrupt_dt1=False, **flags):
    """Run the oracle suite and print a pass/fail table.

    Returns
    -------
    int
        0 when every check passes, 1 otherwise.
    """
    cfg = from_flags(config, **flags)
    params = cfg.params()
    K = _check_K(params.phi, cfg.window)
    checks = [
        ('inverse_identity', lambda: inverse_identity(params, K, cfg.oracle_n)),
        ('similarity', lambda: similarity(params, K)),
        ('bound_state_match',
         lambda: bound_state_match(params, K, cfg.oracle_n)),
        ('residual_gate', lambda: residual_gate(params, K, corrupt_dt1)),
        ('single_excitation', lambda: single_excitation(params)),
        ('edge_three_way', lambda: edge_three_way(params)),
    ]
    rows = []
    for name, func in checks:
        try:
            ok, detail = func()
        except WqedError as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        logger.info("%s: %s", name, detail)
        rows.append([name, 'pass' if ok else 'FAIL', detail])
    df = pd.DataFrame(rows, columns=['check', 'result', 'detail'])
    print(f"phi = {cfg.phi_over_pi} pi, xi = {cfg.xi}, K = {K / np.pi:.4f} pi")
    print(df.to_string(index=False))
    failed = df.loc[df['result'] == 'FAIL', 'check'].tolist()
    if failed:
        print(f"failed: {', '.join(failed)}")
        return 1
    return 0
