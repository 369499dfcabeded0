import numpy as np
import pandas as pd

from ..api.asymptotics import evaluate
from ..api.sweep import make_grid
from .config import from_flags
from .output import write_tables

BRANCHES = [('plus', 'omega_plus'), ('minus', 'omega_minus'),
            ('fwd', 'omega_fwd'), ('bwd', 'omega_bwd')]

def asymptotes(config=None, **flags):
    """Write the closed-form asymptotes on the sweep grid.

    Rows are sorted by K, then by branch in the order plus, minus, fwd,
    bwd. Undefined values are skipped.
    """
    cfg = from_flags(config, **flags)
    params = cfg.params()
    rows = []
    for K in make_grid(params.phi, *cfg.k_grid, window=cfg.window):
        result = evaluate(params, K)
        for name, attr in BRANCHES:
            omega = getattr(result, attr)
            if np.isfinite(omega):
                rows.append([K, name, omega.real, omega.imag])
    df = pd.DataFrame(rows, columns=['K', 'branch', 're_omega', 'im_omega'])
    paths = write_tables({'asymptotes': df}, cfg.out_dir, cfg.format)
    print(f"phi = {cfg.phi_over_pi} pi, xi = {cfg.xi}: {len(df)} rows")
    for path in paths:
        print(f"wrote {path}")
    return 0
