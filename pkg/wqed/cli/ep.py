import numpy as np
import pandas as pd

from ..api.common import NumericalError
from ..api.sweep import ep_curve
from .config import from_flags
from .output import write_tables

def ep(config=None, **flags):
    """Locate the exceptional point for each phase in the phi list.

    Failed phases are written with the marker 'error' and do not change
    the exit code as long as one phase succeeds.
    """
    cfg = from_flags(config, **flags)
    results = ep_curve([p * np.pi for p in cfg.phis],
                       ratio_bracket=(cfg.ratio_lo, cfg.ratio_hi),
                       window=cfg.window, jobs=cfg.jobs,
                       gamma_1d=cfg.gamma_1d)
    df = pd.DataFrame({
        'phi_over_pi': cfg.phis,
        'ratio_ep': [r.ratio_ep for r in results],
        'k_ep_over_pi': [r.K_ep / np.pi for r in results],
    })
    ok = [r for r in results if r.ok]
    if not ok:
        raise NumericalError("no exceptional point found for any phi")
    if cfg.format == 'json':
        df = df.astype(object).where(df.notna(), 'error')
    paths = write_tables({'ep_curve': df}, cfg.out_dir, cfg.format,
                         na_rep='error')
    for phi, r in zip(cfg.phis, results):
        if r.ok:
            print(f"phi = {phi} pi: ratio_ep = {r.ratio_ep:.4f}, "
                  f"K_ep = {r.K_ep / np.pi:.4f} pi")
        else:
            print(f"phi = {phi} pi: error ({r.error})")
    for path in paths:
        print(f"wrote {path}")
    return 0
