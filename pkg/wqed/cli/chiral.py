import numpy as np

from ..api.common import TWO_PI, DomainError
from ..api.model import ModelParams
from ..api.solver import chiral_solve
from .config import from_flags
from .output import spectrum_frame, write_tables

def chiral(config=None, **flags):
    """Write the closed-form branch of the fully chiral chain (xi = 0).

    The table has the 'spectrum' schema with a single branch 'I'. Only
    the window around K = 2 phi is skipped.
    """
    cfg = from_flags(config, **flags)
    params = ModelParams(cfg.phi, cfg.gamma_1d, 0.0)
    k_min, k_max, n = cfg.k_grid
    points = []
    for K in np.linspace(k_min, k_max, n):
        if not 0 < K < TWO_PI:
            continue
        try:
            state = chiral_solve(params, K, window=cfg.window)
        except DomainError:
            continue
        points.append((0, 'I', K, state))
    spectrum, continuum = spectrum_frame(params, points)
    paths = write_tables({'spectrum': spectrum, 'continuum': continuum},
                         cfg.out_dir, cfg.format)
    print(f"phi = {cfg.phi_over_pi} pi, chiral: {len(spectrum)} K points")
    for path in paths:
        print(f"wrote {path}")
    return 0
