import logging

from ..api.solver import ANTIBOUND
from ..api.sweep import sweep_K
from .config import from_flags
from .output import spectrum_frame, write_tables

logger = logging.getLogger(__name__)

def sweep(config=None, **flags):
    """Sweep K and write 'spectrum' and 'continuum' tables.

    Parameters
    ----------
    config : str, optional
        Path to a JSON configuration file.
    flags
        Command-line overrides (see ``wqed sweep -h``).

    Returns
    -------
    int
        Exit code.
    """
    cfg = from_flags(config, **flags)
    params = cfg.params()
    branches = sweep_K(params, cfg.k_grid, window=cfg.window, jobs=cfg.jobs,
                       strict=cfg.strict)
    points = []
    for order, branch in enumerate(branches):
        for K, state in branch.points:
            if state.kind == ANTIBOUND and not cfg.emit_antibound:
                continue
            points.append((order, branch.id, K, state))
    spectrum, continuum = spectrum_frame(params, points)
    paths = write_tables({'spectrum': spectrum, 'continuum': continuum},
                         cfg.out_dir, cfg.format)
    counts = spectrum['class'].value_counts().to_dict()
    print(f"phi = {cfg.phi_over_pi} pi, xi = {cfg.xi}: "
          f"{len(branches)} branches, {len(spectrum)} states {counts}")
    for path in paths:
        print(f"wrote {path}")
    return 0
