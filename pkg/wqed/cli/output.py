import os
import json
import logging

import numpy as np
import pandas as pd

from ..api.model import classify_energy, continuum_bands

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

SPECTRUM_COLUMNS = ['K', 'branch_id', 'class', 're_omega', 'im_omega',
                    're_za', 'im_za', 're_zb', 'im_zb', 'abs_za', 'abs_zb',
                    'residual', 'region']

def spectrum_frame(params, points, q_samples=4000):
    """
    Build the spectrum table.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    points : list of tuple
        ``(order, branch_id, K, PairEigenstate)``; ``order`` is the
        creation index of the branch.
    q_samples : int, default: 4000
        Samples for the continuum used in the region column.

    Returns
    -------
    tuple of pandas.DataFrame
        Spectrum and continuum tables, sorted by K then branch.
    """
    points = sorted(points, key=lambda x: (x[2], x[0]))
    bands = {}
    rows = []
    for _, branch_id, K, s in points:
        if K not in bands:
            bands[K] = continuum_bands(params, K, q_samples=q_samples)
        rows.append([K, branch_id, s.kind, s.omega.real, s.omega.imag,
                     s.z_a.real, s.z_a.imag, s.z_b.real, s.z_b.imag,
                     abs(s.z_a), abs(s.z_b), s.residual,
                     str(classify_energy(bands[K], s.omega))])
    spectrum = pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)
    continuum = continuum_frame(bands.values())
    return spectrum, continuum

def continuum_frame(all_bands):
    rows = [[b.K, band.label, band.lo, band.hi]
            for b in sorted(all_bands, key=lambda b: b.K)
            for band in b.bands]
    return pd.DataFrame(rows, columns=['K', 'label', 'lo', 'hi'])

def write_tables(tables, out_dir, fmt='csv', na_rep=''):
    """
    Write named tables to ``out_dir``.

    CSV uses 17 significant digits; JSON holds an array of records with
    the same keys. Files written before a failure are removed.

    Parameters
    ----------
    tables : dict
        Mapping of file stem to :class:`pandas.DataFrame`.
    out_dir : str
        Output directory (created if missing).
    fmt : {'csv', 'json'}, default: 'csv'
        Output format.
    na_rep : str, default: ''
        CSV representation of missing values.

    Returns
    -------
    list of str
        Paths written.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    try:
        for stem, df in tables.items():
            path = os.path.join(out_dir, f'{stem}.{fmt}')
            if fmt == 'csv':
                df.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                          na_rep=na_rep)
            else:
                records = df.replace({np.nan: None}).to_dict('records')
                with open(path, 'w') as f:
                    json.dump(records, f, indent=1)
            written.append(path)
    except Exception:
        remove_files(written)
        raise
    return written

def remove_files(paths):
    for path in paths:
        try:
            os.remove(path)
        except OSError:
            logger.warning("could not remove partial file %s", path)
