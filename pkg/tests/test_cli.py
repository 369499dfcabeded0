import importlib
import json

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from wqed.__main__ import main
from wqed.api.common import ConfigError
from wqed.cli.config import resolve, from_flags
from wqed.api.sweep import EpResult
from wqed.cli.output import SPECTRUM_COLUMNS, write_tables

SMALL = ['--kmin', '0.05', '--kmax', '1.95', '--kn', '40']

def run(args):
    with pytest.raises(SystemExit) as e:
        main(args)
    return e.value.code

def test_sweep_writes_tables(tmp_path):
    assert run(['sweep', '--out-dir', str(tmp_path)] + SMALL) == 0
    spectrum = pd.read_csv(tmp_path / 'spectrum.csv')
    assert list(spectrum.columns) == SPECTRUM_COLUMNS
    assert len(spectrum) > 0
    assert set(spectrum['class']) <= {'Bound', 'Resonance'}
    assert (spectrum['im_omega'] <= 1e-8).all()
    assert (np.diff(spectrum['K']) >= 0).all()
    continuum = pd.read_csv(tmp_path / 'continuum.csv')
    assert list(continuum.columns) == ['K', 'label', 'lo', 'hi']

def test_sweep_is_deterministic(tmp_path):
    a, b = tmp_path / 'a', tmp_path / 'b'
    assert run(['sweep', '--out-dir', str(a)] + SMALL) == 0
    assert run(['sweep', '--out-dir', str(b), '--jobs', '2'] + SMALL) == 0
    assert ((a / 'spectrum.csv').read_bytes()
            == (b / 'spectrum.csv').read_bytes())

def test_sweep_emits_antibound(tmp_path):
    args = ['sweep', '--xi', '0.9', '--out-dir', str(tmp_path),
            '--kmin', '0.9', '--kmax', '1.1', '--kn', '5', '--emit-antibound']
    assert run(args) == 0
    spectrum = pd.read_csv(tmp_path / 'spectrum.csv')
    assert 'Antibound' in set(spectrum['class'])

def test_sweep_json(tmp_path):
    args = ['sweep', '--format', 'json', '--out-dir', str(tmp_path)] + SMALL
    assert run(args) == 0
    records = json.loads((tmp_path / 'spectrum.json').read_text())
    assert records and set(records[0]) == set(SPECTRUM_COLUMNS)

def test_chiral_closed_form(tmp_path):
    assert run(['chiral', '--out-dir', str(tmp_path)] + SMALL) == 0
    df = pd.read_csv(tmp_path / 'spectrum.csv')
    assert set(df['branch_id']) == {'I'}
    phi = 0.3 * np.pi
    assert_allclose(df['re_omega'], -2 / np.tan(df['K'] / 2 - phi),
                    rtol=1e-8)

def test_asymptotes_table(tmp_path):
    assert run(['asymptotes', '--out-dir', str(tmp_path)] + SMALL) == 0
    df = pd.read_csv(tmp_path / 'asymptotes.csv')
    assert list(df.columns) == ['K', 'branch', 're_omega', 'im_omega']
    assert set(df['branch']) <= {'plus', 'minus', 'fwd', 'bwd'}

def test_config_file_and_flags(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'xi': 0.7, 'kn': 12, 'phi_over_pi': 0.25}))
    cfg = from_flags(str(path), xi=0.5, phi=None)
    assert cfg.xi == 0.5
    assert cfg.kn == 12
    assert cfg.phi_over_pi == 0.25

def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv('WQED_JOBS', '3')
    assert resolve().jobs == 3
    assert resolve(jobs=2).jobs == 2

@pytest.mark.parametrize("values", [{'colour': 1}, {'xi': 1.5},
                                    {'kmin_over_pi': 1.0,
                                     'kmax_over_pi': 0.5},
                                    {'phis': []}])
def test_bad_config_values(values):
    with pytest.raises(ConfigError):
        resolve(**values)

def test_unknown_config_key_exit_code(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'colour': 'blue'}))
    assert run(['sweep', '-c', str(path), '--out-dir', str(tmp_path)]) == 2
    assert not (tmp_path / 'spectrum.csv').exists()

def test_bad_phase_exit_code(tmp_path):
    assert run(['sweep', '--phi', '1.5', '--out-dir', str(tmp_path)]) == 2

def test_empty_phase_list_is_usage_error():
    assert run(['ep', '--phis']) == 2

def test_verify_passes(capsys):
    assert run(['verify']) == 0
    out = capsys.readouterr().out
    assert 'FAIL' not in out

def test_verify_detects_corrupted_coupling(capsys):
    assert run(['verify', '--corrupt-dt1']) == 1
    out = capsys.readouterr().out
    assert 'failed: residual_gate' in out

def test_partial_files_are_removed(tmp_path):
    good = pd.DataFrame({'a': [1.0]})

    class Broken:
        def to_csv(self, *args, **kwargs):
            raise OSError('disk full')

    with pytest.raises(OSError):
        write_tables({'good': good, 'bad': Broken()}, str(tmp_path))
    assert not (tmp_path / 'good.csv').exists()

def test_csv_precision(tmp_path):
    df = pd.DataFrame({'x': [1 / 3]})
    write_tables({'t': df}, str(tmp_path))
    assert float((tmp_path / 't.csv').read_text().split()[1]) == 1 / 3

def _fake_curve(ok):
    def ep_curve(phis, **kwargs):
        out = []
        for phi, good in zip(phis, ok):
            if good:
                out.append(EpResult(phi, 0.2, 1.8 * np.pi, 1e-3))
            else:
                out.append(EpResult(phi, np.nan, np.nan,
                                    error='no sign change'))
        return out
    return ep_curve

def test_ep_marks_failed_phases(tmp_path, monkeypatch):
    module = importlib.import_module('wqed.cli.ep')
    monkeypatch.setattr(module, 'ep_curve', _fake_curve([True, False]))
    args = ['ep', '--phis', '0.2', '0.3', '--out-dir', str(tmp_path)]
    assert run(args) == 0
    df = pd.read_csv(tmp_path / 'ep_curve.csv', dtype=str,
                     keep_default_na=False)
    assert list(df.columns) == ['phi_over_pi', 'ratio_ep', 'k_ep_over_pi']
    assert float(df['ratio_ep'][0]) == 0.2
    assert_allclose(float(df['k_ep_over_pi'][0]), 1.8)
    assert list(df.iloc[1][['ratio_ep', 'k_ep_over_pi']]) == ['error',
                                                              'error']

def test_ep_json_marks_failed_phases(tmp_path, monkeypatch):
    module = importlib.import_module('wqed.cli.ep')
    monkeypatch.setattr(module, 'ep_curve', _fake_curve([False, True]))
    args = ['ep', '--phis', '0.2', '0.3', '--format', 'json',
            '--out-dir', str(tmp_path)]
    assert run(args) == 0
    records = json.loads((tmp_path / 'ep_curve.json').read_text())
    assert records[0]['ratio_ep'] == 'error'
    assert records[1]['ratio_ep'] == 0.2

def test_ep_fails_when_no_phase_succeeds(tmp_path, monkeypatch):
    module = importlib.import_module('wqed.cli.ep')
    monkeypatch.setattr(module, 'ep_curve', _fake_curve([False, False]))
    args = ['ep', '--phis', '0.2', '0.3', '--out-dir', str(tmp_path)]
    assert run(args) == 3
    assert not (tmp_path / 'ep_curve.csv').exists()

@pytest.mark.slow
def test_ep_single_phase(tmp_path):
    args = ['ep', '--phis', '0.3', '--jobs', '-1', '--out-dir', str(tmp_path)]
    assert run(args) == 0
    df = pd.read_csv(tmp_path / 'ep_curve.csv')
    assert_allclose(df['ratio_ep'][0], 0.236, atol=0.01)
