import os
import json
import logging
from dataclasses import dataclass, field, fields, asdict

import numpy as np

from ..api.common import ConfigError, WqedError
from ..api.model import ModelParams

logger = logging.getLogger(__name__)

JOBS_ENV = 'WQED_JOBS'

@dataclass
class RunConfig:
    """
    Settings shared by every command.

    Angles are given in units of pi; energies in units of gamma_1d.
    """
    phi_over_pi: float = 0.3
    xi: float = 0.4
    gamma_1d: float = 1.0
    kmin_over_pi: float = 0.005
    kmax_over_pi: float = 1.995
    kn: int = 400
    window_over_pi: float = 0.002
    emit_antibound: bool = False
    format: str = 'csv'
    jobs: int = 1
    out_dir: str = '.'
    oracle_n: int = 400
    phis: list = field(default_factory=lambda: [0.15, 0.2, 0.25, 0.3,
                                                 0.35, 0.4])
    ratio_lo: float = 0.02
    ratio_hi: float = 0.9
    strict: bool = False

    @property
    def phi(self):
        return self.phi_over_pi * np.pi

    @property
    def window(self):
        return self.window_over_pi * np.pi

    @property
    def k_grid(self):
        return (self.kmin_over_pi * np.pi, self.kmax_over_pi * np.pi,
                self.kn)

    def params(self, phi=None):
        return ModelParams(self.phi if phi is None else phi,
                           self.gamma_1d, self.xi)

    def validate(self):
        try:
            self.params()
        except WqedError as e:
            raise ConfigError(str(e)) from e
        if not 0 <= self.kmin_over_pi < self.kmax_over_pi <= 2:
            raise ConfigError(
                f"K range must satisfy 0 <= kmin < kmax <= 2 (units of pi), "
                f"got ({self.kmin_over_pi}, {self.kmax_over_pi})")
        if self.kn < 2:
            raise ConfigError(f"kn must be at least 2, got {self.kn}")
        if self.window_over_pi < 0:
            raise ConfigError("window must be non-negative")
        if self.format not in ('csv', 'json'):
            raise ConfigError(f"format must be 'csv' or 'json', "
                              f"got '{self.format}'")
        if self.jobs == 0:
            raise ConfigError("jobs must be nonzero")
        if self.oracle_n < 50:
            raise ConfigError(f"oracle_n must be at least 50, "
                              f"got {self.oracle_n}")
        if not self.phis:
            raise ConfigError("phi list is empty")
        if any(not 0 < p < 1 for p in self.phis):
            raise ConfigError("every phi must lie in (0, 1) (units of pi)")
        if not 0 < self.ratio_lo < self.ratio_hi < 1:
            raise ConfigError("ratio bracket must satisfy 0 < lo < hi < 1")
        return self

def load_config(path):
    """Read a flat JSON object of configuration keys."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config file '{path}': {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file '{path}' must hold a JSON object")
    return data

def resolve(config_file=None, **flags):
    """
    Merge defaults, config file, environment and flags.

    Later sources win: dataclass defaults, the JSON file, the
    ``WQED_JOBS`` environment variable, then non-None flags.

    Returns
    -------
    RunConfig
        Validated configuration.

    Raises
    ------
    ConfigError
        On unknown keys, bad values or invariant violations.
    """
    known = {f.name: f for f in fields(RunConfig)}
    values = {}
    if config_file is not None:
        values.update(load_config(config_file))
    if os.environ.get(JOBS_ENV):
        values['jobs'] = os.environ[JOBS_ENV]
    values.update({k: v for k, v in flags.items() if v is not None})
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {unknown}")
    config = RunConfig()
    for key, value in values.items():
        default = getattr(config, key)
        try:
            if isinstance(default, bool):
                if isinstance(value, str):
                    value = value.lower() in ('1', 'true', 'yes')
                value = bool(value)
            elif isinstance(default, int):
                value = int(value)
            elif isinstance(default, float):
                value = float(value)
            elif isinstance(default, list):
                value = [float(x) for x in value]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad value for '{key}': {value!r}") from e
        setattr(config, key, value)
    logger.debug("configuration: %s", asdict(config))
    return config.validate()

# Flag names that differ from the configuration keys.
FLAG_KEYS = {
    'phi': 'phi_over_pi',
    'kmin': 'kmin_over_pi',
    'kmax': 'kmax_over_pi',
    'window': 'window_over_pi',
}

def from_flags(config=None, **flags):
    """Resolve a configuration from command-line flag values."""
    renamed = {FLAG_KEYS.get(k, k): v for k, v in flags.items()}
    return resolve(config, **renamed)
