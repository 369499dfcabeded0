# Import standard libraries.
import logging
from dataclasses import dataclass, field, replace

# Import external libraries.
import numpy as np

from .common import (TWO_PI, OMEGA_CAP, DomainError, wrap_angle)

logger = logging.getLogger(__name__)

LABELS = ('UU', 'UL', 'LL')

@dataclass(frozen=True)
class ModelParams:
    """
    Physical configuration of the atom array.

    Parameters
    ----------
    phi : float
        Phase acquired by a photon between neighboring atoms, in radians
        (0 < phi < pi).
    gamma_1d : float, default: 1.0
        Radiative rate into the waveguide; the energy unit.
    xi : float, default: 0.0
        Chirality ratio gamma_l / gamma_r in [0, 1].
    mirrored : bool, default: False
        Exchange the roles of the two propagation directions. Used to
        represent ratios above one.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.4)
        params.gamma_r, params.gamma_l
        # (1.4285714285714286, 0.5714285714285714)
    """
    phi: float
    gamma_1d: float = 1.0
    xi: float = 0.0
    mirrored: bool = False

    def __post_init__(self):
        if not 0 < self.phi < np.pi:
            raise DomainError(f"phi must lie in (0, pi), got {self.phi}")
        if not self.gamma_1d > 0:
            raise DomainError(
                f"gamma_1d must be positive, got {self.gamma_1d}")
        if not 0 <= self.xi <= 1:
            raise DomainError(f"xi must lie in [0, 1], got {self.xi}")

    @classmethod
    def from_ratio(cls, phi, ratio, gamma_1d=1.0):
        """Build parameters from any non-negative ratio gamma_l / gamma_r."""
        if ratio < 0:
            raise DomainError(f"ratio must be non-negative, got {ratio}")
        if ratio > 1:
            return cls(phi, gamma_1d, 1 / ratio, mirrored=True)
        return cls(phi, gamma_1d, ratio)

    @property
    def _major(self):
        return 2 * self.gamma_1d / (1 + self.xi)

    @property
    def _minor(self):
        return 2 * self.gamma_1d * self.xi / (1 + self.xi)

    @property
    def gamma_r(self):
        """Emission rate into right-moving photons."""
        return self._minor if self.mirrored else self._major

    @property
    def gamma_l(self):
        """Emission rate into left-moving photons."""
        return self._major if self.mirrored else self._minor

    @property
    def ratio(self):
        """gamma_l / gamma_r (infinite for a fully left-chiral array)."""
        if self.gamma_r == 0:
            return np.inf
        return self.gamma_l / self.gamma_r

    @property
    def chiral(self):
        """True when only one direction is coupled."""
        return self.xi == 0

    def swapped(self):
        """Return the parameters with gamma_r and gamma_l exchanged."""
        return replace(self, mirrored=not self.mirrored)

@dataclass(frozen=True)
class PairMomentum:
    """
    Center-of-mass wavevector of a photon pair.

    Parameters
    ----------
    phi : float
        Phase per site in radians.
    K : float
        Wavevector in radians.
    """
    phi: float
    K: float

    @property
    def phi_r(self):
        return self.phi - self.K / 2

    @property
    def phi_l(self):
        return self.phi + self.K / 2

@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    label: str

@dataclass
class ContinuumBands:
    """
    Two-polariton scattering continua at fixed K.

    Parameters
    ----------
    K : float
        Wavevector in radians.
    bands : list of Band
        Merged, disjoint intervals of per-photon detuning per label.
    """
    K: float
    bands: list = field(default_factory=list)

    def intervals(self, label):
        return [(b.lo, b.hi) for b in self.bands if b.label == label]

    def gaps(self):
        """Return the open intervals not covered by any band."""
        union = _merge(sorted((b.lo, b.hi) for b in self.bands))
        out = []
        edge = -np.inf
        for lo, hi in union:
            if lo > edge:
                out.append((edge, lo))
            edge = max(edge, hi)
        if edge < np.inf:
            out.append((edge, np.inf))
        return out

    def finite_gaps(self):
        return [g for g in self.gaps() if np.isfinite(g[0])
                and np.isfinite(g[1])]

@dataclass(frozen=True)
class EnergyRegion:
    """Result of :meth:`classify_energy`."""
    labels: frozenset

    @property
    def in_gap(self):
        return not self.labels

    def __str__(self):
        if self.in_gap:
            return 'gap'
        return '+'.join(x for x in LABELS if x in self.labels)

def _dispersion(params, q):
    q = np.asarray(q, dtype=float)
    return (params.gamma_r / 2 / np.tan((params.phi - q) / 2)
            + params.gamma_l / 2 / np.tan((params.phi + q) / 2))

def polariton_dispersion(params, q, tol=1e-9):
    """
    Compute the single-polariton detuning.

    Delta(q) = (gamma_r / 2) cot((phi - q) / 2)
    + (gamma_l / 2) cot((phi + q) / 2).

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    q : float
        Bloch wavevector in radians.
    tol : float, default: 1e-9
        Minimum allowed distance to a pole at q = +-phi.

    Returns
    -------
    float
        Detuning in units of gamma_1d.

    Raises
    ------
    DomainError
        If q is within ``tol`` of a pole.
    """
    for pole in (params.phi, -params.phi):
        if abs(wrap_angle(q - pole)) < tol:
            raise DomainError(
                f"q = {q} is within {tol} of the pole at {pole}",
                denominator='sin((phi -+ q)/2)')
    return float(_dispersion(params, q))

def _band(params, q):
    return np.where(np.abs(wrap_angle(q)) < params.phi, 'U', 'L')

def _merge(intervals):
    merged = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged

def continuum_bands(params, K, q_samples=4000, pole_window=1e-6,
                    cap=OMEGA_CAP):
    """
    Compute the two-polariton continua at fixed K.

    Each pair (q, K - q) of polaritons contributes the per-photon
    detuning (Delta(q) + Delta(K - q)) / 2. Samples are grouped into
    pole-free segments, labeled by the bands of both constituents (U for
    the upper band |q| < phi, L otherwise) and merged per label.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    q_samples : int, default: 4000
        Number of uniform samples over the Brillouin zone.
    pole_window : float, default: 1e-6
        Samples closer than this to a pole are dropped.
    cap : float, default: 1000
        Segments exceeding this magnitude (in units of gamma_1d) extend
        to infinity.

    Returns
    -------
    ContinuumBands
        Merged intervals per label.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.9)
        bands = wqed.continuum_bands(params, np.pi)
        bands.finite_gaps()
    """
    if q_samples < 1000:
        raise DomainError(f"q_samples must be at least 1000, got {q_samples}")
    phi = params.phi
    # The grid starts on a pole so that no segment wraps around.
    poles = np.array([phi, -phi, K - phi, K + phi]) - phi
    poles = np.sort(poles % TWO_PI)
    t = np.linspace(0, TWO_PI, q_samples, endpoint=False)
    extra = np.concatenate([poles + 2 * pole_window,
                            poles - 2 * pole_window]) % TWO_PI
    t = np.unique(np.concatenate([t, extra]))
    distance = np.abs(wrap_angle(t[:, None] - poles[None, :])).min(axis=1)
    t = t[distance > pole_window]
    q = t + phi

    omega = (_dispersion(params, q) + _dispersion(params, K - q)) / 2
    b1, b2 = _band(params, q), _band(params, K - q)
    labels = np.where(b1 == b2, np.char.add(b1, b2), 'UL')

    # Segment boundaries: a pole between neighbors or a label change.
    cut = np.searchsorted(t, poles)
    breaks = set(cut.tolist())
    breaks.update((np.nonzero(labels[1:] != labels[:-1])[0] + 1).tolist())
    breaks = sorted(x for x in breaks if 0 < x < len(t))
    per_label = {x: [] for x in LABELS}
    for segment in np.split(np.arange(len(t)), breaks):
        if segment.size == 0:
            continue
        values = omega[segment]
        lo, hi = float(values.min()), float(values.max())
        lo = -np.inf if lo < -cap else lo
        hi = np.inf if hi > cap else hi
        per_label[str(labels[segment[0]])].append((lo, hi))

    bands = []
    for label in LABELS:
        for lo, hi in _merge(sorted(per_label[label])):
            bands.append(Band(lo, hi, label))
    logger.debug("K=%.6g: %d continuum intervals", K, len(bands))
    return ContinuumBands(K, bands)

def classify_energy(bands, omega):
    """
    Locate a detuning relative to the continua.

    Parameters
    ----------
    bands : ContinuumBands
        Continua at the K of the state.
    omega : complex
        Per-photon detuning; only the real part is used.

    Returns
    -------
    EnergyRegion
        ``in_gap`` is True when no band contains Re omega; otherwise
        ``labels`` holds every label whose interval contains it.
    """
    x = float(np.real(omega))
    found = {b.label for b in bands.bands if b.lo <= x <= b.hi}
    return EnergyRegion(frozenset(found))
