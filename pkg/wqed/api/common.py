# Import standard libraries.
import logging

# Import external libraries.
import numpy as np

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi

# Half-width of the excluded neighborhood around every singular K.
DEFAULT_WINDOW = 1e-3 * TWO_PI

# Classification thresholds (energies in units of gamma_1d).
EPS_IM = 1e-8
EPS_Z = 1e-6
EPS_ACTIVE = 1e-6
EPS_EP = 1e-6

RESIDUAL_GATE = 1e-9

# Magnitude above which a detuning is treated as divergent.
OMEGA_CAP = 1e3

class WqedError(Exception):
    """Base class for every error raised by wqed."""

class DomainError(WqedError, ValueError):
    """
    Input outside the domain of an operation.

    Parameters
    ----------
    message : str
        Human-readable description.
    denominator : str, optional
        Name of the quantity that vanished, if any.
    """
    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator

class SingularMomentumError(DomainError):
    """K lies inside the excluded window of a singular momentum."""

class DegenerateInputError(DomainError):
    """A closed-form expression has a vanishing leading factor."""

class NumericalError(WqedError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

class RootFindingError(NumericalError):
    """
    Polynomial roots could not be polished.

    Parameters
    ----------
    message : str
        Human-readable description.
    roots : array_like, optional
        Roots after the last iteration.
    values : array_like, optional
        Relative polynomial values at those roots.
    """
    def __init__(self, message, roots=None, values=None):
        super().__init__(message)
        self.roots = roots
        self.values = values

class ConsistencyError(NumericalError):
    """An internal algebraic identity does not hold."""

class BracketError(WqedError):
    """A bisection bracket does not enclose a sign change."""

class ConfigError(WqedError):
    """Invalid run configuration."""

def wrap_angle(x):
    """
    Wrap an angle into [-pi, pi).

    Parameters
    ----------
    x : float or numpy.ndarray
        Angle in radians.

    Returns
    -------
    float or numpy.ndarray
        Wrapped angle.
    """
    return (np.asarray(x) + np.pi) % TWO_PI - np.pi

def singular_set(phi):
    """
    Return the singular momenta for a given phase.

    At these K one of sin(phi_r), sin(phi_l), sin(2 phi_r) or
    sin(2 phi_l) vanishes, where phi_r = phi - K/2 and
    phi_l = phi + K/2.

    Parameters
    ----------
    phi : float
        Phase per lattice site in radians.

    Returns
    -------
    list of tuple
        Pairs ``(K, denominator)`` sorted by K, with K in (0, 2 pi).

    Examples
    --------

    .. code:: python3

        wqed.singular_set(0.3 * np.pi)
        # [(0.4 pi, 'sin(2 phi_l)'), (0.6 pi, 'sin(phi_r)'),
        #  (1.4 pi, 'sin(phi_l)'), (1.6 pi, 'sin(2 phi_r)')]
    """
    candidates = [
        (2 * phi, 'sin(phi_r)'),
        (TWO_PI - 2 * phi, 'sin(phi_l)'),
        (2 * phi + np.pi, 'sin(2 phi_r)'),
        (np.pi - 2 * phi, 'sin(2 phi_l)'),
    ]
    points = []
    for k, name in candidates:
        k = k % TWO_PI
        if 0 < k < TWO_PI:
            points.append((float(k), name))
    return sorted(points)

def nearest_singular(phi, K):
    """Return ``(distance, K_s, denominator)`` for the closest singular K."""
    best = (np.inf, None, None)
    for k_s, name in singular_set(phi):
        d = abs(wrap_angle(K - k_s))
        if d < best[0]:
            best = (float(d), k_s, name)
    return best

def check_momentum(phi, K, window=DEFAULT_WINDOW):
    """
    Raise if K is within ``window`` of a singular momentum.

    Parameters
    ----------
    phi : float
        Phase per lattice site in radians.
    K : float
        Center-of-mass wavevector in radians.
    window : float, default: DEFAULT_WINDOW
        Half-width of the excluded neighborhood.

    Raises
    ------
    SingularMomentumError
        If K is too close to a singular momentum. The ``denominator``
        attribute names the vanishing sine.
    """
    d, k_s, name = nearest_singular(phi, K)
    if d <= window:
        raise SingularMomentumError(
            f"K = {K:.12g} is within {window:.3g} of the singular "
            f"momentum {k_s:.12g} where {name} vanishes.",
            denominator=name)

def roman(n):
    """Convert a positive integer to a Roman numeral."""
    table = [(1000, 'M'), (900, 'CM'), (500, 'D'), (400, 'CD'),
             (100, 'C'), (90, 'XC'), (50, 'L'), (40, 'XL'),
             (10, 'X'), (9, 'IX'), (5, 'V'), (4, 'IV'), (1, 'I')]
    out = ''
    for value, symbol in table:
        while n >= value:
            out += symbol
            n -= value
    return out
