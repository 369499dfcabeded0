# Import standard libraries.
import logging
from dataclasses import dataclass, replace

# Import external libraries.
import numpy as np
from numpy.polynomial import Polynomial

from .common import (DEFAULT_WINDOW, EPS_IM, EPS_Z, EPS_ACTIVE, EPS_EP,
                     RESIDUAL_GATE, TWO_PI, DomainError, DegenerateInputError,
                     SingularMomentumError, NumericalError, RootFindingError,
                     ConsistencyError, check_momentum, wrap_angle)
from .model import PairMomentum
from .kernel import (coeffs, omega_of_z, partner_w, z_from_w, boundary_det,
                     reduced_boundary, boundary_matrix, assemble_chi,
                     residuals)

logger = logging.getLogger(__name__)

BOUND = 'Bound'
ANTIBOUND = 'Antibound'
RESONANCE = 'Resonance'
UNCLASSIFIED = 'Unclassified'

# Relative size of the reduced edge determinant below which a root is kept.
SPURIOUS_TOL = 1e-7

@dataclass(frozen=True)
class PairEigenstate:
    """
    A discrete two-photon solution at fixed K.

    Parameters
    ----------
    omega : complex
        Per-photon detuning in units of gamma_1d.
    z_a, z_b : complex
        Bloch roots, ordered so that |z_a| <= |z_b|.
    A, B : complex
        Amplitudes with |A|^2 + |B|^2 = 1.
    kind : str
        One of 'Bound', 'Antibound', 'Resonance' or 'Unclassified'.
    residual : float
        Largest relative row residual.
    ep : bool
        The two roots coincide (exceptional point).
    interpolated : bool
        Filled in from neighboring grid points rather than solved.
    chi_a, chi_b : complex, optional
        Bulk amplitudes of the two roots in the physical wave
        chi = F_r^-1 y. When set, activity is decided on these; a root
        annihilated by F_r^-1 carries no weight.
    """
    omega: complex
    z_a: complex
    z_b: complex
    A: complex
    B: complex
    kind: str = UNCLASSIFIED
    residual: float = 0.0
    ep: bool = False
    interpolated: bool = False
    chi_a: complex = None
    chi_b: complex = None

    @property
    def active_roots(self):
        """Roots whose normalized amplitude exceeds the activity threshold."""
        if self.chi_a is None:
            a, b = abs(self.A), abs(self.B)
        else:
            a, b = abs(self.chi_a), abs(self.chi_b)
        norm = np.hypot(a, b)
        if not norm > 0:
            return []
        return [z for z, w in ((self.z_a, a), (self.z_b, b))
                if w / norm > EPS_ACTIVE]

    def conjugate(self):
        conj = lambda v: None if v is None else np.conj(v)
        return replace(self, omega=np.conj(self.omega),
                       z_a=np.conj(self.z_a), z_b=np.conj(self.z_b),
                       A=np.conj(self.A), B=np.conj(self.B),
                       chi_a=conj(self.chi_a), chi_b=conj(self.chi_b))

@dataclass(frozen=True)
class EliminationPoly:
    """
    Polynomial whose roots contain every Bloch root z_a.

    Parameters
    ----------
    coefficients : numpy.ndarray
        Complex coefficients in increasing powers of z.
    method : str
        Construction method, 'closed' or 'interpolate'.
    """
    coefficients: np.ndarray
    method: str = 'closed'

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, z):
        return Polynomial(self.coefficients)(z)

def _truncate(c, tol):
    c = np.asarray(c, dtype=complex)
    scale = np.abs(c).max()
    if scale == 0:
        raise ConsistencyError("elimination polynomial vanishes identically")
    c = c / scale
    keep = np.nonzero(np.abs(c) > tol)[0]
    return c[:keep[-1] + 1]

def _closed_form(params, K):
    p = PairMomentum(params.phi, K)
    a, b = 2 * np.cos(p.phi_r), 2 * np.cos(p.phi_l)
    g_r = params.gamma_r * np.sin(p.phi_r)
    g_l = params.gamma_l * np.sin(p.phi_l)
    x = Polynomial([0, 1])
    L1, L2 = Polynomial([1, -a, 1]), Polynomial([1, -b, 1])
    n = g_r * L2 + g_l * L1
    m = b * g_r * L2 + a * g_l * L1
    d = L1 * L2
    ua, ub = Polynomial([a, -2]), Polynomial([b, -2])
    shift = Polynomial([-2 * b, 4 - 2 * a ** 2 + a * b, 2 * a])
    U = 2 * x * ua * m + shift * n + 2 * g_r * (b - a) * d
    V = n * ua * ub
    return U ** 2 + m * ua * ub * U + V ** 2, n, m, d

def _edge_product(params, K, x, window):
    """Product of the edge determinants over both partner roots."""
    omega = omega_of_z(params, K, x, window)
    c = coeffs(params, K, omega, window)
    y1, y2 = z_from_w(partner_w(c, x + 1 / x))
    return boundary_det(c, x, y1) * boundary_det(c, x, y2)

def _interpolated(params, K, window, n_samples=32, radius=0.6,
                  offset=0.1, tol=1e-9):
    _, n, m, d = _closed_form(params, K)
    theta = offset + TWO_PI * np.arange(n_samples) / n_samples
    xs = radius * np.exp(1j * theta)
    values = np.array([_edge_product(params, K, x, window)
                       * d(x) ** 4 for x in xs])
    scaled = np.fft.fft(values) / n_samples
    if np.abs(scaled[15:]).max() > tol * np.abs(scaled).max():
        raise ConsistencyError(
            "cleared edge-determinant product exceeds degree 14")
    k = np.arange(15)
    full = Polynomial(scaled[:15] / (radius ** k * np.exp(1j * k * offset)))
    spurious = n * (Polynomial([1, 0, 1]) * n - Polynomial([0, 1]) * m)
    quotient, remainder = divmod(full, spurious)
    if np.abs(remainder.coef).max() > 1e-6 * np.abs(full.coef).max():
        raise ConsistencyError(
            "spurious factors do not divide the cleared product")
    return quotient.coef

def eliminate(params, K, method='closed', window=DEFAULT_WINDOW, tol=1e-10):
    """
    Eliminate omega and return the polynomial in z_a.

    For each z, omega follows from the dispersion equation and the
    partner roots z_b from the quadratic in w = z + 1/z. The product of
    the edge determinants over both partners is symmetric in the choice
    of square root, hence rational in z; clearing denominators leaves a
    polynomial of degree 8.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    method : {'closed', 'interpolate'}, default: 'closed'
        Closed-form expansion, or FFT interpolation of the cleared
        determinant product on a circle followed by deflation of the
        spurious factors.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    tol : float, default: 1e-10
        Relative tolerance for trailing coefficients.

    Returns
    -------
    EliminationPoly
        Normalized polynomial of degree at most 8.

    Raises
    ------
    ConsistencyError
        If the degree exceeds 8 after truncation.
    """
    check_momentum(params.phi, K, window)
    if method == 'closed':
        c = _closed_form(params, K)[0].coef
    elif method == 'interpolate':
        c = _interpolated(params, K, window)
    else:
        raise ValueError(f"Unknown elimination method: '{method}'")
    c = _truncate(c, tol)
    if len(c) - 1 > 8:
        raise ConsistencyError(
            f"elimination polynomial has degree {len(c) - 1} > 8")
    return EliminationPoly(c, method)

def _relative_value(c, z):
    den = np.sum(np.abs(c) * np.abs(z) ** np.arange(len(c)))
    if den == 0:
        return 0.0
    return abs(Polynomial(c)(z)) / den

def roots(poly, tol=1e-10, max_iter=50):
    """
    Find and polish every root of a polynomial.

    Roots start from the eigenvalues of the companion matrix and are
    refined by guarded Newton steps.

    Parameters
    ----------
    poly : EliminationPoly or array_like
        Polynomial (coefficients in increasing powers).
    tol : float, default: 1e-10
        Required |G(z)| / sum_k |g_k| |z|^k.
    max_iter : int, default: 50
        Newton iterations per root.

    Returns
    -------
    numpy.ndarray
        Complex roots.

    Raises
    ------
    RootFindingError
        If a root cannot be polished below ``tol``.

    Examples
    --------

    .. code:: python3

        wqed.roots([-1, 0, 1])
        # array([-1.+0.j,  1.+0.j])
    """
    c = np.asarray(getattr(poly, 'coefficients', poly), dtype=complex)
    if len(c) < 2:
        raise DomainError("polynomial must have degree at least 1")
    p = Polynomial(c)
    dp = p.deriv()
    found = []
    for z in p.roots():
        value = _relative_value(c, z)
        for _ in range(max_iter):
            if value < 1e-15:
                break
            slope = dp(z)
            if slope == 0:
                break
            trial = z - p(z) / slope
            trial_value = _relative_value(c, trial)
            if trial_value >= value:
                break
            z, value = trial, trial_value
        found.append(z)
    found = np.array(found, dtype=complex)
    values = np.array([_relative_value(c, z) for z in found])
    if values.size and values.max() > tol:
        raise RootFindingError(
            f"root polish stalled at relative value {values.max():.3g}",
            roots=found, values=values)
    return found

def _shell(params, K, x, y_prev, window):
    omega = omega_of_z(params, K, x, window)
    c = coeffs(params, K, omega, window)
    candidates = z_from_w(partner_w(c, x + 1 / x))
    if y_prev is None:
        y = min(candidates,
                key=lambda v: abs(reduced_boundary(c, x, v, normalize=True)))
    else:
        y = min(candidates, key=lambda v: abs(v - y_prev))
    return omega, c, y

def _polish(params, K, x, window, max_iter=30):
    """Secant refinement of z_a on the reduced edge determinant."""
    omega, c, y = _shell(params, K, x, None, window)
    h = reduced_boundary(c, x, y, normalize=True)
    best = (abs(h), x, y, omega, c)
    x_prev = x * (1 + 1e-7) + 1e-9
    try:
        _, c_prev, y_prev = _shell(params, K, x_prev, y, window)
    except DomainError:
        return best
    h_prev = reduced_boundary(c_prev, x_prev, y_prev, normalize=True)
    for _ in range(max_iter):
        if h == h_prev or best[0] < 1e-16:
            break
        x_new = x - h * (x - x_prev) / (h - h_prev)
        try:
            omega_new, c_new, y_new = _shell(params, K, x_new, y, window)
        except DomainError:
            break
        x_prev, h_prev = x, h
        x, y, omega, c = x_new, y_new, omega_new, c_new
        h = reduced_boundary(c, x, y, normalize=True)
        if abs(h) < best[0]:
            best = (abs(h), x, y, omega, c)
        if abs(x - x_prev) <= 1e-15 * max(abs(x), 1e-300):
            break
    return best

def _null_vector(c, z_a, z_b):
    _, _, vh = np.linalg.svd(boundary_matrix(c, z_a, z_b))
    v = np.conj(vh[-1])
    v = v / np.linalg.norm(v)
    k = np.argmax(np.abs(v))
    return v * (abs(v[k]) / v[k])

def _classify(omega, active, gamma_1d):
    eps_im = EPS_IM * gamma_1d
    if omega.imag < -eps_im:
        return RESONANCE
    if abs(omega.imag) <= eps_im and active:
        largest = max(abs(z) for z in active)
        if largest < 1 - EPS_Z:
            return BOUND
        if largest > 1 + EPS_Z:
            return ANTIBOUND
    return UNCLASSIFIED

def _bulk_factor(phase, z):
    # F^-1 acts on z^n in the bulk as multiplication by this factor
    return (z * z - 2 * np.cos(phase) * z + 1) / (2 * np.sin(phase) * z)

def _canonical(omega, z_a, z_b, A, B, gamma_1d, phi_r=None, residual=0.0):
    key = lambda z: (round(abs(z), 12), np.angle(z))
    if key(z_b) < key(z_a):
        z_a, z_b, A, B = z_b, z_a, B, A
    chi_a = chi_b = None
    if phi_r is not None:
        chi_a = complex(A * _bulk_factor(phi_r, z_a))
        chi_b = complex(B * _bulk_factor(phi_r, z_b))
    state = PairEigenstate(complex(omega), complex(z_a), complex(z_b),
                           complex(A), complex(B), residual=residual,
                           ep=abs(z_a - z_b) < EPS_EP, chi_a=chi_a,
                           chi_b=chi_b)
    return replace(state, kind=_classify(state.omega, state.active_roots,
                                         gamma_1d))

def _same(s1, s2):
    if abs(s1.omega - s2.omega) > 1e-8 * max(1.0, abs(s1.omega)):
        return False
    r1, r2 = s1.active_roots, s2.active_roots
    if len(r1) != len(r2):
        return False
    return all(min(abs(z - w) for w in r2) < 1e-6 * max(1.0, abs(z))
               for z in r1)

def _dedupe(states):
    unique = []
    for s in sorted(states, key=lambda s: s.residual):
        if not any(_same(s, u) for u in unique):
            unique.append(s)
    return sorted(unique, key=lambda s: (s.omega.real, s.omega.imag))

def raw_solutions(params, K, window=DEFAULT_WINDOW, method='closed'):
    """
    Return every solution of the edge problem before physical filtering.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    method : {'closed', 'interpolate'}, default: 'closed'
        Passed to :meth:`eliminate`.

    Returns
    -------
    list of PairEigenstate
        Deduplicated solutions, including growing-in-time ones and
        solutions on the unit circle.
    """
    poly = eliminate(params, K, method=method, window=window)
    phi_r = PairMomentum(params.phi, K).phi_r
    states = []
    for x in roots(poly):
        if abs(x) < 1e-300:
            continue
        try:
            h, z_a, z_b, omega, c = _polish(params, K, x, window)
        except DegenerateInputError as e:
            logger.debug("K=%.6g: root %s skipped (%s)", K, x, e)
            continue
        if abs(omega) < 1e-12 * params.gamma_1d:
            logger.debug("K=%.6g: root %s skipped (omega = 0)", K, x)
            continue
        if h > SPURIOUS_TOL:
            logger.debug("K=%.6g: root %s is spurious (%.3g)", K, x, h)
            continue
        A, B = _null_vector(c, z_a, z_b)
        state = _canonical(omega, z_a, z_b, A, B, params.gamma_1d, phi_r)
        if not state.ep:
            wave = assemble_chi(state.z_a, state.z_b, state.A, state.B, 8)
            if np.linalg.norm(wave.chi) < 1e-10:
                logger.debug("K=%.6g: trivial wave at omega=%s", K, omega)
                continue
        residual = residuals(params, K, state, window=window)
        states.append(replace(state, residual=residual))
    return _dedupe(states)

def solve_states(params, K, window=DEFAULT_WINDOW, strict=True,
                 method='closed'):
    """
    Find all discrete two-photon states at fixed K.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    strict : bool, default: True
        Raise on residual-gate failure; otherwise drop the state with a
        warning.
    method : {'closed', 'interpolate'}, default: 'closed'
        Passed to :meth:`eliminate`.

    Returns
    -------
    list of PairEigenstate
        States with Im omega <= 0 and no active root on the unit circle,
        sorted by (Re omega, Im omega). May be empty.

    Raises
    ------
    SingularMomentumError
        If K is inside a singular window.
    NumericalError
        If ``strict`` and a state fails the residual gate.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.9)
        for s in wqed.solve_states(params, np.pi):
            print(s.kind, s.omega)
    """
    check_momentum(params.phi, K, window)
    if params.chiral:
        return [chiral_solve(params, K, window=window)]
    eps_im = EPS_IM * params.gamma_1d
    out = []
    for state in raw_solutions(params, K, window=window, method=method):
        if state.omega.imag > eps_im:
            continue
        if any(abs(abs(z) - 1) < EPS_Z for z in state.active_roots):
            logger.debug("K=%.6g: omega=%s lies on the continuum", K,
                         state.omega)
            continue
        if state.residual > RESIDUAL_GATE:
            message = (f"K={K:.12g}: state at omega={state.omega:.12g} "
                       f"fails the residual gate ({state.residual:.3g})")
            if strict:
                raise NumericalError(message)
            logger.warning(message)
            continue
        out.append(state)
    return out

def chiral_solve(params, K, window=DEFAULT_WINDOW):
    """
    Closed-form bound state of a fully chiral array.

    omega = gamma cot(phi_r) and z_a = cos(phi_r), with B = 0. A mirrored
    array is mapped onto the forward one through K -> 2 pi - K, which
    flips the sign of the Bloch roots.

    Parameters
    ----------
    params : ModelParams
        Parameters with xi = 0.
    K : float
        Wavevector in radians.
    window : float, default: DEFAULT_WINDOW
        Exclusion half-width around the divergence at K = 2 phi.

    Returns
    -------
    PairEigenstate
        The bound state. At K = 2 phi + pi the state has omega = 0 and
        z_a = 0, and its residual is reported as NaN.

    Raises
    ------
    DomainError
        If xi is not 0.
    SingularMomentumError
        If K is within ``window`` of the divergence.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.0)
        wqed.chiral_solve(params, np.pi).omega
        # (-2.7527638409423476+0j)
    """
    if not params.chiral:
        raise DomainError(f"chiral_solve requires xi = 0, got {params.xi}")
    gamma = 2 * params.gamma_1d
    k_fwd = TWO_PI - K if params.mirrored else K
    sign = -1 if params.mirrored else 1
    if abs(wrap_angle(k_fwd - 2 * params.phi)) <= window:
        raise SingularMomentumError(
            f"K = {K:.12g} is within {window:.3g} of the chiral divergence",
            denominator='sin(phi_r)')
    p = PairMomentum(params.phi, k_fwd)
    omega = gamma * np.cos(p.phi_r) / np.sin(p.phi_r)
    z_a = sign * np.cos(p.phi_r)
    z_b = sign * np.exp(1j * p.phi_l)
    A, B = 1.0 + 0j, 0j
    if params.mirrored and z_a != 0:
        # The banded system acts on F_r chi, which carries an extra
        # unit-modulus component that F_r^-1 removes again.
        c = coeffs(params, K, omega, window=0.0)
        z_b = min((z_b, 1 / z_b),
                  key=lambda v: abs(boundary_det(c, z_a, v)))
        A, B = _null_vector(c, z_a, z_b)
    state = PairEigenstate(complex(omega), complex(z_a), complex(z_b),
                           complex(A), complex(B), kind=BOUND)
    try:
        residual = residuals(params, K, state, window=window)
    except SingularMomentumError:
        residual = np.nan
    return replace(state, residual=residual)
