# Import standard libraries.
import logging
from dataclasses import dataclass, fields

# Import external libraries.
import numpy as np
from scipy import sparse

from .common import (DEFAULT_WINDOW, DomainError, DegenerateInputError,
                     check_momentum)
from .model import PairMomentum

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class HoppingCoeffs:
    """
    Tight-binding couplings of the relative-coordinate problem.

    The bulk rows read t2 y[r-2] + t1 y[r-1] + t0 y[r] + t1 y[r+1]
    + t2 y[r+2] = 0. Rows r = 1 and r = 2 carry the edge corrections
    dt0, dt1 (row 1) and dtm1 (row 2).
    """
    t2: complex
    t1: complex
    t0: complex
    dt0: complex
    dt1: complex
    dtm1: complex

    def __add__(self, other):
        return HoppingCoeffs(*(getattr(self, f.name) + getattr(other, f.name)
                               for f in fields(self)))

    def __sub__(self, other):
        return HoppingCoeffs(*(getattr(self, f.name) - getattr(other, f.name)
                               for f in fields(self)))

    def scale(self, factor):
        return HoppingCoeffs(*(getattr(self, f.name) * factor
                               for f in fields(self)))

    def as_array(self):
        return np.array([getattr(self, f.name) for f in fields(self)])

@dataclass(frozen=True)
class RelativeWave:
    """Amplitudes y[1], y[2], ... of the relative coordinate (y[0] = 0)."""
    chi: np.ndarray

    def __len__(self):
        return len(self.chi)

def _trig(params, K, window):
    check_momentum(params.phi, K, window)
    p = PairMomentum(params.phi, K)
    s_r, s_l = np.sin(p.phi_r), np.sin(p.phi_l)
    c_r, c_l = np.cos(p.phi_r), np.cos(p.phi_l)
    s2_r, s2_l = np.sin(2 * p.phi_r), np.sin(2 * p.phi_l)
    return s_r, s_l, c_r, c_l, s2_r, s2_l

def coeff_parts(params, K, window=DEFAULT_WINDOW):
    """
    Return the affine split of :meth:`coeffs` in omega.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.

    Returns
    -------
    tuple of HoppingCoeffs
        ``(alpha, beta)`` such that ``coeffs(omega) = alpha + omega * beta``.
    """
    s_r, s_l, c_r, c_l, s2_r, s2_l = _trig(params, K, window)
    g_r, g_l = params.gamma_r, params.gamma_l
    cot_r, cot_l = c_r / s_r, c_l / s_l
    cot2_r = (c_r ** 2 - s_r ** 2) / s2_r
    cot2_l = (c_l ** 2 - s_l ** 2) / s2_l
    ss = s_r * s_l
    alpha = HoppingCoeffs(
        t2=0.0,
        t1=-g_r / (2 * s_l) - g_l / (2 * s_r),
        t0=g_r * cot_l + g_l * cot_r,
        dt0=-g_r / s2_l - g_l / s2_r,
        dt1=0.0,
        dtm1=0.0,
    )
    beta = HoppingCoeffs(
        t2=1 / (2 * ss),
        t1=-(c_r + c_l) / ss,
        t0=2 * cot_r * cot_l + 1 / ss,
        dt0=2 * (cot2_r * cot2_l - cot_r * cot_l - 1 / (4 * ss)),
        dt1=1 / (s_r * s2_l),
        dtm1=1 / (s2_r * s_l),
    )
    return alpha, beta

def coeffs(params, K, omega, window=DEFAULT_WINDOW):
    """
    Compute the tight-binding couplings at (K, omega).

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    omega : complex
        Per-photon detuning in units of gamma_1d.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.

    Returns
    -------
    HoppingCoeffs
        Couplings and edge corrections. Real for real omega.

    Raises
    ------
    SingularMomentumError
        If K is inside a singular window; ``denominator`` names the
        vanishing sine.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.4)
        c = wqed.coeffs(params, 0.0, 0.0)
        c.t1, c.t0
        # (-1.2360679..., 1.4530850...)
    """
    alpha, beta = coeff_parts(params, K, window)
    return alpha + beta.scale(omega)

def dispersion_value(c, z):
    """
    Evaluate D(z) = t2 (z^2 + z^-2) + t1 (z + z^-1) + t0.

    Parameters
    ----------
    c : HoppingCoeffs
        Couplings.
    z : complex
        Bloch root candidate.

    Returns
    -------
    complex
        Value of the dispersion function.
    """
    if z == 0:
        raise DomainError("z must be nonzero", denominator='z')
    return c.t2 * (z ** 2 + z ** -2) + c.t1 * (z + 1 / z) + c.t0

def omega_of_z(params, K, z, window=DEFAULT_WINDOW, tol=1e-14):
    """
    Return the detuning at which z solves the dispersion equation.

    D(z, omega) is affine in omega, D = A(z) + omega B(z), so the
    solution is omega = -A(z) / B(z).

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    z : complex
        Bloch root.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    tol : float, default: 1e-14
        Relative threshold on |B(z)|.

    Returns
    -------
    complex
        Detuning omega.

    Raises
    ------
    DegenerateInputError
        If B(z) vanishes.
    """
    alpha, beta = coeff_parts(params, K, window)
    a = dispersion_value(alpha, z)
    b = dispersion_value(beta, z)
    scale = (abs(beta.t2) * (abs(z) ** 2 + abs(z) ** -2)
             + abs(beta.t1) * (abs(z) + 1 / abs(z)) + abs(beta.t0))
    if abs(b) <= tol * scale:
        raise DegenerateInputError(
            f"dispersion slope vanishes at z = {z}", denominator='B(z)')
    return complex(-a / b)

def partner_w(c, w_a, tol=1e-300):
    """
    Return the second root w_b = -t1/t2 - w_a of the quadratic in w.

    Raises
    ------
    DegenerateInputError
        If t2 vanishes (omega = 0).
    """
    if abs(c.t2) <= tol:
        raise DegenerateInputError("t2 vanishes (omega = 0)",
                                   denominator='t2')
    return -c.t1 / c.t2 - w_a

def z_from_w(w):
    """Return both roots of z + 1/z = w, the smaller modulus first."""
    root = np.sqrt(complex(w) ** 2 - 4)
    z1, z2 = (w + root) / 2, (w - root) / 2
    return (z1, z2) if abs(z1) <= abs(z2) else (z2, z1)

def _f1(c, z):
    return c.t0 + c.dt0 + (c.t1 + c.dt1) * z + c.t2 * z ** 2

def _f2(c, z):
    return (c.t1 + c.dtm1) / z + c.t0 + c.t1 * z + c.t2 * z ** 2

def boundary_det(c, z_a, z_b):
    """
    Determinant of the edge equations for a two-root Bloch wave.

    Parameters
    ----------
    c : HoppingCoeffs
        Couplings at the detuning shared by both roots.
    z_a, z_b : complex
        Bloch roots.

    Returns
    -------
    complex
        z_b f1(z_a) f2(z_b) - z_a f1(z_b) f2(z_a).
    """
    if z_a == 0 or z_b == 0:
        raise DomainError("Bloch roots must be nonzero", denominator='z')
    return (z_b * _f1(c, z_a) * _f2(c, z_b)
            - z_a * _f1(c, z_b) * _f2(c, z_a))

def reduced_boundary(c, z_a, z_b, normalize=False):
    """
    Edge determinant with the trivial factor (z_b - z_a) removed.

    Valid when z_a and z_b solve the dispersion equation at the same
    detuning; then boundary_det = (z_b - z_a) H / (z_a z_b)^2.

    Parameters
    ----------
    c : HoppingCoeffs
        Couplings.
    z_a, z_b : complex
        Bloch roots on the dispersion shell.
    normalize : bool, default: False
        Divide by the sum of the magnitudes of the terms.

    Returns
    -------
    complex
        H, or H relative to its term scale.
    """
    e1, e0 = c.dtm1, -c.t2
    l3, l2, l1, l0 = c.dt1, c.dt0, -c.t1, -c.t2
    sigma, pi = z_a + z_b, z_a * z_b
    terms = np.array([e1 * l0 * sigma, e0 * l0, e1 * l1 * pi, -e0 * l2 * pi,
                      -e1 * l3 * pi ** 2, -e0 * l3 * pi * sigma])
    value = terms.sum()
    if normalize:
        scale = np.abs(terms).sum()
        return value / scale if scale > 0 else value
    return value

def boundary_matrix(c, z_a, z_b):
    """Rows r = 1, 2 of the banded system applied to z_a^n and z_b^n."""
    return np.array([
        [z_a * _f1(c, z_a), z_b * _f1(c, z_b)],
        [z_a ** 2 * _f2(c, z_a), z_b ** 2 * _f2(c, z_b)],
    ], dtype=complex)

def inverse_F(phase, N):
    """
    Construct the banded inverse of the waveguide propagator.

    The propagator has entries
    -i (exp(i phase |r - r'|) + exp(i phase (r + r'))) for r, r' = 1..N.
    Its inverse is tridiagonal: off-diagonal 1/(2 sin phase), diagonal
    -cot phase, except the corners (1, 1) = -cot(2 phase) and
    (N, N) = i/2 - cot(phase)/2.

    Parameters
    ----------
    phase : float
        Phase per site in radians.
    N : int
        Matrix size (N >= 2).

    Returns
    -------
    scipy.sparse.csr_matrix
        Tridiagonal complex N x N matrix.

    Raises
    ------
    DomainError
        If sin(phase) or sin(2 phase) vanishes.

    Examples
    --------

    .. code:: python3

        m = wqed.inverse_F(np.pi / 3, 3).toarray()
        m[0, 0]  # 0.57735...
    """
    if N < 2:
        raise DomainError(f"N must be at least 2, got {N}")
    s, s2 = np.sin(phase), np.sin(2 * phase)
    if abs(s) < 1e-14:
        raise DomainError(f"sin({phase}) vanishes", denominator='sin(phase)')
    if abs(s2) < 1e-14:
        raise DomainError(f"sin(2 * {phase}) vanishes",
                          denominator='sin(2 phase)')
    cot = np.cos(phase) / s
    diag = np.full(N, -cot, dtype=complex)
    diag[0] = -np.cos(2 * phase) / s2
    diag[-1] = 0.5j - cot / 2
    off = np.full(N - 1, 1 / (2 * s), dtype=complex)
    return sparse.diags([off, diag, off], [-1, 0, 1], format='csr')

def assemble_chi(z_a, z_b, A, B, n_max):
    """
    Build the Bloch wave y[n] = A z_a^n + B z_b^n for n = 1..n_max.

    Parameters
    ----------
    z_a, z_b : complex
        Bloch roots.
    A, B : complex
        Amplitudes.
    n_max : int
        Number of sites (n_max >= 4).

    Returns
    -------
    RelativeWave
        The wave on sites 1..n_max.
    """
    if n_max < 4:
        raise DomainError(f"n_max must be at least 4, got {n_max}")
    n = np.arange(1, n_max + 1)
    return RelativeWave(A * np.power(complex(z_a), n)
                        + B * np.power(complex(z_b), n))

def row_matrix(c, n_rows):
    """Return the first ``n_rows`` rows of the banded operator (dense)."""
    width = n_rows + 2
    m = np.zeros((n_rows, width), dtype=complex)
    bulk = [c.t2, c.t1, c.t0, c.t1, c.t2]
    for r in range(n_rows):
        for k, value in zip(range(r - 2, r + 3), bulk):
            if 0 <= k < width:
                m[r, k] = value
    m[0, 0] += c.dt0
    m[0, 1] += c.dt1
    if n_rows > 1:
        m[1, 0] += c.dtm1
    return m

def row_residuals(c, state, n_rows=12):
    """
    Largest relative row residual of a state for given couplings.

    Parameters
    ----------
    c : HoppingCoeffs
        Couplings at the detuning of the state.
    state : PairEigenstate
        Any object with ``z_a``, ``z_b``, ``A`` and ``B``.
    n_rows : int, default: 12
        Number of rows checked.

    Returns
    -------
    float
        max_r |sum_j M_rj y_j| / sum_j |M_rj y_j|.
    """
    y = assemble_chi(state.z_a, state.z_b, state.A, state.B,
                     n_rows + 2).chi
    terms = row_matrix(c, n_rows) * y[None, :]
    num = np.abs(terms.sum(axis=1))
    den = np.abs(terms).sum(axis=1)
    with np.errstate(invalid='ignore', divide='ignore'):
        ratio = np.where(den > 0, num / den, 0.0)
    return float(ratio.max())

def residuals(params, K, state, n_rows=12, window=DEFAULT_WINDOW):
    """
    Check a state against the first rows of the banded system.

    Rows r = 1 and r = 2 use the edge-corrected couplings; rows r >= 3
    are bulk rows.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    state : PairEigenstate
        State to check.
    n_rows : int, default: 12
        Number of rows checked.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.

    Returns
    -------
    float
        Largest relative row residual.
    """
    return row_residuals(coeffs(params, K, state.omega, window), state,
                         n_rows)

def physical_amplitude(params, K, wave):
    """
    Map a Bloch wave to the pair amplitude on relative coordinates.

    The banded system acts on y = F_r chi; chi is recovered with the
    tridiagonal inverse. The last site lacks its right neighbor and is
    dropped.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    wave : RelativeWave
        Bloch wave y.

    Returns
    -------
    numpy.ndarray
        Amplitudes chi[1..len(wave) - 1].
    """
    phi_r = PairMomentum(params.phi, K).phi_r
    n = len(wave)
    return (inverse_F(phi_r, n) @ wave.chi)[:-1]
