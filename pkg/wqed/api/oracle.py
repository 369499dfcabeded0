# Import standard libraries.
import logging
from dataclasses import dataclass

# Import external libraries.
import numpy as np
from numpy.polynomial import polynomial as P
from scipy import linalg

from .common import DEFAULT_WINDOW, NumericalError, check_momentum
from .model import PairMomentum, polariton_dispersion
from .kernel import inverse_F, assemble_chi, physical_amplitude

logger = logging.getLogger(__name__)

HK_DIRECT = 'hk_direct'
GENERALIZED = 'generalized_banded'
F_DENSE = 'f_dense'

@dataclass
class DenseOperator:
    """
    Dense matrix on relative coordinates r = 1..N.

    Parameters
    ----------
    entries : numpy.ndarray
        The N x N complex matrix. For the generalized build, the left
        matrix of the pencil.
    N : int
        Truncation size.
    provenance : str
        'hk_direct', 'generalized_banded' or 'f_dense'.
    rhs : numpy.ndarray, optional
        Right matrix of a generalized pencil ``entries v = omega rhs v``.
    """
    entries: np.ndarray
    N: int
    provenance: str
    rhs: np.ndarray = None

def dense_F(phase, N):
    """
    Dense waveguide propagator -i (exp(i p |r - r'|) + exp(i p (r + r'))).

    Parameters
    ----------
    phase : float
        Phase per site in radians.
    N : int
        Size.

    Returns
    -------
    numpy.ndarray
        N x N complex symmetric matrix.
    """
    r = np.arange(1, N + 1)
    diff = np.abs(r[:, None] - r[None, :])
    total = r[:, None] + r[None, :]
    return -1j * (np.exp(1j * phase * diff) + np.exp(1j * phase * total))

def build_hk(params, K, N, window=DEFAULT_WINDOW):
    """
    Build the truncated pair Hamiltonian at fixed K.

    [H_K] = gamma_r F(phi_r) + gamma_l F(phi_l); its eigenvalues
    approximate 2 omega.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    N : int
        Truncation size (N >= 50).
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.

    Returns
    -------
    DenseOperator
        Operator with provenance 'hk_direct'.
    """
    if N < 50:
        raise ValueError(f"N must be at least 50, got {N}")
    check_momentum(params.phi, K, window)
    p = PairMomentum(params.phi, K)
    entries = (params.gamma_r * dense_F(p.phi_r, N)
               + params.gamma_l * dense_F(p.phi_l, N))
    return DenseOperator(entries, N, HK_DIRECT)

def build_generalized(params, K, N, real_corner=False, window=DEFAULT_WINDOW):
    """
    Build the banded generalized form of the pair problem.

    With x = F_r^-1 y the eigenproblem H_K x = 2 omega x becomes
    (gamma_r F_l^-1 + gamma_l F_r^-1) y = omega (2 F_l^-1 F_r^-1) y:
    a tridiagonal matrix on the left and a pentadiagonal one on the
    right. The complex (N, N) corner of each inverse is kept unless
    ``real_corner`` is set.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    N : int
        Truncation size (N >= 50).
    real_corner : bool, default: False
        Replace the (N, N) corners by their real parts.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.

    Returns
    -------
    DenseOperator
        Pencil with ``entries`` (tridiagonal) and ``rhs``
        (pentadiagonal); its eigenvalues are omega.
    """
    if N < 50:
        raise ValueError(f"N must be at least 50, got {N}")
    check_momentum(params.phi, K, window)
    p = PairMomentum(params.phi, K)
    inv_r = inverse_F(p.phi_r, N).toarray()
    inv_l = inverse_F(p.phi_l, N).toarray()
    if real_corner:
        inv_r[-1, -1] = inv_r[-1, -1].real
        inv_l[-1, -1] = inv_l[-1, -1].real
    lhs = params.gamma_r * inv_l + params.gamma_l * inv_r
    rhs = 2 * inv_l @ inv_r
    return DenseOperator(lhs, N, GENERALIZED, rhs=rhs)

def eig_all(op, vectors=False):
    """
    Diagonalize a dense operator.

    LAPACK's balanced Hessenberg QR (via :func:`scipy.linalg.eig`)
    handles both the standard and the generalized problem.

    Parameters
    ----------
    op : DenseOperator
        Operator to diagonalize.
    vectors : bool, default: False
        Also return right eigenvectors (as columns).

    Returns
    -------
    numpy.ndarray or tuple
        Per-photon detunings omega, sorted by real part, and optionally
        the matching eigenvectors.

    Raises
    ------
    NumericalError
        If LAPACK does not converge or an eigenvalue is infinite.
    """
    try:
        if op.rhs is None:
            values, vecs = linalg.eig(op.entries, right=True)
        else:
            values, vecs = linalg.eig(op.entries, op.rhs, right=True)
    except linalg.LinAlgError as e:
        raise NumericalError(f"eigensolver failed: {e}") from e
    if not np.all(np.isfinite(values)):
        raise NumericalError("eigensolver returned non-finite values")
    if op.provenance == HK_DIRECT:
        values = values / 2
    order = np.lexsort((values.imag, values.real))
    values, vecs = values[order], vecs[:, order]
    if vectors:
        return values, vecs
    return values

def generalized_eigvals(params, K, N, real_corner=False):
    """Shortcut for ``eig_all(build_generalized(...))``."""
    return eig_all(build_generalized(params, K, N, real_corner=real_corner))

def _lattice_sum(x, damping):
    # sum over s >= 1 of (x exp(-damping))^s, truncated below 1e-17
    n = int(np.ceil(40 / damping))
    s = np.arange(1, n + 1)
    return np.sum((x * np.exp(-damping)) ** s)

def _bloch_sum(params, q, method, eta0=0.005, n_points=8):
    phases = [params.phi - q, params.phi + q]
    rates = [params.gamma_r, params.gamma_l]
    total = -0.5j * (params.gamma_r + params.gamma_l)
    for gamma, theta in zip(rates, phases):
        x = np.exp(1j * theta)
        if method == 'geometric':
            tail = x / (1 - x)
        elif method == 'damped':
            t = np.arange(1, n_points + 1) / n_points
            samples = np.array([_lattice_sum(x, eta0 * u) for u in t])
            # Polynomial extrapolation of the damped sums to zero damping.
            fit_re = P.polyfit(t, samples.real, n_points - 1)
            fit_im = P.polyfit(t, samples.imag, n_points - 1)
            tail = fit_re[0] + 1j * fit_im[0]
        else:
            raise ValueError(f"Unknown method: '{method}'")
        total += -1j * gamma * tail
    return total

def single_excitation_check(params, q, method='geometric'):
    """
    Compare the closed-form dispersion with the lattice Bloch sum.

    The single-excitation kernel couples sites s apart with
    -i gamma_r exp(i phi s) to the right and -i gamma_l exp(i phi s)
    to the left, plus -i (gamma_r + gamma_l) / 2 on site. Its Bloch
    transform is summed either as a geometric series or as damped
    lattice sums extrapolated to zero damping.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    q : float
        Bloch wavevector in radians, away from the poles.
    method : {'geometric', 'damped'}, default: 'geometric'
        Summation method.

    Returns
    -------
    float
        |Delta_closed(q) - Delta_sum(q)|.
    """
    closed = polariton_dispersion(params, q)
    summed = _bloch_sum(params, q, method)
    if abs(summed.imag) > 1e-6 * max(1.0, abs(summed)):
        logger.warning("Bloch sum has imaginary part %.3g at q=%.6g",
                       summed.imag, q)
    return float(abs(closed - summed))

def bloch_sum(params, q, method='geometric'):
    """Return the lattice Bloch sum of the single-excitation kernel."""
    return complex(_bloch_sum(params, q, method))

def match_state(eigs, eigvecs, target, n_compare=20, params=None, K=None):
    """
    Locate a solver state in a dense spectrum.

    Parameters
    ----------
    eigs : numpy.ndarray
        Dense eigenvalues (per-photon omega).
    eigvecs : numpy.ndarray
        Matching eigenvectors as columns, in the basis of ``H_K``.
    target : PairEigenstate
        State to match.
    n_compare : int, default: 20
        Number of leading sites in the overlap.
    params : ModelParams, optional
        Needed to map the Bloch wave to the pair amplitude. Without it
        the Bloch wave is compared directly.
    K : float, optional
        Wavevector of the target.

    Returns
    -------
    tuple of float
        ``(distance, overlap)`` for the closest eigenvalue.
    """
    k = int(np.argmin(np.abs(eigs - target.omega)))
    distance = float(abs(eigs[k] - target.omega))
    if eigvecs is None:
        return distance, np.nan
    wave = assemble_chi(target.z_a, target.z_b, target.A, target.B,
                        n_compare + 1)
    if params is None:
        chi = wave.chi[:n_compare]
    else:
        chi = physical_amplitude(params, K, wave)
    v = eigvecs[:n_compare, k]
    den = np.linalg.norm(v) * np.linalg.norm(chi)
    overlap = float(abs(np.vdot(v, chi)) / den) if den > 0 else 0.0
    return distance, overlap
