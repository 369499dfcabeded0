# Import standard libraries.
import logging
from dataclasses import dataclass

# Import external libraries.
import numpy as np
from scipy import signal

from .common import TWO_PI, DomainError
from .model import PairMomentum

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class AsymptoteEval:
    """Closed-form asymptotes at one K (NaN where not defined)."""
    K: float
    omega_plus: complex
    omega_minus: complex
    omega_fwd: complex
    omega_bwd: complex

def discriminant_omega(params):
    """
    Return the two leading coefficients of the K -> 0 divergence.

    Omega = (gamma_r - gamma_l) / 2 +- i sqrt(gamma_r gamma_l) are the
    zeros of 4 Omega^2 + 4 Omega (gamma_l - gamma_r) + 4 gamma_1d^2.
    Near K = 0 the resonance pair behaves as -Omega / K.

    Parameters
    ----------
    params : ModelParams
        Model parameters.

    Returns
    -------
    tuple of complex
        ``(Omega_plus, Omega_minus)``; both have modulus gamma_1d.
    """
    g_r, g_l = params.gamma_r, params.gamma_l
    root = 1j * np.sqrt(g_r * g_l)
    return (g_r - g_l) / 2 + root, (g_r - g_l) / 2 - root

def omega_k0(params, K, sign=+1):
    """
    Resonance pair near K = 0.

    omega = (gamma_l - gamma_r +- 2i sqrt(gamma_r gamma_l)) / (2K)
    + (gamma_1d / 2) cot(phi). The constant does not depend on the
    chirality. For K near 2 pi pass K - 2 pi.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians (nonzero).
    sign : {+1, -1}, default: +1
        Branch; -1 gives the decaying member (Im omega < 0) for K > 0.

    Returns
    -------
    complex
        Asymptotic detuning.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.25)
        wqed.omega_k0(params, 0.1, sign=-1)
        # (-5.6367...-8j)
    """
    if K == 0:
        raise DomainError("omega_k0 diverges at K = 0", denominator='K')
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    g_r, g_l = params.gamma_r, params.gamma_l
    leading = (g_l - g_r + sign * 2j * np.sqrt(g_r * g_l)) / (2 * K)
    return complex(leading + params.gamma_1d / 2 / np.tan(params.phi))

def _rates(params, K, direction):
    p = PairMomentum(params.phi, K)
    if direction == 'fwd':
        return params.gamma_r, params.gamma_l, p.phi_r, p.phi_l
    if direction == 'bwd':
        return params.gamma_l, params.gamma_r, p.phi_l, p.phi_r
    raise ValueError(f"direction must be 'fwd' or 'bwd', got '{direction}'")

def omega_edge(params, K, direction='fwd'):
    """
    Branch near a divergence of the tight-binding couplings.

    fwd: omega = gamma_r cot(phi_r) + Sigma with
    Sigma = -i gamma_l (1 - exp(2i phi_l) cos(2 phi_r))
    / (2 (1 - cos(phi_r) exp(i phi_l))^2), the first-order shift in
    gamma_l of the fully chiral state. bwd swaps the two directions.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    direction : {'fwd', 'bwd'}, default: 'fwd'
        Which divergence (K = 2 phi or K = 2 pi - 2 phi).

    Returns
    -------
    complex
        Asymptotic detuning.

    Raises
    ------
    DomainError
        If sin(phi_r) or the perturbative denominator vanishes.
    """
    g_main, g_other, p_main, p_other = _rates(params, K, direction)
    if abs(np.sin(p_main)) < 1e-15:
        raise DomainError("cot diverges", denominator='sin(phi_r)')
    return complex(g_main / np.tan(p_main)
                   + _sigma_closed(g_other, p_main, p_other))

def _sigma_closed(gamma, p_main, p_other):
    mu, beta = np.cos(p_main), np.exp(1j * p_other)
    den = 1 - mu * beta
    if abs(den) < 1e-15:
        raise DomainError("1 - cos(phi_r) exp(i phi_l) vanishes",
                          denominator='1 - mu beta')
    return (-1j * gamma * (1 - beta ** 2 * np.cos(2 * p_main))
            / (2 * den ** 2))

def sigma_closed(params, K, direction='fwd'):
    """
    First-order shift from the closed geometric sums.

    The wave chi_n = mu^(n-1) with mu = cos(phi_r) gives
    sum beta^|n-n'| mu^(n+n'-2) = (1 + mu beta) / ((1 - mu^2)(1 - mu beta)),
    sum beta^(n+n') mu^(n+n'-2) = beta^2 / (1 - mu beta)^2 and
    sum mu^(2n-2) = 1 / (1 - mu^2).
    """
    g_main, g_other, p_main, p_other = _rates(params, K, direction)
    mu, beta = np.cos(p_main), np.exp(1j * p_other)
    if abs(mu) >= 1:
        raise DomainError("geometric sums diverge for |mu| >= 1",
                          denominator='1 - mu^2')
    s1 = (1 + mu * beta) / ((1 - mu ** 2) * (1 - mu * beta))
    s2 = beta ** 2 / (1 - beta * mu) ** 2
    norm = 1 / (1 - mu ** 2)
    return complex(-1j * g_other * (s1 + s2) / (2 * norm))

def sigma_numeric(params, K, n_terms=None, direction='fwd'):
    """
    First-order shift by direct double summation.

    Evaluates gamma_l <chi|F_l|chi> / (2 <chi|chi>) for chi_n = mu^(n-1),
    mu = cos(phi_r), truncated at ``n_terms`` sites.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.
    n_terms : int, optional
        Number of sites. By default the smallest count with
        |mu|^n_terms < 1e-16.
    direction : {'fwd', 'bwd'}, default: 'fwd'
        Which chiral state is perturbed.

    Returns
    -------
    complex
        The shift Sigma.

    Raises
    ------
    DomainError
        If |mu| >= 1.
    """
    g_main, g_other, p_main, p_other = _rates(params, K, direction)
    mu, beta = np.cos(p_main), np.exp(1j * p_other)
    if abs(mu) >= 1:
        raise DomainError("the chiral state is not normalizable",
                          denominator='1 - mu^2')
    if n_terms is None:
        if mu == 0:
            n_terms = 1
        else:
            n_terms = int(np.ceil(np.log(1e-16) / np.log(abs(mu)))) + 1
            n_terms = min(max(n_terms, 1), 10 ** 6)
    n = np.arange(1, n_terms + 1)
    chi = mu ** (n - 1)
    # sum over n, n' of beta^|n - n'| chi_n chi_n' from the autocorrelation
    auto = signal.correlate(chi, chi, mode="full", method="fft")[n_terms - 1:]
    bulk = auto[0] + 2 * np.sum(beta ** n[:-1] * auto[1:])
    image = (chi @ beta ** n) ** 2
    norm = chi @ chi
    logger.debug("sigma_numeric: %d terms", n_terms)
    return complex(-1j * g_other * (bulk + image) / (2 * norm))

def omega_of_w(params, K, w):
    """
    Detuning on the dispersion shell as a function of w = z + 1/z.

    omega = gamma_r sin(phi_r) / (w - 2 cos phi_r)
    + gamma_l sin(phi_l) / (w - 2 cos phi_l).
    """
    p = PairMomentum(params.phi, K)
    return (params.gamma_r * np.sin(p.phi_r) / (w - 2 * np.cos(p.phi_r))
            + params.gamma_l * np.sin(p.phi_l) / (w - 2 * np.cos(p.phi_l)))

def evaluate(params, K):
    """
    Evaluate every closed-form asymptote at one K.

    The K -> 0 pair uses K - 2 pi when K > pi.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    K : float
        Wavevector in radians.

    Returns
    -------
    AsymptoteEval
        Asymptotes; entries that are undefined at K are NaN.
    """
    k0 = K - TWO_PI if K > np.pi else K
    values = []
    for func, arg in [(omega_k0, +1), (omega_k0, -1),
                      (omega_edge, 'fwd'), (omega_edge, 'bwd')]:
        try:
            if func is omega_k0:
                values.append(func(params, k0, arg))
            else:
                values.append(func(params, K, arg))
        except DomainError:
            values.append(complex(np.nan, np.nan))
    return AsymptoteEval(K, *values)
