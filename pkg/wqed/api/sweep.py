# Import standard libraries.
import logging
from dataclasses import dataclass, field, replace

# Import external libraries.
import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .common import (TWO_PI, DEFAULT_WINDOW, OMEGA_CAP, WqedError,
                     BracketError, DomainError, NumericalError, roman,
                     singular_set, nearest_singular)
from .model import ModelParams
from .solver import (solve_states, RESONANCE, BOUND, ANTIBOUND)

logger = logging.getLogger(__name__)

# Singular momenta where branches diverge; the others are bridged.
DIVERGENT = ('sin(phi_r)', 'sin(phi_l)')

@dataclass
class Branch:
    """
    A continuity-tracked family of states over a K grid.

    Parameters
    ----------
    id : str
        Roman numeral in order of creation.
    points : list of tuple
        ``(K, PairEigenstate)`` with K strictly increasing.
    start_reason, end_reason : str
        'grid' (first or last grid point), 'singular' (a divergence of
        the couplings), 'cap' (|omega| grew past the cap), 'emerged' or
        'lost' (no continuation within the matching tolerance).
    reconnects_to : str, optional
        Id of the branch that continues this one on the other side of a
        divergence, with the opposite sign of Re omega.
    """
    id: str
    points: list = field(default_factory=list)
    start_reason: str = 'grid'
    end_reason: str = 'grid'
    reconnects_to: str = None
    _last: int = field(default=-1, repr=False)

    def __len__(self):
        return len(self.points)

    @property
    def Ks(self):
        return np.array([k for k, _ in self.points])

    @property
    def omegas(self):
        return np.array([s.omega for _, s in self.points])

    @property
    def kinds(self):
        return [s.kind for _, s in self.points]

    def predict(self, K):
        """Extrapolate omega to K and return ``(omega, step)``."""
        k1, s1 = self.points[-1]
        if len(self.points) < 2:
            return s1.omega, 0.0
        k0, s0 = self.points[-2]
        velocity = (s1.omega - s0.omega) / (k1 - k0)
        step = velocity * (K - k1)
        return s1.omega + step, abs(step)

@dataclass(frozen=True)
class EpResult:
    """
    Location of an exceptional point.

    Parameters
    ----------
    phi : float
        Phase per site in radians.
    ratio_ep : float
        gamma_l / gamma_r at the transition.
    K_ep : float
        Wavevector of closest approach of the two branches.
    min_distance : float
        Smallest |omega_i - omega_j| found at (ratio_ep, K_ep).
    error : str, optional
        Reason for failure; the numeric fields are NaN when set.
    """
    phi: float
    ratio_ep: float
    K_ep: float
    min_distance: float = np.nan
    error: str = None

    @property
    def ok(self):
        return self.error is None

def make_grid(phi, k_min, k_max, n_points, window=DEFAULT_WINDOW):
    """
    Uniform K grid with the singular windows removed.

    Returns
    -------
    numpy.ndarray
        Grid points strictly inside (0, 2 pi) and outside every window.
    """
    if not 0 <= k_min < k_max <= TWO_PI:
        raise DomainError(f"invalid K range ({k_min}, {k_max})")
    Ks = np.linspace(k_min, k_max, n_points)
    Ks = Ks[(Ks > 0) & (Ks < TWO_PI)]
    keep = [nearest_singular(phi, K)[0] > window for K in Ks]
    return Ks[np.array(keep, dtype=bool)]

def _solve_point(params, K, window, cap, strict=False):
    try:
        states = solve_states(params, K, window=window, strict=strict)
    except DomainError as e:
        logger.warning("K=%.6g: no states (%s)", K, e)
        return []
    except NumericalError as e:
        if strict:
            raise
        logger.warning("K=%.6g: no states (%s)", K, e)
        return []
    return [s for s in states if abs(s.omega) <= cap * params.gamma_1d]

def solve_grid(params, Ks, window=DEFAULT_WINDOW, jobs=1, cap=OMEGA_CAP,
               strict=False):
    """
    Run :meth:`solve_states` over a grid, in parallel.

    Returns
    -------
    list of list
        States per grid point, in grid order.
    """
    return Parallel(n_jobs=jobs)(
        delayed(_solve_point)(params, K, window, cap, strict) for K in Ks)

def _compatible(a, b):
    return a == b or RESONANCE in (a, b)

def _interpolate(branch, K, state, Ks, last, j):
    k0, s0 = branch.points[-1]
    for i in range(last + 1, j):
        t = (Ks[i] - k0) / (K - k0)
        mix = lambda a, b: a + t * (b - a)
        filler = replace(s0, omega=mix(s0.omega, state.omega),
                         z_a=mix(s0.z_a, state.z_a),
                         z_b=mix(s0.z_b, state.z_b), residual=np.nan,
                         interpolated=True)
        branch.points.append((Ks[i], filler))

def link(Ks, states, params, max_gap=2, cap=OMEGA_CAP, penalty=0.5,
         base_tol=0.25):
    """
    Link states at consecutive grid points into branches.

    Each live branch predicts its next detuning from its local velocity;
    predictions and new states are paired by minimum total scaled
    distance (Hungarian assignment) with a penalty for a change of
    kind other than to or from a resonance. Branches close at every
    divergence of the couplings between grid points.

    Near a divergence, and near K = 0 or 2 pi, omega grows like
    1/|K - K_s|. The tolerance then includes the relative change
    |omega| dK / |K - K_s|, so a branch with a single point can
    already be continued.

    Parameters
    ----------
    Ks : array_like
        Increasing grid.
    states : list of list
        States per grid point.
    params : ModelParams
        Model parameters.
    max_gap : int, default: 2
        Grid points a branch may miss; missing points are filled in by
        linear interpolation.
    cap : float, default: 1000
        Divergence cap in units of gamma_1d.
    penalty : float, default: 0.5
        Cost added for an incompatible change of kind.
    base_tol : float, default: 0.25
        Matching tolerance in units of gamma_1d (scaled by 1 + |omega|/10)
        away from divergences.

    Returns
    -------
    list of Branch
        Branches in order of creation.
    """
    divergences = [k for k, name in singular_set(params.phi)
                   if name in DIVERGENT]
    poles = np.array(divergences + [0.0, TWO_PI])
    scale = params.gamma_1d
    branches, live = [], []

    def close(branch, reason):
        branch.end_reason = reason
        live.remove(branch)

    for j, K in enumerate(Ks):
        crossed = j > 0 and any(Ks[j - 1] < s < K for s in divergences)
        for b in list(live):
            if crossed:
                close(b, 'singular')
            elif j - b._last > max_gap + 1:
                pred, _ = b.predict(K)
                close(b, 'cap' if abs(pred) > cap * scale / 10 else 'lost')
        new = states[j]
        matched = set()
        if live and new:
            cost = np.full((len(live), len(new)), 1e9)
            for i, b in enumerate(live):
                pred, step = b.predict(K)
                k_last, last = b.points[-1]
                gap = K - k_last
                # omega ~ 1/(K - K_s) near a pole
                d = np.abs(poles - k_last).min()
                growth = abs(last.omega) * gap / max(d - gap, gap)
                tol = max(5 * step, 1.5 * growth,
                          base_tol * scale * (1 + abs(last.omega) / 10)
                          * (j - b._last))
                for k, s in enumerate(new):
                    dist = abs(s.omega - pred)
                    if dist <= tol:
                        cost[i, k] = dist / tol
                        if not _compatible(last.kind, s.kind):
                            cost[i, k] += penalty
            rows, cols = linear_sum_assignment(cost)
            for i, k in zip(rows, cols):
                if cost[i, k] >= 1e9:
                    continue
                b = live[i]
                if j - b._last > 1:
                    _interpolate(b, K, new[k], Ks, b._last, j)
                b.points.append((K, new[k]))
                b._last = j
                matched.add(k)
        for k, s in enumerate(new):
            if k in matched:
                continue
            if j == 0:
                reason = 'grid'
            elif crossed:
                reason = 'singular'
            else:
                reason = 'emerged'
            b = Branch(roman(len(branches) + 1), [(K, s)],
                       start_reason=reason, _last=j)
            branches.append(b)
            live.append(b)
    for b in list(live):
        close(b, 'grid')
    _reconnect(branches, divergences, scale)
    return branches

def _reconnect(branches, divergences, scale, threshold=5.0):
    for s in divergences:
        ends = [b for b in branches if b.end_reason == 'singular'
                and b.Ks[-1] < s and abs(b.omegas[-1].real) > threshold * scale]
        starts = [b for b in branches if b.start_reason == 'singular'
                  and b.Ks[0] > s and abs(b.omegas[0].real) > threshold * scale]
        if not ends or not starts:
            continue
        cost = np.full((len(ends), len(starts)), 1e9)
        for i, e in enumerate(ends):
            for k, b in enumerate(starts):
                w0, w1 = e.omegas[-1], b.omegas[0]
                if np.sign(w0.real) != np.sign(w1.real):
                    cost[i, k] = abs(w0.imag - w1.imag)
        rows, cols = linear_sum_assignment(cost)
        for i, k in zip(rows, cols):
            if cost[i, k] < 1e9:
                ends[i].reconnects_to = starts[k].id

def sweep_K(params, k_grid, window=DEFAULT_WINDOW, jobs=1, cap=OMEGA_CAP,
            strict=False):
    """
    Sweep K and track the discrete spectrum.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    k_grid : tuple
        ``(k_min, k_max, n_points)`` in radians.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    jobs : int, default: 1
        Number of joblib workers.
    cap : float, default: 1000
        Branches are truncated where |omega| exceeds this value (in
        units of gamma_1d).
    strict : bool, default: False
        Stop at the first state that fails the residual gate instead of
        dropping it.

    Returns
    -------
    list of Branch
        Branches in order of creation. The result does not depend on
        ``jobs``.

    Examples
    --------

    .. code:: python3

        params = wqed.ModelParams(phi=0.3 * np.pi, xi=0.9)
        branches = wqed.sweep_K(params, (0.01, 2 * np.pi - 0.01, 400))
        for b in branches:
            print(b.id, len(b), set(b.kinds))
    """
    Ks = make_grid(params.phi, *k_grid, window=window)
    states = solve_grid(params, Ks, window=window, jobs=jobs, cap=cap,
                        strict=strict)
    branches = link(Ks, states, params, cap=cap)
    logger.info("swept %d K points: %d states in %d branches", len(Ks),
                sum(len(x) for x in states), len(branches))
    return branches

def _sector(phi, margin):
    return TWO_PI - 2 * phi + margin, TWO_PI - margin

def ep_signature(params, k_lo, k_hi, n_points=160, window=DEFAULT_WINDOW,
                 jobs=1):
    """
    Connectivity of the resonance branches across a K interval.

    The branches spanning the whole interval are ordered by Re omega at
    the start; the signature lists their rank by Im omega at the end.

    Returns
    -------
    tuple or None
        Permutation, or None when fewer than two branches span the
        interval.
    """
    Ks = make_grid(params.phi, k_lo, k_hi, n_points, window=window)
    states = solve_grid(params, Ks, window=window, jobs=jobs)
    states = [[s for s in row if s.kind == RESONANCE] for row in states]
    branches = link(Ks, states, params)
    full = [b for b in branches if b.Ks[0] == Ks[0] and b.Ks[-1] == Ks[-1]]
    if len(full) < 2:
        return None
    by_start = sorted(full, key=lambda b: b.omegas[0].real)
    by_end = sorted(full, key=lambda b: b.omegas[-1].imag)
    rank = {b.id: i for i, b in enumerate(by_end)}
    return tuple(rank[b.id] for b in by_start)

def _pair_distance(params, K, window):
    states = [s for s in _solve_point(params, K, window, OMEGA_CAP)
              if s.kind == RESONANCE]
    if len(states) < 2:
        return np.inf
    w = np.array([s.omega for s in states])
    d = np.abs(w[:, None] - w[None, :])
    return float(d[np.triu_indices(len(w), 1)].min())

def find_ep(phi, ratio_bracket=(0.02, 0.9), k_grid=None, window=DEFAULT_WINDOW,
            jobs=1, n_scan=12, tol=1e-3, gamma_1d=1.0):
    """
    Locate the exceptional point between the two resonance branches.

    The connectivity signature of the resonance branches over the
    sector (2 pi - 2 phi, 2 pi) is scanned over the ratio
    gamma_l / gamma_r; the first flip is then bisected. K_ep is where
    the two branches come closest at the transition ratio.

    Parameters
    ----------
    phi : float
        Phase per site in radians.
    ratio_bracket : tuple, default: (0.02, 0.9)
        Search interval for gamma_l / gamma_r.
    k_grid : tuple, optional
        ``(k_min, k_max, n_points)``; defaults to the sector with a
        margin of 0.02 pi and 160 points.
    window : float, default: DEFAULT_WINDOW
        Singular-momentum exclusion half-width.
    jobs : int, default: 1
        Number of joblib workers.
    n_scan : int, default: 12
        Ratios in the coarse scan.
    tol : float, default: 1e-3
        Bisection stops when the bracket is narrower than this.
    gamma_1d : float, default: 1.0
        Energy unit.

    Returns
    -------
    EpResult
        Transition ratio and K_ep.

    Raises
    ------
    BracketError
        If no signature flip is found in the bracket.
    """
    lo, hi = ratio_bracket
    if not 0 < lo < hi < 1:
        raise DomainError(f"ratio bracket must lie in (0, 1), got {ratio_bracket}")
    if k_grid is None:
        k_grid = (*_sector(phi, 0.02 * np.pi), 160)
    k_lo, k_hi, n_points = k_grid

    def signature(ratio):
        params = ModelParams.from_ratio(phi, ratio, gamma_1d)
        return ep_signature(params, k_lo, k_hi, n_points, window, jobs)

    ratios = np.linspace(lo, hi, n_scan)
    sigs = [signature(r) for r in ratios]
    logger.info("phi=%.4g: signatures %s", phi, sigs)
    bracket = None
    for i in range(n_scan - 1):
        a, b = sigs[i], sigs[i + 1]
        if a is not None and b is not None and a != b:
            bracket = (ratios[i], ratios[i + 1], a, b)
            break
    if bracket is None:
        raise BracketError(
            f"no change of branch connectivity for ratios in {ratio_bracket}")
    lo, hi, sig_lo, sig_hi = bracket
    while hi - lo > tol:
        mid = (lo + hi) / 2
        sig = signature(mid)
        if sig == sig_lo:
            lo = mid
        else:
            hi = mid
    ratio = (lo + hi) / 2

    params = ModelParams.from_ratio(phi, ratio, gamma_1d)
    Ks = make_grid(phi, k_lo, k_hi, 2 * n_points, window=window)
    dist = Parallel(n_jobs=jobs)(
        delayed(_pair_distance)(params, K, window) for K in Ks)
    i = int(np.argmin(dist))
    step = Ks[1] - Ks[0]
    res = minimize_scalar(lambda k: _pair_distance(params, k, window),
                          bounds=(max(Ks[i] - step, k_lo),
                                  min(Ks[i] + step, k_hi)),
                          method='bounded', options={'xatol': 1e-6})
    k_ep, d_ep = (res.x, res.fun) if res.fun < dist[i] else (Ks[i], dist[i])
    logger.info("phi=%.4g: ratio_ep=%.5g K_ep=%.5g pi (distance %.3g)",
                phi, ratio, k_ep / np.pi, d_ep)
    return EpResult(phi, float(ratio), float(k_ep), float(d_ep))

def ep_curve(phi_grid, **kwargs):
    """
    Exceptional-point ratio as a function of phi.

    Failures are logged and returned as results with ``error`` set.

    Parameters
    ----------
    phi_grid : array_like
        Phases in radians.
    kwargs
        Passed to :meth:`find_ep`.

    Returns
    -------
    list of EpResult
        One result per phase.
    """
    out = []
    for phi in phi_grid:
        try:
            out.append(find_ep(phi, **kwargs))
        except WqedError as e:
            logger.warning("phi=%.4g: %s", phi, e)
            out.append(EpResult(float(phi), np.nan, np.nan, error=str(e)))
    return out

def edge_coalescence(params, side='lower', offsets=None):
    """
    Distance between the bound and antibound states near a band edge.

    Parameters
    ----------
    params : ModelParams
        Model parameters.
    side : {'lower', 'upper'}, default: 'lower'
        Edge K = 2 phi (approached from above) or K = 2 pi - 2 phi
        (approached from below).
    offsets : array_like, optional
        Positive distances from the edge. Defaults to nine values from
        1e-2 to 1e-4 times 2 pi.

    Returns
    -------
    list of tuple
        ``(K, gap)`` with gap = min |omega_bound - omega_antibound|;
        points where either state is missing are omitted.
    """
    if offsets is None:
        offsets = np.geomspace(1e-2, 1e-4, 9) * TWO_PI
    if side == 'lower':
        edge, sign = 2 * params.phi, +1
    elif side == 'upper':
        edge, sign = TWO_PI - 2 * params.phi, -1
    else:
        raise ValueError(f"side must be 'lower' or 'upper', got '{side}'")
    out = []
    for offset in offsets:
        if offset <= 0:
            raise DomainError(f"offsets must be positive, got {offset}")
        K = edge + sign * offset
        try:
            states = solve_states(params, K, window=offset / 2, strict=False)
        except WqedError as e:
            logger.debug("K=%.6g: %s", K, e)
            continue
        bound = [s.omega for s in states if s.kind == BOUND]
        anti = [s.omega for s in states if s.kind == ANTIBOUND]
        if not bound or not anti:
            logger.debug("K=%.6g: bound or antibound state missing", K)
            continue
        gap = min(abs(b - a) for b in bound for a in anti)
        out.append((float(K), float(gap)))
    return out

def coalescence_exponent(points, edge):
    """Least-squares slope of log(gap) against log|K - edge|."""
    K = np.array([k for k, _ in points])
    gap = np.array([g for _, g in points])
    return float(np.polyfit(np.log(np.abs(K - edge)), np.log(gap), 1)[0])

def real_coverage(branches, lo=-10.0, hi=10.0):
    """
    Largest hole in the union of Re omega over all branches.

    Consecutive points of a branch cover the interval between their
    real parts.

    Returns
    -------
    float
        Width of the largest uncovered part of [lo, hi].
    """
    segments = []
    for b in branches:
        re = b.omegas.real
        if len(re) == 1:
            segments.append((re[0], re[0]))
        for a, c in zip(re[:-1], re[1:]):
            segments.append((min(a, c), max(a, c)))
    segments.sort()
    hole, edge = 0.0, lo
    for a, c in segments:
        if c < lo or a > hi:
            continue
        if a > edge:
            hole = max(hole, a - edge)
        edge = max(edge, c)
        if edge >= hi:
            break
    return float(max(hole, hi - edge))
