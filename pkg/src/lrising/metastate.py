"""Sparse volume schedules, good boundary conditions, and the empirical
metastate at desk scale.

The headline experiments live here.  A draw of the boundary field eta picks,
in each volume Lambda_N, a finite-volume measure mu^eta_N; the empirical
metastate records how the sequence (mu^eta_N)_N distributes itself over the
two pure states and their mixtures.  The two regimes behave differently:

  * 1/2 < alpha < 1: W_N diverges, lambda^eta_N polarizes to {0, 1}, and
    along sparse enough volume sequences the visited measures concentrate on
    the two pure states (half weight each, by symmetry).
  * 0 <= alpha < 1/2: W_N converges, lambda^eta_N keeps a nondegenerate
    spread over (0, 1), and mixtures retain positive frequency.

Two tiers compute this.  The exact tier enumerates mu^eta_N with the Gibbs
engine (N <= 11) and measures real window distances; the toy tier uses the
zero-bulk-temperature model, where mu is the explicit two-point mixture with
lambda = w_minus(W_N), so volumes up to 2^14 are exact as well.  Throughout
this module lambda is the weight of the minus state, matching
gibbs.mixture_weight; the boundary distribution is symmetric under
eta <-> -eta, so every histogram here matches the w_plus convention of
toy.toy_metastate_histogram in law.

Multi-volume experiments draw one "master row" of signs per eta sample,
sized for the largest volume (first the sites y = 1 .. Y_max, then
y = -1 .. -Y_max, from substream (seed, sample)), and every volume reads its
exterior from that row.  The volumes therefore see one consistent eta, which
is what the running-frequency and ball-frequency statistics are about; the
numbers differ by construction from single-volume draws made with
toy.sample_boundary_energies, whose rows only cover one exterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit, gammaincc

from .diagnostics import h_tilde
from .gibbs import exact_measure, mixture_weight, plus_reference_marginal
from .model import (
    BoundaryCondition,
    ModelParams,
    boundary_field_vector,
    coupling_by_distance,
    window_distance,
)
from .rng import sample_signs
from .toy import LambdaHistogram, histogram_from_lambdas, variance_scaling

_N_LIMIT = 2**31
_EXACT_N_MAX = 11
_TOY_N_MAX = 2**14
_ROW_BYTES = 1 << 26  # chunk size target for master-row batches, in float64 bytes


# ---------------------------------------------------------------------------
# Sparse schedules
# ---------------------------------------------------------------------------

class SparseScheduleError(ValueError):
    """Raised when no volume below 2^31 satisfies the growth conditions.

    ``largest_feasible_k`` is the last index that still fits (0 when even
    k = 1 does not).
    """

    def __init__(self, message: str, largest_feasible_k: int) -> None:
        super().__init__(message)
        self.largest_feasible_k = largest_feasible_k


def _integral_tail(lo: float, eps: float) -> float:
    """integral_lo^inf exp(-x^eps) dx = (1/eps) Gamma(1/eps, lo^eps)."""
    s = 1.0 / eps
    return float(gammaincc(s, lo**eps) * math.gamma(s) / eps)


_TAIL_WINDOW = 1 << 22


def exp_tail(m: int, eps: float) -> float:
    """Certified upper bound on sum_{l >= m} exp(-l^eps), tight in practice.

    Exact partial sum over [m, L] where L is chosen so the remaining terms
    are smaller by a factor e^-60, plus the remainder bound
    exp(-K^eps) + integral_K^inf exp(-x^eps) dx at K = L + 1 (the sum of a
    decreasing function is at most its first term plus the integral).  When
    the window [m, L] is impractically long, which only happens for small
    eps where the schedule overflows anyway, the remainder bound is applied
    at m directly.
    """
    if m < 1:
        raise ValueError("the tail starts at a positive integer")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    L = math.ceil((float(m) ** eps + 60.0) ** (1.0 / eps))
    if L - m > _TAIL_WINDOW:
        return math.exp(-(float(m) ** eps)) + _integral_tail(float(m), eps)
    ls = np.arange(m, L + 1, dtype=np.float64)
    partial = float(np.exp(-(ls**eps)).sum())
    return partial + math.exp(-(float(L + 1) ** eps)) + _integral_tail(
        float(L + 1), eps
    )


def _minimal_m(target: float, eps: float, start: int) -> int:
    """Smallest m >= start with exp_tail(m, eps) < target.

    Callers pass the previous m_k, which is safe: that m was minimal for a
    strictly larger target, so no smaller m can work for this one.
    """
    lo = start
    if exp_tail(lo, eps) < target:
        return lo
    hi = lo + 1
    while exp_tail(hi, eps) >= target:
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if exp_tail(mid, eps) < target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class SparseSchedule:
    """Volumes N_k sparse enough for the pure-state concentration argument.

    m_k is the smallest integer with sum_{l >= m_k} e^(-l^eps) < 1/k^2.  For
    alpha > 1/2 the volumes satisfy N_k > max{k^(1/(alpha-1/2)+a),
    m_k^(2/(alpha-1/2))} and the decoupling margins n_k < N_k^((alpha-1/2)/2);
    for alpha < 1/2 no growth condition applies and the volumes default to
    the geometric grid N_k = 2^(k+1) with n_k = 0 (no margin is used there).
    """

    alpha: float
    epsilon: float
    a: float
    m_k: tuple[int, ...]
    N_k: tuple[int, ...]
    n_k: tuple[int, ...]

    def __post_init__(self) -> None:
        for k, m in enumerate(self.m_k, start=1):
            if not exp_tail(m, self.epsilon) < 1.0 / k**2:
                raise AssertionError(f"tail condition fails at k={k}, m={m}")
        if self.alpha > 0.5:
            inv = 1.0 / (self.alpha - 0.5)
            for k, (m, N, n) in enumerate(
                zip(self.m_k, self.N_k, self.n_k), start=1
            ):
                if not (N > k ** (inv + self.a) and N > float(m) ** (2.0 * inv)):
                    raise AssertionError(f"volume condition fails at k={k}")
                if not (1 <= n < N ** ((self.alpha - 0.5) / 2.0)):
                    raise AssertionError(f"margin condition fails at k={k}")


def sparse_schedule(
    alpha: float, epsilon: float, a: float, k_max: int
) -> SparseSchedule:
    """Schedule (m_k, N_k, n_k) for k = 1 .. k_max.

    Minimal m_k by numeric tail evaluation; smallest N_k above the growth
    threshold (and above N_{k-1}); largest admissible n_k.  Raises
    SparseScheduleError as soon as some N_k would exceed 2^31, naming the
    largest feasible k; for alpha > 1/2 the m_k^(2/(alpha-1/2)) term makes
    that the usual outcome, because admissible epsilon < 1 - alpha forces
    m_1 into the thousands and the power is at least 4.
    """
    if alpha == 0.5:
        raise ValueError("alpha = 1/2 sits on the threshold; no schedule exists")
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if not (0.0 < epsilon < 1.0 - alpha):
        raise ValueError(
            f"epsilon must lie in (0, 1 - alpha) = (0, {1.0 - alpha}), got {epsilon}"
        )
    if a <= 0.0:
        raise ValueError(f"a must be positive, got {a}")
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")

    m_list: list[int] = []
    N_list: list[int] = []
    n_list: list[int] = []
    m_prev = 1
    for k in range(1, k_max + 1):
        m = _minimal_m(1.0 / k**2, epsilon, m_prev)
        m_prev = m
        if alpha > 0.5:
            inv = 1.0 / (alpha - 0.5)
            log2_target = max((inv + a) * math.log2(k) if k > 1 else 0.0,
                              2.0 * inv * math.log2(m))
            if log2_target >= 31.0:
                raise SparseScheduleError(
                    f"k={k} needs N_k > 2^{log2_target:.1f} > 2^31; "
                    f"largest feasible k is {k - 1}",
                    k - 1,
                )
            target = max(float(k) ** (inv + a), float(m) ** (2.0 * inv))
            N = int(math.floor(target)) + 1
            if N_list:
                N = max(N, N_list[-1] + 1)
            if N > _N_LIMIT:
                raise SparseScheduleError(
                    f"k={k} needs N_k = {N} > 2^31; largest feasible k is {k - 1}",
                    k - 1,
                )
            cap = float(N) ** ((alpha - 0.5) / 2.0)
            n = math.ceil(cap) - 1
            if n_list:
                n = max(n, n_list[-1])
            if not (1 <= n < cap):
                raise SparseScheduleError(
                    f"k={k} admits no margin 1 <= n_k < N_k^((alpha-1/2)/2) "
                    f"= {cap}; largest feasible k is {k - 1}",
                    k - 1,
                )
        else:
            if k + 1 > 31:
                raise SparseScheduleError(
                    f"k={k} needs N_k = 2^{k + 1} > 2^31; "
                    f"largest feasible k is {k - 1}",
                    k - 1,
                )
            N = 2 ** (k + 1)
            n = 0
        m_list.append(m)
        N_list.append(N)
        n_list.append(n)
    return SparseSchedule(
        alpha, epsilon, a, tuple(m_list), tuple(N_list), tuple(n_list)
    )


# ---------------------------------------------------------------------------
# Good boundary conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoodEtaReport:
    """Verdict of the field-cap test |h(x)| <= h_tilde(x) on [-N+n, N-n].

    ``violations`` lists every site failing the cap; ``max_ratio`` is the
    worst |h(x)| / cap(x) over the checked window; ``c_constant`` is the
    Chernoff constant exp(1/(3 - 2 alpha)) controlling the bad-eta
    probability, reported for reference only.
    """

    good: bool
    violations: tuple[int, ...]
    max_ratio: float
    c_constant: float
    n: int
    epsilon: float


def good_eta_classifier(
    eta: BoundaryCondition, p: ModelParams, n: int, epsilon: float
) -> GoodEtaReport:
    """Check the boundary field of eta against the cap
    (N+x)^(alpha-3/2+eps) + (N-x)^(alpha-3/2+eps) at every site of
    [-N+n, N-n].

    The field is the Y-truncated h^eta(x); eta draws beyond the truncation
    radius would only perturb it by the controlled tail.
    """
    if not (0.0 < epsilon < 1.0 - p.alpha):
        raise ValueError(
            f"epsilon must lie in (0, 1 - alpha) = (0, {1.0 - p.alpha}), "
            f"got {epsilon}"
        )
    if not (1 <= n < p.N):
        raise ValueError(f"n must satisfy 1 <= n < N, got n={n}, N={p.N}")
    xs = p.sites()
    h = boundary_field_vector(eta, p)
    cap = h_tilde(xs, p.N, n, epsilon, p.alpha)
    inside = np.abs(xs) <= p.N - n
    ratios = np.abs(h[inside]) / cap[inside]
    bad = inside.copy()
    bad[inside] = ratios > 1.0
    return GoodEtaReport(
        good=not bool(bad.any()),
        violations=tuple(int(x) for x in xs[bad]),
        max_ratio=float(ratios.max()),
        c_constant=math.exp(1.0 / (3.0 - 2.0 * p.alpha)),
        n=n,
        epsilon=epsilon,
    )


def good_eta_fraction(
    p: ModelParams, n: int, epsilon: float, samples: int, seed: int
) -> float:
    """Fraction of good eta over i.i.d. boundary draws (substream per draw)."""
    good = 0
    for i in range(samples):
        eta = BoundaryCondition.random(p, seed=seed + i)
        if good_eta_classifier(eta, p, n, epsilon).good:
            good += 1
    return good / samples


# ---------------------------------------------------------------------------
# Decoupled measures
# ---------------------------------------------------------------------------

def _restricted_to_annulus(eta: BoundaryCondition, R: int) -> BoundaryCondition:
    """eta with every sign beyond radius R zeroed (annulus N < |y| <= R)."""
    signs = eta.signs.copy()
    ys = np.arange(-eta.Y, eta.Y + 1)
    signs[np.abs(ys) > R] = 0
    kind = "zero" if not signs.any() else "random"
    return BoundaryCondition(signs, eta.N, eta.Y, kind, eta.seed)


def decoupled_gap_bound(p: ModelParams, N_next: int) -> float:
    """exp(12 beta / (1 - alpha) * N / (N_next - N)^(1 - alpha)) - 1."""
    arg = (
        12.0
        * p.beta
        / (1.0 - p.alpha)
        * p.N
        / (N_next - p.N) ** (1.0 - p.alpha)
    )
    if arg > 700.0:
        return math.inf
    return math.expm1(arg)


def decoupled_measure_gap(
    p: ModelParams,
    eta: BoundaryCondition,
    N_next: int,
    X: Sequence[int] = (0,),
) -> float:
    """Window distance between mu^eta (full truncated exterior) and the
    decoupled measure that reads eta only on the annulus N < |y| <= N_next.

    Asserts the gap against its analytic bound, which is loose at desk
    scale; the measured value is the informative output.  N_next at or
    beyond the truncation radius makes the two measures identical.
    """
    if N_next <= p.N:
        raise ValueError(f"N_next must exceed N, got N_next={N_next}, N={p.N}")
    window = tuple(int(x) for x in X)
    full = exact_measure(p, eta).marginal(window)
    annulus = exact_measure(p, _restricted_to_annulus(eta, N_next)).marginal(window)
    gap = window_distance(full, annulus)
    bound = decoupled_gap_bound(p, N_next)
    if gap > bound + 1e-12:
        raise AssertionError(
            f"decoupled gap {gap} exceeds its bound {bound} "
            f"at N={p.N}, N_next={N_next}"
        )
    return gap


# ---------------------------------------------------------------------------
# Master rows and toy boundary energies
# ---------------------------------------------------------------------------

def _master_rows(seed: int, start: int, count: int, Y_max: int) -> np.ndarray:
    """(count, 2 Y_max) rows of +-1; row i is substream (seed, start + i).

    Columns 0 .. Y_max-1 hold the sites y = 1 .. Y_max, columns
    Y_max .. 2 Y_max - 1 the sites y = -1 .. -Y_max.
    """
    return sample_signs(seed, start, count, 2 * Y_max)


def _coupling_cumsum(alpha: float, J: float, max_d: int) -> np.ndarray:
    """F with F[k] = sum_{d < k} f(d); prefix-stable, so every volume's
    coefficients S_y(N) = F[y+N+1] - F[y-N] match coefficient_profile
    bitwise."""
    p = ModelParams(alpha=alpha, N=1, J=J)
    f = coupling_by_distance(max_d, p)
    return np.concatenate([[0.0], np.cumsum(f)])


def _toy_energies(rows: np.ndarray, F: np.ndarray, N: int, Y_max: int) -> np.ndarray:
    """W_N per master row: sum_{N < y <= 16N} S_y(N) (eta_y + eta_-y)."""
    Y = 16 * N
    ys = np.arange(N + 1, Y + 1)
    S = F[ys + N + 1] - F[ys - N]
    both = rows[:, N:Y] + rows[:, Y_max + N : Y_max + Y]
    return both @ S


def _eta_from_row(row: np.ndarray, p: ModelParams, seed: int) -> BoundaryCondition:
    """BoundaryCondition for volume p.N read off a master row."""
    Y_max = row.size // 2
    signs = np.zeros(2 * p.Y + 1, dtype=np.int8)
    for y in range(p.N + 1, p.Y + 1):
        signs[y + p.Y] = int(row[y - 1])
        signs[-y + p.Y] = int(row[Y_max + y - 1])
    return BoundaryCondition(signs, p.N, p.Y, "random", seed)


# ---------------------------------------------------------------------------
# Empirical metastate
# ---------------------------------------------------------------------------

_PLUS, _MINUS, _OTHER = 0, 1, 2


def _toy_categories(W: np.ndarray, beta: float, tau: float) -> np.ndarray:
    """Ball membership per energy: distances to delta_+/- are 2 w_-/2 w_+
    on every window, ties broken toward the nearer state."""
    d_plus = 2.0 * expit(-2.0 * beta * W)
    d_minus = 2.0 * expit(2.0 * beta * W)
    in_plus = d_plus <= tau
    in_minus = d_minus <= tau
    plus_sel = in_plus & (~in_minus | (d_plus <= d_minus))
    minus_sel = in_minus & ~plus_sel
    cat = np.full(W.shape, _OTHER, dtype=np.int64)
    cat[plus_sel] = _PLUS
    cat[minus_sel] = _MINUS
    return cat


@dataclass(frozen=True)
class MetastateParams:
    alpha: float
    beta: float
    tau: float
    window: tuple[int, ...]
    eta_samples: int
    seed: int
    volumes: tuple[int, ...]
    mode: str
    J: float


@dataclass(frozen=True)
class MetastateHistogram:
    """Empirical metastate summary: the lambda histogram at the largest
    volume and ball frequencies aggregated over (eta, volume) pairs.

    ``ball_frequencies`` orders (plus ball, minus ball, neither); the
    stderr of each frequency is taken across eta samples, whose per-eta
    volume averages are independent.
    """

    lambda_hist: LambdaHistogram
    ball_frequencies: tuple[float, float, float]
    ball_stderr: tuple[float, float, float]
    params: MetastateParams

    def __post_init__(self) -> None:
        if abs(sum(self.ball_frequencies) - 1.0) > 1e-9:
            raise AssertionError("ball frequencies must sum to 1")
        if abs(self.lambda_hist.masses.sum() - 1.0) > 1e-9:
            raise AssertionError("lambda bin masses must sum to 1")

    @property
    def lambda_bins(self) -> np.ndarray:
        return self.lambda_hist.masses

    @property
    def pure_ball_frequency(self) -> float:
        return self.ball_frequencies[_PLUS] + self.ball_frequencies[_MINUS]


def _aggregate(
    per_eta: np.ndarray, lambdas: np.ndarray, params: MetastateParams
) -> MetastateHistogram:
    freqs = per_eta.mean(axis=0)
    if per_eta.shape[0] > 1:
        err = per_eta.std(axis=0, ddof=1) / math.sqrt(per_eta.shape[0])
    else:
        err = np.zeros(3)
    return MetastateHistogram(
        lambda_hist=histogram_from_lambdas(lambdas),
        ball_frequencies=tuple(float(v) for v in freqs),
        ball_stderr=tuple(float(v) for v in err),
        params=params,
    )


def empirical_metastate(
    alpha: float,
    beta: float,
    schedule: SparseSchedule | None = None,
    tau: float = 0.2,
    X: Sequence[int] = (0,),
    eta_samples: int = 200,
    seed: int = 0,
    *,
    volumes: Sequence[int] | None = None,
    mode: str = "toy",
    J: float = 1.0,
) -> MetastateHistogram:
    """Empirical metastate over eta draws: ball frequencies for B^tau(mu+),
    B^tau(mu-) and the complement over every (eta, volume) pair, plus the
    lambda histogram at the largest volume.

    Volumes come either from ``schedule`` (its N_k) or from an explicit
    ``volumes`` list; exactly one must be given.  ``mode="exact"`` runs the
    Gibbs engine (volumes up to 11) against the all-plus reference marginal
    and its negation on the window X; ``mode="toy"`` uses the
    zero-bulk-temperature mixture, whose pure-state distances do not depend
    on X, for volumes up to 2^14.
    """
    if (schedule is None) == (volumes is None):
        raise ValueError("pass exactly one of schedule and volumes")
    vols = tuple(
        int(N) for N in (schedule.N_k if schedule is not None else volumes)
    )
    if not vols or any(v < 1 for v in vols) or list(vols) != sorted(set(vols)):
        raise ValueError(f"volumes must be distinct increasing positives, got {vols}")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    if eta_samples < 1:
        raise ValueError("need at least one eta sample")
    if mode not in ("toy", "exact"):
        raise ValueError(f"mode must be 'toy' or 'exact', got {mode!r}")
    limit = _TOY_N_MAX if mode == "toy" else _EXACT_N_MAX
    if vols[-1] > limit:
        raise ValueError(
            f"{mode} mode supports volumes up to {limit}, got {vols[-1]}"
        )
    window = tuple(int(x) for x in X)
    params = MetastateParams(
        alpha, beta, tau, window, eta_samples, seed, vols, mode, J
    )
    if mode == "toy":
        return _toy_metastate(params)
    return _exact_metastate(params)


def _toy_metastate(params: MetastateParams) -> MetastateHistogram:
    vols = params.volumes
    Y_max = 16 * vols[-1]
    F = _coupling_cumsum(params.alpha, params.J, 17 * vols[-1] + 1)
    chunk = max(1, _ROW_BYTES // (16 * Y_max))
    per_eta = np.empty((params.eta_samples, 3))
    lambdas = np.empty(params.eta_samples)
    for lo in range(0, params.eta_samples, chunk):
        n = min(chunk, params.eta_samples - lo)
        rows = _master_rows(params.seed, lo, n, Y_max)
        counts = np.zeros((n, 3))
        for N in vols:
            W = _toy_energies(rows, F, N, Y_max)
            cat = _toy_categories(W, params.beta, params.tau)
            for c in (_PLUS, _MINUS, _OTHER):
                counts[:, c] += cat == c
            if N == vols[-1]:
                lambdas[lo : lo + n] = expit(-2.0 * params.beta * W)
        per_eta[lo : lo + n] = counts / len(vols)
    return _aggregate(per_eta, lambdas, params)


def _exact_metastate(params: MetastateParams) -> MetastateHistogram:
    vols = params.volumes
    Y_max = 16 * vols[-1]
    ps = [
        ModelParams(alpha=params.alpha, N=N, beta=params.beta, J=params.J)
        for N in vols
    ]
    plus_refs = [plus_reference_marginal(p, params.window) for p in ps]
    minus_refs = [m.negated() for m in plus_refs]
    per_eta = np.empty((params.eta_samples, 3))
    lambdas = np.empty(params.eta_samples)
    for i in range(params.eta_samples):
        row = _master_rows(params.seed, i, 1, Y_max)[0]
        counts = np.zeros(3)
        for j, p in enumerate(ps):
            eta = _eta_from_row(row, p, params.seed)
            ens = exact_measure(p, eta)
            marg = ens.marginal(params.window)
            d_plus = window_distance(marg, plus_refs[j])
            d_minus = window_distance(marg, minus_refs[j])
            in_plus = d_plus <= params.tau
            in_minus = d_minus <= params.tau
            if in_plus and (not in_minus or d_plus <= d_minus):
                counts[_PLUS] += 1
            elif in_minus:
                counts[_MINUS] += 1
            else:
                counts[_OTHER] += 1
            if j == len(ps) - 1:
                lambdas[i] = mixture_weight(p, eta, ens)
        per_eta[i] = counts / len(vols)
    return _aggregate(per_eta, lambdas, params)


# ---------------------------------------------------------------------------
# Null recurrence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NullRecurrenceProfile:
    """Running ball frequencies along the full volume sequence of one eta.

    At each n the toy measure mu_n sits at distance 2 w_minus from
    delta_plus, 2 w_plus from delta_minus, and 2 |w_plus - 1/2| from the
    symmetric mixture, on every window; the three columns are the running
    frequencies (1/n) sum of the corresponding ball indicators.
    """

    n: np.ndarray
    freq_plus: np.ndarray
    freq_minus: np.ndarray
    freq_mixed: np.ndarray
    W: np.ndarray
    alpha: float
    beta: float
    tau: float
    window: tuple[int, ...]
    seed: int
    J: float

    @property
    def final_plus(self) -> float:
        return float(self.freq_plus[-1])

    @property
    def final_minus(self) -> float:
        return float(self.freq_minus[-1])

    @property
    def final_mixed(self) -> float:
        return float(self.freq_mixed[-1])


def null_recurrence_profile(
    alpha: float,
    beta: float,
    N_max: int,
    tau: float = 0.2,
    X: Sequence[int] = (0,),
    seed: int = 0,
    *,
    J: float = 1.0,
    mixed_max: float | None = None,
    pure_band: tuple[float, float] | None = None,
) -> NullRecurrenceProfile:
    """Running frequencies of the delta_plus, delta_minus and mixed balls
    along the full sequence n = 1 .. N_max for a single sampled eta.

    The thresholds are optional: when ``mixed_max`` or ``pure_band`` is
    given, the corresponding final frequency is asserted (the callers that
    encode acceptance thresholds pass them in; the profile itself stays
    threshold-free).
    """
    if not (1 <= N_max <= _TOY_N_MAX):
        raise ValueError(f"N_max must lie in [1, {_TOY_N_MAX}], got {N_max}")
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    Y_max = 16 * N_max
    row = _master_rows(seed, 0, 1, Y_max)[0]
    F = _coupling_cumsum(alpha, J, 17 * N_max + 1)
    W = np.empty(N_max)
    for n in range(1, N_max + 1):
        ys = np.arange(n + 1, 16 * n + 1)
        S = F[ys + n + 1] - F[ys - n]
        both = row[n : 16 * n] + row[Y_max + n : Y_max + 16 * n]
        W[n - 1] = S @ both
    w_plus = expit(2.0 * beta * W)
    w_minus = expit(-2.0 * beta * W)
    in_plus = 2.0 * w_minus <= tau
    in_minus = 2.0 * w_plus <= tau
    in_mixed = 2.0 * np.abs(w_plus - 0.5) <= tau
    ns = np.arange(1, N_max + 1, dtype=np.float64)
    profile = NullRecurrenceProfile(
        n=np.arange(1, N_max + 1),
        freq_plus=np.cumsum(in_plus) / ns,
        freq_minus=np.cumsum(in_minus) / ns,
        freq_mixed=np.cumsum(in_mixed) / ns,
        W=W,
        alpha=alpha,
        beta=beta,
        tau=tau,
        window=tuple(int(x) for x in X),
        seed=seed,
        J=J,
    )
    if mixed_max is not None and profile.final_mixed > mixed_max:
        raise AssertionError(
            f"mixed-ball frequency {profile.final_mixed} exceeds {mixed_max} "
            f"at N_max={N_max}"
        )
    if pure_band is not None:
        lo, hi = pure_band
        for name, val in (("plus", profile.final_plus), ("minus", profile.final_minus)):
            if not (lo <= val <= hi):
                raise AssertionError(
                    f"{name}-ball frequency {val} outside [{lo}, {hi}] "
                    f"at N_max={N_max}"
                )
    return profile


def mixed_ball_distance(W: float, beta: float) -> float:
    """Distance from the toy measure at energy W to the symmetric mixture,
    2 |w_plus - 1/2| on every window (the canonical mixed representative)."""
    tw_plus = float(expit(2.0 * beta * W))
    return 2.0 * abs(tw_plus - 0.5)


# ---------------------------------------------------------------------------
# Dichotomy report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DichotomyRow:
    alpha: float
    pure_mass: float
    mixed_mass: float
    var_exponent: float
    mean_lambda: float
    stderr_lambda: float


@dataclass(frozen=True)
class DichotomyReport:
    """One row per alpha: lambda polarization versus spread, and the Var W_N
    growth exponent, side by side."""

    rows: tuple[DichotomyRow, ...]
    beta: float
    N: int
    eta_samples: int
    tau: float
    seed: int
    var_grid: tuple[int, ...]
    histograms: tuple[LambdaHistogram, ...] = ()


def dichotomy_report(
    alpha_list: Sequence[float],
    beta: float,
    *,
    N: int = 4096,
    eta_samples: int = 10**4,
    tau: float = 0.2,
    seed: int = 0,
    var_grid: Sequence[int] = (2**13, 2**14, 2**15, 2**16),
    J: float = 1.0,
) -> DichotomyReport:
    """Toy-tier dichotomy summary across alpha at a fixed volume N.

    pure_mass is the lambda mass outside [0.01, 0.99] (the first and last
    histogram bins); mixed_mass is its complement; var_exponent is the exact
    log-log slope of Var W_N along var_grid.  Every alpha sees the same eta
    draws, so cross-alpha trends are paired comparisons.
    """
    for alpha in alpha_list:
        if 0.45 <= alpha <= 0.55:
            raise ValueError(
                f"alpha={alpha} lies in the excluded band [0.45, 0.55] "
                f"around the threshold"
            )
    rows = []
    hists = []
    for alpha in alpha_list:
        hist = empirical_metastate(
            alpha,
            beta,
            tau=tau,
            X=(0,),
            eta_samples=eta_samples,
            seed=seed,
            volumes=(N,),
            mode="toy",
            J=J,
        )
        lh = hist.lambda_hist
        hists.append(lh)
        _, _, slope = variance_scaling(alpha, var_grid, J)
        rows.append(
            DichotomyRow(
                alpha=alpha,
                pure_mass=lh.pure_mass,
                mixed_mass=1.0 - lh.pure_mass,
                var_exponent=slope,
                mean_lambda=lh.mean_lambda,
                stderr_lambda=lh.stderr_lambda,
            )
        )
    return DichotomyReport(
        rows=tuple(rows),
        beta=beta,
        N=N,
        eta_samples=eta_samples,
        tau=tau,
        seed=seed,
        var_grid=tuple(int(v) for v in var_grid),
        histograms=tuple(hists),
    )
