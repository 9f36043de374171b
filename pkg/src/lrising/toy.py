"""Toy model at zero bulk temperature, and local-limit diagnostics for W_N.

With the bulk frozen to its two ground states, a boundary draw eta acts only
through the total boundary energy W = W_N^eta, and the finite-volume measure
is the two-point mixture

    mu = w_plus delta_plus + w_minus delta_minus,
    w_plus = 1 / (1 + exp(-2 beta W)),   w_minus = 1 / (1 + exp(+2 beta W)),

so positive W favors the plus state.  The seminorm distances to the pure
states are ||mu - delta_plus|| = 2 w_minus and ||mu - delta_minus|| =
2 w_plus on every window, and both stay >= tau exactly when
|W| <= (1/2 beta) ln((2 - tau)/tau).

W_N is a sum of independent signed coefficients S_y(N) over the exterior;
its characteristic function is psi_N(t) = prod_{N<|y|<=Y} cos(t S_y), and
the local-limit scaling around Prop.-4-style conditions is probed through
A_N = sqrt(sum_{|y|>2N} S_y^2), the cutoff tau_N = delta_cos (1-alpha)/(2-alpha)
N^(1-alpha), and the integral A_N int_{|t|<=tau_N} |psi_N|.

Sampling is substream-per-sample: sample i is drawn from RNG stream
(seed, start + i), so any chunking of a run produces identical numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import expit

from .model import (
    MeasureMarginal,
    ModelParams,
    coefficient_profile,
    mix_marginals,
    variance_tail_bound,
)
from .rng import sample_signs, substream

DELTA_COS = 1.5
_SAMPLE_CHUNK = 64


# ---------------------------------------------------------------------------
# Boundary-energy sampling
# ---------------------------------------------------------------------------

def boundary_coefficients(p: ModelParams) -> np.ndarray:
    """Coefficients of W_N^eta = c . eta in exterior-site order.

    Order matches BoundaryCondition.exterior_sites(): [-Y .. -N-1, N+1 .. Y],
    so the left half is S_{N+1..Y} reversed.
    """
    S = coefficient_profile(p).S
    return np.concatenate([S[::-1], S])


def exact_variance(p: ModelParams) -> float:
    """Var W_N = sum_{N<|y|<=Y} S_y(N)^2 (exact, fair +-1 draws)."""
    S = coefficient_profile(p).S
    return float(2.0 * np.sum(S * S))


def sample_boundary_energies(
    p: ModelParams, seed: int, count: int, start: int = 0
) -> np.ndarray:
    """count i.i.d. draws of W_N^eta, sample i from substream (seed, start+i)."""
    c = boundary_coefficients(p)
    out = np.empty(count)
    for lo in range(0, count, _SAMPLE_CHUNK):
        n = min(_SAMPLE_CHUNK, count - lo)
        rows = sample_signs(seed, start + lo, n, c.size)
        out[lo : lo + n] = rows @ c
    return out


# ---------------------------------------------------------------------------
# Toy weights and distances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToyWeights:
    w_plus: float
    w_minus: float
    W: float
    beta: float

    def __post_init__(self) -> None:
        if abs(self.w_plus + self.w_minus - 1.0) > 1e-12:
            raise ValueError("toy weights must sum to 1")


def toy_weights(W: float, beta: float) -> ToyWeights:
    """(w_plus, w_minus) per the module docstring; saturates cleanly for
    |2 beta W| beyond float range (expit handles +-inf arguments)."""
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    x = 2.0 * beta * W
    return ToyWeights(float(expit(x)), float(expit(-x)), W, beta)


def toy_distances(W: float, beta: float) -> tuple[float, float]:
    """(||mu - delta_plus||, ||mu - delta_minus||) = (2 w_minus, 2 w_plus)."""
    tw = toy_weights(W, beta)
    return 2.0 * tw.w_minus, 2.0 * tw.w_plus


def toy_threshold(beta: float, tau: float) -> float:
    """|W| <= this bound iff both pure-state distances are >= tau."""
    if not (0.0 < tau < 1.0):
        raise ValueError("tau must lie in (0, 1)")
    return math.log((2.0 - tau) / tau) / (2.0 * beta)


def toy_mixture_marginal(
    W: float, beta: float, window: Sequence[int]
) -> MeasureMarginal:
    """The mixture mu restricted to a window, for cross-checks against
    window_distance."""
    tw = toy_weights(W, beta)
    plus = MeasureMarginal.point_mass(window, 1)
    minus = MeasureMarginal.point_mass(window, -1)
    return mix_marginals([(tw.w_plus, plus), (tw.w_minus, minus)])


# ---------------------------------------------------------------------------
# Characteristic function and the WLLT schedule
# ---------------------------------------------------------------------------

def characteristic_function(t: float, p: ModelParams) -> float:
    """psi_N(t) = prod_{N<|y|<=Y} cos(t S_y) = prod_{y>N} cos(t S_y)^2.

    Nonnegative because each |y| pair contributes a squared cosine; evaluated
    in log domain so long products do not underflow to garbage.
    """
    S = coefficient_profile(p).S
    c = np.cos(t * S)
    if np.any(c == 0.0):
        return 0.0
    with np.errstate(divide="ignore"):
        return float(np.exp(2.0 * np.sum(np.log(np.abs(c)))))


def characteristic_tail_factor(t: float, p: ModelParams) -> float:
    """Gaussian-style bracket exp(-t^2 sum_{|y|>Y} S_y^2 / 2) for the
    truncated factors beyond Y."""
    return math.exp(-0.5 * t * t * variance_tail_bound(p))


@lru_cache(maxsize=1)
def _verify_delta_cos() -> float:
    """cos u <= exp(-u^2/2) on [0, DELTA_COS], checked on a 10^6-point grid."""
    u = np.linspace(0.0, DELTA_COS, 10**6)
    if not np.all(np.cos(u) <= np.exp(-0.5 * u * u) + 1e-15):
        raise AssertionError(f"cos u <= exp(-u^2/2) fails below {DELTA_COS}")
    return DELTA_COS


@dataclass(frozen=True)
class WlltSchedule:
    A_N: float
    delta_N: float
    tau_N: float
    delta_cos: float
    N: int


def wllt_schedule(p: ModelParams) -> WlltSchedule:
    """A_N (exact up to the Y truncation), tau_N, delta_N = 1.

    Asserts the closed-form bound A_N <= sqrt(18/(3-2 alpha)) N^(alpha-1/2).
    """
    if not (0.5 < p.alpha < 1.0):
        raise ValueError("the schedule is specific to 1/2 < alpha < 1")
    delta_cos = _verify_delta_cos()
    prof = coefficient_profile(p)
    far = prof.y > 2 * p.N
    A = math.sqrt(2.0 * float(np.sum(prof.S[far] ** 2)))
    bound = math.sqrt(18.0 / (3.0 - 2.0 * p.alpha)) * p.N ** (p.alpha - 0.5)
    if A > bound:
        raise AssertionError(f"A_N = {A} exceeds its bound {bound}")
    tau = delta_cos * (1.0 - p.alpha) / (2.0 - p.alpha) * p.N ** (1.0 - p.alpha)
    return WlltSchedule(A, 1.0, tau, delta_cos, p.N)


def wllt_speed_margin(
    alpha: float, N_grid: Sequence[int], k: float | None = None, J: float = 1.0
) -> np.ndarray:
    """A_N / (delta_N^k tau_N^(k-1)) along the grid; must decrease for any
    k > 1 + (alpha - 1/2)/(1 - alpha)."""
    if k is None:
        k = 1.0 + (alpha - 0.5) / (1.0 - alpha) + 0.5
    out = []
    for N in N_grid:
        s = wllt_schedule(ModelParams(alpha=alpha, N=int(N), J=J))
        out.append(s.A_N / (s.delta_N**k * s.tau_N ** (k - 1.0)))
    return np.asarray(out)


def wllt_integral_check(p: ModelParams, tol: float = 1e-8) -> float:
    """A_N * integral of |psi_N| over [-tau_N, tau_N], adaptive quadrature."""
    sched = wllt_schedule(p)
    S = coefficient_profile(p).S

    def integrand(t: float) -> float:
        c = np.cos(t * S)
        if np.any(c == 0.0):
            return 0.0
        with np.errstate(divide="ignore"):
            return float(np.exp(2.0 * np.sum(np.log(np.abs(c)))))

    val, err = integrate.quad(
        integrand, -sched.tau_N, sched.tau_N, epsabs=tol, epsrel=tol, limit=200
    )
    if err > max(tol, 1e-6 * abs(val)) * 100:
        raise RuntimeError(f"quadrature did not converge: error estimate {err}")
    return sched.A_N * val


# ---------------------------------------------------------------------------
# Scaling experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingRow:
    N: int
    estimate: float
    stderr: float
    scaled_estimate: float


@dataclass(frozen=True)
class ScalingTable:
    alpha: float
    K: float
    rows: tuple[ScalingRow, ...]
    slope: float | None
    quantile_grid: np.ndarray | None
    quantiles: dict[int, np.ndarray] | None
    quantile_stderr: dict[int, np.ndarray] | None


def _bootstrap_quantile_stderr(
    W: np.ndarray, grid: np.ndarray, seed: int, reps: int = 100
) -> np.ndarray:
    gen = substream(seed, 2**32)
    qs = np.empty((reps, grid.size))
    for r in range(reps):
        idx = gen.integers(0, W.size, size=W.size)
        qs[r] = np.percentile(W[idx], grid)
    return qs.std(axis=0, ddof=1)


def smallball_scaling_experiment(
    alpha: float,
    K: float,
    N_grid: Sequence[int],
    samples: int,
    seed: int,
    J: float = 1.0,
    Y: int | None = None,
) -> ScalingTable:
    """P(|W_N| <= K) along N_grid, with the alpha-dependent follow-up.

    alpha > 1/2: least-squares slope of log p_N against log N (the paper-level
    expectation is -(alpha - 1/2)).  alpha < 1/2: percentile profile of W_N
    per N with bootstrap errors, for the almost-sure-convergence check.
    Y overrides the per-volume boundary cutoff (default 16N).
    """
    if samples < 10**4:
        raise ValueError("need at least 1e4 samples")
    rows = []
    quantile_grid = np.arange(1.0, 100.0)
    quantiles: dict[int, np.ndarray] = {}
    q_stderr: dict[int, np.ndarray] = {}
    for j, N in enumerate(N_grid):
        p = ModelParams(alpha=alpha, N=int(N), J=J, Y=Y)
        W = sample_boundary_energies(p, seed, samples, start=j * samples)
        est = float(np.mean(np.abs(W) <= K))
        stderr = math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
        rows.append(
            ScalingRow(int(N), est, stderr, float(N ** (alpha - 0.5) * est))
        )
        if alpha < 0.5:
            quantiles[int(N)] = np.percentile(W, quantile_grid)
            q_stderr[int(N)] = _bootstrap_quantile_stderr(
                W, quantile_grid, seed + j
            )
    slope = None
    if alpha > 0.5:
        logN = np.log([r.N for r in rows])
        logp = np.log([r.estimate for r in rows])
        slope = float(np.polyfit(logN, logp, 1)[0])
    return ScalingTable(
        alpha,
        K,
        tuple(rows),
        slope,
        quantile_grid if alpha < 0.5 else None,
        quantiles or None,
        q_stderr or None,
    )


def variance_scaling(
    alpha: float, N_grid: Sequence[int], J: float = 1.0
) -> tuple[np.ndarray, np.ndarray, float]:
    """Exact Var W_N along the grid and the log-log slope (expect 2 alpha - 1
    for alpha > 1/2).

    Var carries an N-independent offset from the short-range coefficients
    (nearest-neighbor J and small distances), so the slope converges to
    2 alpha - 1 only once N^(2 alpha - 1) dominates it; grids starting at
    2^13 keep the fit bias under 0.03 even at alpha = 0.6.
    """
    Ns = np.asarray([int(N) for N in N_grid])
    var = np.asarray(
        [exact_variance(ModelParams(alpha=alpha, N=int(N), J=J)) for N in Ns]
    )
    slope = float(np.polyfit(np.log(Ns), np.log(var), 1)[0])
    return Ns, var, slope


def empirical_variance_difference(
    alpha: float,
    N_pair: tuple[int, int],
    samples: int,
    seed: int,
    reps: int = 200,
    J: float = 1.0,
) -> tuple[float, float]:
    """|Var_hat(W_{N1}) - Var_hat(W_{N0})| and its bootstrap stderr.

    The convergence check for alpha < 1/2: at desk scale the two variances
    should be statistically indistinguishable.
    """
    draws = []
    for j, N in enumerate(N_pair):
        p = ModelParams(alpha=alpha, N=int(N), J=J)
        draws.append(sample_boundary_energies(p, seed, samples, start=j * samples))
    diff = abs(float(np.var(draws[1], ddof=1) - np.var(draws[0], ddof=1)))
    gen = substream(seed, 2**33)
    boot = np.empty(reps)
    for r in range(reps):
        idx0 = gen.integers(0, samples, size=samples)
        idx1 = gen.integers(0, samples, size=samples)
        boot[r] = np.var(draws[1][idx1], ddof=1) - np.var(draws[0][idx0], ddof=1)
    return diff, float(boot.std(ddof=1))


# ---------------------------------------------------------------------------
# Empirical toy metastate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaHistogram:
    """100-bin histogram of the mixture weight lambda over boundary draws."""

    bin_edges: np.ndarray
    masses: np.ndarray
    mean_lambda: float
    stderr_lambda: float
    pure_mass: float
    n_samples: int

    def band_mass(self, lo: float, hi: float) -> float:
        """Total mass of bins whose interval lies inside [lo, hi]."""
        left = self.bin_edges[:-1]
        right = self.bin_edges[1:]
        keep = (left >= lo - 1e-12) & (right <= hi + 1e-12)
        return float(self.masses[keep].sum())


def histogram_from_lambdas(lambdas: np.ndarray, bins: int = 100) -> LambdaHistogram:
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(lambdas, bins=edges)
    masses = counts / lambdas.size
    pure = float(masses[0] + masses[-1])
    if lambdas.size > 1:
        stderr = float(np.std(lambdas, ddof=1) / math.sqrt(lambdas.size))
    else:
        stderr = 0.0
    return LambdaHistogram(
        edges,
        masses,
        float(np.mean(lambdas)),
        stderr,
        pure,
        int(lambdas.size),
    )


def toy_lambdas(
    alpha: float, beta: float, N: int, samples: int, seed: int, J: float = 1.0
) -> np.ndarray:
    """lambda = w_plus(W_N^eta, beta) over i.i.d. boundary draws."""
    p = ModelParams(alpha=alpha, N=N, J=J)
    W = sample_boundary_energies(p, seed, samples)
    return expit(2.0 * beta * W)


def toy_metastate_histogram(
    alpha: float, beta: float, N: int, samples: int, seed: int, J: float = 1.0
) -> LambdaHistogram:
    """Desk-scale empirical metastate of the toy model (lambda histogram)."""
    return histogram_from_lambdas(toy_lambdas(alpha, beta, N, samples, seed, J))
