"""Finite-volume Gibbs measures under arbitrary boundary conditions.

Two engines share one product-form Hamiltonian. The exact engine enumerates
all 2^(2N+1) configurations in log domain and is the oracle for everything
else; it also splits the state space into the two sectors Omega^+/Omega^-
according to the exterior sign of the triangle cover, which is a function of
the configuration alone and is therefore cached per N. The Monte Carlo
engine is a single-site heat-bath sampler for volumes beyond enumeration.

Free-energy differences F = (log Z^+ - log Z^-)/(2 beta) are computed with a
sorted log-sum-exp so that the global spin flip, which permutes the
configuration weights exactly, produces bit-identical partition functions:
F(-eta) == -F(eta) without tolerance, and the mixture weight obeys
lambda(-eta) == 1 - lambda(eta) exactly by construction of its two branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .contours import omega_sign
from .model import (
    BoundaryCondition,
    MeasureMarginal,
    ModelParams,
    SpinConfig,
    boundary_field_vector,
    interaction_matrix,
)
from .rng import substream

_MAX_EXACT_N = 11
_CHUNK = 1 << 15


def _check_exact_size(N: int) -> None:
    if N > _MAX_EXACT_N:
        raise ValueError(
            f"exact enumeration is limited to N <= {_MAX_EXACT_N} "
            f"(2^(2N+1) states); use mc_measure for N={N}"
        )


def _signs_chunk(n_sites: int, lo: int, hi: int) -> np.ndarray:
    """Spin matrix (+-1 float64) for configuration indices [lo, hi).

    Bit (n_sites-1-k) of the index carries the spin at site index k, so the
    index coincides with the MeasureMarginal pattern index on the full volume.
    """
    idx = np.arange(lo, hi, dtype=np.int64)[:, None]
    shifts = np.arange(n_sites - 1, -1, -1, dtype=np.int64)[None, :]
    bits = (idx >> shifts) & 1
    return bits.astype(np.float64) * 2.0 - 1.0


@lru_cache(maxsize=2)
def _pair_energies(alpha: float, J: float, N: int) -> np.ndarray:
    """-(1/2) sum_{x,y} J_xy s_x s_y for every configuration, eta-free."""
    p = ModelParams(alpha=alpha, N=N, J=J)
    M = interaction_matrix(p)
    n = p.volume
    total = 1 << n
    out = np.empty(total)
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        S = _signs_chunk(n, lo, hi)
        out[lo:hi] = -0.5 * np.einsum("ij,ij->i", S @ M, S)
    return out


@lru_cache(maxsize=2)
def _omega_plus_mask(N: int) -> np.ndarray:
    """Boolean Omega^+ membership for every configuration at this N.

    Even flip count forces sigma(-N) = sigma(N) and both wall sites stay
    uncovered, so the sign is read off the leftmost spin without running the
    growth. Odd configurations need the event loop; the global flip symmetry
    halves that work. First call at N = 11 takes minutes and is cached.
    """
    n = 2 * N + 1
    total = 1 << n
    idx = np.arange(total, dtype=np.int64)
    flips = (idx ^ (idx >> 1)) & ((1 << (n - 1)) - 1)
    odd = np.zeros(total, dtype=bool)
    for b in range(n - 1):
        odd ^= ((flips >> b) & 1).astype(bool)
    left_plus = (idx >> (n - 1)).astype(bool)

    mask = np.empty(total, dtype=bool)
    even = ~odd
    mask[even] = left_plus[even]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for i in np.nonzero(odd & left_plus)[0]:
        spins = (((int(i) >> shifts) & 1) * 2 - 1).astype(np.int8)
        plus = omega_sign(SpinConfig(spins)) == 1
        mask[i] = plus
        mask[total - 1 - int(i)] = not plus
    return mask


def _sorted_logsumexp(a: np.ndarray) -> float:
    """log sum exp with canonical (ascending) summation order.

    Sorting makes the result a function of the multiset of inputs, so any
    exact permutation symmetry of the weights survives into the output bit
    for bit.
    """
    if a.size == 0:
        return -math.inf
    m = float(np.max(a))
    return m + math.log(float(np.sum(np.exp(np.sort(a) - m))))


@dataclass
class ExactEnsemble:
    """Full enumeration of one finite-volume Gibbs measure."""

    params: ModelParams
    eta: BoundaryCondition
    log_weights: np.ndarray
    omega_plus: np.ndarray
    logZ: float
    logZ_plus: float
    logZ_minus: float

    def _probs(self, restrict: np.ndarray | None = None) -> np.ndarray:
        if restrict is None:
            return np.exp(self.log_weights - self.logZ)
        logZ = self.logZ_plus if restrict is self.omega_plus else self.logZ_minus
        pr = np.zeros_like(self.log_weights)
        pr[restrict] = np.exp(self.log_weights[restrict] - logZ)
        return pr

    def _pattern_indices(self, window: tuple[int, ...]) -> np.ndarray:
        n = self.params.volume
        total = 1 << n
        idx = np.arange(total, dtype=np.int64)
        patt = np.zeros(total, dtype=np.int64)
        w = len(window)
        for j, x in enumerate(window):
            k = x + self.params.N
            if not 0 <= k < n:
                raise ValueError(f"window site {x} outside Lambda_N")
            bit = (idx >> (n - 1 - k)) & 1
            patt |= bit << (w - 1 - j)
        return patt

    def marginal(self, window) -> MeasureMarginal:
        window = tuple(int(x) for x in window)
        probs = np.bincount(
            self._pattern_indices(window),
            weights=self._probs(),
            minlength=1 << len(window),
        )
        return MeasureMarginal(window, probs)

    def constrained_marginal(self, window, sign: int) -> MeasureMarginal:
        window = tuple(int(x) for x in window)
        restrict = self.omega_plus if sign == 1 else ~self.omega_plus
        if sign == -1:
            pr = np.zeros_like(self.log_weights)
            pr[restrict] = np.exp(self.log_weights[restrict] - self.logZ_minus)
        else:
            pr = self._probs(self.omega_plus)
        probs = np.bincount(
            self._pattern_indices(window), weights=pr, minlength=1 << len(window)
        )
        return MeasureMarginal(window, probs)

    def magnetization(self) -> np.ndarray:
        """<sigma_x> for every x in Lambda_N."""
        n = self.params.volume
        total = 1 << n
        pr = self._probs()
        acc = np.zeros(n)
        for lo in range(0, total, _CHUNK):
            hi = min(lo + _CHUNK, total)
            acc += pr[lo:hi] @ _signs_chunk(n, lo, hi)
        return acc

    def sector_probability(self, sign: int) -> float:
        logZ = self.logZ_plus if sign == 1 else self.logZ_minus
        return math.exp(logZ - self.logZ)


def exact_measure(p: ModelParams, eta: BoundaryCondition) -> ExactEnsemble:
    """Enumerate the Gibbs measure mu^eta on Lambda_N in log domain."""
    _check_exact_size(p.N)
    n = p.volume
    total = 1 << n
    h = boundary_field_vector(eta, p)
    energy = _pair_energies(p.alpha, p.J, p.N).copy()
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        energy[lo:hi] -= _signs_chunk(n, lo, hi) @ h
    logw = -p.beta * energy
    mask = _omega_plus_mask(p.N)
    logZ = _sorted_logsumexp(logw)
    logZ_plus = _sorted_logsumexp(logw[mask])
    logZ_minus = _sorted_logsumexp(logw[~mask])
    recombined = np.logaddexp(logZ_plus, logZ_minus)
    if abs(recombined - logZ) > 1e-10:
        raise AssertionError(
            f"sector partition functions disagree with the total: "
            f"{recombined} vs {logZ}"
        )
    return ExactEnsemble(
        params=p,
        eta=eta,
        log_weights=logw,
        omega_plus=mask,
        logZ=logZ,
        logZ_plus=logZ_plus,
        logZ_minus=logZ_minus,
    )


# ---------------------------------------------------------------------------
# Free energies and the two-state decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeEnergySplit:
    """F = W + xi_part, where xi_part = (log Xi^eta - log Xi^-eta)/(2 beta)
    and Xi^eta = exp(-beta W) Z^+,eta."""

    F: float
    W: float
    xi_part: float


def free_energy_difference(
    p: ModelParams, eta: BoundaryCondition, ensemble: ExactEnsemble | None = None
) -> FreeEnergySplit:
    """F^eta_N = (log Z^+ - log Z^-)/(2 beta), with its W/Xi decomposition."""
    if p.beta <= 0.0:
        raise ValueError("free energy difference needs beta > 0")
    ens = ensemble if ensemble is not None else exact_measure(p, eta)
    W = float(boundary_field_vector(eta, p).sum())
    F = (ens.logZ_plus - ens.logZ_minus) / (2.0 * p.beta)
    log_xi_eta = ens.logZ_plus - p.beta * W
    log_xi_neg = ens.logZ_minus + p.beta * W
    return FreeEnergySplit(F=F, W=W, xi_part=(log_xi_eta - log_xi_neg) / (2.0 * p.beta))


def mixture_weight(
    p: ModelParams, eta: BoundaryCondition, ensemble: ExactEnsemble | None = None
) -> float:
    """lambda^eta = 1/(1 + e^{2 beta F}), the weight of the minus state.

    The two branches are arranged so that negating F maps the result to
    1 - lambda with no rounding slack at all.
    """
    F = free_energy_difference(p, eta, ensemble).F
    t = math.exp(-2.0 * p.beta * abs(F))
    half = t / (1.0 + t)
    return half if F >= 0.0 else 1.0 - half


def constrained_measure(
    p: ModelParams,
    eta: BoundaryCondition,
    sign: int,
    window,
    ensemble: ExactEnsemble | None = None,
) -> MeasureMarginal:
    """Marginal of nu^{sign,eta}, the measure conditioned on Omega^sign."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    ens = ensemble if ensemble is not None else exact_measure(p, eta)
    return ens.constrained_marginal(window, sign)


def plus_reference_marginal(p: ModelParams, window) -> MeasureMarginal:
    """Finite-volume proxy for the plus state: all-plus boundary, same N."""
    return exact_measure(p, BoundaryCondition.all_plus(p)).marginal(window)


# ---------------------------------------------------------------------------
# Heat-bath Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    samples: int
    burn_in: int
    seed: int

    def __post_init__(self) -> None:
        if self.stderr < 0.0 or self.samples <= 0:
            raise ValueError("bad Monte Carlo estimate")


@dataclass
class McResult:
    marginal: MeasureMarginal
    magnetization: np.ndarray
    magnetization_stderr: np.ndarray
    samples: int
    burn_in: int
    seed: int

    def magnetization_estimate(self, x: int) -> McEstimate:
        k = x + (len(self.magnetization) - 1) // 2
        return McEstimate(
            value=float(self.magnetization[k]),
            stderr=float(self.magnetization_stderr[k]),
            samples=self.samples,
            burn_in=self.burn_in,
            seed=self.seed,
        )


_N_BATCHES = 32


def mc_measure(
    p: ModelParams,
    eta: BoundaryCondition,
    window,
    sweeps: int,
    burn_in: int,
    seed: int,
) -> McResult:
    """Systematic-scan heat-bath sampler for mu^eta.

    Each sweep updates every site once, drawing sigma_x = +1 with probability
    expit(2 beta L_x) from the current local field L_x = sum_y J_xy sigma_y
    + h^eta(x). Cached fields are updated in O(volume) per accepted flip.
    Error bars come from batch means; at low temperature mixing is slow and
    the output is diagnostic, the exact engine is the oracle.
    """
    if not sweeps > burn_in >= 0:
        raise ValueError("need sweeps > burn_in >= 0")
    window = tuple(int(x) for x in window)
    n = p.volume
    M = interaction_matrix(p)
    h = boundary_field_vector(eta, p)
    rng = substream(seed, 0)
    sigma = rng.integers(0, 2, size=n).astype(np.float64) * 2.0 - 1.0
    L = M @ sigma + h

    n_samples = sweeps - burn_in
    counts = np.zeros(1 << len(window))
    win_idx = np.array([x + p.N for x in window])
    shifts = (1 << np.arange(len(window) - 1, -1, -1)).astype(np.int64)
    mag_batches = np.zeros((_N_BATCHES, n))
    batch_size = np.zeros(_N_BATCHES)

    two_beta = 2.0 * p.beta
    for t in range(sweeps):
        u = rng.random(n)
        for x in range(n):
            p_plus = 1.0 / (1.0 + math.exp(-two_beta * L[x]))
            s_new = 1.0 if u[x] < p_plus else -1.0
            if s_new != sigma[x]:
                L += M[:, x] * (s_new - sigma[x])
                sigma[x] = s_new
        if t >= burn_in:
            j = t - burn_in
            bits = (sigma[win_idx] > 0).astype(np.int64)
            counts[int(np.dot(bits, shifts))] += 1.0
            b = (j * _N_BATCHES) // n_samples
            mag_batches[b] += sigma
            batch_size[b] += 1.0

    used = batch_size > 0
    means = mag_batches[used] / batch_size[used][:, None]
    mag = (mag_batches.sum(axis=0)) / n_samples
    stderr = means.std(axis=0, ddof=1) / math.sqrt(used.sum()) if used.sum() > 1 \
        else np.full(n, np.inf)
    return McResult(
        marginal=MeasureMarginal(window, counts / n_samples),
        magnetization=mag,
        magnetization_stderr=stderr,
        samples=n_samples,
        burn_in=burn_in,
        seed=seed,
    )
