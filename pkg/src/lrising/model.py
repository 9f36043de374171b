"""Couplings, Hamiltonians, boundary fields and energies for the long-range chain.

The model lives on Lambda_N = [-N, N] cap Z with pair couplings

    J(x, y) = J           if |x - y| = 1,   J >= 1
            = |x-y|^(a-2) if |x - y| > 1,   0 <= a < 1   (a = alpha)
            = 0           if x = y.

Two Hamiltonian forms are exposed.  The product form

    H^eta(sigma) = -1/2 sum_{x,y in L} J_xy sigma_x sigma_y
                   - sum_{x in L, N < |y| <= Y} J_xy sigma_x eta_y

is the primary one; all Gibbs probabilities are computed from it.  The
indicator form writes the bulk as (1/2) sum J_xy 1{sigma_x != sigma_y} and the
boundary as sum_x h(x) 1{sigma_x = -1}; it relates to the product form by
H_prod = 2 * H_ind - (C + W) with C = sum_{x<y} J_xy and W the boundary
energy, so the two generate the same Gibbs measure after beta -> 2 beta.
Exterior sums are truncated at radius Y > N; the neglected variance
sum_{|y|>Y} S_y(N)^2 is controlled by an explicit integral bound.

All reference summations run in a fixed deterministic order (increasing
|x - y|, then x, then y) so repeated runs produce identical floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# Parameters and state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Decay exponent alpha, inverse temperature beta, coupling J, half-width N,
    exterior truncation radius Y."""

    alpha: float
    N: int
    beta: float = 1.0
    J: float = 1.0
    Y: int | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.J < 1.0:
            raise ValueError(f"J must be >= 1, got {self.J}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.Y is None:
            object.__setattr__(self, "Y", 16 * self.N)
        if self.Y <= self.N:
            raise ValueError(f"Y must exceed N, got Y={self.Y}, N={self.N}")

    @property
    def volume(self) -> int:
        return 2 * self.N + 1

    def sites(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)


@dataclass(frozen=True)
class SpinConfig:
    """Spins +-1 on Lambda_N, stored left to right (index i holds site i - N)."""

    spins: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.spins, dtype=np.int8)
        if arr.ndim != 1 or arr.size % 2 == 0:
            raise ValueError("spins must be a 1-d array of odd length 2N+1")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("every spin must be exactly +1 or -1")
        object.__setattr__(self, "spins", arr)

    @property
    def N(self) -> int:
        return (self.spins.size - 1) // 2

    def at(self, x: int) -> int:
        return int(self.spins[x + self.N])

    def flipped(self) -> "SpinConfig":
        return SpinConfig(-self.spins)

    @staticmethod
    def all_plus(N: int) -> "SpinConfig":
        return SpinConfig(np.ones(2 * N + 1, dtype=np.int8))

    @staticmethod
    def all_minus(N: int) -> "SpinConfig":
        return SpinConfig(-np.ones(2 * N + 1, dtype=np.int8))


@dataclass(frozen=True)
class BoundaryCondition:
    """Signs on the exterior sites N < |y| <= Y.

    ``signs`` covers the whole line [-Y, Y] (index y + Y); entries inside
    [-N, N] are zero by construction, and kind="zero" means free boundary
    (every entry zero).  ``seed`` records the generator draw for random kinds.
    """

    signs: np.ndarray
    N: int
    Y: int
    kind: str = "random"
    seed: int = 0

    _KINDS = ("random", "all-plus", "all-minus", "dobrushin", "zero")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        arr = np.asarray(self.signs, dtype=np.int8)
        if arr.size != 2 * self.Y + 1:
            raise ValueError("signs must cover [-Y, Y]")
        if np.any(arr[self.Y - self.N : self.Y + self.N + 1] != 0):
            raise ValueError("signs must vanish inside [-N, N]")
        object.__setattr__(self, "signs", arr)

    def sign(self, y: int) -> int:
        return int(self.signs[y + self.Y])

    def exterior_sites(self) -> np.ndarray:
        """Exterior sites in the fixed order [-Y .. -N-1, N+1 .. Y]."""
        left = np.arange(-self.Y, -self.N)
        right = np.arange(self.N + 1, self.Y + 1)
        return np.concatenate([left, right])

    def exterior_signs(self) -> np.ndarray:
        return self.signs[self.exterior_sites() + self.Y]

    def negated(self) -> "BoundaryCondition":
        flip = {"all-plus": "all-minus", "all-minus": "all-plus"}
        return BoundaryCondition(
            -self.signs, self.N, self.Y, flip.get(self.kind, self.kind), self.seed
        )

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(p: ModelParams) -> "BoundaryCondition":
        return BoundaryCondition(
            np.zeros(2 * p.Y + 1, dtype=np.int8), p.N, p.Y, "zero", 0
        )

    @staticmethod
    def all_plus(p: ModelParams) -> "BoundaryCondition":
        return BoundaryCondition(
            _exterior_mask(p).astype(np.int8), p.N, p.Y, "all-plus", 0
        )

    @staticmethod
    def all_minus(p: ModelParams) -> "BoundaryCondition":
        return BoundaryCondition(
            -_exterior_mask(p).astype(np.int8), p.N, p.Y, "all-minus", 0
        )

    @staticmethod
    def dobrushin(p: ModelParams) -> "BoundaryCondition":
        """Minus on the left exterior, plus on the right."""
        signs = np.zeros(2 * p.Y + 1, dtype=np.int8)
        signs[: p.Y - p.N] = -1
        signs[p.Y + p.N + 1 :] = 1
        return BoundaryCondition(signs, p.N, p.Y, "dobrushin", 0)

    @staticmethod
    def random(p: ModelParams, seed: int) -> "BoundaryCondition":
        """Fair i.i.d. +-1 draw per exterior site from the (seed, 0) substream."""
        from .rng import substream

        gen = substream(seed, 0)
        n_ext = 2 * (p.Y - p.N)
        draw = np.where(gen.integers(0, 2, size=n_ext) == 1, 1, -1).astype(np.int8)
        signs = np.zeros(2 * p.Y + 1, dtype=np.int8)
        signs[: p.Y - p.N] = draw[: p.Y - p.N]
        signs[p.Y + p.N + 1 :] = draw[p.Y - p.N :]
        return BoundaryCondition(signs, p.N, p.Y, "random", seed)


def _exterior_mask(p: ModelParams) -> np.ndarray:
    mask = np.ones(2 * p.Y + 1, dtype=np.int8)
    mask[p.Y - p.N : p.Y + p.N + 1] = 0
    return mask


# ---------------------------------------------------------------------------
# Couplings
# ---------------------------------------------------------------------------

def coupling(x: int, y: int, p: ModelParams) -> float:
    """J(x, y): J at distance 1, |x-y|^(alpha-2) beyond, 0 on the diagonal."""
    d = abs(x - y)
    if d == 0:
        return 0.0
    if d == 1:
        return p.J
    return float(d) ** (p.alpha - 2.0)


def coupling_by_distance(max_d: int, p: ModelParams) -> np.ndarray:
    """Array f with f[d] = J(0, d) for d = 0 .. max_d."""
    f = np.zeros(max_d + 1)
    if max_d >= 1:
        f[1] = p.J
    if max_d >= 2:
        d = np.arange(2, max_d + 1, dtype=float)
        f[2:] = d ** (p.alpha - 2.0)
    return f


def interaction_matrix(p: ModelParams) -> np.ndarray:
    """Dense (2N+1) x (2N+1) coupling matrix over Lambda_N."""
    sites = p.sites()
    d = np.abs(sites[:, None] - sites[None, :])
    f = coupling_by_distance(2 * p.N, p)
    return f[d]


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def _bulk_pairs(N: int) -> Iterable[tuple[int, int]]:
    # unordered pairs of Lambda_N, by increasing distance, then left site
    for d in range(1, 2 * N + 1):
        for x in range(-N, N - d + 1):
            yield x, x + d


def hamiltonian(
    sigma: SpinConfig, eta: BoundaryCondition, p: ModelParams, form: str = "product"
) -> float:
    """H^eta(sigma) per the module docstring; ``form`` picks the convention.

    form="product":   -1/2 sum J ss - sum J s eta   (the primary form)
    form="indicator": 1/2 sum J 1{s != s} + sum_x h(x) 1{sigma_x = -1}
    """
    if form not in ("product", "indicator"):
        raise ValueError(f"unknown Hamiltonian form {form!r}")
    if sigma.N != p.N:
        raise ValueError("sigma does not match p.N")
    if eta.N != p.N or eta.Y != p.Y:
        raise ValueError("eta does not match (N, Y)")

    bulk = 0.0
    if form == "product":
        for x, y in _bulk_pairs(p.N):
            bulk += coupling(x, y, p) * sigma.at(x) * sigma.at(y)
    else:
        for x, y in _bulk_pairs(p.N):
            if sigma.at(x) != sigma.at(y):
                bulk += coupling(x, y, p)

    bnd = 0.0
    # boundary pairs by increasing distance, then x, then y
    for d in range(1, p.N + p.Y + 1):
        for x in range(-p.N, p.N + 1):
            for y in (x - d, x + d):
                if p.N < abs(y) <= p.Y:
                    s = eta.sign(y)
                    if s == 0:
                        continue
                    if form == "product":
                        bnd += coupling(x, y, p) * sigma.at(x) * s
                    elif sigma.at(x) == -1:
                        bnd += coupling(x, y, p) * s

    if form == "product":
        return -bulk - bnd
    return bulk + bnd


# ---------------------------------------------------------------------------
# Boundary fields and energies
# ---------------------------------------------------------------------------

def boundary_field(x: int, eta: BoundaryCondition, p: ModelParams) -> float:
    """h^eta(x) = sum_{N < |y| <= Y} J(x, y) eta_y, antisymmetric in eta."""
    if not (-p.N <= x <= p.N):
        raise ValueError(f"x={x} outside Lambda_N")
    acc = 0.0
    for d in range(1, p.N + p.Y + 1):
        for y in (x - d, x + d):
            if p.N < abs(y) <= p.Y:
                s = eta.sign(y)
                if s != 0:
                    acc += coupling(x, y, p) * s
    return acc


def boundary_field_vector(eta: BoundaryCondition, p: ModelParams) -> np.ndarray:
    """h^eta(x) for all x in Lambda_N at once (vectorized, for the engines)."""
    ys = eta.exterior_sites()
    signs = eta.exterior_signs().astype(np.float64)
    f = coupling_by_distance(p.N + p.Y, p)
    xs = p.sites()
    d = np.abs(xs[:, None] - ys[None, :])
    return f[d] @ signs


class BoundaryEnergy(NamedTuple):
    W: float
    variance_tail_bound: float


def variance_tail_bound(p: ModelParams) -> float:
    """Bound on the truncated variance sum_{|y| > Y} S_y(N)^2.

    From S_y(N) <= J (2N+1) (|y|-N)^(alpha-2) for |y| > N and an integral
    comparison: 2 J^2 (2N+1)^2 (Y-N)^(2 alpha - 3) / (3 - 2 alpha).
    """
    return (
        2.0
        * p.J**2
        * (2 * p.N + 1) ** 2
        * (p.Y - p.N) ** (2 * p.alpha - 3.0)
        / (3.0 - 2.0 * p.alpha)
    )


def boundary_energy(eta: BoundaryCondition, p: ModelParams) -> BoundaryEnergy:
    """W_N^eta = sum_{x in Lambda} h^eta(x), with the truncation tail bound."""
    w = 0.0
    for x in range(-p.N, p.N + 1):
        w += boundary_field(x, eta, p)
    return BoundaryEnergy(w, variance_tail_bound(p))


class CoefficientProfile(NamedTuple):
    y: np.ndarray
    S: np.ndarray
    bound: np.ndarray


def coefficient_profile(p: ModelParams) -> CoefficientProfile:
    """S_y(N) = sum_{x in Lambda_N} J(x, y) for N < y <= Y (symmetric in +-y).

    Also returns the analytic bound (2-alpha)/(1-alpha) (y-N)^(alpha-1),
    valid for y > 2N, and verifies it there.
    """
    f = coupling_by_distance(p.N + p.Y, p)
    F = np.concatenate([[0.0], np.cumsum(f)])  # F[k] = sum_{d < k} f[d]
    ys = np.arange(p.N + 1, p.Y + 1)
    # S_y = sum_{d = y-N}^{y+N} f[d]
    S = F[ys + p.N + 1] - F[ys - p.N]
    bound = (2.0 - p.alpha) / (1.0 - p.alpha) * (ys - p.N) ** (p.alpha - 1.0)
    far = ys > 2 * p.N
    if np.any(S[far] > bound[far]):
        bad = ys[far][S[far] > bound[far]]
        raise ValueError(f"coefficient bound violated at y={bad[:5].tolist()}")
    return CoefficientProfile(ys, S, bound)


# ---------------------------------------------------------------------------
# Window marginals and the seminorm distance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureMarginal:
    """Probabilities over the 2^|X| spin patterns on a sorted window X.

    Pattern k assigns site X[j] the spin +1 when bit (|X|-1-j) of k is set,
    -1 otherwise; so k runs lexicographically over patterns with the first
    window site as the most significant digit and -1 < +1.
    """

    window: tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        win = tuple(int(x) for x in self.window)
        if list(win) != sorted(set(win)):
            raise ValueError("window must be sorted distinct sites")
        pr = np.asarray(self.probs, dtype=np.float64)
        if pr.size != 2 ** len(win):
            raise ValueError("probs must have length 2^|X|")
        if np.any(pr < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(pr.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {pr.sum()!r}, not 1")
        object.__setattr__(self, "window", win)
        object.__setattr__(self, "probs", pr)

    @staticmethod
    def pattern_index(window: Sequence[int], assignment: dict[int, int]) -> int:
        k = 0
        for site in window:
            k = (k << 1) | (1 if assignment[site] == 1 else 0)
        return k

    @staticmethod
    def point_mass(window: Sequence[int], value: int) -> "MeasureMarginal":
        """Point mass on the constant pattern sigma = value on X."""
        win = tuple(window)
        probs = np.zeros(2 ** len(win))
        k = (2 ** len(win) - 1) if value == 1 else 0
        probs[k] = 1.0
        return MeasureMarginal(win, probs)

    def negated(self) -> "MeasureMarginal":
        """Marginal of -sigma: pattern k maps to its bitwise complement."""
        n = len(self.window)
        idx = (2**n - 1) - np.arange(2**n)
        return MeasureMarginal(self.window, self.probs[idx])


def window_distance(a: MeasureMarginal, b: MeasureMarginal) -> float:
    """sum_s |a(s) - b(s)| on a shared window.

    Equals the seminorm sup over test functions with |f| <= 1 supported on X,
    because the extreme points of that ball are the +-1 valued functions.
    """
    if a.window != b.window:
        raise ValueError(f"incomparable marginals: windows {a.window} vs {b.window}")
    return float(np.sum(np.abs(a.probs - b.probs)))


def mix_marginals(
    parts: Sequence[tuple[float, MeasureMarginal]]
) -> MeasureMarginal:
    """Convex combination of marginals on one window."""
    window = parts[0][1].window
    acc = np.zeros_like(parts[0][1].probs)
    for w, m in parts:
        if m.window != window:
            raise ValueError("mixture components live on different windows")
        acc = acc + w * m.probs
    return MeasureMarginal(window, acc)
