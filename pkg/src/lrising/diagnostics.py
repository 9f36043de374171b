"""Contour-gas diagnostics: Peierls ratios, entropy sums, quasi-additivity,
and truncated rho series.

The exhaustive checks all ride on one streaming enumerator of contour
shapes: families of integer base intervals that pairwise satisfy the full
triangle bound d(T, T') >= min(|T|, |T'|) and agglomerate into a single
contour at grouping constant c. Within the mass budgets used here (<= 8,
c >= 14) the merge relation reduces exactly to the cubic distance rule,
because any pair of clusters with overlapping base unions sits at distance
at most 7 and is therefore always merged by distance before the nesting
alternative could matter; unit tests cross-check the enumerator against
the real grouping on small masses.

Interior shapes are translation-reduced (leftmost base starts at 0) and
re-weighted by their support size when a sum over contours containing the
origin is needed. The Peierls scan enumerates absolute families inside
Lambda_N instead, wall triangles included (at most one per family, which is
all the growth dynamics can produce).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .contours import (
    Triangle,
    chi,
    contour_energy,
    default_c,
    free_hamiltonian,
    group_contours,
    reconstruct_config,
    triangles_from_config,
    _row_sums,
)
from .model import ModelParams, SpinConfig, coupling_by_distance
from .rng import substream

_MAX_ACCEPTED = 2 * 10**6
_MAX_NODES = 5 * 10**6

ALPHA_PLUS = math.log(3.0) / math.log(2.0) - 1.0


class EnumerationBudgetExceeded(RuntimeError):
    """The contour enumeration outgrew its node or acceptance budget."""


def quasi_additivity_constant(
    alpha: float, c: float | None = None, variant: str = "printed"
) -> float:
    """K_c(alpha) in both sign conventions for the pi^2/(6c) term.

    The printed form is 1 - (2-alpha)/c^(1-alpha) + pi^2/(6c); the minus
    variant flips the last sign. Checks assert against the smaller minus
    variant and report both.
    """
    if c is None:
        c = float(default_c())
    base = 1.0 - (2.0 - alpha) / c ** (1.0 - alpha)
    corr = math.pi**2 / (6.0 * c)
    if variant == "printed":
        return base + corr
    if variant == "minus":
        return base - corr
    raise ValueError(f"unknown K_c variant {variant!r}")


# ---------------------------------------------------------------------------
# Shape enumeration
# ---------------------------------------------------------------------------

class _Counters:
    __slots__ = ("nodes", "accepted")

    def __init__(self) -> None:
        self.nodes = 0
        self.accepted = 0

    def bump_nodes(self) -> None:
        self.nodes += 1
        if self.nodes > _MAX_NODES:
            raise EnumerationBudgetExceeded(
                f"enumeration exceeded {_MAX_NODES} candidate nodes"
            )

    def bump_accepted(self) -> None:
        self.accepted += 1
        if self.accepted > _MAX_ACCEPTED:
            raise EnumerationBudgetExceeded(
                f"enumeration exceeded {_MAX_ACCEPTED} accepted families"
            )


def _ivd(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Flank distance between two base intervals (always an integer)."""
    al, ah = a
    bl, bh = b
    return min(abs(bl - al), abs(bh - ah), abs(bl - ah - 1), abs(bh - al + 1))


def _cluster_distance(
    iv_a: tuple[tuple[int, int], ...], iv_b: tuple[tuple[int, int], ...]
) -> int:
    return min(_ivd(a, b) for a in iv_a for b in iv_b)


def _clusters_within(
    iv_a: tuple[tuple[int, int], ...],
    iv_b: tuple[tuple[int, int], ...],
    lim: float,
) -> bool:
    """Early-exit test for min interval distance <= lim."""
    for al, ah in iv_a:
        for bl, bh in iv_b:
            if (
                min(abs(bl - al), abs(bh - ah), abs(bl - ah - 1), abs(bh - al + 1))
                <= lim
            ):
                return True
    return False


def _merge_clusters(
    clusters: tuple[tuple[int, tuple[tuple[int, int], ...]], ...],
    cand: tuple[int, int],
    c: float,
) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Add cand as a singleton cluster and re-run merging to the fixpoint.

    The incoming state is already a fixpoint, so only clusters touching the
    candidate (directly, or through the cluster it seeds) can merge; the
    rest stay pairwise separated.
    """
    cand_mass = cand[1] - cand[0] + 1
    merged_mass = cand_mass
    merged_ivs = (cand,)
    rest = []
    for mcl, ivs in clusters:
        lim = c * (mcl if mcl < cand_mass else cand_mass) ** 3
        if _clusters_within(ivs, merged_ivs, lim):
            merged_mass += mcl
            merged_ivs += ivs
        else:
            rest.append((mcl, ivs))
    changed = True
    while changed and rest:
        changed = False
        for idx, (mj, vj) in enumerate(rest):
            lim = c * (mj if mj < merged_mass else merged_mass) ** 3
            if _clusters_within(merged_ivs, vj, lim):
                merged_mass += mj
                merged_ivs += vj
                del rest[idx]
                changed = True
                break
    rest.append((merged_mass, merged_ivs))
    return tuple(rest)


def _doomed(
    clusters: tuple[tuple[int, tuple[tuple[int, int], ...]], ...],
    next_lo_min: int,
    budget: int,
    c: float,
    total: int,
) -> bool:
    """True when some cluster can no longer rejoin anything.

    A cluster of mass mu can grow by at most the remaining budget, and its
    eventual partner carries at most total - mu, so the merge radius is
    capped by c min(mu + budget, total - mu)^3; future intervals all start
    at or after next_lo_min.
    """
    if len(clusters) == 1:
        return False
    if budget == 0:
        return True
    for i, (mi, vi) in enumerate(clusters):
        cap = c * min(mi + budget, total - mi) ** 3
        hi_i = max(h for _, h in vi)
        if next_lo_min - 1 - hi_i <= cap:
            continue
        reachable = False
        for j, (mj, vj) in enumerate(clusters):
            if j == i:
                continue
            lim = c * min(mi + budget, mj + budget) ** 3
            if _clusters_within(vi, vj, lim):
                reachable = True
                break
        if not reachable:
            return True
    return False


def _extend_interior(
    placed: list[tuple[int, int]],
    clusters: tuple,
    budget: int,
    c: float,
    total: int,
    counters: _Counters,
) -> Iterator[tuple[tuple[int, int], ...]]:
    if budget == 0:
        if len(clusters) == 1:
            counters.bump_accepted()
            yield tuple(placed)
        return
    last_lo, last_hi = placed[-1]
    max_hi = max(h for _, h in placed)
    placed_mass = total - budget
    reach = max_hi + 1 + int(c * min(placed_mass, budget) ** 3)
    bump = counters.bump_nodes
    for lo in range(last_lo, reach + 1):
        w_min = last_hi - lo + 2 if lo == last_lo else 1
        for w in range(w_min, budget + 1):
            bump()
            hi = lo + w - 1
            ok = True
            for l, h in placed:
                d = min(abs(lo - l), abs(hi - h), abs(lo - h - 1), abs(hi - l + 1))
                if d < (h - l + 1) and d < w:
                    ok = False
                    break
            if not ok:
                continue
            cand = (lo, hi)
            new_clusters = _merge_clusters(clusters, cand, c)
            if len(new_clusters) > 1 and _doomed(
                new_clusters, lo, budget - w, c, total
            ):
                continue
            placed.append(cand)
            yield from _extend_interior(
                placed, new_clusters, budget - w, c, total, counters
            )
            placed.pop()


def iter_contour_shapes(
    m: int, c: float | None = None, counters: _Counters | None = None
) -> Iterator[tuple[tuple[int, int], ...]]:
    """All single-contour interior shapes of total mass m, leftmost base at 0.

    Shapes are tuples of (lo, hi) base intervals in lexicographic order,
    pairwise satisfying the full triangle bound and merging into one contour
    at constant c. Every contour of mass m anywhere on the line is a unique
    translate of exactly one shape.
    """
    if m < 1:
        raise ValueError("mass must be positive")
    if c is None:
        c = float(default_c())
    if counters is None:
        counters = _Counters()
    for w in range(1, m + 1):
        first = (0, w - 1)
        if w == m:
            counters.bump_accepted()
            yield (first,)
            continue
        yield from _extend_interior(
            [first], ((w, (first,)),), m - w, c, m, counters
        )


def _shape_sites(
    shape: Sequence[tuple[int, int]],
) -> tuple[list[int], list[int], list[int]]:
    """(flipped, support, base-with-multiplicity) site lists for a shape.

    Bases may nest, so the flipped set is the odd-cover set and the support
    is the union; all three lists are ascending except base sites, which
    follow base order.
    """
    lo = min(l for l, _ in shape)
    hi = max(h for _, h in shape)
    cover = [0] * (hi - lo + 1)
    base_sites = []
    for l, h in shape:
        for x in range(l, h + 1):
            cover[x - lo] += 1
            base_sites.append(x)
    flip = [i + lo for i, v in enumerate(cover) if v & 1]
    supp = [i + lo for i, v in enumerate(cover) if v]
    return flip, supp, base_sites


def _shape_norm(widths: Sequence[int], alpha: float) -> float:
    if alpha > 0.0:
        return float(sum(float(w) ** alpha for w in widths))
    return float(sum(4.0 + math.log(w) for w in widths))


# ---------------------------------------------------------------------------
# Entropy bound (contour counting)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyRow:
    m: int
    n_shapes: int
    n_contours: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class EntropyReport:
    alpha: float
    b: float
    rows: tuple[EntropyRow, ...]
    guard_tripped_at: int | None

    @property
    def all_hold(self) -> bool:
        return self.guard_tripped_at is None and all(r.holds for r in self.rows)


def entropy_bound_scan(
    alphas: Sequence[float],
    bs: Sequence[float],
    m_max: int,
    c: float | None = None,
) -> list[EntropyReport]:
    """Evaluate sum_{Gamma ni 0, |Gamma| = m} e^{-b ||Gamma||_alpha} against
    2 m e^{-b chi_alpha(m)} for every (alpha, b), sharing one enumeration.

    A budget trip at some m truncates every report at m - 1 and records the
    mass where enumeration gave out.
    """
    acc = {(a, b): [] for a in alphas for b in bs}
    shape_counts: list[int] = []
    contour_counts: list[int] = []
    tripped_at: int | None = None
    for m in range(1, m_max + 1):
        sums = {key: 0.0 for key in acc}
        n_shapes = 0
        n_contours = 0
        norm_cache: dict[tuple[int, ...], dict[float, float]] = {}
        try:
            for shape in iter_contour_shapes(m, c):
                widths = tuple(sorted(h - l + 1 for l, h in shape))
                weights = norm_cache.get(widths)
                if weights is None:
                    weights = {
                        (a, b): math.exp(-b * _shape_norm(widths, a))
                        for a in alphas
                        for b in bs
                    }
                    norm_cache[widths] = weights
                supp = len(_shape_sites(shape)[1])
                n_shapes += 1
                n_contours += supp
                for key, w in weights.items():
                    sums[key] += supp * w
        except EnumerationBudgetExceeded:
            tripped_at = m
            break
        shape_counts.append(n_shapes)
        contour_counts.append(n_contours)
        for key in acc:
            acc[key].append(sums[key])
    reports = []
    for a in alphas:
        for b in bs:
            rows = tuple(
                EntropyRow(
                    m=m,
                    n_shapes=shape_counts[m - 1],
                    n_contours=contour_counts[m - 1],
                    lhs=acc[(a, b)][m - 1],
                    rhs=2.0 * m * math.exp(-b * chi(m, a)),
                )
                for m in range(1, len(shape_counts) + 1)
            )
            reports.append(
                EntropyReport(alpha=a, b=b, rows=rows, guard_tripped_at=tripped_at)
            )
    return reports


def entropy_bound_check(
    alpha: float, b: float, m_max: int, c: float | None = None
) -> EntropyReport:
    """Single (alpha, b) entropy check; raises if enumeration overflows or
    the bound fails at some mass."""
    report = entropy_bound_scan([alpha], [b], m_max, c)[0]
    if report.guard_tripped_at is not None:
        raise EnumerationBudgetExceeded(
            f"mass {report.guard_tripped_at} is not exhaustively enumerable "
            f"within the node budget"
        )
    bad = [r.m for r in report.rows if not r.holds]
    if bad:
        raise AssertionError(
            f"entropy bound fails at alpha={alpha}, b={b} for masses {bad}: "
            + ", ".join(
                f"m={r.m}: {r.lhs:.6g} > {r.rhs:.6g}"
                for r in report.rows
                if not r.holds
            )
        )
    return report


# ---------------------------------------------------------------------------
# Peierls ratios over Lambda_N
# ---------------------------------------------------------------------------

def _extend_window(
    placed: list[tuple[int, int]],
    clusters: tuple,
    budget: int,
    n_wall: int,
    N: int,
    c: float,
    total: int,
    counters: _Counters,
) -> Iterator[tuple[tuple[tuple[int, int], ...], int]]:
    if len(clusters) == 1:
        counters.bump_accepted()
        yield tuple(placed), n_wall
    if budget == 0:
        return
    last_lo, last_hi = placed[-1]
    max_hi = max(h for _, h in placed)
    placed_mass = total - budget
    reach = min(N, max_hi + 1 + int(c * min(placed_mass, budget) ** 3))
    bump = counters.bump_nodes
    for lo in range(last_lo, reach + 1):
        w_min = last_hi - lo + 2 if lo == last_lo else 1
        for w in range(w_min, budget + 1):
            hi = lo + w - 1
            if hi > N:
                break
            bump()
            wall = lo == -N or hi == N
            ok = True
            for l, h in placed:
                d = min(abs(lo - l), abs(hi - h), abs(lo - h - 1), abs(hi - l + 1))
                if d < (h - l + 1) and d < w:
                    ok = False
                    break
            if not ok:
                continue
            cand = (lo, hi)
            new_clusters = _merge_clusters(clusters, cand, c)
            if len(new_clusters) > 1 and _doomed(
                new_clusters, lo, budget - w, c, total
            ):
                continue
            placed.append(cand)
            yield from _extend_window(
                placed, new_clusters, budget - w, n_wall + int(wall),
                N, c, total, counters,
            )
            placed.pop()


def iter_window_contours(
    N: int, M_max: int, c: float | None = None
) -> Iterator[tuple[tuple[tuple[int, int], ...], int]]:
    """All single-contour families inside Lambda_N with total mass <= M_max.

    Yields (bases, wall_count); a base touching -N or N is a wall triangle.
    Two wall triangles on the same side would share an endpoint and violate
    the separation bound, so wall_count is at most 2 (one per side).
    """
    if c is None:
        c = float(default_c())
    counters = _Counters()
    for lo in range(-N, N + 1):
        for w in range(1, M_max + 1):
            hi = lo + w - 1
            if hi > N:
                break
            wall = lo == -N or hi == N
            yield from _extend_window(
                [(lo, hi)], ((w, ((lo, hi),)),), M_max - w, int(wall),
                N, c, M_max, counters,
            )


@dataclass(frozen=True)
class PeierlsReport:
    alpha: float
    N: int
    M_max: int
    n_contours: int
    min_ratio: float
    argmin_bases: tuple[tuple[int, int], ...]
    min_ratio_interior: float
    zeta_by_cutoff: tuple[tuple[int, float], ...]

    @property
    def zeta_hat(self) -> float:
        return 2.0 * self.min_ratio

    def zeta_at_cutoff(self, M: int) -> float:
        for cutoff, zeta in self.zeta_by_cutoff:
            if cutoff == M:
                return zeta
        raise KeyError(M)


def peierls_scan(
    alphas: Sequence[float],
    M_max: int,
    N: int,
    J: float = 1.0,
    c: float | None = None,
) -> dict[float, PeierlsReport]:
    """Minimum H^f[Gamma]/||Gamma||_alpha over all contours in Lambda_N of
    mass <= M_max, for several alphas in one enumeration pass."""
    for alpha in alphas:
        if not 0.0 <= alpha < ALPHA_PLUS:
            raise ValueError(
                f"Peierls check needs 0 <= alpha < log3/log2 - 1, got {alpha}"
            )
    p_by_alpha = {a: ModelParams(alpha=a, N=N, J=J) for a in alphas}
    R = {a: _row_sums(a, J, N).tolist() for a in alphas}
    f = {a: coupling_by_distance(2 * N, p_by_alpha[a]).tolist() for a in alphas}
    alpha_list = list(alphas)
    norm_cache: dict[tuple[int, ...], list[float]] = {}
    n_contours = 0
    best: dict[float, tuple[float, tuple]] = {a: (math.inf, ()) for a in alphas}
    best_interior = {a: math.inf for a in alphas}
    best_by_mass: dict[float, dict[int, float]] = {
        a: {m: math.inf for m in range(1, M_max + 1)} for a in alphas
    }
    for bases, n_wall in iter_window_contours(N, M_max, c):
        n_contours += 1
        mass = sum(h - l + 1 for l, h in bases)
        widths = tuple(sorted(h - l + 1 for l, h in bases))
        norms = norm_cache.get(widths)
        if norms is None:
            norms = [_shape_norm(widths, a) for a in alpha_list]
            norm_cache[widths] = norms
        flip = _shape_sites(bases)[0]
        for ai, a in enumerate(alpha_list):
            fa = f[a]
            Ra = R[a]
            pair = 0.0
            for i, x in enumerate(flip):
                for y in flip[i + 1 :]:
                    pair += fa[y - x]
            H = -2.0 * pair
            for x in flip:
                H += Ra[x + N]
            ratio = H / norms[ai]
            if ratio < best[a][0]:
                best[a] = (ratio, bases)
            if n_wall == 0 and ratio < best_interior[a]:
                best_interior[a] = ratio
            if ratio < best_by_mass[a][mass]:
                best_by_mass[a][mass] = ratio
    reports = {}
    for a in alphas:
        mins = []
        running = math.inf
        for m in range(1, M_max + 1):
            running = min(running, best_by_mass[a][m])
            mins.append((m, 2.0 * running))
        ratio, bases = best[a]
        if not ratio > 0.0:
            raise AssertionError(
                f"Peierls ratio is not positive at alpha={a}: "
                f"{ratio} on bases {bases}"
            )
        reports[a] = PeierlsReport(
            alpha=a,
            N=N,
            M_max=M_max,
            n_contours=n_contours,
            min_ratio=ratio,
            argmin_bases=bases,
            min_ratio_interior=best_interior[a],
            zeta_by_cutoff=tuple(mins),
        )
    return reports


def peierls_check(alpha: float, M_max: int, p: ModelParams) -> PeierlsReport:
    """Spec'd single-alpha entry point."""
    return peierls_scan([alpha], M_max, p.N, J=p.J)[alpha]


# ---------------------------------------------------------------------------
# Quasi-additivity on random families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasiAdditivityReport:
    alpha: float
    c: float
    trials: int
    families: int
    multi_contour_families: int
    contours_tested: int
    K_printed: float
    K_minus: float
    min_removal_ratio: float
    min_superadditivity_ratio: float
    removal_violations_printed: int
    removal_violations_minus: int
    superadditivity_violations_printed: int
    superadditivity_violations_minus: int


def quasi_additivity_check(
    alpha: float,
    c: float | None = None,
    trials: int = 10_000,
    seed: int = 0,
    N: int = 16,
    J: float = 1.0,
) -> QuasiAdditivityReport:
    """Sample random configurations and test both quasi-additivity displays.

    For every contour Gamma_0 of every sampled family: the removal inequality
    H^f[family] - H^f[family minus Gamma_0] >= K_c(alpha) H^f[{Gamma_0}], and
    for the family as a whole the superadditivity inequality
    H^f[family] >= K_c(alpha) sum_Gamma H^f[{Gamma}]. Violations are counted
    against both K_c sign conventions.
    """
    from .contours import find_min_c

    if c is None:
        c = float(default_c())
    if c < find_min_c():
        raise ValueError(f"c={c} is below the admissible minimum")
    p = ModelParams(alpha=alpha, N=N, J=J)
    K_pr = quasi_additivity_constant(alpha, c, "printed")
    K_mi = quasi_additivity_constant(alpha, c, "minus")
    families = multi = contours_tested = 0
    min_rem = min_sup = math.inf
    viol = {"rem_pr": 0, "rem_mi": 0, "sup_pr": 0, "sup_mi": 0}
    slack = 1e-9
    for i in range(trials):
        rng = substream(seed, i)
        spins = (rng.integers(0, 2, size=2 * N + 1) * 2 - 1).astype(np.int8)
        sigma = SpinConfig(spins)
        tri = triangles_from_config(sigma)
        if not tri:
            continue
        cs = group_contours(tri, c)
        families += 1
        if len(cs) > 1:
            multi += 1
        H_full = free_hamiltonian(sigma, p)
        singles = [contour_energy(cs.contour_triangles(k), p) for k in range(len(cs))]
        for k in range(len(cs)):
            contours_tested += 1
            rest = [
                t
                for j in range(len(cs))
                if j != k
                for t in cs.contour_triangles(j)
            ]
            H_rest = (
                free_hamiltonian(reconstruct_config(rest, 1, N), p) if rest else 0.0
            )
            gain = H_full - H_rest
            ratio = gain / singles[k]
            min_rem = min(min_rem, ratio)
            if gain < K_pr * singles[k] - slack:
                viol["rem_pr"] += 1
            if gain < K_mi * singles[k] - slack:
                viol["rem_mi"] += 1
        total_single = sum(singles)
        sup_ratio = H_full / total_single
        min_sup = min(min_sup, sup_ratio)
        if H_full < K_pr * total_single - slack:
            viol["sup_pr"] += 1
        if H_full < K_mi * total_single - slack:
            viol["sup_mi"] += 1
    return QuasiAdditivityReport(
        alpha=alpha,
        c=c,
        trials=trials,
        families=families,
        multi_contour_families=multi,
        contours_tested=contours_tested,
        K_printed=K_pr,
        K_minus=K_mi,
        min_removal_ratio=min_rem,
        min_superadditivity_ratio=min_sup,
        removal_violations_printed=viol["rem_pr"],
        removal_violations_minus=viol["rem_mi"],
        superadditivity_violations_printed=viol["sup_pr"],
        superadditivity_violations_minus=viol["sup_mi"],
    )


# ---------------------------------------------------------------------------
# Truncated rho series
# ---------------------------------------------------------------------------

def h_tilde(x: np.ndarray, N: int, n: int, eps: float, alpha: float) -> np.ndarray:
    """Field cap (N+x)^(alpha-3/2+eps) + (N-x)^(alpha-3/2+eps), zeroed on the
    n outermost sites on each side (n >= 1, so the exponent never sees 0)."""
    x = np.asarray(x, dtype=np.float64)
    ex = alpha - 1.5 + eps
    good = np.abs(x) <= N - n
    base_p = np.where(good, N + x, 1.0)
    base_m = np.where(good, N - x, 1.0)
    return np.where(good, base_p**ex + base_m**ex, 0.0)


@dataclass(frozen=True)
class RhoScanResult:
    alpha: float
    a: float
    eps: float
    N: int
    n: int
    M_max: int
    c: float
    variant: str
    betas: tuple[float, ...]
    values: tuple[float, ...]
    completed_mass: int
    guard_tripped: bool

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.values, self.values[1:]))


def rho_scan(
    alpha: float,
    betas: Sequence[float],
    a: float = 0.5,
    eps: float = 0.1,
    N: int = 4096,
    n: int = 2,
    M_max: int = 6,
    J: float = 1.0,
    c: float | None = None,
    variant: str = "printed",
    require_decreasing: bool = False,
) -> RhoScanResult:
    """Truncated rho(beta) = sum over contours containing 0 of mass <= M_max
    of exp(-a beta (2 K_c - 1) H^f[Gamma] + 2 beta sum_T sum_{x in T} h~(x)).

    All betas share one enumeration. If the mass-M_max layer overflows the
    enumeration budget, the result carries the completed partial sums and
    the guard flag instead of raising.
    """
    if not 0.5 < alpha < 1.0:
        raise ValueError("rho needs 1/2 < alpha < 1")
    if not 0.0 < eps < 1.0 - alpha:
        raise ValueError("rho needs 0 < eps < 1 - alpha")
    if not 1 <= n < N ** ((alpha - 0.5) / 2.0):
        raise ValueError("rho needs 1 <= n < N^((alpha-1/2)/2)")
    if c is None:
        c = float(default_c())
    K = quasi_additivity_constant(alpha, c, variant)
    coef = a * (2.0 * K - 1.0)
    p = ModelParams(alpha=alpha, N=N, J=J)
    R = _row_sums(alpha, J, N).tolist()
    f = coupling_by_distance(2 * N, p).tolist()
    h_cap = h_tilde(np.arange(-N, N + 1), N, n, eps, alpha).tolist()
    betas = tuple(float(b) for b in betas)
    exp = math.exp
    acc = [0.0] * len(betas)
    beta_idx = tuple(enumerate(betas))
    completed = 0
    tripped = False
    for m in range(1, M_max + 1):
        layer = [0.0] * len(betas)
        try:
            for shape in iter_contour_shapes(m, c):
                flip, supp, base_sites = _shape_sites(shape)
                pair_part = 0.0
                for i, x in enumerate(flip):
                    for y in flip[i + 1 :]:
                        pair_part += f[y - x]
                pair_part *= 2.0
                for s in supp:
                    off = N - s
                    H = -pair_part
                    for x in flip:
                        H += R[x + off]
                    hs = 0.0
                    for x in base_sites:
                        hs += h_cap[x + off]
                    for bi, beta in beta_idx:
                        layer[bi] += exp(beta * (2.0 * hs - coef * H))
        except EnumerationBudgetExceeded:
            tripped = True
            break
        for bi in range(len(betas)):
            acc[bi] += layer[bi]
        completed = m
    result = RhoScanResult(
        alpha=alpha,
        a=a,
        eps=eps,
        N=N,
        n=n,
        M_max=M_max,
        c=c,
        variant=variant,
        betas=betas,
        values=tuple(float(v) for v in acc),
        completed_mass=completed,
        guard_tripped=tripped,
    )
    if require_decreasing and not result.decreasing:
        raise AssertionError(
            f"rho is not decreasing in beta: {result.values} at betas {betas}"
        )
    return result


def rho_truncated(
    beta: float,
    alpha: float,
    a: float = 0.5,
    eps: float = 0.1,
    N: int = 4096,
    n: int = 2,
    M_max: int = 6,
    J: float = 1.0,
    c: float | None = None,
    variant: str = "printed",
) -> float:
    """Single-beta truncated rho; raises if the enumeration budget trips."""
    res = rho_scan(alpha, [beta], a=a, eps=eps, N=N, n=n, M_max=M_max, J=J,
                   c=c, variant=variant)
    if res.guard_tripped:
        raise EnumerationBudgetExceeded(
            f"mass {res.completed_mass + 1} is not exhaustively enumerable "
            f"within the node budget"
        )
    return res.values[0]


def shapes_as_triangles(shape: Sequence[tuple[int, int]]) -> list[Triangle]:
    """Interior Triangle objects for a shape, for cross-checks against the
    real grouping code."""
    return [Triangle(base_lo=l, base_hi=h) for l, h in shape]
