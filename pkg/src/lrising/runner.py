"""Command dispatch: one CSV per experiment, a JSON manifest with
per-assertion records, and figures on the two report paths.

Exit codes: 0 all assertions pass, 1 assertion failure, 2 config error,
3 internal error.  CSV cells are written with repr floats so identical
(config, seed) runs are byte-identical.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig
from .contours import (
    reconstruct_config,
    triangle_distance,
    triangles_from_config,
    omega_sign,
)
from .diagnostics import peierls_scan, rho_scan
from .gibbs import (
    exact_measure,
    free_energy_difference,
    mc_measure,
    mixture_weight,
)
from .metastate import (
    SparseScheduleError,
    dichotomy_report,
    empirical_metastate,
    null_recurrence_profile,
    sparse_schedule,
)
from .model import (
    BoundaryCondition,
    ModelParams,
    SpinConfig,
    mix_marginals,
    window_distance,
)
from .toy import smallball_scaling_experiment, wllt_integral_check, wllt_schedule

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


@dataclass(frozen=True)
class AssertionRecord:
    name: str
    measured: Any
    threshold: str
    passed: bool


@dataclass
class CommandResult:
    header: tuple[str, ...]
    rows: list[tuple]
    assertions: list[AssertionRecord] = field(default_factory=list)
    measurements: dict[str, Any] = field(default_factory=dict)
    figures: list[tuple[str, Callable[[Path], None]]] = field(default_factory=list)


def _json_safe(v: Any) -> Any:
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_json_safe(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    return v


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_cell(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def _run_toy_scan(p: dict) -> CommandResult:
    table = smallball_scaling_experiment(
        p["alpha"], p["K"], p["N_grid"], p["samples"], p["seed"], p["J"], Y=p["Y"]
    )
    rows = [(r.N, r.estimate, r.stderr, r.scaled_estimate) for r in table.rows]
    assertions = []
    measurements: dict[str, Any] = {"Y": p["Y"]}
    if table.slope is not None:
        target = -(p["alpha"] - 0.5)
        tol = p["slope_tol"]
        measurements["slope"] = table.slope
        assertions.append(
            AssertionRecord(
                "smallball_slope",
                table.slope,
                f"within {tol} of {target}",
                abs(table.slope - target) <= tol,
            )
        )
    return CommandResult(
        header=("N", "estimate", "stderr", "scaled_estimate"),
        rows=rows,
        assertions=assertions,
        measurements=measurements,
    )


def _run_wllt_check(p: dict) -> CommandResult:
    rows = []
    assertions = []
    cap = 2.0 * math.pi * p["slack"]
    for alpha in p["alpha_grid"]:
        for N in p["N_grid"]:
            mp = ModelParams(alpha=alpha, N=N, J=p["J"])
            sched = wllt_schedule(mp)
            integral = wllt_integral_check(mp, p["tol"])
            an_bound = math.sqrt(18.0 / (3.0 - 2.0 * alpha)) * N ** (alpha - 0.5)
            rows.append((alpha, N, sched.A_N, sched.tau_N, integral, an_bound))
            tag = f"alpha={alpha:g},N={N}"
            assertions.append(
                AssertionRecord(
                    f"weighted_integral[{tag}]",
                    integral,
                    f"<= 2 pi * {p['slack']} = {cap}",
                    integral <= cap,
                )
            )
            assertions.append(
                AssertionRecord(
                    f"an_bound_strict[{tag}]",
                    sched.A_N,
                    f"< {an_bound}",
                    sched.A_N < an_bound,
                )
            )
    return CommandResult(
        header=("alpha", "N", "A_N", "tau_N", "weighted_integral", "an_bound"),
        rows=rows,
        assertions=assertions,
    )


def _run_contours_verify(p: dict) -> CommandResult:
    rows = []
    assertions = []
    for N in range(1, p["N_max"] + 1):
        n_sites = 2 * N + 1
        bad_bijection = 0
        bad_pairs = 0
        for code in range(1 << n_sites):
            bits = (code >> np.arange(n_sites - 1, -1, -1)) & 1
            spins = np.where(bits == 1, 1, -1).astype(np.int8)
            sigma = SpinConfig(spins)
            tri = triangles_from_config(sigma)
            back = reconstruct_config(tri, omega_sign(sigma), N)
            if not np.array_equal(back.spins, spins):
                bad_bijection += 1
            for i in range(len(tri)):
                for j in range(i + 1, len(tri)):
                    lower = min(tri[i].mass, tri[j].mass)
                    if triangle_distance(tri[i], tri[j]) < lower:
                        bad_pairs += 1
        rows.append((N, 1 << n_sites, bad_bijection, bad_pairs))
        assertions.append(
            AssertionRecord(f"bijection[N={N}]", bad_bijection, "== 0", bad_bijection == 0)
        )
        assertions.append(
            AssertionRecord(
                f"pair_separation[N={N}]", bad_pairs, "== 0", bad_pairs == 0
            )
        )
    return CommandResult(
        header=("N", "configs", "bijection_failures", "pair_violations"),
        rows=rows,
        assertions=assertions,
    )


def _run_peierls(p: dict) -> CommandResult:
    reports = peierls_scan(
        p["alpha_grid"], p["M_max"], p["N"], J=p["J"], c=p["c"]
    )
    rows = []
    assertions = []
    for alpha in p["alpha_grid"]:
        rep = reports[alpha]
        zeta_last = rep.zeta_at_cutoff(p["M_max"])
        zeta_prev = rep.zeta_at_cutoff(p["M_max"] - 1)
        rel = abs(zeta_last - zeta_prev) / zeta_prev
        rows.append(
            (
                alpha,
                rep.N,
                rep.M_max,
                rep.n_contours,
                rep.min_ratio,
                zeta_last,
                zeta_prev,
                rel,
            )
        )
        assertions.append(
            AssertionRecord(
                f"min_ratio_positive[alpha={alpha:g}]",
                rep.min_ratio,
                "> 0",
                rep.min_ratio > 0.0,
            )
        )
        assertions.append(
            AssertionRecord(
                f"zeta_stable[alpha={alpha:g}]",
                rel,
                f"<= {p['stability_tol']}",
                rel <= p["stability_tol"],
            )
        )
    return CommandResult(
        header=(
            "alpha",
            "N",
            "M_max",
            "contours",
            "min_ratio",
            "zeta_hat",
            "zeta_hat_prev",
            "rel_change",
        ),
        rows=rows,
        assertions=assertions,
    )


def _run_rho_scan(p: dict) -> CommandResult:
    res = rho_scan(
        p["alpha"],
        p["beta_grid"],
        a=p["a"],
        eps=p["epsilon"],
        N=p["N"],
        n=p["n"],
        M_max=p["M_max"],
        J=p["J"],
        variant=p["variant"],
    )
    rows = [(b, v) for b, v in zip(res.betas, res.values)]
    assertions = [
        AssertionRecord(
            "rho_strictly_decreasing",
            list(res.values),
            "each value below its predecessor",
            res.decreasing,
        ),
        AssertionRecord(
            "rho_final_small",
            res.values[-1],
            f"< {p['final_max']}",
            res.values[-1] < p["final_max"],
        ),
        AssertionRecord(
            "enumeration_completed",
            res.completed_mass,
            f"mass cutoff {p['M_max']} fully enumerated",
            not res.guard_tripped,
        ),
    ]
    return CommandResult(
        header=("beta", "rho"),
        rows=rows,
        assertions=assertions,
        measurements={
            "completed_mass": res.completed_mass,
            "guard_tripped": res.guard_tripped,
            "c": res.c,
            "variant": res.variant,
        },
    )


def _run_gibbs_exact(p: dict) -> CommandResult:
    mp = ModelParams(alpha=p["alpha"], N=p["N"], beta=p["beta"], J=p["J"])
    window = tuple(p["window"])
    rows = []
    worst = {"decompo": 0.0, "antisym": 0.0}
    for i in range(p["samples"]):
        eta = BoundaryCondition.random(mp, seed=p["seed"] + i)
        ens = exact_measure(mp, eta)
        lam = mixture_weight(mp, eta, ens)
        split = free_energy_difference(mp, eta, ens)
        marg = ens.marginal(window)
        mix = mix_marginals(
            [
                (lam, ens.constrained_marginal(window, -1)),
                (1.0 - lam, ens.constrained_marginal(window, 1)),
            ]
        )
        decompo_gap = window_distance(marg, mix)
        F_neg = free_energy_difference(mp, eta.negated()).F
        antisym_gap = abs(F_neg + split.F)
        rows.append((i, split.W, split.F, lam, decompo_gap, antisym_gap))
        worst["decompo"] = max(worst["decompo"], decompo_gap)
        worst["antisym"] = max(worst["antisym"], antisym_gap)
    # low-temperature limit on the seeded eta: the relative gap between F
    # and W must shrink along the beta ladder (ground-state dominance)
    eta0 = BoundaryCondition.random(mp, seed=p["seed"])
    ladder = [5.0, 10.0, 20.0, p["beta_high"]]
    gaps = []
    for beta in ladder:
        mp_b = ModelParams(alpha=p["alpha"], N=p["N"], beta=beta, J=p["J"])
        fs = free_energy_difference(mp_b, eta0)
        gaps.append(abs(fs.F - fs.W) / abs(fs.W))
    assertions = [
        AssertionRecord(
            "decomposition_identity",
            worst["decompo"],
            f"<= {p['decompo_tol']}",
            worst["decompo"] <= p["decompo_tol"],
        ),
        AssertionRecord(
            "free_energy_antisymmetry",
            worst["antisym"],
            "== 0 exactly",
            worst["antisym"] == 0.0,
        ),
        AssertionRecord(
            "highbeta_gap_decreasing",
            gaps,
            f"relative |F - W| gap decreasing on beta in {ladder}"
            " (or below the 1e-12 noise floor)",
            all(b <= a or b < 1e-12 for a, b in zip(gaps, gaps[1:])),
        ),
        AssertionRecord(
            "highbeta_gap_small",
            gaps[-1],
            f"< {p['highbeta_tol']} at beta = {p['beta_high']:g}",
            gaps[-1] < p["highbeta_tol"],
        ),
    ]
    return CommandResult(
        header=("sample", "W", "F", "lambda", "decompo_gap", "antisym_gap"),
        rows=rows,
        assertions=assertions,
        measurements={"highbeta_ladder": dict(zip(map(str, ladder), gaps))},
    )


def _run_gibbs_mc(p: dict) -> CommandResult:
    mp = ModelParams(alpha=p["alpha"], N=p["N"], beta=p["beta"], J=p["J"])
    window = tuple(p["window"])
    rows = []
    assertions = []
    for i in range(p["cases"]):
        eta = BoundaryCondition.random(mp, seed=p["seed"] + i)
        exact_m0 = float(exact_measure(mp, eta).magnetization()[p["N"]])
        mc = mc_measure(mp, eta, window, p["sweeps"], p["burn_in"], p["seed"] + i)
        est = mc.magnetization_estimate(0)
        z = abs(est.value - exact_m0) / est.stderr
        rows.append((i, p["seed"] + i, est.value, est.stderr, exact_m0, z))
        assertions.append(
            AssertionRecord(
                f"mc_matches_exact[case={i}]",
                z,
                f"|mc - exact| <= {p['z_tol']} stderr",
                z <= p["z_tol"],
            )
        )
    return CommandResult(
        header=("case", "eta_seed", "mc_m0", "mc_stderr", "exact_m0", "z"),
        rows=rows,
        assertions=assertions,
    )


_HIST_HEADER = ("bin_left", "bin_right", "mass")


def _run_metastate(p: dict) -> CommandResult:
    schedule = None
    volumes = p["volumes"]
    if volumes is None:
        try:
            schedule = sparse_schedule(p["alpha"], p["epsilon"], p["a"], p["k_max"])
        except SparseScheduleError as e:
            return CommandResult(
                header=_HIST_HEADER,
                rows=[],
                assertions=[
                    AssertionRecord(
                        "schedule_feasible",
                        e.largest_feasible_k,
                        f"schedule feasible through k = {p['k_max']}",
                        False,
                    )
                ],
                measurements={"schedule_error": str(e)},
            )
    h = empirical_metastate(
        p["alpha"],
        p["beta"],
        schedule=schedule,
        tau=p["tau"],
        X=tuple(p["window"]),
        eta_samples=p["eta_samples"],
        seed=p["seed"],
        volumes=tuple(volumes) if volumes is not None else None,
        mode=p["mode"],
        J=p["J"],
    )
    lh = h.lambda_hist
    rows = [
        (lh.bin_edges[i], lh.bin_edges[i + 1], lh.masses[i])
        for i in range(len(lh.masses))
    ]
    measurements = {
        "volumes": list(h.params.volumes),
        "ball_frequencies": list(h.ball_frequencies),
        "ball_stderr": list(h.ball_stderr),
        "pure_ball_frequency": h.pure_ball_frequency,
        "mean_lambda": lh.mean_lambda,
        "stderr_lambda": lh.stderr_lambda,
        "pure_mass": lh.pure_mass,
    }
    assertions = []
    if p["pure_mass_min"] is not None:
        assertions.append(
            AssertionRecord(
                "lambda_pure_mass",
                lh.pure_mass,
                f">= {p['pure_mass_min']}",
                lh.pure_mass >= p["pure_mass_min"],
            )
        )
    if p["pure_freq_min"] is not None:
        assertions.append(
            AssertionRecord(
                "pure_ball_frequency",
                h.pure_ball_frequency,
                f">= {p['pure_freq_min']}",
                h.pure_ball_frequency >= p["pure_freq_min"],
            )
        )
    if p["mean_lambda_tol"] is not None:
        gap = abs(lh.mean_lambda - 0.5)
        cap = p["mean_lambda_tol"] * lh.stderr_lambda
        assertions.append(
            AssertionRecord(
                "mean_lambda_centered",
                lh.mean_lambda,
                f"|mean - 1/2| <= {p['mean_lambda_tol']:g} stderr = {cap}",
                gap <= cap,
            )
        )
    if p["interior_bins_positive"]:
        bands = [float(lh.masses[10 * j : 10 * j + 10].sum()) for j in range(1, 9)]
        assertions.append(
            AssertionRecord(
                "interior_bins_positive",
                bands,
                "every width-0.1 bin inside [0.1, 0.9] has positive mass",
                all(b > 0.0 for b in bands),
            )
        )
    return CommandResult(
        header=_HIST_HEADER,
        rows=rows,
        assertions=assertions,
        measurements=measurements,
    )


def _run_null_recurrence(p: dict) -> CommandResult:
    prof = null_recurrence_profile(
        p["alpha"],
        p["beta"],
        p["N_max"],
        tau=p["tau"],
        X=tuple(p["window"]),
        seed=p["seed"],
        J=p["J"],
    )
    rows = [
        (int(n), w, fp, fm, fx)
        for n, w, fp, fm, fx in zip(
            prof.n, prof.W, prof.freq_plus, prof.freq_minus, prof.freq_mixed
        )
    ]
    measurements = {
        "final_plus": prof.final_plus,
        "final_minus": prof.final_minus,
        "final_mixed": prof.final_mixed,
    }
    assertions = []
    if p["mixed_max"] is not None:
        assertions.append(
            AssertionRecord(
                "mixed_ball_frequency",
                prof.final_mixed,
                f"<= {p['mixed_max']}",
                prof.final_mixed <= p["mixed_max"],
            )
        )
    if p["pure_band"] is not None:
        lo, hi = p["pure_band"]
        for name, val in (("plus", prof.final_plus), ("minus", prof.final_minus)):
            assertions.append(
                AssertionRecord(
                    f"{name}_ball_frequency",
                    val,
                    f"in [{lo}, {hi}]",
                    lo <= val <= hi,
                )
            )
    figures = []
    if p["figures"]:
        from .figures import null_recurrence_figure

        figures.append(
            ("null-recurrence.png", lambda path: null_recurrence_figure(prof, path))
        )
    return CommandResult(
        header=("n", "W", "freq_plus", "freq_minus", "freq_mixed"),
        rows=rows,
        assertions=assertions,
        measurements=measurements,
        figures=figures,
    )


def _run_dichotomy(p: dict) -> CommandResult:
    rep = dichotomy_report(
        p["alpha_grid"],
        p["beta"],
        N=p["N"],
        eta_samples=p["eta_samples"],
        tau=p["tau"],
        seed=p["seed"],
        var_grid=tuple(p["var_grid"]),
        J=p["J"],
    )
    rows = []
    assertions = []
    sub_pure = []
    super_pure = []
    for row in rep.rows:
        rows.append(
            (
                row.alpha,
                row.pure_mass,
                row.mixed_mass,
                row.var_exponent,
                row.mean_lambda,
                row.stderr_lambda,
            )
        )
        (sub_pure if row.alpha < 0.45 else super_pure).append(row.pure_mass)
        gap = abs(row.mean_lambda - 0.5)
        cap = p["mean_lambda_tol"] * row.stderr_lambda
        assertions.append(
            AssertionRecord(
                f"mean_lambda_centered[alpha={row.alpha:g}]",
                row.mean_lambda,
                f"|mean - 1/2| <= {p['mean_lambda_tol']:g} stderr = {cap}",
                gap <= cap,
            )
        )
        target = 2.0 * row.alpha - 1.0 if row.alpha > 0.55 else 0.0
        assertions.append(
            AssertionRecord(
                f"var_exponent[alpha={row.alpha:g}]",
                row.var_exponent,
                f"within {p['var_tol']} of {target:g}",
                abs(row.var_exponent - target) <= p["var_tol"],
            )
        )
    if sub_pure and super_pure:
        assertions.append(
            AssertionRecord(
                "dichotomy_separation",
                {"max_subcritical": max(sub_pure), "min_supercritical": min(super_pure)},
                "pure mass below threshold < pure mass above",
                max(sub_pure) < min(super_pure),
            )
        )
    figures = []
    if p["figures"]:
        from .figures import lambda_histograms_figure, variance_loglog_figure

        figures.append(
            (
                "dichotomy-histograms.png",
                lambda path: lambda_histograms_figure(rep, path),
            )
        )
        figures.append(
            (
                "dichotomy-variance.png",
                lambda path: variance_loglog_figure(
                    p["alpha_grid"], p["var_grid"], p["J"], path
                ),
            )
        )
    return CommandResult(
        header=(
            "alpha",
            "pure_mass",
            "mixed_mass",
            "var_exponent",
            "mean_lambda",
            "stderr_lambda",
        ),
        rows=rows,
        assertions=assertions,
        figures=figures,
    )


_HANDLERS: dict[str, Callable[[dict], CommandResult]] = {
    "toy-scan": _run_toy_scan,
    "wllt-check": _run_wllt_check,
    "contours-verify": _run_contours_verify,
    "peierls": _run_peierls,
    "rho-scan": _run_rho_scan,
    "gibbs-exact": _run_gibbs_exact,
    "gibbs-mc": _run_gibbs_mc,
    "metastate": _run_metastate,
    "null-recurrence": _run_null_recurrence,
    "dichotomy": _run_dichotomy,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute one command: write <command>.csv, figures, manifest.json."""
    out_dir = Path(cfg.params["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, Any] = {
        "command": cfg.command,
        "version": __version__,
        "seed": cfg.params.get("seed"),
        "config": _json_safe(cfg.params),
        "config_sha256": cfg.hash(),
        "outputs": [],
        "assertions": [],
        "measurements": {},
        "error": None,
    }
    t0 = time.perf_counter()
    code = EXIT_PASS
    try:
        result = _HANDLERS[cfg.command](cfg.params)
    except ConfigError as e:
        manifest["error"] = {"type": type(e).__name__, "message": str(e)}
        code = EXIT_CONFIG
    except AssertionError as e:
        manifest["error"] = {"type": "AssertionError", "message": str(e)}
        code = EXIT_ASSERTION
    except ValueError as e:
        manifest["error"] = {"type": type(e).__name__, "message": str(e)}
        code = EXIT_CONFIG
    except Exception as e:  # noqa: BLE001 - recorded and mapped to exit 3
        manifest["error"] = {"type": type(e).__name__, "message": str(e)}
        code = EXIT_INTERNAL
    else:
        csv_name = f"{cfg.command}.csv"
        _write_csv(out_dir / csv_name, result.header, result.rows)
        manifest["outputs"].append(csv_name)
        for fname, render in result.figures:
            render(out_dir / fname)
            manifest["outputs"].append(fname)
        manifest["assertions"] = [
            {
                "name": a.name,
                "measured": _json_safe(a.measured),
                "threshold": a.threshold,
                "passed": a.passed,
            }
            for a in result.assertions
        ]
        manifest["measurements"] = _json_safe(result.measurements)
        if not all(a.passed for a in result.assertions):
            code = EXIT_ASSERTION
    manifest["wall_time_s"] = round(time.perf_counter() - t0, 3)
    manifest["exit_code"] = code
    with open(out_dir / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return code
