"""Named experiments: tables, curves, error sweeps, and spectra.

Every experiment is a pure function of its configuration and writes CSV
(and SVG) files into the configured output directory. Runs are
bit-reproducible: iteration orders are sorted, nothing draws randomness,
and all numeric output is formatted explicitly. CSV files carry a header
comment with the schema version and a hash of the effective configuration.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import readout, svgplot
from .compiler import compile_algorithm
from .config import ExperimentConfig
from .linalg import pure_density
from .pulses import ErrorModel, PulseSequence, rf_pulse, bb1_expand, pulse_unitary
from .pulses import NO_ERROR, SpinSystem, rotation_infidelity, sequence_unitary
from .readout import (
    crush,
    estimate_probability,
    format_trace,
    is_signal_visible,
    lorentzian_trace,
    reference_spectrum,
    spectrum_from_populations,
)
from .search import (
    OracleSpec,
    closed_form_success,
    query_count,
    recursive_operator,
    success_probability,
)

SCHEMA_VERSION = 1

_MARKER_CYCLE = ("square", "circle", "diamond", "star")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _write_csv(
    cfg: ExperimentConfig,
    path: Path,
    columns: list[str],
    rows: list[list],
    footer: list[str] | None = None,
) -> Path:
    lines = [
        f"# fpsearch schema={SCHEMA_VERSION} experiment={cfg.experiment} "
        f"config={cfg.hash()}"
    ]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    for comment in footer or []:
        lines.append(f"# {comment}")
    return _write_text(path, "\n".join(lines) + "\n")


def _pulse_success(
    r: int,
    oracle: OracleSpec,
    system: SpinSystem,
    style: str,
    error: ErrorModel,
) -> tuple[float, PulseSequence]:
    seq = compile_algorithm(r, oracle, system, style=style)
    u = sequence_unitary(seq, system, error)
    return success_probability(u, oracle), seq


def _estimated_success(
    u: np.ndarray, oracle: OracleSpec, system: SpinSystem
) -> float | None:
    """Round trip through the spectral readout chain; None when no signal."""
    if not is_signal_visible(oracle):
        return None
    rho = crush(pure_density(u[:, 0]))
    spec = spectrum_from_populations(rho, system)
    return estimate_probability(spec, reference_spectrum(oracle, system), oracle)


def run_table1(cfg: ExperimentConfig) -> list[Path]:
    """Closed-form and simulated success probabilities with query counts."""
    k1, k2 = cfg.table_k1, cfg.table_k2
    rows = []
    for r in range(cfg.r_max + 1):
        rows.append(
            [
                r,
                closed_form_success(r, 1, 2),
                success_probability(recursive_operator(r, k1), k1),
                closed_form_success(r, 2, 2),
                success_probability(recursive_operator(r, k2), k2),
                query_count(r),
            ]
        )
    path = _write_csv(
        cfg,
        Path(cfg.out_dir) / "table1.csv",
        ["r", "P_k1_closed", "P_k1_sim", "P_k2_closed", "P_k2_sim", "Q"],
        rows,
    )
    return [path]


def run_curves(cfg: ExperimentConfig) -> list[Path]:
    """Success probability against recursion order, pulse level and closed form."""
    k = cfg.oracle_k
    error = ErrorModel(eps_H=cfg.eps, eps_C=cfg.eps, delta_J=cfg.delta_j)
    rows = []
    series: list[svgplot.Series] = []
    oracles = sorted(cfg.oracles, key=lambda o: o.label())
    for oi, oracle in enumerate(oracles):
        for style in cfg.styles:
            xs, ys = [], []
            for r in range(cfg.r_max + 1):
                seq = compile_algorithm(r, oracle, cfg.system, style=style)
                u = sequence_unitary(seq, cfg.system, error)
                p_pulse = success_probability(u, oracle)
                p_est = _estimated_success(u, oracle, cfg.system)
                rows.append(
                    [
                        oracle.label(),
                        r,
                        style,
                        p_pulse,
                        p_est,
                        closed_form_success(r, k, 2),
                    ]
                )
                xs.append(float(r))
                ys.append(p_pulse)
            series.append(
                svgplot.Series(
                    f"{oracle.label()} {style}",
                    xs,
                    ys,
                    marker=_MARKER_CYCLE[oi % len(_MARKER_CYCLE)],
                )
            )
    smooth_x = [i * 0.05 for i in range(int(cfg.r_max / 0.05) + 1)]
    smooth_y = [1.0 - (1.0 - k / 4.0) ** (3.0**x) for x in smooth_x]
    series.insert(0, svgplot.Series("closed form", smooth_x, smooth_y, dashed=True))
    name = cfg.experiment
    csv_path = _write_csv(
        cfg,
        Path(cfg.out_dir) / f"{name}.csv",
        ["oracle", "r", "style", "P_pulse", "P_estimated", "P_closed"],
        rows,
    )
    svg_path = _write_text(
        Path(cfg.out_dir) / f"{name}.svg",
        svgplot.xy_plot(
            series,
            title=f"success probability, {k} matching state(s)",
            xlabel="recursion order r",
            ylabel="P",
        ),
    )
    return [csv_path, svg_path]


def run_robustness(cfg: ExperimentConfig) -> list[Path]:
    """Cube-law residuals across an (rf, coupling) error grid.

    The residual |(1-P_r) - (1-P_{r-1})^3| measures how far the pulse-level
    run is from the ideal fixed-point contraction.
    """
    rows = []
    residual_by_grid: dict[tuple[float, float], float] = {}
    oracles = sorted(cfg.oracles, key=lambda o: o.label())
    for oracle in oracles:
        for eps in cfg.eps_values:
            for dj in cfg.delta_j_values:
                error = ErrorModel(eps_H=eps, eps_C=eps, delta_J=dj)
                probs = []
                for r in range(cfg.r_max + 1):
                    p, _ = _pulse_success(r, oracle, cfg.system, "naive", error)
                    probs.append(p)
                    residual = (
                        abs((1.0 - probs[r]) - (1.0 - probs[r - 1]) ** 3)
                        if r >= 1
                        else None
                    )
                    rows.append([oracle.label(), eps, dj, r, p, residual])
                    if residual is not None:
                        key = (eps, dj)
                        residual_by_grid[key] = max(
                            residual_by_grid.get(key, 0.0), residual
                        )
    csv_path = _write_csv(
        cfg,
        Path(cfg.out_dir) / "robustness.csv",
        ["oracle", "eps", "delta_j", "r", "P_pulse", "cube_residual"],
        rows,
    )
    series = []
    for dj in cfg.delta_j_values:
        xs = [eps for eps in cfg.eps_values]
        ys = [
            math.log10(max(residual_by_grid.get((eps, dj), 0.0), 1e-18))
            for eps in cfg.eps_values
        ]
        series.append(svgplot.Series(f"delta_j={dj:g}", xs, ys, marker="circle"))
    svg_path = _write_text(
        Path(cfg.out_dir) / "robustness.svg",
        svgplot.xy_plot(
            series,
            title="fixed-point contraction residual",
            xlabel="rf amplitude error eps",
            ylabel="log10 max cube residual",
        ),
    )
    return [csv_path, svg_path]


def eps_grid(cfg: ExperimentConfig) -> list[float]:
    lo, hi, n = math.log10(cfg.eps_min), math.log10(cfg.eps_max), cfg.eps_points
    return [10.0 ** (lo + (hi - lo) * i / (n - 1)) for i in range(n)]


def pulse_infidelities(eps: float, system: SpinSystem) -> tuple[float, float]:
    """Infidelity of a naive and a BB1 90-degree proton pulse at error eps."""
    error = ErrorModel(eps_H=eps, eps_C=eps)
    ideal = pulse_unitary(rf_pulse("H", np.pi / 2, 0.0), system, NO_ERROR)
    naive = pulse_unitary(rf_pulse("H", np.pi / 2, 0.0), system, error)
    bb1 = np.eye(4, dtype=complex)
    for ev in bb1_expand(np.pi / 2, 0.0, {"H"}):
        bb1 = pulse_unitary(ev, system, error) @ bb1
    return rotation_infidelity(ideal, naive), rotation_infidelity(ideal, bb1)


def fit_loglog_slope(xs: list[float], ys: list[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs))
    ly = np.log(np.asarray(ys))
    return float(np.polyfit(lx, ly, 1)[0])


def run_bb1_scaling(cfg: ExperimentConfig) -> list[Path]:
    """Infidelity scaling of naive against BB1 pulses, plus r=0 success."""
    oracle = cfg.oracles[0]
    grid = eps_grid(cfg)
    rows = []
    inf_naive, inf_bb1 = [], []
    for eps in grid:
        i_n, i_b = pulse_infidelities(eps, cfg.system)
        error = ErrorModel(eps_H=eps, eps_C=eps)
        p_n, _ = _pulse_success(0, oracle, cfg.system, "naive", error)
        p_b, _ = _pulse_success(0, oracle, cfg.system, "bb1", error)
        rows.append([eps, i_n, i_b, p_n, p_b])
        inf_naive.append(i_n)
        inf_bb1.append(i_b)
    slope_n = fit_loglog_slope(grid, inf_naive)
    slope_b = fit_loglog_slope(grid, inf_bb1)
    csv_path = _write_csv(
        cfg,
        Path(cfg.out_dir) / "bb1_scaling.csv",
        ["eps", "infidelity_naive", "infidelity_bb1", "P0_naive", "P0_bb1"],
        rows,
        footer=[
            f"slope_naive={slope_n:.12g}",
            f"slope_bb1={slope_b:.12g}",
        ],
    )
    series = [
        svgplot.Series(
            "naive", [math.log10(e) for e in grid],
            [math.log10(v) for v in inf_naive], marker="circle",
        ),
        svgplot.Series(
            "bb1", [math.log10(e) for e in grid],
            [math.log10(v) for v in inf_bb1], marker="square",
        ),
    ]
    svg_path = _write_text(
        Path(cfg.out_dir) / "bb1_scaling.svg",
        svgplot.xy_plot(
            series,
            title="90-degree pulse infidelity",
            xlabel="log10 eps",
            ylabel="log10 infidelity",
        ),
    )
    return [csv_path, svg_path]


def run_spectra(cfg: ExperimentConfig) -> list[Path]:
    """Rendered doublet spectra per oracle and recursion order.

    The ``inf`` column holds the directly prepared target state. All panels
    share one vertical scale; the frequency axis increases right to left.
    """
    style = cfg.styles[0]
    error = ErrorModel(eps_H=cfg.eps, eps_C=cfg.eps, delta_J=cfg.delta_j)
    freqs = np.linspace(-cfg.freq_span, cfg.freq_span, cfg.freq_points)
    paths: list[Path] = []
    panels: list[list[svgplot.Panel]] = []
    peak = 0.0
    oracles = sorted(cfg.oracles, key=lambda o: o.label())
    traces: dict[tuple[str, str], np.ndarray] = {}
    for oracle in oracles:
        row: list[svgplot.Panel] = []
        for r in cfg.r_values:
            if r is None:
                rho = readout.direct_target_density(oracle)
                tag = "inf"
            else:
                seq = compile_algorithm(r, oracle, cfg.system, style=style)
                u = sequence_unitary(seq, cfg.system, error)
                rho = crush(pure_density(u[:, 0]))
                tag = str(r)
            spec = spectrum_from_populations(rho, cfg.system)
            trace = lorentzian_trace(spec, cfg.system, freqs)
            traces[(oracle.label(), tag)] = trace
            peak = max(peak, float(np.max(np.abs(trace[:, 1]))))
            row.append(
                svgplot.Panel(
                    row_label=oracle.label(),
                    col_label=f"r={tag}",
                    xs=list(trace[:, 0]),
                    ys=list(trace[:, 1]),
                )
            )
        panels.append(row)
    for (label, tag), trace in sorted(traces.items()):
        paths.append(
            _write_text(
                Path(cfg.out_dir) / f"spectrum_k{cfg.oracle_k}_{label}_r{tag}.txt",
                format_trace(trace),
            )
        )
    svg_path = _write_text(
        Path(cfg.out_dir) / f"spectra_k{cfg.oracle_k}.svg",
        svgplot.panel_grid(
            panels,
            title=f"proton doublet spectra, {cfg.oracle_k} matching state(s)",
            y_limit=peak if peak > 0 else 1.0,
            reverse_x=True,
        ),
    )
    paths.append(svg_path)
    return paths


EXPERIMENTS = {
    "table1": (run_table1, "success probabilities and query counts by order"),
    "k1-curves": (run_curves, "P(r) curves for single-match oracles"),
    "k2-curves": (run_curves, "P(r) curves for two-match oracles"),
    "robustness": (run_robustness, "cube-law residuals over an error grid"),
    "bb1-scaling": (run_bb1_scaling, "naive vs BB1 infidelity scaling"),
    "spectra": (run_spectra, "rendered doublet spectra per oracle and order"),
}


def run_experiment(cfg: ExperimentConfig) -> list[Path]:
    runner, _ = EXPERIMENTS[cfg.experiment]
    return runner(cfg)
