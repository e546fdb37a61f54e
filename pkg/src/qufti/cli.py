"""Command-line front end.

    qufti qcrb --modes 4 --num-phases 3
    qufti fig2 --seed 7 --out fig2.csv --svg fig2.svg
    qufti fig3 --p-grid 0.05:1:0.05 --out fig3.csv
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import NoOptimumError, NumericalError, QuftiError
from .fisher import (
    classical_fisher,
    coherent_variance,
    fair_comparison,
    qcrb_closed_form,
    quantum_fisher_analytic,
    quantum_fisher_numeric,
    total_variance,
)
from .linalg import Interferometer, build_qft
from .optimize import OptimizerOptions, minimize_variance
from .report import CsvTable, emit_outputs, render_svg, write_text
from .scattershot import scattershot_sweep
from .scenario import ScenarioError, validate

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4
LARGE_M_WARNING = 6
NUMERIC_QFI_MAX_PHOTONS = 12
FIG3_DEFAULT_SCHEMES = ("nrd", "one-nrd")
FIG3_DEFAULT_GRID = "0.05:1.0:0.05"


def parse_grid(text):
    """``start:stop:step`` (inclusive of ``stop``) or a comma list."""
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ScenarioError(f"--p-grid: expected start:stop:step, got {text!r}")
    start, stop, step = (float(v) for v in parts)
    if step <= 0 or stop < start:
        raise ScenarioError(f"--p-grid: empty or invalid range {text!r}")
    n = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(n)]


def parse_range(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ScenarioError(f"--m-range: expected first:last, got {text!r}")
    return [int(parts[0]), int(parts[1])]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qufti",
        description="Fisher-information analysis of multiphase Fourier interferometers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modes", type=int, help="number of modes m")
    common.add_argument("--num-phases", type=int, help="number of phases d (< m)")
    common.add_argument("--k", type=int, help="photons per input mode")
    common.add_argument("--scheme", help="nrd | spd | one-nrd (comma list for fig2/fig3)")
    common.add_argument("--resolved-mode", type=int, help="NRD position for one-nrd (1-based)")
    common.add_argument("--phi", help="comma-separated phases in radians")
    common.add_argument("--starts", type=int, help="optimizer starts")
    common.add_argument("--max-iters", type=int, help="iterations per start")
    common.add_argument("--seed", type=int, help="base seed for optimizer starts")
    common.add_argument("--p-grid", help="efficiency grid start:stop:step")
    common.add_argument("--m-range", help="fig2 mode range first:last")
    common.add_argument(
        "--phase-mode", choices=("fixed", "per-p", "per-config"),
        help="fig3 evaluation phases",
    )
    common.add_argument("--jobs", type=int, default=1, help="worker processes for fig2")
    common.add_argument("--out", help="CSV output path (stdout if omitted)")
    common.add_argument("--svg", help="SVG chart output path")
    common.add_argument("--scenario", help="JSON scenario file; its keys override flags")
    for name, text in [
        ("qcrb", "closed-form quantum Cramer-Rao bound and fair-comparison baselines"),
        ("qfi", "quantum Fisher information, closed form and from the Fock simulation"),
        ("cfi", "classical Fisher information at given phases"),
        ("optimize", "minimise the classical total variance over the phases"),
        ("fig2", "optimised variance vs modes with d = m - 1"),
        ("fig3", "scattershot variance vs source efficiency"),
    ]:
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def scenario_from_args(args):
    values = {}
    if args.modes is not None:
        values["m"] = args.modes
    if args.num_phases is not None:
        values["d"] = args.num_phases
    elif args.command == "fig3" and args.modes is None:
        values.update(m=4, d=3)
    if args.k is not None:
        values["k"] = args.k
    if args.scheme is not None:
        names = [s for s in args.scheme.split(",") if s]
        if args.command in ("fig2", "fig3"):
            values["schemes"] = names
        elif len(names) != 1:
            raise ScenarioError(f"--scheme: {args.command} takes a single scheme")
        else:
            values["scheme"] = names[0]
    elif args.command == "fig3":
        values["schemes"] = list(FIG3_DEFAULT_SCHEMES)
    for attr, key in [("resolved_mode", "resolved_mode"), ("starts", "starts"),
                      ("max_iters", "max_iters"), ("seed", "seed"),
                      ("phase_mode", "phase_mode"), ("out", "out"), ("svg", "svg")]:
        if getattr(args, attr) is not None:
            values[key] = getattr(args, attr)
    if args.phi is not None:
        try:
            values["phases"] = [float(v) for v in args.phi.split(",") if v.strip()]
        except ValueError as exc:
            raise ScenarioError(f"--phi: {exc}") from exc
    if args.p_grid is not None:
        values["p_grid"] = parse_grid(args.p_grid)
    if args.m_range is not None:
        values["m_range"] = parse_range(args.m_range)
    if args.scenario is not None:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                file_values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{args.scenario}: malformed JSON ({exc.msg})") from exc
        if not isinstance(file_values, dict):
            raise ScenarioError(f"{args.scenario}: expected a JSON object")
        values.update(file_values)
    return validate(values)


def _opts(spec):
    return OptimizerOptions(starts=spec.starts, max_iters=spec.max_iters, base_seed=spec.seed)


def _sweep_opts(spec):
    return OptimizerOptions(starts=2, max_iters=min(spec.max_iters, 800), base_seed=spec.seed)


# ----------------------------------------------------------------- commands


def cmd_qcrb(spec):
    table = CsvTable(["m", "d", "k", "qcrb_per_measurement", "parallel_per_nu2",
                      "sequential_per_nu2", "coherent_per_nu2"])
    parallel, sequential, coherent = fair_comparison(spec.m, spec.d)
    table.add(spec.m, spec.d, spec.k, qcrb_closed_form(spec.m, spec.d, spec.k),
              parallel, sequential, coherent)
    return table, None


def cmd_qfi(spec):
    analytic = quantum_fisher_analytic(spec.m, spec.d, spec.k)
    numeric = None
    if spec.m * spec.k <= NUMERIC_QFI_MAX_PHOTONS:
        numeric = quantum_fisher_numeric(build_qft(spec.m), [spec.k] * spec.m, spec.d)
    table = CsvTable(["i", "j", "analytic", "numeric"])
    for i in range(spec.d):
        for j in range(spec.d):
            table.add(i + 1, j + 1, float(analytic[i, j]),
                      float(numeric[i, j]) if numeric is not None else float("nan"))
    return table, None


def _require_phases(spec):
    if spec.phases is None:
        raise ScenarioError("$.phases: required for this command (use --phi)")
    return np.array(spec.phases)


def cmd_cfi(spec):
    phases = _require_phases(spec)
    F = classical_fisher(Interferometer(spec.m, spec.d), [spec.k] * spec.m,
                         spec.detection, phases)
    bound = total_variance(F)
    table = CsvTable(["quantity", "i", "j", "value"])
    for i in range(spec.d):
        for j in range(spec.d):
            table.add("fisher", i + 1, j + 1, float(F.matrix[i, j]))
    table.add("total_variance", 0, 0, bound.total_variance)
    table.add("singular", 0, 0, float(bound.singular))
    return table, None


def cmd_optimize(spec):
    opt = minimize_variance(spec.m, spec.d, spec.detection, _opts(spec), k=spec.k)
    table = CsvTable(["m", "d", "scheme", "variance_per_measurement", "qcrb",
                      "start_index", "converged"]
                     + [f"phi_{j + 1}" for j in range(spec.d)])
    table.add(spec.m, spec.d, str(spec.detection), opt.variance,
              qcrb_closed_form(spec.m, spec.d, spec.k), opt.start_index, opt.converged,
              *[float(x) for x in opt.phases])
    return table, None


def _fig2_task(task):
    m, scheme, opts = task
    try:
        opt = minimize_variance(m, m - 1, scheme, opts)
    except NoOptimumError:
        return None
    return opt.variance


FIG2_HEADER = ["m", "d", "scheme", "optimized_variance", "qcrb", "sequential", "coherent",
               "ratio_to_qcrb", "status", "unit"]


def run_fig2_sweep(m_values, schemes, opts, jobs=1):
    """Optimised variance per (m, scheme) with d = m - 1, in fair-comparison units."""
    tasks = [(m, s, opts) for m in m_values for s in schemes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fig2_task, tasks))
    else:
        results = [_fig2_task(t) for t in tasks]
    table = CsvTable(list(FIG2_HEADER))
    for (m, scheme, _), var in zip(tasks, results):
        d = m - 1
        parallel, sequential, coherent = fair_comparison(m, d)
        if var is None:
            table.add(m, d, str(scheme), float("nan"), parallel, sequential, coherent,
                      float("nan"), "no-optimum", "per_nu2")
            continue
        # nu_1 = d * nu_2 measurements of the parallel device per sequential repetition
        fair = var / d
        table.add(m, d, str(scheme), fair, parallel, sequential, coherent,
                  fair / parallel, "ok", "per_nu2")
    return table


def fig2_chart_table(table):
    long = CsvTable(["m", "series", "variance"])
    seen = set()
    for row in table.rows:
        r = dict(zip(table.header, row))
        long.add(r["m"], r["scheme"], r["optimized_variance"])
        if r["m"] not in seen:
            seen.add(r["m"])
            for key in ("qcrb", "sequential", "coherent"):
                long.add(r["m"], key, r[key])
    long.rows.sort(key=lambda row: (row[1], row[0]))
    return long


def cmd_fig2(spec, jobs=1):
    lo, hi = spec.m_range
    if hi > LARGE_M_WARNING:
        print(f"warning: m up to {hi}; configuration count and permanent cost grow "
              "combinatorially", file=sys.stderr)
    table = run_fig2_sweep(range(lo, hi + 1), spec.schemes_for_run(), _opts(spec), jobs)
    if all(s != "ok" for s in table.column("status")):
        raise NoOptimumError("no (m, scheme) row produced an optimum")
    chart = (fig2_chart_table(table), ("m", "variance", "series"),
             "Total variance per nu2, d = m - 1")
    return table, chart


FIG3_HEADER = ["p", "scheme", "avg_variance", "coherent_reference", "phase_mode", "unit"]


def run_fig3_sweep(m, d, schemes, p_grid, opts, phase_mode="per-p", sweep_opts=None):
    """Scattershot variance per single measurement for each scheme and efficiency."""
    # lossless coherent light carrying the m photons of one deterministic shot
    reference = coherent_variance(d, m)
    table = CsvTable(list(FIG3_HEADER))
    for scheme in schemes:
        full = minimize_variance(m, d, scheme, opts)
        rows = scattershot_sweep(m, d, scheme, full.phases, p_grid, phase_mode,
                                 sweep_opts or opts)
        for row in rows:
            table.add(row.p, str(scheme), row.bound.total_variance, reference,
                      phase_mode, "per_measurement")
    return table


def cmd_fig3(spec):
    grid = spec.p_grid if spec.p_grid is not None else parse_grid(FIG3_DEFAULT_GRID)
    table = run_fig3_sweep(spec.m, spec.d, spec.schemes_for_run(), grid, _opts(spec),
                           spec.phase_mode, _sweep_opts(spec))
    chart_table = CsvTable(["p", "series", "variance"])
    for row in table.rows:
        chart_table.add(row[0], row[1], row[2])
    for p in grid:
        chart_table.add(p, "coherent", table.rows[0][3] if table.rows else float("nan"))
    chart = (chart_table, ("p", "variance", "series"),
             f"Scattershot total variance, m = {spec.m}, d = {spec.d}")
    return table, chart


COMMANDS = {
    "qcrb": cmd_qcrb,
    "qfi": cmd_qfi,
    "cfi": cmd_cfi,
    "optimize": cmd_optimize,
    "fig3": cmd_fig3,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = scenario_from_args(args)
        if args.command == "fig2":
            table, chart = cmd_fig2(spec, args.jobs)
        else:
            table, chart = COMMANDS[args.command](spec)
    except (NoOptimumError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (QuftiError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if spec.out is None:
            sys.stdout.write(table.render())
        else:
            emit_outputs(table, spec.out)
        if spec.svg is not None and chart is not None:
            write_text(spec.svg, render_svg(chart[0], *chart[1], title=chart[2]))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
