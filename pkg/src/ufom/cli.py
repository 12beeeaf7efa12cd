"""Benchmark harness: batch solver runs, summary tables, and trace files.

One command drives everything: runs come either from a YAML config file
(``runs:`` list plus optional ``defaults:``) or from flags for a one-off;
flags override file values.  Outputs: a text summary per problem family on
stdout, a normalized CSV via ``--out``, per-run trace CSVs
(header ``k,gap,L,A,t_s``), and two-column plot-data files derived from a
trace via ``--plot-from``.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np
import yaml

from ufom.core import Objective
from ufom.problems import MaxQuadProblem, QuadraticProblem, least_squares_composite
from ufom.solvers import (
    SolverOptions,
    SolverReport,
    TERM_TARGET,
    ncg_solve,
    ufgm_solve,
    ulcm_fixed_step,
    ulcm_solve,
)

SOLVERS = {
    "ufgm": ufgm_solve,
    "ulcm": ulcm_solve,
    "ulcm-fixed": ulcm_fixed_step,
    "ncg": ncg_solve,
}
SOLVER_ORDER = list(SOLVERS)
PROBLEMS = ("quad", "maxquad", "composite")
STOP_MODES = ("target", "gap", "iters")
GAP_FLOOR = 1e-300


@dataclass
class RunSpec:
    """One benchmark run: solver, problem instance, and protocol knobs."""

    solver: str
    problem: str
    n: int
    mu: float = 0.1
    eps: float = 1e-4
    delta: float = 0.0
    l0: float = 1.0
    theta: Optional[float] = None
    x0_scale: float = 10.0
    stop: str = "target"
    max_iters: int = 1_000_000
    time_cap_s: Optional[float] = None
    trace: Optional[str] = None
    stride: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r} (choose from {SOLVER_ORDER})")
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r} (choose from {list(PROBLEMS)})")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.stop not in STOP_MODES:
            raise ValueError(f"unknown stop mode {self.stop!r}")
        if self.stop == "gap" and self.theta is None:
            raise ValueError("stop mode 'gap' requires theta")


@dataclass
class BenchmarkConfig:
    runs: list[RunSpec]
    out: Optional[str] = None


@dataclass
class RunRecord:
    """Summary of one executed run."""

    spec: RunSpec
    iterations: int
    wall_time_s: float
    value_calls: int
    grad_calls: int
    final_f: float
    f0: float
    termination: str
    trace_path: Optional[str] = None


def build_objective(spec: RunSpec) -> Objective:
    if spec.problem == "quad":
        return QuadraticProblem(spec.n).objective()
    if spec.problem == "maxquad":
        return MaxQuadProblem(spec.n, spec.mu).objective()
    return least_squares_composite(spec.n, seed=spec.seed).objective(f_star=0.0)


def _solver_options(spec: RunSpec, obj: Objective) -> SolverOptions:
    target = None
    if spec.stop == "target":
        if obj.f_star is None:
            raise ValueError("target stop needs a problem with known optimal value")
        target = obj.f_star + 5.0 * spec.eps
    theta = spec.theta if spec.stop != "target" or spec.theta is not None else None
    return SolverOptions(
        L0=spec.l0,
        eps=spec.eps,
        delta=spec.delta,
        theta=theta,
        target=target,
        x0=np.full(spec.n, float(spec.x0_scale)),
        max_iters=spec.max_iters,
        time_cap_s=spec.time_cap_s,
    )


def _default_stride(n: int) -> int:
    return 1 if n <= 10_000 else 100


def write_trace(path: str, spec: RunSpec, report: SolverReport, f_star: Optional[float]):
    """Trace CSV with rows k=0, every ``stride`` iterations, and the final one.

    ``gap`` is f(y_k) - f* when the optimum is known, raw f(y_k) otherwise.
    """
    stride = spec.stride if spec.stride is not None else _default_stride(spec.n)
    shift = f_star if f_star is not None else 0.0
    tr = report.trace
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["k", "gap", "L", "A", "t_s"])
        wr.writerow([0, repr(report.f0 - shift), repr(float(spec.l0)), repr(0.0), repr(0.0)])
        for k in range(stride, len(tr) + 1, stride):
            i = k - 1
            wr.writerow([k, repr(tr.f_y[i] - shift), repr(float(tr.L[i])),
                         repr(float(tr.A[i])), repr(float(tr.t_s[i]))])
        if len(tr) % stride != 0 and len(tr) > 0:
            i = len(tr) - 1
            wr.writerow([len(tr), repr(tr.f_y[i] - shift), repr(float(tr.L[i])),
                         repr(float(tr.A[i])), repr(float(tr.t_s[i]))])


def run_one(spec: RunSpec) -> RunRecord:
    obj = build_objective(spec)
    opts = _solver_options(spec, obj)
    report = SOLVERS[spec.solver](obj, opts)
    if spec.trace is not None:
        write_trace(spec.trace, spec, report, obj.f_star)
    return RunRecord(
        spec=spec,
        iterations=report.iterations,
        wall_time_s=report.wall_time_s,
        value_calls=report.value_calls,
        grad_calls=report.grad_calls,
        final_f=report.f,
        f0=report.f0,
        termination=report.termination,
        trace_path=spec.trace,
    )


def run_benchmark(cfg: BenchmarkConfig) -> list[RunRecord]:
    """Execute every run; failures are recorded per run, never abort the batch."""
    records = []
    for spec in cfg.runs:
        t0 = time.perf_counter()
        try:
            records.append(run_one(spec))
        except Exception as exc:
            records.append(
                RunRecord(
                    spec=spec,
                    iterations=0,
                    wall_time_s=time.perf_counter() - t0,
                    value_calls=0,
                    grad_calls=0,
                    final_f=math.nan,
                    f0=math.nan,
                    termination=f"error: {exc}",
                    trace_path=None,
                )
            )
    return records


@dataclass(frozen=True)
class SummaryRow:
    problem: str
    n: int
    solver: str
    iterations: int
    time_s: float
    final_f: float
    termination: str


def summary_rows(records: list[RunRecord]) -> list[SummaryRow]:
    rows = [
        SummaryRow(
            problem=r.spec.problem,
            n=r.spec.n,
            solver=r.spec.solver,
            iterations=r.iterations,
            time_s=r.wall_time_s,
            final_f=r.final_f,
            termination=r.termination,
        )
        for r in records
    ]
    rows.sort(key=lambda s: (s.problem, s.n, SOLVER_ORDER.index(s.solver)))
    return rows


def emit_summary_csv(records: list[RunRecord]) -> str:
    """Normalized summary CSV; floats serialized with repr so parsing is exact."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["problem", "n", "solver", "iterations", "time_s", "final_f", "termination"])
    for s in summary_rows(records):
        wr.writerow([s.problem, s.n, s.solver, s.iterations, repr(s.time_s),
                     repr(s.final_f), s.termination])
    return buf.getvalue()


def parse_summary_csv(text: str) -> list[SummaryRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            SummaryRow(
                problem=rec["problem"],
                n=int(rec["n"]),
                solver=rec["solver"],
                iterations=int(rec["iterations"]),
                time_s=float(rec["time_s"]),
                final_f=float(rec["final_f"]),
                termination=rec["termination"],
            )
        )
    return rows


def compare_report(records: list[RunRecord]) -> tuple[str, str]:
    """Text table (rows: n, columns: solver x {iterations, t}) plus CSV.

    All records must belong to one problem family.
    """
    if not records:
        return "", emit_summary_csv([])
    families = {r.spec.problem for r in records}
    if len(families) > 1:
        raise ValueError(f"records mix problem families: {sorted(families)}")
    family = families.pop()
    rows = summary_rows(records)
    solvers = [s for s in SOLVER_ORDER if any(r.solver == s for r in rows)]
    ns = sorted({r.n for r in rows})
    cell = {(r.n, r.solver): r for r in rows}

    header = ["n"] + [f"{s} {col}" for s in solvers for col in ("iters", "t_s")]
    table = [header]
    for n in ns:
        line = [str(n)]
        for s in solvers:
            r = cell.get((n, s))
            if r is None:
                line += ["-", "-"]
            else:
                line += [str(r.iterations), f"{r.time_s:.3f}"]
        table.append(line)

    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = [f"problem: {family}"]
    for j, row in enumerate(table):
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
        if j == 0:
            lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    return "\n".join(lines) + "\n", emit_summary_csv(records)


def emit_plot_data(trace_path: str, out_prefix: Optional[str] = None) -> tuple[str, str]:
    """Derive gap-vs-iteration and gap-vs-time series from a trace file.

    Two-column whitespace-separated text, gap clamped below at 1e-300 so the
    series stays log-scale friendly.
    """
    with open(trace_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if out_prefix is None:
        out_prefix = trace_path[:-4] if trace_path.endswith(".csv") else trace_path
    iters_path = out_prefix + ".gap_iters.dat"
    time_path = out_prefix + ".gap_time.dat"
    with open(iters_path, "w") as fi, open(time_path, "w") as ft:
        for rec in rows:
            gap = max(float(rec["gap"]), GAP_FLOOR)
            fi.write(f"{rec['k']} {gap!r}\n")
            ft.write(f"{rec['t_s']} {gap!r}\n")
    return iters_path, time_path


_SPEC_FIELDS = {f.name for f in fields(RunSpec)}


def load_config(path: str) -> BenchmarkConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    defaults = raw.get("defaults") or {}
    runs_raw = raw.get("runs") or []
    if not isinstance(runs_raw, list) or not runs_raw:
        raise ValueError(f"config {path} has no runs")
    runs = []
    for entry in runs_raw:
        merged = {**defaults, **entry}
        unknown = set(merged) - _SPEC_FIELDS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        runs.append(RunSpec(**merged))
    return BenchmarkConfig(runs=runs, out=raw.get("out"))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ufom-bench",
        description="Run first-order solver benchmarks and emit summaries and traces.",
    )
    p.add_argument("--config", help="YAML file with defaults and a runs list")
    p.add_argument("--solver", choices=SOLVER_ORDER)
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--l0", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--max-iters", type=int, dest="max_iters")
    p.add_argument("--time-cap-s", type=float, dest="time_cap_s")
    p.add_argument("--trace", help="per-run trace CSV path")
    p.add_argument("--out", help="summary CSV path")
    p.add_argument("--stride", type=int, help="trace record stride")
    p.add_argument("--stop", choices=STOP_MODES)
    p.add_argument("--x0-scale", type=float, dest="x0_scale")
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--plot-from",
        dest="plot_from",
        help="emit plot-data files from an existing trace CSV and exit",
    )
    return p


_FLAG_OVERRIDES = (
    "solver", "problem", "n", "eps", "delta", "l0", "theta", "mu",
    "max_iters", "time_cap_s", "trace", "stride", "stop", "x0_scale", "seed",
)


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.plot_from is not None:
        iters_path, time_path = emit_plot_data(args.plot_from)
        print(f"wrote {iters_path}")
        print(f"wrote {time_path}")
        return 0

    overrides = {k: getattr(args, k) for k in _FLAG_OVERRIDES if getattr(args, k) is not None}
    if args.config:
        cfg = load_config(args.config)
        if overrides:
            cfg = BenchmarkConfig(
                runs=[replace(spec, **overrides) for spec in cfg.runs],
                out=cfg.out,
            )
    else:
        missing = [k for k in ("solver", "problem", "n") if k not in overrides]
        if missing:
            print(f"error: --config or all of --solver/--problem/--n required "
                  f"(missing {missing})", file=sys.stderr)
            return 2
        cfg = BenchmarkConfig(runs=[RunSpec(**overrides)])
    if args.out:
        cfg = replace(cfg, out=args.out)

    records = run_benchmark(cfg)
    for r in records:
        print(
            f"[{r.spec.solver} {r.spec.problem} n={r.spec.n}] "
            f"iters={r.iterations} t={r.wall_time_s:.3f}s f={r.final_f:.6e} "
            f"({r.termination})"
        )
    print()
    for family in sorted({r.spec.problem for r in records}):
        text, _ = compare_report([r for r in records if r.spec.problem == family])
        print(text)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(emit_summary_csv(records))
        print(f"wrote {cfg.out}")
    return 0 if all(not r.termination.startswith("error") for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
