"""Command-line front end: ``run``, ``reproduce`` and ``plotdata``.

Exit codes: 0 converged or contour collapsed (or all reproduce checks
passed), 1 usage/config/trace error, 2 descent stalled, 3 iteration cap
reached (reproduce: some check failed).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import trace as tracefile
from .decompose import ConvexityTestConfig
from .engine import RunConfig, Status, optimize
from .errors import ContourMinError
from .levelset import RootFindConfig
from .objective import make_benchmark
from .reproduce import REFERENCE_STARTS, reproduce

EXIT_OK, EXIT_USAGE, EXIT_STALLED, EXIT_MAX_ITER = 0, 1, 2, 3

STATUS_EXIT = {
    Status.CONVERGED: EXIT_OK,
    Status.CONTOUR_COLLAPSED: EXIT_OK,
    Status.DESCENT_STALLED: EXIT_STALLED,
    Status.MAX_ITERATIONS_REACHED: EXIT_MAX_ITER,
}

# flag name -> (converter, default); None means "module default"
RUN_FLAGS = {
    "benchmark": (str, None),
    "x0": (str, None),
    "seed": (int, 0),
    "epsilon": (float, 1e-6),
    "n-roots": (int, 32),
    "segment-samples": (int, 20),
    "max-iter": (int, 100),
    "out": (str, "trace.json"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="contourmin", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="optimize one objective and write a trace")
    run.add_argument("--config", help="flat key = value file; command-line flags override it")
    for flag in RUN_FLAGS:
        run.add_argument(f"--{flag}", default=None)

    rep = sub.add_parser("reproduce", help="rerun a reference benchmark and check thresholds")
    rep.add_argument("--benchmark", required=True)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--oracle-resolution", type=int, default=1001,
                     help="grid nodes per axis for the brute-force check (0 skips it)")
    rep.add_argument("--out", help="also write the trace of the main run here")

    plot = sub.add_parser("plotdata", help="export roots and iterate path as CSV")
    plot.add_argument("--trace", required=True)
    plot.add_argument("--out-dir", required=True)
    return p


def read_config_file(path) -> dict[str, str]:
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split(sep, 1))
        key = key.replace("_", "-")
        if key not in RUN_FLAGS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        values[key] = value
    return values


def _parse_point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--x0 must be comma-separated numbers, got {text!r}") from None


def resolve_run_options(args) -> dict:
    merged = read_config_file(args.config) if args.config else {}
    for flag in RUN_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value is not None:
            merged[flag] = value
    opts = {}
    for flag, (conv, default) in RUN_FLAGS.items():
        if flag in merged:
            try:
                opts[flag] = conv(merged[flag])
            except ValueError:
                raise UsageError(f"--{flag}: invalid value {merged[flag]!r}") from None
        else:
            opts[flag] = default
    if opts["benchmark"] is None:
        raise UsageError("--benchmark is required")
    return opts


def build_run_config(opts: dict) -> RunConfig:
    name = opts["benchmark"]
    if opts["x0"] is not None:
        x0 = _parse_point(opts["x0"])
    elif name in REFERENCE_STARTS:
        x0 = REFERENCE_STARTS[name]
    else:
        raise UsageError(f"--x0 is required for {name!r}")
    return RunConfig(
        objective_name=name,
        x0=x0,
        epsilon=opts["epsilon"],
        max_iterations=opts["max-iter"],
        rootfind=RootFindConfig(n_roots=opts["n-roots"]),
        convexity=ConvexityTestConfig(n_segment_samples=opts["segment-samples"]),
        master_seed=opts["seed"],
    )


def summary_path(out: Path) -> Path:
    return out.with_name(out.stem + "_summary.txt")


def cmd_run(args) -> int:
    opts = resolve_run_options(args)
    cfg = build_run_config(opts)
    obj = make_benchmark(cfg.objective_name)
    cfg.validate_for(obj)
    result = optimize(obj, cfg)
    trace = tracefile.TraceFile.from_run(cfg, result)
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    tracefile.write(trace, out)
    table = tracefile.summary_table(trace)
    summary_path(out).write_text(table)
    sys.stdout.write(table)
    return STATUS_EXIT[result.status]


def cmd_reproduce(args) -> int:
    rep = reproduce(args.benchmark, seed=args.seed, oracle_resolution=args.oracle_resolution)
    trace = tracefile.TraceFile.from_run(rep.config, rep.result)
    sys.stdout.write(tracefile.summary_table(trace))
    for check in rep.checks:
        print(check.line())
    if args.out:
        tracefile.write(trace, args.out)
    return EXIT_OK if rep.passed else EXIT_MAX_ITER


def _csv_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_plot_data(trace: tracefile.TraceFile, out_dir) -> list[Path]:
    """One ``roots_<i>.csv`` per iterate plus ``path.csv``; returns the paths."""
    if not trace.records:
        raise tracefile.TraceFormatError("trace has no iteration records")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dim = len(trace.config.x0)
    header = ",".join([f"x{k}" for k in range(dim)] + ["height"])
    written = []
    for rec in trace.records:
        path = out_dir / f"roots_{rec.index:03d}.csv"
        rows = [_csv_row([*r.point, rec.level + r.residual]) for r in rec.roots]
        path.write_text("\n".join([header, *rows]) + "\n")
        written.append(path)
    rows = [_csv_row([*rec.iterate, rec.level]) for rec in trace.records]
    rows.append(_csv_row([*trace.result.minimizer, trace.result.minimum_value]))
    path = out_dir / "path.csv"
    path.write_text("\n".join([header, *rows]) + "\n")
    written.append(path)
    return written


def cmd_plotdata(args) -> int:
    try:
        trace = tracefile.read(args.trace)
    except OSError as exc:
        raise UsageError(f"cannot read trace {args.trace}: {exc}") from exc
    for path in write_plot_data(trace, args.out_dir):
        print(path)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "reproduce": cmd_reproduce, "plotdata": cmd_plotdata}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        return COMMANDS[args.command](args)
    except (UsageError, ContourMinError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
