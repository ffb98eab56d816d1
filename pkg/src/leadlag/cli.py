"""
Command-line front end.

Exit codes: 0 success, 1 self-check failure, 2 input error, 3 configuration
error. Every command that writes files also writes ``<output>.manifest.json``
with the configuration and SHA-256 hashes of inputs and outputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .engine import EngineConfig, tops_path, temperature_sweep, zero_temperature_path
from .errors import ConfigError, InputError, LeadLagError
from .ingest import log_returns, normalize, prepare_pair, read_series
from .lattice import distance_matrix
from .stats import (
    descriptive_stats,
    leadlag_summary,
    render_text,
    stats_table,
    summary_table,
)

log = logging.getLogger("leadlag")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2, 3
PATH_COLUMNS = ("index", "date", "x_mean", "x_fwd", "x_bwd")
GRIDS = {"even": "even_t", "all": "all_t"}
CHECK_TEMPERATURES = (0.5, 1.0, 2.0, 5.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out: Path, command: str, args: argparse.Namespace, inputs, outputs) -> Path:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "tool": "leadlag",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": {str(p): _sha256(p) for p in outputs},
    }
    path = Path(str(out) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path


def _fmt(v):
    return repr(float(v))


def path_to_csv(path) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PATH_COLUMNS)
    for row in path.rows():
        w.writerow([row["index"], row["date"] or "", _fmt(row["x_mean"]), _fmt(row["x_fwd"]), _fmt(row["x_bwd"])])
    return buf.getvalue()


def path_to_json(path, summary=None, meta=None) -> str:
    doc = {"temperature": path.temperature, "grid": path.grid, "columns": list(PATH_COLUMNS),
           "rows": list(path.rows())}
    if summary is not None:
        doc["summary"] = summary.as_dict()
    if meta:
        doc.update(meta)
    return json.dumps(doc, indent=2) + "\n"


def read_path_file(path: Path) -> np.ndarray:
    """``x_mean`` column of a path file written by ``analyze`` (CSV or JSON)."""
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            rows = json.loads(text)["rows"]
            return np.array([float(r["x_mean"]) for r in rows])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: not a lead-lag path JSON file ({exc})") from None
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames or "x_mean" not in reader.fieldnames:
        raise InputError(f"{path}: missing x_mean column")
    values = []
    for rowno, row in enumerate(reader, start=2):
        try:
            values.append(float(row["x_mean"]))
        except (TypeError, ValueError):
            raise InputError(f"{path}: row {rowno}: bad x_mean {row['x_mean']!r}") from None
    return np.array(values)


def _summary_line(name, summary) -> str:
    return render_text(summary_table({name: summary}))


def _engine_config(args) -> EngineConfig:
    return EngineConfig(args.temperature, args.normalize, GRIDS[args.grid], args.max_abs_x)


def _load_pair(args):
    for p in (args.x_file, args.y_file):
        if not Path(p).is_file():
            raise InputError(f"input file not found: {p}")
    a = read_series(args.x_file, args.date_col, args.value_col)
    b = read_series(args.y_file, args.date_col, args.value_col)
    return prepare_pair(a, b, args.normalize, args.shift)


def cmd_analyze(args) -> int:
    config = _engine_config(args)
    xs, ys = _load_pair(args)
    E = distance_matrix(xs, ys)
    log.info("lattice n=%d, T=%g", E.n, config.temperature)
    path = tops_path(E, config, dates=xs.dates)
    summary = leadlag_summary(path)
    out = Path(args.out)
    if args.format == "json":
        out.write_text(path_to_json(path, summary, {"x": xs.name, "y": ys.name}), encoding="utf-8")
    else:
        out.write_text(path_to_csv(path), encoding="utf-8")
    write_manifest(out, "analyze", args, [args.x_file, args.y_file], [out])
    print(_summary_line(f"{xs.name}-{ys.name}", summary))
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        temps = [float(t) for t in args.temperatures.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad temperature list {args.temperatures!r}") from None
    if not temps:
        raise ConfigError("empty temperature list")
    config = _engine_config(args)
    xs, ys = _load_pair(args)
    paths = temperature_sweep(distance_matrix(xs, ys), temps, config, dates=xs.dates)
    out = Path(args.out)
    if args.format == "json":
        doc = [json.loads(path_to_json(p, leadlag_summary(p))) for p in paths]
        out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("temperature",) + PATH_COLUMNS)
        for p in paths:
            for row in p.rows():
                w.writerow([_fmt(p.temperature), row["index"], row["date"] or "",
                            _fmt(row["x_mean"]), _fmt(row["x_fwd"]), _fmt(row["x_bwd"])])
        out.write_text(buf.getvalue(), encoding="utf-8")
    write_manifest(out, "sweep", args, [args.x_file, args.y_file], [out])
    print(render_text(summary_table({f"T={p.temperature:g}": leadlag_summary(p) for p in paths})))
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import LagProfile, as_levels, lagged_returns

    profile_text = args.profile if args.profile is not None else str(args.lag)
    profile = LagProfile.parse(profile_text, args.n)
    x, y = lagged_returns(args.n, profile, args.noise, args.seed, args.rho)
    outputs = []
    for name, returns, target in (("x", x, args.out_x), ("y", y, args.out_y)):
        target = Path(target or f"{args.out}_{name}.csv")
        levels = as_levels(returns, name)
        lines = [f"{args.date_col},{args.value_col}"]
        lines += [f"{d.isoformat()},{v!r}" for d, v in zip(levels.dates, levels.values.tolist())]
        target.write_text("\n".join(lines) + "\n", encoding="utf-8")
        outputs.append(target)
    write_manifest(outputs[0], "synth", args, [], outputs)
    print(f"wrote {outputs[0]} and {outputs[1]} (n={args.n} returns, profile {profile_text})")
    return EXIT_OK


def cmd_stats(args) -> int:
    rows = {}
    for f in args.files:
        if not Path(f).is_file():
            raise InputError(f"input file not found: {f}")
        raw = read_series(f, args.date_col, args.value_col)
        series = normalize(log_returns(raw), args.normalize)
        rows[raw.name] = descriptive_stats(series, max_lag=args.max_lag)
    text = _render(stats_table(rows), args.format, rows)
    _emit(text, args, "stats", list(args.files))
    return EXIT_OK


def cmd_summary(args) -> int:
    rows = {}
    for f in args.path_files:
        f = Path(f)
        if not f.is_file():
            raise InputError(f"path file not found: {f}")
        rows[f.stem] = leadlag_summary(read_path_file(f))
    text = _render(summary_table(rows), args.format, {k: v.as_dict() for k, v in rows.items()})
    _emit(text, args, "summary", list(args.path_files))
    return EXIT_OK


def _render(table, fmt, raw) -> str:
    if fmt == "json":
        from dataclasses import asdict, is_dataclass

        return json.dumps({k: asdict(v) if is_dataclass(v) else v for k, v in raw.items()}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        return buf.getvalue()
    return render_text(table) + "\n"


def _emit(text, args, command, inputs):
    if args.out:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        write_manifest(out, command, args, inputs, [out])
    else:
        sys.stdout.write(text)


def run_check(seed: int = 0, instances: int = 200, tol: float = 1e-10) -> tuple[bool, str]:
    """Oracle-vs-engine comparison on random small lattices; returns (ok, report)."""
    from .oracle import MAX_ORACLE_N, compare_with_engine, oracle_min_path

    rng = np.random.default_rng(seed)
    worst, worst_at = 0.0, None
    zt_bad = 0
    for k in range(instances):
        n = int(rng.integers(3, MAX_ORACLE_N + 1))
        T = CHECK_TEMPERATURES[k % len(CHECK_TEMPERATURES)]
        E = distance_matrix(rng.random(n), rng.random(n))
        dev = compare_with_engine(E, T)
        if dev > worst or worst_at is None:
            worst, worst_at = dev, (k, n, T)
        # Integer costs make exact ties common, which exercises the tie rule.
        Ei = distance_matrix(rng.integers(0, 4, n).astype(float), rng.integers(0, 4, n).astype(float))
        a, b = zero_temperature_path(Ei), oracle_min_path(Ei)
        if a.nodes != b.nodes or a.total_energy != b.total_energy:
            zt_bad += 1
    ok = worst <= tol and zt_bad == 0
    k, n, T = worst_at
    lines = [
        f"oracle check: {instances} instances, n in 3..{MAX_ORACLE_N}, T in {', '.join(f'{t:g}' for t in CHECK_TEMPERATURES)}, seed {seed}",
        f"thermal marginals and paths: worst deviation {worst:.3e} (instance {k}, n={n}, T={T:g}; tolerance {tol:g})",
        f"zero-temperature paths: {instances - zt_bad}/{instances} agree with enumeration",
        "PASS" if ok else "FAIL",
    ]
    return ok, "\n".join(lines)


def cmd_check(args) -> int:
    ok, report = run_check(args.seed, args.instances, args.tol)
    print(report)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _add_io(p, with_pair=True):
    if with_pair:
        p.add_argument("--x-file", required=True, help="first series (positive ⟨x⟩ means it leads)")
        p.add_argument("--y-file", required=True, help="second series")
    p.add_argument("--date-col", default="date")
    p.add_argument("--value-col", default="value")
    p.add_argument("--normalize", choices=("minmax", "zscore"), default="minmax")


def _add_engine(p):
    p.add_argument("--temperature", type=float, default=2.0)
    p.add_argument("--grid", choices=tuple(GRIDS), default="even")
    p.add_argument("--max-abs-x", type=int, default=None,
                   help="restrict |lag| to this window (faster, but lags beyond it are unreachable)")
    p.add_argument("--shift", type=int, default=0,
                   help="re-date the y series by this many of its own observations before aligning")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leadlag", description="Symmetric thermal optimal path lead-lag analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="compute the lead-lag path of two series")
    _add_io(p)
    _add_engine(p)
    p.add_argument("--out", default="leadlag_path.csv")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="lead-lag paths for several temperatures")
    _add_io(p)
    _add_engine(p)
    p.add_argument("--temperatures", default="0.5,1,2,5", help="comma-separated list")
    p.add_argument("--out", default="leadlag_sweep.csv")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="write a synthetic pair with a known lag")
    p.add_argument("--n", type=int, default=500, help="number of returns")
    p.add_argument("--lag", type=int, default=0, help="constant lag (ignored with --profile)")
    p.add_argument("--profile", default=None, help='piecewise lags, e.g. "0:5,250:-5"')
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0, help="AR(1) coefficient of the driver")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="synth", help="prefix for <out>_x.csv and <out>_y.csv")
    p.add_argument("--out-x", default=None)
    p.add_argument("--out-y", default=None)
    p.add_argument("--date-col", default="date")
    p.add_argument("--value-col", default="value")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stats", help="descriptive statistics of return series")
    p.add_argument("files", nargs="+")
    _add_io(p, with_pair=False)
    p.add_argument("--max-lag", type=int, default=None, help="ADF lag order (default Schwert rule)")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("summary", help="summarize stored lead-lag path files")
    p.add_argument("path_files", nargs="+")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("check", help="verify the engine against brute-force enumeration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"leadlag: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, OSError) as exc:
        print(f"leadlag: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LeadLagError as exc:
        print(f"leadlag: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
