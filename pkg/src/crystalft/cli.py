"""Command-line interface tying symbols, complexes, lattices, and trials.

Subcommands mirror the library layers: ``symbol`` works on Delaney-Dress
symbol files, ``complex`` on chain-complex JSON, ``lattice`` on unit
cells and compiled tori, and ``simulate`` / ``threshold`` run the Monte
Carlo machinery.  Results go to the selected output (stdout by
default); progress and diagnostics go to stderr, so output files stay
machine-readable.  Exit codes: 0 success, 1 domain error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from datetime import datetime, timezone

from . import __version__
from .complexes import (
    CSSCode,
    complex_from_json,
    complex_to_json,
    complex_validate,
    foliate,
)
from .decoder import REGIMES, NoiseParams, run_trials
from .delaney import (
    count_candidates,
    dual_symbol,
    enumerate_candidates,
    is_self_dual,
    parse_symbol,
    serialize_symbol,
    validate_symbol,
)
from .lattice import (
    build_torus,
    bundled_cell_names,
    compile_error_channels,
    degree_stats,
    load_bundled_cell,
    load_unit_cell,
)
from .threshold import estimate_threshold, sweep_curves

#: Column order of simulation result records; also the JSON key order.
RESULT_FIELDS = (
    "lattice",
    "L",
    "p_Z",
    "p_X",
    "p_m",
    "trials",
    "failures",
    "rate",
    "ci_lo",
    "ci_hi",
    "seed",
    "version",
    "timestamp",
)

_FIELD_TYPES = {
    "lattice": str,
    "L": int,
    "p_Z": float,
    "p_X": float,
    "p_m": float,
    "trials": int,
    "failures": int,
    "rate": float,
    "ci_lo": float,
    "ci_hi": float,
    "seed": int,
    "version": str,
    "timestamp": str,
}


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def make_record(
    lattice: str, L: int, noise: NoiseParams, stats, seed: int, timestamp: str
) -> dict:
    """Flat result record in the canonical field order."""
    return {
        "lattice": lattice,
        "L": L,
        "p_Z": noise.p_z,
        "p_X": noise.p_x,
        "p_m": noise.p_m,
        "trials": stats.trials,
        "failures": stats.failures,
        "rate": stats.rate,
        "ci_lo": stats.ci_lo,
        "ci_hi": stats.ci_hi,
        "seed": seed,
        "version": __version__,
        "timestamp": timestamp,
    }


def format_results(records: list[dict], fmt: str) -> str:
    """Render records as CSV (header + rows) or a JSON array.

    Field order is fixed by ``RESULT_FIELDS`` in both formats, and float
    fields use shortest round-trip repr, so records survive either
    format losslessly.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESULT_FIELDS)
        for rec in records:
            writer.writerow([repr(rec[f]) if _FIELD_TYPES[f] is float else rec[f]
                             for f in RESULT_FIELDS])
        return buf.getvalue()
    if fmt == "json":
        ordered = [{f: rec[f] for f in RESULT_FIELDS} for rec in records]
        return json.dumps(ordered, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_results(text: str, fmt: str) -> list[dict]:
    """Parse ``format_results`` output back into typed records."""
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != RESULT_FIELDS:
            raise ValueError("missing or wrong CSV header")
        return [
            {f: _FIELD_TYPES[f](cell) for f, cell in zip(RESULT_FIELDS, row)}
            for row in rows[1:]
        ]
    if fmt == "json":
        return [
            {f: _FIELD_TYPES[f](rec[f]) for f in RESULT_FIELDS}
            for rec in json.loads(text)
        ]
    raise ValueError(f"unknown format {fmt!r}")


def emit_results(records: list[dict], fmt: str, path: str) -> None:
    """Write rendered records to ``path``, or stdout when path is '-'."""
    payload = format_results(records, fmt)
    if path == "-":
        sys.stdout.write(payload)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            raise RuntimeError(f"cannot write results to {path}: {exc}") from exc


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise RuntimeError(f"cannot write to {path}: {exc}") from exc


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise RuntimeError(f"cannot read {path}: {exc}") from exc


def _diag(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


# --------------------------------------------------------------------------
# symbol subcommands
# --------------------------------------------------------------------------

def _cmd_symbol_validate(args: argparse.Namespace) -> int:
    symbol = parse_symbol(_read_text(args.file))
    report = validate_symbol(symbol)
    if report.ok:
        print(f"ok: {symbol.size} flags, d={symbol.d}")
        return 0
    print(f"invalid: {report.detail}", file=sys.stderr)
    return 1


def _cmd_symbol_dual(args: argparse.Namespace) -> int:
    symbol = parse_symbol(_read_text(args.file))
    _write_output(serialize_symbol(dual_symbol(symbol)) + "\n", args.out)
    return 0


def _cmd_symbol_selfdual(args: argparse.Namespace) -> int:
    symbol = parse_symbol(_read_text(args.file))
    witness = is_self_dual(symbol)
    if witness is None:
        print("not self-dual")
        return 1
    print(f"self-dual: witness {' '.join(map(str, witness))}")
    return 0


def _cmd_symbol_enumerate(args: argparse.Namespace) -> int:
    if args.count_only:
        print(count_candidates(args.n, args.k, args.boundary))
        return 0
    chunks = []
    count = 0
    for symbol in enumerate_candidates(args.n, args.k, args.boundary):
        chunks.append(serialize_symbol(symbol))
        count += 1
    _write_output("\n\n".join(chunks) + ("\n" if chunks else ""), args.out)
    _diag(f"{count} candidates")
    return 0


# --------------------------------------------------------------------------
# complex subcommands
# --------------------------------------------------------------------------

def _cmd_complex_check(args: argparse.Namespace) -> int:
    c = complex_from_json(_read_text(args.file))
    report = complex_validate(c)
    if report.ok:
        print(f"ok: dims {list(c.dims)}")
        return 0
    print(f"invalid: {report.detail}", file=sys.stderr)
    return 1


def _cmd_complex_foliate(args: argparse.Namespace) -> int:
    c = complex_from_json(_read_text(args.file))
    code = CSSCode(c)
    sheets = foliate(code, args.t)
    _diag(
        f"[[{code.n},{code.k}]] code over {args.t} slices -> "
        f"dims {list(sheets.dims)}"
    )
    _write_output(complex_to_json(sheets) + "\n", args.out)
    return 0


# --------------------------------------------------------------------------
# lattice subcommands
# --------------------------------------------------------------------------

def _load_cell(args: argparse.Namespace):
    if args.cell:
        return load_unit_cell(args.cell)
    return load_bundled_cell(args.name)


def _cmd_lattice_build(args: argparse.Namespace) -> int:
    if args.L < 2:
        raise ValueError("L must be at least 2")
    cell = _load_cell(args)
    graph = compile_error_channels(build_torus(cell, args.L), cell)
    _diag(
        f"{graph.name} L={graph.L}: {graph.n_vertices} vertices, "
        f"{graph.n_plain} edges, {graph.n_augmented} augmented edges"
    )
    payload = {
        "name": graph.name,
        "L": graph.L,
        "n_vertices": graph.n_vertices,
        "edges": [
            [int(u), int(v), int(z), int(s)]
            for u, v, z, s in zip(graph.eu, graph.ev, graph.ez, graph.eseam)
        ],
        "augmented_edges": [
            [int(u), int(v), int(x), int(s)]
            for u, v, x, s in zip(graph.au, graph.av, graph.ax, graph.aseam)
        ],
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _fmt_stat(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def _cmd_lattice_stats(args: argparse.Namespace) -> int:
    cell = _load_cell(args)
    degree, gates = degree_stats(cell)
    print(f"{cell.name} {_fmt_stat(degree)} {_fmt_stat(gates)}")
    return 0


def list_lattices() -> list[tuple[str, float, float]]:
    """Bundled lattice names with their average vertex and gate degrees."""
    rows = []
    for name in bundled_cell_names():
        degree, gates = degree_stats(load_bundled_cell(name))
        rows.append((name, degree, gates))
    return rows


def _cmd_lattice_list(_: argparse.Namespace) -> int:
    for name, degree, gates in list_lattices():
        print(f"{name} {_fmt_stat(degree)} {_fmt_stat(gates)}")
    return 0


# --------------------------------------------------------------------------
# simulate / threshold
# --------------------------------------------------------------------------

def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise ValueError(f"bad size list {text!r}") from exc
    if not sizes:
        raise ValueError("empty size list")
    if any(L < 2 for L in sizes):
        raise ValueError("all sizes must be at least 2")
    return sizes


def _resolve_noise(args: argparse.Namespace) -> NoiseParams:
    explicit = args.pz is not None or args.px is not None or args.pm is not None
    if args.regime is not None:
        if explicit:
            raise ValueError("give either --regime/--p or explicit --pz/--px/--pm")
        if args.p is None:
            raise ValueError("--regime needs --p")
        return NoiseParams.from_regime(args.regime, args.p)
    if args.p is not None:
        raise ValueError("--p needs --regime")
    if not explicit:
        raise ValueError("give either --regime/--p or explicit --pz/--px/--pm")
    return NoiseParams(args.pz or 0.0, args.px or 0.0, args.pm or 0.0)


def _cmd_simulate(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.L)
    noise = _resolve_noise(args)
    timestamp = _timestamp()
    records = []
    for L in sizes:
        stats = run_trials(
            args.lattice,
            L,
            noise,
            args.trials,
            seed=args.seed,
            threads=args.threads,
        )
        _diag(
            f"{args.lattice} L={L} trials={stats.trials}: "
            f"rate={stats.rate:.5f} [{stats.ci_lo:.5f}, {stats.ci_hi:.5f}]"
        )
        records.append(
            make_record(args.lattice, L, noise, stats, args.seed, timestamp)
        )
    emit_results(records, args.format, args.out)
    return 0


def _cmd_threshold(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.Ls)
    if len(sizes) < 2:
        raise ValueError("threshold fits need at least 2 sizes")
    if args.points < 4:
        raise ValueError("threshold fits need at least 4 sweep points")
    points = sweep_curves(
        args.lattice,
        args.regime,
        sizes,
        args.pmin,
        args.pmax,
        args.points,
        args.trials,
        seed=args.seed,
        threads=args.threads,
    )
    for pt in points:
        _diag(f"{args.lattice} L={pt.L} p={pt.p:.6f}: rate={pt.rate:.5f}")
    est = estimate_threshold(
        points, lattice=args.lattice, regime=args.regime, seed=args.seed
    )
    payload = {
        "lattice": est.lattice,
        "regime": est.regime,
        "p_th": est.p_th,
        "uncertainty": est.uncertainty,
        "A": est.params[0],
        "B": est.params[1],
        "C": est.params[2],
        "nu": est.params[3],
        "curve": [dataclasses.asdict(pt) for pt in points],
        "version": __version__,
        "timestamp": _timestamp(),
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


# --------------------------------------------------------------------------
# Parser and dispatch
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crystalft",
        description="Cluster states and error thresholds from crystal tilings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    symbol = sub.add_parser("symbol", help="Delaney-Dress symbol tools")
    symbol_sub = symbol.add_subparsers(dest="action", required=True)
    validate = symbol_sub.add_parser("validate", help="check a symbol file")
    validate.add_argument("file", help="symbol file")
    validate.set_defaults(handler=_cmd_symbol_validate)
    dual = symbol_sub.add_parser("dual", help="write the dual symbol")
    dual.add_argument("file", help="symbol file")
    dual.add_argument("--out", default="-", help="output path (default stdout)")
    dual.set_defaults(handler=_cmd_symbol_dual)
    selfdual = symbol_sub.add_parser(
        "selfdual", help="test self-duality (exit 0 yes, 1 no)"
    )
    selfdual.add_argument("file", help="symbol file")
    selfdual.set_defaults(handler=_cmd_symbol_selfdual)
    enum = symbol_sub.add_parser("enumerate", help="enumerate grid candidates")
    enum.add_argument("--n", type=int, required=True, help="polygon size n")
    enum.add_argument("--k", type=int, required=True, help="grid size k")
    enum.add_argument(
        "--boundary", choices=("loop", "periodic"), default="loop",
        help="grid boundary condition (default loop)",
    )
    enum.add_argument(
        "--count-only", action="store_true", help="print only the count"
    )
    enum.add_argument("--out", default="-", help="output path (default stdout)")
    enum.set_defaults(handler=_cmd_symbol_enumerate)

    cpx = sub.add_parser("complex", help="chain complex tools")
    cpx_sub = cpx.add_subparsers(dest="action", required=True)
    check = cpx_sub.add_parser("check", help="validate a complex JSON file")
    check.add_argument("file", help="complex JSON file")
    check.set_defaults(handler=_cmd_complex_check)
    fol = cpx_sub.add_parser("foliate", help="foliate a CSS code complex")
    fol.add_argument("file", help="length-2 complex JSON file")
    fol.add_argument("--t", type=int, required=True, help="number of slices")
    fol.add_argument("--out", default="-", help="output path (default stdout)")
    fol.set_defaults(handler=_cmd_complex_foliate)

    lat = sub.add_parser("lattice", help="unit cells and decoder graphs")
    lat_sub = lat.add_subparsers(dest="action", required=True)
    build = lat_sub.add_parser("build", help="compile a torus decoder graph")
    group = build.add_mutually_exclusive_group(required=True)
    group.add_argument("--name", help="bundled cell name")
    group.add_argument("--cell", help="unit-cell JSON file")
    build.add_argument("--L", type=int, required=True, help="torus size")
    build.add_argument("--out", default="-", help="output path (default stdout)")
    build.set_defaults(handler=_cmd_lattice_build)
    stats = lat_sub.add_parser("stats", help="average vertex and gate degrees")
    sgroup = stats.add_mutually_exclusive_group(required=True)
    sgroup.add_argument("--name", help="bundled cell name")
    sgroup.add_argument("--cell", help="unit-cell JSON file")
    stats.set_defaults(handler=_cmd_lattice_stats)
    lst = lat_sub.add_parser("list", help="list bundled lattices with stats")
    lst.set_defaults(handler=_cmd_lattice_list)

    sim = sub.add_parser("simulate", help="Monte Carlo failure rates")
    sim.add_argument("--lattice", required=True, help="bundled lattice name")
    sim.add_argument("--L", required=True, help="torus size(s), comma separated")
    sim.add_argument("--pz", type=float, help="Z failure rate per gate")
    sim.add_argument("--px", type=float, help="X failure rate per gate")
    sim.add_argument("--pm", type=float, help="measurement error rate")
    sim.add_argument("--regime", choices=REGIMES, help="named noise regime")
    sim.add_argument("--p", type=float, help="total rate for --regime")
    sim.add_argument("--trials", type=int, required=True, help="trials per size")
    sim.add_argument("--seed", type=int, default=0, help="stream seed (default 0)")
    sim.add_argument("--threads", type=int, default=None,
                     help="worker threads (default $CRYSTALFT_THREADS or 1)")
    sim.add_argument("--out", default="-", help="output path (default stdout)")
    sim.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default csv)")
    sim.set_defaults(handler=_cmd_simulate)

    thr = sub.add_parser("threshold", help="fit a threshold from a sweep")
    thr.add_argument("--lattice", required=True, help="bundled lattice name")
    thr.add_argument("--regime", choices=REGIMES, required=True,
                     help="noise regime of the sweep")
    thr.add_argument("--Ls", required=True, help="torus sizes, comma separated")
    thr.add_argument("--pmin", type=float, required=True, help="sweep start")
    thr.add_argument("--pmax", type=float, required=True, help="sweep end")
    thr.add_argument("--points", type=int, required=True, help="sweep points")
    thr.add_argument("--trials", type=int, required=True, help="trials per point")
    thr.add_argument("--seed", type=int, default=0, help="stream seed (default 0)")
    thr.add_argument("--threads", type=int, default=None,
                     help="worker threads (default $CRYSTALFT_THREADS or 1)")
    thr.add_argument("--out", default="-", help="output path (default stdout)")
    thr.set_defaults(handler=_cmd_threshold)

    return parser


def dispatch(argv: list[str]) -> int:
    """Route argv to a subcommand handler and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
