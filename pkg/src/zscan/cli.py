"""Command-line interface.

Exit codes are part of the interface::

    0   success / equivalent / realized
    2   I/O failure
    3   invalid configuration or tolerances
    4   unknown class key
    5   unreadable or invalid input file
    10  realization search exhausted its budget
    11  combinatorially equivalent, no projective witness found
    12  combinatorially inequivalent
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .equivalence import are_equivalent, canonical_key
from .generator import ClassCatalog, level_zero, next_level
from .minimality import classify, explain_text
from .model import Arrangement, ArrangementError, from_json
from .realization import (
    ClusterAmbiguity,
    DegenerateInput,
    InvalidTolerance,
    RealizedArrangement,
    Tolerances,
    TooFewDistinguishedPoints,
    extract_combinatorics,
    projective_equivalent,
    realize,
)
from .store import (
    header,
    key_hash,
    key_level,
    level_path,
    output_dir,
    read_json,
    read_level,
    write_json,
    write_level,
)

log = logging.getLogger("zscan")

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_UNKNOWN_KEY = 4
EXIT_BAD_FILE = 5
EXIT_UNREALIZED = 10
EXIT_NO_WITNESS = 11
EXIT_INEQUIVALENT = 12


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--out", default=d(None), help="output directory (default: $ZSCAN_OUT or ./zscan-out)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--workers", type=int, default=d(1))
    p.add_argument("--resume", action="store_true", default=d(False))
    p.add_argument("--format", choices=("json", "text"), default=d("text"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zscan", description="Classify conic-line arrangements with one conic.")
    parser.add_argument("--version", action="version", version=f"zscan {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="enumerate classes level by level")
    p.add_argument("-n", "--n-max", type=int, required=True)
    _add_globals(p, suppress=True)

    p = sub.add_parser("explain", help="characteristic table and filter verdicts for one class")
    p.add_argument("target", help="class key or arrangement JSON file")
    _add_globals(p, suppress=True)

    p = sub.add_parser("realize", help="search for complex coordinates of a class")
    p.add_argument("target", help="class key or arrangement JSON file")
    p.add_argument("--tol-res", type=float, default=1e-9)
    p.add_argument("--tol-cluster", type=float, default=1e-6)
    p.add_argument("--tol-tan", type=float, default=1e-8)
    p.add_argument("--budget", type=int, default=200)
    _add_globals(p, suppress=True)

    p = sub.add_parser("compare", help="combinatorial and projective equivalence of two files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--tol-match", type=float, default=1e-6)
    p.add_argument("--tol-cluster", type=float, default=1e-6)
    p.add_argument("--tol-tan", type=float, default=1e-8)
    _add_globals(p, suppress=True)

    p = sub.add_parser("export", help="write candidate reports (JSON, text, CSV, PNG) for the catalog")
    p.add_argument("--no-figures", action="store_true")
    _add_globals(p, suppress=True)
    return parser


def _emit(args, data: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=1) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _enumerate_config() -> dict:
    return {"command": "enumerate"}


# ---------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.n_max < 0:
        raise ConfigError("n must be non-negative")
    if args.workers < 1:
        raise ConfigError("workers must be at least 1")
    out = output_dir(args.out)
    config = _enumerate_config()
    head = header(args.seed, config)
    timing = []
    levels: list[ClassCatalog] = []
    stale = False
    for j in range(args.n_max + 1):
        t0 = time.perf_counter()
        cat = None
        if args.resume and not stale:
            cat = read_level(level_path(out, j), head["config_hash"])
        if cat is None:
            stale = True
            cat = level_zero() if j == 0 else next_level(levels[-1], args.workers)
            write_level(out, cat, head)
            source = "computed"
        else:
            source = "resumed"
        levels.append(cat)
        timing.append({"n": j, "classes": len(cat), "seconds": round(time.perf_counter() - t0, 3),
                       "source": source})
        log.info("level %d: %d classes (%s)", j, len(cat), source)
    counts = [len(c) for c in levels]
    write_json(out / "summary.json", {"header": head, "n_max": args.n_max, "counts": counts})
    write_json(out / "timing.json", {"levels": timing})
    text = "\n".join(["level  classes"] + [f"{j:>5}  {c:>7}" for j, c in enumerate(counts)])
    _emit(args, {"counts": counts, "out": str(out)}, text)
    return EXIT_OK


class UnknownKey(Exception):
    pass


class BadFile(Exception):
    pass


def _load_arrangement_file(path: Path) -> Arrangement:
    try:
        data = read_json(path)
        if "representative" in data:
            data = data["representative"]
        return from_json(data)
    except (OSError, ValueError, KeyError, TypeError, ArrangementError) as exc:
        raise BadFile(f"{path}: {exc}") from exc


def _resolve(args, target: str) -> tuple[str, Arrangement]:
    path = Path(target)
    if not target.startswith("n=") and path.exists():
        a = _load_arrangement_file(path)
        return canonical_key(a), a
    if not target.startswith("n="):
        raise BadFile(f"{target}: no such file and not a class key")
    out = output_dir(args.out)
    try:
        j = key_level(target)
    except ValueError as exc:
        raise UnknownKey(str(exc)) from exc
    cat = read_level(level_path(out, j))
    if cat is None:
        raise UnknownKey(f"no catalog for level {j} in {out}")
    entry = cat.by_key().get(target)
    if entry is None:
        raise UnknownKey(f"key not in {level_path(out, j)}")
    return entry.key, entry.representative


def cmd_explain(args) -> int:
    key, a = _resolve(args, args.target)
    report = classify(key, a)
    _emit(args, report.to_json(), explain_text(report))
    return EXIT_OK


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(
            res=getattr(args, "tol_res", 1e-9),
            cluster=args.tol_cluster,
            tan=args.tol_tan,
            match=getattr(args, "tol_match", 1e-6),
        )
    except InvalidTolerance as exc:
        raise ConfigError(str(exc)) from exc


def cmd_realize(args) -> int:
    tol = _tolerances(args)
    if args.budget < 0:
        raise ConfigError("budget must be non-negative")
    key, a = _resolve(args, args.target)
    result = realize(a, budget=args.budget, tol=tol, seed=args.seed)
    config = {"command": "realize", "budget": args.budget, "tol_res": tol.res,
              "tol_cluster": tol.cluster, "tol_tan": tol.tan}
    out = output_dir(args.out)
    path = out / f"realization-{key_hash(key)}.json"
    write_json(path, {"header": header(args.seed, config), "key": key, **result.to_json()})
    text = f"{result.status} after {result.attempts} attempt(s)"
    if result.geometry is not None:
        text += f"; residual {result.geometry.residual:.3g}, separation {result.geometry.separation:.3g}"
    text += f"\nwritten {path}"
    _emit(args, {"key": key, "status": result.status, "attempts": result.attempts,
                 "file": str(path)}, text)
    return EXIT_OK if result.realized else EXIT_UNREALIZED


def _load_any(path: Path):
    try:
        data = read_json(path)
    except (OSError, ValueError) as exc:
        raise BadFile(f"{path}: {exc}") from exc
    try:
        if isinstance(data, dict) and data.get("geometry") is not None:
            data = data["geometry"]
        if isinstance(data, dict) and "conic" in data:
            return RealizedArrangement.from_json(data)
        if isinstance(data, dict) and "representative" in data:
            data = data["representative"]
        return from_json(data)
    except (ValueError, KeyError, TypeError, IndexError, ArrangementError) as exc:
        raise BadFile(f"{path}: {exc}") from exc


def cmd_compare(args) -> int:
    tol = _tolerances(args)
    x = _load_any(Path(args.file1))
    y = _load_any(Path(args.file2))
    try:
        ax = extract_combinatorics(x, tol) if isinstance(x, RealizedArrangement) else x
        ay = extract_combinatorics(y, tol) if isinstance(y, RealizedArrangement) else y
    except (DegenerateInput, ClusterAmbiguity) as exc:
        raise BadFile(f"cannot read combinatorics: {exc}") from exc
    same, witness = are_equivalent(ax, ay)
    data: dict = {"combinatorial": "equivalent" if same else "inequivalent"}
    lines = [f"combinatorial: {data['combinatorial']}"]
    if not same:
        _emit(args, data, "\n".join(lines))
        return EXIT_INEQUIVALENT
    data["sigma"] = {str(k): v for k, v in sorted(witness.sigma.items())}
    data["point_bijection"] = list(witness.bijection)
    lines.append("line relabeling: " + ", ".join(f"L{k}->L{v}" for k, v in sorted(witness.sigma.items())))
    if not (isinstance(x, RealizedArrangement) and isinstance(y, RealizedArrangement)):
        _emit(args, data, "\n".join(lines))
        return EXIT_OK
    try:
        verdict = projective_equivalent(x, y, tol, seed=args.seed)
    except TooFewDistinguishedPoints as exc:
        data["projective"] = {"verdict": "NotFound", "reason": str(exc)}
        lines.append(f"projective: NotFound ({exc})")
        _emit(args, data, "\n".join(lines))
        return EXIT_NO_WITNESS
    data["projective"] = verdict.to_json()
    if verdict.equivalent:
        lines.append(f"projective: Equivalent (residual {verdict.residual:.3g})")
        lines.append("matrix:")
        lines += ["  " + "  ".join(f"{z:.6g}" for z in row) for row in verdict.matrix]
        _emit(args, data, "\n".join(lines))
        return EXIT_OK
    lines.append("projective: NotFound (not a proof of inequivalence)")
    _emit(args, data, "\n".join(lines))
    return EXIT_NO_WITNESS


def cmd_export(args) -> int:
    from .report import write_reports

    out = output_dir(args.out)
    levels = []
    j = 0
    while level_path(out, j).exists():
        cat = read_level(level_path(out, j))
        if cat is None:
            raise BadFile(f"{level_path(out, j)} is unreadable")
        levels.append(cat)
        j += 1
    if not levels:
        raise UnknownKey(f"no catalog levels in {out}; run enumerate first")
    head = header(args.seed, {"command": "export", "figures": not args.no_figures})
    written = write_reports(levels, out, head, figures=not args.no_figures)
    _emit(args, {"written": [str(p) for p in written]}, "\n".join(str(p) for p in written))
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "explain": cmd_explain,
    "realize": cmd_realize,
    "compare": cmd_compare,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"zscan: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnknownKey as exc:
        print(f"zscan: unknown key: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_KEY
    except BadFile as exc:
        print(f"zscan: invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    except OSError as exc:
        print(f"zscan: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
