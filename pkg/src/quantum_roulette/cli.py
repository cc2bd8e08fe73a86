"""Command-line front end: ``run``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage/validation error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys

from . import linalg
from .errors import RouletteError
from .game import GameConfig, NoiseModel, paper_formula_for, play
from .permutations import ClassicalStrategy, Permutation, load_strategy
from .verify import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
MAX_GRID_POINTS = 10**6
RANGE_TOL = 1e-9


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


class OutputError(Exception):
    pass


def fmt(x: float) -> str:
    """12 significant digits; scientific (lowercase) below 1e-4."""
    s = format(float(x), ".12g")
    return "0" if s == "-0" else s


def _num(x: float) -> float:
    """Round to the printed precision so JSON and CSV show the same digits."""
    return float(fmt(x))


def parse_range(text: str, flag: str) -> list[float]:
    """``start:stop:step`` (closed when the span is a whole number of steps) or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            values = [float(parts[0])]
        elif len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
            if not step > 0 or stop < start:
                raise UsageError(flag, f"range {text!r} needs step > 0 and stop >= start")
            span = (stop - start) / step
            count = round(span) + 1 if abs(span - round(span)) <= RANGE_TOL else math.floor(span) + 1
            if count > MAX_GRID_POINTS:
                raise UsageError(flag, f"range {text!r} has more than {MAX_GRID_POINTS} points")
            values = [round(start + k * step, 12) for k in range(count)]
        else:
            raise ValueError
    except ValueError:
        raise UsageError(flag, f"malformed range {text!r}; expected start:stop:step") from None
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise UsageError(flag, f"grid value {v!r} outside [0, 1]")
    return values


def _load_alice(path, n: int) -> ClassicalStrategy:
    if path is None:
        return ClassicalStrategy(n)
    try:
        s = load_strategy(path)
    except OSError as exc:
        raise OutputError(f"--alice: cannot read {path}: {exc.strerror}") from None
    except RouletteError as exc:
        raise UsageError("--alice", str(exc)) from None
    if s.n != n:
        raise UsageError("--alice", f"strategy is for n={s.n}, game has n={n}")
    return s


def _check_game_flags(args) -> None:
    if not 1 <= args.n <= linalg.MAX_DIM:
        raise UsageError("--n", f"n={args.n} outside 1..{linalg.MAX_DIM}")
    if not 1 <= args.initial <= args.n:
        raise UsageError("--initial", f"{args.initial} outside 1..{args.n}")
    if not 1 <= args.target <= args.n:
        raise UsageError("--target", f"{args.target} outside 1..{args.n}")


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"--out: cannot write {out_path}: {exc.strerror}") from None


def build_report(cfg: GameConfig) -> dict:
    tr = play(cfg)
    report = {
        "config": {
            "n": cfg.n,
            "initial": cfg.initial,
            "target": cfg.bob_target,
            "alice": {p.key(): _num(w) for p, w in cfg.alice.probs.items()},
            "noise_r": None if cfg.noise is None else _num(cfg.noise.r),
        },
        "outcome": [_num(x) for x in tr.outcome],
        "win_probability": _num(tr.win_probability),
        "rho3_diag": [_num(x) for x in tr.rho3.diagonal()],
    }
    formula = paper_formula_for(cfg)
    if formula is not None:
        report["paper_formula"] = {
            "value": _num(formula),
            "deviation": _num(abs(tr.win_probability - formula)),
        }
    return report


def cmd_run(args) -> int:
    _check_game_flags(args)
    alice = _load_alice(args.alice, args.n)
    noise = None
    if args.noise_r is not None:
        if not 0.0 <= args.noise_r <= 1.0:
            raise UsageError("--noise-r", f"{args.noise_r} outside [0, 1]")
        noise = NoiseModel(args.noise_r)
    report = build_report(GameConfig(args.n, args.initial, args.target, alice, noise))
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def _parse_overrides(items, n: int) -> list[tuple[Permutation, list[float]]]:
    out = []
    seen = set()
    for item in items or []:
        key, sep, rng = item.rpartition("=")
        if not sep or not key.strip():
            raise UsageError("--p", f"expected <perm-key>=<start:stop:step>, got {item!r}")
        try:
            perm = Permutation.from_key(key.strip().strip("\"'"), n)
        except RouletteError as exc:
            raise UsageError("--p", str(exc)) from None
        if perm.is_identity():
            raise UsageError("--p", "the identity carries the remainder mass and cannot be swept")
        if perm in seen:
            raise UsageError("--p", f"permutation {perm} given twice")
        seen.add(perm)
        out.append((perm, parse_range(rng, "--p")))
    return out


def sweep_rows(args) -> tuple[list[str], list[list]]:
    """Header and rows (raw floats / None) in grid-lexicographic order."""
    _check_game_flags(args)
    base = _load_alice(args.alice, args.n)
    r_grid = parse_range(args.r, "--r") if args.r is not None else [None]
    overrides = _parse_overrides(args.p, args.n)
    size = len(r_grid) * math.prod(len(g) for _, g in overrides)
    if size > MAX_GRID_POINTS:
        raise UsageError("--p", f"grid has {size} points, above the cap of {MAX_GRID_POINTS}")

    header = ["n", "initial", "target", "r"] + [p.key() for p, _ in overrides]
    header += ["win_probability", "paper_formula", "deviation"]
    rows = []
    for r, *ps in itertools.product(r_grid, *(g for _, g in overrides)):
        probs = dict(base.probs)
        probs.update({perm: v for (perm, _), v in zip(overrides, ps)})
        try:
            alice = ClassicalStrategy(args.n, probs)
        except RouletteError as exc:
            raise UsageError("--p", f"at grid point r={r}, p={ps}: {exc}") from None
        cfg = GameConfig(args.n, args.initial, args.target, alice, None if r is None else NoiseModel(r))
        win = play(cfg).win_probability
        formula = paper_formula_for(cfg)
        deviation = None if formula is None else abs(win - formula)
        rows.append([args.n, args.initial, args.target, r, *ps, win, formula, deviation])
    return header, rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return fmt(v)


def cmd_sweep(args) -> int:
    header, rows = sweep_rows(args)
    if args.format == "json":
        records = [
            {h: (None if v is None else v if isinstance(v, int) else _num(v)) for h, v in zip(header, row)}
            for row in rows
        ]
        text = json.dumps({"columns": header, "rows": records}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_cell(v) for v in row] for row in rows)
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 1 <= args.n <= linalg.MAX_DIM:
        raise UsageError("--n", f"n={args.n} outside 1..{linalg.MAX_DIM}")
    if args.trials < 1:
        raise UsageError("--trials", "must be at least 1")
    results = run_checks(args.n, args.trials, args.seed)
    for res in results:
        status = "SKIP" if res.skipped else ("PASS" if res.passed else "FAIL")
        print(f"{status} {res.name:<22} max_residual={fmt(res.residual)} tol={fmt(res.tol)}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed (n={args.n}, trials={args.trials}, seed={args.seed})")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantum-roulette", description="N-state quantum roulette simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def game_flags(p):
        p.add_argument("--n", type=int, required=True, help="number of roulette states")
        p.add_argument("--initial", type=int, required=True, help="state Alice places (1-based)")
        p.add_argument("--target", type=int, required=True, help="state Bob steers to (1-based)")
        p.add_argument("--alice", default=None, help="JSON strategy file; default is the identity only")

    run = sub.add_parser("run", help="play one game and print a JSON report")
    game_flags(run)
    run.add_argument("--noise-r", type=float, default=None, help="depolarizing strength after step 1")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="evaluate a grid of noise levels and strategy weights")
    game_flags(sweep)
    sweep.add_argument("--r", default=None, help="noise grid start:stop:step")
    sweep.add_argument("--p", action="append", metavar="KEY=RANGE",
                       help='permutation weight grid, e.g. "2 1 3"=0:1:0.5 (repeatable)')
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--out", default=None, help="write the table here instead of stdout")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run the invariant checks")
    verify.add_argument("--n", type=int, default=3)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RouletteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
