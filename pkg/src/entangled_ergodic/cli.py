"""Command-line harness.

    entangled-ergodic run CONFIG.json --out DIR [--seed N] [--threads N]
    entangled-ergodic list [--json]

Exit codes: 0 when every check passes, 1 on a failed check, 2 on a bad
config or bad flags.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .errors import ConfigError
from .experiments import KINDS, Outcome, run_experiment

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}",
                          f"{path}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object", str(path))
    return cfg


def resolve_seed(cfg: dict, override: int | None) -> int:
    if override is not None:
        return override
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer", "seed")
    return seed


def render_summary(cfg: dict, seed: int, outcome: Outcome, wall: float) -> str:
    rep = outcome.report
    slope = "undefined" if rep.fitted_slope is None else f"{rep.fitted_slope:.4f}"
    lines = [
        f"# {cfg['kind']}",
        "",
        f"- verdict: {'PASS' if outcome.passed else 'FAIL'}",
        f"- seed: {seed}",
        f"- rows: {len(rep.rows)}",
        f"- max deviation: {rep.max_deviation:.6e}",
        f"- fitted slope: {slope}",
        f"- wall time: {wall:.3f} s",
        "",
        "| check | result | detail |",
        "|---|---|---|",
    ]
    for c in outcome.checks:
        lines.append(f"| {c.name} | {'pass' if c.passed else 'FAIL'} | {c.detail} |")
    lines += ["", "## config", "", "```json", json.dumps(cfg, indent=2, sort_keys=True), "```", ""]
    return "\n".join(lines)


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        seed = resolve_seed(cfg, args.seed)
        start = time.perf_counter()
        outcome = run_experiment(cfg, seed, threads=args.threads)
        wall = time.perf_counter() - start
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outcome.report.write_csv(out / "report.csv")
    (out / "summary.md").write_text(render_summary(cfg, seed, outcome, wall))
    for c in outcome.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    return EXIT_OK if outcome.passed else EXIT_FAIL


def kinds_table() -> list[dict]:
    return [{"kind": k.name, "description": k.description, "verifies": list(k.verifies)}
            for k in KINDS.values()]


def cmd_list(args) -> int:
    table = kinds_table()
    if args.json:
        print(json.dumps(table, indent=2))
        return EXIT_OK
    width = max(len(row["kind"]) for row in table)
    for row in table:
        print(f"{row['kind']:<{width}}  {row['description']}")
        print(f"{'':<{width}}  verifies: {'; '.join(row['verifies'])}")
    return EXIT_OK


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _seed(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entangled-ergodic",
        description="Reproducible convergence experiments for entangled and diagonal ergodic averages.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config", help="path to a JSON experiment config")
    run.add_argument("--out", required=True, help="output directory for report.csv and summary.md")
    run.add_argument("--seed", type=_seed, default=None, help="overrides the config seed")
    run.add_argument("--threads", type=_positive, default=1, help="worker threads for N grids")
    run.set_defaults(func=cmd_run)
    lst = sub.add_parser("list", help="list experiment kinds")
    lst.add_argument("--json", action="store_true", help="machine-readable output")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse prints usage itself; it exits 2 on errors and 0 on --help
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
