"""``mcplan`` command line: regret-curve, episode, score-table, solve."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from mcplan.bench.runner import episode_rows, regret_curve, score_table, write_csv
from mcplan.bench.spec import load_spec
from mcplan.domains import load_instance
from mcplan.errors import McplanError
from mcplan.oracle import export_tables, value_iteration

RUNNERS = {"regret-curve": regret_curve, "episode": episode_rows, "score-table": score_table}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcplan", description="Seeded MCTS planning experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("regret-curve", "episode", "score-table", "solve"):
        sp = sub.add_parser(name)
        sp.add_argument("--spec", required=True, type=Path, help="experiment spec file")
        sp.add_argument("--seed", type=int, default=None, help="override the spec's base seed (u64)")
        sp.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
        sp.add_argument("--workers", type=int, default=None, help="worker threads")
        sp.add_argument("--trace", action="store_true",
                        help="write a per-probe trace to OUT.trace (reference planners only)")
        sp.add_argument("-v", "--verbose", action="store_true")
    return p


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    try:
        spec = load_spec(args.spec)
        if args.seed is not None:
            spec = spec.with_(base_seed=args.seed)
        if args.command == "solve":
            text = "".join(export_tables(value_iteration(load_instance(p))) for p in spec.domains)
            _emit(text, args.out)
            return 0
        if args.command != spec.mode:
            raise McplanError(f"spec {args.spec} is a {spec.mode} experiment, not {args.command}")
        trace: Optional[List[str]] = [] if args.trace else None
        rows = RUNNERS[args.command](spec, workers=args.workers, trace=trace)
        _emit(write_csv(rows), args.out)
        if trace is not None:
            dest = Path(str(args.out) + ".trace") if args.out is not None else Path(spec.id + ".trace")
            dest.write_text("".join(line + "\n" for line in trace))
    except (McplanError, OSError) as e:
        print(f"mcplan: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
