"""Command line: ``bsvbs {run,compare,sweep-delta,bound,gen-trace}``.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .config import load_config
from .errors import BSvBSError, ConfigError, IncompleteTraceError, TraceParseError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed-list", type=_int_list, help="comma-separated seeds (overrides run.seeds)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for seed-parallel runs")
    common.add_argument("--out-dir", help="output directory (falls back to run.out_dir, then $BSVBS_OUT_DIR)")
    common.add_argument("--plots", action="store_true", help="also write SVG charts")
    common.add_argument("--horizon", type=int, help="override run.horizon")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _ArgParser(prog="bsvbs", description="Bandit scheduling of vBS radio policies: simulator and experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    s = sub.add_parser("run", parents=[common], help="run the configured learner over all seeds")
    s.add_argument("-c", "--config", required=True)

    s = sub.add_parser("compare", parents=[common], help="run several learners on identical environment draws")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("--learners", required=True, help="comma-separated learner names")
    s.add_argument("--reference", help="learner the savings columns are measured against")

    s = sub.add_parser("sweep-delta", parents=[common], help="power per hyper-slot for several delta values")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("--deltas", required=True, type=_float_list)

    s = sub.add_parser("bound", help="print the worst-case regret bound")
    s.add_argument("--arms", type=int, required=True)
    s.add_argument("--horizon", type=int, required=True)

    s = sub.add_parser("gen-trace", parents=[common], help="export the surrogate model as a trace CSV")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("-o", "--output", required=True)
    return p


def _load(args):
    cfg = load_config(args.config)
    changes = {}
    if args.seed_list:
        changes["seeds"] = tuple(args.seed_list)
    if args.horizon is not None:
        changes["horizon"] = args.horizon
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return cfg.replace(**changes) if changes else cfg


def _print_summary(summaries) -> None:
    for s in summaries:
        print(f"{s.learner}: T={s.horizon} seeds={s.seeds} R_T={s.R_T:.3f} R_T/T={s.R_T / s.horizon:.5f} "
              f"bound={s.bound:.1f} total={s.total_kw:.3f} kW cpu={s.cpu_kw:.3f} kW")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "bound":
            if args.arms < 2 or args.horizon < 1:
                raise ConfigError("need --arms >= 2 and --horizon >= 1")
            print(f"{harness.bound(args.arms, args.horizon):.6f}")
            return EXIT_OK
        cfg = _load(args)
        if args.command == "run":
            _print_summary([harness.run(cfg, args.out_dir, args.jobs, args.plots)])
        elif args.command == "compare":
            learners = [x.strip() for x in args.learners.split(",") if x.strip()]
            _print_summary(harness.compare(cfg, learners, args.out_dir, args.jobs, args.plots, args.reference))
        elif args.command == "sweep-delta":
            for s in harness.sweep_delta(cfg, args.deltas, args.out_dir, args.jobs, args.plots):
                print(f"delta={s.delta:g}: mean total {s.total_w.mean():.4f} W, cpu {s.cpu_w.mean():.4f} W")
        elif args.command == "gen-trace":
            n = harness.gen_trace(cfg, args.output)
            print(f"wrote {n} rows to {args.output}")
    except (ConfigError, TraceParseError, IncompleteTraceError) as exc:
        print(f"bsvbs: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BSvBSError, OSError) as exc:
        print(f"bsvbs: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
