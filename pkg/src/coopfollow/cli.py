"""Command-line entry point.

Subcommands: run (single simulation), batch (paired MC/CC metrics over
seeds), compare (batch plus a paired summary, needs >= 2 seeds), serve
(teleop websocket service), validate (parse scenario files).

Exit codes: 0 success, 1 configuration error, 2 run aborted or timed
out. All outputs are written atomically, so rerunning a command never
leaves partial files.
"""

from __future__ import annotations

import argparse
import os
import sys

from .engine import batch, run
from .metrics import summarize_pairs, write_metrics_csv
from .recording import record_lines, write_record
from .scenario import ScenarioError, load_scenario, scenario_hash, with_overrides

DEFAULT_PORT = 8070


def _parse_seeds(text: str) -> list[int]:
    """'1,2,5-8' -> [1, 2, 5, 6, 7, 8]; order kept, duplicates rejected."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:  # allow a leading minus on the low bound
            lo_s, hi_s = part.rsplit("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError(f"seed range {part!r} is reversed")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if len(set(seeds)) != len(seeds):
        raise ValueError("seed list contains duplicates")
    if not seeds:
        raise ValueError("seed list is empty")
    return seeds


def _load(path: str, args) -> "Scenario":
    sc = load_scenario(path)
    return with_overrides(sc,
                          mode=getattr(args, "mode", None),
                          seed=getattr(args, "seed", None),
                          operator_kind=getattr(args, "operator", None))


def _print_metrics(m) -> None:
    print(f"seed={m.seed} mode={m.mode} rmse_e2={m.rmse_e2:.5f} m "
          f"rmse_e3={m.rmse_e3:.5f} rad completion_time={m.completion_time:.2f} s "
          f"path_lost={m.path_lost_fraction:.3f} saturated={m.saturation_fraction:.3f}")


def cmd_run(args) -> int:
    sc = _load(args.scenario, args)
    res = run(sc)
    os.makedirs(args.out, exist_ok=True)
    write_record(os.path.join(args.out, "run.jsonl"),
                 record_lines(scenario_hash(sc), sc.mode, sc.dt, sc.seed,
                              res.rows, res.status, res.completion_time))
    m = res.metrics()
    write_metrics_csv(os.path.join(args.out, "metrics.csv"), [m])
    print(f"status={res.status}" + (f" ({res.detail})" if res.detail else ""))
    _print_metrics(m)
    return 0 if res.status == "completed" else 2


def cmd_batch(args) -> int:
    sc = _load(args.scenario, args)
    results = batch(sc, args.seeds, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "batch.csv")
    write_metrics_csv(out_path, results)
    for m in results:
        _print_metrics(m)
    print(f"wrote {out_path}")
    return 0


def cmd_compare(args) -> int:
    if len(args.seeds) < 2:
        print("compare needs at least 2 seeds", file=sys.stderr)
        return 1
    sc = _load(args.scenario, args)
    results = batch(sc, args.seeds, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "compare.csv")
    write_metrics_csv(out_path, results)
    summary = summarize_pairs(results)
    print(f"pairs={summary['pairs']}")
    for metric in ("rmse_e2", "rmse_e3"):
        s = summary[metric]
        print(f"{metric}: CC mean={s['cc_mean']:.5f} median={s['cc_median']:.5f} | "
              f"MC mean={s['mc_mean']:.5f} median={s['mc_median']:.5f} | "
              f"CC lower in {s['cc_wins']}/{summary['pairs']} seeds "
              f"({100.0 * s['cc_win_fraction']:.0f}%)")
    print(f"wrote {out_path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    sc = _load(args.scenario, args)
    ui_dir = args.ui if args.ui and os.path.isdir(args.ui) else None
    app = create_app(sc, out_dir=args.out, time_scale=args.time_scale,
                     telemetry_hz=args.telemetry_hz, ui_dir=ui_dir)
    os.makedirs(args.out, exist_ok=True)
    print(f"teleop service on ws://{args.host}:{args.port}/teleop "
          f"(mode {sc.mode}, dt {sc.dt}, time x{args.time_scale:g})")
    if ui_dir:
        print(f"cockpit ui at http://{args.host}:{args.port}/")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_validate(args) -> int:
    bad = 0
    for path in args.scenarios:
        try:
            sc = load_scenario(path)
        except ScenarioError as e:
            print(f"{path}: INVALID: {e}", file=sys.stderr)
            bad += 1
            continue
        print(f"{path}: ok (mode {sc.mode}, path {sc.path.total_length:.3f} m, "
              f"hash {scenario_hash(sc)[:12]})")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coopfollow",
        description="Cooperative path-following simulator with haptic shared control.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, seeds: bool = False):
        sp.add_argument("scenario", help="scenario JSON file")
        sp.add_argument("--out", default=".", help="output directory (default: cwd)")
        sp.add_argument("--mode", choices=["MC", "CC"], help="override scenario mode")
        if seeds:
            sp.add_argument("--seeds", default=None,
                            help="seed list, e.g. '1,2,5-8' (default: 1-20)")
            sp.add_argument("--jobs", type=int, default=1,
                            help="parallel worker processes (default: 1)")

    sp = sub.add_parser("run", help="run one scenario headless")
    add_common(sp)
    sp.add_argument("--seed", type=int, help="override scenario seed")
    sp.add_argument("--operator", choices=["compliant", "manual_pd", "hybrid"],
                    help="override operator kind")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("batch", help="paired MC/CC metrics over a seed list")
    add_common(sp, seeds=True)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("compare", help="batch plus paired MC-vs-CC summary")
    add_common(sp, seeds=True)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("serve", help="start the teleop websocket service")
    add_common(sp)
    sp.add_argument("--seed", type=int, help="override scenario seed")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int,
                    default=int(os.environ.get("TELEOP_PORT", DEFAULT_PORT)),
                    help=f"listen port (default: $TELEOP_PORT or {DEFAULT_PORT})")
    sp.add_argument("--time-scale", type=float, default=1.0,
                    help="sim seconds per wall second (default: 1.0)")
    sp.add_argument("--telemetry-hz", type=float, default=30.0,
                    help="snapshot rate in sim time (default: 30)")
    sp.add_argument("--ui", default="frontend",
                    help="static cockpit directory to serve at / (default: ./frontend)")
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("validate", help="parse and check scenario files")
    sp.add_argument("scenarios", nargs="+", help="scenario JSON files")
    sp.set_defaults(func=cmd_validate)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seeds"):
        try:
            args.seeds = (list(range(1, 21)) if args.seeds is None
                          else _parse_seeds(args.seeds))
        except ValueError as e:
            print(f"error: bad --seeds: {e}", file=sys.stderr)
            return 1
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 1
    if getattr(args, "time_scale", 1.0) <= 0 or getattr(args, "telemetry_hz", 1.0) <= 0:
        print("error: --time-scale and --telemetry-hz must be positive", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"scenario error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
