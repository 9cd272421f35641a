"""Command-line entry point: ``mpiso {iso,auto,canon,bench,gen}``.

Exit codes for ``iso``/``auto``: 0 isomorphic (automorphism found),
1 not isomorphic (none found), 2 error or exceeded limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from mpiso import bench
from mpiso.canonical import canonicalize, to_json_dict
from mpiso.formats import BenchRecord, read_graph, write_bench_csv, write_edge_list, write_report
from mpiso.matcher import LimitExceeded, MatchConfig, NoMultiNodeCell, find_automorphisms, match
from mpiso.testkit import GeneratorSpec, isomorphic_pair

EXIT_ISO, EXIT_NONISO, EXIT_ERROR = 0, 1, 2


def _default_seed() -> int:
    try:
        return int(os.environ.get("MPISO_SEED", "0"))
    except ValueError:
        return 0


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="constant seed (default $MPISO_SEED or 0)")
    p.add_argument("--iters", type=int, default=None, help="message rounds L (default M-1)")
    p.add_argument("--mode", choices=("supervised", "exhaustive"), default="supervised")
    p.add_argument("--format", dest="fmt", choices=("tc15", "tc15-be", "edgelist"), default=None,
                   help="input format (default: by extension)")
    p.add_argument("--max-probes", type=int, default=None)
    p.add_argument("--timeout-ms", type=float, default=None)
    p.add_argument("--output", choices=("json", "csv", "quiet"), default=None)


def _config(args) -> MatchConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    return MatchConfig(seed=seed, iterations=args.iters, max_probes=args.max_probes,
                       timeout_ms=args.timeout_ms)


def _err(msg: str) -> int:
    print(f"mpiso: error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _notice_disconnected(v) -> None:
    if not v.connected:
        print("mpiso: notice: disconnected input; completeness is only argued for connected graphs",
              file=sys.stderr)


def cmd_iso(args) -> int:
    try:
        g1 = read_graph(args.file1, args.fmt)
        g2 = read_graph(args.file2, args.fmt)
        v = match(g1, g2, _config(args), args.mode)
    except LimitExceeded as e:
        return _err(f"limit exceeded: {e}")
    except (OSError, ValueError) as e:
        return _err(str(e))
    _notice_disconnected(v)
    output = args.output or "json"
    if output == "json":
        sys.stdout.write(write_report(v))
    elif output == "csv":
        rec = BenchRecord("pair", g1.num_nodes, f"{args.file1}:{args.file2}", v.isomorphic,
                          v.probes, v.rounds, v.wall_time_us)
        sys.stdout.write(write_bench_csv([rec]))
    return EXIT_ISO if v.isomorphic else EXIT_NONISO


def cmd_auto(args) -> int:
    config = _config(args)
    try:
        g = read_graph(args.file, args.fmt)
        found = find_automorphisms(g, config, args.count, args.mode)
    except NoMultiNodeCell as e:
        found = []
        reason = str(e)
    except LimitExceeded as e:
        return _err(f"limit exceeded: {e}")
    except (OSError, ValueError) as e:
        return _err(str(e))
    else:
        reason = "no non-identity automorphism found"
    output = args.output or "json"
    if output == "json":
        report = {
            "found": bool(found),
            "seed": config.seed,
            "automorphisms": [list(v.mapping) for v in found],
            "reason": found[0].reason if found else reason,
            "probes": sum(v.probes for v in found),
            "rounds": sum(v.rounds for v in found),
            "timing": {"wall_time_us": sum(v.wall_time_us for v in found)},
        }
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_ISO if found else EXIT_NONISO


def cmd_canon(args) -> int:
    try:
        g = read_graph(args.file, args.fmt)
    except (OSError, ValueError) as e:
        return _err(str(e))
    sys.stdout.write(json.dumps(to_json_dict(canonicalize(g)), indent=2) + "\n")
    return 0


def cmd_bench(args) -> int:
    config = _config(args)
    if args.directory is not None:
        if not Path(args.directory).is_dir():
            return _err(f"not a directory: {args.directory}")
        jobs = bench.directory_jobs(args.directory, args.fmt)
    else:
        sizes = [int(x) for x in args.sizes.split(",") if x]
        jobs = bench.sweep_jobs(args.family, sizes, args.pairs, args.rho, config.seed)
    records = bench.run_jobs(jobs, config, args.mode, args.jobs)
    rows = bench.with_medians(records)
    text = write_bench_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text)
    if (args.output or "csv") != "quiet":
        sys.stdout.write(text)
    if args.plot:
        from mpiso.plotting import plot_scaling

        plot_scaling(records, args.plot)
    return 0


def _gen_spec(args) -> GeneratorSpec:
    params = {k: getattr(args, k) for k in ("n", "rho", "rows", "cols", "x", "y", "z", "d", "name")
              if getattr(args, k) is not None}
    return GeneratorSpec(args.kind, params, seed=args.seed if args.seed is not None else _default_seed(),
                         connected=args.connected)


def cmd_gen(args) -> int:
    try:
        spec = _gen_spec(args)
        perm_seed = args.perm_seed if args.perm_seed is not None else spec.seed + 1
        g1, g2, sigma = isomorphic_pair(spec, perm_seed)
        prefix = Path(args.out)
        Path(f"{prefix}_a.txt").write_text(write_edge_list(g1))
        Path(f"{prefix}_b.txt").write_text(write_edge_list(g2))
        Path(f"{prefix}_map.json").write_text(json.dumps({"mapping": sigma}) + "\n")
    except (OSError, ValueError, KeyError) as e:
        return _err(str(e))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpiso", description="Message-passing graph isomorphism")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iso", help="decide isomorphism of two graph files")
    p.add_argument("file1")
    p.add_argument("file2")
    _common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("auto", help="find non-identity automorphisms")
    p.add_argument("file")
    p.add_argument("--count", type=int, default=1, help="number of automorphisms to extract")
    _common(p)
    p.set_defaults(func=cmd_auto)

    p = sub.add_parser("canon", help="dump the canonical bipartite form as JSON")
    p.add_argument("file")
    p.add_argument("--format", dest="fmt", choices=("tc15", "tc15-be", "edgelist"), default=None)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("bench", help="benchmark a TC-15 directory or a generated sweep")
    p.add_argument("directory", nargs="?", default=None)
    p.add_argument("--family", choices=("random", "mesh2d", "mesh3d", "cycle"), default="random")
    p.add_argument("--sizes", default="16,32,64,128,256")
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--rho", type=float, default=0.05)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--csv", default=None, help="also write CSV here")
    p.add_argument("--plot", default=None, help="write a log-log scaling figure here")
    _common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write an isomorphic pair and its ground-truth mapping")
    p.add_argument("kind", choices=("random", "mesh2d", "mesh3d", "cycle", "path", "complete", "regular", "named"))
    p.add_argument("--out", required=True, help="output prefix")
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--z", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--name")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--perm-seed", type=int, default=None, help="permutation seed (default: --seed + 1)")
    p.add_argument("--connected", action="store_true")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
