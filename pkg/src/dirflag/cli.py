"""Command line interface.

Subcommands: homology, barcode, homotopy, experiment.  Exit codes:
0 ok, 1 usage error, 2 parse error, 3 computation budget exhausted.
Output files are written only after the computation has fully succeeded,
so failures never leave partial output behind.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import experiments, fileformats
from .chains import betti_numbers, omega_complex
from .complexes import allowed_path_complex, directed_flag_complex
from .digraph import VertexMap
from .fileformats import ParseError, dump_json
from .homotopy import SYS_A, SYS_DFL, multi_step_search
from .linalg import parse_field
from .persistence import (Filtration, grounded_persistent_h1,
                          persistent_dfl_homology, shortest_path_filtration)

USAGE_EXIT, PARSE_EXIT, BUDGET_EXIT = 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, USAGE_EXIT)


def _thread_cap():
    """Parallelism cap from DIRFLAG_THREADS; all work currently runs on
    one worker, so the cap is validated and honoured trivially."""
    raw = os.environ.get("DIRFLAG_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"DIRFLAG_THREADS must be an integer, got {raw!r}",
                       USAGE_EXIT) from None
    if value < 1:
        raise CliError("DIRFLAG_THREADS must be at least 1", USAGE_EXIT)
    return value


def _load_graph(path):
    try:
        return fileformats.parse_graph_file(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", PARSE_EXIT) from None
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", PARSE_EXIT) from None


def _parse_map(spec, source_count, target_count, flag):
    try:
        image = tuple(int(tok) for tok in spec.split(","))
    except ValueError:
        raise CliError(f"{flag} must be a comma-separated integer list",
                       USAGE_EXIT) from None
    if len(image) != source_count:
        raise CliError(f"{flag} must list {source_count} image vertices",
                       USAGE_EXIT)
    if any(not (0 <= x < target_count) for x in image):
        raise CliError(f"{flag} image vertex out of range", USAGE_EXIT)
    return VertexMap(source_count, target_count, image)


def cmd_homology(args):
    parsed = _load_graph(args.input)
    G = parsed.digraph()
    field = parse_field(args.field)
    max_dim = args.max_dim
    # one degree of headroom so the top reported value is not
    # truncation-sensitive
    if args.complex == "dfl":
        complex_ = directed_flag_complex(G, max_dim + 2)
    else:
        complex_ = allowed_path_complex(G, max_dim + 2)
    rep = omega_complex(complex_, max_dim + 1, field)
    bettis = betti_numbers(rep, max_dim)
    lines = [" ".join(str(b) for b in bettis)]
    if args.json:
        obj = {"complex": args.complex, "field": field.name,
               "betti": list(bettis), "max_dim": max_dim}
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dump_json(obj))
    print("\n".join(lines))
    return 0


def cmd_barcode(args):
    parsed = _load_graph(args.input)
    W = parsed.weighted()
    field = parse_field(args.field)
    if args.pipeline == "sp-dfl":
        F = shortest_path_filtration(W)
        if parsed.vertex_values is not None:
            F = Filtration(F.vertex_count, F.entrance,
                           tuple(Fraction(v) for v in parsed.vertex_values))
        barcode = persistent_dfl_homology(F, args.max_degree, field)
    else:
        barcode = grounded_persistent_h1(W, field)
    csv = fileformats.barcode_to_csv(barcode)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dump_json(fileformats.barcode_to_json_obj(barcode)))
    if args.plot:
        from . import plotting
        plotting.plot_barcode(barcode, args.plot,
                              title=f"{args.pipeline} barcode")
    sys.stdout.write(csv)
    return 0


def cmd_homotopy(args):
    parsed_g = _load_graph(args.source)
    parsed_h = _load_graph(args.target)
    G = parsed_g.digraph()
    H = parsed_h.digraph()
    f = _parse_map(args.map_f, G.vertex_count, H.vertex_count, "--map-f")
    g = _parse_map(args.map_g, G.vertex_count, H.vertex_count, "--map-g")
    system = SYS_A if args.system == "A" else SYS_DFL
    try:
        result = multi_step_search(f, g, G, H, system, budget=args.budget)
    except ValueError as exc:
        raise CliError(str(exc), USAGE_EXIT) from None
    if args.witness_out:
        obj = fileformats.search_result_to_json_obj(result, system, G, H)
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(obj))
    if result.status == "found":
        if f == g:
            print("equal")
        else:
            print(f"homotopic (zig-zag of {len(result.witness.directions)} "
                  f"one-step homotopies)")
        return 0
    if result.status == "absent":
        print("absent (map space exhausted)")
        return 0
    print(f"inconclusive (budget {args.budget} exhausted; "
          f"map space has {result.space_size} elements)")
    return BUDGET_EXIT


def cmd_experiment(args):
    name = args.name
    if args.trials is not None:
        trials = args.trials
    else:
        trials = 5 if name == "derangement" else 50
    report = experiments.run_experiment(name, seed=args.seed, trials=trials)
    payload = dump_json(experiments.strip_private(report))
    if args.plot_dir:
        os.makedirs(args.plot_dir, exist_ok=True)
        experiments.render_experiment_figures(report, args.plot_dir)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    sys.stdout.write(payload)
    status = report["summary"]["status"]
    return 0 if status in ("pass", "instability reproduced") else 1


def build_parser():
    parser = _Parser(prog="dirflag",
                     description="Directed flag complex homology, digraph "
                                 "homotopy and persistence toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Betti numbers of a digraph complex")
    p.add_argument("input", help="graph file (flag or edge-list dialect)")
    p.add_argument("--complex", choices=("dfl", "allowed"), default="dfl")
    p.add_argument("--max-dim", type=int, default=2,
                   help="largest homology degree to report")
    p.add_argument("--field", default="q", help="q or gf<p>")
    p.add_argument("--json", help="also write a JSON report here")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("barcode", help="persistence barcode of a weighted "
                                       "digraph")
    p.add_argument("input", help="weighted graph file")
    p.add_argument("--pipeline", choices=("sp-dfl", "grounded-h1"),
                   default="sp-dfl")
    p.add_argument("--max-degree", type=int, default=1)
    p.add_argument("--field", default="gf2", help="q or gf<p>")
    p.add_argument("--csv", help="write the barcode CSV here")
    p.add_argument("--json", help="write the barcode JSON here")
    p.add_argument("--plot", help="write a barcode figure (PNG) here")
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("homotopy", help="search for a homotopy between two "
                                        "digraph maps")
    p.add_argument("source", help="source graph file")
    p.add_argument("target", help="target graph file")
    p.add_argument("--map-f", required=True,
                   help="comma-separated image list of the first map")
    p.add_argument("--map-g", required=True,
                   help="comma-separated image list of the second map")
    p.add_argument("--system", choices=("A", "dfl"), default="dfl")
    p.add_argument("--budget", type=int, default=200000,
                   help="largest map space that will be explored")
    p.add_argument("--witness-out", help="write the witness JSON here")
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=experiments.EXPERIMENT_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None,
                   help="trial count (derangement: largest n; default 5)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--plot-dir", help="directory for summary figures")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        _thread_cap()
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_EXIT


if __name__ == "__main__":
    sys.exit(main())
