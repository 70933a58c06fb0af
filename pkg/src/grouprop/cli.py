"""Command-line interface.

Examples
--------
::

    grouprop stats network.txt
    grouprop detect --alg hpa --nu 2 --seed 7 -o groups.part network.txt
    grouprop hierarchy --seed 7 -o tree.json network.txt
    grouprop eval groups.part truth.part
    grouprop benchmark gn --mu 0.3 --seed 1 -o g.txt -t t.txt
    grouprop linkpred --realizations 100 southern_women
    grouprop experiment mixing --generator gn --mu 0.1,0.3,0.5 --alg hpa,gpa
    grouprop experiment stability --nu 0,0.25,2 --runs 100 southern_women
    grouprop experiment sizes --runs 100 network.txt

A graph argument is a path to an edge list (or a Pajek ``.net`` file) or
the name of a dataset known to :mod:`grouprop.datasets`.
"""

from __future__ import annotations

import argparse
import sys
from importlib import metadata
from pathlib import Path

from . import datasets
from .clustering import network_profile
from .experiments import (
    ALGORITHMS,
    PLANTED,
    ExperimentReport,
    compare,
    detect,
    mixing_curve,
    null_graph,
    size_distribution,
    stability,
)
from .generators import PlantedGraph
from .graph import Graph, Partition, load_edge_list, load_pajek, load_partition, write_edge_list, write_partition
from .hierarchy import HierarchyConfig, dumps, hpa, log_likelihood, nontrivial_levels
from .linkpred import run_experiment
from .propagation import PropagationConfig


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def read_graph(spec: str) -> Graph:
    path = Path(spec)
    if path.is_file():
        return load_pajek(path) if path.suffix == ".net" else load_edge_list(path)
    if datasets.available(spec):
        return datasets.load(spec)[0]
    raise CliError(f"cannot read graph {spec!r}: no such file or dataset")


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(rep: ExperimentReport, args, argv) -> None:
    rep.provenance.update({
        "command": " ".join(argv),
        "seed": args.seed,
        "version": _version(),
    })
    _emit(rep.to_csv(), args.output)


def cmd_stats(args, argv):
    """One row per node; network totals go to the provenance block."""
    g = read_graph(args.graph)
    prof = network_profile(g)
    rep = ExperimentReport("stats", ["id", "degree", "c", "d"])
    deg = g.degrees
    for i in range(g.n):
        rep.rows.append([g.name(i), int(deg[i]), float(prof.c[i]), float(prof.d[i])])
    rep.provenance.update({"n": g.n, "m": g.m, "C": _fmt(prof.C), "D": _fmt(prof.D), "r": _fmt(prof.r)})
    _report(rep, args, argv)


def _fmt(x: float) -> str:
    return repr(round(float(x), 12))


def cmd_detect(args, argv):
    g = read_graph(args.graph)
    alg = args.alg + ("-fixed" if args.fixed_alpha is not None and args.alg != "lpa" else "")
    alpha = args.fixed_alpha if args.fixed_alpha is not None else 1.0
    part, sweeps, converged, _ = detect(g, alg, args.seed, nu=args.nu, alpha=alpha,
                                        lam=args.lam, max_sweeps=args.max_sweeps)
    if args.output:
        write_partition(g, part, args.output)
        stream = sys.stdout
    else:
        for i, label in enumerate(part.canonical().labels):
            sys.stdout.write(f"{g.name(i)}\t{label}\n")
        stream = sys.stderr
    stream.write(f"sweeps={sweeps} groups={len(part)} converged={str(converged).lower()}\n")


def cmd_hierarchy(args, argv):
    g = read_graph(args.graph)
    mode = "fixed" if args.fixed_alpha is not None else "auto"
    alpha = args.fixed_alpha if args.fixed_alpha is not None else 1.0
    cfg = PropagationConfig(mode=mode, alpha=alpha, nu=args.nu, lam=args.lam, seed=args.seed,
                            max_sweeps=args.max_sweeps)
    h = hpa(g, HierarchyConfig(cfg))
    _emit(dumps(h, g.node_names()) + "\n", args.output)
    stream = sys.stdout if args.output else sys.stderr
    stream.write(f"log_likelihood={log_likelihood(h):.6f} levels={nontrivial_levels(h)} "
                 f"sweeps={h.sweeps}\n")


def _aligned(pred_file, truth_file) -> tuple[Partition, Partition]:
    pn, pl = load_partition(pred_file)
    tn, tl = load_partition(truth_file)
    pmap, tmap = dict(zip(pn, pl)), dict(zip(tn, tl))
    if len(pmap) != len(pn) or len(tmap) != len(tn):
        raise CliError("node listed twice in a partition file")
    if set(pmap) != set(tmap):
        only = sorted(set(pmap) ^ set(tmap))
        raise CliError(f"partitions cover different nodes, e.g. {only[0]!r}")
    return Partition([pmap[x] for x in pn]), Partition([tmap[x] for x in pn])


def cmd_eval(args, argv):
    pred, truth = _aligned(args.pred, args.truth)
    scores = compare(pred, truth)
    rep = ExperimentReport("eval", ["nmi", "nvi", "ari"], [[scores["nmi"], scores["nvi"], scores["ari"]]])
    _report(rep, args, argv)


def cmd_benchmark(args, argv):
    if args.model in PLANTED:
        pg: PlantedGraph = PLANTED[args.model](args.mu, seed=args.seed)
        g, truth = pg.graph, pg.truth
    else:
        g = null_graph(args.model, args.n, args.seed, mean_degree=args.mean_degree,
                       p_forward=args.p_forward)
        truth = None
    if not args.output:
        raise CliError("benchmark needs --output for the edge list")
    write_edge_list(g, args.output)
    if args.truth:
        if truth is None:
            raise CliError(f"model {args.model!r} has no planted groups")
        write_partition(g, truth, args.truth)
    sys.stdout.write(f"n={g.n} m={g.m}\n")


def cmd_linkpred(args, argv):
    g = read_graph(args.graph)
    cfg = HierarchyConfig(PropagationConfig(nu=args.nu))
    summary, rows = run_experiment(g, cfg, args.realizations, args.fraction, args.seed)
    rep = ExperimentReport("linkpred", ["scorer", "auc_mean", "auc_std", "realizations"])
    for name, (mean, std) in summary.items():
        rep.rows.append([name, mean, std, args.realizations])
    _report(rep, args, argv)


def cmd_mixing(args, argv):
    rep = mixing_curve(args.generator, args.mu, args.realizations, args.alg, args.seed,
                       nu=args.nu, alpha=args.alpha, threads=args.threads)
    _report(rep, args, argv)


def cmd_stability(args, argv):
    g = read_graph(args.graph)
    rep = stability(g, args.nu, args.runs, args.seed, algorithm=args.alg, threads=args.threads)
    _report(rep, args, argv)


def cmd_sizes(args, argv):
    g = read_graph(args.graph)
    rep = size_distribution(g, args.runs, args.seed, nu=args.nu, threads=args.threads)
    _report(rep, args, argv)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master random seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for batch runs")
    common.add_argument("-o", "--output", help="output file (default: standard output)")

    prop = _Parser(add_help=False)
    prop.add_argument("--nu", type=float, default=0.0, help="balancer steepness")
    prop.add_argument("--lam", type=float, default=0.5, help="balancer midpoint")
    prop.add_argument("--fixed-alpha", type=float, default=None,
                      help="use this alpha for every label instead of choosing it per label")
    prop.add_argument("--max-sweeps", type=int, default=1000)

    parser = _Parser(prog="grouprop", description="Community and module detection by label propagation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", parents=[common], help="size and clustering profile")
    p.add_argument("graph")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("detect", parents=[common, prop], help="flat group detection")
    p.add_argument("--alg", choices=("lpa", "gpa", "hpa"), default="hpa")
    p.add_argument("graph")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("hierarchy", parents=[common, prop], help="group hierarchy as JSON")
    p.add_argument("graph")
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("eval", parents=[common], help="compare two partition files")
    p.add_argument("pred")
    p.add_argument("truth")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("benchmark", parents=[common], help="generate a benchmark graph")
    p.add_argument("model", choices=sorted(PLANTED) + ["er", "ff"])
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--n", type=int, default=1000, help="nodes of er and ff graphs")
    p.add_argument("--mean-degree", type=float, default=16.0)
    p.add_argument("--p-forward", type=float, default=0.35)
    p.add_argument("-t", "--truth", help="planted partition output file")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("linkpred", parents=[common], help="link prediction AUC")
    p.add_argument("graph")
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--fraction", type=float, default=0.05)
    p.add_argument("--nu", type=float, default=0.0)
    p.set_defaults(func=cmd_linkpred)

    exp = sub.add_parser("experiment", help="batch experiments").add_subparsers(
        dest="experiment", required=True, parser_class=_Parser)

    p = exp.add_parser("mixing", parents=[common], help="NMI against mixing parameter")
    p.add_argument("--generator", choices=sorted(PLANTED), default="gn")
    p.add_argument("--mu", type=_floats, default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--alg", type=_names, default=["hpa"], help=f"comma separated, from {', '.join(ALGORITHMS)}")
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=1.0, help="alpha of the -fixed algorithms")
    p.set_defaults(func=cmd_mixing)

    p = exp.add_parser("stability", parents=[common], help="pairwise NVI across runs")
    p.add_argument("graph")
    p.add_argument("--nu", type=_floats, default=[0.0, 0.25, 2.0])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--alg", choices=ALGORITHMS, default="hpa")
    p.set_defaults(func=cmd_stability)

    p = exp.add_parser("sizes", parents=[common], help="group size distribution of the best hierarchy")
    p.add_argument("graph")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--nu", type=float, default=0.0)
    p.set_defaults(func=cmd_sizes)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        args.func(args, argv)
    except Exception as exc:  # every failure becomes a one-line diagnostic
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        sys.stderr.write(f"grouprop: error: {msg}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
