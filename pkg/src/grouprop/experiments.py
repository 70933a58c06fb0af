"""Batch experiments behind the ``experiment`` subcommands, reported as CSV.

Every work unit (one realization of one grid cell, one run on a fixed
graph) draws its seeds from ``SeedSequence(seed, spawn_key=...)`` keyed by
its position in the grid, so results do not depend on the order in which
units finish or on the number of worker threads.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .generators import er_graph, forest_fire, gn2_benchmark, gn_benchmark, sbv_benchmark, sbx_benchmark
from .graph import Graph, Partition
from .hierarchy import (
    GroupHierarchy,
    HierarchyConfig,
    bottom_partition,
    group_sizes,
    hpa,
    log_likelihood,
)
from .metrics import ari, nmi, nvi
from .propagation import PropagationConfig, run

ALGORITHMS = ("lpa", "gpa", "hpa", "gpa-fixed", "hpa-fixed")
PLANTED = {"gn": gn_benchmark, "gn2": gn2_benchmark, "sbv": sbv_benchmark, "sbx": sbx_benchmark}


def derive_seed(seed: int, *key: int) -> int:
    """32-bit seed of the work unit identified by ``key``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


@dataclass
class ExperimentReport:
    """Tabular result with a provenance block.

    Parameters
    ----------
    schema : str
        Name of the report layout, e.g. ``"mixing"``.
    header : list of str
        Column names.
    rows : list of list
        Cells are strings or numbers; every row has ``len(header)`` cells.
    provenance : dict
        Command line, seed and code version. Written as ``# key: value``
        comment lines ahead of the CSV header.
    """

    schema: str
    header: list
    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(f"row {row!r} does not match {len(self.header)} columns")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema: {self.schema}\n")
        for key in sorted(self.provenance):
            buf.write(f"# {key}: {self.provenance[key]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_cell(x) for x in row])
        return buf.getvalue()


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(round(float(x), 12))
    return x


def detect(g: Graph, algorithm: str, seed: int, nu: float = 0.0, alpha: float = 1.0,
           lam: float = 0.5, max_sweeps: int = 1000):
    """Run one detection algorithm.

    Returns
    -------
    partition : Partition
        Flat groups (bottom groups of a hierarchy for the ``hpa`` variants).
    sweeps : int
    converged : bool
        Always ``True`` for hierarchies, whose runs may individually hit
        ``max_sweeps``.
    hierarchy : GroupHierarchy or None
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    base, _, variant = algorithm.partition("-")
    mode = "lpa" if base == "lpa" else ("fixed" if variant == "fixed" else "auto")
    cfg = PropagationConfig(mode=mode, alpha=alpha, nu=nu, lam=lam, max_sweeps=max_sweeps, seed=seed)
    if base == "hpa":
        h = hpa(g, HierarchyConfig(cfg))
        return bottom_partition(h), h.sweeps, True, h
    res = run(g, cfg)
    return res.partition, res.sweeps, res.converged, None


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def mixing_curve(generator: str, mus, realizations: int, algorithms, seed: int = 0,
                 nu: float = 0.0, alpha: float = 1.0, threads: int = 1) -> ExperimentReport:
    """Mean and standard deviation of NMI against the planted groups per ``(mu, algorithm)``.

    All algorithms of a realization see the same graph.
    """
    if generator not in PLANTED:
        raise ValueError(f"unknown generator {generator!r}; choose from {', '.join(PLANTED)}")
    mus = [float(x) for x in mus]
    if any(not 0.0 <= x <= 1.0 for x in mus):
        raise ValueError("mu values must lie in [0, 1]")
    if realizations < 1:
        raise ValueError("realizations must be positive")
    algorithms = list(algorithms)
    units = list(itertools.product(range(len(mus)), range(realizations)))

    def unit(key):
        mi, r = key
        pg = PLANTED[generator](mus[mi], seed=derive_seed(seed, 0, mi, r))
        alg_seed = derive_seed(seed, 1, mi, r)
        return [nmi(detect(pg.graph, a, alg_seed, nu=nu, alpha=alpha)[0], pg.truth) for a in algorithms]

    scores = np.array(_map(unit, units, threads)).reshape(len(mus), realizations, len(algorithms))
    rows = []
    for mi, mu in enumerate(mus):
        for ai, a in enumerate(algorithms):
            vals = scores[mi, :, ai]
            rows.append([mu, a, realizations, float(vals.mean()), float(vals.std())])
    return ExperimentReport("mixing", ["mu", "algorithm", "realizations", "nmi_mean", "nmi_std"], rows)


def stability(g: Graph, nus, runs: int, seed: int = 0, algorithm: str = "hpa",
              same_seed: bool = False, threads: int = 1) -> ExperimentReport:
    """Mean pairwise NVI between repeated runs and their mean sweep count, per ``nu``.

    ``same_seed`` gives every run the same seed, which must yield NVI 0.
    """
    if runs < 2:
        raise ValueError("runs must be at least 2")
    nus = [float(x) for x in nus]
    units = list(itertools.product(range(len(nus)), range(runs)))

    def unit(key):
        vi, r = key
        s = derive_seed(seed, vi, 0 if same_seed else r)
        part, sweeps, _, _ = detect(g, algorithm, s, nu=nus[vi])
        return part, sweeps

    results = _map(unit, units, threads)
    rows = []
    for vi, nu in enumerate(nus):
        chunk = results[vi * runs:(vi + 1) * runs]
        parts = [c[0] for c in chunk]
        dists = [nvi(a, b) for a, b in itertools.combinations(parts, 2)]
        sweeps = np.array([c[1] for c in chunk], dtype=float)
        rows.append([nu, algorithm, runs, float(np.mean(dists)), float(sweeps.mean())])
    return ExperimentReport("stability", ["nu", "algorithm", "runs", "nvi_mean", "sweeps_mean"], rows)


def best_hierarchy(g: Graph, runs: int, seed: int = 0, nu: float = 0.0, threads: int = 1) -> GroupHierarchy:
    """Hierarchy with the largest log-likelihood over ``runs`` seeded HPA runs.

    Ties keep the earliest run.
    """
    if runs < 1:
        raise ValueError("runs must be positive")

    def unit(r):
        return hpa(g, HierarchyConfig(PropagationConfig(nu=nu, seed=derive_seed(seed, r))))

    hs = _map(unit, range(runs), threads)
    lls = [log_likelihood(h) for h in hs]
    return hs[int(np.argmax(lls))]


def cumulative_sizes(sizes) -> list[tuple[int, int]]:
    """``(s, number of groups of size >= s)`` for every distinct size ``s``."""
    sizes = np.sort(np.asarray(sizes, dtype=np.int64))
    uniq = np.unique(sizes)
    counts = len(sizes) - np.searchsorted(sizes, uniq, side="left")
    return [(int(s), int(c)) for s, c in zip(uniq, counts)]


def size_distribution(g: Graph, runs: int, seed: int = 0, nu: float = 0.0,
                      threads: int = 1) -> ExperimentReport:
    """Cumulative group size distribution of the best hierarchy over ``runs`` runs."""
    h = best_hierarchy(g, runs, seed, nu, threads)
    rows = [[s, c] for s, c in cumulative_sizes(group_sizes(h))]
    rep = ExperimentReport("sizes", ["size", "groups_at_least"], rows)
    rep.provenance["log_likelihood"] = repr(round(log_likelihood(h), 9))
    return rep


def compare(pred: Partition, truth: Partition) -> dict:
    return {"nmi": nmi(pred, truth), "nvi": nvi(pred, truth), "ari": ari(pred, truth)}


def null_graph(kind: str, n: int, seed: int, mean_degree: float = 16.0, p_forward: float = 0.35) -> Graph:
    if kind == "er":
        return er_graph(n, mean_degree, seed)
    if kind == "ff":
        return forest_fire(n, p_forward, seed)
    raise ValueError(f"unknown null model {kind!r}")

