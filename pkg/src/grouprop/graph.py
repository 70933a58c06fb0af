"""Simple undirected graphs, node sets and partitions.

Graphs are stored in compressed sparse row form with sorted neighbor
lists. Node tokens read from files are mapped to contiguous indices in
order of first appearance; the original tokens are kept for output.
"""

from __future__ import annotations

import io
import os
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphFormatError(ValueError):
    """Raised for unparsable graph or partition input."""


class InputWarning(UserWarning):
    """Emitted for dropped self-loops and duplicate edges."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    indptr, indices : numpy.ndarray
        CSR adjacency. ``indices[indptr[i]:indptr[i + 1]]`` holds the
        sorted neighbors of node ``i``.
    names : tuple of str, optional
        External node tokens, one per internal index.
    """

    indptr: np.ndarray
    indices: np.ndarray
    names: tuple[str, ...] | None = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if self.names is not None:
            object.__setattr__(
                self, "_index", {name: i for i, name in enumerate(self.names)}
            )

    @classmethod
    def from_edges(cls, n: int, edges, names: Sequence[str] | None = None) -> Graph:
        """Build a graph on nodes ``0..n-1`` from an iterable or ``(k, 2)`` array of pairs.

        Self-loops and duplicates are removed silently; use
        :func:`load_edge_list` for input that should be reported.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0) if len(e) else e
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        if names is not None:
            names = tuple(str(x) for x in names)
            if len(names) != n:
                raise ValueError("names must have one entry per node")
        return cls(indptr, cols.astype(np.int64), names)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def edges(self) -> np.ndarray:
        """Return the ``(m, 2)`` array of edges with ``u < v``, sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def name(self, i: int) -> str:
        return self.names[i] if self.names is not None else str(i)

    def index(self, token) -> int:
        """Internal index of an external node token."""
        if self._index is not None:
            try:
                return self._index[str(token)]
            except KeyError:
                raise KeyError(f"unknown node {token!r}") from None
        i = int(token)
        if not 0 <= i < self.n:
            raise KeyError(f"unknown node {token!r}")
        return i

    def node_names(self) -> list[str]:
        return [self.name(i) for i in range(self.n)]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class NodeSet(frozenset):
    """Frozen set of node indices of some graph."""

    def __new__(cls, members: Iterable[int] = (), n: int | None = None):
        self = super().__new__(cls, (int(x) for x in members))
        if n is not None and any(not 0 <= x < n for x in self):
            raise ValueError("node set member out of range")
        return self


class Partition:
    """Assignment of every node to exactly one group.

    Labels are arbitrary hashable values; :attr:`groups` maps each label
    to the sorted list of its members.
    """

    def __init__(self, labels: Sequence):
        self.labels = list(labels)
        groups: dict = {}
        for i, label in enumerate(self.labels):
            groups.setdefault(label, []).append(i)
        self.groups = groups

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]], n: int) -> Partition:
        labels = [None] * n
        for g, members in enumerate(groups):
            for i in members:
                if labels[i] is not None:
                    raise ValueError(f"node {i} appears in more than one group")
                labels[i] = g
        missing = [i for i, x in enumerate(labels) if x is None]
        if missing:
            raise ValueError(f"nodes without a group: {missing[:10]}")
        return cls(labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.groups)

    def codes(self) -> np.ndarray:
        """Labels recoded to ``0..k-1`` in order of first appearance."""
        index = {label: c for c, label in enumerate(self.groups)}
        return np.fromiter((index[x] for x in self.labels), dtype=np.int64, count=self.n)

    def group_sizes(self) -> list[int]:
        return [len(v) for v in self.groups.values()]

    def canonical(self) -> Partition:
        """Same grouping relabeled ``0..k-1`` by smallest member."""
        return Partition(self.codes().tolist())

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and sorted(self.groups.values()) == sorted(
            other.groups.values()
        )

    def __repr__(self):
        return f"Partition(n={self.n}, groups={len(self)})"


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source.read()


def _warn(msg):
    warnings.warn(msg, InputWarning, stacklevel=3)


def _build(tokens_edges, order) -> Graph:
    index = {tok: i for i, tok in enumerate(order)}
    edges = []
    seen = set()
    for lineno, a, b in tokens_edges:
        u, v = index[a], index[b]
        if u == v:
            _warn(f"line {lineno}: self-loop on {a!r} dropped")
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            _warn(f"line {lineno}: duplicate edge {a!r}-{b!r} dropped")
            continue
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(len(order), edges, names=order)


def load_edge_list(source) -> Graph:
    """Parse a whitespace separated edge list.

    ``source`` is a path or a text file object. Lines starting
    with ``#`` or ``%`` are comments. A line holding a single token declares
    an isolated node. Self-loops and repeated edges are dropped with an
    :class:`InputWarning` each.
    """
    text = _read_text(source)
    order: dict[str, None] = {}
    pairs = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        toks = s.split()
        if len(toks) == 1:
            order.setdefault(toks[0])
            continue
        if len(toks) != 2:
            raise GraphFormatError(f"line {lineno}: expected 2 node tokens, got {len(toks)}")
        order.setdefault(toks[0])
        order.setdefault(toks[1])
        pairs.append((lineno, toks[0], toks[1]))
    if not order:
        raise GraphFormatError("empty edge list")
    return _build(pairs, list(order))


def load_pajek(source) -> Graph:
    """Read the ``*Vertices`` and ``*Edges`` sections of a Pajek ``.net`` file."""
    text = _read_text(source)
    section = None
    names: dict[str, str] = {}
    pairs = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s or s[0] == "%":
            continue
        if s[0] == "*":
            section = s.split()[0].lower()
            continue
        if section == "*vertices":
            head, _, rest = s.partition(" ")
            rest = rest.strip()
            if rest.startswith('"'):
                label = rest[1:].split('"', 1)[0]
            else:
                label = rest.split()[0] if rest else head
            names[head] = label
        elif section == "*edges":
            toks = s.split()
            if len(toks) < 2:
                raise GraphFormatError(f"line {lineno}: expected 2 vertex ids")
            for t in toks[:2]:
                if t not in names:
                    raise GraphFormatError(f"line {lineno}: undeclared vertex {t}")
            pairs.append((lineno, toks[0], toks[1]))
        elif section is not None:
            raise GraphFormatError(f"line {lineno}: unsupported section {section}")
    if not names:
        raise GraphFormatError("no vertices")
    g = _build(pairs, list(names))
    return Graph(g.indptr, g.indices, tuple(names[k] for k in names))


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        deg = g.degrees
        for i in np.flatnonzero(deg == 0):
            fh.write(f"{g.name(i)}\n")
        for u, v in g.edges():
            fh.write(f"{g.name(u)} {g.name(v)}\n")


def load_partition(source, g: Graph | None = None) -> tuple[list[str], list[str]] | Partition:
    """Read a ``node<TAB>label`` partition file.

    Without ``g`` the raw ``(nodes, labels)`` token lists are returned.
    With ``g`` a :class:`Partition` over ``g``'s nodes is returned and
    nodes missing from either side are reported in the error message.
    """
    text = _read_text(source)
    nodes, labels = [], []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        toks = s.split()
        if len(toks) != 2:
            raise GraphFormatError(f"line {lineno}: expected node and label")
        nodes.append(toks[0])
        labels.append(toks[1])
    if g is None:
        return nodes, labels
    return partition_from_tokens(g, nodes, labels)


def partition_from_tokens(g: Graph, nodes: Sequence[str], labels: Sequence[str]) -> Partition:
    known = set(g.node_names())
    given = dict(zip(nodes, labels))
    if len(given) != len(nodes):
        raise GraphFormatError("node listed twice in partition")
    extra = sorted(set(given) - known)
    missing = sorted(known - set(given))
    if extra or missing:
        parts = []
        if missing:
            parts.append(f"missing from partition: {', '.join(missing[:20])}")
        if extra:
            parts.append(f"not in graph: {', '.join(extra[:20])}")
        raise GraphFormatError("; ".join(parts))
    return Partition([given[g.name(i)] for i in range(g.n)])


def write_partition(g: Graph, part: Partition, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, label in enumerate(part.canonical().labels):
            fh.write(f"{g.name(i)}\t{label}\n")


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph on the nodes ``s`` and the map from its indices to ``g``'s."""
    nodes = np.unique(np.fromiter((int(x) for x in s), dtype=np.int64))
    if len(nodes) == 0:
        raise ValueError("empty node set")
    if nodes[0] < 0 or nodes[-1] >= g.n:
        raise ValueError("node set not contained in graph")
    local = np.full(g.n, -1, dtype=np.int64)
    local[nodes] = np.arange(len(nodes))
    starts, stops = g.indptr[nodes], g.indptr[nodes + 1]
    counts = stops - starts
    rows = np.repeat(np.arange(len(nodes)), counts)
    offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts)
    cols = local[g.indices[np.arange(len(rows)) + offsets]]
    keep = cols >= 0
    rows, cols = rows[keep], cols[keep]
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=len(nodes)), out=indptr[1:])
    names = tuple(g.names[i] for i in nodes) if g.names is not None else None
    return Graph(indptr, cols.astype(np.int64), names), nodes


def quotient_graph(g: Graph, part: Partition | Sequence[int] | np.ndarray) -> Graph:
    """One node per group; groups are adjacent iff some edge joins them.

    Group ``c`` of the result is the ``c``-th group of ``part`` in order of
    first appearance (see :meth:`Partition.codes`).
    """
    codes = part.codes() if isinstance(part, Partition) else np.asarray(part, dtype=np.int64)
    k = int(codes.max()) + 1 if len(codes) else 0
    e = g.edges()
    ce = codes[e] if len(e) else np.empty((0, 2), dtype=np.int64)
    return Graph.from_edges(k, ce)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise ValueError("graph has no nodes")
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(int(v))
    return count == g.n


def links_among_neighbors(g: Graph, i: int) -> int:
    """Number of edges with both endpoints in the neighborhood of ``i``."""
    nb = g.neighbors(i)
    total = 0
    for j in nb:
        # each edge among neighbors is seen from both endpoints
        total += len(np.intersect1d(g.neighbors(j), nb, assume_unique=True))
    return total // 2


def triangle_counts(g: Graph) -> np.ndarray:
    """Links among neighbors for every node at once."""
    a = g.adjacency()
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2
