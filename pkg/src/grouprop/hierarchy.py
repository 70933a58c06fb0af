"""Group hierarchies: top-down refinement, bottom-up agglomeration and likelihood.

A hierarchy is a rooted tree of :class:`Block` objects whose leaves are
node indices. Each block stores the links it accounts for (``m``) and the
number of node pairs it accounts for (``M``): a pair belongs to the block
that is the lowest common ancestor of its two leaves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import xlogy

from .graph import Graph, Partition, induced_subgraph, is_connected, quotient_graph
from .propagation import PropagationConfig, run


@dataclass(eq=False)
class Block:
    """Inner node of a hierarchy; children are blocks or leaf node indices."""

    children: list
    m: int = 0
    M: int = 0

    @property
    def p(self) -> float:
        return self.m / self.M if self.M else 0.0

    @property
    def is_bottom(self) -> bool:
        return all(not isinstance(c, Block) for c in self.children)

    def blocks(self):
        """Yield ``(depth, block)`` in preorder."""
        stack = [(0, self)]
        while stack:
            depth, b = stack.pop()
            yield depth, b
            for c in reversed(b.children):
                if isinstance(c, Block):
                    stack.append((depth + 1, c))

    def leaves(self) -> list[int]:
        """Leaf indices in preorder."""
        out = []
        stack = [self]
        while stack:
            item = stack.pop()
            if isinstance(item, Block):
                stack.extend(reversed(item.children))
            else:
                out.append(item)
        return out

    def size(self) -> int:
        return len(self.leaves())


@dataclass(frozen=True)
class HierarchyConfig:
    propagation: PropagationConfig = PropagationConfig()
    min_refine_size: int = 3

    def __post_init__(self):
        if self.min_refine_size < 2:
            raise ValueError("min_refine_size must be at least 2")


@dataclass(eq=False)
class GroupHierarchy:
    """A hierarchy over the nodes ``0..n-1`` of some graph.

    ``sweeps`` is the number of propagation sweeps on the longest chain of
    refinements that produced the bottom groups.
    """

    root: Block
    n: int
    sweeps: int = 0
    _anc: np.ndarray = field(default=None, repr=False)
    _blocks: list = field(default=None, repr=False)

    def blocks(self):
        return self.root.blocks()

    def _ancestry(self):
        # row d holds, for every leaf, the id of its ancestor block at depth d
        if self._anc is None:
            blocks, depth_of, parent_of = [], [], []
            leaf_parent = np.full(self.n, -1, dtype=np.int64)
            stack = [(self.root, -1, 0)]
            while stack:
                b, parent, d = stack.pop()
                bid = len(blocks)
                blocks.append(b)
                depth_of.append(d)
                parent_of.append(parent)
                for c in b.children:
                    if isinstance(c, Block):
                        stack.append((c, bid, d + 1))
                    else:
                        leaf_parent[c] = bid
            if (leaf_parent < 0).any():
                raise ValueError("hierarchy does not cover every node")
            depth_of = np.array(depth_of)
            parent_of = np.array(parent_of)
            height = int(depth_of.max()) + 1
            anc = np.full((height, self.n), -1, dtype=np.int64)
            cur = leaf_parent.copy()
            while True:
                live = cur >= 0
                if not live.any():
                    break
                anc[depth_of[cur[live]], np.flatnonzero(live)] = cur[live]
                cur[live] = parent_of[cur[live]]
            self._anc, self._blocks = anc, blocks
        return self._anc, self._blocks

    def lca(self, u, v) -> np.ndarray:
        """Block ids (into the internal block list) of lowest common ancestors."""
        anc, _ = self._ancestry()
        u = np.atleast_1d(np.asarray(u, dtype=np.int64))
        v = np.atleast_1d(np.asarray(v, dtype=np.int64))
        out = np.full(len(u), -1, dtype=np.int64)
        for d in range(anc.shape[0]):
            au, av = anc[d, u], anc[d, v]
            same = (au == av) & (au >= 0)
            out[same] = au[same]
        return out


def compute_block_stats(h: GroupHierarchy, g: Graph) -> GroupHierarchy:
    """Fill ``m`` and ``M`` of every block from the links of ``g``."""
    if g.n != h.n:
        raise ValueError("graph and hierarchy sizes differ")
    _, blocks = h._ancestry()
    e = g.edges()
    m = np.bincount(h.lca(e[:, 0], e[:, 1]), minlength=len(blocks)) if len(e) else np.zeros(len(blocks), int)
    sizes = {}
    for _, b in sorted(((d, b) for d, b in h.blocks()), key=lambda x: -x[0]):
        parts = [sizes[id(c)] if isinstance(c, Block) else 1 for c in b.children]
        total = sum(parts)
        sizes[id(b)] = total
        b.M = (total * total - sum(x * x for x in parts)) // 2
    for bid, b in enumerate(blocks):
        b.m = int(m[bid])
    return h


def flat_hierarchy(g: Graph, group=None) -> GroupHierarchy:
    """Single block over ``group`` (all nodes by default) with its induced statistics."""
    if group is None:
        sub = g
    else:
        members = sorted(int(x) for x in group)
        if not members:
            raise ValueError("empty group")
        sub, _ = induced_subgraph(g, members)
    k = sub.n
    root = Block(list(range(k)), m=sub.m, M=k * (k - 1) // 2)
    return GroupHierarchy(root, k)


def log_likelihood(h: GroupHierarchy) -> float:
    """Log-likelihood of the observed links under independent Bernoulli blocks."""
    total = 0.0
    for _, b in h.blocks():
        if b.M == 0:
            continue
        p = b.m / b.M
        total += xlogy(b.m, p) + xlogy(b.M - b.m, 1.0 - p)
    return float(total)


def _flat_loglik(m: int, M: int) -> float:
    if M == 0:
        return 0.0
    p = m / M
    return float(xlogy(m, p) + xlogy(M - m, 1.0 - p))


def _relabel(b: Block, idx: np.ndarray) -> Block:
    kids = [_relabel(c, idx) if isinstance(c, Block) else int(idx[c]) for c in b.children]
    return Block(kids, b.m, b.M)


def _derived_seed(seed: int, key: tuple) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _discover(g: Graph, cfg: HierarchyConfig, key: tuple) -> tuple[Block, int]:
    pcfg = replace(cfg.propagation, seed=_derived_seed(cfg.propagation.seed, key))
    res = run(g, pcfg)
    groups = list(res.partition.groups.values())
    if len(groups) == 1:
        return Block(list(range(g.n)), g.m, g.n * (g.n - 1) // 2), res.sweeps
    groups.sort(key=lambda x: x[0])
    children = []
    deepest = 0
    for gi, members in enumerate(groups):
        child = None
        if len(members) >= cfg.min_refine_size:
            sub, idx = induced_subgraph(g, members)
            if is_connected(sub):
                sub_root, sub_sweeps = _discover(sub, cfg, key + (0, gi))
                deepest = max(deepest, sub_sweeps)
                refined = compute_block_stats(GroupHierarchy(sub_root, sub.n), sub)
                flat = _flat_loglik(sub.m, sub.n * (sub.n - 1) // 2)
                if log_likelihood(refined) > flat:
                    child = _relabel(sub_root, idx)
        if child is None:
            child = Block(list(members))
        children.append(child)
    return Block(children), res.sweeps + deepest


def discover_hierarchy(g: Graph, cfg: HierarchyConfig = HierarchyConfig()) -> GroupHierarchy:
    """Detect groups, then refine each group recursively when that raises the likelihood."""
    if g.n == 0:
        raise ValueError("graph has no nodes")
    root, sweeps = _discover(g, cfg, ())
    return compute_block_stats(GroupHierarchy(root, g.n, sweeps), g)


def _graft(b: Block, tops: list) -> Block:
    kids = [_graft(c, tops) if isinstance(c, Block) else tops[c] for c in b.children]
    # a super-group holding one top group would only wrap it
    if len(kids) == 1:
        return kids[0]
    return Block(kids)


def _hpa(g: Graph, cfg: HierarchyConfig, key: tuple) -> tuple[Block, int]:
    root, sweeps = _discover(g, cfg, key)
    if root.is_bottom:
        return root, sweeps
    tops = root.children
    if len(tops) == g.n:
        return root, sweeps
    codes = np.empty(g.n, dtype=np.int64)
    for c, top in enumerate(tops):
        codes[top.leaves()] = c
    q = quotient_graph(g, codes)
    super_root, _ = _hpa(q, cfg, key + (1,))
    return _graft(super_root, tops), sweeps


def hpa(g: Graph, cfg: HierarchyConfig = HierarchyConfig()) -> GroupHierarchy:
    """Full group hierarchy: discovery on ``g`` then agglomeration of its top groups."""
    if g.n == 0:
        raise ValueError("graph has no nodes")
    root, sweeps = _hpa(g, cfg, ())
    return compute_block_stats(GroupHierarchy(root, g.n, sweeps), g)


def bottom_partition(h: GroupHierarchy) -> Partition:
    labels = [None] * h.n
    gid = 0
    for _, b in h.blocks():
        direct = [c for c in b.children if not isinstance(c, Block)]
        if not direct:
            continue
        if b.is_bottom:
            for leaf in direct:
                labels[leaf] = gid
            gid += 1
        else:
            for leaf in direct:
                labels[leaf] = gid
                gid += 1
    return Partition(labels).canonical()


def nontrivial_levels(h: GroupHierarchy) -> int:
    depths = set()
    for depth, b in h.blocks():
        if sum(isinstance(c, Block) for c in b.children) >= 2:
            depths.add(depth)
    return len(depths)


def lca_probability(h: GroupHierarchy, u: int, v: int) -> float:
    return float(pair_probabilities(h, [(u, v)])[0])


def pair_probabilities(h: GroupHierarchy, pairs) -> np.ndarray:
    """Link probability of each pair: ``p`` of the pair's lowest common ancestor."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= h.n):
        bad = pairs[(pairs < 0) | (pairs >= h.n)]
        raise KeyError(f"node {int(bad[0])} is not a leaf of the hierarchy")
    if (pairs[:, 0] == pairs[:, 1]).any():
        raise ValueError("pair endpoints must differ")
    _, blocks = h._ancestry()
    probs = np.array([b.p for b in blocks])
    return probs[h.lca(pairs[:, 0], pairs[:, 1])]


def group_sizes(h: GroupHierarchy) -> list[int]:
    """Leaf counts of all blocks."""
    sizes = {}
    for _, b in sorted(h.blocks(), key=lambda x: -x[0]):
        sizes[id(b)] = sum(sizes[id(c)] if isinstance(c, Block) else 1 for c in b.children)
    return sorted(sizes.values())


def to_dict(h: GroupHierarchy, names=None) -> dict:
    """Nested document with a fixed key order; leaves are node names."""

    def name(i):
        return names[i] if names is not None else i

    def rec(b, depth):
        kids = [rec(c, depth + 1) if isinstance(c, Block) else name(c) for c in b.children]
        size = sum(k["size"] if isinstance(k, dict) else 1 for k in kids)
        return {"depth": depth, "size": size, "m": b.m, "M": b.M, "p": b.p, "children": kids}

    return rec(h.root, 0)


def from_dict(doc: dict, index=None) -> GroupHierarchy:
    def rec(d):
        kids = [rec(c) if isinstance(c, dict) else (index[c] if index else int(c)) for c in d["children"]]
        return Block(kids, int(d["m"]), int(d["M"]))

    root = rec(doc)
    return GroupHierarchy(root, doc["size"])


def dumps(h: GroupHierarchy, names=None) -> str:
    return json.dumps(to_dict(h, names), indent=1)


def summary(h: GroupHierarchy) -> dict:
    return {
        "log_likelihood": log_likelihood(h),
        "levels": nontrivial_levels(h),
        "groups": len(bottom_partition(h)),
        "blocks": sum(1 for _ in h.blocks()),
        "sweeps": h.sweeps,
    }
