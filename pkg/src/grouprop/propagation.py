"""Label propagation for community and module detection.

Three modes are supported. ``lpa`` is plain neighbor-majority label
propagation. ``fixed`` and ``auto`` run the general update in which a
label ``l`` scores

    alpha_l * sum_{j in N(i)} b_j p_j [l_j = l]
    + (1 - alpha_l) * sum_{j in N(i), k in N(j) \\ N(i), k != i} b_k q_k / k_j [l_k = l]

with balancers ``b`` taken from each node's position in the random sweep
order and defensive preferences ``p`` (neighbors) and ``q`` (nodes at
distance two). ``fixed`` uses one alpha for every label, ``auto`` picks
alpha per label from degree-corrected clustering when labels are created.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .clustering import ClusteringProfile, network_profile
from .graph import Graph, Partition

MODES = ("lpa", "fixed", "auto")


@dataclass(frozen=True)
class PropagationConfig:
    """Settings of a single propagation run.

    ``alpha`` is only read in ``fixed`` mode. ``include_self`` lets a node
    vote for itself through distance-two paths; it is off by default and
    exists for sensitivity checks.
    """

    mode: str = "auto"
    alpha: float = 1.0
    nu: float = 0.0
    lam: float = 0.5
    max_sweeps: int = 1000
    seed: int = 0
    include_self: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be positive")


@dataclass
class PropagationState:
    """Mutable state of a run: labels, preferences, balancers and per-label alpha."""

    labels: np.ndarray
    p: np.ndarray
    q: np.ndarray
    b: np.ndarray
    alpha: np.ndarray
    sweep_count: int = 0
    # distance-two bookkeeping, see _init_d2; empty when no label uses the module term
    _cn: np.ndarray = field(default=None, repr=False)
    _s2: np.ndarray = field(default=None, repr=False)
    _t2: np.ndarray = field(default=None, repr=False)

    @property
    def uses_modules(self) -> bool:
        return self._cn is not None


@dataclass(frozen=True)
class PropagationResult:
    partition: Partition
    sweeps: int
    converged: bool
    labels: np.ndarray = field(repr=False, default=None)


def assign_alpha(g: Graph, profile: ClusteringProfile, i: int) -> float:
    """Alpha of the label created at node ``i``: 1 for community, 0 for module, 0.5 otherwise."""
    di, D, r = profile.d[i], profile.D, profile.r
    if di >= r and D >= r:
        return 1.0
    if di < r and D < r:
        return 0.0
    return 0.5


def alpha_vector(g: Graph, profile: ClusteringProfile) -> np.ndarray:
    d, D, r = profile.d, profile.D, profile.r
    out = np.full(g.n, 0.5)
    if D >= r:
        out[d >= r] = 1.0
    else:
        out[d < r] = 0.0
    return out


def balancer(rank: int, n: int, nu: float, lam: float = 0.5) -> float:
    """Sigmoid weight of the node visited at position ``rank`` (1-based) of ``n``."""
    if not 1 <= rank <= n:
        raise ValueError("rank must lie in 1..n")
    return 1.0 / (1.0 + math.exp(-nu * (rank / n - lam)))


def init_state(g: Graph, cfg: PropagationConfig) -> PropagationState:
    n = g.n
    if cfg.mode == "auto" and g.m > 0:
        alpha = alpha_vector(g, network_profile(g))
    elif cfg.mode == "auto":
        alpha = np.full(n, 0.5)
    else:
        alpha = np.full(n, float(cfg.alpha))
    start = np.full(n, 1.0 / n) if n else np.zeros(0)
    b0 = 1.0 / (1.0 + math.exp(-cfg.nu * (0.5 - cfg.lam)))
    state = PropagationState(
        labels=np.arange(n, dtype=np.int64),
        p=start.copy(),
        q=start.copy(),
        b=np.full(n, b0),
        alpha=alpha,
    )
    if cfg.mode != "lpa" and (alpha < 1.0).any():
        state._cn = _common_neighbors(g.indptr, g.indices)
        state._s2 = np.zeros(n, dtype=np.int64)
        state._t2 = np.zeros(n, dtype=np.int64)
        _init_d2(g.indptr, g.indices, state.labels, state._cn, state._s2, state._t2)
    return state


@numba.njit(cache=True, nogil=True)
def _common_neighbors(indptr, indices):
    """Common-neighbor count of every adjacency entry, aligned with ``indices``."""
    n = len(indptr) - 1
    out = np.zeros(len(indices), dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for a in range(indptr[i], indptr[i + 1]):
            mark[indices[a]] = i
        for a in range(indptr[i], indptr[i + 1]):
            j = indices[a]
            c = 0
            for b in range(indptr[j], indptr[j + 1]):
                if mark[indices[b]] == i:
                    c += 1
            out[a] = c
    return out


@numba.njit(cache=True, nogil=True)
def _init_d2(indptr, indices, labels, cn, s2, t2):
    # s2[k]: sum over j in N(k) of j's neighbors labeled like k
    # t2[k]: sum over neighbors x labeled like k of common neighbors of k and x
    n = len(labels)
    for k in range(n):
        lk = labels[k]
        s = 0
        t = 0
        for a in range(indptr[k], indptr[k + 1]):
            j = indices[a]
            if labels[j] == lk:
                t += cn[a]
            for b in range(indptr[j], indptr[j + 1]):
                if labels[indices[b]] == lk:
                    s += 1
        s2[k] = s
        t2[k] = t


@numba.njit(cache=True, nogil=True)
def _relabel_d2(indptr, indices, labels, cn, s2, t2, x, old, new):
    """Update distance-two counts after node ``x`` moved from ``old`` to ``new``."""
    for a in range(indptr[x], indptr[x + 1]):
        j = indices[a]
        lj = labels[j]
        if lj == old:
            t2[j] -= cn[a]
        elif lj == new:
            t2[j] += cn[a]
        for b in range(indptr[j], indptr[j + 1]):
            k = indices[b]
            if k == x:
                continue
            lk = labels[k]
            if lk == old:
                s2[k] -= 1
            elif lk == new:
                s2[k] += 1
    s = 0
    t = 0
    for a in range(indptr[x], indptr[x + 1]):
        j = indices[a]
        if labels[j] == new:
            t += cn[a]
        for b in range(indptr[j], indptr[j + 1]):
            if labels[indices[b]] == new:
                s += 1
    s2[x] = s
    t2[x] = t


@numba.njit(cache=True, nogil=True)
def _label_scores(indptr, indices, deg, labels, p, q, b, alpha, i, lpa, modules, include_self,
                  nb_mark, stamp, lab_mark, score, cand):
    """Accumulate candidate label scores of node ``i``; returns the candidate count.

    Neighbors of ``i`` must already carry ``stamp`` in ``nb_mark``.
    """
    ncand = 0
    for a in range(indptr[i], indptr[i + 1]):
        j = indices[a]
        l = labels[j]
        if lab_mark[l] != stamp:
            lab_mark[l] = stamp
            score[l] = 0.0
            cand[ncand] = l
            ncand += 1
        if lpa:
            score[l] += 1.0
        else:
            score[l] += alpha[l] * b[j] * p[j]
    if lpa or not modules:
        return ncand
    for a in range(indptr[i], indptr[i + 1]):
        j = indices[a]
        kj = deg[j]
        for c in range(indptr[j], indptr[j + 1]):
            k = indices[c]
            if k == i and not include_self:
                continue
            if nb_mark[k] == stamp:
                continue
            l = labels[k]
            w = 1.0 - alpha[l]
            if w <= 0.0:
                continue
            if lab_mark[l] != stamp:
                lab_mark[l] = stamp
                score[l] = 0.0
                cand[ncand] = l
                ncand += 1
            score[l] += w * b[k] * q[k] / kj
    return ncand


@numba.njit(cache=True, nogil=True)
def _sweep(indptr, indices, labels, p, q, b, alpha, cn, s2, t2, nu, lam, lpa, modules,
           include_self, nb_mark, lab_mark, score, cand, counter):
    n = len(labels)
    deg = indptr[1:] - indptr[:-1]
    order = np.random.permutation(n)
    changed = 0
    for r in range(n):
        i = order[r]
        b[i] = 1.0 / (1.0 + math.exp(-nu * ((r + 1.0) / n - lam)))
        if deg[i] == 0:
            continue
        counter[0] += 1
        stamp = counter[0]
        for a in range(indptr[i], indptr[i + 1]):
            nb_mark[indices[a]] = stamp
        ncand = _label_scores(indptr, indices, deg, labels, p, q, b, alpha, i, lpa, modules,
                              include_self, nb_mark, stamp, lab_mark, score, cand)
        if ncand == 0:
            continue
        best = -1.0
        for c in range(ncand):
            if score[cand[c]] > best:
                best = score[cand[c]]
        tol = 1e-12 * best
        nties = 0
        chosen = cand[0]
        for c in range(ncand):
            if score[cand[c]] >= best - tol:
                nties += 1
                if np.random.randint(nties) == 0:
                    chosen = cand[c]
        old = labels[i]
        if chosen != old:
            changed += 1
            labels[i] = chosen
            if modules:
                _relabel_d2(indptr, indices, labels, cn, s2, t2, i, old, chosen)
        if lpa:
            continue
        li = labels[i]
        # community preference: random walk restricted to the adopted label
        num = 0.0
        for a in range(indptr[i], indptr[i + 1]):
            j = indices[a]
            if labels[j] != li:
                continue
            cnt = 0
            for c in range(indptr[j], indptr[j + 1]):
                if labels[indices[c]] == li:
                    cnt += 1
            if cnt > 0:
                num += p[j] / cnt
        if num > 0.0:
            p[i] = num
        if not modules:
            continue
        # module preference: the same over distance-two paths
        num = 0.0
        for a in range(indptr[i], indptr[i + 1]):
            j = indices[a]
            for c in range(indptr[j], indptr[j + 1]):
                k = indices[c]
                if k == i and not include_self:
                    continue
                if nb_mark[k] == stamp or labels[k] != li:
                    continue
                dk = s2[k] - t2[k]
                if not include_self:
                    dk -= deg[k]
                if dk > 0:
                    num += q[k] / dk
        if num > 0.0:
            q[i] = num
    return changed


@numba.njit(cache=True, nogil=True)
def _seed(seed):
    np.random.seed(seed)


class _Workspace:
    def __init__(self, n):
        self.nb_mark = np.full(n, -1, dtype=np.int64)
        self.lab_mark = np.full(n, -1, dtype=np.int64)
        self.score = np.zeros(n)
        self.cand = np.zeros(n, dtype=np.int64)
        self.counter = np.zeros(1, dtype=np.int64)


def sweep(g: Graph, state: PropagationState, cfg: PropagationConfig, ws=None) -> int:
    """One pass over all nodes in random order; returns the number of label changes.

    Randomness comes from the compiled generator seeded by :func:`run`
    (or :func:`seed_kernel` when driving sweeps by hand).
    """
    ws = ws or _Workspace(g.n)
    modules = state.uses_modules
    empty = np.zeros(0, dtype=np.int64)
    changed = _sweep(
        g.indptr, g.indices, state.labels, state.p, state.q, state.b, state.alpha,
        state._cn if modules else empty, state._s2 if modules else empty,
        state._t2 if modules else empty, float(cfg.nu), float(cfg.lam), cfg.mode == "lpa",
        modules, cfg.include_self, ws.nb_mark, ws.lab_mark, ws.score, ws.cand, ws.counter,
    )
    state.sweep_count += 1
    return int(changed)


def seed_kernel(seed: int) -> None:
    _seed(int(seed) % (2**32))


def label_score(g: Graph, state: PropagationState, cfg: PropagationConfig, i: int, label: int) -> float:
    """Score that ``label`` would receive at node ``i`` in the current state."""
    ws = _Workspace(g.n)
    ws.counter[0] = 1
    ws.nb_mark[g.neighbors(i)] = 1
    deg = g.degrees
    ncand = _label_scores(
        g.indptr, g.indices, deg, state.labels, state.p, state.q, state.b, state.alpha,
        i, cfg.mode == "lpa", state.uses_modules, cfg.include_self, ws.nb_mark, 1, ws.lab_mark,
        ws.score, ws.cand,
    )
    if label in ws.cand[:ncand]:
        return float(ws.score[label])
    return 0.0


def run(g: Graph, cfg: PropagationConfig = PropagationConfig()) -> PropagationResult:
    """Propagate labels from singletons until a sweep changes nothing."""
    state = init_state(g, cfg)
    ws = _Workspace(g.n)
    seed_kernel(cfg.seed)
    converged = False
    while state.sweep_count < cfg.max_sweeps:
        if sweep(g, state, cfg, ws) == 0:
            converged = True
            break
    labels = state.labels.copy()
    return PropagationResult(Partition(labels.tolist()), state.sweep_count, converged, labels)
