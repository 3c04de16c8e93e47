"""Radius-1 Gilbert graphs on torus clouds: edge filtrations and snapshot queries.

An edge {i, j} exists when the wrapped l-infinity distance is <= 1 and appears
at time tau = dist**d, so the graph thresholded at tau <= t equals the Gilbert
graph with connection radius t**(1/d).

The pair enumeration kernel is compiled (Cython) when available, with a
bit-identical numpy fallback selected at import.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import _pairs_py
from .graphs import SmallGraph, pair_index
from .rng import pow_int
from .torus import PointCloud, wrap_distance

try:
    from . import _pairsc as _compiled
except ImportError:  # pure-Python install
    _compiled = None

DEFAULT_MAX_COMPONENT = 32


class ComponentCapExceeded(RuntimeError):
    """A component grew beyond max_component_size (non-sparse parameter regime)."""


def pair_backend() -> str:
    return "compiled" if _compiled is not None else "numpy"


def wrapped_edges(points, box, cutoff=1.0, backend=None):
    """All pairs within wrapped l-inf distance cutoff as (i, j, dist) arrays, i < j."""
    backend = backend or pair_backend()
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel unavailable")
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.shape[0] < 2:
            e = np.zeros(0, dtype=np.int64)
            return e, e.copy(), np.zeros(0)
        order = np.argsort(pts[:, 0], kind="stable").astype(np.int64)
        pts_sorted = np.ascontiguousarray(pts[order])
        ib, jb, db, m = _compiled.sweep_pairs(pts_sorted, order, float(box), float(cutoff))
        return (np.frombuffer(ib, dtype=np.int64),
                np.frombuffer(jb, dtype=np.int64),
                np.frombuffer(db, dtype=np.float64))
    return _pairs_py.wrapped_edge_list(points, box, cutoff)


@dataclass(frozen=True)
class FiltrationGraph:
    """Edges (i, j, tau) with i < j, sorted ascending by (tau, i, j); tau in [0, 1]."""

    n: int
    i: np.ndarray
    j: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.i, dtype=np.int64)
        j = np.asarray(self.j, dtype=np.int64)
        tau = np.asarray(self.tau, dtype=np.float64)
        if not (i.shape == j.shape == tau.shape):
            raise ValueError("edge arrays must share a shape")
        if i.size:
            if int(j.max()) >= self.n or int(i.min()) < 0:
                raise ValueError("edge endpoints outside 0..n-1")
            if not (i < j).all():
                raise ValueError("edges must be stored with i < j")
            if tau.min() < 0 or tau.max() > 1.0:
                raise ValueError("tau must lie in [0, 1]")
            order = np.lexsort((j, i, tau))
            i, j, tau = i[order], j[order], tau[order]
            keys = set(zip(i.tolist(), j.tolist()))
            if len(keys) != i.size:
                raise ValueError("duplicate edges")
        for name, arr in (("i", i), ("j", j), ("tau", tau)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def edge_count(self) -> int:
        return int(self.tau.size)

    def edges_upto(self, t):
        """Count of edges with tau <= t (prefix of the sorted arrays)."""
        return int(np.searchsorted(self.tau, t, side="right"))

    def save_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "tau"])
            for a, b, t in zip(self.i.tolist(), self.j.tolist(), self.tau.tolist()):
                writer.writerow([a, b, repr(t)])


def build_filtration(cloud: PointCloud, backend=None) -> FiltrationGraph:
    """Edges at wrapped distance <= 1 with tau = dist**d."""
    d = cloud.window.d
    ii, jj, dist = wrapped_edges(cloud.points, cloud.window.b, 1.0, backend=backend)
    tau = pow_int(dist, d) if dist.size else dist
    return FiltrationGraph(n=len(cloud), i=ii, j=jj, tau=tau)


def brute_force_filtration(cloud: PointCloud) -> FiltrationGraph:
    """O(n^2) re-derivation from raw coordinates; oracle for build_filtration."""
    n = len(cloud)
    pts = cloud.points
    w = cloud.window
    ii, jj, taus = [], [], []
    for a in range(n):
        for b in range(a + 1, n):
            dist = wrap_distance(pts[a], pts[b], w)
            if dist <= 1.0:
                ii.append(a)
                jj.append(b)
                taus.append(pow_int(dist, w.d))
    return FiltrationGraph(n=n, i=np.array(ii, dtype=np.int64),
                           j=np.array(jj, dtype=np.int64),
                           tau=np.array(taus, dtype=np.float64))


@dataclass(frozen=True)
class Component:
    """One connected component: cloud vertex ids, abstract graph, per-edge taus."""

    vertex_ids: tuple
    graph: SmallGraph
    edge_taus: tuple  # aligned with graph.edges()


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _grouped_edges(filt, m, uf=None):
    """Union-find over the first m edges; returns {root: [(i, j, tau), ...]}."""
    uf = uf or _UnionFind()
    i, j, tau = filt.i, filt.j, filt.tau
    for k in range(m):
        uf.union(int(i[k]), int(j[k]))
    groups = {}
    for k in range(m):
        a = int(i[k])
        groups.setdefault(uf.find(a), []).append((a, int(j[k]), float(tau[k])))
    return uf, groups


def _component_from_edges(edge_list, max_component_size):
    verts = sorted({v for e in edge_list for v in e[:2]})
    if len(verts) > max_component_size:
        raise ComponentCapExceeded(
            f"component of size {len(verts)} exceeds max_component_size "
            f"{max_component_size}")
    local = {v: q for q, v in enumerate(verts)}
    adj = 0
    tau_by_pair = {}
    for a, b, t in edge_list:
        la, lb = local[a], local[b]
        if la > lb:
            la, lb = lb, la
        adj |= 1 << pair_index(la, lb)
        tau_by_pair[(la, lb)] = t
    graph = SmallGraph(len(verts), adj)
    taus = tuple(tau_by_pair[e] for e in graph.edges())
    return Component(vertex_ids=tuple(verts), graph=graph, edge_taus=taus)


def components_at(filt: FiltrationGraph, t,
                  max_component_size=DEFAULT_MAX_COMPONENT):
    """Partition at threshold t: components of edges with tau <= t plus isolated vertices."""
    if not (0.0 < t <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {t}")
    m = filt.edges_upto(t)
    _, groups = _grouped_edges(filt, m)
    comps = [_component_from_edges(e, max_component_size) for e in groups.values()]
    touched = {v for c in comps for v in c.vertex_ids}
    for v in range(filt.n):
        if v not in touched:
            comps.append(Component(vertex_ids=(v,), graph=SmallGraph(1, 0),
                                   edge_taus=()))
    comps.sort(key=lambda c: c.vertex_ids[0])
    return comps


def snapshot_sequence(filt: FiltrationGraph, grid,
                      max_component_size=DEFAULT_MAX_COMPONENT):
    """components_at over an ascending grid, sharing one incremental union-find pass."""
    grid = list(grid)
    if any(not (0.0 < t <= 1.0) for t in grid) or sorted(grid) != grid:
        raise ValueError("grid must be ascending within (0, 1]")
    uf = _UnionFind()
    i, j, tau = filt.i, filt.j, filt.tau
    out = []
    done = 0
    for t in grid:
        m = filt.edges_upto(t)
        for k in range(done, m):
            uf.union(int(i[k]), int(j[k]))
        done = m
        groups = {}
        for k in range(m):
            a = int(i[k])
            groups.setdefault(uf.find(a), []).append((a, int(j[k]), float(tau[k])))
        comps = [_component_from_edges(e, max_component_size)
                 for e in groups.values()]
        touched = {v for c in comps for v in c.vertex_ids}
        for v in range(filt.n):
            if v not in touched:
                comps.append(Component(vertex_ids=(v,), graph=SmallGraph(1, 0),
                                       edge_taus=()))
        comps.sort(key=lambda c: c.vertex_ids[0])
        out.append(comps)
    return out


def component_cores(filt: FiltrationGraph, t, max_component_size=DEFAULT_MAX_COMPONENT):
    """Fast path for evaluators: non-singleton components as raw pieces.

    Returns (cores, n_singletons) where each core is (size, adj_mask, edge_taus)
    with edge_taus aligned to SmallGraph(size, adj_mask).edges().
    """
    if not (0.0 < t <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {t}")
    m = filt.edges_upto(t)
    _, groups = _grouped_edges(filt, m)
    cores = []
    touched = 0
    for edge_list in groups.values():
        verts = sorted({v for e in edge_list for v in e[:2]})
        if len(verts) > max_component_size:
            raise ComponentCapExceeded(
                f"component of size {len(verts)} exceeds max_component_size "
                f"{max_component_size}")
        touched += len(verts)
        local = {v: q for q, v in enumerate(verts)}
        adj = 0
        tau_by_pair = {}
        for a, b, t_e in edge_list:
            la, lb = local[a], local[b]
            if la > lb:
                la, lb = lb, la
            adj |= 1 << pair_index(la, lb)
            tau_by_pair[(la, lb)] = t_e
        graph = SmallGraph(len(verts), adj)
        taus = tuple(tau_by_pair[e] for e in graph.edges())
        cores.append((len(verts), adj, taus))
    return cores, filt.n - touched
