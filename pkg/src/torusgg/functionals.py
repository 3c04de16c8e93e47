"""Additive and multi-additive graph functionals, evaluated per connected component.

Additive functionals map one small graph to a value and are summed over the
components of a snapshot; multi-additive functionals take the nested snapshots
of one component at an ascending threshold vector.  Values are reals (linear
combinations force that) even though the builtins are integer-valued.
"""

from dataclasses import dataclass, field

import numpy as np

from . import homology
from .gilbert import FiltrationGraph, component_cores
from .graphs import (SmallGraph, canonical_code, complete_graph,
                     connected_component_count, count_embeddings, is_connected,
                     pair_index, parse_graph)

SINGLETON = SmallGraph(1, 0)


@dataclass(frozen=True)
class AdditiveFunctional:
    """Component-wise graph statistic; the snapshot value is the sum over components."""

    name: str
    evaluate: callable               # SmallGraph -> float
    increasing: bool = False         # snapshot process monotone in t
    growth_note: str = ""
    increasing_parts: tuple = ()     # (plus, minus) for difference-of-increasing form
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def value(self, n, adj):
        key = (n, adj)
        got = self._memo.get(key)
        if got is None:
            got = float(self.evaluate(SmallGraph(n, adj)))
            self._memo[key] = got
        return got


@dataclass(frozen=True)
class MultiFunctional:
    """m-variate statistic over nested graphs, additive over components of the last one."""

    name: str
    arity: int
    evaluate: callable               # tuple of nested SmallGraphs -> float
    dominated_constant: float = 1.0
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def value(self, n, masks):
        key = (n,) + tuple(masks)
        got = self._memo.get(key)
        if got is None:
            got = float(self.evaluate(tuple(SmallGraph(n, m) for m in masks)))
            self._memo[key] = got
        return got


# ---------------------------------------------------------------------------
# builtins

def component_count() -> AdditiveFunctional:
    return AdditiveFunctional(
        name="component_count",
        evaluate=lambda g: float(connected_component_count(g)),
        increasing=False,  # merges strictly decrease the snapshot value
        growth_note="1 per component")


def _connected_pattern(pattern):
    if not is_connected(pattern):
        raise ValueError("pattern must be connected for an additive count")
    return pattern


def subgraph_count(pattern: SmallGraph) -> AdditiveFunctional:
    pattern = _connected_pattern(pattern)
    return AdditiveFunctional(
        name=f"subgraph_count({pattern.n},{pattern.adj:#x})",
        evaluate=lambda g: float(count_embeddings(g, pattern, induced=False)),
        increasing=True,
        growth_note=f"<= |G|^{pattern.n}")


def induced_subgraph_count(pattern: SmallGraph) -> AdditiveFunctional:
    pattern = _connected_pattern(pattern)
    return AdditiveFunctional(
        name=f"induced_subgraph_count({pattern.n},{pattern.adj:#x})",
        evaluate=lambda g: float(count_embeddings(g, pattern, induced=True)),
        increasing=False,
        growth_note=f"<= |G|^{pattern.n}")


def simplex_count(q: int) -> AdditiveFunctional:
    pattern = complete_graph(q + 1)
    return AdditiveFunctional(
        name=f"simplex_count(q={q})",
        evaluate=lambda g: float(count_embeddings(g, pattern, induced=False)),
        increasing=True,
        growth_note=f"<= |G|^{q + 1}")


def betti(q: int) -> AdditiveFunctional:
    def _eval(g):
        # below the minimal support size 2(q+1) the value is 0 (q >= 1 only;
        # beta_0 is nonzero already on a vertex)
        if q >= 1 and g.n < 2 * (q + 1):
            return 0.0
        return float(homology.betti(g, q))

    return AdditiveFunctional(
        name=f"betti(q={q})",
        evaluate=_eval,
        increasing=False,
        growth_note=f"<= |G|^{q}",
        increasing_parts=(lambda g: float(homology.cycle_space_dim(g, q)),
                          lambda g: float(homology.boundary_space_dim(g, q))))


def euler_char() -> AdditiveFunctional:
    return AdditiveFunctional(
        name="euler_char",
        evaluate=lambda g: float(homology.euler_characteristic(g)),
        increasing=False,
        growth_note="alternating clique counts; may be negative")


def table_functional(name, values_by_code, default=0.0) -> AdditiveFunctional:
    """User-defined additive functional keyed by canonical code (graphs up to n = 8)."""
    table = dict(values_by_code)

    def _eval(g):
        if g.n > 8:
            return default
        return table.get(canonical_code(g), default)

    return AdditiveFunctional(name=name, evaluate=_eval,
                              growth_note="bounded table")


def persistent_betti(q: int) -> MultiFunctional:
    def _eval(graphs):
        g, gp = graphs
        if q >= 1 and gp.n < 2 * (q + 1):
            return 0.0
        return float(homology.persistent_betti(g, gp, q))

    return MultiFunctional(name=f"pbetti(q={q})", arity=2, evaluate=_eval,
                           dominated_constant=1.0)


def dynamic_subgraph_count(patterns) -> MultiFunctional:
    """Chains of nested motif copies: G'_1 <= ... <= G'_m with G'_i a copy of
    patterns[i] inside the i-th snapshot."""
    patterns = tuple(patterns)
    m = len(patterns)
    if m < 1:
        raise ValueError("need at least one pattern")
    _connected_pattern(patterns[-1])  # copies must sit inside one component

    def _eval(graphs):
        def rec(level, vmap, host_adj):
            pattern = patterns[level]
            host = SmallGraph(len(vmap), host_adj)
            if level == 0:
                return count_embeddings(host, pattern, induced=False)
            total = 0
            for verts_local in _subgraph_copies(host, pattern):
                sub_vmap = tuple(vmap[v] for v in verts_local)
                lower = 0
                for a, b in pattern.edges():
                    if graphs[level - 1].has_edge(sub_vmap[a], sub_vmap[b]):
                        lower |= 1 << pair_index(a, b)
                total += rec(level - 1, sub_vmap, lower)
            return total

        top = graphs[-1]
        return float(rec(m - 1, tuple(range(top.n)), top.adj))

    return MultiFunctional(
        name="dynsub(" + "|".join(f"{p.n},{p.adj:#x}" for p in patterns) + ")",
        arity=m, evaluate=_eval)


def diagonal_functional(mf: MultiFunctional) -> AdditiveFunctional:
    """g -> mf(g, ..., g); carries the support structure of a multi functional."""
    return AdditiveFunctional(
        name=f"diag({mf.name})",
        evaluate=lambda g: float(mf.evaluate((g,) * mf.arity)),
        growth_note="diagonal of a dominated multi functional")


def linear_combination(coefficients, parts) -> MultiFunctional:
    """alpha_1 f_1(G_1) + ... + alpha_m f_m(G_m) with nonnegative coefficients."""
    coefficients = tuple(float(a) for a in coefficients)
    parts = tuple(parts)
    if len(coefficients) != len(parts):
        raise ValueError("one coefficient per functional")
    if any(a < 0 for a in coefficients):
        raise ValueError("coefficients must be nonnegative")

    def _eval(graphs):
        return sum(a * f.evaluate(g) for a, f, g in zip(coefficients, parts, graphs))

    return MultiFunctional(name="linear_combination", arity=len(parts),
                           evaluate=_eval,
                           dominated_constant=max(max(coefficients, default=1.0), 1.0))


def _subgraph_copies(host, pattern):
    """Vertex tuples of the distinct subgraph copies of pattern in host.

    Copies are (vertex set, edge image) pairs counted once; the returned tuple
    maps pattern label -> host label for one representative embedding.
    """
    hn = host.neighbor_masks()
    pn = pattern.neighbor_masks()
    seen = set()
    mapping = [0] * pattern.n
    out = []

    def rec(step, used):
        if step == pattern.n:
            key = (frozenset(mapping), frozenset(
                frozenset((mapping[a], mapping[b])) for a, b in pattern.edges()))
            if key not in seen:
                seen.add(key)
                out.append(tuple(mapping))
            return
        allowed = ((1 << host.n) - 1) & ~used
        for prev in range(step):
            if (pn[step] >> prev) & 1:
                allowed &= hn[mapping[prev]]
        while allowed:
            low = allowed & -allowed
            mapping[step] = low.bit_length() - 1
            allowed ^= low
            rec(step + 1, used | low)

    rec(0, 0)
    return out


_BUILTINS = {
    "component_count": component_count,
    "subgraph_count": subgraph_count,
    "induced_subgraph_count": induced_subgraph_count,
    "simplex_count": simplex_count,
    "betti": betti,
    "euler_char": euler_char,
    "linear_combination": linear_combination,
    "dynamic_subgraph_count": dynamic_subgraph_count,
    "persistent_betti": persistent_betti,
}


def builtin(name: str, **params):
    """Registry entry point: builtin('betti', q=1), builtin('subgraph_count',
    pattern=g), ...; unknown names or malformed parameters raise."""
    factory = _BUILTINS.get(name)
    if factory is None:
        raise ValueError(f"unknown builtin functional {name!r}")
    try:
        return factory(**params)
    except TypeError as err:
        raise ValueError(f"bad parameters for {name!r}: {err}") from err


# ---------------------------------------------------------------------------
# CLI spec strings

def parse_functional(spec: str):
    """Functional spec strings: component_count, subgraph:0-1, induced:...,
    simplex:q=2, betti:q=1, euler, pbetti:q=1, dynsub:0-1|0-1,1-2."""
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    head = head.strip()
    arg = arg.strip()
    if head == "component_count":
        return component_count()
    if head == "subgraph":
        return subgraph_count(parse_graph(arg))
    if head == "induced":
        return induced_subgraph_count(parse_graph(arg))
    if head == "simplex":
        return simplex_count(_parse_q(arg))
    if head == "betti":
        return betti(_parse_q(arg))
    if head == "euler":
        return euler_char()
    if head == "pbetti":
        return persistent_betti(_parse_q(arg))
    if head == "dynsub":
        return dynamic_subgraph_count(parse_graph(tok) for tok in arg.split("|"))
    raise ValueError(f"unknown functional spec {spec!r}")


def _parse_q(arg):
    if not arg.startswith("q="):
        raise ValueError(f"expected q=<int>, got {arg!r}")
    q = int(arg[2:])
    if q < 0:
        raise ValueError("q must be >= 0")
    return q


# ---------------------------------------------------------------------------
# evaluation over filtrations

def evaluate_additive(f: AdditiveFunctional, filt: FiltrationGraph, t,
                      max_component_size=32) -> float:
    """Sum of f over the components of the snapshot at t."""
    cores, n_single = component_cores(filt, t, max_component_size)
    total = n_single * f.value(1, 0)
    for size, adj, _ in cores:
        total += f.value(size, adj)
    return total


def evaluate_additive_by_size(f, filt, t, max_component_size=32):
    """Size-restricted tallies: {component size: partial sum}."""
    cores, n_single = component_cores(filt, t, max_component_size)
    by_size = {}
    if n_single:
        by_size[1] = n_single * f.value(1, 0)
    for size, adj, _ in cores:
        by_size[size] = by_size.get(size, 0.0) + f.value(size, adj)
    return by_size


def evaluate_process(f: AdditiveFunctional, filt: FiltrationGraph, grid,
                     max_component_size=32) -> np.ndarray:
    """Pointwise evaluate_additive over an ascending grid."""
    grid = list(grid)
    if sorted(grid) != grid or any(not (0 < t <= 1) for t in grid):
        raise ValueError("grid must be ascending within (0, 1]")
    return np.array([evaluate_additive(f, filt, t, max_component_size)
                     for t in grid])


def evaluate_multi(f: MultiFunctional, filt: FiltrationGraph, t_vec,
                   max_component_size=32) -> float:
    """Sum over components G of the last snapshot of f(G at t_1, ..., G at t_m)."""
    t_vec = list(t_vec)
    if len(t_vec) != f.arity:
        raise ValueError(f"expected {f.arity} thresholds, got {len(t_vec)}")
    if sorted(t_vec) != t_vec or any(not (0 < t <= 1) for t in t_vec):
        raise ValueError("thresholds must be ascending within (0, 1]")
    cores, n_single = component_cores(filt, t_vec[-1], max_component_size)
    total = n_single * f.value(1, (0,) * f.arity)
    for size, adj, taus in cores:
        pairs = SmallGraph(size, adj).edges()
        masks = []
        for t in t_vec[:-1]:
            sub = 0
            for (a, b), tau in zip(pairs, taus):
                if tau <= t:
                    sub |= 1 << pair_index(a, b)
            masks.append(sub)
        masks.append(adj)
        total += f.value(size, tuple(masks))
    return total
