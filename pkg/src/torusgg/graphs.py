"""Small labeled graphs on bitmask adjacency: canonical codes, enumeration,
automorphisms and subgraph-copy counts.

Vertex labels are 0..n-1; the adjacency lives in one integer with bit
j*(j-1)/2 + i set for an edge {i, j}, i < j.  Canonical codes are minimal
adjacency bitstrings over relabelings, so equal codes mean isomorphic graphs.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_VERTICES = 32        # component currency cap
MAX_CANONICAL = 12       # canonical_code / automorphism_count cap
_EXHAUSTIVE_MAX = 8      # full n! table search up to here, pruned search above
MAX_ENUMERATE_K = 6


def pair_index(i: int, j: int) -> int:
    """Bit position of the unordered pair {i, j}."""
    if i == j:
        raise ValueError("self-loops are not representable")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@dataclass(frozen=True, slots=True)
class SmallGraph:
    """Labeled graph on {0..n-1} with adjacency bitmask ``adj``."""

    n: int
    adj: int = 0

    def __post_init__(self):
        if not (1 <= self.n <= MAX_VERTICES):
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        npairs = self.n * (self.n - 1) // 2
        if not (0 <= self.adj < (1 << npairs) if npairs else self.adj == 0):
            raise ValueError("adjacency mask has bits outside the vertex range")

    @property
    def num_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def edge_count(self) -> int:
        return bin(self.adj).count("1")

    def has_edge(self, i, j) -> bool:
        return bool((self.adj >> pair_index(i, j)) & 1)

    def with_edge(self, i, j) -> "SmallGraph":
        return SmallGraph(self.n, self.adj | (1 << pair_index(i, j)))

    def edges(self):
        """Sorted list of (i, j) pairs with i < j."""
        out = []
        m = self.adj
        for j in range(1, self.n):
            base = j * (j - 1) // 2
            for i in range(j):
                if (m >> (base + i)) & 1:
                    out.append((i, j))
        out.sort()
        return out

    def neighbor_masks(self):
        """Per-vertex neighbor bitmasks (bit u set when u ~ v)."""
        masks = [0] * self.n
        for i, j in self.edges():
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def degree(self, v) -> int:
        return bin(self.neighbor_masks()[v]).count("1")


def from_edges(edges, n=None) -> SmallGraph:
    edges = list(edges)
    max_label = max((max(e) for e in edges), default=-1)
    if n is None:
        n = max_label + 1
    if n <= max_label:
        raise ValueError(f"vertex count {n} below max label {max_label}")
    adj = 0
    for i, j in edges:
        adj |= 1 << pair_index(i, j)
    return SmallGraph(n, adj)


def complete_graph(n) -> SmallGraph:
    return SmallGraph(n, (1 << (n * (n - 1) // 2)) - 1)


def path_graph(n) -> SmallGraph:
    return from_edges([(i, i + 1) for i in range(n - 1)], n=n)


def cycle_graph(n) -> SmallGraph:
    return from_edges([(i, (i + 1) % n) for i in range(n)], n=n)


def relabel(g: SmallGraph, perm) -> SmallGraph:
    """Image of g under the relabeling old -> perm[old]."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of range(n)")
    adj = 0
    m = g.adj
    for j in range(1, g.n):
        base = j * (j - 1) // 2
        for i in range(j):
            if (m >> (base + i)) & 1:
                adj |= 1 << pair_index(perm[i], perm[j])
    return SmallGraph(g.n, adj)


def connected_component_count(g: SmallGraph) -> int:
    nbr = g.neighbor_masks()
    unseen = (1 << g.n) - 1
    count = 0
    while unseen:
        count += 1
        reach = unseen & -unseen
        frontier = reach
        while frontier:
            nxt = 0
            v = frontier
            while v:
                low = v & -v
                nxt |= nbr[low.bit_length() - 1]
                v ^= low
            frontier = nxt & ~reach
            reach |= nxt
        unseen &= ~reach
    return count


def is_connected(g: SmallGraph) -> bool:
    return connected_component_count(g) == 1


# ---------------------------------------------------------------------------
# canonical codes

def _bit_weights(npairs):
    # pair index 0 is the most significant bit: integer order == lexicographic
    # order of the adjacency bitstring read in pair-index order
    return (1 << np.arange(npairs - 1, -1, -1, dtype=np.int64)) if npairs else np.zeros(0, np.int64)


def _identity_code(g: SmallGraph) -> int:
    np_ = g.num_pairs
    code = 0
    for idx in range(np_):
        code = (code << 1) | ((g.adj >> idx) & 1)
    return code


@lru_cache(maxsize=None)
def _perm_tables(n):
    """(index map, row count): map[p, new_pair] = old_pair for every permutation."""
    perms = list(itertools.permutations(range(n)))
    npairs = n * (n - 1) // 2
    table = np.empty((len(perms), npairs), dtype=np.int32)
    for p, perm in enumerate(perms):
        for j in range(1, n):
            for i in range(j):
                table[p, pair_index(i, j)] = pair_index(perm[i], perm[j])
    return table


def _bits_vector(g):
    bits = np.zeros(g.num_pairs, dtype=np.int64)
    m = g.adj
    idx = 0
    while m:
        if m & 1:
            bits[idx] = 1
        m >>= 1
        idx += 1
    return bits


def canonical_code(g: SmallGraph) -> int:
    """Minimal adjacency bitstring over all relabelings (isomorphism invariant)."""
    if g.n > MAX_CANONICAL:
        raise ValueError(f"canonical_code supports n <= {MAX_CANONICAL}, got {g.n}")
    if g.n == 1:
        return 0
    if g.n <= _EXHAUSTIVE_MAX:
        table = _perm_tables(g.n)
        bits = _bits_vector(g)
        codes = bits[table] @ _bit_weights(g.num_pairs)
        return int(codes.min())
    return _canonical_code_pruned(g)


def _canonical_code_pruned(g):
    n = g.n
    npairs = g.num_pairs
    nbr = g.neighbor_masks()
    deg = [bin(m).count("1") for m in nbr]
    best = None

    def rec(assigned, used, code, nbits):
        nonlocal best
        p = len(assigned)
        if p == n:
            if best is None or code < best:
                best = code
            return
        cands = []
        for v in range(n):
            if (used >> v) & 1:
                continue
            col = 0
            for q in assigned:
                col = (col << 1) | ((nbr[v] >> q) & 1)
            cands.append((col, deg[v], v))
        cands.sort()
        for col, _, v in cands:
            new_code = (code << p) | col
            nb = nbits + p
            if best is not None and new_code > (best >> (npairs - nb)):
                continue
            rec(assigned + [v], used | (1 << v), new_code, nb)

    rec([], 0, 0, 0)
    return best


def automorphism_count(g: SmallGraph) -> int:
    """Number of permutations fixing the adjacency."""
    if g.n > MAX_CANONICAL:
        raise ValueError(f"automorphism_count supports n <= {MAX_CANONICAL}, got {g.n}")
    if g.n == 1:
        return 1
    if g.n <= _EXHAUSTIVE_MAX:
        table = _perm_tables(g.n)
        bits = _bits_vector(g)
        codes = bits[table] @ _bit_weights(g.num_pairs)
        return int((codes == _identity_code(g)).sum())
    return _automorphism_count_pruned(g)


def _automorphism_count_pruned(g):
    n = g.n
    nbr = g.neighbor_masks()
    deg = [bin(m).count("1") for m in nbr]
    count = 0

    def rec(assigned, used):
        nonlocal count
        p = len(assigned)
        if p == n:
            count += 1
            return
        want = 0
        for q in range(p):
            want = (want << 1) | ((nbr[p] >> q) & 1)
        # want is the column of vertex p against 0..p-1 under the identity;
        # an automorphism must reproduce it exactly
        for v in range(n):
            if (used >> v) & 1 or deg[v] != deg[p]:
                continue
            col = 0
            for q in assigned:
                col = (col << 1) | ((nbr[v] >> q) & 1)
            if col == want:
                rec(assigned + [v], used | (1 << v))

    rec([], 0)
    return count


# ---------------------------------------------------------------------------
# enumeration

@lru_cache(maxsize=None)
def enumerate_connected(k: int):
    """All connected labeled graphs on {0..k}, each exactly once.

    Brute force over the 2^(k(k+1)/2) adjacency masks (vectorized); heavy but
    allowed up to k = 6.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > MAX_ENUMERATE_K:
        raise ValueError(f"enumerate_connected supports k <= {MAX_ENUMERATE_K}, got {k}")
    n = k + 1
    if n == 1:
        return (SmallGraph(1, 0),)
    npairs = n * (n - 1) // 2
    masks = np.arange(1 << npairs, dtype=np.int64)
    nbr = np.zeros((masks.size, n), dtype=np.int32)
    for j in range(1, n):
        for i in range(j):
            b = ((masks >> pair_index(i, j)) & 1).astype(np.int32)
            nbr[:, i] |= b << j
            nbr[:, j] |= b << i
    reach = np.ones(masks.size, dtype=np.int32)
    for _ in range(n):
        for v in range(n):
            sel = (reach >> v) & 1
            reach |= nbr[:, v] * sel
    keep = masks[reach == (1 << n) - 1]
    return tuple(SmallGraph(n, int(m)) for m in keep)


# ---------------------------------------------------------------------------
# subgraph copies

def count_embeddings(g: SmallGraph, pattern: SmallGraph, induced: bool = False) -> int:
    """Copies of ``pattern`` in ``g``, counted once per subgraph (not per embedding).

    Non-induced copies need pattern edges present; induced copies also need
    pattern non-edges absent.
    """
    if g.n > MAX_VERTICES:
        raise ValueError(f"host graph too large: {g.n} > {MAX_VERTICES}")
    if pattern.n > g.n:
        return 0
    gn = g.neighbor_masks()
    pn = pattern.neighbor_masks()
    gdeg = [bin(m).count("1") for m in gn]
    pdeg = [bin(m).count("1") for m in pn]

    # map pattern vertices in an order that keeps each new vertex attached to
    # the mapped prefix when possible
    order = []
    seen = 0
    for _ in range(pattern.n):
        pick = None
        for v in range(pattern.n):
            if (seen >> v) & 1:
                continue
            if pick is None or (pn[v] & seen and not (pn[pick] & seen)):
                pick = v
            elif bool(pn[v] & seen) == bool(pn[pick] & seen) and pdeg[v] > pdeg[pick]:
                pick = v
        order.append(pick)
        seen |= 1 << pick

    mapping = [0] * pattern.n
    full = (1 << g.n) - 1
    embeddings = 0

    def rec(step, used):
        nonlocal embeddings
        if step == len(order):
            embeddings += 1
            return
        pv = order[step]
        allowed = full & ~used
        for prev in order[:step]:
            if (pn[pv] >> prev) & 1:
                allowed &= gn[mapping[prev]]
            elif induced:
                allowed &= ~gn[mapping[prev]]
        while allowed:
            low = allowed & -allowed
            gv = low.bit_length() - 1
            allowed ^= low
            if not induced and gdeg[gv] < pdeg[pv]:
                continue
            mapping[pv] = gv
            rec(step + 1, used | low)

    rec(0, 0)
    return embeddings // automorphism_count(pattern)


# ---------------------------------------------------------------------------
# text format: comma-separated edge tokens "i-j", optional "n=<int>;" prefix

def parse_graph(text: str) -> SmallGraph:
    text = text.strip()
    n = None
    if text.startswith("n="):
        head, _, rest = text.partition(";")
        n = int(head[2:])
        text = rest.strip()
    if not text:
        if n is None:
            raise ValueError("empty graph string needs an n=<int>; prefix")
        return SmallGraph(n, 0)
    edges = []
    for token in text.split(","):
        token = token.strip()
        a, sep, b = token.partition("-")
        if not sep:
            raise ValueError(f"bad edge token {token!r} (expected i-j)")
        i, j = int(a), int(b)
        if i == j:
            raise ValueError(f"self-loop {token!r} not allowed")
        edges.append((i, j))
    return from_edges(edges, n=n)


def format_graph(g: SmallGraph) -> str:
    edges = g.edges()
    touched = set()
    for i, j in edges:
        touched.add(i)
        touched.add(j)
    body = ",".join(f"{i}-{j}" for i, j in edges)
    if len(touched) < g.n or not edges:
        return f"n={g.n};{body}" if body else f"n={g.n};"
    return body
