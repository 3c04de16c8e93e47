"""Clique complexes of small graphs and their GF(2) homology.

Ranks are computed by dense Gaussian elimination on machine-word bitsets
(columns are Python ints, one bit per row simplex), which is exact and fast
for the component sizes this package handles (<= 32 vertices).
"""

from dataclasses import dataclass

from .graphs import SmallGraph

DEFAULT_SIMPLEX_BUDGET = 200_000


class SimplexBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CliqueComplex:
    """Cliques of ``base`` by dimension: ``simplices[q]`` lists the (q+1)-cliques."""

    base: SmallGraph
    simplices: tuple  # tuple over dims of tuples of vertex tuples
    q_cap: int


def clique_complex(g: SmallGraph, q_cap: int,
                   budget: int = DEFAULT_SIMPLEX_BUDGET) -> CliqueComplex:
    """All cliques of g up to dimension q_cap + 1 (enough for Betti up to q_cap)."""
    if q_cap < 0:
        raise ValueError("q_cap must be >= 0")
    dims = _cliques_by_dim(g, q_cap + 1, budget)
    return CliqueComplex(base=g, simplices=tuple(tuple(d) for d in dims), q_cap=q_cap)


def _cliques_by_dim(g, max_dim, budget):
    nbr = g.neighbor_masks()
    dims = [[(v,) for v in range(g.n)]]
    total = g.n
    # extend each clique by a vertex above its max that neighbors all members
    current = [((v,), nbr[v]) for v in range(g.n)]
    for _ in range(max_dim):
        nxt = []
        for verts, common in current:
            cand = common >> (verts[-1] + 1)
            base = verts[-1] + 1
            while cand:
                low = cand & -cand
                v = base + low.bit_length() - 1
                cand ^= low
                nxt.append((verts + (v,), common & nbr[v]))
        if not nxt:
            break
        total += len(nxt)
        if total > budget:
            raise SimplexBudgetExceeded(
                f"clique complex exceeds the simplex budget of {budget}")
        dims.append([verts for verts, _ in nxt])
        current = nxt
    return dims


@dataclass(frozen=True)
class BoundaryMatrix:
    """GF(2) boundary map from (q+1)-simplices (columns) to q-simplices (rows)."""

    rows: tuple
    cols: tuple
    columns: tuple  # one int per column, bit r set when rows[r] is a face

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))


def boundary_matrix(cx: CliqueComplex, q: int) -> BoundaryMatrix:
    """Boundary of the (q+1)-simplices; q+1 beyond the stored dims gives zero columns."""
    rows = cx.simplices[q] if q < len(cx.simplices) else ()
    cols = cx.simplices[q + 1] if q + 1 < len(cx.simplices) else ()
    index = {s: r for r, s in enumerate(rows)}
    columns = []
    for simplex in cols:
        bits = 0
        for omit in range(len(simplex)):
            face = simplex[:omit] + simplex[omit + 1:]
            bits |= 1 << index[face]
        columns.append(bits)
    return BoundaryMatrix(rows=tuple(rows), cols=tuple(cols), columns=tuple(columns))


def rank_gf2(columns) -> int:
    """Rank of a set of bit-int columns over GF(2)."""
    pivots = []
    rank = 0
    for col in columns:
        cur = col
        for pivot in pivots:
            low = pivot & -pivot
            if cur & low:
                cur ^= pivot
        if cur:
            pivots.append(cur)
            rank += 1
    return rank


def kernel_basis_gf2(columns):
    """Kernel of the map sending unit vector e_c to columns[c], as column-bit ints."""
    pivots = []  # (reduced column, combination) pairs
    kernel = []
    for c, col in enumerate(columns):
        cur = col
        combo = 1 << c
        for pivot, pcombo in pivots:
            low = pivot & -pivot
            if cur & low:
                cur ^= pivot
                combo ^= pcombo
        if cur:
            pivots.append((cur, combo))
        else:
            kernel.append(combo)
    return kernel


def betti(g: SmallGraph, q: int) -> int:
    """q-th Betti number of the clique complex over GF(2)."""
    if q < 0:
        raise ValueError("q must be >= 0")
    cx = clique_complex(g, q)
    n_q = len(cx.simplices[q]) if q < len(cx.simplices) else 0
    if n_q == 0:
        return 0
    rank_down = 0 if q == 0 else rank_gf2(boundary_matrix(cx, q - 1).columns)
    rank_up = rank_gf2(boundary_matrix(cx, q).columns)
    return (n_q - rank_down) - rank_up


def cycle_space_dim(g: SmallGraph, q: int) -> int:
    """dim Z_q: an increasing functional of the graph (more cliques, larger kernel)."""
    cx = clique_complex(g, q)
    n_q = len(cx.simplices[q]) if q < len(cx.simplices) else 0
    if n_q == 0:
        return 0
    rank_down = 0 if q == 0 else rank_gf2(boundary_matrix(cx, q - 1).columns)
    return n_q - rank_down


def boundary_space_dim(g: SmallGraph, q: int) -> int:
    """dim B_q: also increasing in the graph."""
    cx = clique_complex(g, q)
    return rank_gf2(boundary_matrix(cx, q).columns)


def persistent_betti(g: SmallGraph, g_prime: SmallGraph, q: int) -> int:
    """Cycles of the clique complex of g alive in the complex of g_prime.

    dim Z_q(g) - dim(Z_q(g) /\\ B_q(g')), computed as rank[Z | B] - rank[B]
    inside the chain space of g'.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    if g.n != g_prime.n or (g.adj & g_prime.adj) != g.adj:
        raise ValueError("g must be a subgraph of g_prime on the same vertex set")
    cx_small = clique_complex(g, q)
    cx_big = clique_complex(g_prime, q)
    small_q = cx_small.simplices[q] if q < len(cx_small.simplices) else ()
    big_q = cx_big.simplices[q] if q < len(cx_big.simplices) else ()
    if not small_q:
        return 0
    big_index = {s: r for r, s in enumerate(big_q)}

    if q == 0:
        z_cols = [1 << big_index[s] for s in small_q]
    else:
        kernel = kernel_basis_gf2(boundary_matrix(cx_small, q - 1).columns)
        z_cols = []
        for combo in kernel:
            vec = 0
            c = combo
            while c:
                low = c & -c
                vec |= 1 << big_index[small_q[low.bit_length() - 1]]
                c ^= low
            z_cols.append(vec)

    b_cols = list(boundary_matrix(cx_big, q).columns)
    rank_b = rank_gf2(b_cols)
    rank_zb = rank_gf2(z_cols + b_cols)
    return rank_zb - rank_b


def euler_characteristic(g: SmallGraph) -> int:
    """Alternating sum of clique counts over every dimension."""
    dims = _cliques_by_dim(g, g.n - 1, DEFAULT_SIMPLEX_BUDGET)
    chi = 0
    for q, simps in enumerate(dims):
        chi += len(simps) if q % 2 == 0 else -len(simps)
    return chi
