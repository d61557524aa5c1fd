"""Irregularity measures, threshold graphs and compression, extremal families,
and Pareto-extremal elements of the chromatic coefficient order."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np

from .chromatic import ChromaticEngine, chromatic_polynomial, coefficient_vector
from .graph import Graph, bits, block_decomposition, clique_number, complete_graph, degree_sequence
from .linalg import jacobi_eigh, jacobi_eigh_batch


# irregularity


def variance_irregularity(g: Graph) -> Fraction:
    """Variance of the degree sequence, exact."""
    d = degree_sequence(g)
    n = g.n
    return Fraction(n * sum(x * x for x in d) - sum(d) ** 2, n * n)


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


def spectral_radius(g: Graph) -> float:
    values, _ = jacobi_eigh(adjacency_matrix(g), tol=1e-12, max_sweeps=100)
    return float(values[0])


def spectral_irregularity(g: Graph) -> float:
    """Largest adjacency eigenvalue minus the average degree."""
    return spectral_radius(g) - 2.0 * g.m / g.n


def spectral_irregularities(graphs: Sequence[Graph], batch: int = 4096) -> list[float]:
    """Batched form of :func:`spectral_irregularity`; results match it exactly."""
    out: list[float] = [0.0] * len(graphs)
    by_order: dict[int, list[int]] = {}
    for i, g in enumerate(graphs):
        by_order.setdefault(g.n, []).append(i)
    for idx in by_order.values():
        for start in range(0, len(idx), batch):
            chunk = idx[start:start + batch]
            stack = np.stack([adjacency_matrix(graphs[i]) for i in chunk])
            values, _ = jacobi_eigh_batch(stack, tol=1e-12, max_sweeps=100)
            for i, lam in zip(chunk, values[:, 0]):
                g = graphs[i]
                out[i] = float(lam) - 2.0 * g.m / g.n
    return out


def degree_gap(g: Graph) -> int:
    d = degree_sequence(g)
    return max(d) - min(d)


# threshold graphs and compression


def is_threshold(g: Graph) -> bool:
    """Peel isolated or dominating vertices until nothing is left."""
    adj = list(g.adj)
    alive = (1 << g.n) - 1
    while alive:
        size = alive.bit_count()
        for v in bits(alive):
            d = (adj[v] & alive).bit_count()
            if d == 0 or d == size - 1:
                alive &= ~(1 << v)
                break
        else:
            return False
    return True


def is_threshold_by_degrees(g: Graph) -> bool:
    """Degree-sequence test: equality in every Erdos-Gallai inequality
    up to the Durfee number of the sorted sequence."""
    d = sorted(degree_sequence(g), reverse=True)
    # largest 1-based k with d_k >= k - 1
    k = 0
    for i, x in enumerate(d):
        if x >= i:
            k = i + 1
    lhs = 0
    for j in range(1, k + 1):
        lhs += d[j - 1]
        rhs = j * (j - 1) + sum(min(x, j) for x in d[j:])
        if lhs != rhs:
            return False
    return True


def compress(g: Graph, u: int, v: int) -> Graph:
    """Move every neighbour of ``u`` that is not already adjacent to ``v`` over to ``v``."""
    if u == v:
        raise ValueError("compression needs two distinct vertices")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("vertex out of range")
    adj = list(g.adj)
    moving = adj[u] & ~adj[v] & ~(1 << v)
    for x in bits(moving):
        adj[x] = (adj[x] & ~(1 << u)) | (1 << v)
    adj[u] &= ~moving
    adj[v] |= moving
    return Graph(g.n, tuple(adj))


@dataclass
class CompressionReport:
    compressed: Graph
    coefficients_ok: bool
    sigma_ok: bool
    eps_ok: bool
    sigma: tuple[Fraction, Fraction]
    eps: tuple[float, float]
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.coefficients_ok and self.sigma_ok and self.eps_ok


def verify_compression_monotonicity(
    g: Graph, u: int, v: int, engine: Optional[ChromaticEngine] = None
) -> CompressionReport:
    h = compress(g, u, v)
    pg = chromatic_polynomial(g, engine)
    ph = chromatic_polynomial(h, engine)
    violations = []
    coeff_ok = True
    for i, (a, b) in enumerate(zip(ph.coefficients, pg.coefficients)):
        if abs(a) > abs(b):
            coeff_ok = False
            violations.append(f"|c_{g.n - i}| rose from {abs(b)} to {abs(a)}")
    sg, sh = variance_irregularity(g), variance_irregularity(h)
    eg, eh = spectral_irregularity(g), spectral_irregularity(h)
    sigma_ok = sh >= sg
    eps_ok = eh >= eg - 1e-9
    if not sigma_ok:
        violations.append(f"variance irregularity fell from {sg} to {sh}")
    if not eps_ok:
        violations.append(f"spectral irregularity fell from {eg} to {eh}")
    return CompressionReport(h, coeff_ok, sigma_ok, eps_ok, (sg, sh), (eg, eh), violations)


# extremal constructions


def _clique_split(m: int) -> tuple[int, int]:
    """The unique ``(d, t)`` with ``m = C(d, 2) + t`` and ``0 <= t < d``."""
    d = 1
    while comb(d + 1, 2) <= m:
        d += 1
    return d, m - comb(d, 2)


def _strict_quasi_complete(n: int, m: int) -> Graph:
    d, t = _clique_split(m)
    if d > n or (d == n and t > 0):
        raise ValueError(f"no quasi-complete graph with n={n}, m={m}")
    edges = [(a, b) for a in range(d) for b in range(a + 1, d)]
    edges += [(i, d) for i in range(t)]
    return Graph.from_edges(n, edges)


def quasi_complete_parts(n: int, m: int) -> tuple[int, int, int]:
    """``(clique size, extra-vertex degree, pendants)`` of the connected quasi-complete graph.

    ``pendants > 0`` marks inputs where the clique-plus-one-vertex shape
    alone would leave vertices isolated; those hang as pendants off vertex 0.
    """
    if n < 1 or not (n - 1 <= m <= comb(n, 2)):
        raise ValueError(f"no connected graph with n={n}, m={m}")
    if m == comb(n, 2):
        return n, 0, 0
    d = 1
    while d + 1 < n and comb(d + 1, 2) + (n - d - 1) <= m:
        d += 1
    t = m - comb(d, 2) - (n - d - 1)
    return d, t, n - d - 1


def quasi_complete(n: int, m: int) -> Graph:
    d, t, pendants = quasi_complete_parts(n, m)
    edges = [(a, b) for a in range(d) for b in range(a + 1, d)]
    if d < n:
        edges += [(i, d) for i in range(t)]
        edges += [(0, d + 1 + j) for j in range(pendants)]
    return Graph.from_edges(n, edges)


def quasi_star(n: int, m: int) -> Graph:
    """Complement of the quasi-complete graph with the complementary edge count."""
    if n < 1 or not (n - 1 <= m <= comb(n, 2)):
        raise ValueError(f"no connected graph with n={n}, m={m}")
    return _strict_quasi_complete(n, comb(n, 2) - m).complement()


def turan(n: int, r: int) -> Graph:
    """Balanced complete ``r``-partite graph on ``n`` vertices."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    part = []
    q, extra = divmod(n, r)
    for i in range(r):
        part += [i] * (q + (1 if i < extra else 0))
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if part[a] != part[b]])


def in_family_J(g: Graph) -> bool:
    """Every block is a complete graph."""
    for block in block_decomposition(g).blocks:
        vs = sorted(block)
        size = len(vs)
        edges = sum((g.adj[v] & _mask(vs)).bit_count() for v in vs) // 2
        if edges != comb(size, 2):
            return False
    return True


def in_family_L(g: Graph) -> bool:
    """One block is complete or complete-minus-a-vertex in clique terms; the rest are bridges."""
    blocks = block_decomposition(g).blocks
    big = [b for b in blocks if len(b) > 2]
    if not big:
        return True
    if len(big) > 1:
        return False
    vs = sorted(big[0])
    return clique_number(g.induced(vs)) >= len(vs) - 1


def _mask(vs) -> int:
    out = 0
    for v in vs:
        out |= 1 << v
    return out


# chromatic poset


class PosetRelation(enum.Enum):
    LESS_OR_EQUAL = "<="
    GREATER_OR_EQUAL = ">="
    EQUAL = "="
    INCOMPARABLE = "||"


def poset_compare(qh: Sequence[int], qg: Sequence[int]) -> PosetRelation:
    qh, qg = tuple(qh), tuple(qg)
    if len(qh) != len(qg):
        raise ValueError(f"vector lengths differ: {len(qh)} vs {len(qg)}")
    le = all(a <= b for a, b in zip(qh, qg))
    ge = all(a >= b for a, b in zip(qh, qg))
    if le and ge:
        return PosetRelation.EQUAL
    if le:
        return PosetRelation.LESS_OR_EQUAL
    if ge:
        return PosetRelation.GREATER_OR_EQUAL
    return PosetRelation.INCOMPARABLE


@dataclass
class ExtremalReport:
    n: int
    m: int
    minimal_set: list[str]
    maximal_set: list[str]
    minimal_vectors: list[tuple[int, ...]]
    maximal_vectors: list[tuple[int, ...]]
    size: int


def _frontier(vectors: list[tuple[int, ...]], lower: bool) -> set[tuple[int, ...]]:
    """Pareto-minimal (``lower``) or maximal distinct vectors.

    A strict dominator always precedes its victim in lexicographic order
    (ascending for minima, descending for maxima), so one pass against the
    running frontier suffices.
    """
    front: list[tuple[int, ...]] = []
    for vec in sorted(set(vectors), reverse=not lower):
        if lower:
            dominated = any(all(a <= b for a, b in zip(f, vec)) for f in front)
        else:
            dominated = any(all(a >= b for a, b in zip(f, vec)) for f in front)
        if not dominated:
            front.append(vec)
    return set(front)


def pareto_extremal(group: Sequence[tuple[str, Sequence[int]]], n: int = 0, m: int = 0) -> ExtremalReport:
    """Chromatically minimal and maximal members of one ``(n, m)`` group."""
    vecs = [tuple(q) for _, q in group]
    lo = _frontier(vecs, lower=True)
    hi = _frontier(vecs, lower=False)
    return ExtremalReport(
        n=n,
        m=m,
        minimal_set=[key for key, q in zip((k for k, _ in group), vecs) if q in lo],
        maximal_set=[key for key, q in zip((k for k, _ in group), vecs) if q in hi],
        minimal_vectors=sorted(lo),
        maximal_vectors=sorted(hi),
        size=len(vecs),
    )


def coefficient_key(g: Graph, engine: Optional[ChromaticEngine] = None) -> tuple[int, ...]:
    p = chromatic_polynomial(g, engine)
    return coefficient_vector(p, p.degree).entries
