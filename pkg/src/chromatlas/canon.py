"""Canonical labeling by partition refinement and individualisation search.

The search tree is the usual one: refine an ordered partition to an
equitable one, individualise each vertex of the first smallest non-singleton
cell in turn, and recurse. Leaves are discrete partitions; each gives a
relabeled adjacency code and the largest code wins. Branches are pruned with
automorphisms, seeded with the transpositions of twin vertices (which alone
collapse complete and complete multipartite graphs) and extended with every
automorphism found when two leaves produce the same code.
"""

from __future__ import annotations

from functools import lru_cache

from .graph import Graph, bits, to_graph6


def _refine(adj, cells: list[int]) -> list[int]:
    """Refine an ordered partition (list of vertex bitmasks) to equitable."""
    while True:
        out = []
        changed = False
        for cell in cells:
            if cell & (cell - 1) == 0:
                out.append(cell)
                continue
            groups: dict[tuple, int] = {}
            for v in bits(cell):
                row = adj[v]
                sig = tuple([(row & c).bit_count() for c in cells])
                groups[sig] = groups.get(sig, 0) | (1 << v)
            if len(groups) == 1:
                out.append(cell)
            else:
                changed = True
                for sig in sorted(groups):
                    out.append(groups[sig])
        if not changed:
            return out
        cells = out


def _twin_generators(n: int, adj) -> list[list[int]]:
    # consecutive transpositions, so the stabiliser of a class prefix keeps the rest
    classes: dict[tuple[int, int], list[int]] = {}
    for v in range(n):
        classes.setdefault((0, adj[v]), []).append(v)
        classes.setdefault((1, adj[v] | 1 << v), []).append(v)
    gens = []
    for members in classes.values():
        for a, b in zip(members, members[1:]):
            perm = list(range(n))
            perm[a], perm[b] = b, a
            gens.append(perm)
    return gens


def _orbit_reps(cell: int, gens: list[list[int]]) -> list[int]:
    """One representative (the smallest) per orbit of ``gens`` meeting ``cell``."""
    vs = bits(cell)
    if not gens:
        return vs
    parent = {v: v for v in vs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # orbits restricted to the cell: the cell is invariant under every generator used
    for perm in gens:
        for v in vs:
            a, b = find(v), find(perm[v])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [v for v in vs if find(v) == v]


def _code(n: int, adj, order: list[int]) -> tuple[int, ...]:
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    rows = []
    for v in order:
        row = 0
        w = adj[v]
        while w:
            low = w & -w
            row |= 1 << pos[low.bit_length() - 1]
            w ^= low
        rows.append(row)
    return tuple(rows)


def canonical_labeling(g: Graph) -> tuple[list[int], list[list[int]]]:
    """Return ``(order, generators)``.

    ``order[i]`` is the original vertex placed at canonical position ``i``;
    ``generators`` are automorphisms found during the search (as vertex maps).
    """
    return _search(g.n, g.adj)


def canonical_labeling_raw(n: int, adj) -> list[int]:
    """Canonical order for a raw ``(n, adjacency rows)`` pair."""
    return _search(n, adj)[0]


def _search(n: int, adj) -> tuple[list[int], list[list[int]]]:
    if n <= 1:
        return list(range(n)), []
    gens = _twin_generators(n, adj)
    best_code = None
    best_order: list[int] = []

    def search(cells: list[int], fixed: tuple[int, ...]) -> None:
        nonlocal best_code, best_order
        cells = _refine(adj, cells)
        target = -1
        size = n + 1
        for i, c in enumerate(cells):
            k = c.bit_count()
            if 1 < k < size:
                size = k
                target = i
        if target < 0:
            order = [c.bit_length() - 1 for c in cells]
            code = _code(n, adj, order)
            if best_code is None or code > best_code:
                best_code = code
                best_order = order
            elif code == best_code:
                perm = [0] * n
                for a, b in zip(order, best_order):
                    perm[a] = b
                gens.append(perm)
            return
        cell = cells[target]
        for v in bits(cell):
            # re-read stabiliser generators each branch: new automorphisms may arrive
            stab = [p for p in gens if all(p[x] == x for x in fixed)]
            if v not in _orbit_reps(cell, stab):
                continue
            new = cells[:target] + [1 << v, cell & ~(1 << v)] + cells[target + 1:]
            search(new, fixed + (v,))

    search([(1 << n) - 1], ())
    return best_order, gens


def canonical_form(g: Graph) -> Graph:
    """Isomorphic relabeling such that isomorphic inputs give identical outputs."""
    order, _ = canonical_labeling(g)
    return Graph(g.n, _code(g.n, g.adj, order))


def canonical_graph6(g: Graph) -> str:
    return to_graph6(canonical_form(g))


@lru_cache(maxsize=1 << 16)
def _canonical_graph6_cached(text: str) -> str:
    from .graph import from_graph6

    return canonical_graph6(from_graph6(text))


def canonize_graph6(text: str) -> str:
    """Canonical graph6 of a graph6 string (cached)."""
    return _canonical_graph6_cached(text)


def automorphism_orbits(g: Graph) -> list[int]:
    """``orbit[v]`` is the smallest vertex in the automorphism orbit of ``v``."""
    _, gens = canonical_labeling(g)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in gens:
        for v in range(g.n):
            a, b = find(v), find(perm[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(g.n)]


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    return canonical_form(g) == canonical_form(h)
