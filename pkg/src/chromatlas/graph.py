"""Simple undirected graphs on at most 16 vertices.

Adjacency is stored as one integer bitmask per vertex, so neighbourhood
operations are single-word and graphs hash cheaply. Graphs are immutable;
every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

MAX_ORDER = 16


class Graph6Error(ValueError):
    """Raised for malformed graph6 input; ``offset`` is the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_ORDER:
            raise ValueError(f"order {self.n} outside 0..{MAX_ORDER}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match order")
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            if row >> self.n:
                raise ValueError(f"vertex {v} adjacent to out-of-range vertex")
            w = row
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
                w ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def relabel(self, perm: list[int]) -> "Graph":
        """Return the graph in which old vertex ``v`` becomes ``perm[v]``."""
        adj = [0] * self.n
        for v in range(self.n):
            row = 0
            for u in bits(self.adj[v]):
                row |= 1 << perm[u]
            adj[perm[v]] = row
        return Graph(self.n, tuple(adj))

    def induced(self, vertices: list[int]) -> "Graph":
        """Induced subgraph; vertices are renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            row = 0
            for u in bits(self.adj[v]):
                if u in index:
                    row |= 1 << index[u]
            adj.append(row)
        return Graph(len(vertices), tuple(adj))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def to_graph6(self) -> str:
        return to_graph6(self)

    def __repr__(self) -> str:
        return f"Graph({to_graph6(self)!r}, n={self.n}, m={self.m})"


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# graph6 codec


def to_graph6(g: Graph) -> str:
    n = g.n
    chars = [chr(63 + n)]
    acc = 0
    nbits = 0
    adj = g.adj
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                chars.append(chr(63 + acc))
                acc = 0
                nbits = 0
    if nbits:
        chars.append(chr(63 + (acc << (6 - nbits))))
    return "".join(chars)


def from_graph6(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise Graph6Error("non-ASCII byte", exc.start) from None
    text = text.rstrip("\n")
    if text.startswith(">>graph6<<"):
        raise Graph6Error("graph6 header lines are not supported", 0)
    if not text:
        raise Graph6Error("empty graph6 string", 0)
    for i, ch in enumerate(text):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"non-printable or out-of-range character {ch!r}", i)
    n = ord(text[0]) - 63
    if n == 63:
        raise Graph6Error(f"order exceeds {MAX_ORDER}", 0)
    if n > MAX_ORDER:
        raise Graph6Error(f"order {n} exceeds {MAX_ORDER}", 0)
    nbits = n * (n - 1) // 2
    expected = 1 + (nbits + 5) // 6
    if len(text) != expected:
        raise Graph6Error(
            f"expected {expected} bytes for order {n}, got {len(text)}",
            min(len(text), expected) - 1 if len(text) > expected else len(text),
        )
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(text[1 + k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    pad = nbits % 6
    if pad and (ord(text[-1]) - 63) & ((1 << (6 - pad)) - 1):
        raise Graph6Error("nonzero padding bits", len(text) - 1)
    return Graph(n, tuple(adj))


# structural invariants


def degree_sequence(g: Graph) -> list[int]:
    return [row.bit_count() for row in g.adj]


def component_masks(n: int, adj: tuple[int, ...] | list[int]) -> list[int]:
    """Vertex bitmasks of the connected components, ordered by lowest vertex."""
    remaining = (1 << n) - 1
    comps = []
    while remaining:
        seen = remaining & -remaining
        frontier = seen
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        comps.append(seen)
        remaining &= ~seen
    return comps


def connected_mask(adj, mask: int) -> bool:
    """Whether the subgraph induced on ``mask`` is connected (empty counts as connected)."""
    if not mask:
        return True
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def is_connected(g: Graph) -> bool:
    return connected_mask(g.adj, (1 << g.n) - 1)


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, or ``None`` for a forest."""
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            if best is not None and 2 * dist[v] + 1 >= best:
                break
            for u in bits(g.adj[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    length = dist[u] + dist[v] + 1
                    if best is None or length < best:
                        best = length
    return best


def count_cycles_of_length(g: Graph, k: int) -> int:
    """Number of distinct cycles with exactly ``k`` vertices.

    Each cycle is counted once by rooting it at its smallest vertex and
    fixing a direction (second vertex smaller than the last one).
    """
    if k < 3 or k > g.n:
        return 0
    adj = g.adj
    total = 0
    for root in range(g.n):
        allowed = ((1 << g.n) - 1) & ~((1 << (root + 1)) - 1)
        # paths root -> ... of length k-1 through vertices > root
        stack = [(root, 1 << root, 1, -1)]
        while stack:
            v, used, size, second = stack.pop()
            if size == k:
                if adj[v] >> root & 1 and second < v:
                    total += 1
                continue
            for u in bits(adj[v] & allowed & ~used):
                stack.append((u, used | 1 << u, size + 1, u if size == 1 else second))
    return total


def subgraph_census(g: Graph) -> tuple[int, int, int]:
    """``(triangles, induced 4-cycles, K4 subgraphs)``."""
    adj = g.adj
    n = g.n
    t1 = t3 = 0
    for a, b, c in combinations(range(n), 3):
        if adj[a] >> b & 1 and adj[a] >> c & 1 and adj[b] >> c & 1:
            t1 += 1
    t2 = 0
    for quad in combinations(range(n), 4):
        mask = 0
        for v in quad:
            mask |= 1 << v
        degs = [(adj[v] & mask).bit_count() for v in quad]
        if degs == [3, 3, 3, 3]:
            t3 += 1
        elif degs == [2, 2, 2, 2]:
            # 2-regular on 4 vertices is necessarily C4
            t2 += 1
    return t1, t2, t3


def clique_number(g: Graph) -> int:
    """Exact clique number by branch and bound over bitmask candidate sets."""
    if g.n == 0:
        return 0
    adj = g.adj
    best = 1

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            if size > best:
                best = size
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(size + 1, cand & adj[v])

    expand(0, (1 << g.n) - 1)
    return best


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: list[frozenset[int]]
    bridges: list[tuple[int, int]]
    cut_vertices: frozenset[int]

    def block_edges(self, g: Graph) -> list[list[tuple[int, int]]]:
        out = []
        for block in self.blocks:
            vs = sorted(block)
            out.append([(u, v) for u, v in combinations(vs, 2) if g.has_edge(u, v)])
        return out


def block_decomposition(g: Graph) -> BlockDecomposition:
    """Biconnected components by the depth-first lowpoint method."""
    if not is_connected(g):
        raise ValueError("block decomposition requires a connected graph")
    n = g.n
    if n == 1:
        return BlockDecomposition([frozenset([0])], [], frozenset())
    disc = [-1] * n
    low = [0] * n
    counter = 0
    edge_stack: list[tuple[int, int]] = []
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()

    # iterative DFS: frames are (vertex, parent, remaining-neighbour iterator)
    disc[0] = low[0] = counter
    counter += 1
    stack = [(0, -1, iter(bits(g.adj[0])))]
    root_children = 0
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for u in it:
            if disc[u] == -1:
                edge_stack.append((v, u))
                disc[u] = low[u] = counter
                counter += 1
                if v == 0:
                    root_children += 1
                stack.append((u, v, iter(bits(g.adj[u]))))
                advanced = True
                break
            if u != parent and disc[u] < disc[v]:
                edge_stack.append((v, u))
                low[v] = min(low[v], disc[u])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                if parent != 0:
                    cuts.add(parent)
                verts: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    verts.update((a, b))
                    if (a, b) == (parent, v):
                        break
                blocks.append(frozenset(verts))
    if root_children > 1:
        cuts.add(0)
    blocks.sort(key=lambda b: sorted(b))
    bridges = sorted(tuple(sorted(b)) for b in blocks if len(b) == 2)
    return BlockDecomposition(blocks, bridges, frozenset(cuts))


# deletion / contraction primitives


def delete_edge(g: Graph, u: int, v: int) -> Graph:
    if u == v or not g.has_edge(u, v):
        raise ValueError(f"{{{u}, {v}}} is not an edge")
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(g.n, tuple(adj))


def contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Merge the endpoints of edge ``{u, v}`` into the smaller index.

    Parallel edges are collapsed; the remaining vertices keep their
    relative order.
    """
    if u == v or not g.has_edge(u, v):
        raise ValueError(f"{{{u}, {v}}} is not an edge")
    return Graph(g.n - 1, contract_adj(g.n, g.adj, u, v))


def contract_adj(n: int, adj, u: int, v: int) -> tuple[int, ...]:
    if u > v:
        u, v = v, u
    low_mask = (1 << v) - 1

    def squeeze(row: int) -> int:
        return (row & low_mask) | ((row >> (v + 1)) << v)

    merged = (adj[u] | adj[v]) & ~(1 << u) & ~(1 << v)
    out = []
    for w in range(n):
        if w == v:
            continue
        if w == u:
            out.append(squeeze(merged))
            continue
        row = adj[w]
        if row >> v & 1:
            row = (row & ~(1 << v)) | (1 << u)
        out.append(squeeze(row))
    return tuple(out)


# common families


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
