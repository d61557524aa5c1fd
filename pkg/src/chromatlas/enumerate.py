"""Exhaustive generation of connected graphs by canonical augmentation.

Every connected graph on ``n`` vertices has a non-cut vertex, so connected
graphs on ``n - 1`` vertices are enough as parents. A child ``C`` built from
parent ``P`` by adding a vertex ``x`` is accepted only when ``P`` is the
canonical parent of ``C``: among the non-cut vertices of ``C`` with the best
vertex invariant, the one whose deletion gives the largest canonical code
decides the parent class. Children of one parent are deduplicated by their
canonical code, so every isomorphism class is emitted exactly once.

Two invariant orders are provided (``"max"`` prefers high-degree vertices,
``"min"`` low-degree ones); they define different augmentation trees and are
used to cross-check each other.
"""

from __future__ import annotations

import multiprocessing
import os
from itertools import combinations, permutations
from typing import BinaryIO, Iterable, Iterator, TextIO, Union

from .canon import _code, canonical_labeling_raw
from .graph import Graph, Graph6Error, bits, connected_mask, from_graph6, is_connected

MAX_ENUM_ORDER = 10


class Graph6StreamError(ValueError):
    def __init__(self, line: int, cause: Exception):
        super().__init__(f"line {line}: {cause}")
        self.line = line


def enumerate_connected(n: int, mode: str = "max", workers: int = 1) -> Iterator[Graph]:
    """Yield one canonical representative per connected graph class of order ``n``.

    With ``workers > 1`` the last augmentation level is sharded by parent
    across processes; results are merged in parent order, so the output
    sequence does not depend on the worker count.
    """
    if not 1 <= n <= MAX_ENUM_ORDER:
        raise ValueError(f"order must lie in 1..{MAX_ENUM_ORDER}, got {n}")
    if mode not in ("max", "min"):
        raise ValueError(f"unknown augmentation mode {mode!r}")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    if workers == 1 or n < 3:
        for adj in _level(n, mode):
            yield Graph(n, adj)
        return
    parents = [(p, mode) for p in _level(n - 1, mode)]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(workers) as pool:
        for kids in pool.imap(_children_list, parents, chunksize=max(1, len(parents) // (16 * workers))):
            for adj in kids:
                yield Graph(n, adj)


def _children_list(job: tuple[tuple[int, ...], str]) -> list[tuple[int, ...]]:
    return list(_children(*job))


def _level(n: int, mode: str) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (0,)
        return
    for parent in _level(n - 1, mode):
        yield from _children(parent, mode)


def _children(parent: tuple[int, ...], mode: str) -> Iterator[tuple[int, ...]]:
    np_ = len(parent)
    n = np_ + 1
    new = np_
    new_bit = 1 << new
    full = (1 << n) - 1
    pdeg = [row.bit_count() for row in parent]
    better = (lambda a, b: a > b) if mode == "max" else (lambda a, b: a < b)
    seen: set[tuple[int, ...]] = set()

    for S in range(1, 1 << np_):
        adj = [row | new_bit if S >> i & 1 else row for i, row in enumerate(parent)]
        adj.append(S)
        k = S.bit_count()
        deg = [d + (S >> i & 1) for i, d in enumerate(pdeg)]
        deg.append(k)

        inv_new = None
        ties = []
        rejected = False
        for w in range(np_):
            dw = deg[w]
            if dw != k and not better(dw, k):
                continue
            if dw == k:
                if inv_new is None:
                    inv_new = sorted(deg[u] for u in bits(S))
                inv_w = sorted(deg[u] for u in bits(adj[w]))
                if inv_w != inv_new and not better(inv_w, inv_new):
                    continue
                strict = inv_w != inv_new
            else:
                strict = True
            if not connected_mask(adj, full & ~(1 << w)):
                continue
            if strict:
                rejected = True
                break
            ties.append(w)
        if rejected:
            continue

        if ties:
            parent_code = parent
            ok = True
            for w in ties:
                sub_n, sub_adj = _delete_vertex(n, adj, w)
                code = _code(sub_n, sub_adj, canonical_labeling_raw(sub_n, sub_adj))
                if code > parent_code:
                    ok = False
                    break
            if not ok:
                continue

        code = _code(n, adj, canonical_labeling_raw(n, adj))
        if code in seen:
            continue
        seen.add(code)
        yield code


def _delete_vertex(n: int, adj, v: int) -> tuple[int, tuple[int, ...]]:
    low_mask = (1 << v) - 1
    out = []
    for w in range(n):
        if w != v:
            row = adj[w]
            out.append((row & low_mask) | ((row >> (v + 1)) << v))
    return n - 1, tuple(out)


def count_connected(n: int, mode: str = "max") -> int:
    return sum(1 for _ in _level(n, mode))


# brute-force oracle over labeled graphs


def brute_force_connected(n: int) -> list[Graph]:
    """All connected classes of order ``n`` via labeled enumeration.

    Classes are identified by the minimum relabeled adjacency over all
    ``n!`` permutations, independent of the canonical labeling code.
    """
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    classes: dict[tuple[int, ...], Graph] = {}
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
        if not is_connected(g):
            continue
        cert = min(g.relabel(list(p)).adj for p in perms)
        classes.setdefault(cert, g)
    return list(classes.values())


# graph6 streams


def read_graph6_stream(source: Union[str, os.PathLike, BinaryIO, TextIO, Iterable[str]]) -> Iterator[Graph]:
    """Yield graphs from newline-delimited graph6, in file order.

    Malformed lines raise :class:`Graph6StreamError` carrying the 1-based line number.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from read_graph6_stream(fh)
        return
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip(b"\r\n") if isinstance(raw, bytes) else raw.rstrip("\r\n")
        try:
            yield from_graph6(line)
        except Graph6Error as exc:
            raise Graph6StreamError(lineno, exc) from exc


def write_graph6_stream(graphs: Iterable[Graph], sink: TextIO) -> int:
    count = 0
    for g in graphs:
        sink.write(g.to_graph6())
        sink.write("\n")
        count += 1
    return count


def filter_by_edges(stream: Iterable[Graph], m: int) -> Iterator[Graph]:
    return (g for g in stream if g.m == m)
