"""Exact chromatic polynomials by memoised deletion-contraction.

Polynomials are kept internally as ascending coefficient lists
(``poly[i]`` multiplies ``lam**i``). The public :class:`ChromaticPolynomial`
stores ``c_n, ..., c_1`` in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Optional

from .canon import canonical_labeling_raw
from .graph import Graph, bits, component_masks, contract_adj, girth, count_cycles_of_length, subgraph_census

INT64_MAX = (1 << 63) - 1
DEFAULT_CACHE_CAP = 1 << 22


class CoefficientOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class ChromaticPolynomial:
    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def coefficient(self, power: int) -> int:
        """Coefficient of ``lam**power``."""
        if power == 0 or power > self.degree:
            return 0
        return self.coefficients[self.degree - power]

    def __call__(self, k: int) -> int:
        return evaluate(self, k)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            power = self.degree - i
            if c == 0:
                continue
            mag = abs(c)
            var = "λ" if power == 1 else f"λ^{power}"
            body = var if mag == 1 else f"{mag}{var}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms) or "0"


@dataclass(frozen=True)
class CoefficientVector:
    entries: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


# ascending-list polynomial arithmetic


def _mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _sub(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a = a + [0] * (len(b) - len(a))
    out = list(a)
    for i, y in enumerate(b):
        out[i] -= y
    return out


def _tree_poly(n: int) -> list[int]:
    # lam * (lam - 1)^(n-1)
    k = n - 1
    return [0] + [comb(k, i) * (-1) ** (k - i) for i in range(k + 1)]


def _complete_poly(n: int) -> list[int]:
    poly = [0, 1]
    for i in range(1, n):
        poly = _mul(poly, [-i, 1])
    return poly


def _cycle_poly(n: int) -> list[int]:
    # (lam - 1)^n + (-1)^n (lam - 1)
    poly = [comb(n, i) * (-1) ** (n - i) for i in range(n + 1)]
    sign = -1 if n % 2 else 1
    poly[0] -= sign
    poly[1] += sign
    return poly


class ChromaticEngine:
    """Deletion-contraction with a canonical-form memo.

    The memo is bounded by ``cache_cap`` entries and is cleared when full;
    results never depend on whether a lookup hits.
    """

    def __init__(self, cache_cap: int = DEFAULT_CACHE_CAP):
        self.cache_cap = cache_cap
        self.memo: dict[tuple, tuple[int, ...]] = {}
        self.hits = 0
        self.misses = 0

    def polynomial(self, g: Graph) -> ChromaticPolynomial:
        poly = self.raw(g.n, g.adj)
        for c in poly:
            if abs(c) > INT64_MAX:
                raise CoefficientOverflowError(f"coefficient {c} exceeds signed 64-bit range")
        return ChromaticPolynomial(tuple(reversed(poly[1:])))

    def raw(self, n: int, adj) -> list[int]:
        if n == 0:
            return [1]
        comps = component_masks(n, adj)
        if len(comps) == 1:
            return list(self._connected(n, tuple(adj)))
        poly = [1]
        for mask in comps:
            sub_n, sub_adj = _induced(adj, mask)
            poly = _mul(poly, list(self._connected(sub_n, sub_adj)))
        return poly

    def _connected(self, n: int, adj: tuple[int, ...]) -> tuple[int, ...] | list[int]:
        if n == 1:
            return [0, 1]
        # peel pendant vertices: P(G) = (lam - 1) P(G - v) when deg v = 1
        pendants = 0
        while n > 2:
            leaf = -1
            for v in range(n):
                if adj[v] & (adj[v] - 1) == 0:
                    leaf = v
                    break
            if leaf < 0:
                break
            n, adj = _remove_vertex(n, adj, leaf)
            pendants += 1
        base = self._core(n, adj)
        if pendants:
            base = _mul(list(base), _tree_factor(pendants))
        return base

    def _core(self, n: int, adj: tuple[int, ...]) -> tuple[int, ...] | list[int]:
        degsum = 0
        all_two = True
        for row in adj:
            d = row.bit_count()
            degsum += d
            if d != 2:
                all_two = False
        m = degsum // 2
        if m == n - 1:
            return _tree_poly(n)
        if m == n * (n - 1) // 2:
            return _complete_poly(n)
        if all_two:
            return _cycle_poly(n)
        order = canonical_labeling_raw(n, adj)
        key = _relabel_rows(n, adj, order)
        cached = self.memo.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        cadj = key
        u, v = _pick_edge(n, cadj)
        deleted = list(cadj)
        deleted[u] &= ~(1 << v)
        deleted[v] &= ~(1 << u)
        p_del = self.raw(n, deleted)
        p_con = self.raw(n - 1, contract_adj(n, cadj, u, v))
        result = tuple(_sub(p_del, p_con))
        if len(self.memo) >= self.cache_cap:
            self.memo.clear()
        self.memo[key] = result
        return result


def _tree_factor(k: int) -> list[int]:
    # (lam - 1)^k
    return [comb(k, i) * (-1) ** (k - i) for i in range(k + 1)]


def _pick_edge(n: int, adj) -> tuple[int, int]:
    best = None
    best_t = -1
    for u in range(n):
        row = adj[u] >> (u + 1)
        for off in bits(row):
            v = u + 1 + off
            t = (adj[u] & adj[v]).bit_count()
            if t > best_t:
                best_t = t
                best = (u, v)
    return best


def _relabel_rows(n: int, adj, order: list[int]) -> tuple[int, ...]:
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


def _remove_vertex(n: int, adj, v: int) -> tuple[int, tuple[int, ...]]:
    low_mask = (1 << v) - 1
    out = []
    for w in range(n):
        if w == v:
            continue
        row = adj[w]
        out.append((row & low_mask) | ((row >> (v + 1)) << v))
    return n - 1, tuple(out)


def _induced(adj, mask: int) -> tuple[int, tuple[int, ...]]:
    vs = bits(mask)
    index = {v: i for i, v in enumerate(vs)}
    out = []
    for v in vs:
        row = 0
        for u in bits(adj[v] & mask):
            row |= 1 << index[u]
        out.append(row)
    return len(vs), tuple(out)


_default_engine: Optional[ChromaticEngine] = None


def default_engine() -> ChromaticEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = ChromaticEngine()
    return _default_engine


def chromatic_polynomial(g: Graph, engine: Optional[ChromaticEngine] = None) -> ChromaticPolynomial:
    return (engine or default_engine()).polynomial(g)


def coefficient_vector(p: ChromaticPolynomial, length: int) -> CoefficientVector:
    if length < p.degree:
        raise ValueError(f"length {length} is shorter than degree {p.degree}")
    entries = [abs(c) for c in p.coefficients]
    return CoefficientVector(tuple(entries + [0] * (length - len(entries))))


def evaluate(p: ChromaticPolynomial, k: int) -> int:
    if k < 0:
        raise ValueError("evaluation point must be non-negative")
    value = 0
    for c in p.coefficients:
        value = value * k + c
    value *= k
    if abs(value) > INT64_MAX:
        raise CoefficientOverflowError(f"P({k}) = {value} exceeds signed 64-bit range")
    return value


# coefficient oracles


@dataclass
class VerificationReport:
    check: str
    applicable: bool = True
    mismatches: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_meredith(g: Graph, p: ChromaticPolynomial) -> VerificationReport:
    """Leading coefficients against the girth formula."""
    report = VerificationReport("meredith")
    gi = girth(g)
    if gi is None or g.n < 1:
        report.applicable = False
        return report
    n, m = g.n, g.m
    for i in range(min(gi, n)):
        if i < gi - 1:
            expected = (-1) ** i * comb(m, i)
        else:
            expected = (-1) ** i * (comb(m, i) - count_cycles_of_length(g, gi))
        got = p.coefficient(n - i)
        report.checked[f"c_{n - i}"] = expected
        if got != expected:
            report.mismatches.append(f"c_{n - i}: expected {expected}, got {got}")
    return report


def check_farrell4(g: Graph, p: ChromaticPolynomial) -> VerificationReport:
    """First four coefficients against edge and small-subgraph counts."""
    report = VerificationReport("farrell4")
    n, m = g.n, g.m
    t1, t2, t3 = subgraph_census(g)
    formulas = [1, -m, comb(m, 2) - t1, -comb(m, 3) + (m - 2) * t1 + t2 - 2 * t3]
    # c_0 is always zero, so only powers >= 1 are checked
    for i, expected in enumerate(formulas):
        power = n - i
        if power < 1:
            break
        got = p.coefficient(power)
        report.checked[f"c_{power}"] = expected
        if got != expected:
            report.mismatches.append(f"c_{power}: expected {expected}, got {got}")
    return report


def is_log_concave(q: CoefficientVector | Iterable[int]) -> bool:
    h = list(q)
    while h and h[-1] == 0:
        h.pop()
    return all(h[i - 1] * h[i + 1] <= h[i] * h[i] for i in range(1, len(h) - 1))


def meredith_bound_check(q: CoefficientVector | Iterable[int], m: int) -> bool:
    return all(x <= comb(m, i) for i, x in enumerate(q))


def signs_alternate(p: ChromaticPolynomial) -> bool:
    return all(c == 0 or (c > 0) == (k % 2 == 0) for k, c in enumerate(p.coefficients))


def count_colorings(g: Graph, k: int) -> int:
    """Brute-force proper ``k``-colouring count by backtracking."""
    colors = [-1] * g.n
    edges_back = [[u for u in bits(g.adj[v]) if u < v] for v in range(g.n)]

    def place(v: int) -> int:
        if v == g.n:
            return 1
        total = 0
        for c in range(k):
            if all(colors[u] != c for u in edges_back[v]):
                colors[v] = c
                total += place(v + 1)
        colors[v] = -1
        return total

    return place(0)


# batch computation with ordered emission


def _worker_init(cache_cap: int) -> None:
    global _default_engine
    _default_engine = ChromaticEngine(cache_cap)


def _worker_poly(g: Graph) -> ChromaticPolynomial:
    return default_engine().polynomial(g)


def chromatic_polynomials(
    graphs: Iterable[Graph],
    workers: int = 1,
    engine: Optional[ChromaticEngine] = None,
    chunksize: int = 64,
) -> Iterator[ChromaticPolynomial]:
    """Polynomials for a stream of graphs, yielded in input order.

    With ``workers > 1`` each process keeps its own memo; outputs are
    identical to the single-process path.
    """
    if workers <= 1:
        eng = engine or default_engine()
        for g in graphs:
            yield eng.polynomial(g)
        return
    import multiprocessing as mp

    cap = engine.cache_cap if engine else DEFAULT_CACHE_CAP
    with mp.get_context("fork").Pool(workers, initializer=_worker_init, initargs=(cap,)) as pool:
        yield from pool.imap(_worker_poly, graphs, chunksize=chunksize)
