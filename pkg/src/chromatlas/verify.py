"""Oracle suites behind ``chromatlas verify``.

Each suite returns a :class:`SuiteResult`; failures carry graph6 witnesses.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Optional

from .chromatic import ChromaticEngine, coefficient_vector, count_colorings, evaluate
from .enumerate import brute_force_connected, enumerate_connected
from .canon import canonical_graph6
from .extremal import (
    degree_gap,
    in_family_J,
    in_family_L,
    is_threshold,
    is_threshold_by_degrees,
    pareto_extremal,
    quasi_complete,
    spectral_irregularities,
    turan,
    variance_irregularity,
    verify_compression_monotonicity,
)
from .graph import Graph
from .records import read_records, record_problems, self_check

KNOWN_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}
MAX_FAILURES = 20


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)
        elif len(self.failures) == MAX_FAILURES:
            self.failures.append("... further failures suppressed")

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} failure(s)"


class Corpus:
    """Enumerated graphs and their polynomials, computed once per order."""

    def __init__(self, engine: Optional[ChromaticEngine] = None):
        self.engine = engine or ChromaticEngine()
        self._graphs: dict[int, list[Graph]] = {}

    def graphs(self, n: int) -> list[Graph]:
        if n not in self._graphs:
            self._graphs[n] = list(enumerate_connected(n))
        return self._graphs[n]

    def upto(self, nmax: int) -> Iterable[Graph]:
        for n in range(1, nmax + 1):
            yield from self.graphs(n)

    def q(self, g: Graph) -> tuple[int, ...]:
        return coefficient_vector(self.engine.polynomial(g), g.n).entries


def suite_enumeration(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"enumeration counts n<={nmax}")
    for n in range(1, nmax + 1):
        got = len(corpus.graphs(n))
        res.checked += 1
        if n in KNOWN_COUNTS and got != KNOWN_COUNTS[n]:
            res.fail(f"n={n}: {got} graphs, expected {KNOWN_COUNTS[n]}")
        if n <= 5:
            brute = {canonical_graph6(g) for g in brute_force_connected(n)}
            ours = {g.to_graph6() for g in corpus.graphs(n)}
            res.checked += 1
            if brute != ours:
                res.fail(f"n={n}: enumeration differs from labeled brute force")
    return res


def suite_coefficients(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"coefficient oracles n<={nmax}")
    for g in corpus.upto(nmax):
        res.checked += 1
        for problem in self_check(g, corpus.engine.polynomial(g)):
            res.fail(f"{g.to_graph6()}: {problem}")
    return res


def suite_colorings(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"brute-force colourings n<={nmax}")
    for g in corpus.upto(nmax):
        p = corpus.engine.polynomial(g)
        for k in range(g.n + 1):
            res.checked += 1
            if evaluate(p, k) != count_colorings(g, k):
                res.fail(f"{g.to_graph6()}: P({k}) disagrees with direct count")
    return res


def suite_compression_exhaustive(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"compression monotonicity exhaustive n<={nmax}")
    for g in corpus.upto(nmax):
        for u in range(g.n):
            for v in range(g.n):
                if u != v:
                    _check_triple(res, g, u, v, corpus.engine)
    return res


def suite_compression_random(corpus: Corpus, count: int, orders: Iterable[int], seed: int) -> SuiteResult:
    orders = list(orders)
    res = SuiteResult(f"compression monotonicity {count} random triples per order {orders} seed {seed}")
    rng = random.Random(seed)
    for n in orders:
        pool = corpus.graphs(n)
        for _ in range(count):
            g = rng.choice(pool)
            u, v = rng.sample(range(n), 2)
            _check_triple(res, g, u, v, corpus.engine)
    return res


def _check_triple(res: SuiteResult, g: Graph, u: int, v: int, engine: ChromaticEngine) -> None:
    res.checked += 1
    report = verify_compression_monotonicity(g, u, v, engine)
    if not report.passed:
        res.fail(f"{g.to_graph6()} u={u} v={v}: " + "; ".join(report.violations))


def groups_of(corpus: Corpus, n: int) -> dict[int, list[tuple[str, tuple[int, ...]]]]:
    out: dict[int, list[tuple[str, tuple[int, ...]]]] = defaultdict(list)
    for g in corpus.graphs(n):
        out[g.m].append((g.to_graph6(), corpus.q(g)))
    return out


def suite_minimal_families(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"minimal-family co-chromaticity n<={nmax}")
    for n in range(1, nmax + 1):
        members = {g.to_graph6() for g in corpus.graphs(n) if in_family_J(g) or in_family_L(g)}
        for m, group in sorted(groups_of(corpus, n).items()):
            report = pareto_extremal(group, n, m)
            minimal = set(report.minimal_set)
            fam = [(key, q) for key, q in group if key in members]
            for key, q in fam:
                res.checked += 1
                if key not in minimal:
                    res.fail(f"G({n},{m}) {key}: family member with {q} is not minimal")
            vectors = {q for _, q in fam}
            if len(vectors) > 1:
                res.fail(f"G({n},{m}): family members not co-chromatic: " + ", ".join(
                    f"{key}={q}" for key, q in fam))
    return res


def suite_turan(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"Turan maximality n<={nmax}")
    for n in range(1, nmax + 1):
        groups = groups_of(corpus, n)
        for r in range(1, n + 1):
            t = turan(n, r)
            if n > 1 and r == 1:
                continue  # edgeless, not connected
            res.checked += 1
            key = canonical_graph6(t)
            report = pareto_extremal(groups[t.m], n, t.m)
            if key not in report.maximal_set:
                res.fail(f"T({n},{r}) = {key} is not maximal in G({n},{t.m})")
    return res


def suite_irregularity(corpus: Corpus, nmax: int) -> SuiteResult:
    res = SuiteResult(f"irregularity and threshold cross-checks n<={nmax}")
    for n in range(1, nmax + 1):
        graphs = corpus.graphs(n)
        eps = spectral_irregularities(graphs)
        for g, e in zip(graphs, eps):
            res.checked += 1
            flags = (variance_irregularity(g) == 0, e <= 1e-9, degree_gap(g) == 0)
            if len(set(flags)) != 1:
                res.fail(f"{g.to_graph6()}: sigma=0 {flags[0]}, eps<=1e-9 {flags[1]}, gap=0 {flags[2]}")
            if e < -1e-9:
                res.fail(f"{g.to_graph6()}: negative spectral irregularity {e}")
            if is_threshold(g) != is_threshold_by_degrees(g):
                res.fail(f"{g.to_graph6()}: threshold tests disagree")
        for m in range(n - 1, comb(n, 2) + 1):
            res.checked += 1
            qc = quasi_complete(n, m)
            if qc.m != m or not is_threshold(qc):
                res.fail(f"quasi_complete({n},{m}) = {qc.to_graph6()} is not a threshold graph with {m} edges")
    return res


def suite_records(path: str, sample_every: int = 1) -> SuiteResult:
    res = SuiteResult(f"record integrity {path}")
    try:
        for i, rec in enumerate(read_records(path)):
            if i % sample_every:
                continue
            res.checked += 1
            for problem in record_problems(rec):
                res.fail(f"{rec.graph6}: {problem}")
    except ValueError as exc:
        res.fail(str(exc))
    return res


def parse_scope(scope: str) -> list[Callable[[Corpus], SuiteResult]]:
    """Scopes: ``exhaustive:N``, ``compression:COUNT:NMAX:SEED``, ``records:PATH``."""
    kind, _, rest = scope.partition(":")
    if kind == "exhaustive":
        nmax = int(rest or 6)
        if not 1 <= nmax <= 8:
            raise ValueError(f"exhaustive scope needs 1 <= N <= 8, got {nmax}")
        return [
            lambda c: suite_enumeration(c, nmax),
            lambda c: suite_coefficients(c, nmax),
            lambda c: suite_colorings(c, min(nmax, 6)),
            lambda c: suite_compression_exhaustive(c, min(nmax, 6)),
            lambda c: suite_minimal_families(c, nmax),
            lambda c: suite_turan(c, nmax),
            lambda c: suite_irregularity(c, nmax),
        ]
    if kind == "compression":
        parts = rest.split(":") if rest else []
        count = int(parts[0]) if len(parts) > 0 else 1000
        nmax = int(parts[1]) if len(parts) > 1 else 8
        seed = int(parts[2]) if len(parts) > 2 else 42
        if not 7 <= nmax <= 9:
            raise ValueError(f"random compression scope needs NMAX in 7..9, got {nmax}")
        return [lambda c: suite_compression_random(c, count, range(7, nmax + 1), seed)]
    if kind == "records":
        if not rest:
            raise ValueError("records scope needs a path")
        return [lambda c: suite_records(rest)]
    raise ValueError(f"unknown verify scope {scope!r}")


def run_scopes(scopes: Iterable[str], corpus: Optional[Corpus] = None) -> list[SuiteResult]:
    corpus = corpus or Corpus()
    suites = [s for scope in scopes for s in parse_scope(scope)]
    return [suite(corpus) for suite in suites]
