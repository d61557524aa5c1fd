"""Graph records: the persisted unit of the pipeline (one JSON object per line)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .chromatic import (
    ChromaticPolynomial,
    check_farrell4,
    check_meredith,
    coefficient_vector,
    evaluate,
    is_log_concave,
    meredith_bound_check,
    signs_alternate,
)
from .extremal import (
    degree_gap,
    in_family_J,
    in_family_L,
    is_threshold,
    spectral_irregularities,
    spectral_irregularity,
    variance_irregularity,
)
from .graph import Graph, bits, component_masks, from_graph6, girth, is_connected, subgraph_census

VECTOR_LENGTH = 10
FLAG_NAMES = ("threshold", "in_J", "in_L", "is_turan", "chromatically_minimal", "chromatically_maximal")


class SelfCheckError(RuntimeError):
    def __init__(self, graph6: str, problems: list[str]):
        super().__init__(f"{graph6}: " + "; ".join(problems))
        self.graph6 = graph6
        self.problems = problems


@dataclass
class GraphRecord:
    graph6: str
    n: int
    m: int
    q: tuple[int, ...]
    sigma: str
    sigma_float: float
    eps_irr: float
    degree_gap: int
    girth: Optional[int]
    t1: int
    t2: int
    t3: int
    flags: dict = field(default_factory=dict)

    @property
    def sigma_exact(self) -> Fraction:
        return Fraction(self.sigma)

    def to_json(self) -> str:
        parts = [
            f'"graph6": {json.dumps(self.graph6)}',
            f'"n": {self.n}',
            f'"m": {self.m}',
            f'"q": [{", ".join(str(x) for x in self.q)}]',
            f'"sigma": {json.dumps(self.sigma)}',
            f'"sigma_float": {_f17(self.sigma_float)}',
            f'"eps_irr": {_f17(self.eps_irr)}',
            f'"degree_gap": {self.degree_gap}',
            f'"girth": {json.dumps(self.girth)}',
            f'"t1": {self.t1}',
            f'"t2": {self.t2}',
            f'"t3": {self.t3}',
            f'"flags": {json.dumps({k: self.flags.get(k) for k in FLAG_NAMES})}',
        ]
        return "{" + ", ".join(parts) + "}"

    @classmethod
    def from_json(cls, line: str) -> "GraphRecord":
        d = json.loads(line)
        return cls(
            graph6=d["graph6"],
            n=int(d["n"]),
            m=int(d["m"]),
            q=tuple(int(x) for x in d["q"]),
            sigma=d["sigma"],
            sigma_float=float(d["sigma_float"]),
            eps_irr=float(d["eps_irr"]),
            degree_gap=int(d["degree_gap"]),
            girth=d["girth"],
            t1=int(d["t1"]),
            t2=int(d["t2"]),
            t3=int(d["t3"]),
            flags={k: d["flags"].get(k) for k in FLAG_NAMES},
        )


def _f17(x: float) -> str:
    text = format(float(x), ".17g")
    if not any(c in text for c in ".enN"):
        text += ".0"
    return text


def is_turan_graph(g: Graph) -> bool:
    """Complete multipartite with part sizes differing by at most one."""
    comps = component_masks(g.n, g.complement().adj)
    sizes = [c.bit_count() for c in comps]
    if max(sizes) - min(sizes) > 1:
        return False
    return all(
        (g.adj[v] & c) == 0 for c in comps for v in bits(c)
    )


def make_record(
    g: Graph, poly: ChromaticPolynomial, length: int = VECTOR_LENGTH, eps_irr: Optional[float] = None
) -> GraphRecord:
    if not is_connected(g):
        raise ValueError(f"records hold connected graphs only: {g.to_graph6()}")
    sigma = variance_irregularity(g)
    t1, t2, t3 = subgraph_census(g)
    return GraphRecord(
        graph6=g.to_graph6(),
        n=g.n,
        m=g.m,
        q=coefficient_vector(poly, max(length, g.n)).entries,
        sigma=str(sigma),
        sigma_float=float(sigma),
        eps_irr=spectral_irregularity(g) if eps_irr is None else eps_irr,
        degree_gap=degree_gap(g),
        girth=girth(g),
        t1=t1,
        t2=t2,
        t3=t3,
        flags={
            "threshold": is_threshold(g),
            "in_J": in_family_J(g),
            "in_L": in_family_L(g),
            "is_turan": is_turan_graph(g),
            "chromatically_minimal": None,
            "chromatically_maximal": None,
        },
    )


def make_records(graphs, polys, length: int = VECTOR_LENGTH) -> list[GraphRecord]:
    eps = spectral_irregularities(graphs)
    return [make_record(g, p, length, e) for g, p, e in zip(graphs, polys, eps)]


def self_check(g: Graph, poly: ChromaticPolynomial) -> list[str]:
    """Inline oracle checks; returns a list of problems (empty when clean)."""
    problems = []
    for report in (check_farrell4(g, poly), check_meredith(g, poly)):
        problems += [f"{report.check}: {x}" for x in report.mismatches]
    if evaluate(poly, 0) != 0:
        problems.append("P(0) != 0")
    if g.m >= 1 and evaluate(poly, 1) != 0:
        problems.append("P(1) != 0")
    if not signs_alternate(poly):
        problems.append("signs do not alternate")
    q = coefficient_vector(poly, poly.degree)
    if not is_log_concave(q):
        problems.append("coefficients are not log-concave")
    if not meredith_bound_check(q, g.m):
        problems.append("coefficient exceeds binomial bound")
    return problems


def read_records(path) -> Iterator[GraphRecord]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield GraphRecord.from_json(line)
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad record: {exc}") from exc


def write_records(records: Iterable[GraphRecord], path) -> int:
    tmp = f"{path}.tmp"
    count = 0
    with open(tmp, "w") as fh:
        for rec in records:
            fh.write(rec.to_json())
            fh.write("\n")
            count += 1
    os.replace(tmp, path)
    return count


def record_problems(rec: GraphRecord) -> list[str]:
    """Integrity checks of a stored record against its own graph6 key."""
    problems = []
    try:
        g = from_graph6(rec.graph6)
    except ValueError as exc:
        return [f"graph6 does not decode: {exc}"]
    if g.n != rec.n:
        problems.append(f"n={rec.n} but graph has {g.n} vertices")
    if g.m != rec.m:
        problems.append(f"m={rec.m} but graph has {g.m} edges")
    if degree_gap(g) != rec.degree_gap:
        problems.append(f"degree_gap={rec.degree_gap} but graph gives {degree_gap(g)}")
    if not is_log_concave(rec.q):
        problems.append("stored vector is not log-concave")
    if not meredith_bound_check(rec.q, rec.m):
        problems.append("stored vector exceeds binomial bound")
    return problems


# append-only polynomial cache


class PolynomialCache:
    """Append-only JSONL file mapping graph6 keys to signed coefficients."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.entries: dict[str, tuple[int, ...]] = {}
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        d = json.loads(line)
                    except ValueError:
                        # a torn final line from an interrupted run is ignored
                        continue
                    self.entries[d["graph6"]] = tuple(d["c"])
        self._fh = None

    def get(self, key: str) -> Optional[ChromaticPolynomial]:
        c = self.entries.get(key)
        return None if c is None else ChromaticPolynomial(c)

    def put(self, key: str, poly: ChromaticPolynomial) -> None:
        if key in self.entries:
            return
        self.entries[key] = poly.coefficients
        if self.path:
            if self._fh is None:
                os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
                self._fh = open(self.path, "a")
            self._fh.write(json.dumps({"graph6": key, "c": list(poly.coefficients)}) + "\n")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def compact(self) -> int:
        """Rewrite the file with one line per key, sorted; returns the entry count."""
        self.close()
        if not self.path:
            return len(self.entries)
        tmp = f"{self.path}.tmp"
        with open(tmp, "w") as fh:
            for key in sorted(self.entries):
                fh.write(json.dumps({"graph6": key, "c": list(self.entries[key])}) + "\n")
        os.replace(tmp, self.path)
        return len(self.entries)
