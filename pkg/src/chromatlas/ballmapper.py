"""Ball Mapper: greedy epsilon-net, closed-ball cover, nerve graph, colourings.

Landmarks are chosen in row order (first uncovered point becomes the next
landmark), so the output is fully determined by the order of the cloud.
Balls are closed: a point at distance exactly ``epsilon`` belongs to the ball.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

METRICS = ("euclidean",)


@dataclass
class BMGraph:
    epsilon: float
    landmarks: list[int]
    membership: list[np.ndarray]
    edges: list[tuple[int, int]]
    colorings: dict[str, dict] = field(default_factory=dict)
    metric: str = "euclidean"

    @property
    def sizes(self) -> list[int]:
        return [len(m) for m in self.membership]

    def adjacency(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in self.landmarks]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs


def _as_array(points) -> np.ndarray:
    rows = getattr(points, "rows", points)
    x = np.asarray(rows, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return x


def _sq_dist(x: np.ndarray, centre: np.ndarray) -> np.ndarray:
    diff = x - centre
    return np.einsum("ij,ij->i", diff, diff)


def epsilon_net(points, epsilon: float, order: Optional[Sequence[int]] = None, metric: str = "euclidean") -> list[int]:
    """Greedy net: a point becomes a landmark iff no earlier landmark lies within ``epsilon``.

    ``order`` optionally permutes the sweep (e.g. a seeded shuffle);
    returned indices always refer to the original rows.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if metric not in METRICS:
        raise ValueError(f"unsupported metric {metric!r}")
    x = _as_array(points)
    sweep = np.arange(len(x)) if order is None else np.asarray(order)
    xs = x[sweep]
    covered = np.zeros(len(xs), dtype=bool)
    eps2 = epsilon * epsilon
    landmarks = []
    pos = 0
    while True:
        free = np.flatnonzero(~covered[pos:])
        if not len(free):
            break
        pos += int(free[0])
        landmarks.append(int(sweep[pos]))
        covered |= _sq_dist(xs, xs[pos]) <= eps2
    return landmarks


def build_cover(points, landmarks: Sequence[int], epsilon: float) -> list[np.ndarray]:
    """``membership[i]``: sorted indices of points within ``epsilon`` of landmark ``i``."""
    x = _as_array(points)
    eps2 = epsilon * epsilon
    return [np.flatnonzero(_sq_dist(x, x[l]) <= eps2) for l in landmarks]


def nerve(membership: Sequence[np.ndarray], landmarks: Optional[Sequence[int]] = None, epsilon: float = 0.0) -> BMGraph:
    """Nerve of a cover: one vertex per ball, an edge per nonempty pairwise intersection."""
    k = len(membership)
    if k == 0:
        return BMGraph(epsilon, list(landmarks or []), [], [])
    npts = 1 + max((int(m.max()) for m in membership if len(m)), default=-1)
    rows = np.concatenate([np.asarray(m, dtype=np.int64) for m in membership])
    cols = np.repeat(np.arange(k), [len(m) for m in membership])
    inc = sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(npts, k))
    shared = (inc.T @ inc).tocoo()
    edges = sorted({(int(i), int(j)) for i, j in zip(shared.row, shared.col) if i < j})
    lm = list(landmarks) if landmarks is not None else list(range(k))
    return BMGraph(epsilon, lm, [np.asarray(m) for m in membership], edges)


def ball_mapper(points, epsilon: float, order: Optional[Sequence[int]] = None) -> BMGraph:
    landmarks = epsilon_net(points, epsilon, order)
    cover = build_cover(points, landmarks, epsilon)
    return nerve(cover, landmarks, epsilon)


def color_by(bm: BMGraph, values: Sequence[float], name: str) -> BMGraph:
    """Average ``values`` over each ball; min/max are recorded for the legend scale."""
    vals = np.asarray(values, dtype=float)
    npts = 1 + max((int(m.max()) for m in bm.membership if len(m)), default=-1)
    if vals.ndim != 1 or len(vals) < npts:
        raise ValueError(f"expected one value per point ({npts}), got {vals.shape}")
    means = [float(vals[m].mean()) for m in bm.membership]
    colorings = dict(bm.colorings)
    colorings[name] = {"values": means, "min": min(means), "max": max(means)}
    return replace(bm, colorings=colorings)


# graph-level statistics


def is_connected(bm: BMGraph) -> bool:
    if not bm.landmarks:
        return True
    nbrs = bm.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in nbrs[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(bm.landmarks)


def largest_clusters(bm: BMGraph, k: int) -> list[int]:
    """Ball positions of the ``k`` largest balls (ties by position)."""
    return sorted(range(len(bm.membership)), key=lambda i: (-len(bm.membership[i]), i))[:k]


def longest_induced_path(bm: BMGraph, budget: int = 2_000_000) -> tuple[list[int], bool]:
    """Longest induced path by depth-first extension.

    Returns ``(path, exact)``; when the node budget runs out the best path
    found so far is returned with ``exact=False`` (a lower bound).
    """
    nbrs = [sorted(s) for s in bm.adjacency()]
    n = len(nbrs)
    best: list[int] = [0] if n else []
    steps = 0

    # touch[w] = number of path vertices in the closed neighbourhood of w;
    # a neighbour u of the tail extends the path iff touch[u] == 1
    def extend(path: list[int], touch: list[int]) -> bool:
        nonlocal best, steps
        steps += 1
        if steps > budget:
            return False
        if len(path) > len(best):
            best = list(path)
        for u in nbrs[path[-1]]:
            if touch[u] != 1:
                continue
            touch[u] += 1
            for w in nbrs[u]:
                touch[w] += 1
            path.append(u)
            ok = extend(path, touch)
            path.pop()
            touch[u] -= 1
            for w in nbrs[u]:
                touch[w] -= 1
            if not ok:
                return False
        return True

    for start in range(n):
        touch = [0] * n
        touch[start] += 1
        for w in nbrs[start]:
            touch[w] += 1
        if not extend([start], touch):
            return best, False
    return best, True


# export


def to_json(bm: BMGraph, include_members: bool = False) -> dict:
    balls = []
    for lm, members in zip(bm.landmarks, bm.membership):
        ball = {"landmark": int(lm), "size": int(len(members))}
        if include_members:
            ball["members"] = [int(x) for x in members]
        balls.append(ball)
    return {
        "epsilon": bm.epsilon,
        "metric": bm.metric,
        "landmarks": [int(x) for x in bm.landmarks],
        "balls": balls,
        "edges": [[int(i), int(j)] for i, j in bm.edges],
        "colorings": {
            name: {"values": list(c["values"]), "min": c["min"], "max": c["max"]}
            for name, c in bm.colorings.items()
        },
    }


def dump_json(bm: BMGraph, path, include_members: bool = False) -> None:
    with open(path, "w") as fh:
        json.dump(to_json(bm, include_members), fh, indent=1, default=_json_float)
        fh.write("\n")


def _json_float(x):
    if isinstance(x, np.floating):
        return float(x)
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


# viridis anchor colours, interpolated linearly
_RAMP = [
    (0.267, 0.005, 0.329),
    (0.283, 0.141, 0.458),
    (0.254, 0.265, 0.530),
    (0.207, 0.372, 0.553),
    (0.164, 0.471, 0.558),
    (0.128, 0.567, 0.551),
    (0.135, 0.659, 0.518),
    (0.267, 0.749, 0.441),
    (0.478, 0.821, 0.318),
    (0.741, 0.873, 0.150),
    (0.993, 0.906, 0.144),
]


def ramp_color(value: float, lo: float, hi: float) -> str:
    t = 0.0 if hi <= lo else min(1.0, max(0.0, (value - lo) / (hi - lo)))
    pos = t * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    f = pos - i
    rgb = [a + (b - a) * f for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#" + "".join(f"{round(255 * c):02x}" for c in rgb)


def to_dot(bm: BMGraph, coloring: Optional[str] = None) -> str:
    sizes = bm.sizes
    biggest = max(sizes, default=1)
    lines = ["graph BMGraph {", "  node [shape=circle, style=filled];"]
    col = bm.colorings.get(coloring) if coloring else None
    for i, size in enumerate(sizes):
        width = 0.3 + 1.7 * (size / biggest) ** 0.5
        attrs = [f'label="{i}"', f"width={width:.3f}", f"size={size}"]
        if col is not None:
            attrs.append(f'fillcolor="{ramp_color(col["values"][i], col["min"], col["max"])}"')
        lines.append(f"  {i} [{', '.join(attrs)}];")
    for a, b in bm.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
