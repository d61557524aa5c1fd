"""Command line entry point: ``chromatlas <command> ...``.

Commands: generate, chromatic, extremal, pca, ballmapper, verify, cache-compact.
Exit status is 0 only when the command ran and every check it performed passed.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import ballmapper as bmp
from .chromatic import ChromaticEngine, chromatic_polynomials
from .enumerate import Graph6StreamError, enumerate_connected, read_graph6_stream, write_graph6_stream
from .extremal import pareto_extremal
from .graph import from_graph6
from .pca import (
    build_point_cloud,
    log_minmax_normalize,
    pca,
    project,
    write_loadings_csv,
    write_scores_csv,
    write_variance_csv,
)
from .records import PolynomialCache, SelfCheckError, make_records, read_records, self_check, write_records
from .verify import run_scopes

CACHE_ENV = "CHROMATLAS_CACHE_DIR"
CACHE_FILE = "polynomials.jsonl"
LARGE_ORDER = 10
CHUNK = 8192
COLORS = ("m", "sigma", "eps_irr", "pc1", "pc2", "minimal", "maximal")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    orders: list[int] = field(default_factory=list)
    epsilons: list[float] = field(default_factory=list)
    pca_mode: str = "fixed"
    outdir: Optional[str] = None
    workers: int = 1
    cache: Optional[str] = None
    seed: Optional[int] = None

    def __post_init__(self):
        bad = [n for n in self.orders if not 1 <= n <= LARGE_ORDER]
        if bad:
            raise UsageError(f"orders must lie in 1..{LARGE_ORDER}, got {bad}")
        if any(not e > 0 for e in self.epsilons):
            raise UsageError(f"epsilons must be positive, got {self.epsilons}")
        if self.pca_mode not in ("fixed", "mixed"):
            raise UsageError(f"PCA mode must be fixed or mixed, got {self.pca_mode!r}")
        if self.workers < 1:
            raise UsageError(f"workers must be positive, got {self.workers}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


CONFIG_KEYS = {
    "orders": ("orders", _int_list),
    "epsilon": ("epsilons", _float_list),
    "epsilons": ("epsilons", _float_list),
    "pca_mode": ("pca_mode", str),
    "mode": ("pca_mode", str),
    "outdir": ("outdir", str),
    "workers": ("workers", int),
    "cache": ("cache", str),
    "seed": ("seed", int),
}


def read_config_file(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().lower()
            if not sep or key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: expected one of {sorted(CONFIG_KEYS)} as key=value")
            attr, conv = CONFIG_KEYS[key]
            try:
                out[attr] = conv(value.strip())
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the config file, which overrides the environment."""
    values: dict = {}
    env_dir = os.environ.get(CACHE_ENV)
    if env_dir:
        values["cache"] = os.path.join(env_dir, CACHE_FILE)
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for attr, flag in (("orders", "orders"), ("epsilons", "epsilon"), ("pca_mode", "mode"),
                       ("outdir", "outdir"), ("workers", "workers"), ("cache", "cache"), ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            values[attr] = value
    if getattr(args, "no_cache", False):
        values["cache"] = None
    return RunConfig(**values)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# commands


def cmd_generate(args, cfg: RunConfig) -> int:
    n = args.order
    if n >= LARGE_ORDER and not args.large:
        raise UsageError(f"order {n} needs --large")
    graphs = enumerate_connected(n, args.augment, workers=cfg.workers)
    if args.out in (None, "-"):
        count = write_graph6_stream(graphs, sys.stdout)
        _log(f"{count} connected graphs of order {n}")
    else:
        tmp = f"{args.out}.tmp"
        with open(tmp, "w") as fh:
            count = write_graph6_stream(_progress(graphs, args.large, "generated"), fh)
        os.replace(tmp, args.out)
        print(f"{count} connected graphs of order {n}")
    return 0


def _progress(items, enabled: bool, verb: str, every: int = 100_000):
    start = time.monotonic()
    for i, item in enumerate(items, start=1):
        if enabled and i % every == 0:
            _log(f"{verb} {i} ({time.monotonic() - start:.0f}s)")
        yield item


def cmd_chromatic(args, cfg: RunConfig) -> int:
    try:
        graphs = list(read_graph6_stream(args.input))
    except Graph6StreamError as exc:
        raise UsageError(f"{args.input}: {exc}") from exc
    if any(g.n >= LARGE_ORDER for g in graphs) and not args.large:
        raise UsageError(f"input holds graphs of order >= {LARGE_ORDER}; pass --large")
    cache = PolynomialCache(cfg.cache)
    keys = [g.to_graph6() for g in graphs]
    todo = [i for i, k in enumerate(keys) if cache.get(k) is None]
    fresh = chromatic_polynomials((graphs[i] for i in todo), workers=cfg.workers, engine=ChromaticEngine())
    try:
        for i, poly in zip(todo, _progress(fresh, args.large, "computed")):
            cache.put(keys[i], poly)
    finally:
        cache.close()
    polys = [cache.get(k) for k in keys]
    if args.self_check:
        for g, p in zip(graphs, polys):
            problems = self_check(g, p)
            if problems:
                raise SelfCheckError(g.to_graph6(), problems)

    def records():
        for start in range(0, len(graphs), CHUNK):
            yield from make_records(graphs[start:start + CHUNK], polys[start:start + CHUNK])

    count = write_records(records(), args.out)
    print(f"{count} records written to {args.out} ({len(todo)} computed, {count - len(todo)} from cache)")
    return 0


def cmd_extremal(args, cfg: RunConfig) -> int:
    recs = list(read_records(args.input))
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, rec in enumerate(recs):
        groups[(rec.n, rec.m)].append(i)
    rows = []
    for (n, m), idx in sorted(groups.items()):
        report = pareto_extremal([(recs[i].graph6, recs[i].q[:n]) for i in idx], n, m)
        lo, hi = set(report.minimal_set), set(report.maximal_set)
        for i in idx:
            recs[i].flags["chromatically_minimal"] = recs[i].graph6 in lo
            recs[i].flags["chromatically_maximal"] = recs[i].graph6 in hi
        for kind, vectors in (("min", report.minimal_vectors), ("max", report.maximal_vectors)):
            for vec in vectors:
                witnesses = [recs[i].graph6 for i in idx if tuple(recs[i].q[:n]) == vec]
                rows.append([n, m, report.size, kind, " ".join(map(str, vec)), len(witnesses), " ".join(witnesses)])
    out = args.out or args.input
    write_records(recs, out)
    report_path = args.report or str(Path(out).with_suffix("")) + ".extremal.csv"
    with open(report_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m", "group_size", "kind", "vector", "count", "witnesses"])
        w.writerows(rows)
    print(f"{len(groups)} groups, {len(rows)} extremal vectors; report in {report_path}")
    return 0


def _load_cloud(path: str, cfg: RunConfig, mode: str, normalize: str):
    recs = [r for r in read_records(path) if not cfg.orders or r.n in cfg.orders]
    if not recs:
        raise UsageError("no records match the requested orders")
    try:
        cloud = build_point_cloud(recs, mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    groups = cloud.orders if normalize == "per-order" else None
    return recs, log_minmax_normalize(cloud, groups)


def cmd_pca(args, cfg: RunConfig) -> int:
    recs, cloud = _load_cloud(args.input, cfg, cfg.pca_mode, args.normalize)
    res = pca(cloud)
    outdir = Path(cfg.outdir or Path(args.input).parent)
    outdir.mkdir(parents=True, exist_ok=True)
    k = min(args.components, cloud.shape[1])
    write_variance_csv(res, outdir / f"{args.prefix}variance.csv")
    write_loadings_csv(res, outdir / f"{args.prefix}loadings.csv")
    extra = {"n": [r.n for r in recs], "m": [r.m for r in recs]}
    write_scores_csv(cloud.row_ids, project(cloud, res, k), outdir / f"{args.prefix}scores.csv", extra)
    nev = ", ".join(f"{x:.5f}" for x in res.nev[:3])
    print(f"PCA ({cfg.pca_mode}) over {cloud.shape[0]} graphs x {cloud.shape[1]} features; nev = ({nev}, ...)")
    return 0


def cmd_ballmapper(args, cfg: RunConfig) -> int:
    if not cfg.epsilons:
        raise UsageError("ballmapper needs --epsilon (or epsilon= in the config file)")
    colors = [c for c in (args.color or "").split(",") if c]
    unknown = [c for c in colors if c not in COLORS]
    if unknown:
        raise UsageError(f"unknown colourings {unknown}; choose from {list(COLORS)}")
    recs, cloud = _load_cloud(args.input, cfg, cfg.pca_mode, args.normalize)
    functions = _color_functions(recs, cloud, colors)
    order = None
    if cfg.seed is not None:
        order = np.random.default_rng(cfg.seed).permutation(cloud.shape[0])
    outdir = Path(cfg.outdir or Path(args.input).parent)
    outdir.mkdir(parents=True, exist_ok=True)
    for eps in cfg.epsilons:
        bm = bmp.ball_mapper(cloud, eps, order)
        for name in colors:
            bm = bmp.color_by(bm, functions[name], name)
        stem = outdir / f"{args.prefix}eps{eps:g}"
        bmp.dump_json(bm, f"{stem}.json", include_members=args.members)
        with open(f"{stem}.dot", "w") as fh:
            fh.write(bmp.to_dot(bm, colors[0] if colors else None))
        top = bmp.largest_clusters(bm, 4)
        path, exact = bmp.longest_induced_path(bm)
        print(
            f"eps={eps:g}: {len(bm.landmarks)} balls, {len(bm.edges)} edges, "
            f"connected={bmp.is_connected(bm)}, top-4 mass={sum(bm.sizes[i] for i in top)}, "
            f"longest induced path={len(path)}{'' if exact else ' (lower bound)'}"
        )
    return 0


def _color_functions(recs, cloud, colors) -> dict[str, np.ndarray]:
    out = {}
    if {"pc1", "pc2"} & set(colors):
        res = pca(cloud)
        scores = project(cloud, res, min(2, cloud.shape[1]))
        out["pc1"] = scores[:, 0]
        if scores.shape[1] > 1:
            out["pc2"] = scores[:, 1]
        elif "pc2" in colors:
            raise UsageError("pc2 colouring needs at least two features")
    for name in colors:
        if name in ("m", "sigma", "eps_irr"):
            attr = "sigma_float" if name == "sigma" else name
            out[name] = np.array([getattr(r, attr) for r in recs], dtype=float)
        elif name in ("minimal", "maximal"):
            flag = f"chromatically_{name}"
            vals = [r.flags.get(flag) for r in recs]
            if any(v is None for v in vals):
                raise UsageError(f"{name} colouring needs extremal flags; run `chromatlas extremal` first")
            out[name] = np.array(vals, dtype=float)
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    scopes = args.scope or ["exhaustive:6"]
    results = run_scopes(scopes)
    for res in results:
        print(res.summary())
        for failure in res.failures:
            print(f"  {failure}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} suites passed")
    return 0 if ok else 1


def cmd_cache_compact(args, cfg: RunConfig) -> int:
    if not cfg.cache:
        raise UsageError(f"no cache configured (use --cache, cache= in the config, or {CACHE_ENV})")
    count = PolynomialCache(cfg.cache).compact()
    print(f"{count} cache entries in {cfg.cache}")
    return 0


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--workers", type=int, help="worker processes (output is identical for any count)")
    common.add_argument("--cache", help=f"polynomial cache file (default ${CACHE_ENV}/{CACHE_FILE})")
    common.add_argument("--outdir", help="directory for analysis outputs")
    common.add_argument("--seed", type=int, help="seed for shuffled landmark order")

    parser = argparse.ArgumentParser(prog="chromatlas", description="Chromatic polynomial atlas of small connected graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="enumerate connected graphs of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out", help="graph6 output file (default stdout)")
    p.add_argument("--augment", choices=("max", "min"), default="max", help="canonical augmentation order")
    p.add_argument("--large", action="store_true", help=f"allow order {LARGE_ORDER}")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("chromatic", parents=[common], help="compute graph records from a graph6 file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--self-check", action="store_true", help="run coefficient oracles on every polynomial")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--large", action="store_true", help=f"allow order {LARGE_ORDER} input")
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("extremal", parents=[common], help="flag chromatically minimal/maximal records")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="records output (default: rewrite input)")
    p.add_argument("--report", help="extremal report CSV")
    p.set_defaults(func=cmd_extremal)

    for name, func, helptext in (("pca", cmd_pca, "principal components of the coefficient cloud"),
                                 ("ballmapper", cmd_ballmapper, "Ball Mapper graph of the coefficient cloud")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--mode", choices=("fixed", "mixed"))
        p.add_argument("--orders", type=_int_list, help="restrict to these orders, e.g. 7,8,9")
        p.add_argument("--normalize", choices=("global", "per-order"), default="global")
        p.add_argument("--prefix", default="pca-" if name == "pca" else "bm-")
        p.set_defaults(func=func)
    sub.choices["pca"].add_argument("--components", type=int, default=2, help="score columns to write")
    bm = sub.choices["ballmapper"]
    bm.add_argument("--epsilon", type=_float_list, help="one or more radii")
    bm.add_argument("--color", help=f"comma list from {','.join(COLORS)}")
    bm.add_argument("--members", action="store_true", help="include ball members in JSON")

    p = sub.add_parser("verify", parents=[common], help="run oracle suites")
    p.add_argument("--scope", action="append",
                   help="exhaustive:N | compression:COUNT:NMAX:SEED | records:PATH (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache-compact", parents=[common], help="deduplicate and sort the polynomial cache")
    p.set_defaults(func=cmd_cache_compact)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except SelfCheckError as exc:
        _log(f"self-check failed for {exc.graph6}: {'; '.join(exc.problems)}")
        return 1
    except (UsageError, OSError, ValueError) as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
