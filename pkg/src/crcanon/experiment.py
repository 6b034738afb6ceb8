"""Trial runner for the statistical checks: class statistics on the complex
part, generator frequencies, canonicality spot checks and runtime scaling.
"""
from __future__ import annotations

import csv
import json
import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Iterable, Sequence

from .canon import canon
from .decompose import two_core
from .errors import TooLarge
from .graph import Graph, complex_part
from .identify import graph_identifiable
from .models import ContiguousParams, gnp, sample_contiguous
from .refine import cr_stable
from .symmetry import (analyze_complex, brute_force_aut, detect_symmetries, tree_types,
                       verify_group_structure)

MODELS = ("gnp", "contiguous")
NEAR_CRITICAL_DELTA = 0.25


def regime(n: int, lam: float) -> str:
    """Tag by delta = lam - 1 against the n^(-1/3) window."""
    delta = lam - 1.0
    w = n ** (-1.0 / 3.0)
    if delta <= -w:
        return "subcritical"
    if abs(delta) < w:
        return "critical-window"
    if delta < NEAR_CRITICAL_DELTA:
        return "near-critical"
    return "strictly-supercritical"


@dataclass
class TrialRecord:
    model: str
    seed: int
    n: int
    lam: float
    regime: str
    complex_size: int = 0
    core_size: int = 0
    kernel_size: int = 0
    duplex_classes: int = 0
    max_class_size: int = 0
    a1: int = 0  # generator families of Aut(core), bare core
    a2: int = 0
    a3: int = 0
    coverage: bool = True  # every duplex class is an interchangeable pair
    group_checked: bool = False
    group_ok: bool | None = None  # commuting independent involutions
    group_full: bool | None = None  # generated group = full colored group
    generated_order: int | None = None
    full_order: int | None = None
    identifiable: bool | None = None
    canon_status: str | None = None
    canonical: bool | None = None
    wall_time: float = 0.0

    def consistent(self) -> bool:
        return (2 * self.duplex_classes <= self.core_size
                and self.core_size <= self.complex_size
                and self.kernel_size <= self.core_size)


@dataclass(frozen=True)
class RunConfig:
    model: str
    n: int
    lam: float
    trials: int
    seed0: int = 0
    label: str = ""
    near_critical: bool = False
    check_classes: bool = True  # CR class statistics on the complex part
    check_group: bool = True
    check_canon: bool = False
    check_identifiable: bool = False
    relabelings: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown run keys: {sorted(unknown)}")
        cfg = cls(**d)
        if cfg.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {cfg.model!r}")
        if cfg.n < 1 or cfg.trials < 0 or cfg.lam <= 0:
            raise ValueError(f"invalid run parameters: {d}")
        return cfg

    @property
    def name(self) -> str:
        return self.label or f"{self.model}-n{self.n}-l{self.lam:g}"


def sample(model: str, n: int, lam: float, seed: int, near_critical: bool = False) -> Graph:
    if model == "gnp":
        return gnp(n, min(1.0, lam / n), seed)
    return sample_contiguous(ContiguousParams(n, lam, near_critical), seed).graph


def _relabel(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def run_trial(cfg: RunConfig, seed: int) -> TrialRecord:
    g = sample(cfg.model, cfg.n, cfg.lam, seed, cfg.near_critical)
    rec = TrialRecord(cfg.model, seed, cfg.n, cfg.lam, regime(cfg.n, cfg.lam))
    t0 = time.perf_counter()
    h, _ = complex_part(g)
    if h.n:
        dec = two_core(h)
        core = dec.core
        rec.complex_size = h.n
        rec.core_size = core.n
        rec.kernel_size = sum(1 for d in core.degrees() if d >= 3)
        if cfg.check_classes:
            # class statistics: CR on the whole complex part, tree-typed symmetries
            a = analyze_complex(h)
            rec.duplex_classes = len(a.duplex_class_ids)
            rec.max_class_size = a.max_class_size
            rec.coverage = not a.failing
        # generator families of the bare core's automorphism group
        core_colors = cr_stable(core).class_of if cfg.check_group else range(core.n)
        bare = detect_symmetries(core, None, coloring=core_colors)
        rec.a1, rec.a2, rec.a3 = len(bare.a1), len(bare.a2), len(bare.a3)
        if cfg.check_group:
            try:
                full = brute_force_aut(core, core_colors, bound=0)
            except TooLarge:
                full = None
            if full is not None:
                v = verify_group_structure(bare, core, core_colors, full=full)
                rec.group_checked = True
                rec.group_ok = v.ok
                rec.group_full = v.equals_full
                rec.generated_order = v.generated_order
                rec.full_order = v.full_order
    if cfg.check_identifiable:
        rec.identifiable = graph_identifiable(g).ok
    if cfg.check_canon:
        form = canon(g)
        rec.canon_status = form.status
        rng = random.Random(seed)
        certs = {canon(_relabel(g, rng)).certificate for _ in range(cfg.relabelings)}
        rec.canonical = certs == {form.certificate} if form.status != "not_canonizable" else None
    rec.wall_time = time.perf_counter() - t0
    return rec


def _rate(values: Iterable[bool]) -> float | None:
    vals = list(values)
    return sum(vals) / len(vals) if vals else None


def _median(values: Iterable[float]) -> float | None:
    vals = list(values)
    return statistics.median(vals) if vals else None


def summarize(records: Sequence[TrialRecord]) -> dict[str, Any]:
    rs = list(records)
    grp = [r for r in rs if r.group_checked]
    canon_rs = [r for r in rs if r.canon_status is not None]
    t2 = [r.max_class_size <= 2 and r.coverage and r.duplex_classes <= 15 for r in rs]
    return {
        "trials": len(rs),
        "complex_size_median": _median(r.complex_size for r in rs),
        "core_size_median": _median(r.core_size for r in rs),
        "complex_empty_rate": _rate(r.complex_size == 0 for r in rs),
        "duplex_count_median": _median(r.duplex_classes for r in rs),
        "max_class_le2_rate": _rate(r.max_class_size <= 2 for r in rs),
        "coverage_rate": _rate(r.coverage for r in rs),
        "duplex_le15_rate": _rate(r.duplex_classes <= 15 for r in rs),
        "class_statistics_rate": _rate(t2),
        # trials whose classes are small enough yet hold a non-interchangeable duplex class
        "uncovered_duplex_in_passing": sum(
            1 for r in rs if r.max_class_size <= 2 and r.duplex_classes <= 15 and not r.coverage),
        "a1_nonempty_rate": _rate(r.a1 > 0 for r in rs),
        "a2_nonempty_rate": _rate(r.a2 > 0 for r in rs),
        "a3_nonempty_rate": _rate(r.a3 > 0 for r in rs),
        "group_checked": len(grp),
        "group_ok_rate": _rate(bool(r.group_ok) for r in grp),
        "group_full_rate": _rate(bool(r.group_full) for r in grp),
        "identifiable_rate": _rate(bool(r.identifiable) for r in rs if r.identifiable is not None),
        "canon_resolved_rate": _rate(r.canon_status != "not_canonizable" for r in canon_rs),
        "canonical_rate": _rate(bool(r.canonical) for r in canon_rs if r.canonical is not None),
        "consistent": all(r.consistent() for r in rs),
        "wall_time_median": _median(r.wall_time for r in rs),
    }


def run_config(cfg: RunConfig, workers: int = 1) -> tuple[list[TrialRecord], dict[str, Any]]:
    seeds = [cfg.seed0 + i for i in range(cfg.trials)]
    if workers > 1 and len(seeds) > 1:
        # map keeps seed order, so aggregation does not depend on scheduling
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(run_trial, [cfg] * len(seeds), seeds))
    else:
        records = [run_trial(cfg, s) for s in seeds]
    summary = summarize(records)
    summary["regime"] = regime(cfg.n, cfg.lam)
    return records, summary


_OPS = {"<=": lambda a, b: a <= b, ">=": lambda a, b: a >= b,
        "<": lambda a, b: a < b, ">": lambda a, b: a > b, "==": lambda a, b: a == b}


def check_thresholds(summaries: dict[str, dict], thresholds: Sequence[dict]) -> list[dict]:
    out = []
    for th in thresholds:
        run, metric, op, value = th["run"], th["metric"], th["op"], th["value"]
        if op not in _OPS:
            raise ValueError(f"unknown threshold operator {op!r}")
        if run not in summaries:
            raise ValueError(f"threshold refers to unknown run {run!r}")
        actual = summaries[run].get(metric)
        ok = actual is not None and _OPS[op](actual, value)
        out.append({**th, "actual": actual, "ok": ok})
    return out


def cross_model_check(a: dict, b: dict, tolerance: float = 0.15) -> dict[str, Any]:
    """Compare class-statistics rates of two summaries at matched lambda."""
    keys = ("max_class_le2_rate", "coverage_rate", "duplex_le15_rate")
    diffs = {}
    for k in keys:
        if a.get(k) is not None and b.get(k) is not None:
            diffs[k] = abs(a[k] - b[k])
    return {"diffs": diffs, "tolerance": tolerance, "ok": all(d <= tolerance for d in diffs.values())}


def load_config(path: str | Path) -> dict:
    data = json.loads(Path(path).read_text())
    if isinstance(data, list):
        data = {"runs": data}
    if "runs" not in data:
        raise ValueError("config needs a 'runs' list")
    return data


def run_experiment(config: dict, out_dir: str | Path | None = None, workers: int = 1) -> dict[str, Any]:
    """Run every configured run; optionally write stats.json and stats.csv."""
    runs = [RunConfig.from_dict(r) for r in config.get("runs", [])]
    names = [r.name for r in runs]
    if len(set(names)) != len(names):
        raise ValueError("run labels must be unique")
    all_records: list[TrialRecord] = []
    summaries: dict[str, dict] = {}
    for cfg in runs:
        records, summary = run_config(cfg, workers)
        all_records.extend(records)
        summaries[cfg.name] = summary
    cross = [
        {**pair, **cross_model_check(summaries[pair["a"]], summaries[pair["b"]], pair.get("tolerance", 0.15))}
        for pair in config.get("cross_model", [])
    ]
    checks = check_thresholds(summaries, config.get("thresholds", []))
    result = {
        "runs": [{"config": asdict(c), "name": c.name, "summary": summaries[c.name]} for c in runs],
        "cross_model": cross,
        "thresholds": checks,
        "ok": all(c["ok"] for c in checks) and all(c["ok"] for c in cross),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "stats.json").write_text(json.dumps(
            {**result, "records": [asdict(r) for r in all_records]}, indent=2))
        with open(out / "stats.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=[f.name for f in fields(TrialRecord)])
            w.writeheader()
            for r in all_records:
                w.writerow(asdict(r))
    return result


@dataclass(frozen=True)
class ScalingRow:
    lam: float
    n: int
    median_time: float


def scaling_probe(lambdas: Sequence[float], sizes: Sequence[int], trials: int = 1,
                  reps: int = 5, seed0: int = 0) -> dict[str, Any]:
    """Median canon wall time per size and the ratios between consecutive sizes."""
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be increasing")
    rows: list[ScalingRow] = []
    ratios: dict[float, list[float]] = {}
    for lam in lambdas:
        times = []
        for n in sizes:
            samples = []
            for t in range(trials):
                g = gnp(n, lam / n, seed0 + t)
                for _ in range(reps):
                    t0 = time.perf_counter()
                    canon(g)
                    samples.append(time.perf_counter() - t0)
            times.append(statistics.median(samples))
            rows.append(ScalingRow(lam, n, times[-1]))
        ratios[lam] = [b / a for a, b in zip(times, times[1:])]
        for i, (a, b) in enumerate(zip(sizes, sizes[1:])):
            # normalize to a doubling when sizes are not exact doublings
            ratios[lam][i] = ratios[lam][i] ** (math.log(2) / math.log(b / a))
    return {"rows": [asdict(r) for r in rows], "ratios": {str(k): v for k, v in ratios.items()}}
