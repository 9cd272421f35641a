"""Benchmark sweeps over generated or on-disk graph pairs."""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mpiso.formats import BenchRecord, discover_tc15_pairs, read_graph
from mpiso.matcher import LimitExceeded, MatchConfig, match
from mpiso.testkit import GeneratorSpec, isomorphic_pair


@dataclass(frozen=True)
class PairJob:
    family: str
    M: int
    pair_id: str
    spec: GeneratorSpec | None = None
    perm_seed: int | None = None
    path_a: Path | None = None
    path_b: Path | None = None
    fmt: str | None = None


def run_job(job: PairJob, config: MatchConfig, mode: str) -> BenchRecord:
    """One pair -> one record; failures become ``error``/``limit`` rows."""
    M = job.M
    try:
        if job.spec is not None:
            g1, g2, _ = isomorphic_pair(job.spec, job.perm_seed)
        else:
            g1, g2 = read_graph(job.path_a, job.fmt), read_graph(job.path_b, job.fmt)
        M = g1.num_nodes
        v = match(g1, g2, config, mode)
    except LimitExceeded:
        return BenchRecord(job.family, M, job.pair_id, "limit")
    except Exception:  # noqa: BLE001 - isolate the pair, keep the sweep going
        return BenchRecord(job.family, M, job.pair_id, "error")
    return BenchRecord(job.family, M, job.pair_id, v.isomorphic, v.probes, v.rounds, v.wall_time_us)


def sweep_jobs(kind: str, sizes: list[int], pairs: int, rho: float = 0.05, seed: int = 0) -> list[PairJob]:
    jobs = []
    for M in sizes:
        for k in range(pairs):
            gseed = seed * 1_000_003 + M * 1009 + k
            if kind == "random":
                spec = GeneratorSpec("random", {"n": M, "rho": rho}, seed=gseed, connected=True)
                family = f"random_r{rho:g}"
            elif kind == "cycle":
                spec = GeneratorSpec("cycle", {"n": M}, seed=gseed)
                family = "cycle"
            elif kind == "mesh2d":
                side = max(1, round(M ** 0.5))
                spec = GeneratorSpec("mesh2d", {"rows": side, "cols": max(1, M // side)}, seed=gseed)
                family = "mesh2d"
            elif kind == "mesh3d":
                side = max(1, round(M ** (1 / 3)))
                spec = GeneratorSpec("mesh3d", {"x": side, "y": side, "z": max(1, M // side**2)}, seed=gseed)
                family = "mesh3d"
            else:
                raise ValueError(f"unknown sweep family {kind!r}")
            jobs.append(PairJob(family, M, f"{family}_M{M}_{k:03d}", spec, perm_seed=gseed + 7))
    return jobs


def directory_jobs(root: str | Path, fmt: str | None = None) -> list[PairJob]:
    jobs = []
    for family, pair_id, a, b in discover_tc15_pairs(root):
        size = pair_id.split("_s")[-1].split(".")[0]
        jobs.append(PairJob(family, int(size), pair_id, path_a=a, path_b=b, fmt=fmt))
    return jobs


def run_jobs(jobs: list[PairJob], config: MatchConfig, mode: str = "supervised",
             workers: int = 1) -> list[BenchRecord]:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_job, jobs, [config] * len(jobs), [mode] * len(jobs)))
    else:
        records = [run_job(j, config, mode) for j in jobs]
    return sorted(records, key=lambda r: (r.family, r.M, r.pair_id))


def medians(records: list[BenchRecord]) -> list[BenchRecord]:
    """Median row per (family, M) over pairs that produced a verdict."""
    groups: dict[tuple[str, int], list[BenchRecord]] = {}
    for r in records:
        if isinstance(r.verdict, bool):
            groups.setdefault((r.family, r.M), []).append(r)
    out = []
    for (family, M), rs in sorted(groups.items()):
        out.append(BenchRecord(
            family, M, "median", "median",
            int(statistics.median(r.probes for r in rs)),
            int(statistics.median(r.rounds for r in rs)),
            statistics.median(r.wall_time_us for r in rs),
        ))
    return out


def with_medians(records: list[BenchRecord]) -> list[BenchRecord]:
    """Records with each (family, M) group followed by its median row."""
    meds = {(m.family, m.M): m for m in medians(records)}
    out: list[BenchRecord] = []
    for i, r in enumerate(records):
        out.append(r)
        last = i + 1 == len(records) or (records[i + 1].family, records[i + 1].M) != (r.family, r.M)
        if last and (r.family, r.M) in meds:
            out.append(meds[(r.family, r.M)])
    return out


def loglog_slope(sizes, times) -> float:
    """Least-squares slope of log(time) against log(size)."""
    return float(np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(times, float)), 1)[0])
