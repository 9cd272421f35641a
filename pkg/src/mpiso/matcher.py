"""Progressive node matching driven by fingerprint comparisons.

Two drivers share the same machinery:

* :func:`match_exhaustive` probes one unmatched node at a time and accepts
  the first candidate whose fingerprint equals the probe's.
* :func:`match_supervised` first runs both graphs in lockstep and pairs nodes
  straight from values that are unique inside their cell, probing only when
  the lockstep stops producing pairs.

Accepted pairs are never revisited.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from mpiso.canonical import CanonicalGraph, canonicalize, cell_structures_match
from mpiso.field import ConstantSchedule, derive_constants
from mpiso.fingerprint import first_difference, iterate_rounds, map_signature
from mpiso.graph import Graph, validate_mapping
from mpiso.pattern import anchored_pattern, initial_pattern, mirrored_pattern, probe_pattern
from mpiso.state import MatchState


class LimitExceeded(RuntimeError):
    pass


class NoMultiNodeCell(ValueError):
    pass


class UnsoundMatch(RuntimeError):
    """A completed matching failed the final edge check (hash collision)."""


@dataclass
class MatchConfig:
    seed: int = 0
    iterations: int | None = None  # default: M - 1
    max_probes: int | None = None
    timeout_ms: float | None = None

    def rounds_for(self, n: int) -> int:
        if self.iterations is not None:
            if self.iterations < 1:
                raise ValueError("iterations must be positive")
            return self.iterations
        return max(1, n - 1)


@dataclass
class Verdict:
    isomorphic: bool
    mapping: tuple[int, ...] | None
    probes: int = 0
    rounds: int = 0
    wall_time_us: int = 0
    seed: int = 0
    mode: str = "supervised"
    reason: str = ""
    connected: bool = True
    history: list[tuple[int, int]] = field(default_factory=list, repr=False)


_MISMATCH, _PROGRESS, _STUCK = "mismatch", "progress", "stuck"


class _Run:
    """Counters, limits and the shared schedule of one comparison."""

    def __init__(self, c1: CanonicalGraph, c2: CanonicalGraph, config: MatchConfig):
        self.c1, self.c2 = c1, c2
        self.config = config
        n = c1.nu_count
        self.L = config.rounds_for(n)
        self.schedule: ConstantSchedule = derive_constants(
            config.seed, c1.partition.num_cells, self.L, n
        )
        self.probes = 0
        self.rounds = 0
        self.start = time.perf_counter()
        self.deadline = None if config.timeout_ms is None else self.start + config.timeout_ms / 1000

    def check_time(self) -> None:
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise LimitExceeded(f"timeout of {self.config.timeout_ms} ms exceeded")

    def count_probe(self) -> None:
        self.probes += 1
        if self.config.max_probes is not None and self.probes > self.config.max_probes:
            raise LimitExceeded(f"probe budget of {self.config.max_probes} exceeded")
        self.check_time()

    def rows(self, c: CanonicalGraph, p) -> list[np.ndarray]:
        fp = map_signature(c, p, self.schedule, self.L)
        self.rounds += self.L
        return fp.rows

    def same_as(self, rows1: list[np.ndarray], p2) -> bool:
        diff, done = first_difference(rows1, self.c2, p2, self.schedule)
        self.rounds += done
        return diff is None

    def pick(self, state: MatchState) -> int:
        """Unmatched node of the cell with fewest unmatched nodes, lowest position first."""
        cell_of = self.c1.partition.cell_of
        remaining: dict[int, int] = {}
        for i in state.unmatched1:
            r = int(cell_of[i])
            remaining[r] = remaining.get(r, 0) + 1
        return min(state.unmatched1, key=lambda i: (remaining[int(cell_of[i])], i))

    def candidates(self, state: MatchState, i: int) -> list[int]:
        r = self.c1.partition.cell_of[i]
        return sorted(j for j in state.unmatched2 if self.c2.partition.cell_of[j] == r)

    def probe_step(self, state: MatchState) -> bool:
        """Match one node by probing; False when no candidate agrees."""
        i = self.pick(state)
        p1 = probe_pattern(self.c1, i, state, self.schedule)
        rows1 = self.rows(self.c1, p1)
        for j in self.candidates(state, i):
            self.count_probe()
            p2 = mirrored_pattern(self.c2, j, state, p1, self.schedule)
            if self.same_as(rows1, p2):
                state.add(i, j)
                return True
        return False

    def lockstep(self, state: MatchState) -> str:
        """Run both graphs side by side and pair nodes with cell-unique values."""
        c1, c2, s = self.c1, self.c2, self.schedule
        cell1, cell2 = c1.partition.cell_of, c2.partition.cell_of
        it1 = iterate_rounds(c1, anchored_pattern(c1, state, 1, s), s, self.L)
        it2 = iterate_rounds(c2, anchored_pattern(c2, state, 2, s), s, self.L)
        for st1, st2 in zip(it1, it2):
            self.rounds += 2
            self.check_time()
            g1, g2 = st1.gamma, st2.gamma
            o1 = np.lexsort((g1, cell1))
            o2 = np.lexsort((g2, cell2))
            v1 = g1[o1]
            if not np.array_equal(v1, g2[o2]):
                return _MISMATCH
            cells = cell1[o1]
            same_prev = np.zeros(len(v1), dtype=bool)
            same_prev[1:] = (v1[1:] == v1[:-1]) & (cells[1:] == cells[:-1])
            dup = same_prev.copy()
            dup[:-1] |= same_prev[1:]
            new = []
            for t in np.flatnonzero(~dup):
                x, y = int(o1[t]), int(o2[t])
                x_free, y_free = x in state.unmatched1, y in state.unmatched2
                if x_free and y_free:
                    new.append((x, y))
                elif x_free or y_free or state.key1[x] != state.key2[y]:
                    return _MISMATCH
            if new:
                for x, y in new:
                    state.add(x, y)
                return _PROGRESS
        return _STUCK

    def complete(self, state: MatchState, supervised: bool) -> tuple[bool, str]:
        while not state.complete:
            if supervised:
                res = self.lockstep(state)
                if res == _MISMATCH:
                    return False, "sub-fingerprint mismatch"
                if res == _PROGRESS:
                    continue
            if not self.probe_step(state):
                return False, "no candidate matched probe"
        return True, "all nodes matched"

    def verdict(self, state: MatchState | None, ok: bool, reason: str, mode: str) -> Verdict:
        mapping = None
        history: list[tuple[int, int]] = []
        if ok and state is not None:
            mapping = _original_mapping(self.c1, self.c2, state)
            if not validate_mapping(self.c1.graph, self.c2.graph, mapping):
                raise UnsoundMatch(f"matched mapping fails edge check (seed {self.config.seed})")
        if state is not None:
            history = list(state.matched)
        return Verdict(
            isomorphic=ok,
            mapping=tuple(mapping) if mapping is not None else None,
            probes=self.probes,
            rounds=self.rounds,
            wall_time_us=int((time.perf_counter() - self.start) * 1e6),
            seed=self.config.seed,
            mode=mode,
            reason=reason,
            connected=self.c1.graph.is_connected() and self.c2.graph.is_connected(),
            history=history,
        )


def _original_mapping(c1: CanonicalGraph, c2: CanonicalGraph, state: MatchState) -> list[int]:
    mapping = [0] * c1.nu_count
    for i, j in state.matched:
        mapping[int(c1.nodes[i])] = int(c2.nodes[j])
    return mapping


def _singleton_state(c1: CanonicalGraph, c2: CanonicalGraph) -> MatchState:
    pairs = [
        (a[0], b[0])
        for a, b in zip(c1.partition.cells, c2.partition.cells)
        if len(a) == 1
    ]
    return MatchState(c1.nu_count, pairs)


def _quick_reject(g1: Graph, g2: Graph, mode: str, config: MatchConfig, start: float) -> Verdict | None:
    reason = None
    if g1.num_nodes != g2.num_nodes:
        reason = "node counts differ"
    elif g1.num_edges != g2.num_edges:
        reason = "edge counts differ"
    if reason is None:
        return None
    return Verdict(False, None, wall_time_us=int((time.perf_counter() - start) * 1e6),
                   seed=config.seed, mode=mode, reason=reason,
                   connected=g1.is_connected() and g2.is_connected())


def _prepare(g1: Graph, g2: Graph, config: MatchConfig, mode: str):
    start = time.perf_counter()
    rejected = _quick_reject(g1, g2, mode, config, start)
    if rejected is not None:
        return rejected, None
    c1, c2 = canonicalize(g1), canonicalize(g2)
    run = _Run(c1, c2, config)
    run.start = start
    if not cell_structures_match(c1.partition, c2.partition):
        return run.verdict(None, False, "cell structures differ", mode), None
    return None, run


def match_exhaustive(g1: Graph, g2: Graph, config: MatchConfig | None = None) -> Verdict:
    """Probe-by-probe matching: one candidate fingerprint per trial pairing."""
    config = config or MatchConfig()
    early, run = _prepare(g1, g2, config, "exhaustive")
    if early is not None:
        return early
    s = run.schedule
    rows0 = run.rows(run.c1, initial_pattern(run.c1, s))
    if not run.same_as(rows0, initial_pattern(run.c2, s)):
        return run.verdict(None, False, "initial fingerprints differ", "exhaustive")
    state = _singleton_state(run.c1, run.c2)
    ok, reason = run.complete(state, supervised=False)
    return run.verdict(state, ok, reason, "exhaustive")


def match_supervised(g1: Graph, g2: Graph, config: MatchConfig | None = None) -> Verdict:
    """Lockstep matching that pairs cell-unique values directly, probing only when stuck."""
    config = config or MatchConfig()
    early, run = _prepare(g1, g2, config, "supervised")
    if early is not None:
        return early
    state = _singleton_state(run.c1, run.c2)
    ok, reason = run.complete(state, supervised=True)
    return run.verdict(state, ok, reason, "supervised")


def match(g1: Graph, g2: Graph, config: MatchConfig | None = None, mode: str = "supervised") -> Verdict:
    if mode == "supervised":
        return match_supervised(g1, g2, config)
    if mode == "exhaustive":
        return match_exhaustive(g1, g2, config)
    raise ValueError(f"unknown mode {mode!r}")


def find_automorphisms(g: Graph, config: MatchConfig | None = None, count: int = 1,
                       mode: str = "supervised") -> list[Verdict]:
    """Up to ``count`` non-identity automorphisms of ``g``.

    Each multi-node cell in turn (smallest first) is the restricted cell:
    its lowest node is forced onto a different node of the same cell and
    the remaining nodes are matched as usual.  Later automorphisms use
    forced pairs not tried by earlier ones.
    """
    config = config or MatchConfig()
    c = canonicalize(g)
    multi = sorted((cell for cell in c.partition.cells if len(cell) > 1), key=lambda cell: (len(cell), cell[0]))
    if not multi:
        raise NoMultiNodeCell("every cell is a singleton; no automorphism can be searched")
    found: list[Verdict] = []
    supervised = mode == "supervised"
    for cell in multi:
        i = cell[0]
        for j in cell[1:]:
            run = _Run(c, c, config)
            state = _singleton_state(c, c)
            p1 = probe_pattern(c, i, state, run.schedule)
            rows1 = run.rows(c, p1)
            run.count_probe()
            if not run.same_as(rows1, mirrored_pattern(c, j, state, p1, run.schedule)):
                continue
            state.add(i, j)
            ok, reason = run.complete(state, supervised)
            if not ok:
                continue
            v = run.verdict(state, True, f"forced pair ({int(c.nodes[i])}, {int(c.nodes[j])})", mode)
            found.append(v)
            if len(found) >= count:
                return found
    return found


def find_automorphism(g: Graph, config: MatchConfig | None = None, mode: str = "supervised") -> Verdict:
    """First non-identity automorphism found, or a negative verdict."""
    found = find_automorphisms(g, config, 1, mode)
    if found:
        return found[0]
    return Verdict(False, None, seed=(config or MatchConfig()).seed, mode=mode,
                   reason="no non-identity automorphism found", connected=g.is_connected())
