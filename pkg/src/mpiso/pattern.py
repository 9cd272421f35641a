"""Input patterns injected as the initial node values of the message passing."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from mpiso.canonical import CanonicalGraph
from mpiso.field import ConstantSchedule
from mpiso.state import MatchState


class Role(Enum):
    PROBE = "probe"
    CELL_DEFAULT = "cell"
    MATCHED = "matched"


class PatternError(ValueError):
    pass


class ProbeAlreadyMatched(PatternError):
    pass


class CellMismatch(PatternError):
    pass


@dataclass(frozen=True)
class InputPattern:
    values: np.ndarray  # uint64, indexed by nu position
    roles: tuple[Role, ...]
    keys: tuple[int, ...]  # pair key for MATCHED entries, -1 otherwise
    probe: int | None = None
    probe_cell: int | None = None

    def __len__(self) -> int:
        return len(self.values)


def _fill(c: CanonicalGraph, matched: dict[int, int], s: ConstantSchedule,
          probe: int | None) -> InputPattern:
    n = c.nu_count
    alphas = np.array(s.alphas, dtype=np.uint64)
    values = alphas[c.partition.cell_of] if n else np.zeros(0, dtype=np.uint64)
    roles = [Role.CELL_DEFAULT] * n
    keys = [-1] * n
    for node, k in matched.items():
        values[node] = s.gamma(k)
        roles[node] = Role.MATCHED
        keys[node] = k
    probe_cell = None
    if probe is not None:
        values[probe] = s.beta
        roles[probe] = Role.PROBE
        probe_cell = int(c.partition.cell_of[probe])
    return InputPattern(values, tuple(roles), tuple(keys), probe, probe_cell)


def initial_pattern(c: CanonicalGraph, s: ConstantSchedule) -> InputPattern:
    """Every node gets the constant of its cell."""
    return _fill(c, {}, s, None)


def anchored_pattern(c: CanonicalGraph, state: MatchState, side: int, s: ConstantSchedule) -> InputPattern:
    """Cell constants with matched nodes overwritten by their pair's gamma; no probe."""
    return _fill(c, state.side(side), s, None)


def probe_pattern(c: CanonicalGraph, i: int, state: MatchState, s: ConstantSchedule,
                  side: int = 1) -> InputPattern:
    """Pattern for testing node ``i``: beta at ``i``, gammas at matched nodes."""
    if i in state.side(side):
        raise ProbeAlreadyMatched(f"node {i} is already matched")
    return _fill(c, state.side(side), s, i)


def mirrored_pattern(c2: CanonicalGraph, j: int, state: MatchState, p1: InputPattern,
                     s: ConstantSchedule) -> InputPattern:
    """Graph-2 counterpart of ``p1`` with candidate ``j`` in the probe role.

    Matched graph-2 nodes copy the entry of their graph-1 partner in ``p1``.
    """
    if p1.probe is None:
        raise PatternError("p1 carries no probe node")
    if j in state.key2:
        raise ProbeAlreadyMatched(f"node {j} is already matched")
    if int(c2.partition.cell_of[j]) != p1.probe_cell:
        raise CellMismatch(f"candidate {j} is not in the probe's cell {p1.probe_cell}")
    p2 = _fill(c2, state.key2, s, j)
    for i, m in state.matched:
        p2.values[m] = p1.values[i]
    return p2
