"""Message passing on the canonical bipartite graph and the resulting fingerprints.

One round, with per-round scalars ``(a, b, c, d)``::

    psi(E)    = gamma(nu) + a * (sum of lambda over Q(nu) - lambda(E))
    lambda(E) = b * psi(E) + c * psi(E~)          # E~ = other edge of E's xi
    gamma(nu) = d * sum of lambda over Q(nu)

All arithmetic is in the field of :mod:`mpiso.field`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from mpiso import field as F
from mpiso.canonical import CanonicalGraph, CellPartition
from mpiso.field import ConstantSchedule
from mpiso.pattern import InputPattern


class DimensionMismatch(ValueError):
    pass


@dataclass
class MessageState:
    gamma: np.ndarray
    lam: np.ndarray
    psi: np.ndarray
    iteration: int = 0
    edge_updates: int = 0

    @classmethod
    def initial(cls, c: CanonicalGraph, p: InputPattern | np.ndarray) -> "MessageState":
        values = p.values if isinstance(p, InputPattern) else p
        if len(values) != c.nu_count:
            raise DimensionMismatch(f"pattern length {len(values)} != {c.nu_count} nodes")
        zeros = np.zeros(c.edge_count, dtype=np.uint64)
        return cls(np.asarray(values, dtype=np.uint64).copy(), zeros, zeros.copy())


def _node_sums(c: CanonicalGraph, edge_values: np.ndarray) -> np.ndarray:
    return F.segment_sums(edge_values[c.csr_edges], c.csr_starts, c.csr_nonempty, c.nu_count)


def message_round(state: MessageState, c: CanonicalGraph, s: ConstantSchedule, l: int) -> MessageState:
    """Apply round ``l`` (1-based) and return the new state."""
    if not 1 <= l <= s.max_iterations:
        raise ValueError(f"round {l} outside schedule of {s.max_iterations}")
    a, b, cc, d = s.scalars[l - 1]
    at_node = c.edge_nu
    sums = _node_sums(c, state.lam)
    psi = F.add(state.gamma[at_node], F.mul_scalar(F.sub(sums[at_node], state.lam), a))
    twin = psi.reshape(-1, 2)[:, ::-1].reshape(-1)
    lam = F.add(F.mul_scalar(psi, b), F.mul_scalar(twin, cc))
    gamma = F.mul_scalar(_node_sums(c, lam), d)
    return MessageState(gamma, lam, psi, l, state.edge_updates + 3 * c.edge_count)


def sim_sort(gamma: np.ndarray, p: CellPartition) -> np.ndarray:
    """Sort values inside each cell, keeping the cell order."""
    if len(gamma) != len(p.cell_of):
        raise DimensionMismatch(f"{len(gamma)} values for {len(p.cell_of)} nodes")
    return gamma[np.lexsort((gamma, p.cell_of))]


@dataclass
class Fingerprint:
    rows: list[np.ndarray]
    # pre-sort gamma per round, kept only when tracing
    traces: list[np.ndarray] = field(default_factory=list)
    edge_updates: int = 0

    def as_array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, 0), dtype=np.uint64)
        return np.vstack(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


def iterate_rounds(c: CanonicalGraph, p: InputPattern | np.ndarray, s: ConstantSchedule,
                   L: int) -> Iterator[MessageState]:
    """Yield the message state after each of rounds ``1..L``."""
    state = MessageState.initial(c, p)
    for l in range(1, L + 1):
        state = message_round(state, c, s, l)
        yield state


def iterate_rows(c: CanonicalGraph, p: InputPattern, s: ConstantSchedule, L: int) -> Iterator[np.ndarray]:
    for state in iterate_rounds(c, p, s, L):
        yield sim_sort(state.gamma, c.partition)


def map_signature(c: CanonicalGraph, p: InputPattern | np.ndarray, s: ConstantSchedule, L: int,
                  trace: bool = False) -> Fingerprint:
    fp = Fingerprint([])
    for state in iterate_rounds(c, p, s, L):
        fp.rows.append(sim_sort(state.gamma, c.partition))
        if trace:
            fp.traces.append(state.gamma)
        fp.edge_updates = state.edge_updates
    return fp


def fingerprints_equal(g1: Fingerprint, g2: Fingerprint) -> bool:
    if len(g1.rows) != len(g2.rows) or any(r1.shape != r2.shape for r1, r2 in zip(g1.rows, g2.rows)):
        raise DimensionMismatch("fingerprints differ in shape")
    return all(np.array_equal(r1, r2) for r1, r2 in zip(g1.rows, g2.rows))


def first_difference(rows1: list[np.ndarray], c2: CanonicalGraph, p2: InputPattern,
                     s: ConstantSchedule) -> tuple[int | None, int]:
    """Compare a known fingerprint against graph 2's, computed lazily.

    Returns ``(round_of_first_difference or None, rounds_executed)``.
    """
    done = 0
    for l, row in enumerate(iterate_rows(c2, p2, s, len(rows1)), start=1):
        done = l
        if not np.array_equal(row, rows1[l - 1]):
            return l, done
    return None, done


def reference_gammas(c: CanonicalGraph, pattern: list[int], s: ConstantSchedule, L: int,
                     modulus: int | None = F.P) -> list[list[int]]:
    """Slow pure-Python evaluation of the rounds, one edge at a time.

    With ``modulus=None`` the arithmetic is exact over the integers.  Used
    as an oracle for the vectorized path.
    """
    def red(x: int) -> int:
        return x % modulus if modulus is not None else x

    n = c.nu_count
    gamma = [int(v) for v in pattern]
    lam = [0] * c.edge_count
    out = []
    for l in range(1, L + 1):
        a, b, cc, d = s.scalars[l - 1]
        psi = [0] * c.edge_count
        for nu in range(n):
            for e in c.incidence[nu]:
                ext = sum(lam[e2] for e2 in c.incidence[nu] if e2 != e)
                psi[e] = red(gamma[nu] + a * ext)
        for k in range(c.xi_count):
            e1, e2 = c.xi_ends(k)
            lam[e1] = red(b * psi[e1] + cc * psi[e2])
            lam[e2] = red(b * psi[e2] + cc * psi[e1])
        gamma = [red(d * sum(lam[e] for e in c.incidence[nu])) for nu in range(n)]
        out.append(gamma)
    return out
