"""Matched-pair bookkeeping shared by pattern construction and matching."""

from __future__ import annotations

from typing import Iterable


class MatchState:
    """Ordered matched pairs plus the unmatched node sets of both graphs.

    Pairs are append-only: the position of a pair in ``matched`` is its key,
    which selects the gamma constant injected for it.
    """

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = ()):
        self.n = n
        self.matched: list[tuple[int, int]] = []
        self.key1: dict[int, int] = {}
        self.key2: dict[int, int] = {}
        self.unmatched1: set[int] = set(range(n))
        self.unmatched2: set[int] = set(range(n))
        for i, j in pairs:
            self.add(i, j)

    def add(self, i: int, j: int) -> int:
        if i not in self.unmatched1 or j not in self.unmatched2:
            raise ValueError(f"pair ({i}, {j}) reuses a matched node")
        k = len(self.matched)
        self.matched.append((i, j))
        self.key1[i] = k
        self.key2[j] = k
        self.unmatched1.discard(i)
        self.unmatched2.discard(j)
        return k

    def side(self, which: int) -> dict[int, int]:
        """Node -> pair key for graph 1 or graph 2."""
        return self.key1 if which == 1 else self.key2

    @property
    def complete(self) -> bool:
        return not self.unmatched1

    def forward(self) -> list[int]:
        """Position mapping graph1 -> graph2; only valid once complete."""
        fwd = [0] * self.n
        for i, j in self.matched:
            fwd[i] = j
        return fwd

    def __len__(self) -> int:
        return len(self.matched)

    def __repr__(self) -> str:
        return f"MatchState(matched={len(self.matched)}/{self.n})"
