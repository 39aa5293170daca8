"""Dual multi allocation and choosy-strategy pair selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .matching import Matching, PreferenceTable, Side, extended_gs


class PairNotRanked(ValueError):
    pass


@dataclass(frozen=True)
class DualMatching:
    m1: Matching  # A side proposes
    m2: Matching  # B side proposes

    def union(self) -> list[tuple[int, int]]:
        return sorted(set(self.m1.pairs) | set(self.m2.pairs))


class ScoredPair(NamedTuple):
    a: int
    b: int
    love: float
    contrast: float


def dual_multi_allocate(table: PreferenceTable) -> DualMatching:
    """Run the reducing proposal algorithm once per orientation."""
    m1 = extended_gs(table, Side.A).matching
    m2 = extended_gs(table, Side.B).matching
    return DualMatching(m1, m2)


def _desirability(rank: int, list_length: int) -> float:
    if list_length == 1:
        return 1.0
    return (list_length - rank) / (list_length - 1)


def desirabilities(table: PreferenceTable, a: int, b: int) -> tuple[float, float]:
    """How much ``a`` wants ``b`` and ``b`` wants ``a``, each scaled to [0, 1]."""
    ra = table.rank_a(a, b)
    rb = table.rank_b(b, a)
    if ra is None or rb is None:
        raise PairNotRanked(f"{table.labels_a[a]} and {table.labels_b[b]} do not rank each other")
    return (
        _desirability(ra, len(table.prefs_a[a])),
        _desirability(rb, len(table.prefs_b[b])),
    )


def love_degree(table: PreferenceTable, a: int, b: int) -> float:
    da, db = desirabilities(table, a, b)
    return (da + db) / 2


def contrast_degree(table: PreferenceTable, a: int, b: int) -> float:
    da, db = desirabilities(table, a, b)
    return abs(da - db)


def score_pair(table: PreferenceTable, a: int, b: int) -> ScoredPair:
    da, db = desirabilities(table, a, b)
    return ScoredPair(a, b, (da + db) / 2, abs(da - db))


def choosy_filter(
    table: PreferenceTable, dm: DualMatching, love_threshold: float = 0.5
) -> list[ScoredPair]:
    """Score the union of both matchings and keep pairs with love >= threshold.

    Survivors are ordered by love (high first), then contrast (low first),
    then by index.
    """
    scored = [score_pair(table, a, b) for a, b in dm.union()]
    kept = [p for p in scored if p.love >= love_threshold]
    kept.sort(key=lambda p: (-p.love, p.contrast, p.a, p.b))
    return kept
