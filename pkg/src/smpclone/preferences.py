"""Preference lists from metric vectors via weighted Euclidean distance."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .matching import PreferenceTable, validate_instance
from .metrics import METRIC_NAMES, MetricVector


class EmptyCorpus(ValueError):
    pass


class WeightVector(NamedTuple):
    loc: float = 1.0
    nbp: float = 1.0
    nbv: float = 1.0
    mca: float = 1.0
    mce: float = 1.0
    cc: float = 1.0
    nbd: float = 1.0

    def validate(self) -> "WeightVector":
        if any(w < 0 or not math.isfinite(w) for w in self):
            raise ValueError(f"weights must be finite and non-negative: {self}")
        if not any(w > 0 for w in self):
            raise ValueError("at least one weight must be positive")
        return self

    def max_distance(self) -> float:
        """Distance between opposite corners of the unit cube."""
        return math.sqrt(sum(self))


def parse_weights(text: str) -> WeightVector:
    """``"loc=2,cc=3"`` -> WeightVector with unnamed metrics left at 1.0."""
    values = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in METRIC_NAMES:
            raise ValueError(f"bad weight {item!r}; expected one of {', '.join(METRIC_NAMES)}")
        values[key] = float(raw)
    return WeightVector(**values).validate()


class NormalizationStats(NamedTuple):
    mins: tuple[int, ...]
    maxs: tuple[int, ...]

    def ranges(self) -> tuple[int, ...]:
        return tuple(hi - lo for lo, hi in zip(self.mins, self.maxs))

    def apply(self, v: Sequence[float]) -> tuple[float, ...]:
        return tuple(
            (x - lo) / (hi - lo) if hi > lo else 0.0 for x, lo, hi in zip(v, self.mins, self.maxs)
        )


def normalization_stats(
    corpus_a: Sequence[MetricVector], corpus_b: Sequence[MetricVector]
) -> NormalizationStats:
    if not corpus_a or not corpus_b:
        raise EmptyCorpus("both corpora need at least one metric vector")
    both = list(corpus_a) + list(corpus_b)
    return NormalizationStats(
        tuple(min(col) for col in zip(*both)), tuple(max(col) for col in zip(*both))
    )


def normalize(corpus_a: Sequence[MetricVector], corpus_b: Sequence[MetricVector]):
    """Min-max scale every dimension over the union of both corpora.

    Returns ``(normalized_a, normalized_b, stats)``; a constant dimension
    maps to 0.
    """
    stats = normalization_stats(corpus_a, corpus_b)
    return [stats.apply(v) for v in corpus_a], [stats.apply(v) for v in corpus_b], stats


def metric_distance(u: Sequence[float], v: Sequence[float], w: Sequence[float]) -> float:
    if len(u) != len(v) or len(u) != len(w):
        raise ValueError("vectors and weights must have the same dimensionality")
    return math.sqrt(sum(wd * (a - b) ** 2 for a, b, wd in zip(u, v, w)))


def _exact_coefficients(w: Sequence[float], ranges: Sequence[int]) -> tuple[list[int], int]:
    """Integer coefficients c and denominator D with
    squared normalized distance == sum(c_d * diff_d**2) / D for integer diffs."""
    coefs = [Fraction(wd) / (r * r) if r else Fraction(0) for wd, r in zip(w, ranges)]
    denom = 1
    for c in coefs:
        denom = math.lcm(denom, c.denominator)
    return [int(c * denom) for c in coefs], denom


def squared_distance_keys(
    corpus_a: Sequence[MetricVector],
    corpus_b: Sequence[MetricVector],
    w: Sequence[float],
    normalized: bool = True,
) -> tuple[list[list[int]], int]:
    """Exact squared distances as integers over a common denominator.

    Ordering preferences by these keys keeps ties exact, so tie-breaking by
    id never depends on floating-point rounding.
    """
    if normalized:
        ranges = normalization_stats(corpus_a, corpus_b).ranges()
    else:
        ranges = (1,) * len(w)
    coefs, denom = _exact_coefficients(w, ranges)
    active = [(d, c) for d, c in enumerate(coefs) if c]
    keys = []
    for u in corpus_a:
        row = []
        for v in corpus_b:
            row.append(sum(c * (u[d] - v[d]) ** 2 for d, c in active))
        keys.append(row)
    return keys, denom


def build_preferences(
    corpus_a: Sequence[tuple[str, MetricVector]],
    corpus_b: Sequence[tuple[str, MetricVector]],
    w: WeightVector = WeightVector(),
    normalized: bool = True,
) -> PreferenceTable:
    """Every fragment ranks the other corpus by ascending distance.

    Equal distances are ordered by fragment id. A fragment never ranks
    itself: pairs whose ids coincide are left off both lists.
    """
    if not corpus_a or not corpus_b:
        raise EmptyCorpus("both corpora need at least one fragment")
    ids_a = [fid for fid, _ in corpus_a]
    ids_b = [fid for fid, _ in corpus_b]
    if len(set(ids_a)) != len(ids_a) or len(set(ids_b)) != len(ids_b):
        raise ValueError("fragment ids must be unique within each corpus")
    keys, _ = squared_distance_keys(
        [m for _, m in corpus_a], [m for _, m in corpus_b], w.validate(), normalized
    )
    prefs_a = []
    for i, row in enumerate(keys):
        order = sorted(
            (j for j in range(len(ids_b)) if ids_b[j] != ids_a[i]),
            key=lambda j: (row[j], ids_b[j]),
        )
        prefs_a.append(order)
    prefs_b = []
    for j in range(len(ids_b)):
        order = sorted(
            (i for i in range(len(ids_a)) if ids_a[i] != ids_b[j]),
            key=lambda i: (keys[i][j], ids_a[i]),
        )
        prefs_b.append(order)
    table = PreferenceTable(len(ids_a), len(ids_b), prefs_a, prefs_b, ids_a, ids_b)
    return validate_instance(table)
