"""Brute-force stable matching enumeration for small instances.

These are reference implementations for checking the proposal algorithms;
they share no code path with them beyond the instance types.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .matching import (
    HrInstance,
    HrMatching,
    Matching,
    PreferenceTable,
    Side,
    blocking_pairs,
)

MAX_SM_SIZE = 8
MAX_HR_SEARCH = 10**6


class InstanceTooLarge(ValueError):
    pass


class NoPointwiseOptimum(RuntimeError):
    pass


@dataclass(frozen=True)
class StableSet:
    matchings: tuple[Union[Matching, HrMatching], ...]
    fingerprint: str

    def __len__(self) -> int:
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    def __contains__(self, m) -> bool:
        return m in self.matchings


def fingerprint(obj: Union[PreferenceTable, HrInstance]) -> str:
    if isinstance(obj, PreferenceTable):
        doc = {"A": obj.prefs_a, "B": obj.prefs_b}
    else:
        doc = {"R": obj.resident_prefs, "H": obj.hospital_prefs, "cap": obj.capacities}
    return hashlib.sha256(json.dumps(doc, separators=(",", ":")).encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _stable_perfect(table: PreferenceTable) -> list[Matching]:
    n = table.size_a
    perms = _permutations(n)
    # rank_a[a, b] and rank_b[b, a], 0-based
    rank_a = np.empty((n, n), dtype=np.int64)
    rank_b = np.empty((n, n), dtype=np.int64)
    for a, lst in enumerate(table.prefs_a):
        rank_a[a, list(lst)] = np.arange(n)
    for b, lst in enumerate(table.prefs_b):
        rank_b[b, list(lst)] = np.arange(n)
    inverse = np.argsort(perms, axis=1)
    agents = np.arange(n)
    # rank each agent gives its partner, per permutation
    own_a = rank_a[agents, perms]          # (P, n): a's rank of perms[:, a]
    own_b = rank_b[agents, inverse]        # (P, n): b's rank of its partner
    # a prefers b:  rank_a[a, b] < own_a[p, a]  -> (P, a, b)
    a_wants = rank_a[None, :, :] < own_a[:, :, None]
    b_wants = rank_b.T[None, :, :] < own_b[:, None, :]
    stable = ~np.any(a_wants & b_wants, axis=(1, 2))
    return [Matching(tuple(enumerate(p))) for p in perms[stable].tolist()]


def _stable_general(table: PreferenceTable) -> list[Matching]:
    acceptable = table.pairs()
    options = [
        [b for b in table.prefs_a[a] if (a, b) in acceptable] for a in range(table.size_a)
    ]
    found = []

    def extend(a: int, used: set[int], pairs: list[tuple[int, int]]) -> None:
        if a == table.size_a:
            m = Matching(tuple(pairs))
            if not blocking_pairs(table, m):
                found.append(m)
            return
        extend(a + 1, used, pairs)
        for b in options[a]:
            if b not in used:
                used.add(b)
                pairs.append((a, b))
                extend(a + 1, used, pairs)
                pairs.pop()
                used.discard(b)

    extend(0, set(), [])
    return found


def enumerate_stable_sm(table: PreferenceTable) -> StableSet:
    """Every stable matching of ``table``, sorted by pair list."""
    if max(table.size_a, table.size_b) > MAX_SM_SIZE:
        raise InstanceTooLarge(
            f"enumeration limited to {MAX_SM_SIZE} agents per side, got "
            f"{table.size_a}x{table.size_b}"
        )
    if table.size_a == table.size_b and table.is_complete():
        found = _stable_perfect(table)
    else:
        found = _stable_general(table)
    found.sort(key=lambda m: m.pairs)
    return StableSet(tuple(found), fingerprint(table))


def enumerate_stable_hr(inst: HrInstance) -> StableSet:
    """Every stable assignment of ``inst``, by exhaustive search."""
    n_r, n_h = inst.residents, inst.hospitals
    options = [[-1, *lst] for lst in inst.resident_prefs]
    space = 1
    for opt in options:
        space *= len(opt)
    if space > MAX_HR_SEARCH:
        raise InstanceTooLarge(f"HR search space {space} exceeds {MAX_HR_SEARCH}")
    if n_r == 0:
        return StableSet((HrMatching(()),), fingerprint(inst))

    grid = np.array(list(itertools.product(*options)), dtype=np.int64).reshape(-1, n_r)
    caps = np.array(inst.capacities, dtype=np.int64)
    big = n_r + n_h + 2
    # rank matrices, 0-based; ``big`` means unacceptable / unmatched
    r_rank = np.full((n_r, n_h + 1), big, dtype=np.int64)
    h_rank = np.full((n_h, n_r), big, dtype=np.int64)
    for r, lst in enumerate(inst.resident_prefs):
        for pos, h in enumerate(lst):
            r_rank[r, h] = pos
    for h, lst in enumerate(inst.hospital_prefs):
        for pos, r in enumerate(lst):
            h_rank[h, r] = pos

    counts = np.zeros((len(grid), n_h), dtype=np.int64)
    worst = np.full((len(grid), n_h), -1, dtype=np.int64)
    for r in range(n_r):
        col = grid[:, r]
        for h in range(n_h):
            here = col == h
            counts[here, h] += 1
            worst[here, h] = np.maximum(worst[here, h], h_rank[h, r])
    feasible = np.all(counts <= caps[None, :], axis=1)

    # r's rank of its own hospital; -1 (unmatched) maps to column n_h = big
    own = r_rank[np.arange(n_r)[None, :], np.where(grid < 0, n_h, grid)]
    blocked = np.zeros(len(grid), dtype=bool)
    for r in range(n_r):
        for h in inst.resident_prefs[r]:
            r_wants = r_rank[r, h] < own[:, r]
            h_wants = (counts[:, h] < caps[h]) | (h_rank[h, r] < worst[:, h])
            blocked |= r_wants & h_wants
    keep = grid[feasible & ~blocked]
    found = [
        HrMatching(tuple((r, h) for r, h in enumerate(row) if h >= 0)) for row in keep.tolist()
    ]
    found.sort(key=lambda m: m.assignments)
    return StableSet(tuple(found), fingerprint(inst))


def optimal_of(stable: StableSet, table: PreferenceTable, side: Side) -> Matching:
    """The member of ``stable`` giving every ``side`` agent its best stable partner."""
    if not stable.matchings:
        raise NoPointwiseOptimum("empty stable set")
    n = table.size_a if side is Side.A else table.size_b

    def ranks(m: Matching) -> list[float]:
        partner = m.partner_of_a if side is Side.A else m.partner_of_b
        rank = table.rank_a if side is Side.A else table.rank_b
        return [rank(i, partner[i]) if i in partner else float("inf") for i in range(n)]

    all_ranks = [ranks(m) for m in stable.matchings]
    best = [min(col) for col in zip(*all_ranks)] if n else []
    for m, r in zip(stable.matchings, all_ranks):
        if r == best:
            return m
    raise NoPointwiseOptimum(f"no member of the stable set is optimal for side {side.value}")


def random_sm_instance(rng: random.Random, n: int, m: int | None = None) -> PreferenceTable:
    """Uniformly random complete instance with ``n`` A-agents and ``m`` B-agents."""
    m = n if m is None else m
    prefs_a = [rng.sample(range(m), m) for _ in range(n)]
    prefs_b = [rng.sample(range(n), n) for _ in range(m)]
    return PreferenceTable(n, m, prefs_a, prefs_b)


def random_hr_instance(
    rng: random.Random,
    max_hospitals: int = 4,
    max_capacity: int = 2,
    max_residents: int = 6,
    accept_prob: float = 0.7,
) -> HrInstance:
    n_h = rng.randint(1, max_hospitals)
    n_r = rng.randint(1, max_residents)
    caps = [rng.randint(1, max_capacity) for _ in range(n_h)]
    resident_prefs = []
    for _ in range(n_r):
        acceptable = [h for h in range(n_h) if rng.random() < accept_prob]
        rng.shuffle(acceptable)
        resident_prefs.append(acceptable)
    hospital_prefs = []
    for h in range(n_h):
        applicants = [r for r in range(n_r) if h in resident_prefs[r]]
        rng.shuffle(applicants)
        hospital_prefs.append(applicants)
    return HrInstance(resident_prefs, hospital_prefs, caps)
