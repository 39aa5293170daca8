"""Stable marriage and hospitals/residents instances and algorithms.

Agents are addressed by 0-based index within their side. Ranks reported to
callers are 1-based (rank 1 = most preferred).
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence


class Side(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Side":
        return Side.B if self is Side.A else Side.A


class AgentId(NamedTuple):
    side: Side
    index: int
    label: str

    def __str__(self) -> str:
        return self.label


class InstanceError(ValueError):
    """Base class for malformed matching instances."""


class DuplicateEntry(InstanceError):
    def __init__(self, agent: AgentId, entry: int):
        super().__init__(f"duplicate entry {entry} in preference list of {agent}")
        self.agent = agent
        self.entry = entry


class IndexOutOfRange(InstanceError):
    def __init__(self, agent: AgentId, entry: int):
        super().__init__(f"preference list of {agent} references out-of-range index {entry}")
        self.agent = agent
        self.entry = entry


class RaggedLists(InstanceError):
    def __init__(self, agent: Optional[AgentId], message: str):
        super().__init__(message)
        self.agent = agent


class AsymmetricAcceptability(InstanceError):
    def __init__(self, resident: AgentId, hospital: AgentId):
        super().__init__(f"{resident} and {hospital} do not list each other symmetrically")
        self.resident = resident
        self.hospital = hospital


class InvalidCapacity(InstanceError):
    def __init__(self, hospital: AgentId, capacity: int):
        super().__init__(f"hospital {hospital} has invalid capacity {capacity}")
        self.hospital = hospital
        self.capacity = capacity


def _tupled(lists: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in lst) for lst in lists)


@dataclass(frozen=True)
class PreferenceTable:
    """Two agent sets, each agent holding a strict ranking over the other side."""

    size_a: int
    size_b: int
    prefs_a: tuple[tuple[int, ...], ...]
    prefs_b: tuple[tuple[int, ...], ...]
    labels_a: tuple[str, ...] = ()
    labels_b: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefs_a", _tupled(self.prefs_a))
        object.__setattr__(self, "prefs_b", _tupled(self.prefs_b))
        if not self.labels_a:
            object.__setattr__(self, "labels_a", tuple(f"m{i + 1}" for i in range(self.size_a)))
        if not self.labels_b:
            object.__setattr__(self, "labels_b", tuple(f"w{j + 1}" for j in range(self.size_b)))
        object.__setattr__(self, "labels_a", tuple(self.labels_a))
        object.__setattr__(self, "labels_b", tuple(self.labels_b))

    @classmethod
    def from_lists(
        cls,
        prefs_a: Sequence[Sequence[int]],
        prefs_b: Sequence[Sequence[int]],
        labels_a: Sequence[str] = (),
        labels_b: Sequence[str] = (),
        complete: bool = False,
    ) -> "PreferenceTable":
        table = cls(len(prefs_a), len(prefs_b), prefs_a, prefs_b, tuple(labels_a), tuple(labels_b))
        return validate_instance(table, complete=complete)

    def agent(self, side: Side, index: int) -> AgentId:
        labels = self.labels_a if side is Side.A else self.labels_b
        label = labels[index] if 0 <= index < len(labels) else f"{side.value}{index}"
        return AgentId(side, index, label)

    def prefs(self, side: Side) -> tuple[tuple[int, ...], ...]:
        return self.prefs_a if side is Side.A else self.prefs_b

    @cached_property
    def _ranks_a(self) -> tuple[dict[int, int], ...]:
        return tuple({b: r for r, b in enumerate(lst, 1)} for lst in self.prefs_a)

    @cached_property
    def _ranks_b(self) -> tuple[dict[int, int], ...]:
        return tuple({a: r for r, a in enumerate(lst, 1)} for lst in self.prefs_b)

    def rank_a(self, a: int, b: int) -> Optional[int]:
        """1-based rank of ``b`` on ``a``'s list, or None if unlisted."""
        return self._ranks_a[a].get(b)

    def rank_b(self, b: int, a: int) -> Optional[int]:
        return self._ranks_b[b].get(a)

    def is_complete(self) -> bool:
        return all(len(lst) == self.size_b for lst in self.prefs_a) and all(
            len(lst) == self.size_a for lst in self.prefs_b
        )

    def swapped(self) -> "PreferenceTable":
        """The same instance with sides A and B exchanged."""
        return PreferenceTable(
            self.size_b, self.size_a, self.prefs_b, self.prefs_a, self.labels_b, self.labels_a
        )

    def pairs(self) -> frozenset[tuple[int, int]]:
        """All (a, b) such that a lists b and b lists a."""
        return frozenset(
            (a, b) for a, lst in enumerate(self.prefs_a) for b in lst if a in self._ranks_b[b]
        )


def _check_lists(
    table_side: Side,
    lists: Sequence[Sequence[int]],
    expected: int,
    opposite: int,
    agent,
) -> None:
    if len(lists) != expected:
        raise RaggedLists(
            None, f"side {table_side.value} declares {expected} agents but has {len(lists)} lists"
        )
    for i, lst in enumerate(lists):
        seen: set[int] = set()
        for x in lst:
            if not 0 <= x < opposite:
                raise IndexOutOfRange(agent(table_side, i), x)
            if x in seen:
                raise DuplicateEntry(agent(table_side, i), x)
            seen.add(x)


def validate_instance(table: PreferenceTable, complete: bool = False) -> PreferenceTable:
    """Return ``table`` unchanged if it is well formed, otherwise raise.

    With ``complete=True`` every list must rank the whole opposite side.
    """
    if len(table.labels_a) != table.size_a or len(table.labels_b) != table.size_b:
        raise RaggedLists(None, "label count does not match side size")
    if any(not label for label in table.labels_a + table.labels_b):
        raise RaggedLists(None, "agent labels must be non-empty")
    _check_lists(Side.A, table.prefs_a, table.size_a, table.size_b, table.agent)
    _check_lists(Side.B, table.prefs_b, table.size_b, table.size_a, table.agent)
    if complete:
        for side, lists, opposite in (
            (Side.A, table.prefs_a, table.size_b),
            (Side.B, table.prefs_b, table.size_a),
        ):
            for i, lst in enumerate(lists):
                if len(lst) != opposite:
                    agent = table.agent(side, i)
                    raise RaggedLists(
                        agent, f"{agent} ranks {len(lst)} of {opposite} agents in a complete instance"
                    )
    return table


@dataclass(frozen=True)
class Matching:
    """A set of (A-index, B-index) pairs, stored sorted."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        a_seen = [a for a, _ in pairs]
        b_seen = [b for _, b in pairs]
        if len(set(a_seen)) != len(a_seen) or len(set(b_seen)) != len(b_seen):
            raise ValueError(f"agent matched more than once in {pairs}")

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self._pair_set

    @cached_property
    def _pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs)

    @cached_property
    def partner_of_a(self) -> dict[int, int]:
        return dict(self.pairs)

    @cached_property
    def partner_of_b(self) -> dict[int, int]:
        return {b: a for a, b in self.pairs}

    def labelled(self, table: PreferenceTable) -> list[tuple[str, str]]:
        return [(table.labels_a[a], table.labels_b[b]) for a, b in self.pairs]


class BlockingPair(NamedTuple):
    a: int
    b: int


def gs_propose(table: PreferenceTable, proposer: Side = Side.A) -> Matching:
    """Deferred acceptance with ``proposer`` making the proposals.

    Free proposers act in ascending index order. Lists may be incomplete; a
    proposal to an agent that does not list the proposer is rejected.
    """
    if proposer is Side.B:
        m = gs_propose(table.swapped(), Side.A)
        return Matching(tuple((a, b) for b, a in m.pairs))

    n_a, n_b = table.size_a, table.size_b
    # receiver rank arrays; n_a + 1 marks "not acceptable"
    unlisted = n_a + 1
    rank = []
    for lst in table.prefs_b:
        r = [unlisted] * n_a
        for pos, a in enumerate(lst):
            r[a] = pos
        rank.append(r)

    next_choice = [0] * n_a
    engaged_to = [-1] * n_b
    free = list(range(n_a))
    heapq.heapify(free)
    prefs = table.prefs_a
    while free:
        a = free[0]
        lst = prefs[a]
        if next_choice[a] >= len(lst):
            heapq.heappop(free)
            continue
        b = lst[next_choice[a]]
        next_choice[a] += 1
        ra = rank[b][a]
        if ra == unlisted:
            continue
        current = engaged_to[b]
        if current == -1:
            engaged_to[b] = a
            heapq.heappop(free)
        elif ra < rank[b][current]:
            engaged_to[b] = a
            heapq.heapreplace(free, current)
    return Matching(tuple((a, b) for b, a in enumerate(engaged_to) if a != -1))


class ExtendedResult(NamedTuple):
    matching: Matching
    reduced: PreferenceTable


def extended_gs(table: PreferenceTable, proposer: Side = Side.A) -> ExtendedResult:
    """Extended Gale-Shapley: on each engagement, every successor of the
    proposer on the receiver's list is deleted from both lists.

    Returns the matching and the reduced preference table (the original
    lists with all deleted pairs removed).
    """
    if proposer is Side.B:
        m, reduced = extended_gs(table.swapped(), Side.A)
        return ExtendedResult(Matching(tuple((a, b) for b, a in m.pairs)), reduced.swapped())

    n_a, n_b = table.size_a, table.size_b
    prefs_a = [list(lst) for lst in table.prefs_a]
    prefs_b = [list(lst) for lst in table.prefs_b]
    rank_b = [{a: pos for pos, a in enumerate(lst)} for lst in prefs_b]
    deleted = set()
    # prefs_b[b][:end_b[b]] is b's live list; everything after is deleted
    end_b = [len(lst) for lst in prefs_b]
    head = [0] * n_a
    engaged_to = [-1] * n_b

    def delete(a: int, b: int) -> None:
        deleted.add((a, b))

    free = list(range(n_a))
    heapq.heapify(free)
    while free:
        a = free[0]
        lst = prefs_a[a]
        while head[a] < len(lst) and (a, lst[head[a]]) in deleted:
            head[a] += 1
        if head[a] >= len(lst):
            heapq.heappop(free)
            continue
        b = lst[head[a]]
        pos = rank_b[b].get(a)
        if pos is None or pos >= end_b[b]:
            # b does not (or no longer) accept a
            delete(a, b)
            continue
        previous = engaged_to[b]
        engaged_to[b] = a
        if previous == -1:
            heapq.heappop(free)
        else:
            heapq.heapreplace(free, previous)
        for succ in prefs_b[b][pos + 1 : end_b[b]]:
            delete(succ, b)
        end_b[b] = pos + 1

    matching = Matching(tuple((a, b) for b, a in enumerate(engaged_to) if a != -1))
    reduced = PreferenceTable(
        n_a,
        n_b,
        tuple(tuple(b for b in lst if (a, b) not in deleted) for a, lst in enumerate(prefs_a)),
        tuple(tuple(a for a in lst if (a, b) not in deleted) for b, lst in enumerate(prefs_b)),
        table.labels_a,
        table.labels_b,
    )
    return ExtendedResult(matching, reduced)


def deleted_pairs(table: PreferenceTable, reduced: PreferenceTable) -> frozenset[tuple[int, int]]:
    """Pairs present on either list of ``table`` but absent from ``reduced``."""
    before = {(a, b) for a, lst in enumerate(table.prefs_a) for b in lst}
    before |= {(a, b) for b, lst in enumerate(table.prefs_b) for a in lst}
    after = {(a, b) for a, lst in enumerate(reduced.prefs_a) for b in lst}
    after |= {(a, b) for b, lst in enumerate(reduced.prefs_b) for a in lst}
    return frozenset(before - after)


def blocking_pairs(table: PreferenceTable, m: Matching) -> list[BlockingPair]:
    """All mutually acceptable pairs outside ``m`` that both prefer each other.

    An unmatched agent prefers any agent on its list to staying alone.
    """
    result = []
    partner_a = m.partner_of_a
    partner_b = m.partner_of_b
    for a, lst in enumerate(table.prefs_a):
        current = partner_a.get(a)
        for b in lst:
            if b == current:
                # everything further down is worse than a's partner
                break
            rb = table.rank_b(b, a)
            if rb is None:
                continue
            other = partner_b.get(b)
            if other is None or rb < table.rank_b(b, other):
                result.append(BlockingPair(a, b))
    result.sort()
    return result


def is_stable(table: PreferenceTable, m: Matching) -> bool:
    return not blocking_pairs(table, m)


# ---------------------------------------------------------------------------
# Hospitals / residents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HrInstance:
    resident_prefs: tuple[tuple[int, ...], ...]
    hospital_prefs: tuple[tuple[int, ...], ...]
    capacities: tuple[int, ...]
    resident_labels: tuple[str, ...] = ()
    hospital_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "resident_prefs", _tupled(self.resident_prefs))
        object.__setattr__(self, "hospital_prefs", _tupled(self.hospital_prefs))
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        if not self.resident_labels:
            labels = tuple(f"r{i + 1}" for i in range(len(self.resident_prefs)))
            object.__setattr__(self, "resident_labels", labels)
        if not self.hospital_labels:
            labels = tuple(f"h{j + 1}" for j in range(len(self.hospital_prefs)))
            object.__setattr__(self, "hospital_labels", labels)
        object.__setattr__(self, "resident_labels", tuple(self.resident_labels))
        object.__setattr__(self, "hospital_labels", tuple(self.hospital_labels))

    @property
    def residents(self) -> int:
        return len(self.resident_prefs)

    @property
    def hospitals(self) -> int:
        return len(self.hospital_prefs)

    def resident(self, r: int) -> AgentId:
        return AgentId(Side.A, r, self.resident_labels[r])

    def hospital(self, h: int) -> AgentId:
        return AgentId(Side.B, h, self.hospital_labels[h])

    @cached_property
    def resident_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({h: pos for pos, h in enumerate(lst, 1)} for lst in self.resident_prefs)

    @cached_property
    def hospital_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({r: pos for pos, r in enumerate(lst, 1)} for lst in self.hospital_prefs)


def validate_hr(inst: HrInstance) -> HrInstance:
    n_r, n_h = inst.residents, inst.hospitals
    if len(inst.capacities) != n_h:
        raise RaggedLists(None, f"{len(inst.capacities)} capacities for {n_h} hospitals")
    if len(inst.resident_labels) != n_r or len(inst.hospital_labels) != n_h:
        raise RaggedLists(None, "label count does not match agent count")

    def agent(side: Side, i: int) -> AgentId:
        return inst.resident(i) if side is Side.A else inst.hospital(i)

    _check_lists(Side.A, inst.resident_prefs, n_r, n_h, agent)
    _check_lists(Side.B, inst.hospital_prefs, n_h, n_r, agent)
    for h, cap in enumerate(inst.capacities):
        if cap < 1:
            raise InvalidCapacity(inst.hospital(h), cap)
    for r, lst in enumerate(inst.resident_prefs):
        for h in lst:
            if r not in inst.hospital_rank[h]:
                raise AsymmetricAcceptability(inst.resident(r), inst.hospital(h))
    for h, lst in enumerate(inst.hospital_prefs):
        for r in lst:
            if h not in inst.resident_rank[r]:
                raise AsymmetricAcceptability(inst.resident(r), inst.hospital(h))
    return inst


@dataclass(frozen=True)
class HrMatching:
    assignments: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(r), int(h)) for r, h in self.assignments))
        object.__setattr__(self, "assignments", pairs)
        residents = [r for r, _ in pairs]
        if len(set(residents)) != len(residents):
            raise ValueError(f"resident assigned more than once in {pairs}")

    def __iter__(self):
        return iter(self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)

    @cached_property
    def hospital_of(self) -> dict[int, int]:
        return dict(self.assignments)

    @cached_property
    def residents_of(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for r, h in self.assignments:
            out.setdefault(h, []).append(r)
        return {h: tuple(rs) for h, rs in out.items()}

    def respects_capacities(self, inst: HrInstance) -> bool:
        return all(len(rs) <= inst.capacities[h] for h, rs in self.residents_of.items())

    def labelled(self, inst: HrInstance) -> list[tuple[str, str]]:
        return [(inst.resident_labels[r], inst.hospital_labels[h]) for r, h in self.assignments]


def hospital_oriented_match(inst: HrInstance) -> HrMatching:
    """Hospital-proposing deferred acceptance with list reduction.

    An undersubscribed hospital offers a place to the first resident on its
    list not already assigned to it; the resident drops any previous
    assignment, and every hospital the resident ranks below the new one is
    removed from the resident's list and vice versa.
    """
    n_h = inst.hospitals
    caps = inst.capacities
    res_prefs = [list(lst) for lst in inst.resident_prefs]
    res_rank = [{h: pos for pos, h in enumerate(lst)} for lst in res_prefs]
    # res_prefs[r][:res_end[r]] is r's live list
    res_end = [len(lst) for lst in res_prefs]
    removed: set[tuple[int, int]] = set()
    pointer = [0] * n_h
    assigned_to: dict[int, int] = {}
    members: list[set[int]] = [set() for _ in range(n_h)]

    def next_resident(h: int) -> Optional[int]:
        lst = inst.hospital_prefs[h]
        while pointer[h] < len(lst):
            r = lst[pointer[h]]
            if (r, h) in removed or r in members[h]:
                pointer[h] += 1
                continue
            return r
        return None

    active = [h for h in range(n_h)]
    heapq.heapify(active)
    while active:
        h = active[0]
        if len(members[h]) >= caps[h]:
            heapq.heappop(active)
            continue
        r = next_resident(h)
        if r is None:
            heapq.heappop(active)
            continue
        previous = assigned_to.get(r)
        if previous is not None:
            members[previous].discard(r)
            heapq.heappush(active, previous)
        assigned_to[r] = h
        members[h].add(r)
        pos = res_rank[r][h]
        for succ in res_prefs[r][pos + 1 : res_end[r]]:
            removed.add((r, succ))
        res_end[r] = pos + 1
    # a hospital can be pushed more than once; duplicates are harmless
    return HrMatching(tuple(assigned_to.items()))


def hr_blocking_pairs(inst: HrInstance, m: HrMatching) -> list[tuple[int, int]]:
    """Pairs (r, h) that block ``m``.

    (r, h) blocks when they are mutually acceptable, not matched together,
    r is unmatched or prefers h to its hospital, and h is undersubscribed or
    prefers r to its worst assigned resident.
    """
    hospital_of = m.hospital_of
    residents_of = m.residents_of
    result = []
    for r, lst in enumerate(inst.resident_prefs):
        current = hospital_of.get(r)
        for h in lst:
            if h == current:
                break
            h_rank = inst.hospital_rank[h]
            if r not in h_rank:
                continue
            assigned = residents_of.get(h, ())
            if len(assigned) < inst.capacities[h]:
                result.append((r, h))
            elif h_rank[r] < max(h_rank[x] for x in assigned):
                result.append((r, h))
    result.sort()
    return result
