"""End-to-end clone detection and report serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from scipy.cluster.hierarchy import DisjointSet

from . import __version__
from .dma import DualMatching, choosy_filter, dual_multi_allocate
from .matching import Side, gs_propose
from .metrics import (
    JAVA,
    LanguageProfile,
    MetricVector,
    collect_sources,
    corpus_metrics,
    extract_corpus,
)
from .preferences import WeightVector, build_preferences, metric_distance, normalize

ALGORITHMS = ("dma", "gs-a", "gs-b")


class NoMethodsFound(ValueError):
    def __init__(self, side: str):
        super().__init__(f"no methods found on side {side}")
        self.side = side


class InvariantViolation(RuntimeError):
    """A result broke a property the algorithms guarantee."""


@dataclass(frozen=True)
class DetectorConfig:
    weights: WeightVector = WeightVector()
    love_threshold: float = 0.5
    similarity_threshold: float = 0.9
    profile: LanguageProfile = JAVA
    algorithm: str = "dma"

    def __post_init__(self) -> None:
        for name in ("love_threshold", "similarity_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        self.weights.validate()

    def echo(self) -> dict:
        return {
            "weights": self.weights._asdict(),
            "loveThreshold": self.love_threshold,
            "similarityThreshold": self.similarity_threshold,
            "profile": self.profile.name,
            "algorithm": self.algorithm,
        }


@dataclass(frozen=True)
class FragmentRecord:
    """A fragment as the matching stage sees it: identity plus metrics."""

    id: str
    file: str
    name: str
    start_line: int
    end_line: int
    metrics: MetricVector


@dataclass(frozen=True)
class ClonePair:
    fragA: str
    fragB: str
    distance: float
    similarity: float
    love: float
    contrast: float


@dataclass(frozen=True)
class CloneClass:
    members: tuple[str, ...]


@dataclass
class CloneReport:
    config: dict
    fragments_a: list[FragmentRecord]
    fragments_b: list[FragmentRecord]
    pairs: list[ClonePair]
    classes: list[CloneClass]
    diagnostics: list[str] = field(default_factory=list)
    toolVersion: str = __version__

    def fragment(self, frag_id: str) -> FragmentRecord:
        for rec in self.fragments_a + self.fragments_b:
            if rec.id == frag_id:
                return rec
        raise KeyError(frag_id)

    def to_dict(self) -> dict:
        def records(side: str, recs: list[FragmentRecord]) -> list[dict]:
            return [
                {
                    "id": r.id,
                    "side": side,
                    "file": r.file,
                    "name": r.name,
                    "startLine": r.start_line,
                    "endLine": r.end_line,
                    **r.metrics._asdict(),
                }
                for r in recs
            ]

        return {
            "toolVersion": self.toolVersion,
            "config": self.config,
            "fragments": records("A", self.fragments_a) + records("B", self.fragments_b),
            "pairs": [asdict(p) for p in self.pairs],
            "classes": [{"members": list(c.members)} for c in self.classes],
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        lookup = {r.id: r for r in self.fragments_a + self.fragments_b}
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "fragA_file",
                "fragA_name",
                "fragB_file",
                "fragB_name",
                "distance",
                "similarity",
                "love",
                "contrast",
            ]
        )
        for p in self.pairs:
            a, b = lookup[p.fragA], lookup[p.fragB]
            writer.writerow(
                [a.file, a.name, b.file, b.name]
                + [_fmt(x) for x in (p.distance, p.similarity, p.love, p.contrast)]
            )
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"smpclone {self.toolVersion}: {len(self.fragments_a)} x {len(self.fragments_b)} "
            f"methods, {len(self.pairs)} clone pairs, {len(self.classes)} clone classes"
        ]
        for d in self.diagnostics:
            lines.append(f"warning: {d}")
        if self.pairs:
            lines.append("")
            lines.append("similarity  love    contrast  distance  pair")
            for p in self.pairs:
                lines.append(
                    f"{p.similarity:<10.4f}  {p.love:<6.4f}  {p.contrast:<8.4f}  "
                    f"{p.distance:<8.4f}  {p.fragA}  <->  {p.fragB}"
                )
        if self.classes:
            lines.append("")
            for i, c in enumerate(self.classes, 1):
                lines.append(f"class {i}: " + ", ".join(c.members))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")


def _fmt(x: float) -> str:
    return repr(round(x, 6))


def similarity(distance: float, w: Sequence[float]) -> float:
    """Map a normalized-space distance onto [0, 1], 1 meaning identical."""
    d_max = WeightVector(*w).max_distance()
    return min(1.0, max(0.0, 1.0 - distance / d_max))


def clone_classes(pairs: Sequence[ClonePair]) -> list[CloneClass]:
    """Connected components of the clone-pair graph."""
    groups = DisjointSet()
    for p in pairs:
        groups.add(p.fragA)
        groups.add(p.fragB)
        groups.merge(p.fragA, p.fragB)
    classes = [CloneClass(tuple(sorted(s))) for s in groups.subsets() if len(s) >= 2]
    classes.sort(key=lambda c: c.members[0])
    return classes


def _allocate(table, algorithm: str) -> DualMatching:
    if algorithm == "dma":
        return dual_multi_allocate(table)
    m = gs_propose(table, Side.A if algorithm == "gs-a" else Side.B)
    return DualMatching(m, m)


def detect_records(
    side_a: Sequence[FragmentRecord],
    side_b: Sequence[FragmentRecord],
    cfg: DetectorConfig = DetectorConfig(),
    diagnostics: Sequence[str] = (),
) -> CloneReport:
    """Matching, scoring, and thresholding over precomputed metrics."""
    if not side_a:
        raise NoMethodsFound("A")
    if not side_b:
        raise NoMethodsFound("B")
    w = cfg.weights
    norm_a, norm_b, _ = normalize([r.metrics for r in side_a], [r.metrics for r in side_b])
    table = build_preferences(
        [(r.id, r.metrics) for r in side_a], [(r.id, r.metrics) for r in side_b], w
    )
    dm = _allocate(table, cfg.algorithm)
    allowed = set(dm.m1.pairs) | set(dm.m2.pairs)

    pairs = []
    for sp in choosy_filter(table, dm, cfg.love_threshold):
        if (sp.a, sp.b) not in allowed:
            raise InvariantViolation(f"scored pair {(sp.a, sp.b)} not in either matching")
        distance = metric_distance(norm_a[sp.a], norm_b[sp.b], w)
        sim = similarity(distance, w)
        if sim < cfg.similarity_threshold:
            continue
        pairs.append(ClonePair(side_a[sp.a].id, side_b[sp.b].id, distance, sim, sp.love, sp.contrast))
    pairs.sort(key=lambda p: (-p.similarity, -p.love, p.fragA, p.fragB))
    return CloneReport(
        config=cfg.echo(),
        fragments_a=list(side_a),
        fragments_b=list(side_b),
        pairs=pairs,
        classes=clone_classes(pairs),
        diagnostics=list(diagnostics),
    )


def load_side(
    paths: Sequence[str], profile: LanguageProfile = JAVA
) -> tuple[list[FragmentRecord], list[str]]:
    """Extract and measure one side; calls are resolved within that side only."""
    fragments, diagnostics = extract_corpus(collect_sources(paths, profile), profile)
    metrics = corpus_metrics(fragments, profile)
    records = [
        FragmentRecord(f.id, f.file, f.name, f.start_line, f.end_line, m)
        for f, m in zip(fragments, metrics)
    ]
    return records, diagnostics


def detect(
    paths_a: Sequence[str],
    paths_b: Sequence[str],
    cfg: DetectorConfig = DetectorConfig(),
    extra_config: Optional[dict] = None,
) -> CloneReport:
    side_a, diag_a = load_side(paths_a, cfg.profile)
    side_b, diag_b = load_side(paths_b, cfg.profile)
    diagnostics = diag_a + [d for d in diag_b if d not in diag_a]
    report = detect_records(side_a, side_b, cfg, diagnostics)
    report.config = {"inputA": list(paths_a), "inputB": list(paths_b), **report.config}
    if extra_config:
        report.config.update(extra_config)
    return report
