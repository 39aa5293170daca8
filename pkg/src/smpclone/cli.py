"""Command-line entry point.

    smpclone detect A B [--weights loc=2,cc=3] [--love-threshold 0.5]
                        [--sim-threshold 0.9] [--algorithm dma|gs-a|gs-b]
                        [--format text|json|csv] [--profile java] [--out FILE]
    smpclone metrics PATH... [--format json|csv|text] [--profile java]
    smpclone match INSTANCE.json --algo gs-a|gs-b|extended|hr|dma|enumerate

Exit codes: 0 success, 1 usage error, 2 input or parse error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .detect import ALGORITHMS, DetectorConfig, InvariantViolation, NoMethodsFound, detect
from .dma import choosy_filter, dual_multi_allocate
from .instances import load_instance
from .matching import (
    HrInstance,
    InstanceError,
    Matching,
    PreferenceTable,
    Side,
    blocking_pairs,
    deleted_pairs,
    extended_gs,
    gs_propose,
    hospital_oriented_match,
    hr_blocking_pairs,
)
from .metrics import METRIC_NAMES, collect_sources, corpus_metrics, extract_corpus, load_profile
from .oracle import InstanceTooLarge, enumerate_stable_hr, enumerate_stable_sm
from .preferences import parse_weights

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

MATCH_ALGORITHMS = ("gs-a", "gs-b", "extended", "hr", "dma", "enumerate")
METRIC_FIELDS = ("file", "name", "startLine") + METRIC_NAMES


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1]: {text}")
    return value


def _weights(text: str):
    try:
        return parse_weights(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smpclone", description="Stable-matching code clone detector.")
    parser.add_argument("--version", action="version", version=f"smpclone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("detect", help="match methods of two inputs and report clone pairs")
    d.add_argument("input_a", help="file or directory")
    d.add_argument("input_b", help="file or directory")
    d.add_argument("--weights", type=_weights, default=parse_weights(""), metavar="K=V,...")
    d.add_argument("--love-threshold", type=_unit_interval, default=0.5)
    d.add_argument("--sim-threshold", type=_unit_interval, default=0.9)
    d.add_argument("--algorithm", choices=ALGORITHMS, default="dma")
    d.add_argument("--format", choices=("text", "json", "csv"), default="text")
    d.add_argument("--profile", default="java", help="java, c, or a JSON profile file")
    d.add_argument("--out", help="write the report here instead of stdout")

    m = sub.add_parser("metrics", help="per-method metric records")
    m.add_argument("paths", nargs="+")
    m.add_argument("--format", choices=("json", "csv", "text"), default="json")
    m.add_argument("--profile", default="java")
    m.add_argument("--out")

    x = sub.add_parser("match", help="run a matching algorithm on an instance file")
    x.add_argument("instance")
    x.add_argument("--algo", choices=MATCH_ALGORITHMS, default="gs-a")
    x.add_argument("--proposer", choices=("A", "B"), default="A", help="for --algo extended")
    x.add_argument("--love-threshold", type=_unit_interval, default=0.5, help="for --algo dma")
    x.add_argument("--format", choices=("text", "json"), default="text")
    x.add_argument("--out")
    return parser


def parse_invocation(argv: Sequence[str]) -> argparse.Namespace:
    return build_parser().parse_args(list(argv))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_detect(args) -> int:
    cfg = DetectorConfig(
        weights=args.weights,
        love_threshold=args.love_threshold,
        similarity_threshold=args.sim_threshold,
        profile=load_profile(args.profile),
        algorithm=args.algorithm,
    )
    report = detect(
        [args.input_a],
        [args.input_b],
        cfg,
        extra_config={"profile": args.profile, "format": args.format, "out": args.out},
    )
    for d in report.diagnostics:
        print(f"smpclone: {d}", file=sys.stderr)
    _emit(report.render(args.format), args.out)
    return EXIT_OK


def _run_metrics(args) -> int:
    profile = load_profile(args.profile)
    fragments, diagnostics = extract_corpus(collect_sources(args.paths, profile), profile)
    for d in diagnostics:
        print(f"smpclone: {d}", file=sys.stderr)
    rows = [
        {"file": f.file, "name": f.name, "startLine": f.start_line, **m._asdict()}
        for f, m in zip(fragments, corpus_metrics(fragments, profile))
    ]
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=METRIC_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        lines = ["  ".join(f"{h:>9}" for h in METRIC_FIELDS[3:]) + "  method"]
        for r in rows:
            lines.append(
                "  ".join(f"{r[h]:>9}" for h in METRIC_FIELDS[3:])
                + f"  {r['file']}:{r['startLine']} {r['name']}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _sm_lines(table: PreferenceTable, m: Matching) -> list[str]:
    return [f"{a} {b}" for a, b in m.labelled(table)]


def _check_sm(table: PreferenceTable, m: Matching) -> None:
    if blocking_pairs(table, m):
        raise InvariantViolation("matching has blocking pairs")


def _run_match(args) -> int:
    doc = json.loads(Path(args.instance).read_text(encoding="utf-8"))
    inst = load_instance(doc)
    result: dict = {"algorithm": args.algo}
    lines: list[str] = []

    if isinstance(inst, HrInstance):
        if args.algo == "hr":
            hm = hospital_oriented_match(inst)
            if hr_blocking_pairs(inst, hm) or not hm.respects_capacities(inst):
                raise InvariantViolation("hospital-oriented result is not stable")
            result["assignments"] = hm.labelled(inst)
            lines = [f"{r} {h}" for r, h in hm.labelled(inst)]
        elif args.algo == "enumerate":
            stable = enumerate_stable_hr(inst)
            result["stable"] = [hm.labelled(inst) for hm in stable]
            for i, hm in enumerate(stable, 1):
                lines.append(f"# stable assignment {i}")
                lines.extend(f"{r} {h}" for r, h in hm.labelled(inst))
        else:
            raise UsageError(f"--algo {args.algo} needs a stable marriage instance")
    else:
        table = inst
        if args.algo in ("gs-a", "gs-b"):
            m = gs_propose(table, Side.A if args.algo == "gs-a" else Side.B)
            _check_sm(table, m)
            result["matching"] = m.labelled(table)
            lines = _sm_lines(table, m)
        elif args.algo == "extended":
            m, reduced = extended_gs(table, Side(args.proposer))
            _check_sm(table, m)
            gone = sorted(deleted_pairs(table, reduced))
            result["matching"] = m.labelled(table)
            result["deleted"] = [(table.labels_a[a], table.labels_b[b]) for a, b in gone]
            lines = _sm_lines(table, m)
            lines.append("# deleted")
            lines.extend(f"{a} {b}" for a, b in result["deleted"])
        elif args.algo == "dma":
            dm = dual_multi_allocate(table)
            _check_sm(table, dm.m1)
            _check_sm(table, dm.m2)
            scored = choosy_filter(table, dm, args.love_threshold)
            result["m1"] = dm.m1.labelled(table)
            result["m2"] = dm.m2.labelled(table)
            result["pairs"] = [
                {
                    "a": table.labels_a[p.a],
                    "b": table.labels_b[p.b],
                    "love": p.love,
                    "contrast": p.contrast,
                }
                for p in scored
            ]
            lines = [
                f"{table.labels_a[p.a]} {table.labels_b[p.b]} love={p.love:.4f} "
                f"contrast={p.contrast:.4f}"
                for p in scored
            ]
        elif args.algo == "enumerate":
            stable = enumerate_stable_sm(table)
            result["stable"] = [m.labelled(table) for m in stable]
            for i, m in enumerate(stable, 1):
                lines.append(f"# stable matching {i}")
                lines.extend(_sm_lines(table, m))
        else:
            raise UsageError("--algo hr needs a hospitals/residents instance")

    if args.format == "json":
        text = json.dumps(result, indent=2) + "\n"
    else:
        text = "\n".join(lines) + ("\n" if lines else "")
    _emit(text, args.out)
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    handlers = {"detect": _run_detect, "metrics": _run_metrics, "match": _run_match}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"smpclone: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"smpclone: no such file or directory: {exc.args[-1] if exc.args else exc}",
              file=sys.stderr)
        return EXIT_INPUT
    except (NoMethodsFound, InstanceError, InstanceTooLarge, json.JSONDecodeError,
            OSError, ValueError) as exc:
        print(f"smpclone: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"smpclone: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_invocation(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
