"""Method extraction and method-level metrics for brace-delimited languages.

No grammar is involved: a lexer strips comments and literals, braces are
matched, and method headers are recognised as ``name ( ... ) [suffix] {``.
Language differences live in :class:`LanguageProfile` data.
"""

from __future__ import annotations

import json
import os
import re
from collections import Counter
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue default do
    double else enum extends final finally float for goto if implements import instanceof int
    interface long native new package private protected public return short static strictfp
    super switch synchronized this throw throws transient try void volatile while true false
    null var yield record sealed permits""".split()
)


@dataclass(frozen=True)
class LanguageProfile:
    name: str = "java"
    extensions: tuple[str, ...] = (".java",)
    line_comment: tuple[str, ...] = ("//",)
    block_comment: tuple[tuple[str, str], ...] = (("/*", "*/"),)
    quotes: tuple[str, ...] = ('"', "'")
    text_block: Optional[str] = '"""'
    keywords: frozenset[str] = JAVA_KEYWORDS
    primitive_types: frozenset[str] = frozenset(
        "boolean byte char short int long float double var".split()
    )
    local_modifiers: frozenset[str] = frozenset({"final"})
    decision_keywords: frozenset[str] = frozenset({"if", "for", "while", "case", "catch"})
    decision_operators: frozenset[str] = frozenset({"&&", "||", "?"})
    throws_keywords: frozenset[str] = frozenset({"throws"})
    header_qualifiers: frozenset[str] = frozenset()
    # a '(' after one of these opens a region where locals may be declared
    declaring_parens: frozenset[str] = frozenset({"for", "try"})

    @classmethod
    def from_dict(cls, doc: dict) -> "LanguageProfile":
        known = {f.name: f for f in fields(cls)}
        unknown = set(doc) - set(known)
        if unknown:
            raise ValueError(f"unknown profile keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in doc.items():
            if key == "block_comment":
                kwargs[key] = tuple(tuple(pair) for pair in value)
            elif isinstance(value, list):
                default = getattr(cls, key, None)
                kwargs[key] = frozenset(value) if isinstance(default, frozenset) else tuple(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)


JAVA = LanguageProfile()

C_KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern float for goto
    if inline int long register restrict return short signed sizeof static struct switch
    typedef union unsigned void volatile while bool true false nullptr class public private
    protected virtual override new delete this throw try catch namespace using template
    typename operator friend noexcept constexpr""".split()
)

C_LIKE = LanguageProfile(
    name="c",
    extensions=(".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh"),
    text_block=None,
    keywords=C_KEYWORDS,
    primitive_types=frozenset(
        "bool char short int long float double signed unsigned auto size_t".split()
    ),
    local_modifiers=frozenset({"const", "static", "register", "volatile", "constexpr"}),
    throws_keywords=frozenset(),
    header_qualifiers=frozenset({"const", "noexcept", "override", "final"}),
    declaring_parens=frozenset({"for"}),
)

PROFILES = {"java": JAVA, "c": C_LIKE}


def load_profile(name_or_path: str) -> LanguageProfile:
    """A built-in profile by name, or one read from a JSON file."""
    if name_or_path in PROFILES:
        return PROFILES[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise ValueError(f"unknown language profile {name_or_path!r}")
    return LanguageProfile.from_dict(json.loads(path.read_text(encoding="utf-8")))


class Token(NamedTuple):
    kind: str  # ident | number | string | op
    text: str
    line: int


class UnbalancedBraces(ValueError):
    def __init__(self, line: int, path: str = ""):
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"unbalanced braces at {where}")
        self.line = line
        self.path = path


_OPERATORS = sorted(
    """>>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^= << >>""".split(),
    key=len,
    reverse=True,
)


def _lexer(profile: LanguageProfile) -> re.Pattern:
    parts = []
    for start, end in profile.block_comment:
        parts.append(rf"(?P<c{len(parts)}>{re.escape(start)}[\s\S]*?{re.escape(end)})")
    for marker in profile.line_comment:
        parts.append(rf"(?P<c{len(parts)}>{re.escape(marker)}[^\n]*)")
    strings = []
    if profile.text_block:
        tb = re.escape(profile.text_block)
        strings.append(rf"{tb}[\s\S]*?{tb}")
    for q in profile.quotes:
        eq = re.escape(q)
        strings.append(rf"{eq}(?:\\.|[^{eq}\\\n])*{eq}")
    body = "|".join(
        [
            rf"(?P<string>{'|'.join(strings)})" if strings else r"(?P<string>(?!))",
            r"(?P<number>\.?\d[\w.]*)",
            r"(?P<ident>[A-Za-z_$][\w$]*)",
            "(?P<op>" + "|".join(re.escape(op) for op in _OPERATORS) + r"|\S)",
            r"(?P<ws>\s+)",
        ]
    )
    return re.compile("|".join(parts + [body]))


_LEXER_CACHE: dict[LanguageProfile, re.Pattern] = {}


def tokenize(source: str, profile: LanguageProfile = JAVA) -> list[Token]:
    """Code tokens of ``source``; comments and whitespace are dropped."""
    pattern = _LEXER_CACHE.get(profile)
    if pattern is None:
        pattern = _LEXER_CACHE[profile] = _lexer(profile)
    tokens = []
    line = 1
    for match in pattern.finditer(source):
        kind = match.lastgroup
        text = match.group()
        if kind in ("string", "number", "ident", "op"):
            tokens.append(Token(kind, text, line))
        line += text.count("\n")
    return tokens


@dataclass(frozen=True)
class MethodFragment:
    id: str
    file: str
    name: str
    start_line: int
    end_line: int
    header_tokens: tuple[Token, ...]  # name .. closing ')' plus any suffix
    body_tokens: tuple[Token, ...]  # '{' .. matching '}'
    called_names: tuple[str, ...] = field(default=())

    def code_lines(self) -> set[int]:
        lines = set()
        for tok in self.header_tokens + self.body_tokens:
            lines.update(range(tok.line, tok.line + tok.text.count("\n") + 1))
        return lines


def _match_pairs(tokens: Sequence[Token], open_: str, close: str, strict: bool) -> dict[int, int]:
    stack: list[int] = []
    pairs: dict[int, int] = {}
    for i, tok in enumerate(tokens):
        if tok.kind != "op":
            continue
        if tok.text == open_:
            stack.append(i)
        elif tok.text == close:
            if not stack:
                if strict:
                    raise UnbalancedBraces(tok.line)
                continue
            pairs[stack.pop()] = i
    if stack and strict:
        raise UnbalancedBraces(tokens[stack[-1]].line)
    return pairs


def _valid_suffix(suffix: Sequence[Token], profile: LanguageProfile) -> bool:
    if not suffix:
        return True
    if suffix[0].text in profile.throws_keywords:
        return len(suffix) > 1 and all(
            t.kind == "ident" or t.text in {".", ",", "<", ">", ">>", "?"} for t in suffix[1:]
        )
    return all(t.text in profile.header_qualifiers for t in suffix)


def _called_names(body: Sequence[Token], profile: LanguageProfile) -> tuple[str, ...]:
    names = []
    for i in range(len(body) - 1):
        tok = body[i]
        if tok.kind != "ident" or body[i + 1].text != "(":
            continue
        if tok.text in profile.keywords:
            continue
        prev = body[i - 1] if i else None
        if prev is not None and prev.kind == "ident" and prev.text not in profile.keywords:
            # `Type name(` declares rather than calls
            continue
        names.append(tok.text)
    return tuple(names)


def extract_methods(
    source: str, profile: LanguageProfile = JAVA, path: str = "<string>"
) -> list[MethodFragment]:
    """Method fragments of one file, in file order.

    Methods nested inside another method (for instance in an anonymous
    class) are part of the enclosing fragment.
    """
    tokens = tokenize(source, profile)
    try:
        braces = _match_pairs(tokens, "{", "}", strict=True)
    except UnbalancedBraces as exc:
        raise UnbalancedBraces(exc.line, path) from None
    parens = _match_pairs(tokens, "(", ")", strict=False)

    fragments = []
    seen_ids: Counter = Counter()
    n = len(tokens)
    i = 0
    while i < n:
        tok = tokens[i]
        if (
            tok.kind == "ident"
            and tok.text not in profile.keywords
            and i + 1 < n
            and tokens[i + 1].text == "("
            and (i == 0 or tokens[i - 1].text not in {"new", ".", "::", "->"})
            and i + 1 in parens
        ):
            close = parens[i + 1]
            k = close + 1
            while k < n and tokens[k].text not in {"{", "}", ";", "(", ")", "="}:
                k += 1
            if k < n and tokens[k].text == "{" and _valid_suffix(tokens[close + 1 : k], profile):
                end = braces[k]
                body = tuple(tokens[k : end + 1])
                frag_id = f"{path}:{tok.text}:{tok.line}"
                seen_ids[frag_id] += 1
                if seen_ids[frag_id] > 1:
                    frag_id += f"#{seen_ids[frag_id]}"
                fragments.append(
                    MethodFragment(
                        id=frag_id,
                        file=path,
                        name=tok.text,
                        start_line=tok.line,
                        end_line=tokens[end].line,
                        header_tokens=tuple(tokens[i:k]),
                        body_tokens=body,
                        called_names=_called_names(body, profile),
                    )
                )
                i = end + 1
                continue
        i += 1
    return fragments


def collect_sources(paths: Iterable[str], profile: LanguageProfile = JAVA) -> list[str]:
    """Files named directly plus files under directories with a profile extension.

    Raises FileNotFoundError for a path that does not exist.
    """
    found = set()
    for raw in paths:
        p = Path(raw)
        if p.is_file():
            found.add(p.as_posix())
        elif p.is_dir():
            for root, dirs, files in os.walk(p):
                dirs.sort()
                for name in files:
                    if name.endswith(profile.extensions):
                        found.add(Path(root, name).as_posix())
        else:
            raise FileNotFoundError(raw)
    return sorted(found)


def extract_corpus(
    paths: Sequence[str], profile: LanguageProfile = JAVA
) -> tuple[list[MethodFragment], list[str]]:
    """Fragments of every file, ordered by path then line, plus diagnostics."""
    fragments: list[MethodFragment] = []
    diagnostics: list[str] = []
    for path in sorted(set(paths)):
        text = Path(path).read_text(encoding="utf-8", errors="replace")
        try:
            fragments.extend(extract_methods(text, profile, path))
        except UnbalancedBraces as exc:
            diagnostics.append(f"skipped {path}: {exc}")
    fragments.sort(key=lambda f: (f.file, f.start_line, f.name))
    return fragments, diagnostics


@dataclass(frozen=True)
class CallGraph:
    edges: frozenset[tuple[str, str]]
    unresolved: Counter

    def in_degree(self, frag_id: str) -> int:
        return self._in.get(frag_id, 0)

    def out_degree(self, frag_id: str) -> int:
        return self._out.get(frag_id, 0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_in", Counter(g for _, g in self.edges))
        object.__setattr__(self, "_out", Counter(f for f, _ in self.edges))


def build_call_graph(corpus: Sequence[MethodFragment]) -> CallGraph:
    """Name-based call edges; a name shared by several fragments links to all."""
    by_name: dict[str, list[str]] = {}
    for frag in corpus:
        by_name.setdefault(frag.name, []).append(frag.id)
    edges = set()
    unresolved: Counter = Counter()
    for frag in corpus:
        for name in frag.called_names:
            targets = by_name.get(name)
            if targets is None:
                unresolved[name] += 1
            else:
                edges.update((frag.id, target) for target in targets)
    return CallGraph(frozenset(edges), unresolved)


class MetricVector(NamedTuple):
    loc: int
    nbp: int
    nbv: int
    mca: int
    mce: int
    cc: int
    nbd: int


METRIC_NAMES = MetricVector._fields


def count_parameters(header: Sequence[Token]) -> int:
    # header starts with: name '(' ...
    depth = 0
    segments = [[]]
    for tok in header[2:]:
        t = tok.text
        if t in ("(", "[", "<"):
            depth += 1
        elif t == ")" and depth == 0:
            break
        elif t in (")", "]", ">"):
            depth -= 1
        elif t == ">>":
            depth -= 2
        elif t == ">>>":
            depth -= 3
        elif t == "," and depth == 0:
            segments.append([])
            continue
        segments[-1].append(t)
    segments = [s for s in segments if s]
    if len(segments) == 1 and segments[0] == ["void"]:
        return 0
    return len(segments)


_GENERIC_OK = {",", ".", "?", "[", "]", "&", "extends", "super"}


def _skip_type(tokens: Sequence[Token], p: int, profile: LanguageProfile) -> Optional[int]:
    """Index just past a type starting at ``p``, or None if there is none."""
    n = len(tokens)
    if p >= n or tokens[p].kind != "ident":
        return None
    first = tokens[p].text
    if first in profile.keywords and first not in profile.primitive_types:
        return None
    p += 1
    while p + 1 < n and tokens[p].text in (".", "::") and tokens[p + 1].kind == "ident":
        p += 2
    if p < n and tokens[p].text == "<":
        depth = 0
        while p < n:
            t = tokens[p].text
            if t == "<":
                depth += 1
            elif t in (">", ">>", ">>>"):
                depth -= len(t)
            elif tokens[p].kind != "ident" and t not in _GENERIC_OK:
                return None
            p += 1
            if depth <= 0:
                break
        if depth != 0:
            return None
    while p + 1 < n and tokens[p].text == "[" and tokens[p + 1].text == "]":
        p += 2
    while p < n and tokens[p].text in ("*", "&"):
        p += 1
    return p


def count_local_declarations(body: Sequence[Token], profile: LanguageProfile = JAVA) -> int:
    """Declaration statements in ``body`` (one per statement, not per variable)."""
    inner = body[1:-1] if body and body[0].text == "{" else body
    n = len(inner)
    starts = [0]
    for i, tok in enumerate(inner):
        if tok.text in (";", "{", "}", ":"):
            starts.append(i + 1)
        elif tok.text == "(" and i and inner[i - 1].text in profile.declaring_parens:
            starts.append(i + 1)
    count = 0
    for p in starts:
        while p < n and (inner[p].text in profile.local_modifiers or inner[p].text == "@"):
            if inner[p].text == "@":
                p += 2
                if p < n and inner[p].text == "(":
                    depth = 0
                    while p < n:
                        depth += {"(": 1, ")": -1}.get(inner[p].text, 0)
                        p += 1
                        if depth == 0:
                            break
            else:
                p += 1
        q = _skip_type(inner, p, profile)
        if q is None or q >= n:
            continue
        name = inner[q]
        if name.kind != "ident" or name.text in profile.keywords:
            continue
        if q + 1 < n and inner[q + 1].text in ("=", ";", ",", ":", "["):
            count += 1
    return count


def count_decisions(body: Sequence[Token], profile: LanguageProfile = JAVA) -> int:
    count = 0
    for i, tok in enumerate(body):
        if tok.kind == "ident" and tok.text in profile.decision_keywords:
            count += 1
        elif tok.kind == "op" and tok.text in profile.decision_operators:
            if tok.text == "?":
                nxt = body[i + 1].text if i + 1 < len(body) else ""
                # generic wildcard, not a conditional
                if nxt in (">", ">>", ">>>", ",", "extends", "super"):
                    continue
            count += 1
    return count


def nesting_depth(body: Sequence[Token]) -> int:
    depth = best = 0
    for tok in body:
        if tok.text == "{":
            depth += 1
            best = max(best, depth)
        elif tok.text == "}":
            depth -= 1
    return max(best, 1)


def compute_metrics(
    frag: MethodFragment, graph: CallGraph, profile: LanguageProfile = JAVA
) -> MetricVector:
    return MetricVector(
        loc=max(len(frag.code_lines()), 1),
        nbp=count_parameters(frag.header_tokens),
        nbv=count_local_declarations(frag.body_tokens, profile),
        mca=graph.in_degree(frag.id),
        mce=graph.out_degree(frag.id),
        cc=1 + count_decisions(frag.body_tokens, profile),
        nbd=nesting_depth(frag.body_tokens),
    )


def corpus_metrics(
    corpus: Sequence[MethodFragment], profile: LanguageProfile = JAVA
) -> list[MetricVector]:
    graph = build_call_graph(corpus)
    return [compute_metrics(frag, graph, profile) for frag in corpus]
