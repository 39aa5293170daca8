"""Seeded generator of Java-like source trees for scale and robustness runs."""

from __future__ import annotations

import random
from pathlib import Path

_TYPES = ("int", "long", "double", "String", "boolean")
_WORDS = (
    "job", "seeker", "admin", "page", "type", "pass", "search", "update", "offer", "user",
    "company", "skill", "apply", "list", "record", "detail", "status", "account", "query",
)


def _ident(rng: random.Random, used: set[str], capital: bool = False) -> str:
    while True:
        parts = rng.sample(_WORDS, 2)
        name = parts[0] + parts[1].capitalize()
        if capital:
            name = name[0].upper() + name[1:]
        name += str(rng.randint(0, 99))
        if name not in used:
            used.add(name)
            return name


def _statements(rng: random.Random, depth: int, names: list[str], callees: list[str]) -> list[str]:
    lines = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.random()
        var = rng.choice(names)
        if kind < 0.25 and depth < 3:
            lines.append(f"for (int i{depth} = 0; i{depth} < {rng.randint(2, 50)}; i{depth}++) {{")
            lines += ["    " + s for s in _statements(rng, depth + 1, names, callees)]
            lines.append("}")
        elif kind < 0.45 and depth < 3:
            cond = f"{var} > {rng.randint(0, 9)}"
            if rng.random() < 0.3:
                cond += f" && {var} < {rng.randint(10, 99)}"
            lines.append(f"if ({cond}) {{")
            lines += ["    " + s for s in _statements(rng, depth + 1, names, callees)]
            if rng.random() < 0.4:
                lines.append("} else {")
                lines += ["    " + s for s in _statements(rng, depth + 1, names, callees)]
            lines.append("}")
        elif kind < 0.6 and callees:
            lines.append(f"{var} += {rng.choice(callees)}({var});")
        elif kind < 0.75:
            new = f"t{len(names)}"
            names.append(new)
            lines.append(f"int {new} = {var} * {rng.randint(2, 9)};")
        else:
            lines.append(f"{var} = {var} + {rng.randint(1, 9)};")
    return lines


def _method(rng: random.Random, name: str, callees: list[str]) -> list[str]:
    n_params = rng.randint(0, 3)
    params = [f"p{i}" for i in range(n_params)]
    names = params[:] or ["x"]
    lines = [f"    public int {name}({', '.join('int ' + p for p in params)}) {{"]
    body = []
    if not params:
        body.append("int x = 0;")
    body += _statements(rng, 1, names, callees)
    body.append(f"return {names[-1]};")
    lines += ["        " + s for s in body]
    lines.append("    }")
    return lines


def generate_corpus(root: str | Path, files: int = 75, methods: int = 460, seed: int = 0) -> list[str]:
    """Write ``files`` Java files holding ``methods`` methods under ``root``.

    Roughly one method in eight is a verbatim copy of an earlier method
    placed in a different file, so real clone pairs exist.
    """
    rng = random.Random(seed)
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    used: set[str] = set()
    counts = [methods // files] * files
    for i in range(methods % files):
        counts[i] += 1
    bodies: list[list[str]] = []  # methods of earlier files only
    paths = []
    for f in range(files):
        cls = _ident(rng, used, capital=True)
        lines = [f"package synthetic.p{f % 7};", "", f"public class {cls} {{"]
        local: list[str] = []
        fresh: list[list[str]] = []
        for _ in range(counts[f]):
            if bodies and rng.random() < 0.125:
                src = rng.choice(bodies)
                lines += src
            else:
                name = _ident(rng, used)
                body = _method(rng, name, local[-3:])
                fresh.append(body)
                lines += body
                local.append(name)
            lines.append("")
        lines.append("}")
        bodies += fresh
        path = root / f"p{f % 7}" / f"{cls}.java"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path.as_posix())
    return sorted(paths)
