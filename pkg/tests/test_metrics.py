import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smpclone.metrics import (
    C_LIKE,
    JAVA,
    LanguageProfile,
    MetricVector,
    UnbalancedBraces,
    build_call_graph,
    collect_sources,
    compute_metrics,
    corpus_metrics,
    extract_corpus,
    extract_methods,
    load_profile,
    tokenize,
)

from conftest import CLONES, FIXTURES


def metrics_of(source, profile=JAVA):
    frags = extract_methods(source, profile)
    graph = build_call_graph(frags)
    return [compute_metrics(f, graph, profile) for f in frags]


def test_single_empty_method():
    frags = extract_methods("void f() {}")
    assert len(frags) == 1
    f = frags[0]
    assert (f.name, f.start_line, f.end_line) == ("f", 1, 1)
    assert metrics_of("void f() {}") == [MetricVector(1, 0, 0, 0, 0, 1, 1)]


def test_two_methods_in_order():
    src = "class A {\n  int b() { return 1; }\n  int a() { return 2; }\n}\n"
    assert [f.name for f in extract_methods(src)] == ["b", "a"]


def test_literals_and_comments_do_not_affect_braces():
    src = (FIXTURES / "Literals.java").read_text()
    frags = extract_methods(src, path="Literals.java")
    # hand-bracketed: close() spans lines 2-8, after() spans 10-12
    assert [(f.name, f.start_line, f.end_line) for f in frags] == [
        ("close", 2, 8),
        ("after", 10, 12),
    ]
    # comment-only lines 5-6 are not code
    assert compute_metrics(frags[0], build_call_graph(frags)).loc == 5


def test_unbalanced_braces_reported_with_line():
    with pytest.raises(UnbalancedBraces) as info:
        extract_methods("class A {\n void f() {\n", path="A.java")
    assert info.value.line == 2


def test_unbalanced_file_is_skipped(tmp_path):
    good = tmp_path / "Good.java"
    good.write_text("class G { void g() {} }")
    bad = tmp_path / "Bad.java"
    bad.write_text("class B { void b() { }")
    frags, diags = extract_corpus(collect_sources([str(tmp_path)]))
    assert [f.name for f in frags] == ["g"]
    assert len(diags) == 1 and "Bad.java" in diags[0]


def test_control_keywords_and_calls_are_not_methods():
    src = """class A {
        A(int x) { super(); }
        void run() throws java.io.IOException, Exception {
            if (x) { foo(); }
            while (y) { }
            synchronized (this) { }
            Runnable r = new Runnable() { public void run() { } };
        }
        static { init(); }
    }"""
    assert [f.name for f in extract_methods(src)] == ["A", "run"]


def test_no_calls_no_edges():
    frags = extract_methods("class A { int f() { return 1; } int g() { return 2; } }")
    graph = build_call_graph(frags)
    assert graph.edges == frozenset()


def test_single_call_edge():
    frags = extract_methods("class A { void f() { g(); } void g() { } }")
    graph = build_call_graph(frags)
    f, g = frags
    assert graph.edges == {(f.id, g.id)}
    assert compute_metrics(g, graph).mca == 1
    assert compute_metrics(f, graph).mce == 1


def test_call_diagram():
    frags = extract_methods((FIXTURES / "CallDiagram.java").read_text(), path="D")
    ids = {f.name: f.id for f in frags}
    graph = build_call_graph(frags)
    expected = {("main", "parse"), ("main", "report"), ("parse", "token"), ("report", "token")}
    assert graph.edges == {(ids[a], ids[b]) for a, b in expected}
    assert graph.unresolved["log"] == 1 and graph.unresolved["charAt"] == 1


def test_name_collision_links_every_overload():
    src = "class A { void f() { g(); } void g() { } void g(int x) { } }"
    frags = extract_methods(src)
    graph = build_call_graph(frags)
    assert len(graph.edges) == 2


def test_for_with_nested_if():
    src = """void f(int n) {
        for (int i = 0; i < n; i++) {
            if (i > 2) {
                n--;
            }
        }
    }"""
    (m,) = metrics_of(src)
    assert (m.cc, m.nbd) == (3, 3)


def test_table3_row_b_shape():
    # 2 parameters, 1 local, straight-line, 4 code lines
    src = """int add(int a, int b) {
        int sum = a + b;
        return sum;
    }"""
    assert metrics_of(src) == [MetricVector(4, 2, 1, 0, 0, 1, 1)]


@pytest.mark.parametrize(
    "body, decisions",
    [
        ("", 0),
        ("if (a) {} else if (b) {}", 2),
        ("x = a && b || c;", 2),
        ("x = a ? 1 : 2;", 1),
        ("switch (x) { case 1: break; case 2: break; default: }", 2),
        ("try { } catch (Exception e) { } finally { }", 1),
        ("do { } while (x);", 1),
        ("java.util.List<?> xs = null; java.util.Map<? extends A, ?> m = null;", 0),
        ('String s = "if (a && b)";', 0),
    ],
)
def test_cyclomatic_complexity(body, decisions):
    (m,) = metrics_of("void f() { " + body + " }")
    assert m.cc == decisions + 1


@pytest.mark.parametrize(
    "header, count",
    [
        ("f()", 0),
        ("f(int a)", 1),
        ("f(java.util.Map<String, Integer> m, int[] xs)", 2),
        ("f(Map<String, List<Integer>> m, String... rest)", 2),
        ('f(@Named("a, b") String s, final int t)', 2),
    ],
)
def test_parameter_count(header, count):
    (m,) = metrics_of("void " + header + " { }")
    assert m.nbp == count


@pytest.mark.parametrize(
    "body, count",
    [
        ("int a = 1;", 1),
        ("int a = 1, b = 2;", 1),
        ("final List<String> xs = new ArrayList<>();", 1),
        ("a = 1; b.c = 2; foo(x); return;", 0),
        ("for (int i = 0; i < n; i++) { String s; }", 2),
        ("for (String s : items) { }", 1),
        ("try (Reader r = open()) { } catch (Exception e) { }", 1),
        ("int[] xs = new int[3]; var y = 4;", 2),
        ("if (a < b) { c = d; }", 0),
    ],
)
def test_local_declarations(body, count):
    (m,) = metrics_of("void f() { " + body + " }")
    assert m.nbv == count


def test_c_profile():
    src = "static int add(int a, int b) {\n  int s = a + b;\n  return s;\n}\nvoid g(void) const { add(1, 2); }\n"
    frags = extract_methods(src, C_LIKE)
    assert [f.name for f in frags] == ["add", "g"]
    ms = [compute_metrics(f, build_call_graph(frags), C_LIKE) for f in frags]
    assert ms[0] == MetricVector(4, 2, 1, 1, 0, 1, 1)
    assert ms[1].nbp == 0 and ms[1].mce == 1


def test_profile_from_json(tmp_path):
    path = tmp_path / "prof.json"
    path.write_text('{"name": "hash", "line_comment": ["#"], "extensions": [".x"]}')
    prof = load_profile(str(path))
    assert prof.line_comment == ("#",) and prof.extensions == (".x",)
    assert isinstance(prof.keywords, frozenset)
    assert [t.text for t in tokenize("a # b {\nc", prof)] == ["a", "c"]
    with pytest.raises(ValueError):
        load_profile("no-such-profile")


def test_edge_sums_match():
    frags, _ = extract_corpus(collect_sources([str(FIXTURES)]))
    graph = build_call_graph(frags)
    ms = [compute_metrics(f, graph) for f in frags]
    assert sum(m.mca for m in ms) == sum(m.mce for m in ms) == len(graph.edges)


def test_extraction_deterministic():
    paths = collect_sources([str(FIXTURES)])
    assert extract_corpus(paths) == extract_corpus(list(reversed(paths)))


# --- robustness properties -------------------------------------------------

ORIGINAL = (CLONES / "Original.java").read_text()


def _reformat(source: str, rng: random.Random) -> str:
    """Whitespace and comment edits that keep every code line on its own line."""
    out = []
    for line in source.splitlines():
        stripped = line.strip()
        if not stripped:
            out.append(line)
            continue
        indent = " " * rng.randint(0, 12)
        toks = tokenize(stripped)
        if toks and all("\n" not in t.text for t in toks) and "//" not in stripped \
                and "/*" not in stripped and '"' not in stripped:
            sep = " " * rng.randint(1, 3)
            stripped = sep.join(t.text for t in toks)
        roll = rng.random()
        if roll < 0.2:
            out.append(indent + "// note " + "{" * rng.randint(0, 2))
        elif roll < 0.3:
            out.append("")
        elif roll < 0.4:
            out.append(indent + "/* }\n   block */")
        suffix = "   // trailing }" if rng.random() < 0.3 and "//" not in stripped else ""
        out.append(indent + stripped + suffix)
    return "\n".join(out) + "\n"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_type1_edits_keep_metrics(seed):
    edited = _reformat(ORIGINAL, random.Random(seed))
    before = corpus_metrics(extract_methods(ORIGINAL))
    after = corpus_metrics(extract_methods(edited))
    assert after == before


def test_type2_rename_keeps_metrics():
    original = corpus_metrics(extract_methods(ORIGINAL))
    renamed = corpus_metrics(extract_methods((CLONES / "Renamed.java").read_text()))
    assert renamed == original


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["if (a) { }", "while (b) { }", "x = a && b;", "y = c || d;",
                                 "z = c ? 1 : 2;", "q = r + s;", "foo();"]), max_size=8))
def test_cc_is_decisions_plus_one(stmts):
    decisions = sum(1 for s in stmts if any(k in s for k in ("if", "while", "&&", "||", "?")))
    (m,) = metrics_of("void f() { " + " ".join(stmts) + " }")
    assert m.cc == decisions + 1
