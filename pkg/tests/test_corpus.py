import pytest

from regionchoice import corpus
from regionchoice.diagram import DiagramError
from regionchoice.matrices import region_choice_matrix
from regionchoice import zlinalg


def test_builtins_load_and_check():
    for name in corpus.list_builtins():
        entry = corpus.builtin(name)
        entry.check()
        assert entry.diagram.n >= 1


def test_builtin_counts():
    expect = {"figure8": (4, 1, 1), "torus_2_4": (4, 1, 2), "hopf": (2, 1, 2), "trefoil": (3, 1, 1),
              "kink_sum(3)": (3, 3, 3), "kink_plus_loops(3)": (1, 3, 3)}
    for name, ndl in expect.items():
        dg = corpus.builtin(name).diagram
        assert (dg.n, dg.d, dg.l) == ndl


def test_unknown_builtin():
    for name in ("nope", "kink_sum(0)", "kink_plus_loops(x)"):
        with pytest.raises(DiagramError):
            corpus.builtin(name)


def test_random_diagrams_are_deterministic():
    a = corpus.random_diagram(11, max_crossings=10, components=2)
    b = corpus.random_diagram(11, max_crossings=10, components=2)
    assert a == b and a.l == 2 and a.n <= 10


def test_single_crossing_cap_gives_a_kink():
    dg = corpus.random_diagram(4, max_crossings=1, components=1)
    assert dg.n == 1 and dg.reducible_crossings() == {1}


def test_corpus_shape():
    entries = corpus.corpus(random_count=20, seed=1)
    assert len(entries) == len(corpus.list_builtins()) + 20
    assert len({e.name for e in entries}) == len(entries)
    for e in entries:
        dg = e.diagram
        assert dg.n <= 15
        if e.name not in corpus.list_builtins():
            assert dg.l <= 3
        assert zlinalg.rank(region_choice_matrix(dg, "a2")) == dg.n + dg.d - dg.l
    assert any(e.diagram.d > 1 for e in entries)
    assert any(e.diagram.reducible_crossings() for e in entries)


def test_kink_sum_signs():
    dg = corpus.kink_sum(2, [1, 1])
    assert [dg.sign(x) for x in dg.crossing_ids] == [1, 1]
    with pytest.raises(DiagramError):
        corpus.kink_sum(0)
