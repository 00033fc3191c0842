import random

import pytest

from regionchoice import corpus
from regionchoice.diagram import Crossing, LinkDiagram

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus_entries():
    return corpus.corpus(random_count=40, seed=0)


@pytest.fixture(scope="session")
def diagrams(corpus_entries):
    return [e.diagram for e in corpus_entries]


@pytest.fixture
def rng():
    return random.Random(12345)


def reverse_component(dg: LinkDiagram, i: int):
    """The same diagram with component i traversed backwards, plus the ref translation."""
    comp = set(dg.component_edges[i - 1])
    new = {}
    for c, cr in dg.crossings.items():
        slots, over_in = cr.slots, cr.over_in
        if slots[0] in comp:
            slots = slots[2:] + slots[:2]
            over_in = (over_in + 2) % 4
        if cr.slots[1] in comp:
            over_in = 4 - over_in
        new[c] = Crossing(c, tuple(slots), over_in)

    def flip(r):
        hit = (r[0] == "E" and r[1] in comp) or (r[0] == "L" and dg.component_of_loop(r[1]) == i)
        return (r[0], r[1], "right" if r[2] == "left" else "left") if hit else r

    glue = [[flip(r) for r in g] for g in dg.glue]
    return LinkDiagram(new, dg.n_loops, glue, flip(dg.outer_ref)), flip


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {desc}")
