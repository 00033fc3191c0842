"""Built-in diagrams with known data, and seeded random diagrams from move walks."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .diagram import Crossing, DiagramError, InvariantError, LinkDiagram, parse_diagram
from .matrices import find_permutation, region_choice_matrix
from . import zlinalg

# golden matrices, in the row/column order they are usually printed
FIGURE8_DEFINITE = [[1, 1, 1, 0, 0, 1], [1, 1, 0, 0, 1, 1], [0, 1, 1, 1, 1, 0], [0, 0, 1, 1, 1, 1]]
FIGURE8_ALTERNATING = [[-1, 1, -1, 0, 0, 1], [-1, 1, 0, 0, -1, 1], [0, 1, -1, 1, -1, 0], [0, 0, -1, 1, -1, 1]]
FIGURE8_SCORES = (1, -1, 3, 2)
FIGURE8_DEFINITE_U = (2, -1, -2, 0, 0, 0)
FIGURE8_ALTERNATING_U = (-2, -1, 2, 0, 0, 0)

TORUS_DEFINITE = [[1, 1, 1, 1, 0, 0], [0, 1, 1, 1, 1, 0], [0, 1, 1, 0, 1, 1], [1, 1, 1, 0, 0, 1]]
TORUS_ALTERNATING = [[-1, 1, 1, -1, 0, 0], [0, 1, 1, -1, -1, 0], [0, 1, 1, 0, -1, -1], [-1, 1, 1, 0, 0, -1]]
TORUS_FUNCTIONAL = (1, -1, 1, -1)

# PD codes: each 4-tuple lists edges counterclockwise from the incoming under-strand.
# Crossing ids are the list positions (from 1), ordered so the golden rows line up.
PD_CODES = {
    "figure8": [[6, 3, 7, 4], [2, 7, 3, 8], [4, 2, 5, 1], [8, 6, 1, 5]],
    "torus_2_4": [[6, 1, 7, 2], [2, 5, 3, 6], [8, 3, 5, 4], [4, 7, 1, 8]],
    "hopf": [[4, 1, 3, 2], [2, 3, 1, 4]],
    "two_component_fig": [[6, 1, 7, 2], [10, 7, 5, 8], [4, 5, 1, 6], [2, 10, 3, 9], [8, 4, 9, 3]],
    "trefoil": [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]],
    "knot_5_2": [[1, 5, 2, 4], [3, 9, 4, 8], [5, 1, 6, 10], [7, 3, 8, 2], [9, 7, 10, 6]],
    "knot_6_1": [[1, 7, 2, 6], [3, 10, 4, 11], [5, 3, 6, 2], [7, 1, 8, 12], [9, 4, 10, 5], [11, 9, 12, 8]],
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    diagram: LinkDiagram
    expected: dict = field(default_factory=dict)

    def check(self) -> None:
        """Verify the attached expectations; raises InvariantError on mismatch."""
        dg, exp = self.diagram, self.expected
        for key in ("n", "d", "l", "regions"):
            if key in exp:
                got = len(dg.regions) if key == "regions" else getattr(dg, key)
                if got != exp[key]:
                    raise InvariantError(f"{self.name}: {key} is {got}, expected {exp[key]}")
        if "rank" in exp:
            for code in ("d1", "d2", "a1", "a2"):
                r = zlinalg.rank(region_choice_matrix(dg, code))
                if r != exp["rank"]:
                    raise InvariantError(f"{self.name}: rank of {code} is {r}, expected {exp['rank']}")
        gold = exp.get("matrices")
        if gold:
            pairs = [(region_choice_matrix(dg, code).entries, m) for code, m in gold.items()]
            if find_permutation(pairs) is None:
                raise InvariantError(f"{self.name}: matrices do not match the golden ones")


def pd_diagram(pd, outer=None) -> LinkDiagram:
    doc = {"crossings": [{"id": i + 1, "slots": list(s)} for i, s in enumerate(pd)]}
    if outer is not None:
        doc["outer"] = outer
    return parse_diagram(doc)


def _kink(cid: int, e: int, f: int, sign: int) -> Crossing:
    # positive: the strand enters under, loops back over; negative is its mirror
    return Crossing(cid, (e, e, f, f), 3) if sign > 0 else Crossing(cid, (e, f, f, e), 1)


def _twice_ref(cr: Crossing):
    alone = LinkDiagram({cr.id: cr})
    return min(alone.regions[alone.twice_region(cr.id)].boundary)


def kink_sum(l: int, signs=None) -> LinkDiagram:
    """Split sum of l one-crossing kinks sharing the twice-touching region."""
    if l < 1:
        raise DiagramError("need at least one kink")
    signs = list(signs) if signs is not None else [1 if i % 2 == 0 else -1 for i in range(l)]
    crossings = {i + 1: _kink(i + 1, 2 * i + 1, 2 * i + 2, signs[i]) for i in range(l)}
    refs = [_twice_ref(c) for c in crossings.values()]
    return LinkDiagram(crossings, 0, [refs], refs[0])


def kink_plus_loops(l: int, sign: int = 1) -> LinkDiagram:
    """One kink plus l - 1 free loops placed in its twice-touching region."""
    if l < 1:
        raise DiagramError("need at least one component")
    cr = _kink(1, 1, 2, sign)
    host = _twice_ref(cr)
    glue = [[host] + [("L", j, "right") for j in range(l - 1)]]
    return LinkDiagram({1: cr}, l - 1, glue, host)


def _kink_sum_expected(l: int, signs) -> dict:
    d2, d1, a2, a1 = [], [], [], []
    for i, eps in enumerate(signs):
        lobes = [0] * (2 * l)
        lobes[2 * i] = lobes[2 * i + 1] = 1
        d2.append([2] + lobes)
        d1.append([1] + lobes)
        a2.append([-2 * eps] + [eps * v for v in lobes])
        a1.append([-eps] + [eps * v for v in lobes])
    return {"d1": d1, "d2": d2, "a1": a1, "a2": a2}


def _entry(name: str) -> CorpusEntry:
    m = re.fullmatch(r"(kink_sum|kink_plus_loops)\((\d+)\)", name)
    if m:
        l = int(m.group(2))
        if m.group(1) == "kink_sum":
            dg = kink_sum(l)
            signs = [dg.sign(x) for x in dg.crossing_ids]
            return CorpusEntry(name, dg, {"n": l, "d": l, "l": l, "regions": 2 * l + 1, "rank": l,
                                          "matrices": _kink_sum_expected(l, signs)})
        dg = kink_plus_loops(l)
        eps = dg.sign(1)
        zeros = [0] * (l - 1)
        gold = {"d1": [[1, 1, 1] + zeros], "d2": [[2, 1, 1] + zeros],
                "a1": [[-eps, eps, eps] + zeros], "a2": [[-2 * eps, eps, eps] + zeros]}
        return CorpusEntry(name, dg, {"n": 1, "d": l, "l": l, "regions": l + 2, "rank": 1, "matrices": gold})
    if name not in PD_CODES:
        raise DiagramError(f"unknown corpus entry {name!r}")
    dg = pd_diagram(PD_CODES[name])
    exp = {"n": dg.n, "d": 1}
    if name == "figure8":
        exp.update(l=1, regions=6, rank=4, matrices={"d1": FIGURE8_DEFINITE, "a1": FIGURE8_ALTERNATING,
                                                      "d2": FIGURE8_DEFINITE, "a2": FIGURE8_ALTERNATING})
    elif name == "torus_2_4":
        exp.update(l=2, regions=6, rank=3, matrices={"d1": TORUS_DEFINITE, "a1": TORUS_ALTERNATING,
                                                      "d2": TORUS_DEFINITE, "a2": TORUS_ALTERNATING})
    elif name == "hopf":
        exp.update(l=2, regions=4, rank=1)
    elif name == "two_component_fig":
        exp.update(l=2, regions=7, rank=4)
    else:
        exp.update(l=1, regions=dg.n + 2, rank=dg.n)
    return CorpusEntry(name, dg, exp)


BUILTIN_NAMES = (
    "figure8", "torus_2_4", "hopf", "two_component_fig", "trefoil", "knot_5_2", "knot_6_1",
    "kink_sum(1)", "kink_sum(2)", "kink_sum(3)", "kink_sum(4)",
    "kink_plus_loops(1)", "kink_plus_loops(2)", "kink_plus_loops(3)",
)


def builtin(name: str) -> CorpusEntry:
    entry = _entry(name)
    entry.check()
    return entry


def list_builtins() -> list[str]:
    return list(BUILTIN_NAMES)


def random_diagram(seed: int, max_crossings: int = 10, components: int = 1, steps: Optional[int] = None) -> LinkDiagram:
    """Deterministic diagram from a random move walk started at a split sum."""
    from .moves import random_walk

    if not 1 <= max_crossings <= 20:
        raise DiagramError("max_crossings must lie in 1..20")
    if components < 1:
        raise DiagramError("need at least one component")
    start = kink_sum(components) if components <= max_crossings else kink_plus_loops(components)
    rng = random.Random(seed)
    steps = 4 * max_crossings if steps is None else steps
    dg = start
    for dg, _ in random_walk(start, rng, steps, max_crossings):
        pass
    return dg


def corpus(random_count: int = 40, seed: int = 0) -> list[CorpusEntry]:
    """Builtins plus seeded random diagrams (n <= 15, up to three components)."""
    out = [builtin(n) for n in BUILTIN_NAMES]
    rng = random.Random(seed)
    for k in range(random_count):
        comps = 1 + k % 3
        s = rng.randrange(1 << 30)
        dg = random_diagram(s, max_crossings=rng.randint(max(comps, 3), 15), components=comps)
        out.append(CorpusEntry(f"random(seed={s},l={comps})", dg, {"l": comps}))
    return out
