"""
Crossing changes and Reidemeister moves as local rewiring of the crossing map.

Every move returns a fresh :class:`LinkDiagram`.  Surviving arcs keep their
ids where possible; the gluing between pieces is recomputed by
:func:`rebuild` from a map of old boundary refs to new ones.

Sites and variants (all JSON friendly):

- ``crossing_change``: site ``{"crossing": x}``.
- ``r1_add``: site ``{"edge": e}`` or ``{"loop": j}``; variant
  ``{"side": "left"|"right", "sign": 1|-1}``, the side of the arc where the
  new lobe sits and the sign of the new crossing.
- ``r1_remove``: site ``{"crossing": x}``; optional variant ``{"petal": f}``.
- ``r2_add``: site ``{"first": ref, "second": ref}`` with two refs bounding
  one region; variant ``{"over": "first"|"second"}``.  The first arc is
  pushed across the second.
- ``r2_remove``: site ``{"bigon": ref}``.
- ``r3``: site ``{"triangle": ref}``.

A ref is a list ``["E", edge, side]`` or ``["L", loop, side]``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import zlinalg
from .diagram import (
    SIDES,
    Crossing,
    DiagramError,
    InvariantError,
    LinkDiagram,
    Ref,
    contract,
    rebuild,
)
from .matrices import RULES, region_choice_matrix

KINDS = ("crossing_change", "r1_add", "r1_remove", "r2_add", "r2_remove", "r3")
EAST, NORTH, WEST, SOUTH = range(4)


@dataclass(frozen=True)
class MoveSpec:
    kind: str
    site: dict
    variant: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"unknown move kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "site": self.site, "variant": self.variant}

    @classmethod
    def from_dict(cls, obj: dict) -> "MoveSpec":
        return cls(obj["kind"], dict(obj.get("site", {})), dict(obj.get("variant", {})))


def _ref(obj) -> Ref:
    try:
        kind, i, side = obj
    except (TypeError, ValueError):
        raise DiagramError(f"bad ref {obj!r}") from None
    if kind not in ("E", "L") or side not in SIDES:
        raise DiagramError(f"bad ref {obj!r}")
    return (kind, int(i), side)


def _other(side: str) -> str:
    return "right" if side == "left" else "left"


def _slots(dg: LinkDiagram) -> dict[int, list[int]]:
    return {c: list(cr.slots) for c, cr in dg.crossings.items()}


def _build(slots: dict, over: dict) -> dict[int, Crossing]:
    return {c: Crossing(c, tuple(s), over[c]) for c, s in slots.items()}


def _fresh(dg: LinkDiagram, k: int) -> list[int]:
    top = max(dg.edges, default=0)
    return list(range(top + 1, top + 1 + k))


def _loop_shift(removed: int):
    def shift(r: Ref) -> Ref:
        if r[0] == "L" and r[1] > removed:
            return ("L", r[1] - 1, r[2])
        return r
    return shift


def _single_corner_region(dg: LinkDiagram, rid: int, corners: int) -> bool:
    return len(dg.cycles_of_region(rid)) == 1 and len(dg.regions[rid].corners) == corners


# ------------------------------------------------------------------ moves


def _crossing_change(dg, site, variant):
    x = int(site["crossing"])
    if x not in dg.crossings:
        raise DiagramError(f"crossing {x} not found")
    cr = dg.crossings[x]
    s = cr.over_in
    crossings = dict(dg.crossings)
    crossings[x] = Crossing(x, tuple(cr.slots[(k + s) % 4] for k in range(4)), 4 - s)
    return crossings, dg.n_loops, lambda r: r


# slot layouts (e, f = lobe, g) and over_in for each (sign, lobe side)
_KINK_LAYOUT = {
    (-1, "right"): (("e", "f", "f", "g"), 1),
    (1, "left"): (("e", "g", "f", "f"), 3),
    (-1, "left"): (("f", "e", "g", "f"), 1),
    (1, "right"): (("f", "f", "g", "e"), 3),
}


def _r1_add(dg, site, variant):
    side = variant.get("side", "left")
    sign = int(variant.get("sign", 1))
    if (sign, side) not in _KINK_LAYOUT:
        raise DiagramError("r1_add needs side left/right and sign +-1")
    layout, over_in = _KINK_LAYOUT[(sign, side)]
    slots = _slots(dg)
    over = {c: cr.over_in for c, cr in dg.crossings.items()}
    x = max(dg.crossings, default=0) + 1
    if "edge" in site:
        e = int(site["edge"])
        if e not in dg.skeleton.head:
            raise DiagramError(f"edge {e} not found")
        f, g = _fresh(dg, 2)
        h, j = dg.skeleton.head[e]
        slots[h][j] = g
        n_loops, ref_map = dg.n_loops, (lambda r: r)
    elif "loop" in site:
        j = int(site["loop"])
        if not 0 <= j < dg.n_loops:
            raise DiagramError(f"loop {j} not found")
        e, f = _fresh(dg, 2)
        g = e
        shift = _loop_shift(j)
        n_loops = dg.n_loops - 1
        ref_map = lambda r: ("E", e, r[2]) if r[:2] == ("L", j) else shift(r)
    else:
        raise DiagramError("r1_add needs an edge or loop site")
    names = {"e": e, "f": f, "g": g}
    slots[x] = [names[k] for k in layout]
    over[x] = over_in
    return _build(slots, over), n_loops, ref_map


def _petals(dg: LinkDiagram, x: int) -> list[int]:
    """Edges forming a removable kink lobe at x."""
    sk = dg.skeleton
    out = []
    for f in sorted(set(dg.crossings[x].slots)):
        (c1, a), (c2, b) = sk.tail[f], sk.head[f]
        if c1 != x or c2 != x or (a - b) % 4 not in (1, 3):
            continue
        lobe = ("E", f, "right" if (a - b) % 4 == 1 else "left")
        if _single_corner_region(dg, dg.region_of_ref(lobe), 1):
            out.append(f)
    return out


def _straight(dg: LinkDiagram, xs) -> dict:
    cont = {}
    for x in xs:
        cr = dg.crossings[x]
        cont[(x, 0)] = 2
        cont[(x, cr.over_in)] = cr.over_out
    return cont


def _r1_remove(dg, site, variant):
    x = int(site["crossing"])
    if x not in dg.crossings:
        raise DiagramError(f"crossing {x} not found")
    petals = _petals(dg, x)
    if not petals:
        raise DiagramError(f"crossing {x} is not a removable kink")
    f = int(variant.get("petal", petals[0]))
    if f not in petals:
        raise DiagramError(f"edge {f} is not a removable lobe at {x}")
    crossings, n_loops, mapping, _, _ = contract(dg, {x}, _straight(dg, [x]), frozenset({f}))
    return crossings, n_loops, mapping.get


def _split_strand(dg, ref, slots, new_ids):
    """Cut an arc into three consecutive edges a, b, c; returns them and the ref rewrite."""
    kind, i, _ = ref
    if kind == "E":
        a, (b, c) = i, new_ids
        h, j = dg.skeleton.head[i]
        slots[h][j] = c
        return (a, b, c), None
    b, a = new_ids
    return (a, b, a), i


def _r2_add(dg, site, variant):
    r1, r2 = _ref(site["first"]), _ref(site["second"])
    for r in (r1, r2):
        if r not in dg.skeleton.ref_cycle:
            raise DiagramError(f"unknown ref {list(r)}")
    if r1[:2] == r2[:2]:
        raise DiagramError("r2_add needs two different arcs")
    if dg.region_of_ref(r1) != dg.region_of_ref(r2):
        raise DiagramError("r2_add arcs do not bound a common region")
    first_over = variant.get("over", "first") == "first"
    slots = _slots(dg)
    over = {c: cr.over_in for c, cr in dg.crossings.items()}
    ids = _fresh(dg, 4)
    (a1, b1, c1), loop1 = _split_strand(dg, r1, slots, ids[:2])
    (a2, b2, c2), loop2 = _split_strand(dg, r2, slots, ids[2:])
    # first strand dips across the second; d = +1 when it runs east
    east1 = r1[2] == "right"
    east2 = r2[2] == "left"
    P, Q = (max(dg.crossings, default=0) + k for k in (1, 2))
    at = {
        P: {NORTH: a1 if east1 else c1, SOUTH: b1, WEST: a2 if east2 else c2, EAST: b2},
        Q: {NORTH: c1 if east1 else a1, SOUTH: b1, WEST: b2, EAST: c2 if east2 else a2},
    }
    in1 = {P: NORTH if east1 else SOUTH, Q: SOUTH if east1 else NORTH}
    in2 = {P: WEST if east2 else EAST, Q: WEST if east2 else EAST}
    for X in (P, Q):
        under, top = (in2[X], in1[X]) if first_over else (in1[X], in2[X])
        slots[X] = [at[X][(under + k) % 4] for k in range(4)]
        over[X] = (top - under) % 4
    removed_loops = sorted(j for j in (loop1, loop2) if j is not None)
    rename = {}
    for j, new in ((loop1, a1), (loop2, a2)):
        if j is not None:
            rename[j] = new

    def ref_map(r: Ref) -> Ref:
        if r[0] == "L":
            if r[1] in rename:
                return ("E", rename[r[1]], r[2])
            return ("L", r[1] - sum(1 for j in removed_loops if j < r[1]), r[2])
        return r

    return _build(slots, over), dg.n_loops - len(removed_loops), ref_map


def _bigon(dg: LinkDiagram, ref: Ref):
    rid = dg.region_of_ref(ref)
    if not _single_corner_region(dg, rid, 2):
        raise DiagramError("site is not a bigon")
    (P, _), (Q, _) = sorted(dg.regions[rid].corners)
    edges = sorted({r[1] for r in dg.regions[rid].boundary if r[0] == "E"})
    if P == Q or len(edges) != 2:
        raise DiagramError("site is not a bigon")
    sk = dg.skeleton
    b = edges[0]
    parities = {sk.tail[b][1] % 2, sk.head[b][1] % 2}
    if len(parities) != 1:
        raise DiagramError("neither strand passes over the bigon at both crossings")
    return P, Q, edges


def _r2_remove(dg, site, variant):
    P, Q, edges = _bigon(dg, _ref(site["bigon"]))
    crossings, n_loops, mapping, _, _ = contract(dg, {P, Q}, _straight(dg, [P, Q]), frozenset(edges))
    return crossings, n_loops, mapping.get


def _triangle(dg: LinkDiagram, ref: Ref):
    rid = dg.region_of_ref(ref)
    if not _single_corner_region(dg, rid, 3):
        raise DiagramError("site is not a triangle")
    crossings = {c for c, _ in dg.regions[rid].corners}
    edges = sorted({r[1] for r in dg.regions[rid].boundary})
    if len(crossings) != 3 or len(edges) != 3:
        raise DiagramError("site is not a triangle")
    sk = dg.skeleton
    sides = []
    for t in edges:
        (X, i), (Y, j) = sk.tail[t], sk.head[t]
        sides.append((t, X, i, Y, j))
    outer = {dg.crossings[X].slots[(i + 2) % 4] for _, X, i, Y, j in sides} | {
        dg.crossings[Y].slots[(j + 2) % 4] for _, X, i, Y, j in sides
    }
    if outer & set(edges):
        raise DiagramError("triangle strands close up on themselves")
    if not any(i % 2 == 1 and j % 2 == 1 for _, _, i, _, j in sides):
        raise DiagramError("no strand passes over both of its triangle crossings")
    return sides


def _r3(dg, site, variant):
    tri_ref = _ref(site["triangle"])
    sides = _triangle(dg, tri_ref)
    slots = _slots(dg)
    old = dg.crossings
    for t, X, i, Y, j in sides:
        o_x = old[X].slots[(i + 2) % 4]
        o_y = old[Y].slots[(j + 2) % 4]
        slots[X][i], slots[X][(i + 2) % 4] = o_y, t
        slots[Y][j], slots[Y][(j + 2) % 4] = o_x, t
    over = {c: cr.over_in for c, cr in old.items()}
    tri = {t for t, *_ in sides}
    inside = set(dg.regions[dg.region_of_ref(tri_ref)].boundary)

    def ref_map(r: Ref):
        if r[0] == "E" and r[1] in tri:
            # the triangle survives on the other side of each of its edges
            return ("E", r[1], _other(r[2])) if r in inside else None
        return r

    return _build(slots, over), dg.n_loops, ref_map


_HANDLERS = {
    "crossing_change": _crossing_change,
    "r1_add": _r1_add,
    "r1_remove": _r1_remove,
    "r2_add": _r2_add,
    "r2_remove": _r2_remove,
    "r3": _r3,
}


def apply_move(dg: LinkDiagram, spec: MoveSpec) -> LinkDiagram:
    return _apply(dg, spec)[0]


def _apply(dg: LinkDiagram, spec: MoveSpec):
    try:
        crossings, n_loops, ref_map = _HANDLERS[spec.kind](dg, spec.site, spec.variant)
    except KeyError as exc:
        raise DiagramError(f"missing site field {exc}") from None
    if not crossings and not n_loops:
        raise DiagramError("move would leave an empty diagram")
    return rebuild(dg, crossings, n_loops, ref_map), ref_map


# ------------------------------------------------------------------ search


def removable_kinks(dg: LinkDiagram) -> list[int]:
    return [x for x in dg.crossing_ids if _petals(dg, x)]


def bigons(dg: LinkDiagram) -> list[Ref]:
    out = []
    for reg in dg.regions:
        ref = min(reg.boundary)
        try:
            _bigon(dg, ref)
        except DiagramError:
            continue
        out.append(ref)
    return out


def triangles(dg: LinkDiagram) -> list[Ref]:
    out = []
    for reg in dg.regions:
        ref = min(reg.boundary)
        try:
            _triangle(dg, ref)
        except DiagramError:
            continue
        out.append(ref)
    return out


def _arcs(dg: LinkDiagram) -> list[dict]:
    return [{"edge": e} for e in dg.edges] + [{"loop": j} for j in range(dg.n_loops)]


def candidate_moves(dg: LinkDiagram, rng: random.Random, max_crossings: int = 20) -> list[MoveSpec]:
    """A sample of applicable moves, at most a few per kind."""
    out = [MoveSpec("crossing_change", {"crossing": x}) for x in dg.crossing_ids]
    if dg.n + 1 <= max_crossings:
        for site in _arcs(dg):
            out.append(MoveSpec("r1_add", site, {"side": rng.choice(SIDES), "sign": rng.choice((1, -1))}))
    if dg.n > 1:
        out += [MoveSpec("r1_remove", {"crossing": x}) for x in removable_kinks(dg)]
    if dg.n + 2 <= max_crossings:
        for reg in dg.regions:
            refs = sorted(reg.boundary)
            pairs = [(a, b) for a, b in itertools.permutations(refs, 2) if a[:2] != b[:2]]
            for a, b in rng.sample(pairs, min(2, len(pairs))):
                out.append(MoveSpec("r2_add", {"first": list(a), "second": list(b)},
                                    {"over": rng.choice(("first", "second"))}))
    if dg.n > 2:
        out += [MoveSpec("r2_remove", {"bigon": list(r)}) for r in bigons(dg)]
    out += [MoveSpec("r3", {"triangle": list(r)}) for r in triangles(dg)]
    return out


_WEIGHTS = {"crossing_change": 1.0, "r1_add": 1.0, "r1_remove": 1.0, "r2_add": 1.5, "r2_remove": 1.0, "r3": 3.0}


def random_walk(dg: LinkDiagram, rng: random.Random, steps: int, max_crossings: int = 20) -> Iterator[tuple[LinkDiagram, MoveSpec]]:
    """Yield (diagram, move that produced it) for `steps` random moves."""
    for _ in range(steps):
        cands = candidate_moves(dg, rng, max_crossings)
        by_kind: dict[str, list[MoveSpec]] = {}
        for m in cands:
            by_kind.setdefault(m.kind, []).append(m)
        kinds = sorted(by_kind)
        kind = rng.choices(kinds, [_WEIGHTS[k] for k in kinds])[0]
        spec = rng.choice(by_kind[kind])
        dg = apply_move(dg, spec)
        yield dg, spec


# ------------------------------------------------------------------ checks


def inverse_move(before: LinkDiagram, after: LinkDiagram, spec: MoveSpec) -> Optional[MoveSpec]:
    """A move on `after` that undoes `spec` (when one is locatable)."""
    if spec.kind == "crossing_change":
        return spec
    if spec.kind == "r1_add":
        x = max(after.crossings)
        new_lobes = [f for f in _petals(after, x) if f not in before.skeleton.head]
        return MoveSpec("r1_remove", {"crossing": x}, {"petal": max(new_lobes)})
    if spec.kind == "r2_add":
        # the two middle edges are the first fresh ids of each strand
        ids = _fresh(before, 4)
        for r in bigons(after):
            if {e for _, e, _ in after.regions[after.region_of_ref(r)].boundary} == {ids[0], ids[2]}:
                return MoveSpec("r2_remove", {"bigon": list(r)})
        return None
    if spec.kind == "r3":
        tri = {t for t, *_ in _triangle(before, _ref(spec.site["triangle"]))}
        for r in triangles(after):
            if {e for _, e, _ in after.regions[after.region_of_ref(r)].boundary} == tri:
                return MoveSpec("r3", {"triangle": list(r)})
        return None
    return None


def same_diagram(a: LinkDiagram, b: LinkDiagram) -> bool:
    """Equality up to relabelling the free loops."""
    if a.crossings != b.crossings or a.n_loops != b.n_loops:
        return False
    target = {frozenset(r.boundary) for r in b.regions}
    outer_b = frozenset(b.regions[b.outer].boundary)
    for perm in itertools.permutations(range(a.n_loops)):
        def ren(r):
            return ("L", perm[r[1]], r[2]) if r[0] == "L" else r
        regs = [frozenset(ren(r) for r in reg.boundary) for reg in a.regions]
        if set(regs) == target and regs[a.outer] == outer_b:
            return True
    return False


@dataclass
class MoveReport:
    kind: str
    ranks_before: dict
    ranks_after: dict
    kernel_before: dict
    kernel_after: dict
    expected_delta: int
    ok: bool
    problems: list

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _region_correspondence(before: LinkDiagram, after: LinkDiagram, ref_map) -> dict[int, int]:
    """Old region id -> new region id, via surviving boundary refs."""
    out = {}
    for reg in before.regions:
        targets = {after.region_of_ref(ref_map(r)) for r in reg.boundary if ref_map(r) is not None}
        if len(targets) == 1:
            out[reg.id] = targets.pop()
    return out


def _ranks(dg: LinkDiagram, cache: Optional[dict] = None) -> dict:
    if cache is not None and id(dg) in cache:
        return cache[id(dg)][1]
    r = {code: zlinalg.rank(region_choice_matrix(dg, code)) for code in RULES}
    if cache is not None:
        cache[id(dg)] = (dg, r)
    return r


def rank_delta_check(before: LinkDiagram, after: LinkDiagram, spec: MoveSpec, cache: Optional[dict] = None) -> MoveReport:
    new, ref_map = _apply(before, spec)
    if new != after:
        raise DiagramError("`after` is not the result of applying the move to `before`")
    problems = []
    rb, ra = _ranks(before, cache), _ranks(after, cache)
    cols_b, cols_a = len(before.regions), len(after.regions)
    kb = {k: cols_b - v for k, v in rb.items()}
    ka = {k: cols_a - v for k, v in ra.items()}
    dd = after.d - before.d
    expected = {
        "crossing_change": 0,
        "r3": 0,
        "r1_add": 1,
        "r1_remove": -1,
        "r2_add": 2 + dd,
        "r2_remove": -2 + dd,
    }[spec.kind]
    if spec.kind == "r2_add" and dd not in (0, -1):
        problems.append(f"r2_add changed d by {dd}")
    if spec.kind == "r2_remove" and dd not in (0, 1):
        problems.append(f"r2_remove changed d by {dd}")
    if spec.kind in ("crossing_change", "r3", "r1_add", "r1_remove") and dd:
        problems.append(f"{spec.kind} changed d by {dd}")
    for code in RULES:
        if ra[code] - rb[code] != expected:
            problems.append(f"{code}: rank {rb[code]} -> {ra[code]}, expected change {expected}")
        if ka[code] != kb[code]:
            problems.append(f"{code}: kernel rank {kb[code]} -> {ka[code]}")
        if ra[code] != after.n + after.d - after.l:
            problems.append(f"{code}: rank {ra[code]} differs from n+d-l")

    if spec.kind == "crossing_change":
        x = int(spec.site["crossing"])
        corr = _region_correspondence(before, after, ref_map)
        if len(corr) != cols_b:
            problems.append("crossing change altered the region structure")
        else:
            for code in ("d2", "a2", "d1", "a1"):
                mb = region_choice_matrix(before, code).entries
                ma = region_choice_matrix(after, code).entries
                for i, c in enumerate(before.crossing_ids):
                    moved = [ma[i][corr[j]] for j in range(cols_b)]
                    want = [-v for v in mb[i]] if (code[0] == "a" and c == x) else mb[i]
                    if moved != want:
                        problems.append(f"{code}: row of crossing {c} not as expected after crossing change")
    if spec.kind == "r1_add":
        problems += _r1_pattern(before, after, ref_map)
    return MoveReport(spec.kind, rb, ra, kb, ka, expected, not problems, problems)


def _r1_pattern(before: LinkDiagram, after: LinkDiagram, ref_map) -> list[str]:
    """The new row is (petal, twice-touching, other) = (1, 2, 1) / eps (1, -2, 1); old rows embed."""
    problems = []
    x = max(after.crossings)
    corr = _region_correspondence(before, after, ref_map)
    petal = [r for r in range(len(after.regions)) if r not in corr.values()]
    if len(corr) != len(before.regions) or len(petal) != 1:
        return ["kink insertion did not add exactly one region"]
    p = petal[0]
    twice = after.twice_region(x)
    rest = {after.region_of_quadrant(x, q) for q in range(4)} - {p, twice}
    if twice is None or len(rest) != 1:
        return ["new crossing is not a kink"]
    o = rest.pop()
    eps = after.sign(x)
    for code, want in (("d2", (1, 2, 1)), ("d1", (1, 1, 1)), ("a2", (eps, -2 * eps, eps)), ("a1", (eps, -eps, eps))):
        ma = region_choice_matrix(after, code)
        row = ma.row(x)
        got = (row[p], row[twice], row[o])
        if got != want or sum(1 for v in row if v) != 3:
            problems.append(f"{code}: kink row {got}, expected {want}")
        mb = region_choice_matrix(before, code)
        for c in before.crossing_ids:
            old, new = mb.row(c), ma.row(c)
            if new[p] != 0 or any(new[corr[j]] != old[j] for j in range(len(old))):
                problems.append(f"{code}: row of crossing {c} changed under kink insertion")
    return problems
