"""
Link diagrams as planar combinatorial maps
==========================================

A diagram is a set of 4-valent crossings plus free loops (components with no
crossings).  Each crossing lists four edge ids counterclockwise, starting from
the incoming under-strand, so slot 0 is under-in, slot 2 is under-out and the
over-strand sits in slots 1 and 3.  Quadrant ``k`` of a crossing is the corner
between slot ``k`` and slot ``k + 1``.

Faces are traced per connected piece of the projection.  When the projection
has several pieces (or free loops), a gluing records which boundary cycles
of different pieces bound the same region of the sphere.  A boundary is named
by a *ref*: ``("E", edge, side)`` for a side of an edge, or
``("L", loop, side)`` for a side of a free loop, with side ``"left"`` or
``"right"`` relative to the orientation.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

Ref = tuple[str, int, str]
SIDES = ("left", "right")


class DiagramError(ValueError):
    """Malformed or inconsistent diagram input, or an inapplicable operation."""


class InvariantError(RuntimeError):
    """An internal invariant failed; indicates a bug rather than bad input."""


@dataclass(frozen=True)
class Crossing:
    id: int
    slots: tuple[int, int, int, int]
    over_in: int  # slot index (1 or 3) of the incoming over-strand

    @property
    def over_out(self) -> int:
        return (self.over_in + 2) % 4

    @property
    def sign(self) -> int:
        # Right-handed crossing: the over-strand turned a quarter turn
        # counterclockwise points along the under-strand.
        return 1 if self.over_in == 3 else -1

    def incoming(self, k: int) -> bool:
        return k == 0 or k == self.over_in

    def heading(self, k: int) -> int:
        """Direction of travel (in quarter turns from slot 0) of the strand through slot k."""
        out = (k + 2) % 4 if self.incoming(k) else k
        return out

    def is_over(self, k: int) -> bool:
        return k % 2 == 1


@dataclass
class Region:
    id: int
    corners: frozenset
    touches: dict
    loop_boundaries: frozenset
    boundary: tuple
    is_outer: bool

    def touch_count(self, x: int) -> int:
        return self.touches.get(x, 0)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


class _Skeleton:
    """Per-piece structure of the map, before any gluing between pieces."""

    def __init__(self, crossings: Mapping[int, Crossing], n_loops: int):
        self.crossings = crossings
        self.n_loops = n_loops
        occ: dict[int, list[tuple[int, int]]] = {}
        for c in sorted(crossings):
            for k, e in enumerate(crossings[c].slots):
                occ.setdefault(e, []).append((c, k))
        self.tail: dict[int, tuple[int, int]] = {}
        self.head: dict[int, tuple[int, int]] = {}
        self.partner: dict[tuple[int, int], tuple[int, int]] = {}
        for e, places in occ.items():
            if len(places) != 2:
                raise DiagramError(f"edge {e} appears {len(places)} times (expected 2)")
            ins = [p for p in places if crossings[p[0]].incoming(p[1])]
            if len(ins) != 1:
                raise DiagramError(f"edge {e} is not incoming at exactly one end")
            outs = [p for p in places if p != ins[0]]
            self.head[e], self.tail[e] = ins[0], outs[0]
            self.partner[places[0]] = places[1]
            self.partner[places[1]] = places[0]
        self.edges = sorted(occ)

        # faces: leave quadrant k along slot k, re-enter at the clockwise
        # neighbour quadrant of the arrival slot
        self.cycles: list[tuple[tuple, tuple]] = []
        seen: set[tuple[int, int]] = set()
        for c in sorted(crossings):
            for q in range(4):
                if (c, q) in seen:
                    continue
                quads, refs = [], []
                cur = (c, q)
                while cur not in seen:
                    seen.add(cur)
                    quads.append(cur)
                    cc, k = cur
                    e = crossings[cc].slots[k]
                    refs.append(("E", e, "right" if crossings[cc].incoming(k) else "left"))
                    c2, j = self.partner[cur]
                    cur = (c2, (j - 1) % 4)
                if cur != (c, q):
                    raise InvariantError("face walk did not close")
                self.cycles.append((tuple(quads), tuple(refs)))
        self.n_crossing_cycles = len(self.cycles)
        for j in range(n_loops):
            for s in SIDES:
                self.cycles.append(((), (("L", j, s),)))

        self.ref_cycle: dict[Ref, int] = {}
        self.quad_cycle: dict[tuple[int, int], int] = {}
        for i, (quads, refs) in enumerate(self.cycles):
            for r in refs:
                self.ref_cycle[r] = i
            for qd in quads:
                self.quad_cycle[qd] = i

        # connected pieces of the projection
        ids = sorted(crossings)
        index = {c: i for i, c in enumerate(ids)}
        uf = _UnionFind(len(ids))
        for e in self.edges:
            uf.union(index[self.tail[e][0]], index[self.head[e][0]])
        roots = sorted({uf.find(i) for i in range(len(ids))})
        root_piece = {r: p for p, r in enumerate(roots)}
        self.piece_of_crossing = {c: root_piece[uf.find(index[c])] for c in ids}
        self.n_crossing_pieces = len(roots)
        self.n_pieces = len(roots) + n_loops
        self.cycle_piece: list[int] = []
        for i, (quads, refs) in enumerate(self.cycles):
            if quads:
                self.cycle_piece.append(self.piece_of_crossing[quads[0][0]])
            else:
                self.cycle_piece.append(len(roots) + refs[0][1])
        per_piece = Counter(self.cycle_piece[: self.n_crossing_cycles])
        size = Counter(self.piece_of_crossing.values())
        for p, cnt in size.items():
            if per_piece[p] != cnt + 2:
                raise DiagramError(
                    f"map is not planar: a piece with {cnt} crossings has {per_piece[p]} faces"
                )

    def piece_of_ref(self, ref: Ref) -> int:
        return self.cycle_piece[self.ref_cycle[ref]]


class LinkDiagram:
    """Immutable oriented link diagram on the sphere with a marked outer region."""

    def __init__(
        self,
        crossings: Mapping[int, Crossing],
        n_loops: int = 0,
        glue: Iterable[Iterable[Ref]] = (),
        outer: Optional[Ref] = None,
        projection: bool = False,
    ):
        self.crossings: dict[int, Crossing] = {c: crossings[c] for c in sorted(crossings)}
        self.n_loops = int(n_loops)
        if not self.crossings and not self.n_loops:
            raise DiagramError("empty diagram")
        self.is_projection = bool(projection)
        sk = self.skeleton = _Skeleton(self.crossings, self.n_loops)

        uf = _UnionFind(len(sk.cycles))
        for group in glue:
            group = list(group)
            for r in group:
                if r not in sk.ref_cycle:
                    raise DiagramError(f"unknown boundary reference {r}")
            for a, b in zip(group, group[1:]):
                uf.union(sk.ref_cycle[a], sk.ref_cycle[b])

        roots = {}
        for i in range(len(sk.cycles)):
            roots.setdefault(uf.find(i), []).append(i)

        def key(i: int):
            if i < sk.n_crossing_cycles:
                return (0, i, 0)
            ref = sk.cycles[i][1][0]
            return (1, ref[1], SIDES.index(ref[2]))

        groups = sorted(roots.values(), key=lambda cs: min(key(i) for i in cs))
        expected = len(self.crossings) + sk.n_pieces + 1
        if len(groups) != expected:
            raise DiagramError(
                f"region count {len(groups)} differs from n+d+1 = {expected}; gluing is not planar"
            )
        for cs in groups:
            pieces = [sk.cycle_piece[i] for i in cs]
            if len(set(pieces)) != len(pieces):
                raise DiagramError("a region holds two boundary cycles of the same piece")
        # piece/region incidence must be connected (it is then a tree)
        puf = _UnionFind(sk.n_pieces)
        for cs in groups:
            for i in cs[1:]:
                puf.union(sk.cycle_piece[cs[0]], sk.cycle_piece[i])
        if len({puf.find(p) for p in range(sk.n_pieces)}) != 1:
            raise DiagramError("pieces are not glued into a single sphere")

        self.cycle_region = [0] * len(sk.cycles)
        for rid, cs in enumerate(groups):
            for i in cs:
                self.cycle_region[i] = rid
        self._groups = [sorted(cs) for cs in groups]
        self.glue = tuple(
            tuple(min(sk.cycles[i][1]) for i in cs) for cs in self._groups if len(cs) > 1
        )

        if outer is None:
            outer = ("E", sk.edges[0], "left") if sk.edges else ("L", 0, "left")
        if outer not in sk.ref_cycle:
            raise DiagramError(f"unknown outer reference {outer}")
        self.outer_ref: Ref = outer
        self.outer = self.cycle_region[sk.ref_cycle[outer]]

        self.regions: list[Region] = []
        for rid, cs in enumerate(self._groups):
            corners = [qd for i in cs for qd in sk.cycles[i][0]]
            refs = tuple(r for i in cs for r in sk.cycles[i][1])
            loops = frozenset((r[1], r[2]) for r in refs if r[0] == "L")
            self.regions.append(
                Region(rid, frozenset(corners), dict(Counter(c for c, _ in corners)), loops, refs, rid == self.outer)
            )
        for reg in self.regions:
            for x, m in reg.touches.items():
                if m > 2:
                    raise InvariantError(f"region {reg.id} touches crossing {x} {m} times")
                if m == 2:
                    qs = sorted(q for c, q in reg.corners if c == x)
                    if qs[1] - qs[0] != 2:
                        raise InvariantError("twice-touching corners are adjacent")

        self._components()

    # ------------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def d(self) -> int:
        return self.skeleton.n_pieces

    @property
    def l(self) -> int:
        return len(self.component_edges)

    @property
    def edges(self) -> list[int]:
        return self.skeleton.edges

    @property
    def crossing_ids(self) -> list[int]:
        return list(self.crossings)

    def region_of_ref(self, ref: Ref) -> int:
        return self.cycle_region[self.skeleton.ref_cycle[ref]]

    def region_of_quadrant(self, x: int, q: int) -> int:
        return self.cycle_region[self.skeleton.quad_cycle[(x, q % 4)]]

    def left_region(self, e: int) -> int:
        return self.region_of_ref(("E", e, "left"))

    def right_region(self, e: int) -> int:
        return self.region_of_ref(("E", e, "right"))

    def faces(self) -> list[Region]:
        return list(self.regions)

    def cycles_of_region(self, rid: int) -> list[int]:
        return list(self._groups[rid])

    def boundary_arcs(self):
        """Yield (component, left region, right region) for every edge and loop."""
        for e in self.edges:
            yield self.component_of_edge[e], self.left_region(e), self.right_region(e)
        for j in range(self.n_loops):
            yield self.component_of_loop(j), self.region_of_ref(("L", j, "left")), self.region_of_ref(("L", j, "right"))

    # -------------------------------------------------------------- components
    def _components(self) -> None:
        sk = self.skeleton
        comp: dict[int, int] = {}
        runs: list[list[int]] = []
        for e in sk.edges:
            if e in comp:
                continue
            run, cur = [], e
            while cur not in comp:
                comp[cur] = len(runs)
                run.append(cur)
                c, j = sk.head[cur]
                cur = self.crossings[c].slots[(j + 2) % 4]
            if cur != e:
                raise InvariantError("component walk did not close")
            runs.append(run)
        self.component_of_edge = {e: i + 1 for e, i in comp.items()}
        self.component_edges = [tuple(r) for r in runs] + [() for _ in range(self.n_loops)]

    def component_of_loop(self, j: int) -> int:
        return len(self.component_edges) - self.n_loops + j + 1

    def component_of_ref(self, ref: Ref) -> int:
        if ref[0] == "E":
            return self.component_of_edge[ref[1]]
        return self.component_of_loop(ref[1])

    def components(self) -> tuple[int, int, dict[int, int]]:
        return self.d, self.l, dict(self.component_of_edge)

    def strand_components(self, x: int) -> tuple[int, int]:
        """(component of the under-strand, component of the over-strand) at x."""
        cr = self.crossings[x]
        return self.component_of_edge[cr.slots[0]], self.component_of_edge[cr.slots[1]]

    def is_self_crossing(self, x: int) -> bool:
        a, b = self.strand_components(x)
        return a == b

    def crosses_right_to_left(self, x: int, mover: int) -> bool:
        """Does component `mover` cross the other strand at x from its right to its left?"""
        cr = self.crossings[x]
        under, over = self.strand_components(x)
        if under == over or mover not in (under, over):
            raise DiagramError(f"crossing {x} is not between component {mover} and another")
        h_under, h_over = cr.heading(0), cr.heading(cr.over_in)
        if mover == over:
            return h_over == (h_under + 1) % 4
        return h_under == (h_over + 1) % 4

    def sign(self, x: int) -> int:
        return self.crossings[x].sign

    # ---------------------------------------------------------------- regions
    def reducible_crossings(self) -> set[int]:
        return {x for reg in self.regions for x, m in reg.touches.items() if m == 2}

    def twice_region(self, x: int) -> Optional[int]:
        for reg in self.regions:
            if reg.touch_count(x) == 2:
                return reg.id
        return None

    def region_refs(self, rid: int) -> tuple:
        return self.regions[rid].boundary

    # --------------------------------------------------------------- equality
    def canonical_key(self):
        regions = sorted(tuple(sorted(r.boundary)) for r in self.regions)
        return (
            tuple((c, cr.slots, cr.over_in) for c, cr in self.crossings.items()),
            self.n_loops,
            tuple(regions),
            tuple(sorted(self.regions[self.outer].boundary)),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, LinkDiagram) and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        return f"LinkDiagram(n={self.n}, d={self.d}, l={self.l}, regions={len(self.regions)})"

    def with_outer(self, outer: Ref) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.n_loops, self.glue, outer, self.is_projection)

    # ---------------------------------------------------------- serialisation
    def to_dict(self) -> dict:
        return _to_dict(self)

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# ---------------------------------------------------------------------------
# parsing


def _orient(raw: dict[int, list[int]], projection: bool, hints: dict[int, int]) -> dict[int, Crossing]:
    occ: dict[int, list[tuple[int, int]]] = {}
    for c, slots in raw.items():
        for k, e in enumerate(slots):
            occ.setdefault(e, []).append((c, k))
    for e, places in occ.items():
        if len(places) != 2:
            raise DiagramError(f"edge {e} appears {len(places)} times (expected 2)")
    partner = {}
    for places in occ.values():
        partner[places[0]], partner[places[1]] = places[1], places[0]

    incoming: dict[tuple[int, int], bool] = {}
    queue: list[tuple[int, int]] = []

    def put(pos, val):
        if pos in incoming:
            if incoming[pos] != val:
                raise DiagramError(f"orientation inconsistency at crossing {pos[0]}")
            return
        incoming[pos] = val
        queue.append(pos)

    def drain():
        while queue:
            c, k = queue.pop()
            val = incoming[(c, k)]
            put((c, (k + 2) % 4), not val)
            put(partner[(c, k)], not val)

    if not projection:
        for c in sorted(raw):
            put((c, 0), True)
        drain()
    for c in sorted(raw):
        for k in range(4):
            if (c, k) in incoming:
                continue
            if not projection and c in hints:
                put((c, hints[c]), True)
            elif not projection:
                put((c, 3), True)
            else:
                put((c, k), True)
            drain()
    out = {}
    for c, slots in raw.items():
        slots = list(slots)
        if not incoming[(c, 0)]:
            # projection input: rotate so the under-strand enters at slot 0
            slots = slots[2:] + slots[:2]
            over_in = 3 if incoming[(c, 1)] else 1
        else:
            over_in = 1 if incoming[(c, 1)] else 3
        if not projection and c in hints and hints[c] != over_in:
            raise DiagramError(f"over_in hint at crossing {c} conflicts with orientation")
        out[c] = Crossing(c, tuple(slots), over_in)
    return out


def _loop_side(orientation: int, which: str) -> str:
    inside = "left" if orientation == 1 else "right"
    if which == "inside":
        return inside
    if which == "outside":
        return "right" if inside == "left" else "left"
    if which in SIDES:
        return which
    raise DiagramError(f"bad loop side {which!r}")


def parse_diagram(text) -> LinkDiagram:
    """Parse the JSON diagram format (a string, bytes, or an already-decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise DiagramError("diagram JSON must be an object")
    projection = bool(doc.get("projection", False))
    raw: dict[int, list[int]] = {}
    hints: dict[int, int] = {}
    for item in doc.get("crossings", []):
        try:
            cid = int(item["id"])
            slots = [int(e) for e in item["slots"]]
        except (KeyError, TypeError, ValueError):
            raise DiagramError("each crossing needs an integer id and four integer slots") from None
        if len(slots) != 4:
            raise DiagramError(f"crossing {cid} must list exactly 4 slots")
        if cid in raw:
            raise DiagramError(f"duplicate crossing id {cid}")
        if any(e < 1 for e in slots):
            raise DiagramError("edge ids must be positive")
        raw[cid] = slots
        if "over_in" in item:
            if item["over_in"] not in (1, 3):
                raise DiagramError("over_in must be 1 or 3")
            hints[cid] = item["over_in"]
    crossings = _orient(raw, projection, hints)
    loops = doc.get("free_loops", [])
    orient = []
    for lp in loops:
        o = lp.get("orientation", 1)
        if o not in (1, -1):
            raise DiagramError("loop orientation must be 1 or -1")
        orient.append(o)
    sk = _Skeleton(crossings, len(loops))
    default_outer = ("E", sk.edges[0], "left") if sk.edges else ("L", 0, "left")

    def ref(obj) -> Ref:
        if not isinstance(obj, dict):
            raise DiagramError(f"bad region reference {obj!r}")
        if "edge" in obj:
            side = obj.get("side", "left")
            if side not in SIDES:
                raise DiagramError(f"bad edge side {side!r}")
            r = ("E", int(obj["edge"]), side)
        elif "loop" in obj:
            j = int(obj["loop"])
            if not 0 <= j < len(orient):
                raise DiagramError(f"unknown loop {j}")
            r = ("L", j, _loop_side(orient[j], obj.get("side", "inside")))
        elif "face" in obj:
            k = int(obj["face"])
            if not 0 <= k < sk.n_crossing_cycles:
                raise DiagramError(f"unknown face {k}")
            r = sk.cycles[k][1][0]
        else:
            raise DiagramError(f"bad region reference {obj!r}")
        if r not in sk.ref_cycle:
            raise DiagramError(f"unknown region reference {obj!r}")
        return r

    glue: list[tuple[Ref, Ref]] = []
    placed = {0}
    for pc in doc.get("pieces", []):
        o = ref(pc["outer"])
        glue.append((o, ref(pc["host"]) if "host" in pc else default_outer))
        placed.add(sk.piece_of_ref(o))
    for p in range(sk.n_crossing_pieces):
        if p not in placed:
            first = min(e for e in sk.edges if sk.piece_of_crossing[sk.tail[e][0]] == p)
            glue.append((("E", first, "left"), default_outer))
    for j, lp in enumerate(loops):
        outside = ("L", j, _loop_side(orient[j], "outside"))
        glue.append((outside, ref(lp["host"]) if "host" in lp else default_outer))
    outer = ref(doc["outer"]) if "outer" in doc else None
    return LinkDiagram(crossings, len(loops), glue, outer, projection)


def _ref_json(diagram: LinkDiagram, r: Ref, orient: dict[int, int]) -> dict:
    if r[0] == "E":
        return {"edge": r[1], "side": r[2]}
    inside = "left" if orient.get(r[1], 1) == 1 else "right"
    return {"loop": r[1], "side": "inside" if r[2] == inside else "outside"}


def _to_dict(dg: LinkDiagram) -> dict:
    sk = dg.skeleton
    # which crossings need an explicit over_in (components that never pass under)
    raw = {c: list(cr.slots) for c, cr in dg.crossings.items()}
    derivable = set()
    if raw:
        occ = {}
        for c, s in raw.items():
            for k, e in enumerate(s):
                occ.setdefault(e, []).append((c, k))
        partner = {}
        for pl in occ.values():
            partner[pl[0]], partner[pl[1]] = pl[1], pl[0]
        known = {}
        stack = [(c, 0) for c in raw]
        for p in stack:
            known[p] = True
        while stack:
            c, k = stack.pop()
            for q in ((c, (k + 2) % 4), partner[(c, k)]):
                if q not in known:
                    known[q] = not known[(c, k)]
                    stack.append(q)
        derivable = {c for c in raw if (c, 1) in known}

    # walk the piece/region tree from the root piece
    root = 0
    cyc_by_piece: dict[int, list[int]] = {}
    for i, p in enumerate(sk.cycle_piece):
        cyc_by_piece.setdefault(p, []).append(i)
    attach: dict[int, tuple[int, int]] = {}  # piece -> (own cycle, parent cycle)
    seen = {root}
    frontier = [root]
    while frontier:
        p = frontier.pop(0)
        for ci in cyc_by_piece[p]:
            for cj in dg.cycles_of_region(dg.cycle_region[ci]):
                q = sk.cycle_piece[cj]
                if q not in seen:
                    seen.add(q)
                    attach[q] = (cj, ci)
                    frontier.append(q)

    def rep(ci: int) -> Ref:
        return min(sk.cycles[ci][1])

    orient: dict[int, int] = {}
    for j in range(dg.n_loops):
        p = sk.n_crossing_pieces + j
        if p in attach:
            own = rep(attach[p][0])
            orient[j] = 1 if own[2] == "right" else -1
        else:
            orient[j] = 1
    out: dict = {"crossings": []}
    for c, cr in dg.crossings.items():
        item = {"id": c, "slots": list(cr.slots)}
        if c not in derivable:
            item["over_in"] = cr.over_in
        out["crossings"].append(item)
    out["free_loops"] = []
    for j in range(dg.n_loops):
        p = sk.n_crossing_pieces + j
        item = {"orientation": orient[j]}
        if p in attach:
            item["host"] = _ref_json(dg, rep(attach[p][1]), orient)
        out["free_loops"].append(item)
    pieces = []
    for p in range(1, sk.n_crossing_pieces):
        own, parent = attach[p]
        pieces.append({"outer": _ref_json(dg, rep(own), orient), "host": _ref_json(dg, rep(parent), orient)})
    if pieces:
        out["pieces"] = pieces
    out["outer"] = _ref_json(dg, dg.outer_ref, orient)
    out["projection"] = dg.is_projection
    return out


# ---------------------------------------------------------------------------
# surgery helpers shared by splicing and the moves


def rebuild(
    old: LinkDiagram,
    crossings: Mapping[int, Crossing],
    n_loops: int,
    ref_map: Callable[[Ref], Optional[Ref]],
) -> LinkDiagram:
    """Build the diagram produced by a local surgery on `old`.

    `ref_map` sends each boundary ref of `old` that survives the surgery to the
    ref of the same boundary arc afterwards (None for arcs that disappear).
    Regions that held several boundary cycles keep them together; a cycle cut
    into several pieces by the surgery stays one region.
    """
    sk = _Skeleton(crossings, n_loops)
    osk = old.skeleton
    uf = _UnionFind(len(sk.cycles))

    def image(ci: int) -> list[tuple[Ref, int]]:
        out = []
        for r in sorted(osk.cycles[ci][1]):
            nr = ref_map(r)
            if nr is not None:
                if nr not in sk.ref_cycle:
                    raise InvariantError(f"surgery mapped {r} to unknown {nr}")
                out.append((r, sk.ref_cycle[nr]))
        return out

    images = [image(ci) for ci in range(len(osk.cycles))]
    for ci, img in enumerate(images):
        by_piece: dict[int, int] = {}
        for _, nc in img:
            by_piece.setdefault(sk.cycle_piece[nc], nc)
        reps = list(by_piece.values())
        for a, b in zip(reps, reps[1:]):
            uf.union(a, b)
    for rid in range(len(old.regions)):
        reps = [images[ci][0][1] for ci in old.cycles_of_region(rid) if images[ci]]
        for a, b in zip(reps, reps[1:]):
            uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(sk.cycles)):
        groups.setdefault(uf.find(i), []).append(i)
    glue = [[sk.cycles[i][1][0] for i in g] for g in groups.values() if len(g) > 1]

    outer = ref_map(old.outer_ref)
    if outer is None:
        for r in sorted(old.regions[old.outer].boundary):
            outer = ref_map(r)
            if outer is not None:
                break
    if outer is None:
        # the outer face was destroyed: use the face across its boundary
        for r in sorted(old.regions[old.outer].boundary):
            across = old.regions[old.region_of_ref((r[0], r[1], "right" if r[2] == "left" else "left"))]
            outer = next((ref_map(q) for q in sorted(across.boundary) if ref_map(q) is not None), None)
            if outer is not None:
                break
    return LinkDiagram(crossings, n_loops, glue, outer, old.is_projection)


def contract(
    dg: LinkDiagram,
    removed: set[int],
    continuation: Mapping[tuple[int, int], int],
    dropped: frozenset = frozenset(),
):
    """Delete crossings and reconnect the strands through them.

    `continuation[(x, in_slot)]` names the outgoing slot that an incoming
    strand at a removed crossing continues into.  Runs of edges that become a
    single edge keep the id of their first edge; closed runs become free loops
    appended after the existing ones.  Returns
    (crossings, n_loops, ref map dict, open runs, closed runs).
    """
    sk = dg.skeleton

    def step(e: int) -> Optional[int]:
        c, j = sk.head[e]
        if c not in removed:
            return None
        return dg.crossings[c].slots[continuation[(c, j)]]

    slots = {c: list(cr.slots) for c, cr in dg.crossings.items() if c not in removed}
    runs, used = [], set()
    for e in sk.edges:
        if sk.tail[e][0] in removed:
            continue
        run = [e]
        nxt = step(e)
        while nxt is not None:
            if len(run) > len(sk.edges):
                raise InvariantError("runaway strand while contracting")
            run.append(nxt)
            nxt = step(nxt)
        used.update(run)
        c, j = sk.head[run[-1]]
        slots[c][j] = e
        runs.append(tuple(run))
    closed = []
    for e in sk.edges:
        if e in used:
            continue
        run, cur = [], e
        while cur not in used:
            used.add(cur)
            run.append(cur)
            cur = step(cur)
        closed.append(tuple(run))

    mapping: dict[Ref, Optional[Ref]] = {}
    for run in runs:
        for e in run:
            for s in SIDES:
                mapping[("E", e, s)] = None if e in dropped else ("E", run[0], s)
    for k, run in enumerate(closed):
        for e in run:
            for s in SIDES:
                mapping[("E", e, s)] = None if e in dropped else ("L", dg.n_loops + k, s)
    for j in range(dg.n_loops):
        for s in SIDES:
            mapping[("L", j, s)] = ("L", j, s)
    crossings = {c: Crossing(c, tuple(s), dg.crossings[c].over_in) for c, s in slots.items()}
    return crossings, dg.n_loops + len(closed), mapping, runs, closed


# ---------------------------------------------------------------------------
# splicing


@dataclass(frozen=True)
class SpliceRecord:
    """What is needed to relate D_x back to D.

    ``region_map[R]`` is the region of D_x containing region R of D; the two
    regions of D on either side of the smoothing corridor both map to
    ``merged_region``.  ``left_arc``/``right_arc`` are the right-side refs
    (in D_x) of the two smoothed arcs, the left one first.
    """

    crossing: Crossing
    runs: tuple
    closed: tuple
    ref_map: tuple
    region_map: tuple
    merged_region: int
    left_arc: Ref
    right_arc: Ref
    original_glue: tuple
    original_outer: Ref
    original_n_loops: int
    projection: bool

    def map_ref(self, r: Ref) -> Ref:
        return dict(self.ref_map)[r]


def corridor_quadrant(cr: Crossing) -> int:
    """Quadrant between the two incoming strands (merged, with its opposite, by splicing)."""
    return 0 if cr.over_in == 1 else 3


def splice(dg: LinkDiagram, x: int) -> tuple[LinkDiagram, SpliceRecord]:
    if x not in dg.crossings:
        raise DiagramError(f"crossing {x} not found")
    cr = dg.crossings[x]
    cont = {(x, 0): cr.over_out, (x, cr.over_in): 2}
    crossings, n_loops, mapping, runs, closed = contract(dg, {x}, cont)
    new = rebuild(dg, crossings, n_loops, mapping.get)
    region_map = []
    for reg in dg.regions:
        targets = {new.region_of_ref(mapping[r]) for r in reg.boundary}
        if len(targets) != 1:
            raise InvariantError("splice split a region")
        region_map.append(targets.pop())
    q = corridor_quadrant(cr)
    merged = region_map[dg.region_of_quadrant(x, q)]
    if merged != region_map[dg.region_of_quadrant(x, q + 2)]:
        raise InvariantError("corridor regions did not merge")
    left_in = cr.slots[q]  # incoming edge whose right side faces the corridor
    right_in = cr.slots[0] if q == 3 else cr.slots[cr.over_in]
    rec = SpliceRecord(
        crossing=cr,
        runs=tuple(r for r in runs if any(e in cr.slots for e in r)),
        closed=tuple(closed),
        ref_map=tuple(sorted(mapping.items())),
        region_map=tuple(region_map),
        merged_region=merged,
        left_arc=mapping[("E", left_in, "right")],
        right_arc=mapping[("E", right_in, "right")],
        original_glue=dg.glue,
        original_outer=dg.outer_ref,
        original_n_loops=dg.n_loops,
        projection=dg.is_projection,
    )
    return new, rec


def unsplice(spliced: LinkDiagram, rec: SpliceRecord) -> LinkDiagram:
    """Reinsert the crossing removed by `splice`."""
    cr = rec.crossing
    if cr.id in spliced.crossings:
        raise DiagramError(f"crossing {cr.id} already present")
    slots = {c: list(k.slots) for c, k in spliced.crossings.items()}
    sk = spliced.skeleton
    for run in rec.runs:
        if len(run) != 2:
            raise InvariantError("splice run should hold exactly two edges")
        c, j = sk.head[run[0]]
        slots[c][j] = run[1]
    if spliced.n_loops != rec.original_n_loops + len(rec.closed):
        raise DiagramError("diagram does not match the splice record")
    crossings = {c: Crossing(c, tuple(s), spliced.crossings[c].over_in) for c, s in slots.items()}
    crossings[cr.id] = cr
    return LinkDiagram(crossings, rec.original_n_loops, rec.original_glue, rec.original_outer, rec.projection)
