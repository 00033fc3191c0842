"""
Integral region choice problems
===============================

Solving ``A u + c = 0`` exactly, plus the constructive pieces: special
solutions from splicing, kernel bases from Alexander numberings, the
checkerboard flip between the two families, and image bases for connected
two-component diagrams.

Every constructed vector is checked by substitution before it is returned;
a failed check raises :class:`InvariantError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import zlinalg
from .diagram import DiagramError, InvariantError, LinkDiagram, corridor_quadrant, splice
from .matrices import IntMatrix, Rule, region_choice_matrix
from .numbering import (
    NumberingVector,
    checkerboard,
    componentwise_alexander,
    standard_kernel_basis_vectors,
)

FAMILIES = ("definite", "alternating")


@dataclass(frozen=True)
class ScoreVector:
    """Integer score per crossing id."""

    values: Mapping[int, int]

    @classmethod
    def of(cls, dg: LinkDiagram, seq: Sequence[int]) -> "ScoreVector":
        if len(seq) != dg.n:
            raise DiagramError(f"expected {dg.n} scores, got {len(seq)}")
        return cls({x: int(v) for x, v in zip(dg.crossing_ids, seq)})

    @classmethod
    def parse(cls, dg: LinkDiagram, obj: Mapping) -> "ScoreVector":
        vals = {}
        for k, v in obj.items():
            x = int(k)
            if x not in dg.crossings:
                raise DiagramError(f"score given for unknown crossing {k}")
            vals[x] = int(v)
        return cls(vals)

    def vector(self, dg: LinkDiagram) -> list[int]:
        extra = set(self.values) - set(dg.crossings)
        if extra:
            raise DiagramError(f"scores for unknown crossings {sorted(extra)}")
        return [int(self.values.get(x, 0)) for x in dg.crossing_ids]

    def to_dict(self) -> dict[str, int]:
        return {str(x): v for x, v in sorted(self.values.items())}


@dataclass(frozen=True)
class ProblemInstance:
    diagram: LinkDiagram
    rule: Rule
    scores: ScoreVector


@dataclass(frozen=True)
class Solution:
    u: NumberingVector
    residual: tuple
    kernel: tuple = field(default=())

    @property
    def certificate(self) -> bool:
        return not any(self.residual)

    def to_dict(self) -> dict:
        return {
            "u": self.u.to_dict(),
            "residual": list(self.residual),
            "certificate": self.certificate,
            "kernel_basis": [list(k) for k in self.kernel],
        }


def _rule(rule) -> Rule:
    return Rule.parse(rule) if isinstance(rule, str) else rule


def _unit(dg: LinkDiagram, x: int) -> list[int]:
    return [int(y == x) for y in dg.crossing_ids]


def solve(instance: ProblemInstance) -> Optional[Solution]:
    dg, rule = instance.diagram, _rule(instance.rule)
    if dg.n == 0:
        raise DiagramError("diagram has no crossings")
    a = region_choice_matrix(dg, rule)
    c = instance.scores.vector(dg)
    res = zlinalg.solve_integer(a, [-v for v in c])
    if res is None:
        return None
    residual = tuple(p + q for p, q in zip(a @ res.particular, c))
    if any(residual):
        raise InvariantError("solver returned a vector with nonzero residual")
    return Solution(NumberingVector.of(res.particular, "choice"), residual, tuple(tuple(k) for k in res.kernel))


def flip_by_checkerboard(v: Sequence[int], coloring: Sequence[int]) -> NumberingVector:
    """Region R maps to (-1)^{c_R} v_R."""
    if len(v) != len(coloring):
        raise DiagramError("vector and colouring have different lengths")
    if any(c not in (0, 1) for c in coloring):
        raise DiagramError("colouring must take values 0 and 1")
    return NumberingVector.of([-a if c else a for a, c in zip(v, coloring)], "flipped")


# ---------------------------------------------------------------- specials


def special_solution_double(dg: LinkDiagram, x: int, family: str = "alternating") -> NumberingVector:
    """v_x with A_{family,2} v_x = e_x, built by splicing at the self-crossing x."""
    if family not in FAMILIES:
        raise DiagramError(f"unknown family {family!r}")
    if x not in dg.crossings:
        raise DiagramError(f"crossing {x} not found")
    if not dg.is_self_crossing(x):
        raise DiagramError(f"crossing {x} joins two different components")
    spliced, rec = splice(dg, x)
    # left arc gets 0 on its right (the corridor) and 1 on its left
    comp = spliced.component_of_ref(rec.left_arc)
    w = componentwise_alexander(spliced, comp, spliced.region_of_ref(rec.left_arc), 0)
    eps = dg.sign(x)
    v = [eps * w[rec.region_map[r]] for r in range(len(dg.regions))]
    if family == "definite":
        # colour 0 on a +1 corner of x, so the flipped row keeps the value 1
        v = list(flip_by_checkerboard(v, checkerboard(dg, dg.region_of_quadrant(x, 0))))
    a = region_choice_matrix(dg, Rule(family, "double"))
    if a @ v != _unit(dg, x):
        raise InvariantError(f"special solution at crossing {x} failed its certificate")
    return NumberingVector.of(v, f"special({x})")


def special_solution_single_reducible(dg: LinkDiagram, y: int, family: str = "alternating") -> NumberingVector:
    """v_y with A_{family,1} v_y = e_y for a reducible crossing y (general solver)."""
    if family not in FAMILIES:
        raise DiagramError(f"unknown family {family!r}")
    if y not in dg.reducible_crossings():
        raise DiagramError(f"crossing {y} is not reducible")
    a = region_choice_matrix(dg, Rule(family, "single"))
    res = zlinalg.solve_integer(a, _unit(dg, y))
    if res is None:
        raise InvariantError(f"no single-rule solution for reducible crossing {y}")
    return NumberingVector.of(res.particular, f"reducible({y})")


def pinned_kernel_solution(dg: LinkDiagram, rule, pins: Mapping[int, int]) -> Optional[NumberingVector]:
    """A kernel vector of the rule's matrix taking prescribed values on some regions."""
    a = region_choice_matrix(dg, _rule(rule))
    ncols = len(dg.regions)
    rows = [list(r) for r in a.entries] + [[int(j == r) for j in range(ncols)] for r in pins]
    rhs = [0] * dg.n + [int(v) for v in pins.values()]
    res = zlinalg.solve_integer(rows, rhs)
    if res is None:
        return None
    return NumberingVector.of(res.particular, "pinned-kernel")


def arc_sides(dg: LinkDiagram, ref) -> tuple[int, int]:
    """(left region, right region) of the arc carrying boundary ref `ref`."""
    kind, i, _ = ref
    return dg.region_of_ref((kind, i, "left")), dg.region_of_ref((kind, i, "right"))


def special_solution_single_pinned(dg: LinkDiagram, y: int, family: str, pins: Mapping[int, int]) -> NumberingVector:
    """v_y for the single rule with prescribed values on some regions: v'_y plus a pinned kernel vector."""
    base = special_solution_single_reducible(dg, y, family)
    shift = {r: int(v) - base[r] for r, v in pins.items()}
    u = pinned_kernel_solution(dg, Rule(family, "single"), shift)
    if u is None:
        raise DiagramError("no single-rule kernel vector takes the requested values")
    return NumberingVector.of([a + b for a, b in zip(base, u)], f"reducible({y})")


def constructive_solution_double(dg: LinkDiagram, family: str, c: Sequence[int]) -> NumberingVector:
    """u = -sum c_i v_i for a diagram whose crossings are all self-crossings."""
    ncols = len(dg.regions)
    u = [0] * ncols
    for x, cx in zip(dg.crossing_ids, c):
        if cx:
            vx = special_solution_double(dg, x, family)
            u = [a - cx * b for a, b in zip(u, vx)]
    return NumberingVector.of(u, "constructive")


def reducible_correction_terms(dg: LinkDiagram, family: str):
    """For each region j: list of (sign, v_y) over reducible y touched twice by R_j.

    ``sign`` is the entry of A2 - A1 at (y, j), i.e. the shared corner weight
    of the twice-touching corners; it is always 1 for the definite family.
    """
    a1 = region_choice_matrix(dg, Rule(family, "single"))
    a2 = region_choice_matrix(dg, Rule(family, "double"))
    specials = {y: special_solution_single_reducible(dg, y, family) for y in sorted(dg.reducible_crossings())}
    terms = []
    for j in range(len(dg.regions)):
        here = []
        for y in specials:
            i = dg.crossing_ids.index(y)
            diff = a2.entries[i][j] - a1.entries[i][j]
            if dg.regions[j].touch_count(y) == 2:
                here.append((diff, specials[y]))
            elif diff:
                raise InvariantError("A2 and A1 differ away from a twice-touching region")
        terms.append(here)
    return terms


def single_from_double(dg: LinkDiagram, family: str, c: Sequence[int], w: Optional[Sequence[int]] = None) -> NumberingVector:
    """Turn a double-rule solution w into a single-rule solution by adding reducible corrections."""
    a2 = region_choice_matrix(dg, Rule(family, "double"))
    a1 = region_choice_matrix(dg, Rule(family, "single"))
    if w is None:
        sol = zlinalg.solve_integer(a2, [-v for v in c])
        if sol is None:
            raise DiagramError("double-rule problem has no solution")
        w = sol.particular
    u = list(w)
    for wj, here in zip(w, reducible_correction_terms(dg, family)):
        for s, vy in here:
            u = [a + wj * s * b for a, b in zip(u, vy)]
    if [p + q for p, q in zip(a1 @ u, c)] != [0] * dg.n:
        raise InvariantError("single-from-double assembly failed")
    return NumberingVector.of(u, "assembled")


# ---------------------------------------------------------- two components


def _two_component_check(dg: LinkDiagram) -> None:
    if dg.l != 2 or dg.d != 1:
        raise DiagramError("needs a connected diagram of a two-component link")


def pair_solution_two_component(dg: LinkDiagram, x: int, y: int) -> tuple[NumberingVector, tuple[int, int]]:
    """v_xy with A_a2 v_xy supported on {x, y}; returns it with the realised values there."""
    _two_component_check(dg)
    for z in (x, y):
        if z not in dg.crossings:
            raise DiagramError(f"crossing {z} not found")
        if dg.is_self_crossing(z):
            raise DiagramError(f"crossing {z} is a self-crossing")
    if x == y:
        raise DiagramError("x and y must differ")
    # the mover is the component crossing the other from right to left at x
    mover = 2 if dg.crosses_right_to_left(x, 2) else 1
    dx, rec_x = splice(dg, x)
    dxy, rec_y = splice(dx, y)
    gamma1 = rec_y.map_ref(rec_x.left_arc)
    comp = dxy.component_of_ref(gamma1)
    w = componentwise_alexander(dxy, comp, dxy.region_of_ref(gamma1), 0)
    v = [w[rec_y.region_map[rec_x.region_map[r]]] for r in range(len(dg.regions))]
    image = region_choice_matrix(dg, "a2") @ v
    ix, iy = dg.crossing_ids.index(x), dg.crossing_ids.index(y)
    if any(val for i, val in enumerate(image) if i not in (ix, iy)):
        raise InvariantError("pair solution has support outside {x, y}")
    same_way = dg.crosses_right_to_left(y, mover)
    expected = (dg.sign(x), -dg.sign(y) if same_way else dg.sign(y))
    pattern = (image[ix], image[iy])
    if pattern != expected:
        raise InvariantError(f"pair solution pattern {pattern} differs from {expected}")
    return NumberingVector.of(v, f"pair({x},{y})"), pattern


def image_basis_two_component(dg: LinkDiagram, family: str = "alternating") -> list[ScoreVector]:
    """Basis of the image lattice for a connected two-component diagram."""
    if family not in FAMILIES:
        raise DiagramError(f"unknown family {family!r}")
    _two_component_check(dg)
    if dg.n < 2:
        raise DiagramError("needs at least two crossings")
    selfs = [x for x in dg.crossing_ids if dg.is_self_crossing(x)]
    inter = [x for x in dg.crossing_ids if not dg.is_self_crossing(x)]
    last = next(x for x in inter if dg.crosses_right_to_left(x, 2))
    rest = [x for x in inter if x != last]
    basis = [ScoreVector({x: 1}) for x in selfs]
    if family == "alternating":
        for xi in rest:
            si = -dg.sign(xi) if dg.crosses_right_to_left(xi, 2) else dg.sign(xi)
            basis.append(ScoreVector({last: dg.sign(last), xi: si}))
    else:
        ad2 = region_choice_matrix(dg, "d2")
        q = corridor_quadrant(dg.crossings[last])
        side_region = dg.region_of_quadrant(last, q + 1)
        coloring = list(checkerboard(dg, side_region))
        if coloring[dg.region_of_quadrant(last, q + 3)] != 0:
            raise InvariantError("left and right regions at the last crossing got different colours")
        il = dg.crossing_ids.index(last)
        for xi in rest:
            v, _ = pair_solution_two_component(dg, last, xi)
            e = ad2 @ list(flip_by_checkerboard(v, coloring))
            if e[il] == -1:
                # the other colouring; its value at the last crossing is 1
                e = [-t for t in e]
            basis.append(ScoreVector({x: t for x, t in zip(dg.crossing_ids, e) if t}))
    vecs = [b.vector(dg) for b in basis]
    if len(vecs) != dg.n - 1 or zlinalg.rank([list(col) for col in zip(*vecs)]) != dg.n - 1:
        raise InvariantError("image basis is not independent")
    for counting in ("double", "single"):
        cols = region_choice_matrix(dg, Rule(family, counting)).columns()
        if not zlinalg.lattice_equal(vecs, cols, dg.n):
            raise InvariantError(f"image basis does not span the {family}/{counting} image")
    return basis


def image_membership(
    dg: LinkDiagram,
    rule,
    c: ScoreVector | Sequence[int],
    basis: Optional[Sequence[ScoreVector]] = None,
) -> bool:
    """Is the problem solvable?  `basis` may pass a precomputed two-component image basis."""
    rule = _rule(rule)
    scores = c if isinstance(c, ScoreVector) else ScoreVector.of(dg, c)
    ok = solve(ProblemInstance(dg, rule, scores)) is not None
    if dg.l == 2 and dg.d == 1 and dg.n >= 2:
        if basis is None:
            basis = image_basis_two_component(dg, rule.family)
        vecs = [b.vector(dg) for b in basis]
        if zlinalg.in_lattice(vecs, scores.vector(dg)) != ok:
            raise InvariantError("membership disagrees with the image basis")
    return ok


# ------------------------------------------------------------------ kernels


def kernel_basis(dg: LinkDiagram, rule) -> list[NumberingVector]:
    """u_1..u_l, u_inf (alternating) or their checkerboard flips (definite)."""
    rule = _rule(rule)
    if rule.counting != "double":
        raise DiagramError("kernel bases are provided for the double counting rule")
    if dg.n == 0:
        raise DiagramError("diagram has no crossings")
    basis = standard_kernel_basis_vectors(dg)
    if rule.family == "definite":
        coloring = list(checkerboard(dg))
        basis = [flip_by_checkerboard(list(u), coloring) for u in basis]
    a = region_choice_matrix(dg, rule)
    zero = [0] * dg.n
    if any(a @ list(u) != zero for u in basis):
        raise InvariantError("kernel basis vector is not annihilated")
    if not zlinalg.lattice_equal([list(u) for u in basis], zlinalg.kernel_lattice(a), len(dg.regions)):
        raise InvariantError("kernel basis does not generate the kernel")
    return basis


def matrix_rank(m: IntMatrix) -> int:
    return zlinalg.rank(m)
