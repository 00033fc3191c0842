"""Alexander numberings, checkerboard colourings and the standard kernel vectors."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .diagram import DiagramError, InvariantError, LinkDiagram


@dataclass(frozen=True)
class NumberingVector:
    values: tuple
    kind: str = "generic"

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, rid: int) -> int:
        return self.values[rid]

    def __iter__(self):
        return iter(self.values)

    def to_dict(self) -> dict[str, int]:
        return {str(i): v for i, v in enumerate(self.values)}

    @classmethod
    def of(cls, values: Sequence[int], kind: str = "generic") -> "NumberingVector":
        return cls(tuple(int(v) for v in values), kind)


def _propagate(dg: LinkDiagram, jump: Callable[[int], int], base_region: int, base_value: int) -> list[int]:
    """Solve value(left) - value(right) = jump(component) across every arc."""
    adj: list[list[tuple[int, int]]] = [[] for _ in dg.regions]
    arcs = list(dg.boundary_arcs())
    for comp, left, right in arcs:
        j = jump(comp)
        adj[right].append((left, j))
        adj[left].append((right, -j))
    val: list[Optional[int]] = [None] * len(dg.regions)
    val[base_region] = base_value
    todo = deque([base_region])
    while todo:
        r = todo.popleft()
        for s, j in adj[r]:
            if val[s] is None:
                val[s] = val[r] + j
                todo.append(s)
    if any(v is None for v in val):
        raise InvariantError("dual graph is disconnected")
    for comp, left, right in arcs:
        if val[left] - val[right] != jump(comp):
            raise InvariantError("numbering is inconsistent; the map is corrupt")
    return val  # type: ignore[return-value]


def alexander_numbering(dg: LinkDiagram, base_region: Optional[int] = None, base_value: int = 0) -> NumberingVector:
    base = dg.outer if base_region is None else base_region
    return NumberingVector.of(_propagate(dg, lambda c: 1, base, base_value), "alexander")


def checkerboard(dg: LinkDiagram, zero_region: Optional[int] = None) -> NumberingVector:
    """Alexander numbering mod 2; `zero_region` (default: the outer region) gets colour 0."""
    base = dg.outer if zero_region is None else zero_region
    vals = _propagate(dg, lambda c: 1, base, 0)
    return NumberingVector.of([v % 2 for v in vals], "checkerboard")


def componentwise_alexander(dg: LinkDiagram, i: int, base_region: Optional[int] = None, base_value: int = 0) -> NumberingVector:
    if not 1 <= i <= dg.l:
        raise DiagramError(f"component {i} out of range 1..{dg.l}")
    base = dg.outer if base_region is None else base_region
    vals = _propagate(dg, lambda c: int(c == i), base, base_value)
    return NumberingVector.of(vals, f"componentwise({i})")


def standard_kernel_basis_vectors(dg: LinkDiagram) -> list[NumberingVector]:
    """u_1, ..., u_l normalised to 0 on the outer region, then the all-ones u_inf."""
    if dg.n == 0:
        raise DiagramError("diagram has no crossings")
    out = [componentwise_alexander(dg, i, dg.outer, 0) for i in range(1, dg.l + 1)]
    out.append(NumberingVector.of([1] * len(dg.regions), "constant"))
    return out
