"""
Region choice matrices
======================

Rows are crossings (ascending id), columns are regions (canonical order).
Corner weights per quadrant:

- definite: every corner counts +1;
- alternating: quadrants 0 and 2 (turning counterclockwise from an under
  half-strand onto an over half-strand) count +1, quadrants 1 and 3 count -1.

Those alternating weights are the only choice, up to an overall sign, with
opposite +1 corners that annihilates every Alexander numbering: around a
crossing the four corners carry p, p+1, p+2, p+1 in some rotation and the
two "p+1" corners are always opposite.  The overall sign is fixed by the
kink rows: a right-handed kink row reads (-2, 1, 1) on (twice-touching
region, lobes).

Single counting collapses a twice-touching region to one corner.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .diagram import DiagramError, LinkDiagram

CORNER_SIGN = (1, -1, 1, -1)
RULES = ("d1", "d2", "a1", "a2")


@dataclass(frozen=True)
class Rule:
    family: str  # "definite" | "alternating"
    counting: str  # "single" | "double"

    def __post_init__(self):
        if self.family not in ("definite", "alternating") or self.counting not in ("single", "double"):
            raise ValueError(f"invalid rule {self.family}/{self.counting}")

    @property
    def code(self) -> str:
        return ("d" if self.family == "definite" else "a") + ("1" if self.counting == "single" else "2")

    @classmethod
    def parse(cls, code: str) -> "Rule":
        table = {"d": "definite", "a": "alternating"}
        if len(code) != 2 or code[0] not in table or code[1] not in "12":
            raise ValueError(f"unknown rule {code!r}; expected one of {', '.join(RULES)}")
        return cls(table[code[0]], "single" if code[1] == "1" else "double")

    def double(self) -> "Rule":
        return Rule(self.family, "double")

    def single(self) -> "Rule":
        return Rule(self.family, "single")


class IntMatrix:
    """Dense integer matrix with row and column labels."""

    def __init__(self, entries: Sequence[Sequence[int]], rows: Sequence = (), cols: Sequence = ()):
        self.entries = [list(map(int, r)) for r in entries]
        self.rows = list(rows) if rows else list(range(len(self.entries)))
        ncols = len(self.entries[0]) if self.entries else len(cols)
        self.cols = list(cols) if cols else list(range(ncols))
        if any(len(r) != len(self.cols) for r in self.entries) or len(self.rows) != len(self.entries):
            raise ValueError("label/shape mismatch")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def ncols(self) -> int:
        return len(self.cols)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMatrix):
            return self.entries == other.entries and self.rows == other.rows and self.cols == other.cols
        return self.entries == [list(r) for r in other]

    def __repr__(self) -> str:
        return f"IntMatrix({self.entries})"

    def row(self, label) -> list[int]:
        return list(self.entries[self.rows.index(label)])

    def columns(self) -> list[list[int]]:
        return [list(c) for c in zip(*self.entries)] if self.entries else [[] for _ in self.cols]

    def __matmul__(self, v: Sequence[int]) -> list[int]:
        if len(v) != len(self.cols):
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(r, v)) for r in self.entries]

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntMatrix":
        """Matrix whose row i is old row row_perm[i] and column j is old column col_perm[j]."""
        ent = [[self.entries[i][j] for j in col_perm] for i in row_perm]
        return IntMatrix(ent, [self.rows[i] for i in row_perm], [self.cols[j] for j in col_perm])

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.entries}

    def to_text(self) -> str:
        cells = [[""] + [f"R{c}" for c in self.cols]]
        cells += [[f"x{r}"] + [str(v) for v in row] for r, row in zip(self.rows, self.entries)]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def region_choice_matrix(dg: LinkDiagram, rule: Rule | str) -> IntMatrix:
    if isinstance(rule, str):
        rule = Rule.parse(rule)
    if dg.n == 0:
        raise DiagramError("diagram has no crossings")
    ncols = len(dg.regions)
    entries = []
    for x in dg.crossing_ids:
        row = [0] * ncols
        for q in range(4):
            w = 1 if rule.family == "definite" else CORNER_SIGN[q]
            row[dg.region_of_quadrant(x, q)] += w
        if rule.counting == "single":
            row = [(v > 0) - (v < 0) for v in row]
        entries.append(row)
    return IntMatrix(entries, dg.crossing_ids, list(range(ncols)))


def all_matrices(dg: LinkDiagram) -> dict[str, IntMatrix]:
    return {code: region_choice_matrix(dg, code) for code in RULES}


def mod2_reduce(m: IntMatrix) -> IntMatrix:
    return IntMatrix([[v % 2 for v in r] for r in m.entries], m.rows, m.cols)


def find_permutation(
    pairs: Sequence[tuple[Sequence[Sequence[int]], Sequence[Sequence[int]]]],
) -> Optional[tuple[list[int], list[int]]]:
    """Find one row and one column permutation taking every `mine` to its `target`.

    ``pairs`` is a list of (mine, target) matrices of a common shape.  Returns
    (row_perm, col_perm) such that ``mine[row_perm[i]][col_perm[j]] ==
    target[i][j]`` for all pairs, or None.  Rows are tried exhaustively
    (desk-scale only); columns are then matched as stacked column vectors.
    """
    mine0, target0 = pairs[0]
    nr = len(mine0)
    nc = len(mine0[0]) if nr else 0
    if any(len(a) != nr or len(b) != nr for a, b in pairs):
        return None
    for perm in itertools.permutations(range(nr)):
        pool: dict[tuple, list[int]] = {}
        for j in range(nc):
            key = tuple(m[perm[i]][j] for m, _ in pairs for i in range(nr))
            pool.setdefault(key, []).append(j)
        cols = []
        for j in range(nc):
            key = tuple(t[i][j] for _, t in pairs for i in range(nr))
            bucket = pool.get(key)
            if not bucket:
                break
            cols.append(bucket.pop(0))
        else:
            return list(perm), cols
    return None


def matrix_json(m: IntMatrix) -> str:
    return json.dumps(m.to_dict())
