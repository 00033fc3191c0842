import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regionchoice import zlinalg
from regionchoice.corpus import builtin
from regionchoice.matrices import region_choice_matrix

from oracles import matvec, sympy_lattice_equal, sympy_nullity, sympy_rank

small_int = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=7):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small_int) for _ in range(c)] for _ in range(r)]


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_hnf_decomposition(m):
    dec = zlinalg.hnf(m)
    assert zlinalg.matmul(m, dec.U) == dec.H
    assert abs(zlinalg.determinant(dec.U)) == 1
    r = dec.rank
    assert all(not any(row[j] for row in dec.H) for j in range(r, len(dec.U)))
    # echelon: pivot rows strictly increase, pivots positive, entries left of a pivot reduced
    for k, i in enumerate(dec.pivot_rows):
        p = dec.H[i][k]
        assert p > 0
        assert all(dec.H[i2][k] == 0 for i2 in range(i))
        assert all(0 <= dec.H[i][j] < p for j in range(k))
    assert list(dec.pivot_rows) == sorted(dec.pivot_rows)


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_rank_routes_agree(m):
    r = zlinalg.rank(m)
    assert r == zlinalg.rank(m, "snf") == sympy_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_rhs(m, data):
    x = [data.draw(small_int) for _ in m[0]]
    b = matvec(m, x)
    sol = zlinalg.solve_integer(m, b)
    assert sol is not None
    assert matvec(m, sol.particular) == b
    assert len(sol.kernel) == sympy_nullity(m)
    for k in sol.kernel:
        assert matvec(m, k) == [0] * len(m)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_is_saturated(m):
    kern = zlinalg.kernel_lattice(m)
    if not kern:
        return
    # a primitive sublattice has all Smith invariants equal to one
    assert all(d == 1 for d in zlinalg.smith_invariants(kern))


@settings(max_examples=80, deadline=None)
@given(matrices(), st.lists(small_int, min_size=6, max_size=6))
def test_infeasibility_certificate(m, bvals):
    b = bvals[: len(m)]
    y = zlinalg.infeasibility_certificate(m, b)
    if zlinalg.solve_integer(m, b) is not None:
        assert y is None
        return
    assert y is not None
    cols = list(zip(*m))
    assert all(sum(Fraction(a) * yi for a, yi in zip(col, y)).denominator == 1 for col in cols)
    assert sum(yi * bi for yi, bi in zip(y, b)).denominator != 1


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=4, max_cols=5), matrices(max_rows=4, max_cols=5))
def test_lattice_equal_matches_sympy(a, b):
    dim = 4
    va = [r + [0] * (dim - len(r)) for r in a]
    vb = [r + [0] * (dim - len(r)) for r in b]
    va = [v[:dim] for v in va]
    vb = [v[:dim] for v in vb]
    assert zlinalg.lattice_equal(va, vb, dim) == sympy_lattice_equal(va, vb, dim)
    assert zlinalg.lattice_equal(va, va + vb, dim) == sympy_lattice_equal(va, va + vb, dim)


def test_examples():
    eye = zlinalg.identity(3)
    dec = zlinalg.hnf(eye)
    assert dec.H == eye and dec.rank == 3
    assert zlinalg.rank(region_choice_matrix(builtin("figure8").diagram, "d2")) == 4
    assert zlinalg.rank(region_choice_matrix(builtin("torus_2_4").diagram, "d1")) == 3
    assert len(zlinalg.kernel_lattice(region_choice_matrix(builtin("figure8").diagram, "a2"))) == 2
    assert len(zlinalg.kernel_lattice(region_choice_matrix(builtin("torus_2_4").diagram, "a2"))) == 3
    zero = [[0] * 4 for _ in range(3)]
    assert zlinalg.lattice_equal(zlinalg.kernel_lattice(zero), zlinalg.identity(4), 4)
    assert zlinalg.solve_integer([[1, 2], [3, 4]], [0, 0]).particular == [0, 0]
    assert not zlinalg.lattice_equal([[2, 0]], [[1, 0]])
    assert zlinalg.lattice_equal([[2, 0], [0, 1]], [[2, 1], [0, 1]])


def test_big_entries_stay_exact():
    rng = random.Random(3)
    m = [[rng.randint(-10**30, 10**30) for _ in range(6)] for _ in range(5)]
    dec = zlinalg.hnf(m)
    assert zlinalg.matmul(m, dec.U) == dec.H
    assert dec.rank == sympy_rank(m)


def test_rhs_length_checked():
    with pytest.raises(ValueError):
        zlinalg.solve_integer([[1, 2]], [1, 2])
