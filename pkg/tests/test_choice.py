import pytest
from hypothesis import given, settings, strategies as st

from oracles import sympy_in_lattice, sympy_lattice_equal
from regionchoice import corpus, zlinalg
from regionchoice.choice import (
    ProblemInstance,
    ScoreVector,
    constructive_solution_double,
    flip_by_checkerboard,
    image_basis_two_component,
    image_membership,
    kernel_basis,
    pair_solution_two_component,
    pinned_kernel_solution,
    arc_sides,
    reducible_correction_terms,
    single_from_double,
    solve,
    special_solution_double,
    special_solution_single_pinned,
    special_solution_single_reducible,
)
from regionchoice.diagram import DiagramError
from regionchoice.matrices import RULES, region_choice_matrix
from regionchoice.numbering import checkerboard

seeds = st.integers(0, 10**6)


def walked(seed, comps=None):
    return corpus.random_diagram(seed, max_crossings=10, components=comps or 1 + seed % 3)


def two_component_diagrams():
    out = [corpus.builtin(n).diagram for n in ("hopf", "torus_2_4", "two_component_fig")]
    seed = 0
    while len(out) < 10:
        dg = corpus.random_diagram(seed, max_crossings=9, components=2)
        if dg.d == 1 and dg.n >= 2:
            out.append(dg)
        seed += 1
    return out


def test_figure8_solutions():
    f8 = corpus.builtin("figure8").diagram
    for code in RULES:
        sol = solve(ProblemInstance(f8, code, ScoreVector.of(f8, [1, -1, 3, 2])))
        assert sol is not None and sol.certificate and not any(sol.residual)
        cols = len(f8.regions)
        assert len(sol.kernel) == cols - (f8.n + f8.d - f8.l)


def test_torus_unsolvable_and_solvable():
    dg = corpus.builtin("torus_2_4").diagram
    assert solve(ProblemInstance(dg, "a2", ScoreVector.of(dg, [1, 0, 0, 0]))) is None
    ok = ScoreVector.of(dg, [1, 1, 0, 0])
    f = corpus.TORUS_FUNCTIONAL
    assert (sum(a * b for a, b in zip(f, ok.vector(dg))) == 0) == (solve(ProblemInstance(dg, "a2", ok)) is not None)
    cert = zlinalg.infeasibility_certificate(region_choice_matrix(dg, "a2").entries, [-1, 0, 0, 0])
    assert cert is not None


def test_score_vector_parsing():
    dg = corpus.builtin("figure8").diagram
    assert ScoreVector.parse(dg, {"2": 5}).vector(dg) == [0, 5, 0, 0]
    with pytest.raises(DiagramError):
        ScoreVector.parse(dg, {"9": 1})
    with pytest.raises(DiagramError):
        ScoreVector.of(dg, [1, 2])


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_checkerboard_flip_exchanges_kernels(seed):
    dg = walked(seed)
    col = list(checkerboard(dg))
    for counting in ("double", "single"):
        a = region_choice_matrix(dg, "a" + ("2" if counting == "double" else "1"))
        d = region_choice_matrix(dg, "d" + ("2" if counting == "double" else "1"))
        ka, kd = zlinalg.kernel_lattice(a), zlinalg.kernel_lattice(d)
        flipped_a = [list(flip_by_checkerboard(v, col)) for v in ka]
        flipped_d = [list(flip_by_checkerboard(v, col)) for v in kd]
        assert all(d @ v == [0] * dg.n for v in flipped_a)
        assert all(a @ v == [0] * dg.n for v in flipped_d)
        assert sympy_lattice_equal(flipped_a, kd, len(dg.regions))
    v = list(range(len(dg.regions)))
    assert list(flip_by_checkerboard(list(flip_by_checkerboard(v, col)), col)) == v


def test_flip_errors():
    with pytest.raises(DiagramError):
        flip_by_checkerboard([1, 2], [0])
    with pytest.raises(DiagramError):
        flip_by_checkerboard([1, 2], [0, 2])


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_special_solutions_double(seed):
    dg = walked(seed)
    for x in dg.crossing_ids:
        if not dg.is_self_crossing(x):
            with pytest.raises(DiagramError):
                special_solution_double(dg, x)
            continue
        unit = [int(y == x) for y in dg.crossing_ids]
        for fam, code in (("alternating", "a2"), ("definite", "d2")):
            v = special_solution_double(dg, x, fam)
            a = region_choice_matrix(dg, code)
            assert a @ list(v) == unit
            # second route: the general solver agrees on solvability and the difference is a kernel vector
            res = zlinalg.solve_integer(a.entries, unit)
            assert res is not None
            diff = [p - q for p, q in zip(v, res.particular)]
            assert sympy_in_lattice(res.kernel, diff)


def test_special_double_values_are_small():
    dg = corpus.builtin("figure8").diagram
    for x in dg.crossing_ids:
        v = special_solution_double(dg, x)
        assert set(v) <= {-1, 0, 1}


def test_kink_reducible_special():
    for eps in (1, -1):
        dg = corpus.kink_sum(1, [eps])
        v = special_solution_single_reducible(dg, 1)
        a1 = region_choice_matrix(dg, "a1")
        assert a1 @ list(v) == [1]
        twice = dg.twice_region(1)
        lobe, other = [r.id for r in dg.regions if r.id != twice]
        pinned = special_solution_single_pinned(dg, 1, "alternating", {twice: 0, other: 0})
        assert list(pinned) == [eps if r == lobe else 0 for r in range(3)]


def test_reducible_special_rejects_irreducible():
    with pytest.raises(DiagramError):
        special_solution_single_reducible(corpus.builtin("figure8").diagram, 1)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_signed_assembly(seed):
    dg = walked(seed)
    w0 = [(3 * j) % 7 - 3 for j in range(len(dg.regions))]
    for fam in ("alternating", "definite"):
        a1 = region_choice_matrix(dg, fam[0] + "1")
        a2 = region_choice_matrix(dg, fam[0] + "2")
        c = [-t for t in a2 @ w0]
        terms = reducible_correction_terms(dg, fam)
        for j, here in enumerate(terms):
            lhs = [a2.entries[i][j] - a1.entries[i][j] for i in range(dg.n)]
            rhs = [0] * dg.n
            for s, vy in here:
                if fam == "definite":
                    assert s == 1
                rhs = [p + s * q for p, q in zip(rhs, a1 @ list(vy))]
            assert lhs == rhs
        u = single_from_double(dg, fam, c)
        assert [p + q for p, q in zip(a1 @ list(u), c)] == [0] * dg.n


def test_unsigned_assembly_fails_for_alternating():
    dg = corpus.kink_sum(1, [1])
    a1, a2 = region_choice_matrix(dg, "a1"), region_choice_matrix(dg, "a2")
    j = dg.twice_region(1)
    vy = special_solution_single_reducible(dg, 1)
    assert a2.entries[0][j] - a1.entries[0][j] == -1
    assert (a1 @ list(vy))[0] == 1


@settings(max_examples=30, deadline=None)
@given(seeds, st.data())
def test_arc_pinned_kernel(seed, data):
    dg = walked(seed)
    arcs = [("E", e, "left") for e in dg.edges] + [("L", j, "left") for j in range(dg.n_loops)]
    ref = data.draw(st.sampled_from(arcs))
    left, right = arc_sides(dg, ref)
    a, b = data.draw(st.integers(-4, 4)), data.draw(st.integers(-4, 4))
    for fam in ("a1", "d1"):
        u = pinned_kernel_solution(dg, fam, {left: a, right: b})
        assert u is not None
        assert (u[left], u[right]) == (a, b)
        assert region_choice_matrix(dg, fam) @ list(u) == [0] * dg.n
        for y in sorted(dg.reducible_crossings()):
            v = special_solution_single_pinned(dg, y, "alternating" if fam == "a1" else "definite", {left: a, right: b})
            assert (v[left], v[right]) == (a, b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(-5, 5), min_size=20, max_size=20))
def test_constructive_matches_solver(seed, cs):
    dg = walked(seed, comps=1)
    c = cs[: dg.n]
    for fam in ("alternating", "definite"):
        u = constructive_solution_double(dg, fam, c)
        a = region_choice_matrix(dg, fam[0] + "2")
        assert [p + q for p, q in zip(a @ list(u), c)] == [0] * dg.n
        assert solve(ProblemInstance(dg, fam[0] + "2", ScoreVector.of(dg, c))) is not None


def test_kernel_basis():
    for name in ("figure8", "torus_2_4", "kink_plus_loops(3)"):
        dg = corpus.builtin(name).diagram
        for code in ("a2", "d2"):
            basis = kernel_basis(dg, code)
            assert len(basis) == dg.l + 1
            assert sympy_lattice_equal([list(u) for u in basis],
                                       zlinalg.kernel_lattice(region_choice_matrix(dg, code)), len(dg.regions))
    with pytest.raises(DiagramError):
        kernel_basis(corpus.builtin("figure8").diagram, "d1")


def test_pair_solutions():
    for dg in two_component_diagrams():
        inter = [x for x in dg.crossing_ids if not dg.is_self_crossing(x)]
        a2 = region_choice_matrix(dg, "a2")
        for x in inter:
            for y in inter:
                if x == y:
                    continue
                v, (px, py) = pair_solution_two_component(dg, x, y)
                image = a2 @ list(v)
                assert abs(px) == 1 and abs(py) == 1
                assert {i for i, t in enumerate(image) if t} == {dg.crossing_ids.index(x), dg.crossing_ids.index(y)}
        if len(inter) >= 3:
            x, y, z = inter[:3]
            vxy, pxy = pair_solution_two_component(dg, x, y)
            vxz, pxz = pair_solution_two_component(dg, x, z)
            diff = a2 @ [p - q for p, q in zip(vxy, vxz)]
            want = [0] * dg.n
            want[dg.crossing_ids.index(y)] = pxy[1]
            want[dg.crossing_ids.index(z)] = -pxz[1]
            assert diff == want


def test_pair_errors():
    dg = corpus.builtin("hopf").diagram
    with pytest.raises(DiagramError):
        pair_solution_two_component(dg, 1, 1)
    with pytest.raises(DiagramError):
        pair_solution_two_component(corpus.builtin("figure8").diagram, 1, 2)


def test_image_bases():
    for dg in two_component_diagrams():
        for fam in ("alternating", "definite"):
            basis = [b.vector(dg) for b in image_basis_two_component(dg, fam)]
            assert len(basis) == dg.n - 1
            for code in (fam[0] + "1", fam[0] + "2"):
                cols = region_choice_matrix(dg, code).columns()
                assert sympy_lattice_equal(basis, cols, dg.n)
    torus = corpus.builtin("torus_2_4").diagram
    for b in image_basis_two_component(torus, "alternating"):
        assert sum(f * t for f, t in zip(corpus.TORUS_FUNCTIONAL, b.vector(torus))) == 0
    hopf = corpus.builtin("hopf").diagram
    (only,) = image_basis_two_component(hopf)
    assert sorted(abs(t) for t in only.vector(hopf)) == [1, 1]


def test_membership():
    f8 = corpus.builtin("figure8").diagram
    assert image_membership(f8, "a1", [3, 1, 4, 1])
    torus = corpus.builtin("torus_2_4").diagram
    basis = image_basis_two_component(torus, "alternating")
    assert image_membership(torus, "a2", [0, 0, 0, 0], basis)
    assert not image_membership(torus, "a2", [1, 0, 0, 0], basis)
    for code in RULES:
        cols = region_choice_matrix(torus, code).columns()
        for c in ([1, 1, 0, 0], [1, 0, 0, 0], [2, 0, 0, 0], [1, -1, 1, -1]):
            assert image_membership(torus, code, c) == sympy_in_lattice(cols, c)
