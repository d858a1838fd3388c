import json
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from hardcore_lp.bounds import cubic_bound, t3_polynomial, tf_bound
from hardcore_lp.graph import complete_graph, empty_graph, enumerate_nonisomorphic
from hardcore_lp.lp import (
    EQ,
    GE,
    LE,
    LpShapeError,
    LpSizeError,
    build_lp_cubic,
    build_lp_general,
    build_lp_trianglefree,
    check_complementary_slackness,
    dual_candidate,
    dual_candidate_from_ratio,
    dual_of,
    local_coefficients,
    make_problem,
    occupancy_ratio,
    simplex_solve,
)

from conftest import SAMPLE_LAMBDAS

LAMBDA_GRID = [Fraction(p, q) for p, q in
               [(1, 10), (1, 4), (1, 2), (2, 3), (1, 1), (3, 2), (2, 1), (3, 1), (5, 1), (10, 1)]]


def vertex_enumeration_optimum(p):
    """Minimum over all basic feasible solutions, solved with sympy exact linear algebra."""
    nvar = len(p.objective)
    cols = [list(map(sympy.Rational, [r.coeffs[j] for r in p.rows])) for j in range(nvar)]
    cost = [sympy.Rational(c.numerator, c.denominator) for c in p.objective]
    for k, r in enumerate(p.rows):
        if r.sense != EQ:
            col = [0] * len(p.rows)
            col[k] = -1 if r.sense == GE else 1
            cols.append(col)
            cost.append(0)
    b = sympy.Matrix([sympy.Rational(r.rhs.numerator, r.rhs.denominator) for r in p.rows])
    m = len(p.rows)
    best = None
    for basis in combinations(range(len(cols)), m):
        mat = sympy.Matrix([[cols[j][i] for j in basis] for i in range(m)])
        if mat.det() == 0:
            continue
        xb = mat.LUsolve(b)
        if any(v < 0 for v in xb):
            continue
        val = sum(cost[j] * xb[k] for k, j in enumerate(basis))
        if best is None or val < best:
            best = val
    return None if best is None else Fraction(int(best.p), int(best.q))


# --- simplex basics ------------------------------------------------------------

def test_single_point():
    p = make_problem("min", [1], [([1], EQ, 1, "r")], ["x"])
    sol = simplex_solve(p)
    assert sol.status == "optimal" and sol.objective == 1 and sol.x == (1,)


def test_infeasible():
    p = make_problem("min", [1], [([1], EQ, 1, "a"), ([1], EQ, 2, "b")], ["x"])
    assert simplex_solve(p).status == "infeasible"


def test_unbounded():
    p = make_problem("max", [1, 0], [([1, -1], LE, 1, "r")], ["x", "y"])
    assert simplex_solve(p).status == "unbounded"


def test_redundant_rows_and_free_variables():
    # x + y = 2 listed twice; z free with z >= -3 via a row
    p = make_problem(
        "min", [1, 2, 1],
        [([1, 1, 0], EQ, 2, "a"), ([1, 1, 0], EQ, 2, "b"), ([0, 0, 1], GE, -3, "c")],
        ["x", "y", "z"], free=[False, False, True])
    sol = simplex_solve(p)
    assert sol.status == "optimal"
    assert sol.objective == -1 and sol.x == (2, 0, -3)
    assert sum(r.rhs * y for r, y in zip(p.rows, sol.duals)) == sol.objective


def test_size_limit():
    p = make_problem("min", [0] * 65, [], [f"x{i}" for i in range(65)])
    with pytest.raises(LpSizeError):
        simplex_solve(p)


def test_row_width_checked():
    with pytest.raises(LpShapeError):
        make_problem("min", [1, 1], [([1], EQ, 1, "r")], ["x", "y"])


def test_degenerate_cycling_example_terminates():
    # Beale's classic cycling example; Bland's rule must terminate
    p = make_problem(
        "min", [Fraction(-3, 4), 150, Fraction(-1, 50), 6],
        [([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0, "r1"),
         ([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0, "r2"),
         ([0, 0, 1, 0], LE, 1, "r3")],
        ["x1", "x2", "x3", "x4"])
    sol = simplex_solve(p)
    assert sol.status == "optimal" and sol.objective == Fraction(-1, 20)


# --- triangle-free program ---------------------------------------------------------

def test_lpp_three_one():
    p = build_lp_trianglefree(3, 1)
    assert p.rows[1].coeffs[0] == -3
    sol = simplex_solve(p)
    assert sol.objective == Fraction(18, 13)
    assert sol.x == (Fraction(3, 13), Fraction(2, 13), Fraction(8, 13), 0)


def test_lpp_three_quarter():
    sol = simplex_solve(build_lp_trianglefree(3, Fraction(1, 4)))
    assert sol.x == (Fraction(28, 213), 0, Fraction(135, 213), Fraction(50, 213))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_tf_simplex_matches_vertex_enumeration(d):
    for lam in LAMBDA_GRID[::3]:
        p = build_lp_trianglefree(d, lam)
        assert simplex_solve(p).objective == vertex_enumeration_optimum(p)


def test_cubic_matches_vertex_enumeration():
    for lam in LAMBDA_GRID[::2]:
        p = build_lp_cubic(lam, t3_polynomial())
        assert simplex_solve(p).objective == vertex_enumeration_optimum(p)


def test_general_d2_matches_vertex_enumeration():
    for lam in LAMBDA_GRID[::3]:
        p = build_lp_general(2, lam)
        assert len(p.objective) == 4
        assert simplex_solve(p).objective == vertex_enumeration_optimum(p) == lam / (1 + 3 * lam)


# --- cubic program ------------------------------------------------------------------

def test_cubic_lp_values():
    p = build_lp_cubic(1, t3_polynomial())
    assert p.rows[3].rhs == Fraction(8, 189)
    sol = simplex_solve(p)
    assert sol.objective == Fraction(3426, 2457)
    assert sol.objective / 6 == Fraction(571, 2457)
    assert sol.x == tuple(Fraction(v, 2457) for v in (571, 450, 1332, 104))


def test_cubic_lambda_small():
    lam = Fraction(1, 10**6)
    p = build_lp_cubic(lam, t3_polynomial())
    assert abs(float(p.rows[3].rhs) - 1) < 1e-5
    assert simplex_solve(p).x[3] > 1 - Fraction(1, 10**4)


# --- general program -----------------------------------------------------------------

def test_general_lp_shape():
    p = build_lp_general(3, 1)
    assert len(p.objective) == 8
    graphs = enumerate_nonisomorphic(3)
    assert graphs[0].n == 0
    for lam in SAMPLE_LAMBDAS:
        for d in (1, 2, 3):
            assert local_coefficients(empty_graph(0), d, lam) == (1, 0)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_general_lp_optimum(d):
    for lam in (Fraction(1, 4), Fraction(1), Fraction(4)):
        p = build_lp_general(d, lam)
        sol = simplex_solve(p)
        assert sol.objective == lam / (1 + (d + 1) * lam)
        graphs = enumerate_nonisomorphic(d)
        for h, x in zip(graphs, sol.x):
            if x:
                assert h.num_edges == h.n * (h.n - 1) // 2
        # duals are the scaled certificate (A_{K_d}, B_{K_d})
        scale = lam / (2 * (1 + lam))
        a_k, b_k = dual_candidate(complete_graph(d), d, lam)
        assert sol.duals == (scale * a_k, scale * b_k)


# --- duality -------------------------------------------------------------------------

def test_dual_shape():
    p = make_problem("min", [1], [([1], EQ, 1, "S")], ["x"])
    dp = dual_of(p)
    assert dp.sense == "max" and dp.objective == (1,) and dp.free == (True,)
    assert dp.rows[0].sense == LE and dp.rows[0].rhs == 1 and dp.rows[0].coeffs == (1,)
    with pytest.raises(LpShapeError):
        dual_of(dp)


def test_dual_of_lpp_tight_row_y0():
    dp = dual_of(build_lp_trianglefree(3, 1))
    point = (Fraction(18, 13), Fraction(8, 13), Fraction(6, 13))
    row_y0 = dp.rows[0]
    assert row_y0.activity(point) == row_y0.rhs == 0
    assert dp.free == (True, True, False)


def test_dual_of_cubic_objective():
    p = build_lp_cubic(1, t3_polynomial())
    dp = dual_of(p)
    point = (Fraction(18, 13), Fraction(8, 13), Fraction(6, 13), Fraction(3, 13))
    assert dp.value(point) == Fraction(3426, 2457)
    assert simplex_solve(dp).objective == simplex_solve(p).objective
    assert all(r.activity(point) == r.rhs for r in dp.rows)


def _builders():
    for lam in LAMBDA_GRID:
        yield build_lp_trianglefree(3, lam)
        yield build_lp_trianglefree(6, lam)
        yield build_lp_cubic(lam, t3_polynomial())
        yield build_lp_general(3, lam)


def test_strong_duality_on_grid():
    for p in _builders():
        sol = simplex_solve(p)
        dsol = simplex_solve(dual_of(p))
        assert sol.status == dsol.status == "optimal"
        assert sol.objective == dsol.objective
        rep = check_complementary_slackness(p, sol.x, sol.duals)
        assert rep.holds
        assert rep.primal_objective == rep.dual_objective == sol.objective


# --- complementary slackness ------------------------------------------------------------

def test_slackness_closed_form_pair():
    b = tf_bound(3, 1)
    rep = check_complementary_slackness(build_lp_trianglefree(3, 1), b.vector(), b.duals())
    assert rep.holds


def test_slackness_cubic_all_tight():
    c = cubic_bound(1)
    rep = check_complementary_slackness(build_lp_cubic(1, t3_polynomial()), c.y, c.duals())
    assert rep.holds
    assert all(e.tight for e in rep.entries if e.kind in ("dual-row", "primal-row"))


def test_slackness_flipped_signs_fail():
    # the alternative sign reading (-A in row y0, -B in row y3) leaves slack
    c = cubic_bound(1)
    p = build_lp_cubic(1, t3_polynomial())
    rep = check_complementary_slackness(p, c.y, (c.S, c.M, -c.A, -c.B))
    assert not rep.holds


def test_slackness_perturbed_flagged():
    b = tf_bound(3, 1)
    y = list(b.vector())
    y[0] += Fraction(1, 1000)
    rep = check_complementary_slackness(build_lp_trianglefree(3, 1), y, b.duals())
    assert any(e.kind == "primal-row" and e.pair == "S" for e in rep.violations)
    payload = json.loads(json.dumps(rep.to_json()))
    assert {"kind", "pair", "slack", "tight", "violated"} <= set(payload[0])


# --- dual candidate ---------------------------------------------------------------------

def test_dual_candidate_kd():
    for d in (1, 2, 3, 4, 5):
        for lam in SAMPLE_LAMBDAS:
            k = complete_graph(d)
            a_k, b_k = dual_candidate(k, d, lam)
            assert a_k == 2 * (1 + lam) / (1 + (d + 1) * lam)
            assert b_k == ((d - 1) * lam - 1) / (1 + (d + 1) * lam)
            assert occupancy_ratio(k, lam) == 1
            assert dual_candidate_from_ratio(k, d, lam) == a_k


def test_dual_candidate_k1():
    a, b = local_coefficients(complete_graph(1), 1, 1)
    assert (a, b) == (Fraction(1, 2), 1)
    a_k, b_k = dual_candidate(complete_graph(1), 1, 1)
    assert (a_k, b_k) == (Fraction(4, 3), Fraction(-1, 3))
    assert dual_candidate_from_ratio(complete_graph(1), 1, 1) == a_k


def test_dual_candidate_preconditions():
    with pytest.raises(ValueError):
        dual_candidate(empty_graph(0), 3, 1)
    with pytest.raises(ValueError):
        dual_candidate(complete_graph(4), 3, 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_dualsat_equivalence(d):
    graphs = [h for h in enumerate_nonisomorphic(d) if h.n > 0]
    for lam in SAMPLE_LAMBDAS:
        coeff = {h: local_coefficients(h, d, lam) for h in graphs}
        cand = {h: dual_candidate(h, d, lam) for h in graphs}
        ratio = {h: occupancy_ratio(h, lam) for h in graphs}
        for k in graphs:
            a_k, b_k = cand[k]
            assert dual_candidate_from_ratio(k, d, lam) == a_k
            for h in graphs:
                a_h, b_h = coeff[h]
                c1 = a_k + b_k * (a_h - b_h) <= a_h + b_h
                c2 = a_k <= cand[h][0]
                c3 = ratio[k] >= ratio[h]
                assert c1 == c2 == c3


@pytest.mark.parametrize("d", [2, 3, 4])
def test_candidate_strictly_decreasing_in_ratio(d):
    graphs = [h for h in enumerate_nonisomorphic(d) if h.n > 0]
    for lam in SAMPLE_LAMBDAS:
        pts = [(occupancy_ratio(h, lam), dual_candidate(h, d, lam)[0]) for h in graphs]
        for (r1, a1), (r2, a2) in combinations(pts, 2):
            if r1 < r2:
                assert a1 > a2
            elif r1 > r2:
                assert a1 < a2
            else:
                assert a1 == a2


def test_problem_json():
    obj = json.loads(json.dumps(build_lp_cubic(1, t3_polynomial()).to_json()))
    assert [r["label"] for r in obj["rows"]] == ["S", "M", "A", "B"]
    assert obj["rows"][3]["rhs"] == "8/189"
    sol = json.loads(json.dumps(simplex_solve(build_lp_trianglefree(3, 1)).to_json()))
    assert sol["objective"] == "18/13" and sol["dual"] == {"S": "18/13", "M": "8/13", "A": "6/13"}
