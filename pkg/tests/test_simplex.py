import numpy as np
import pytest

from fuzzyplan.simplex import FEAS_TOL, LinearProgram, solve
from fuzzyplan.simplex import residuals

from oracles import lp_optimum_by_enumeration


def lp(objective, sense, constraints):
    return LinearProgram(tuple(objective), sense, tuple(constraints))


def test_box_corner():
    sol = solve(lp([1.0, 1.0], "max", [((1.0, 0.0), "<=", 1.0), ((0.0, 1.0), "<=", 1.0)]))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(2.0)
    assert sol.x == pytest.approx((1.0, 1.0))
    assert sol.iterations > 0


def test_infeasible_negative_bound():
    sol = solve(lp([1.0], "max", [((1.0,), "<=", -1.0)]))
    assert sol.status == "infeasible"
    assert sol.x is None
    assert sol.objective_value is None


def test_unbounded():
    sol = solve(lp([1.0, 0.0], "max", [((0.0, 1.0), "<=", 5.0)]))
    assert sol.status == "unbounded"
    sol = solve(lp([1.0], "max", [((1.0,), ">=", 1.0)]))
    assert sol.status == "unbounded"


def test_min_sense():
    sol = solve(
        lp([2.0, 3.0], "min", [((1.0, 1.0), ">=", 4.0), ((1.0, 0.0), "<=", 10.0), ((0.0, 1.0), "<=", 10.0)])
    )
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(8.0)
    assert sol.x == pytest.approx((4.0, 0.0))


def test_equality_constraints():
    sol = solve(lp([3.0, 1.0], "max", [((1.0, 1.0), "=", 2.0), ((1.0, 0.0), "<=", 1.5)]))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(3.0 * 1.5 + 0.5)
    assert sol.x == pytest.approx((1.5, 0.5))


def test_redundant_equalities():
    # second row is the first doubled; the solver must drop it, not choke
    sol = solve(
        lp([1.0, 0.0], "max", [((1.0, 1.0), "=", 2.0), ((2.0, 2.0), "=", 4.0)])
    )
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(2.0)


def test_negative_rhs_normalisation():
    # x1 - x2 >= -3 with negative rhs exercises the row flip
    sol = solve(lp([1.0, 1.0], "max", [((1.0, -1.0), ">=", -3.0), ((1.0, 1.0), "<=", 4.0)]))
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(4.0)


def test_beale_degenerate_terminates():
    # classic cycling instance for Dantzig pricing; optimum is -1/20
    sol = solve(
        lp(
            [-0.75, 150.0, -0.02, 6.0],
            "min",
            [
                ((0.25, -60.0, -1.0 / 25.0, 9.0), "<=", 0.0),
                ((0.5, -90.0, -1.0 / 50.0, 3.0), "<=", 0.0),
                ((0.0, 0.0, 1.0, 0.0), "<=", 1.0),
            ],
        )
    )
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(-0.05, abs=1e-9)


def test_validation():
    with pytest.raises(ValueError):
        LinearProgram((1.0,), "best", ())
    with pytest.raises(ValueError):
        LinearProgram((1.0, 2.0), "max", (((1.0,), "<=", 1.0),))
    with pytest.raises(ValueError):
        LinearProgram((1.0,), "max", (((1.0,), "<", 1.0),))
    with pytest.raises(ValueError):
        LinearProgram((float("nan"),), "max", ())
    with pytest.raises(ValueError):
        LinearProgram((1.0,), "max", (((1.0,), "<=", float("inf")),))


def test_deterministic():
    problem = lp(
        [1.0, 2.0, -1.0],
        "max",
        [
            ((1.0, 1.0, 1.0), "<=", 4.0),
            ((1.0, -1.0, 0.0), ">=", -2.0),
            ((0.0, 1.0, 3.0), "<=", 6.0),
        ],
    )
    first = solve(problem)
    for _ in range(3):
        again = solve(problem)
        assert again == first


def _random_lp(rng):
    n = int(rng.integers(1, 4))
    cons = []
    for i in range(n):
        e = [0.0] * n
        e[i] = 1.0
        cons.append((tuple(e), "<=", float(rng.uniform(0.5, 5.0))))
    for _ in range(int(rng.integers(0, 5))):
        coeffs = tuple(float(v) for v in rng.uniform(-3, 3, n))
        rel = rng.choice(["<=", ">=", "="], p=[0.45, 0.45, 0.10])
        rhs = float(rng.uniform(-2.0, 6.0))
        cons.append((coeffs, str(rel), rhs))
    sense = str(rng.choice(["max", "min"]))
    objective = tuple(float(v) for v in rng.uniform(-5, 5, n))
    return lp(objective, sense, cons)


def test_random_lps_match_vertex_oracle():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(80):
        problem = _random_lp(rng)
        sol = solve(problem)
        a_ub = [c for c, r, _ in problem.constraints if r == "<="]
        b_ub = [v for _, r, v in problem.constraints if r == "<="]
        ge = [(tuple(-x for x in c), -v) for c, r, v in problem.constraints if r == ">="]
        a_ub += [c for c, _ in ge]
        b_ub += [v for _, v in ge]
        a_eq = [c for c, r, _ in problem.constraints if r == "="]
        b_eq = [v for _, r, v in problem.constraints if r == "="]
        status, value, _ = lp_optimum_by_enumeration(
            problem.objective, a_ub, b_ub, a_eq or None, b_eq or None, sense=problem.sense
        )
        assert sol.status == status, f"{problem} -> {sol.status} vs oracle {status}"
        if status == "optimal":
            assert sol.objective_value == pytest.approx(value, abs=1e-6)
            assert residuals(problem, sol.x) <= FEAS_TOL
            assert min(sol.x) >= -1e-9
            checked += 1
    assert checked >= 20  # the generator must not be degenerate


def test_solution_residuals_property():
    rng = np.random.default_rng(77)
    for _ in range(40):
        problem = _random_lp(rng)
        sol = solve(problem)
        if sol.status == "optimal":
            assert residuals(problem, sol.x) <= FEAS_TOL
