from dataclasses import replace
from fractions import Fraction as F

import numpy as np
import pytest

from rankfair.bounds import worst_profile_single_ranking
from rankfair.errors import DataError, GuardError
from rankfair.lp import LinearProgram, solve_lp, verify_solution


def test_trivial_minimum():
    lp = LinearProgram(objective=[1.0, 1.0], sense="min")
    lp.add_row([1.0, 1.0], ">=", 2.0)
    sol = solve_lp(lp)
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(2.0)
    assert verify_solution(lp, sol)


def test_maximization_with_upper_bounds():
    lp = LinearProgram(objective=[3.0, 2.0], sense="max",
                       bounds=[(0.0, 4.0), (0.0, 1.0)])
    lp.add_row([1.0, 1.0], "<=", 4.5)
    sol = solve_lp(lp)
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(3 * 4.0 + 2 * 0.5)
    assert sol.values == pytest.approx([4.0, 0.5])


def test_free_variable():
    lp = LinearProgram(objective=[1.0], sense="min", bounds=[(None, None)])
    lp.add_row([1.0], ">=", -3.0)
    sol = solve_lp(lp)
    assert sol.objective_value == pytest.approx(-3.0)


def test_infeasible():
    lp = LinearProgram(objective=[1.0], sense="min")
    lp.add_row([1.0], "<=", -1.0)
    sol = solve_lp(lp)
    assert sol.status == "Infeasible"


def test_unbounded():
    lp = LinearProgram(objective=[1.0], sense="max")
    lp.add_row([-1.0], "<=", 1.0)
    sol = solve_lp(lp)
    assert sol.status == "Unbounded"


def test_equality_rows():
    lp = LinearProgram(objective=[1.0, 2.0, 3.0], sense="min")
    lp.add_row([1.0, 1.0, 1.0], "=", 1.0)
    lp.add_row([1.0, 0.0, -1.0], "=", 0.25)
    sol = solve_lp(lp)
    assert sol.status == "Optimal"
    assert verify_solution(lp, sol)
    # x = (0.625, 0, 0.375) is the vertex with the cheapest objective
    assert sol.objective_value == pytest.approx(0.625 + 3 * 0.375)


def test_degenerate_program_terminates():
    # classic cycling example (Beale); Bland fallback must terminate it
    lp = LinearProgram(
        objective=[-0.75, 150.0, -0.02, 6.0], sense="min")
    lp.add_row([0.25, -60.0, -1.0 / 25.0, 9.0], "<=", 0.0)
    lp.add_row([0.5, -90.0, -1.0 / 50.0, 3.0], "<=", 0.0)
    lp.add_row([0.0, 0.0, 1.0, 0.0], "<=", 1.0)
    sol = solve_lp(lp)
    assert sol.status == "Optimal"
    assert sol.objective_value == pytest.approx(-0.05)


def test_size_guard():
    lp = LinearProgram(objective=[0.0] * 20001, sense="min")
    with pytest.raises(GuardError):
        solve_lp(lp)


def test_dimension_mismatch():
    lp = LinearProgram(objective=[1.0, 1.0], sense="min")
    with pytest.raises(Exception):
        lp.add_row([1.0], ">=", 0.0)


def test_dump_format():
    lp = LinearProgram(objective=[1.0, -2.0], sense="max")
    lp.add_row([1.0, 1.0], "<=", 3.0)
    text = lp.dump()
    assert text.splitlines()[0] == "Maximize"
    assert "End" in text


def test_verify_solution_rejects_perturbation():
    lp = LinearProgram(objective=[1.0, 1.0], sense="min")
    lp.add_row([1.0, 1.0], ">=", 2.0)
    sol = solve_lp(lp)
    bad = replace(sol, values=np.asarray(sol.values) - 0.5)
    assert not verify_solution(lp, bad)


def test_weak_duality_spot_check():
    # any feasible dual certificate bounds the primal from below
    lp = LinearProgram(objective=[2.0, 3.0], sense="min")
    lp.add_row([1.0, 2.0], ">=", 4.0)
    lp.add_row([3.0, 1.0], ">=", 5.0)
    sol = solve_lp(lp)
    rng = np.random.default_rng(0)
    A = np.array([[1.0, 2.0], [3.0, 1.0]])
    c = np.array([2.0, 3.0])
    b = np.array([4.0, 5.0])
    for _ in range(200):
        y = rng.uniform(0.0, 2.0, size=2)
        if np.all(A.T @ y <= c + 1e-12):
            assert float(b @ y) <= sol.objective_value + 1e-9


def test_determinism():
    a = worst_profile_single_ranking(4)
    b = worst_profile_single_ranking(4)
    assert a.alpha == b.alpha
    assert a.witness.entries == b.witness.entries


def test_worst_case_exact_values():
    assert worst_profile_single_ranking(2).alpha_exact == F(1, 2)
    assert worst_profile_single_ranking(3).alpha_exact == F(1, 6)
    assert worst_profile_single_ranking(4).alpha_exact == F(7, 40)
