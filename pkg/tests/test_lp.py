"""Simplex solver, feasibility certificates, sampler, Wendel curve.

scipy.optimize.linprog (HiGHS) serves as the independent oracle for
objective values and feasibility; the solver under test shares no code
with it.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from hamshape.engineering import build_pauli_matrix
from hamshape.experiments import two_local_rows
from hamshape.lp import (LpProblem, SamplerConfig, SamplerExhaustedError,
                         check_feasible_matrix, sample_columns,
                         sample_relaxation, solve_min_time,
                         wendel_probability)
from hamshape.pauli import CliffordLabel, PauliIndex, all_pauli_indices
from hamshape.rng import stream


def full_W(n):
    return build_pauli_matrix(all_pauli_indices(n),
                              all_pauli_indices(n, include_identity=True))


def oracle_objective(W, rhs):
    res = linprog(np.ones(W.shape[1]), A_eq=W, b_eq=rhs,
                  bounds=(0, None), method="highs")
    return res.fun if res.status == 0 else None


# ---------------------------------------------------------------------------
# solver contract examples


def test_uniform_target_meets_lower_bound():
    # rows {X,Y,Z}, all 4 columns, M = (1,1,1): objective 1 on the identity
    W = full_W(1)
    sol = solve_min_time(LpProblem(W.entries, np.ones(3)))
    assert sol.optimal
    assert sol.objective == pytest.approx(1.0, abs=1e-9)
    j = W.cols.index(PauliIndex.identity(1))
    assert sol.lam[j] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [1, 2])
def test_negated_column_worst_case(n):
    # M = -w_b costs the full 4^n - 1 for every column b
    W = full_W(n)
    for j in range(W.r):
        sol = solve_min_time(LpProblem(W.entries, -W.entries[:, j]))
        assert sol.optimal
        assert sol.objective == pytest.approx(4 ** n - 1, abs=1e-7)


def test_sign_obstruction_infeasible():
    W = build_pauli_matrix([PauliIndex.from_string("X")], [PauliIndex.identity(1)])
    sol = solve_min_time(LpProblem(W.entries, np.array([-1.0])))
    assert sol.status == "infeasible"
    assert not math.isfinite(sol.objective)


def test_matches_scipy_on_random_instances():
    rng = stream(123)
    W = full_W(2).entries
    for _ in range(25):
        rhs = rng.uniform(-2, 2, size=15)
        sol = solve_min_time(LpProblem(W, rhs))
        assert sol.optimal
        assert sol.objective == pytest.approx(oracle_objective(W, rhs), abs=1e-7)


def test_matches_scipy_on_rectangular_sampled_instances():
    rows = two_local_rows(4)
    rng = stream(99)
    W = sample_columns(rows, "pauli", 3 * len(rows), rng).entries
    for k in range(5):
        rhs = rng.uniform(-1, 1, size=len(rows))
        sol = solve_min_time(LpProblem(W, rhs))
        oracle = oracle_objective(W, rhs)
        if sol.optimal:
            assert oracle is not None
            assert sol.objective == pytest.approx(oracle, abs=1e-6)
        else:
            assert oracle is None


def test_norm_bounds_on_full_matrix():
    rng = stream(7)
    W = full_W(2).entries
    for _ in range(20):
        rhs = rng.uniform(-1, 1, size=15)
        sol = solve_min_time(LpProblem(W, rhs))
        assert np.max(np.abs(rhs)) - 1e-7 <= sol.objective
        assert sol.objective <= np.sum(np.abs(rhs)) + 1e-7


def test_duality_gap_and_sparsity():
    rng = stream(17)
    rows = two_local_rows(4)
    W = sample_columns(rows, "pauli", 3 * len(rows), rng).entries
    rhs = rng.uniform(-1, 1, size=len(rows))
    sol = solve_min_time(LpProblem(W, rhs))
    assert sol.optimal
    gap = abs(sol.dual @ rhs - sol.objective) / max(1.0, abs(sol.objective))
    assert gap <= 1e-7
    # dual feasibility: y^T W <= 1
    assert np.all(sol.dual @ W <= 1 + 1e-7)
    assert sol.positive_count() <= len(rows)


def test_monotone_improvement_with_more_columns():
    rng = stream(31)
    rows = list(all_pauli_indices(2))
    cols = list(all_pauli_indices(2, include_identity=True))
    rhs = rng.uniform(-1, 1, size=len(rows))
    prev = math.inf
    for r in (8, 12, 16):
        W = build_pauli_matrix(rows, cols[:r])
        sol = solve_min_time(LpProblem(W.entries, rhs))
        if sol.optimal:
            assert sol.objective <= prev + 1e-9
            prev = sol.objective


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 10))
def test_simplex_terminates_on_degenerate_instances(seed, d, extra):
    # degenerate data: repeated columns, zero rhs entries, ties everywhere
    rng = stream(seed)
    r = d + extra
    W = rng.integers(-1, 2, size=(d, r)).astype(float)
    W[:, rng.integers(0, r)] = W[:, 0]            # duplicate a column
    rhs = rng.integers(-1, 2, size=d).astype(float)
    rhs[rng.integers(0, d)] = 0.0                 # force degeneracy
    sol = solve_min_time(LpProblem(W, rhs))       # must terminate
    oracle = oracle_objective(W, rhs)
    if sol.optimal:
        assert oracle is not None
        assert sol.objective == pytest.approx(oracle, abs=1e-6)
    else:
        assert oracle is None


# ---------------------------------------------------------------------------
# feasibility certificates


def test_full_column_matrix_always_feasible():
    for n in (1, 2):
        rows = all_pauli_indices(n)
        for subset in (rows, rows[:3], rows[-4:]):
            W = build_pauli_matrix(subset, all_pauli_indices(n, include_identity=True))
            cert = check_feasible_matrix(W)
            assert cert
            x = cert.interior_point
            assert np.all(x >= 1 - 1e-7)
            assert np.allclose(W.entries @ x, 0, atol=1e-6)


def test_rank_deficient_rejected():
    W = np.array([[1.0, -1.0], [1.0, -1.0]])
    cert = check_feasible_matrix(W)
    assert not cert
    assert cert.reason == "rank-deficient"


def test_positive_row_rejected():
    cert = check_feasible_matrix(np.array([[1.0, 1.0, 1.0]]))
    assert not cert
    assert cert.reason == "LP1-infeasible"


def test_certificate_matches_scipy_oracle():
    rows = two_local_rows(4)
    d = len(rows)
    for rep in range(10):
        rng = stream(5, rep)
        W = sample_columns(rows, "pauli", 2 * d, rng).entries
        res = linprog(np.zeros(W.shape[1]), A_eq=W, b_eq=-W.sum(axis=1),
                      bounds=(0, None), method="highs")
        scipy_ok = res.status == 0 and np.linalg.matrix_rank(W) == d
        assert bool(check_feasible_matrix(W)) == scipy_ok


# ---------------------------------------------------------------------------
# sampler


def test_sampler_deterministic_and_identity_appended():
    rows = two_local_rows(4)
    cfg = SamplerConfig(ratio=3.0, max_attempts=10, seed=42)
    W1 = sample_relaxation(rows, "pauli", None, cfg)
    W2 = sample_relaxation(rows, "pauli", None, cfg)
    assert W1.cols == W2.cols
    assert np.array_equal(W1.entries, W2.entries)
    assert PauliIndex.identity(4) in W1.cols
    assert check_feasible_matrix(W1)


def test_sampler_exhaustion_at_ratio_one_point_one():
    rows = two_local_rows(3)
    with pytest.raises(SamplerExhaustedError) as err:
        sample_relaxation(rows, "pauli", None,
                          SamplerConfig(ratio=1.1, max_attempts=3, seed=0))
    assert err.value.attempts == 3


def test_clifford_sampler_feasible():
    from hamshape.experiments import two_local_system
    J = two_local_system(3)
    rows = sorted({a for a in two_local_rows(3)})
    W = sample_relaxation(rows, "clifford", J,
                          SamplerConfig(ratio=3.0, max_attempts=20, seed=8))
    assert check_feasible_matrix(W)
    assert CliffordLabel.identity(3) in W.cols


def test_sampled_labels_unique_in_small_spaces():
    rows = two_local_rows(3)
    W = sample_columns(rows, "pauli", 100, stream(2))
    assert len(set(W.cols)) == len(W.cols)
    from hamshape.experiments import two_local_system
    Wc = sample_columns(rows, "clifford", 200, stream(3), two_local_system(3))
    assert len(set(Wc.cols)) == len(Wc.cols)


# ---------------------------------------------------------------------------
# Wendel curve


def test_wendel_values():
    assert wendel_probability(2, 1) == pytest.approx(0.5)
    assert wendel_probability(20, 10) == pytest.approx(0.5)
    assert wendel_probability(5, 5) == 0.0
    assert wendel_probability(3, 5) == 0.0
    assert wendel_probability(4, 1) == pytest.approx(1 - 1 / 8)
    assert wendel_probability(4000, 1000) == pytest.approx(1.0)


def test_wendel_monotone_in_r():
    vals = [wendel_probability(r, 20) for r in range(21, 80)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
