"""Minimum-evolution-time linear programming.

The engineering problem is

    minimize    sum(lam)
    subject to  W @ lam = rhs,   lam >= 0

solved with a self-contained two-phase dense revised simplex.  Vertex
(basic) solutions are required downstream -- they have at most d strictly
positive entries, one evolution block per constraint -- which is why an
interior-point method or an external solver is not used here.

The module also certifies matrices: W is *feasible* when every
right-hand side is reachable, equivalent to full row rank plus the
auxiliary program  W x = 0, x >= 1  having a feasible point.  Randomly
sampled column sets become feasible with high probability once r exceeds
about twice d; ``wendel_probability`` gives the spherically-symmetric
reference curve for that transition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.stats import binom

from .engineering import ConjugationMatrix, build_clifford_matrix, build_pauli_matrix
from .pauli import CliffordLabel, PauliIndex
from .rng import stream

# absolute pivoting tolerances; matrix entries are O(1) by construction
PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
RANK_TOL = 1e-9
REFRESH_EVERY = 50   # full basis-inverse refactorizations
STALL_SWITCH = 50    # consecutive degenerate pivots before switching to Bland


class SimplexError(RuntimeError):
    """Internal solver failure (unboundedness or iteration blow-up)."""


class SamplerExhaustedError(RuntimeError):
    """No feasible sampled matrix within the configured attempt budget."""

    def __init__(self, attempts: int):
        super().__init__(f"no feasible sampled matrix in {attempts} attempts; "
                         "raise the column ratio")
        self.attempts = attempts


@dataclass(frozen=True)
class LpProblem:
    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        r = np.asarray(self.rhs, dtype=float)
        if m.shape[0] != r.shape[0]:
            raise ValueError("rhs length does not match matrix rows")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(r))):
            raise ValueError("non-finite LP data")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", r)


@dataclass
class LpSolution:
    status: str                  # "optimal" | "infeasible"
    lam: np.ndarray
    objective: float
    dual: np.ndarray
    iterations: int = 0
    runtime: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def positive_count(self, tol: float = PIVOT_TOL) -> int:
        return int(np.sum(self.lam > tol))


@dataclass(frozen=True)
class SamplerConfig:
    ratio: float = 3.0
    max_attempts: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.ratio < 1.0:
            raise ValueError("ratio must be at least 1")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")


@dataclass(frozen=True)
class FeasibilityCertificate:
    feasible: bool
    reason: str | None = None    # "rank-deficient" | "LP1-infeasible"
    interior_point: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.feasible


class _Simplex:
    """Revised simplex with an explicitly maintained basis inverse.

    Dantzig pricing by default; after STALL_SWITCH consecutive degenerate
    pivots it falls back to Bland's rule, which cannot cycle, and returns
    to Dantzig on the next strict objective decrease.
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, c: np.ndarray, basis):
        self.A = A
        self.b = b
        self.c = c
        self.basis = list(basis)
        self.B_inv = np.linalg.inv(A[:, self.basis])
        self.iterations = 0
        self._since_refresh = 0
        self._stalled = 0
        self._bland = False

    def _refresh(self):
        self.B_inv = np.linalg.inv(self.A[:, self.basis])
        self._since_refresh = 0

    def run(self, allowed: np.ndarray, max_iter: int):
        """Pivot to optimality over the ``allowed`` entering columns."""
        A, b, c = self.A, self.b, self.c
        for _ in range(max_iter):
            x_b = self.B_inv @ b
            y = c[self.basis] @ self.B_inv
            z = c - y @ A
            z[self.basis] = 0.0
            candidates = np.flatnonzero(allowed & (z < -PIVOT_TOL))
            if candidates.size == 0:
                return x_b, y
            q = candidates[0] if self._bland else candidates[np.argmin(z[candidates])]
            u = self.B_inv @ A[:, q]
            rows = np.flatnonzero(u > PIVOT_TOL)
            if rows.size == 0:
                raise SimplexError("unbounded direction in a bounded program")
            ratios = x_b[rows] / u[rows]
            theta = ratios.min()
            ties = rows[ratios <= theta + PIVOT_TOL]
            # Bland tie-break on the leaving variable index, always
            leave_pos = min(ties, key=lambda i: self.basis[i])
            self._pivot(q, leave_pos, u)
            if theta <= PIVOT_TOL:
                self._stalled += 1
                if self._stalled >= STALL_SWITCH:
                    self._bland = True
            else:
                self._stalled = 0
                self._bland = False
        raise SimplexError(f"iteration limit {max_iter} exceeded")

    def _pivot(self, enter: int, leave_pos: int, u: np.ndarray):
        pivot_row = self.B_inv[leave_pos] / u[leave_pos]
        self.B_inv -= np.outer(u, pivot_row)
        self.B_inv[leave_pos] = pivot_row
        self.basis[leave_pos] = enter
        self.iterations += 1
        self._since_refresh += 1
        if self._since_refresh >= REFRESH_EVERY:
            self._refresh()


def _phase1(A: np.ndarray, b: np.ndarray, max_iter: int):
    """Find a feasible basis with artificial variables.

    Returns (A, b, basis, solver, iterations) for the possibly row-reduced
    system, or None when the constraints are inconsistent with x >= 0.
    """
    d, r = A.shape
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)
    A1 = np.hstack([A, np.eye(d)])
    c1 = np.concatenate([np.zeros(r), np.ones(d)])
    solver = _Simplex(A1, b, c1, range(r, r + d))
    allowed = np.concatenate([np.ones(r, dtype=bool), np.zeros(d, dtype=bool)])
    x_b, _ = solver.run(allowed, max_iter)
    scale = 1.0 + np.abs(b).max(initial=0.0)
    if c1[solver.basis] @ x_b > FEAS_TOL * scale:
        return None
    # drive artificials out of the basis; rows that cannot pivot are redundant
    redundant = []
    for pos in range(d):
        if solver.basis[pos] < r:
            continue
        row = solver.B_inv[pos] @ A
        nonbasic = np.ones(r, dtype=bool)
        nonbasic[[j for j in solver.basis if j < r]] = False
        pivots = np.flatnonzero(nonbasic & (np.abs(row) > PIVOT_TOL))
        if pivots.size:
            q = pivots[0]
            solver._pivot(q, pos, solver.B_inv @ A1[:, q])
        else:
            redundant.append(pos)
    iterations = solver.iterations
    if redundant:
        keep = np.setdiff1d(np.arange(d), redundant)
        A, b = A[keep], b[keep]
        basis = [solver.basis[pos] for pos in range(d) if pos not in redundant]
    else:
        basis = list(solver.basis)
    return A, b, basis, redundant, iterations


def solve_min_time(problem: LpProblem) -> LpSolution:
    """Minimize the total relative evolution time sum(lam) s.t. W lam = rhs, lam >= 0.

    Returns a basic optimal solution (a vertex, hence at most d positive
    entries) together with the dual vector certifying optimality.
    """
    t0 = time.perf_counter()
    W, rhs = problem.matrix, problem.rhs
    d, r = W.shape
    max_iter = 200 * (d + r) + 1000
    phase1 = _phase1(W.copy(), rhs.copy(), max_iter)
    if phase1 is None:
        return LpSolution("infeasible", np.zeros(r), np.inf, np.zeros(d),
                          runtime=time.perf_counter() - t0)
    A, b, basis, redundant, it1 = phase1
    c = np.ones(r)
    solver = _Simplex(A, b, c, basis)
    allowed = np.ones(r, dtype=bool)
    solver.run(allowed, max_iter)
    # re-solve the final basis system directly for clean primal/dual values
    B = A[:, solver.basis]
    x_b = np.linalg.solve(B, b)
    y = np.linalg.solve(B.T, c[solver.basis])
    lam = np.zeros(r)
    lam[solver.basis] = x_b
    lam[np.abs(lam) <= PIVOT_TOL] = 0.0
    dual = y
    if redundant:
        # deleted rows were linearly dependent; their dual weight is zero
        keep = np.setdiff1d(np.arange(d), redundant)
        dual = np.zeros(d)
        dual[keep] = y
    # rows may have been sign-flipped in phase 1
    row_sign = np.where(problem.rhs < 0, -1.0, 1.0)
    dual = dual * row_sign
    return LpSolution("optimal", lam, float(lam.sum()), dual,
                      iterations=it1 + solver.iterations,
                      runtime=time.perf_counter() - t0)


def _rank(matrix: np.ndarray) -> int:
    _, R, _ = scipy.linalg.qr(matrix, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0:
        return 0
    return int(np.sum(diag > RANK_TOL * max(1.0, diag[0])))


def check_feasible_matrix(W) -> FeasibilityCertificate:
    """True iff every right-hand side is reachable with non-negative weights.

    Certified by full row rank plus a point x >= 1 with W x = 0 (found via
    a phase-1 solve on the shifted variable x - 1 >= 0).
    """
    entries = W.entries if isinstance(W, ConjugationMatrix) else np.atleast_2d(np.asarray(W, float))
    d, r = entries.shape
    if _rank(entries) < d:
        return FeasibilityCertificate(False, "rank-deficient")
    shifted_rhs = -entries.sum(axis=1)
    result = _phase1(entries.copy(), shifted_rhs, 200 * (d + r) + 1000)
    if result is None:
        return FeasibilityCertificate(False, "LP1-infeasible")
    A, b, basis, _, _ = result
    x = np.zeros(r)
    x[[j for j in basis if j < r]] = np.linalg.solve(A[:, basis], b)
    return FeasibilityCertificate(True, None, x + 1.0)


# label spaces up to this size are sampled without replacement
_ENUMERABLE_LIMIT = 1 << 24


def _random_pauli_labels(n: int, count: int, rng) -> list:
    space = 1 << (2 * n)
    if space <= _ENUMERABLE_LIMIT:
        sel = rng.choice(space, size=min(count, space), replace=False)
        mask = (1 << n) - 1
        return [PauliIndex(n, int(v) >> n, int(v) & mask) for v in sel]
    bits = rng.integers(0, 2, size=(count, 2 * n), dtype=np.int64)
    weights = 1 << np.arange(n, dtype=np.int64)
    ax = bits[:, :n] @ weights
    az = bits[:, n:] @ weights
    return [PauliIndex(n, int(x), int(z)) for x, z in zip(ax, az)]


def _decode_clifford(n: int, v: int) -> CliffordLabel:
    p, bx, bz = [], 0, 0
    for i in range(n):
        v, digit = divmod(v, 12)
        p.append(digit // 4)
        bx |= (digit >> 0 & 1) << i         # b codes (0,0),(1,0),(0,1),(1,1)
        bz |= (digit >> 1 & 1) << i
    return CliffordLabel(n, tuple(p), bx, bz)


def _random_clifford_labels(n: int, count: int, rng) -> list:
    space = 12 ** n
    if space <= _ENUMERABLE_LIMIT:
        sel = rng.choice(space, size=min(count, space), replace=False)
        return [_decode_clifford(n, int(v)) for v in sel]
    ps = rng.integers(0, 3, size=(count, n))
    bits = rng.integers(0, 2, size=(count, 2 * n), dtype=np.int64)
    weights = 1 << np.arange(n, dtype=np.int64)
    bx = bits[:, :n] @ weights
    bz = bits[:, n:] @ weights
    return [CliffordLabel(n, tuple(int(v) for v in p), int(x), int(z))
            for p, x, z in zip(ps, bx, bz)]


def sample_columns(rows, mode: str, count: int, rng, J=None) -> ConjugationMatrix:
    """One uniform column draw, without a feasibility check.

    Labels are drawn without replacement when the label space is small
    enough to enumerate (duplicate columns never help the cone and small
    spaces would otherwise collide constantly); very large label spaces
    fall back to i.i.d. draws, where collisions are negligible.
    """
    n = rows[0].n
    if mode == "pauli":
        return build_pauli_matrix(rows, _random_pauli_labels(n, count, rng))
    if mode == "clifford":
        if J is None:
            raise ValueError("clifford mode needs the system Hamiltonian")
        return build_clifford_matrix(J, rows, _random_clifford_labels(n, count, rng))
    raise ValueError(f"unknown conjugation mode {mode!r}")


def sample_relaxation(rows, mode: str, J, cfg: SamplerConfig) -> ConjugationMatrix:
    """Sample r = ratio * d uniform columns until the matrix is feasible.

    Infeasible draws are discarded whole (a fresh i.i.d. set per attempt),
    and the identity label is appended to every accepted draw.  The result
    is deterministic for a fixed seed.
    """
    rows = tuple(rows)
    d = len(rows)
    n = rows[0].n
    count = int(round(cfg.ratio * d))
    if count < d + 1:
        raise ValueError("ratio * d must exceed d")
    for attempt in range(cfg.max_attempts):
        rng = stream(cfg.seed, attempt)
        matrix = sample_columns(rows, mode, count, rng, J=J)
        if check_feasible_matrix(matrix):
            identity = (PauliIndex.identity(n) if mode == "pauli"
                        else CliffordLabel.identity(n))
            if identity not in matrix.cols:
                if mode == "pauli":
                    matrix = build_pauli_matrix(rows, matrix.cols + (identity,))
                else:
                    matrix = build_clifford_matrix(J, rows, matrix.cols + (identity,))
            return matrix
    raise SamplerExhaustedError(cfg.max_attempts)


def wendel_probability(r: int, d: int) -> float:
    """Probability that r spherically-symmetric points positively span R^d.

    Evaluates 1 - 2^-(r-1) * sum_{k<d} C(r-1, k) through a stable binomial
    CDF; zero whenever r <= d and exactly 1/2 at r = 2d.
    """
    if r < 1 or d < 1:
        raise ValueError("r and d must be positive")
    if r <= d:
        return 0.0
    p = 1.0 - binom.cdf(d - 1, r - 1, 0.5)
    return float(min(1.0, max(0.0, p)))
