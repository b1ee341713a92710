"""Conjugation matrices and LP right-hand sides.

Column j of a conjugation matrix lists the Pauli coefficients of
S_j^dag H_S S_j over a fixed row ordering.  In Pauli mode the entries
are the bare signs (-1)^<a,b> and the right-hand side is the ratio
vector M = A / J; in Clifford mode the entries carry the (permuted)
system coefficients and the right-hand side is A itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import SparseHamiltonian, support_sets
from .pauli import PERM_Q, SYM_Q, CliffordLabel, PauliIndex


class ReachabilityError(ValueError):
    """The target Hamiltonian needs Pauli terms the conjugation mode cannot produce."""

    def __init__(self, message: str, missing):
        super().__init__(message)
        self.missing = list(missing)


@dataclass(frozen=True)
class ConjugationMatrix:
    """Dense d x r matrix with labelled rows (PauliIndex) and columns."""

    rows: tuple
    cols: tuple
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (len(self.rows), len(self.cols)):
            raise ValueError("entry block does not match row/column labels")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def r(self) -> int:
        return len(self.cols)

    def to_text(self) -> str:
        """Debug-friendly tabular dump (not a stability guarantee)."""
        lines = ["\t" + "\t".join(str(c) for c in self.cols)]
        for a, row in zip(self.rows, self.entries):
            lines.append(str(a) + "\t" + "\t".join(f"{v:.12g}" for v in row))
        return "\n".join(lines)


@dataclass(frozen=True)
class TargetVector:
    """Right-hand side of the engineering LP over the same row ordering."""

    rows: tuple
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.rows),):
            raise ValueError("value vector does not match row labels")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite target entries")


def _codes_matrix(indices) -> np.ndarray:
    """(len, n) array of quaternary codes, one row per Pauli index."""
    return np.array([a.codes() for a in indices], dtype=np.int8)


def _check_rows(rows) -> None:
    if any(a.is_identity() for a in rows):
        raise ValueError("identity row is not allowed")
    n = rows[0].n
    if any(a.n != n for a in rows):
        raise ValueError("rows act on different qubit counts")


def build_pauli_matrix(rows, cols) -> ConjugationMatrix:
    """Partial sign matrix with entries (-1)^<row, col>."""
    rows, cols = tuple(rows), tuple(cols)
    _check_rows(rows)
    n = rows[0].n
    if any(b.n != n for b in cols):
        raise ValueError("rows and columns act on different qubit counts")
    ax = np.array([[a.ax >> i & 1 for i in range(n)] for a in rows], dtype=np.int8)
    az = np.array([[a.az >> i & 1 for i in range(n)] for a in rows], dtype=np.int8)
    bx = np.array([[b.ax >> i & 1 for i in range(n)] for b in cols], dtype=np.int8)
    bz = np.array([[b.az >> i & 1 for i in range(n)] for b in cols], dtype=np.int8)
    parity = (ax.astype(np.int64) @ bz.T + az.astype(np.int64) @ bx.T) % 2
    return ConjugationMatrix(rows, cols, np.where(parity, -1.0, 1.0))


def build_clifford_matrix(J: SparseHamiltonian, rows, cols) -> ConjugationMatrix:
    """Matrix with entries (-1)^<perm_p(a), b> * J[perm_p(a)].

    Rows must lie in suppnz(J); unstored source indices contribute 0.
    """
    rows, cols = tuple(rows), tuple(cols)
    _check_rows(rows)
    allowed = support_sets(J).suppnz
    bad = [a for a in rows if a not in allowed]
    if bad:
        raise ReachabilityError(
            f"{len(bad)} rows outside suppnz(J), e.g. {bad[0]}", bad)
    row_codes = _codes_matrix(rows)
    entries = np.zeros((len(rows), len(cols)))
    n = J.n
    for j, c in enumerate(cols):
        if c.n != n:
            raise ValueError("column label qubit count mismatch")
        p = np.asarray(c.p, dtype=np.int8)
        bq = c.b_codes()
        src_codes = PERM_Q[p, row_codes]                    # (d, n)
        signs = SYM_Q[src_codes, bq].sum(axis=1) % 2
        for i in range(len(rows)):
            coeff = J[PauliIndex.from_codes(src_codes[i])]
            if coeff:
                entries[i, j] = -coeff if signs[i] else coeff
    return ConjugationMatrix(rows, cols, entries)


def pauli_target(A: SparseHamiltonian, J: SparseHamiltonian, rows) -> TargetVector:
    """Ratio vector M_a = A_a / J_a over rows = nz(J).

    Raises ReachabilityError when the target has a term the system lacks:
    Pauli conjugation can only rescale existing terms.
    """
    rows = tuple(rows)
    missing = [a for a in A.terms if a not in J.terms]
    if missing:
        raise ReachabilityError(
            "target terms absent from the system Hamiltonian: "
            + ", ".join(str(a) for a in sorted(missing)), missing)
    values = np.array([A[a] / J[a] if a in J.terms else 0.0 for a in rows])
    return TargetVector(rows, values)


def direct_m_target(m_spec: dict, rows) -> TargetVector:
    """Per-term multiplier vector; unspecified rows default to 1 (keep the term).

    Entries 0 and -1 cancel or time-reverse a term without knowing its
    strength.
    """
    rows = tuple(rows)
    row_set = set(rows)
    bad = [a for a in m_spec if a not in row_set]
    if bad:
        raise ValueError(f"multiplier specified for unknown row {bad[0]}")
    values = np.array([float(m_spec.get(a, 1.0)) for a in rows])
    return TargetVector(rows, values)


def clifford_target(A: SparseHamiltonian, J: SparseHamiltonian):
    """Rows = suppnz(J) in canonical order and the A coefficients over them."""
    allowed = support_sets(J).suppnz
    missing = [a for a in A.terms if a not in allowed]
    if missing:
        raise ReachabilityError(
            "target terms on supports the system Hamiltonian never touches: "
            + ", ".join(str(a) for a in sorted(missing)), missing)
    rows = tuple(sorted(allowed))
    return rows, TargetVector(rows, A.coefficients(rows))
