"""Sparse Pauli-basis Hamiltonians and dense/sparse conversion.

A Hamiltonian is stored as a map PauliIndex -> real coefficient (Hz).
The identity component is never stored: it only contributes a global
phase to the evolution.  Coefficients are plain angular rates, so the
generated evolution is exp(-i t H) with t in seconds and no hidden 2*pi.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliIndex, pauli_dense, _check_dense

# coefficients smaller than this are numerical dust and get dropped
COEFF_TOL = 1e-12
HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class SparseHamiltonian:
    """Real linear combination of non-identity Pauli strings on n qubits."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for a, coeff in self.terms.items():
            if a.n != self.n:
                raise ValueError(f"term {a} does not act on {self.n} qubits")
            if a.is_identity():
                raise ValueError("identity component must not be stored")
            coeff = float(coeff)
            if not np.isfinite(coeff):
                raise ValueError(f"non-finite coefficient for {a}")
            if abs(coeff) > 0.0:
                clean[a] = coeff
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_strings(cls, n: int, terms: dict) -> "SparseHamiltonian":
        return cls(n, {PauliIndex.from_string(s): c for s, c in terms.items()})

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, a: PauliIndex) -> float:
        return self.terms.get(a, 0.0)

    def indices(self) -> list:
        """Stored indices in canonical order."""
        return sorted(self.terms)

    def coefficients(self, rows) -> np.ndarray:
        """Coefficient vector over an explicit row ordering (0 where absent)."""
        return np.array([self.terms.get(a, 0.0) for a in rows])

    def scaled(self, factor: float) -> "SparseHamiltonian":
        return SparseHamiltonian(self.n, {a: factor * c for a, c in self.terms.items()})


@dataclass(frozen=True)
class SupportSets:
    """nz: stored indices; suppnz: every index sharing a support with one."""

    nz: frozenset
    suppnz: frozenset


def pauli_assemble(h: SparseHamiltonian) -> np.ndarray:
    """Dense Hermitian matrix sum_a J_a P_a."""
    _check_dense(h.n)
    dim = 1 << h.n
    out = np.zeros((dim, dim), dtype=complex)
    for a, coeff in h.terms.items():
        out += coeff * pauli_dense(a)
    return out


def pauli_decompose(matrix: np.ndarray, n: int | None = None) -> SparseHamiltonian:
    """Pauli coefficients J_a = Tr(P_a H) / 2^n of a dense Hermitian matrix.

    The identity component is discarded and coefficients below COEFF_TOL
    are dropped.
    """
    matrix = np.asarray(matrix)
    if n is None:
        n = int(np.log2(matrix.shape[0]))
    if matrix.shape != (1 << n, 1 << n):
        raise ValueError(f"matrix shape {matrix.shape} is not 2^{n} square")
    if np.max(np.abs(matrix - matrix.conj().T)) > HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    _check_dense(n)
    dim = 1 << n
    terms = {}
    for ax in range(dim):
        for az in range(dim):
            if ax == 0 and az == 0:
                continue
            a = PauliIndex(n, ax, az)
            coeff = np.trace(pauli_dense(a) @ matrix).real / dim
            if abs(coeff) > COEFF_TOL:
                terms[a] = coeff
    return SparseHamiltonian(n, terms)


def support_sets(h: SparseHamiltonian) -> SupportSets:
    """The stored index set and its closure under support-preserving relabelling.

    Only supports that actually occur in the Hamiltonian are materialized,
    so |suppnz| stays polynomial for local Hamiltonians.
    """
    nz = frozenset(h.terms)
    supports = {a.support for a in nz}
    suppnz = set()
    for supp in supports:
        qubits = sorted(supp)
        for letters in itertools.product((1, 2, 3), repeat=len(qubits)):
            codes = [0] * h.n
            for q, letter in zip(qubits, letters):
                codes[q] = letter
            suppnz.add(PauliIndex.from_codes(codes))
    return SupportSets(nz=nz, suppnz=frozenset(suppnz))


def k_locality(h: SparseHamiltonian) -> int:
    """Smallest k such that every stored term touches at most k qubits."""
    return max((a.weight for a in h.terms), default=0)


def save_hamiltonian(h: SparseHamiltonian, path) -> None:
    """Write the JSON file format {"n": ..., "terms": [{"pauli", "coeff"}, ...]}."""
    payload = {
        "n": h.n,
        "terms": [{"pauli": str(a), "coeff": c} for a, c in sorted(h.terms.items())],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_hamiltonian(path) -> SparseHamiltonian:
    """Parse the JSON file format; round-trips coefficients bit-exactly."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        n = int(payload["n"])
        raw = payload["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed Hamiltonian file") from exc
    terms = {}
    for entry in raw:
        s = entry["pauli"]
        if len(s) != n:
            raise ValueError(f"{path}: term {s!r} does not have {n} characters")
        a = PauliIndex.from_string(s)
        if a in terms:
            raise ValueError(f"{path}: duplicate term {s!r}")
        terms[a] = float(entry["coeff"])
    return SparseHamiltonian(n, terms)
