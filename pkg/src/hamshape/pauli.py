"""Bit-level Pauli string and single-qubit Clifford algebra.

An n-qubit Pauli string is indexed by a point of F_2^{2n}, split into an
X part ``ax`` and a Z part ``az``.  Both parts are packed into Python
integers with qubit 1 in bit 0, so the symplectic form is a couple of
ANDs and a popcount.  The string

    P(ax, az) = i^(ax.az) X(ax) Z(az)

equals the tensor product of single-qubit Paulis with (x, z) codes

    (0,0) = I,  (1,0) = X,  (1,1) = Y,  (0,1) = Z.

The single-qubit Clifford gates considered here are the identity, the
three Paulis and the nine products of two square-root-Pauli rotations
about X and Y (the C_XY set).  A layer of such gates is labelled by a
per-qubit permutation selector p in {0,1,2} and a sign vector
b in F_2^{2n}: conjugating a Hamiltonian by the layer moves the
coefficient found at index perm_p(a) to index a, with a sign
(-1)^<perm_p(a), b>.  The sign is keyed to the *source* index; for
p = 0 (plain Pauli layers) this reduces to the familiar
(-1)^<a, b> anticommutation sign.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# Dense realizations are meant for verification at small n only.
DENSE_LIMIT = 12

_PAULI_CHARS = "IXYZ"

# quaternary code q <-> (x, z) bit pair, in the order I, X, Y, Z
_Q_TO_XZ = ((0, 0), (1, 0), (1, 1), (0, 1))
_XZ_TO_Q = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}

# local permutations on quaternary codes: identity and the two 3-cycles
# X -> Y -> Z -> X  (p=1)  and its inverse  X -> Z -> Y -> X  (p=2)
PERM_Q = np.array([[0, 1, 2, 3],
                   [0, 2, 3, 1],
                   [0, 3, 1, 2]], dtype=np.int8)
PERM_Q_INV = np.array([[0, 1, 2, 3],
                       [0, 3, 1, 2],
                       [0, 2, 3, 1]], dtype=np.int8)

# symplectic form between two single-qubit codes: x1*z2 + z1*x2 mod 2
SYM_Q = np.array([[(a[0] * b[1] + a[1] * b[0]) % 2 for b in _Q_TO_XZ]
                  for a in _Q_TO_XZ], dtype=np.int8)

# per-qubit gate tokens in table order: p major, b = (0,0),(1,0),(1,1),(0,1)
CLIFFORD_TOKENS = (
    ("I", "X", "Y", "Z"),
    ("SxSy", "Sx'Sy", "Sx'Sy'", "SxSy'"),
    ("Sy'Sx'", "SySx", "SySx'", "Sy'Sx"),
)
_TOKEN_TO_PQ = {tok: (p, q) for p, row in enumerate(CLIFFORD_TOKENS)
                for q, tok in enumerate(row)}


class DenseLimitError(ValueError):
    """Raised when a dense 2^n-dimensional realization is requested for too large n."""


def _check_dense(n: int) -> None:
    if n > DENSE_LIMIT:
        raise DenseLimitError(f"n={n} exceeds dense limit {DENSE_LIMIT}")


@dataclass(frozen=True, order=True)
class PauliIndex:
    """A Pauli string, as a point (ax, az) of F_2^{2n} with qubit 1 in bit 0.

    The declared field order makes sorting lexicographic over (ax, az),
    which is the canonical row/column ordering everywhere in this package.
    """

    n: int
    ax: int
    az: int

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.ax & ~mask or self.az & ~mask or self.ax < 0 or self.az < 0:
            raise ValueError(f"bit vectors do not fit {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliIndex":
        return cls(n, 0, 0)

    @classmethod
    def from_string(cls, s: str) -> "PauliIndex":
        """Parse a string over {I,X,Y,Z}, qubit 1 leftmost."""
        ax = az = 0
        for i, ch in enumerate(s):
            try:
                q = _PAULI_CHARS.index(ch)
            except ValueError:
                raise ValueError(f"invalid Pauli character {ch!r} in {s!r}") from None
            x, z = _Q_TO_XZ[q]
            ax |= x << i
            az |= z << i
        return cls(len(s), ax, az)

    @classmethod
    def from_codes(cls, codes) -> "PauliIndex":
        """Build from a sequence of quaternary codes (0=I,1=X,2=Y,3=Z), qubit 1 first."""
        ax = az = 0
        for i, q in enumerate(codes):
            x, z = _Q_TO_XZ[int(q)]
            ax |= x << i
            az |= z << i
        return cls(len(codes), ax, az)

    def codes(self) -> np.ndarray:
        """Quaternary codes per qubit, qubit 1 first."""
        return np.array([_XZ_TO_Q[(self.ax >> i & 1, self.az >> i & 1)]
                         for i in range(self.n)], dtype=np.int8)

    def __str__(self) -> str:
        return "".join(_PAULI_CHARS[q] for q in self.codes())

    @property
    def support(self) -> frozenset:
        """Qubit positions (0-based) where the string acts non-trivially."""
        return frozenset(i for i in range(self.n) if (self.ax | self.az) >> i & 1)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return bin(self.ax | self.az).count("1")

    @property
    def bit_weight(self) -> int:
        """Hamming weight of (ax, az) as a 2n-bit vector."""
        return bin(self.ax).count("1") + bin(self.az).count("1")

    def is_identity(self) -> bool:
        return self.ax == 0 and self.az == 0


def symplectic_form(a: PauliIndex, b: PauliIndex) -> int:
    """Binary symplectic form <a,b> = ax.bz + az.bx mod 2.

    P_a and P_b commute iff the form vanishes.
    """
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")
    return (bin(a.ax & b.az).count("1") + bin(a.az & b.ax).count("1")) % 2


# dense single-qubit matrices, indexed by quaternary code
_PAULI_2x2 = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_SQRT_Y = 0.5 * np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]])


def _gate_2x2(p: int, q: int) -> np.ndarray:
    """Dense 2x2 gate for a single-qubit label (p, b-code q)."""
    if p == 0:
        return _PAULI_2x2[q]
    sx, sy = _SQRT_X, _SQRT_Y
    sxd, syd = sx.conj().T, sy.conj().T
    if p == 1:
        return ((sx @ sy), (sxd @ sy), (sxd @ syd), (sx @ syd))[q]
    return ((syd @ sxd), (sy @ sx), (sy @ sxd), (syd @ sx))[q]


_GATE_2x2 = tuple(tuple(_gate_2x2(p, q) for q in range(4)) for p in range(3))


def pauli_dense(a: PauliIndex) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the Pauli string (Hermitian, unitary, involutory)."""
    _check_dense(a.n)
    m = np.array([[1.0 + 0j]])
    for q in a.codes():
        m = np.kron(m, _PAULI_2x2[q])
    return m


@dataclass(frozen=True, order=True)
class CliffordLabel:
    """A layer of C_XY single-qubit Clifford gates, labelled by (p, b).

    ``p`` is a tuple of per-qubit permutation selectors in {0,1,2}; the
    sign vector b lives in F_2^{2n} and is packed as (bx, bz) integers
    exactly like a PauliIndex.
    """

    n: int
    p: tuple
    bx: int
    bz: int

    def __post_init__(self):
        if len(self.p) != self.n or any(v not in (0, 1, 2) for v in self.p):
            raise ValueError("p must have one selector in {0,1,2} per qubit")
        mask = (1 << self.n) - 1
        if self.bx & ~mask or self.bz & ~mask or self.bx < 0 or self.bz < 0:
            raise ValueError(f"sign vector does not fit {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "CliffordLabel":
        return cls(n, (0,) * n, 0, 0)

    @classmethod
    def from_pauli(cls, a: PauliIndex) -> "CliffordLabel":
        """The Pauli layer P_a as a Clifford label (p = 0, b = a)."""
        return cls(a.n, (0,) * a.n, a.ax, a.az)

    @classmethod
    def from_tokens(cls, tokens) -> "CliffordLabel":
        """Build from per-qubit gate tokens, qubit 1 first."""
        p, bx, bz = [], 0, 0
        for i, tok in enumerate(tokens):
            try:
                pi, q = _TOKEN_TO_PQ[tok]
            except KeyError:
                raise ValueError(f"unknown gate token {tok!r}") from None
            x, z = _Q_TO_XZ[q]
            p.append(pi)
            bx |= x << i
            bz |= z << i
        return cls(len(p), tuple(p), bx, bz)

    @property
    def b(self) -> PauliIndex:
        return PauliIndex(self.n, self.bx, self.bz)

    def b_codes(self) -> np.ndarray:
        return self.b.codes()

    def tokens(self) -> list:
        """Per-qubit gate tokens, qubit 1 first."""
        bq = self.b_codes()
        return [CLIFFORD_TOKENS[self.p[i]][bq[i]] for i in range(self.n)]

    def __str__(self) -> str:
        return " ".join(self.tokens())

    def is_pauli(self) -> bool:
        return all(v == 0 for v in self.p)

    def is_identity(self) -> bool:
        return self.is_pauli() and self.bx == 0 and self.bz == 0

    def permute(self, a: PauliIndex) -> PauliIndex:
        """Apply the label's local permutations qubit-wise to a Pauli index."""
        return PauliIndex.from_codes(PERM_Q[np.array(self.p), a.codes()])

    def permute_inv(self, a: PauliIndex) -> PauliIndex:
        return PauliIndex.from_codes(PERM_Q_INV[np.array(self.p), a.codes()])


def conjugated_coefficient_index(c: CliffordLabel, a: PauliIndex):
    """Where the coefficient of P_a in S_c^dag H S_c comes from.

    Returns ``(sign, source)`` such that the coefficient at index a after
    conjugating H = sum_b J_b P_b equals sign * J_source, with
    source = perm_p(a) and sign = (-1)^<source, b>.
    """
    if c.n != a.n:
        raise ValueError(f"qubit count mismatch: {c.n} vs {a.n}")
    source = c.permute(a)
    sign = -1 if symplectic_form(source, c.b) else 1
    return sign, source


def clifford_dense(c: CliffordLabel) -> np.ndarray:
    """Dense 2^n x 2^n unitary of the gate layer (tensor product of 2x2 gates)."""
    _check_dense(c.n)
    bq = c.b_codes()
    m = np.array([[1.0 + 0j]])
    for i in range(c.n):
        m = np.kron(m, _GATE_2x2[c.p[i]][bq[i]])
    return m


@functools.lru_cache(maxsize=None)
def all_pauli_indices(n: int, include_identity: bool = False) -> tuple:
    """All 4^n (or 4^n - 1) Pauli indices in canonical order."""
    out = [PauliIndex(n, ax, az) for ax in range(1 << n) for az in range(1 << n)]
    out.sort()
    if not include_identity:
        out = [a for a in out if not a.is_identity()]
    return tuple(out)


def local_indices(n: int, max_weight: int) -> list:
    """All non-identity Pauli indices with support on at most ``max_weight`` qubits."""
    return [a for a in all_pauli_indices(n) if a.weight <= max_weight]
