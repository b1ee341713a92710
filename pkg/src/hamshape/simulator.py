"""Dense unitary simulation of pulse schedules under realistic imperfections.

Every gate layer is realized as two square-root-Pauli pulse generators
S1, S2 with exp(-i S1) exp(-i S2) equal to the layer up to global phase.
A finite pulse duration t_p lets the always-on system Hamiltonian leak
into the pulses; a calibration error epsilon perturbs the system
couplings multiplicatively.  All exponentials go through Hermitian
eigendecomposition, so emitted matrices are unitary to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import SparseHamiltonian, pauli_assemble
from .pauli import _PAULI_2x2, CliffordLabel, PauliIndex, _check_dense
from .rng import stream
from .schedule import PulseSchedule, trotter_expand

QUARTER = math.pi / 4

# per-qubit pulse generators ((coef1, code1), (coef2, code2)) meaning
# s1 = coef1 * P_code1, s2 = coef2 * P_code2, indexed by (p, b-code q).
# Daggered square roots get the negative coefficient; a plain Pauli gate
# is two identical quarter-pulses; the identity gets no pulse at all.
_GEN_TABLE = (
    (((0.0, 0), (0.0, 0)),
     ((QUARTER, 1), (QUARTER, 1)),
     ((QUARTER, 2), (QUARTER, 2)),
     ((QUARTER, 3), (QUARTER, 3))),
    (((QUARTER, 1), (QUARTER, 2)),       # SxSy
     ((-QUARTER, 1), (QUARTER, 2)),      # Sx'Sy
     ((-QUARTER, 1), (-QUARTER, 2)),     # Sx'Sy'
     ((QUARTER, 1), (-QUARTER, 2))),     # SxSy'
    (((-QUARTER, 2), (-QUARTER, 1)),     # Sy'Sx'
     ((QUARTER, 2), (QUARTER, 1)),       # SySx
     ((QUARTER, 2), (-QUARTER, 1)),      # SySx'
     ((-QUARTER, 2), (QUARTER, 1))),     # Sy'Sx
)


@dataclass(frozen=True)
class SimConfig:
    """Imperfection knobs for schedule simulation."""

    t_p: float = 0.0       # finite pulse duration, seconds
    epsilon: float = 0.0   # calibration error strength, dimensionless
    cycles: int = 1        # product-formula cycles for non-commuting schedules
    seed: int = 0

    def __post_init__(self):
        if self.t_p < 0:
            raise ValueError("pulse duration must be non-negative")
        if not 0 <= self.epsilon < 1:
            raise ValueError("calibration error must lie in [0, 1)")
        if self.cycles < 1:
            raise ValueError("cycle count must be at least 1")

    @classmethod
    def from_rabi(cls, omega_rabi: float, **kwargs) -> "SimConfig":
        """Pulse duration from a Rabi frequency: t_p = pi / Omega."""
        return cls(t_p=math.pi / omega_rabi, **kwargs)


def expm_herm(G: np.ndarray) -> np.ndarray:
    """exp(-i G) for Hermitian G, via eigendecomposition (exactly unitary)."""
    w, V = np.linalg.eigh(G)
    return (V * np.exp(-1j * w)) @ V.conj().T


def _embed(n: int, qubit: int, op: np.ndarray) -> np.ndarray:
    """Single-qubit operator on the given qubit (qubit 1 = index 0, leftmost factor)."""
    m = np.array([[1.0 + 0j]])
    for i in range(n):
        m = np.kron(m, op if i == qubit else np.eye(2))
    return m


def pulse_generators(c: CliffordLabel):
    """Dense Hermitian (S1, S2) with exp(-iS1) exp(-iS2) = the layer up to phase."""
    _check_dense(c.n)
    dim = 1 << c.n
    S1 = np.zeros((dim, dim), dtype=complex)
    S2 = np.zeros((dim, dim), dtype=complex)
    bq = c.b_codes()
    for i in range(c.n):
        (c1, q1), (c2, q2) = _GEN_TABLE[c.p[i]][bq[i]]
        if c1:
            S1 += c1 * _embed(c.n, i, _PAULI_2x2[q1])
        if c2:
            S2 += c2 * _embed(c.n, i, _PAULI_2x2[q2])
    return S1, S2


def evolution_block(S1: np.ndarray, S2: np.ndarray, lam: float, t: float,
                    t_p: float, H: np.ndarray) -> np.ndarray:
    """One conjugated free-evolution block with finite-duration pulses.

    The five factors, applied right to left: conjugating pulse pair, free
    evolution for t*lam, un-conjugating pulse pair; during each pulse the
    system Hamiltonian stays on for an effective t_p / 2.
    """
    Hp = (t_p / 2.0) * H
    return (expm_herm(-S2 + Hp) @ expm_herm(-S1 + Hp)
            @ expm_herm(t * lam * H)
            @ expm_herm(S1 + Hp) @ expm_herm(S2 + Hp))


def simulate_schedule(s: PulseSchedule, cfg: SimConfig,
                      system: SparseHamiltonian) -> np.ndarray:
    """Dense unitary actually implemented by the schedule on this system.

    Commuting schedules are run block by block as-is; non-commuting ones
    are expanded into the second-order product formula with cfg.cycles
    (unless the schedule was expanded already).
    """
    _check_dense(s.n)
    if s.n != system.n:
        raise ValueError("schedule and system qubit counts differ")
    if not s.commuting and s.cycles == 1 and cfg.cycles > 1:
        s = trotter_expand(s, cfg.cycles)
    H = pauli_assemble(system)
    dim = 1 << s.n
    U = np.eye(dim, dtype=complex)
    for layer, lam in s.blocks:
        S1, S2 = pulse_generators(layer)
        U = evolution_block(S1, S2, lam, s.t, cfg.t_p, H) @ U
    return U


def target_unitary(target: SparseHamiltonian, t: float) -> np.ndarray:
    """Ideal evolution exp(-i t H_T)."""
    return expm_herm(t * pauli_assemble(target))


def avg_gate_infidelity(U_sim: np.ndarray, U_T: np.ndarray) -> float:
    """1 - (|Tr(U_T^dag U_sim)|^2 / d + 1) / (d + 1); phase-invariant, in [0, 1]."""
    if U_sim.shape != U_T.shape:
        raise ValueError("unitaries must have equal dimension")
    d = U_sim.shape[0]
    overlap = abs(np.trace(U_T.conj().T @ U_sim)) ** 2 / d
    infid = 1.0 - (overlap + 1.0) / (d + 1.0)
    return float(min(max(infid, 0.0), 1.0))


def perturb_couplings(J: SparseHamiltonian, epsilon: float,
                      seed: int, *key: int) -> SparseHamiltonian:
    """Each coefficient times an independent uniform draw from [1-eps, 1+eps].

    Draws follow the canonical term order, so the result is deterministic
    per (seed, key) regardless of dict insertion order.
    """
    if not 0 <= epsilon < 1:
        raise ValueError("calibration error must lie in [0, 1)")
    if epsilon == 0:
        return J
    rng = stream(seed, *key)
    indices = J.indices()
    factors = rng.uniform(1.0 - epsilon, 1.0 + epsilon, size=len(indices))
    return SparseHamiltonian(J.n, {a: J[a] * f for a, f in zip(indices, factors)})


@dataclass(frozen=True)
class CouplingModel:
    """Ion-chain ZZ coupling model: power-law surrogate or explicit matrix.

    The surrogate keeps the (B1/omega)^2 scaling of gradient-induced
    couplings, normalized so the reference point (B1 = 40 T/m,
    omega = 2*pi*400 kHz) has nearest-neighbour strength J0.
    """

    n: int
    J0: float = 1.0                      # nearest-neighbour scale, Hz
    B1: float = 40.0                     # magnetic gradient, T/m
    omega: float = 2 * math.pi * 4e5     # trap frequency, rad/s
    alpha: float = 3.0                   # power-law falloff exponent
    matrix: np.ndarray | None = None     # explicit symmetric couplings, Hz

    _REF_B1 = 40.0
    _REF_OMEGA = 2 * math.pi * 4e5

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two ions")
        if self.matrix is not None:
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (self.n, self.n):
                raise ValueError("coupling matrix has wrong shape")
            if not np.all(np.isfinite(m)):
                raise ValueError("non-finite couplings")
            if np.any(m != m.T) or np.any(np.diag(m) != 0):
                raise ValueError("coupling matrix must be symmetric with zero diagonal")
            object.__setattr__(self, "matrix", m)

    def coupling(self, i: int, j: int) -> float:
        """J_ij between ions i < j (0-based)."""
        if self.matrix is not None:
            return float(self.matrix[i, j])
        scale = (self.B1 / self._REF_B1) ** 2 * (self._REF_OMEGA / self.omega) ** 2
        return self.J0 * scale / abs(i - j) ** self.alpha


def ion_trap_couplings(m: CouplingModel) -> SparseHamiltonian:
    """H_S = -sum_{i<j} J_ij Z_i Z_j over all ion pairs."""
    terms = {}
    for i in range(m.n):
        for j in range(i + 1, m.n):
            coeff = m.coupling(i, j)
            if coeff:
                terms[PauliIndex(m.n, 0, (1 << i) | (1 << j))] = -coeff
    return SparseHamiltonian(m.n, terms)
