"""Dense simulator: blocks, infidelity, noise models, coupling generator."""

import math

import numpy as np
import pytest

from hamshape.engineering import build_pauli_matrix, pauli_target
from hamshape.hamiltonian import SparseHamiltonian, pauli_assemble
from hamshape.lp import LpProblem, solve_min_time
from hamshape.pauli import (CliffordLabel, PauliIndex, all_pauli_indices,
                            clifford_dense)
from hamshape.schedule import build_schedule
from hamshape.simulator import (CouplingModel, SimConfig, avg_gate_infidelity,
                                evolution_block, expm_herm, ion_trap_couplings,
                                perturb_couplings, pulse_generators,
                                simulate_schedule, target_unitary)


def idx(s):
    return PauliIndex.from_string(s)


def all_single_labels():
    out = []
    for p in range(3):
        for bx, bz in ((0, 0), (1, 0), (1, 1), (0, 1)):
            out.append(CliffordLabel(1, (p,), bx, bz))
    return out


# ---------------------------------------------------------------------------
# exponentials and pulse generators


def test_expm_herm_is_unitary_and_correct():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    G = (A + A.conj().T) / 2
    U = expm_herm(G)
    assert np.allclose(U @ U.conj().T, np.eye(8), atol=1e-12)
    from scipy.linalg import expm
    assert np.allclose(U, expm(-1j * G), atol=1e-10)


def test_pulse_generators_reproduce_every_gate():
    # e^{-i S1} e^{-i S2} equals the gate layer up to a global phase
    for c in all_single_labels():
        S1, S2 = pulse_generators(c)
        V = expm_herm(S1) @ expm_herm(S2)
        G = clifford_dense(c)
        phase = np.trace(G.conj().T @ V) / 2
        assert abs(abs(phase) - 1) < 1e-12, c.tokens()
        assert np.allclose(V, phase * G, atol=1e-12), c.tokens()


def test_pulse_generators_sqrt_example():
    # sqrt(X)sqrt(Y)' is realized by S1 = (pi/4) X and S2 = -(pi/4) Y
    c = CliffordLabel.from_tokens(["SxSy'"])
    S1, S2 = pulse_generators(c)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(S1, math.pi / 4 * X)
    assert np.allclose(S2, -math.pi / 4 * Y)


def test_pulse_generators_multi_qubit():
    c = CliffordLabel.from_tokens(["X", "I"])
    S1, S2 = pulse_generators(c)
    X1 = np.kron(np.array([[0, 1], [1, 0]], dtype=complex), np.eye(2))
    assert np.allclose(S1, math.pi / 4 * X1)
    assert np.allclose(S2, math.pi / 4 * X1)


# ---------------------------------------------------------------------------
# evolution blocks


def test_block_trivial_cases():
    H = pauli_assemble(SparseHamiltonian.from_strings(1, {"Z": 1.0}))
    zero = np.zeros((2, 2), dtype=complex)
    U = evolution_block(zero, zero, 0.3, 1.0, 0.0, H)
    assert np.allclose(U, expm_herm(0.3 * H), atol=1e-12)
    S1, S2 = pulse_generators(CliffordLabel.from_tokens(["SxSy"]))
    U = evolution_block(S1, S2, 0.0, 1.0, 0.0, H)
    assert np.allclose(U, np.eye(2), atol=1e-12)


def test_block_x_layer_flips_z_evolution():
    # X e^{-i 0.25 Z} X = e^{+i 0.25 Z}
    H = pauli_assemble(SparseHamiltonian.from_strings(1, {"Z": 1.0}))
    S1, S2 = pulse_generators(CliffordLabel.from_tokens(["X"]))
    U = evolution_block(S1, S2, 0.25, 1.0, 0.0, H)
    expect = expm_herm(-0.25 * H)   # e^{+0.25 i Z}
    phase = np.trace(expect.conj().T @ U) / 2
    assert abs(abs(phase) - 1) < 1e-12
    assert np.allclose(U, phase * expect, atol=1e-12)


def test_block_equals_conjugated_evolution_for_clifford_layer():
    rng = np.random.default_rng(2)
    J = SparseHamiltonian.from_strings(2, {"ZZ": 1.0, "XI": 0.3})
    H = pauli_assemble(J)
    c = CliffordLabel.from_tokens(["SxSy", "Sy'Sx"])
    S1, S2 = pulse_generators(c)
    U = evolution_block(S1, S2, 0.4, 1.0, 0.0, H)
    S = clifford_dense(c)
    expect = S.conj().T @ expm_herm(0.4 * H) @ S
    assert np.allclose(U, expect, atol=1e-12)


def test_block_unitarity_with_finite_pulse():
    H = pauli_assemble(SparseHamiltonian.from_strings(2, {"ZZ": 1.0}))
    S1, S2 = pulse_generators(CliffordLabel.from_tokens(["SxSy", "Y"]))
    U = evolution_block(S1, S2, 0.5, 1.0, 1e-3, H)
    assert np.max(np.abs(U @ U.conj().T - np.eye(4))) <= 1e-10


# ---------------------------------------------------------------------------
# infidelity


def test_infidelity_zero_and_phase_invariance():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    Q, _ = np.linalg.qr(A)
    assert avg_gate_infidelity(Q, Q) == pytest.approx(0.0, abs=1e-14)
    assert avg_gate_infidelity(np.exp(0.7j) * Q, Q) == pytest.approx(0.0, abs=1e-14)


def test_infidelity_traceless_case():
    Z = np.diag([1.0, -1.0]).astype(complex)
    assert avg_gate_infidelity(Z, np.eye(2)) == pytest.approx(2 / 3)


def test_infidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        avg_gate_infidelity(np.eye(2), np.eye(4))


# ---------------------------------------------------------------------------
# schedule simulation


def commuting_case(n=3, seed=6, t=0.8):
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    terms = {PauliIndex(n, 0, (1 << i) | (1 << j)): float(rng.uniform(0.3, 1.0))
             for i, j in pairs}
    J = SparseHamiltonian(n, terms)
    A = SparseHamiltonian(n, {a: float(rng.uniform(-1, 1)) for a in terms})
    rows = tuple(sorted(J.terms))
    tv = pauli_target(A, J, rows)
    W = build_pauli_matrix(rows, all_pauli_indices(n, include_identity=True))
    sol = solve_min_time(LpProblem(W.entries, tv.values))
    sched = build_schedule(sol, W.cols, t, J)
    return J, A, sched


def test_simulate_commuting_matches_target():
    J, A, sched = commuting_case()
    assert sched.commuting
    U = simulate_schedule(sched, SimConfig(), J)
    assert avg_gate_infidelity(U, target_unitary(A, sched.t)) <= 1e-9


def test_simulate_unitarity():
    J, A, sched = commuting_case()
    for cfg in (SimConfig(), SimConfig(t_p=1e-4), SimConfig(cycles=3)):
        U = simulate_schedule(sched, cfg, J)
        assert np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) <= 1e-10


def test_simulate_deterministic():
    J, A, sched = commuting_case()
    U1 = simulate_schedule(sched, SimConfig(t_p=1e-4), J)
    U2 = simulate_schedule(sched, SimConfig(t_p=1e-4), J)
    assert np.array_equal(U1, U2)


def test_finite_pulse_infidelity_grows():
    J, A, sched = commuting_case()
    UT = target_unitary(A, sched.t)
    vals = [avg_gate_infidelity(simulate_schedule(sched, SimConfig(t_p=tp), J), UT)
            for tp in (0.0, 1e-5, 1e-4, 1e-3)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_simulate_rejects_mismatched_system():
    J, A, sched = commuting_case()
    other = SparseHamiltonian.from_strings(2, {"ZZ": 1.0})
    with pytest.raises(ValueError):
        simulate_schedule(sched, SimConfig(), other)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(t_p=-1.0)
    with pytest.raises(ValueError):
        SimConfig(epsilon=1.0)
    with pytest.raises(ValueError):
        SimConfig(cycles=0)
    assert SimConfig.from_rabi(math.pi / 62.5e-6).t_p == pytest.approx(62.5e-6)


# ---------------------------------------------------------------------------
# noise models


def test_perturb_couplings_properties():
    J = SparseHamiltonian.from_strings(2, {"ZZ": 1.0, "ZI": -0.5})
    assert perturb_couplings(J, 0.0, 1).terms == J.terms
    eps = 0.1
    P1 = perturb_couplings(J, eps, 7)
    P2 = perturb_couplings(J, eps, 7)
    assert P1.terms == P2.terms                       # deterministic per seed
    P3 = perturb_couplings(J, eps, 8)
    assert P3.terms != P1.terms
    for a, c in J.terms.items():
        ratio = P1[a] / c
        assert 1 - eps <= ratio <= 1 + eps            # in band, sign-preserving


def test_ion_trap_surrogate():
    model = CouplingModel(3)
    h = ion_trap_couplings(model)
    zz = lambda i, j: PauliIndex(3, 0, (1 << i) | (1 << j))
    assert set(h.terms) == {zz(0, 1), zz(1, 2), zz(0, 2)}
    assert h[zz(0, 1)] == pytest.approx(-1.0)         # minus sign of H_S
    assert h[zz(0, 2)] / h[zz(0, 1)] == pytest.approx(1 / 8)   # 1/|i-j|^3


def test_ion_trap_scaling_with_gradient_and_frequency():
    base = ion_trap_couplings(CouplingModel(2))
    doubled = ion_trap_couplings(CouplingModel(2, B1=80.0))
    softer = ion_trap_couplings(CouplingModel(2, omega=2 * math.pi * 8e5))
    a = PauliIndex(2, 0, 3)
    assert doubled[a] / base[a] == pytest.approx(4.0)    # (B1/omega)^2 scaling
    assert softer[a] / base[a] == pytest.approx(0.25)


def test_ion_trap_alpha_zero_uniform():
    h = ion_trap_couplings(CouplingModel(4, alpha=0.0))
    vals = set(round(v, 12) for v in h.terms.values())
    assert len(vals) == 1


def test_ion_trap_explicit_matrix():
    m = np.array([[0.0, 2.0], [2.0, 0.0]])
    h = ion_trap_couplings(CouplingModel(2, matrix=m))
    assert h[PauliIndex(2, 0, 3)] == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        CouplingModel(2, matrix=np.array([[0.0, 1.0], [2.0, 0.0]]))
