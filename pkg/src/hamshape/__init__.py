"""hamshape: engineer target many-body Hamiltonians from a fixed system.

Workflow: describe the system and target Hamiltonians in the sparse
Pauli basis, build a conjugation matrix over Pauli or Clifford gate
layers, solve the minimum-evolution-time linear program, turn the
solution into a pulse schedule, and verify it with the dense simulator.
"""

from .engineering import (ConjugationMatrix, ReachabilityError, TargetVector,
                          build_clifford_matrix, build_pauli_matrix,
                          clifford_target, direct_m_target, pauli_target)
from .hamiltonian import (COEFF_TOL, SparseHamiltonian, SupportSets, k_locality,
                          load_hamiltonian, pauli_assemble, pauli_decompose,
                          save_hamiltonian, support_sets)
from .lp import (FeasibilityCertificate, LpProblem, LpSolution, SamplerConfig,
                 SamplerExhaustedError, SimplexError, check_feasible_matrix,
                 sample_columns, sample_relaxation, solve_min_time,
                 wendel_probability)
from .pauli import (DENSE_LIMIT, CliffordLabel, DenseLimitError, PauliIndex,
                    all_pauli_indices, clifford_dense,
                    conjugated_coefficient_index, local_indices, pauli_dense,
                    symplectic_form)
from .rng import stream
from .schedule import (EnvelopeSpec, PulseSchedule, build_schedule,
                       envelope_adjust, load_schedule, merge_pauli_layers,
                       save_schedule, trotter_expand)
from .simulator import (CouplingModel, SimConfig, avg_gate_infidelity,
                        evolution_block, expm_herm, ion_trap_couplings,
                        perturb_couplings, pulse_generators, simulate_schedule,
                        target_unitary)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
