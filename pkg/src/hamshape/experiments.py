"""Reusable experiment drivers behind the CLI (and the acceptance suite).

Each driver is deterministic given its seed: replicate k always draws
from the random stream keyed (seed, ..., k), so results do not depend on
execution order.  Drivers return plain lists of dict rows ready for CSV.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .engineering import (build_clifford_matrix, build_pauli_matrix,
                          clifford_target, pauli_target)
from .hamiltonian import SparseHamiltonian
from .lp import (LpProblem, SamplerConfig, check_feasible_matrix,
                 sample_columns, sample_relaxation, solve_min_time,
                 wendel_probability)
from .pauli import CliffordLabel, PauliIndex, all_pauli_indices, local_indices
from .rng import stream
from .schedule import PulseSchedule, build_schedule, merge_pauli_layers
from .simulator import (CouplingModel, SimConfig, avg_gate_infidelity,
                        ion_trap_couplings, perturb_couplings,
                        simulate_schedule, target_unitary)

# ---------------------------------------------------------------------------
# model builders


def two_local_rows(n: int) -> list:
    """All 1- and 2-local Pauli strings: d = 3n + 9*C(n,2)."""
    return local_indices(n, 2)


def grid_edges(side: int) -> list:
    """Edges of a side x side square-lattice grid, as 0-based qubit pairs."""
    if side < 2:
        raise ValueError("side length must be at least 2")
    edges = []
    for r in range(side):
        for c in range(side):
            q = r * side + c
            if c + 1 < side:
                edges.append((q, q + 1))
            if r + 1 < side:
                edges.append((q, q + side))
    return edges


def _pair_index(n: int, i: int, j: int, kind: str) -> PauliIndex:
    bit = (1 << i) | (1 << j)
    if kind == "x":
        return PauliIndex(n, bit, 0)
    if kind == "y":
        return PauliIndex(n, bit, bit)
    return PauliIndex(n, 0, bit)


def lattice_rows(side: int) -> list:
    """The 9 two-local strings per lattice edge (d = 9 |E|)."""
    n = side * side
    rows = []
    for i, j in grid_edges(side):
        bit_i, bit_j = 1 << i, 1 << j
        for qi in (1, 2, 3):
            for qj in (1, 2, 3):
                ax = (bit_i if qi in (1, 2) else 0) | (bit_j if qj in (1, 2) else 0)
                az = (bit_i if qi in (2, 3) else 0) | (bit_j if qj in (2, 3) else 0)
                rows.append(PauliIndex(n, ax, az))
    return sorted(set(rows))


def lattice_system(side: int) -> SparseHamiltonian:
    """Unit-strength ZZ coupling on every edge of the grid."""
    n = side * side
    return SparseHamiltonian(
        n, {_pair_index(n, i, j, "z"): 1.0 for i, j in grid_edges(side)})


def two_local_system(n: int) -> SparseHamiltonian:
    """Unit-strength Z_i and Z_i Z_j terms; suppnz covers all 2-local strings."""
    terms = {PauliIndex(n, 0, 1 << i): 1.0 for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            terms[_pair_index(n, i, j, "z")] = 1.0
    return SparseHamiltonian(n, terms)


def random_ising(n: int, rng, pairs=None, low=0.0, high=1.0) -> SparseHamiltonian:
    """ZZ target with coupling coefficients drawn uniform from [low, high]."""
    if pairs is None:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    terms = {_pair_index(n, i, j, "z"): rng.uniform(low, high) for i, j in pairs}
    return SparseHamiltonian(n, terms)


def random_heisenberg(n: int, rng, pairs=None, low=0.0, high=1.0) -> SparseHamiltonian:
    """XX + YY + ZZ per pair, one uniform coefficient A_ij per pair."""
    if pairs is None:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    terms = {}
    for i, j in pairs:
        coeff = rng.uniform(low, high)
        for kind in ("x", "y", "z"):
            terms[_pair_index(n, i, j, kind)] = coeff
    return SparseHamiltonian(n, terms)


# ---------------------------------------------------------------------------
# engineering driver


@dataclass(frozen=True)
class EngineerResult:
    schedule: PulseSchedule
    objective: float
    d: int
    r: int
    iterations: int
    runtime: float
    attempts: int


def engineer(system: SparseHamiltonian, target: SparseHamiltonian, mode: str,
             t: float = 1.0, ratio: float = 3.0, max_attempts: int = 20,
             seed: int = 0, full_columns: bool = False) -> EngineerResult:
    """End-to-end: reachability check, matrix build, LP solve, schedule."""
    if mode == "pauli":
        rows = tuple(sorted(system.terms))
        tv = pauli_target(target, system, rows)
        if full_columns:
            cols = list(all_pauli_indices(system.n, include_identity=True))
            W = build_pauli_matrix(rows, cols)
            attempts = 0
        else:
            W = sample_relaxation(rows, "pauli", system,
                                  SamplerConfig(ratio, max_attempts, seed))
            attempts = 1
    elif mode == "clifford":
        rows, tv = clifford_target(target, system)
        if full_columns:
            import itertools
            cols = [CliffordLabel(system.n, p, bx, bz)
                    for p in itertools.product(range(3), repeat=system.n)
                    for bx in range(1 << system.n) for bz in range(1 << system.n)]
            W = build_clifford_matrix(system, rows, cols)
            attempts = 0
        else:
            W = sample_relaxation(rows, "clifford", system,
                                  SamplerConfig(ratio, max_attempts, seed))
            attempts = 1
    else:
        raise ValueError(f"unknown mode {mode!r}")
    sol = solve_min_time(LpProblem(W.entries, tv.values))
    if not sol.optimal:
        raise RuntimeError(f"LP did not reach optimality: {sol.status}")
    sched = build_schedule(sol, W.cols, t, system)
    if sched.is_pauli():
        sched = merge_pauli_layers(sched)
    return EngineerResult(sched, sol.objective, W.d, W.r,
                          sol.iterations, sol.runtime, attempts)


# ---------------------------------------------------------------------------
# scans


def feasibility_scan(mode: str, n_list, ratios, replicates: int,
                     seed: int) -> list:
    """Empirical feasibility frequency of sampled conjugation matrices.

    Measures raw i.i.d. column draws (no identity column appended), which
    is what the Wendel prediction models; one row per (n, ratio).
    """
    out = []
    for n in n_list:
        rows = two_local_rows(n)
        d = len(rows)
        J = two_local_system(n) if mode == "clifford" else None
        for ratio in ratios:
            r = math.ceil(ratio * d)
            hits = 0
            for rep in range(replicates):
                rng = stream(seed, n, round(ratio * 1000), rep)
                W = sample_columns(rows, mode, r, rng, J)
                if check_feasible_matrix(W.entries):
                    hits += 1
            freq = hits / replicates
            wendel = wendel_probability(r, d)
            out.append({"mode": mode, "n": n, "d": d, "ratio": ratio, "r": r,
                        "frequency": freq, "wendel": wendel,
                        "difference": freq - wendel})
    return out


def relaxation_scan(n: int, ratios, replicates: int, seed: int,
                    nested: bool) -> list:
    """Mean optimal objective vs relaxation size r for fixed 2-local instances.

    nested=True grows one feasible column set by appending fresh columns
    (objectives provably non-increasing); nested=False redraws an
    independent feasible set per ratio.
    """
    rows = two_local_rows(n)
    d = len(rows)
    ratios = sorted(ratios)
    objectives = {ratio: [] for ratio in ratios}
    for rep in range(replicates):
        rng = stream(seed, 0, rep)
        M = rng.uniform(-1.0, 1.0, size=d)
        if nested:
            base = sample_relaxation(rows, "pauli", None,
                                     SamplerConfig(ratios[0], 50, stream(seed, 1, rep).integers(1 << 32)))
            cols = list(base.cols)
            grow_rng = stream(seed, 2, rep)
            for ratio in ratios:
                r = math.ceil(ratio * d)
                while len(cols) < r:
                    extra = sample_columns(rows, "pauli", r - len(cols), grow_rng)
                    cols.extend(extra.cols)
                W = build_pauli_matrix(rows, cols[:max(r, len(base.cols))])
                sol = solve_min_time(LpProblem(W.entries, M))
                objectives[ratio].append(sol.objective if sol.optimal else math.nan)
        else:
            for ratio in ratios:
                W = sample_relaxation(
                    rows, "pauli", None,
                    SamplerConfig(ratio, 50, stream(seed, 3, rep, round(ratio * 1000)).integers(1 << 32)))
                sol = solve_min_time(LpProblem(W.entries, M))
                objectives[ratio].append(sol.objective if sol.optimal else math.nan)
    out = []
    for ratio in ratios:
        vals = np.array(objectives[ratio])
        out.append({"n": n, "d": d, "ratio": ratio, "r": math.ceil(ratio * d),
                    "nested": nested, "mean_objective": float(np.nanmean(vals)),
                    "std_objective": float(np.nanstd(vals))})
    return out


def lattice_bench(sides, ratio: float, replicates: int, seed: int) -> list:
    """Clifford-mode LP benchmark on square-lattice ZZ systems."""
    out = []
    for side in sides:
        J = lattice_system(side)
        rows = lattice_rows(side)
        d = len(rows)
        objs, times, iters, excess = [], [], [], []
        for rep in range(replicates):
            W = sample_relaxation(rows, "clifford", J,
                                  SamplerConfig(ratio, 20, stream(seed, side, rep).integers(1 << 32)))
            A = stream(seed, side, rep, 1).uniform(-1.0, 1.0, size=d)
            t0 = time.perf_counter()
            sol = solve_min_time(LpProblem(W.entries, A))
            wall = time.perf_counter() - t0
            if not sol.optimal:
                raise RuntimeError(f"lattice LP not optimal: {sol.status}")
            objs.append(sol.objective)
            times.append(wall)
            iters.append(sol.iterations)
            excess.append(sol.objective - float(np.max(np.abs(A))))
        out.append({"side": side, "n": side * side,
                    "edges": len(grid_edges(side)), "d": d,
                    "r": math.ceil(ratio * d),
                    "mean_objective": float(np.mean(objs)),
                    "std_objective": float(np.std(objs)),
                    "mean_seconds": float(np.mean(times)),
                    "std_seconds": float(np.std(times)),
                    "max_seconds": float(np.max(times)),
                    "min_excess": float(np.min(excess)),
                    "mean_iterations": float(np.mean(iters))})
    return out


# ---------------------------------------------------------------------------
# simulation sweeps


def _replicate_schedule(n: int, kind: str, mode: str, system: SparseHamiltonian,
                        t: float, ratio: float, seed: int, rep: int):
    rng = stream(seed, 10, rep)
    if kind == "ising":
        target = random_ising(n, rng)
    elif kind == "heisenberg":
        target = random_heisenberg(n, rng)
    else:
        raise ValueError(f"unknown target kind {kind!r}")
    res = engineer(system, target, mode, t=t, ratio=ratio,
                   seed=stream(seed, 11, rep).integers(1 << 32))
    return target, res.schedule


def simulate_sweep(kind: str, mode: str, n: int, t: float, sweep: str, values,
                   replicates: int, seed: int, t_p: float = 0.0,
                   epsilon: float = 0.0, cycles: int = 1,
                   ratio: float = 3.0) -> list:
    """Mean/std infidelity while sweeping one error knob.

    sweep is one of "tp", "epsilon", "cycles", "time"; the system is the
    ion-trap ZZ surrogate on n qubits.  Calibration error perturbs the
    couplings seen by the simulator, not by the scheduler.
    """
    system = ion_trap_couplings(CouplingModel(n))
    reps = []
    for rep in range(replicates):
        reps.append(_replicate_schedule(n, kind, mode, system, t, ratio, seed, rep))
    out = []
    for iv, value in enumerate(values):
        infids = []
        for rep, (target, sched) in enumerate(reps):
            cfg_tp, cfg_eps, cfg_c, cfg_t = t_p, epsilon, cycles, t
            if sweep == "tp":
                cfg_tp = float(value)
            elif sweep == "epsilon":
                cfg_eps = float(value)
            elif sweep == "cycles":
                cfg_c = int(value)
            elif sweep == "time":
                cfg_t = float(value)
            else:
                raise ValueError(f"unknown sweep {sweep!r}")
            if cfg_t != t:
                # lambdas are relative times: rescale the schedule, not the LP
                sched_v = PulseSchedule(sched.n, cfg_t, sched.blocks,
                                        sched.commuting, sched.objective,
                                        pulses=sched.pulses, cycles=sched.cycles)
            else:
                sched_v = sched
            sim_system = perturb_couplings(system, cfg_eps, seed, 12, rep) \
                if cfg_eps else system
            cfg = SimConfig(t_p=cfg_tp, epsilon=cfg_eps, cycles=cfg_c)
            U = simulate_schedule(sched_v, cfg, sim_system)
            UT = target_unitary(target, cfg_t)
            infids.append(avg_gate_infidelity(U, UT))
        out.append({"kind": kind, "mode": mode, "n": n, "sweep": sweep,
                    "value": value, "t": t, "t_p": t_p, "epsilon": epsilon,
                    "cycles": cycles,
                    "mean_infidelity": float(np.mean(infids)),
                    "std_infidelity": float(np.std(infids))})
    return out
