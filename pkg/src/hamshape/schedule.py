"""Pulse schedules: from LP solutions to executable gate-layer sequences.

A schedule is an ordered list of blocks (gate layer, relative evolution
time lambda) plus the total evolution time t in seconds; block i realizes
the evolution under S_i^dag H_S S_i for a duration lambda_i * t.  When the
conjugated Hamiltonians all commute, the blocks implement the target
evolution exactly and the block order is irrelevant; otherwise the block
list is expanded into a second-order product-formula palindrome.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .hamiltonian import SparseHamiltonian
from .lp import PIVOT_TOL, LpSolution
from .pauli import CliffordLabel, PauliIndex

DURATION_TOL = 1e-9


@dataclass(frozen=True)
class PulseSchedule:
    n: int
    t: float                      # total evolution time, seconds
    blocks: tuple                 # ((CliffordLabel, lambda), ...) with lambda > 0
    commuting: bool
    objective: float              # sum of lambdas of the source LP solution
    pulses: tuple | None = None   # merged Pauli pulse layers, when computed
    cycles: int = 1               # product-formula cycles already expanded into blocks

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("total time must be positive")
        for layer, lam in self.blocks:
            if lam <= 0:
                raise ValueError("block durations must be positive")
            if layer.n != self.n:
                raise ValueError("layer qubit count mismatch")

    @property
    def durations(self) -> np.ndarray:
        """Per-block durations in seconds."""
        return np.array([lam * self.t for _, lam in self.blocks])

    def is_pauli(self) -> bool:
        return all(layer.is_pauli() for layer, _ in self.blocks)


def _conjugated_index_sets(blocks, system: SparseHamiltonian):
    """Nonzero Pauli index set of S^dag H_S S for every block layer."""
    nz = sorted(system.terms)
    return [frozenset(layer.permute_inv(a) for a in nz) for layer, _ in blocks]


def _all_cross_pairs_commute(index_sets) -> bool:
    """True iff every term of every block commutes with every term of every other."""
    universe = sorted(set().union(*index_sets)) if index_sets else []
    pos = {a: i for i, a in enumerate(universe)}
    m = len(universe)
    if m == 0:
        return True
    n = universe[0].n
    ax = np.array([[a.ax >> i & 1 for i in range(n)] for a in universe], dtype=np.int64)
    az = np.array([[a.az >> i & 1 for i in range(n)] for a in universe], dtype=np.int64)
    anti = (ax @ az.T + az @ ax.T) % 2                       # (m, m) of bits
    member = np.zeros((len(index_sets), m), dtype=np.int64)
    for i, s in enumerate(index_sets):
        member[i, [pos[a] for a in s]] = 1
    cross = member @ anti @ member.T
    np.fill_diagonal(cross, 0)
    return not np.any(cross)


def build_schedule(sol: LpSolution, cols, t: float,
                   system: SparseHamiltonian) -> PulseSchedule:
    """Turn an optimal LP solution over labelled columns into a schedule.

    Pauli column labels are promoted to Clifford labels with the trivial
    permutation; duplicate labels are fused and blocks are ordered
    canonically so that equal solutions give byte-identical schedules.
    """
    if not sol.optimal:
        raise ValueError(f"cannot schedule a solution with status {sol.status!r}")
    if t <= 0:
        raise ValueError("total time must be positive")
    weights: dict = {}
    for label, lam in zip(cols, sol.lam):
        if lam <= PIVOT_TOL:
            continue
        if isinstance(label, PauliIndex):
            label = CliffordLabel.from_pauli(label)
        weights[label] = weights.get(label, 0.0) + float(lam)
    blocks = tuple(sorted(weights.items()))
    commuting = _all_cross_pairs_commute(_conjugated_index_sets(blocks, system))
    return PulseSchedule(system.n, float(t), blocks, commuting,
                         objective=float(sum(weights.values())))


def merge_pauli_layers(s: PulseSchedule) -> PulseSchedule:
    """Fuse the inverse/next pulse pairs between adjacent Pauli blocks.

    A k-block Pauli schedule needs 2k gate layers when each block carries
    its own conjugate/unconjugate pair; merging leaves k+1 layers
    S_1, S_2 S_1, ..., S_k S_{k-1}, S_k (Pauli products, so each is again
    a single Pauli layer up to phase).
    """
    if not s.is_pauli():
        raise ValueError("merging is defined for all-Pauli schedules only")
    layers = [layer.b for layer, _ in s.blocks]
    pulses = [layers[0]]
    for prev, nxt in zip(layers, layers[1:]):
        pulses.append(PauliIndex(s.n, prev.ax ^ nxt.ax, prev.az ^ nxt.az))
    pulses.append(layers[-1])
    merged = tuple(CliffordLabel.from_pauli(a) for a in pulses)
    return replace(s, pulses=merged)


def trotter_expand(s: PulseSchedule, cycles: int) -> PulseSchedule:
    """Second-order product-formula palindrome with every lambda / (2 * cycles).

    One cycle runs the blocks in reversed order and then in forward order,
    at half weight each; the total duration is preserved.
    """
    if cycles < 1:
        raise ValueError("cycle count must be at least 1")
    half = tuple((layer, lam / (2 * cycles)) for layer, lam in s.blocks)
    cycle = tuple(reversed(half)) + half
    return replace(s, blocks=cycle * cycles, pulses=None, cycles=cycles)


@dataclass(frozen=True)
class EnvelopeSpec:
    """Sampled coupling on/off envelope s(t) >= 0 over one block."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1 or times.size < 2:
            raise ValueError("need matching 1-d time and value samples")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("envelope samples must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.times))

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])


def envelope_adjust(duration: float, env: EnvelopeSpec) -> float:
    """Rescale a block duration for a switched coupling with the given envelope.

    The engineered phase t*lambda must equal lambda_tilde * integral(s), so
    an envelope with mean value below 1 stretches the block accordingly.
    """
    integral = env.integral
    if integral <= 0:
        raise ValueError("envelope integral must be positive")
    return duration * env.span / integral


SCHEDULE_FORMAT = 1


def save_schedule(s: PulseSchedule, path) -> None:
    payload = {
        "format": SCHEDULE_FORMAT,
        "n": s.n,
        "t_seconds": s.t,
        "commuting": s.commuting,
        "objective": s.objective,
        "cycles": s.cycles,
        "blocks": [{"layer": layer.tokens(), "lambda": lam}
                   for layer, lam in s.blocks],
    }
    if s.pulses is not None:
        payload["pulses"] = [layer.tokens() for layer in s.pulses]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_schedule(path) -> PulseSchedule:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != SCHEDULE_FORMAT:
        raise ValueError(f"{path}: unsupported schedule format {payload.get('format')!r}")
    blocks = tuple((CliffordLabel.from_tokens(entry["layer"]), float(entry["lambda"]))
                   for entry in payload["blocks"])
    pulses = None
    if "pulses" in payload:
        pulses = tuple(CliffordLabel.from_tokens(tokens) for tokens in payload["pulses"])
    return PulseSchedule(int(payload["n"]), float(payload["t_seconds"]), blocks,
                         bool(payload["commuting"]), float(payload["objective"]),
                         pulses=pulses, cycles=int(payload.get("cycles", 1)))
