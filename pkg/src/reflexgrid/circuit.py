"""Physical layer: a DC source behind an internal resistance feeding N
parallel branches.

Each branch carries one agent's base load, optionally paralleled by that
agent's flexible load.  The single load-bus voltage is the signal the
agents sense; connecting flexible loads pulls it down, disconnecting them
lets it rise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class Branch:
    """One agent's pair of resistances, in ohms."""

    r_base: float
    r_flex: float

    def __post_init__(self):
        if not self.r_base > 0:
            raise ValueError(f"r_base must be positive, got {self.r_base}")
        if not self.r_flex > 0:
            raise ValueError(f"r_flex must be positive, got {self.r_flex}")


@dataclass(frozen=True)
class CircuitConfig:
    r_source: float
    branches: tuple[Branch, ...]

    def __post_init__(self):
        if not self.r_source > 0:
            raise ValueError(f"r_source must be positive, got {self.r_source}")
        if len(self.branches) < 1:
            raise ValueError("at least one branch is required")
        object.__setattr__(self, "branches", tuple(self.branches))

    @staticmethod
    def homogeneous(n: int, r_source: float, r_base: float, r_flex: float) -> "CircuitConfig":
        return CircuitConfig(r_source, tuple(Branch(r_base, r_flex) for _ in range(n)))

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def is_homogeneous(self) -> bool:
        first = self.branches[0]
        return all(b == first for b in self.branches)

    def base_conductances(self) -> np.ndarray:
        return np.array([1.0 / b.r_base for b in self.branches])

    def flex_conductances(self) -> np.ndarray:
        return np.array([1.0 / b.r_flex for b in self.branches])


@dataclass(frozen=True)
class LoadState:
    """Which flexible loads are connected; length matches the circuit."""

    flex_on: tuple[bool, ...]

    @staticmethod
    def of(flags: Sequence[bool]) -> "LoadState":
        return LoadState(tuple(bool(f) for f in flags))

    @property
    def n_on(self) -> int:
        return sum(self.flex_on)


@dataclass(frozen=True)
class CircuitSolution:
    v_load: float
    i_total: float
    branch_currents: tuple[float, ...]


def solve(config: CircuitConfig, v_source: float, loads: LoadState) -> CircuitSolution:
    """Solve the divider: bus voltage, source current, per-branch currents.

    The parallel bank has total conductance G, so the bus sits at
    ``v_source / (1 + r_source * G)``.
    """
    if v_source < 0:
        raise ValueError(f"v_source must be non-negative, got {v_source}")
    if len(loads.flex_on) != config.n_branches:
        raise ValueError(
            f"load state has {len(loads.flex_on)} entries for {config.n_branches} branches"
        )
    on = np.asarray(loads.flex_on, dtype=bool)
    g_branch = config.base_conductances() + np.where(on, config.flex_conductances(), 0.0)
    g_total = float(g_branch.sum())
    v_load = v_source / (1.0 + config.r_source * g_total)
    i_branch = v_load * g_branch
    return CircuitSolution(v_load=v_load, i_total=v_load * g_total, branch_currents=tuple(i_branch))


def v_load_for_count(config: CircuitConfig, v_source: float, n_on: int) -> float:
    """Bus voltage with exactly ``n_on`` flexible loads connected.

    Only defined for homogeneous circuits, where which loads are connected
    does not matter by symmetry.  This is the controller's prediction
    primitive.
    """
    if not config.is_homogeneous:
        raise ValueError("v_load_for_count requires identical branches")
    n = config.n_branches
    if not 0 <= n_on <= n:
        raise ValueError(f"n_on must be in [0, {n}], got {n_on}")
    branch = config.branches[0]
    g_total = n / branch.r_base + n_on / branch.r_flex
    return v_source / (1.0 + config.r_source * g_total)
