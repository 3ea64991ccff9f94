"""Repeated application of a step operator, recording space-time data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SpinorState, centered_default_state, site_probabilities
from .operators import BilliardSpec, UnitaryOperator, compose_step


@dataclass(frozen=True)
class EvolutionRecord:
    """Probability frames of a walk, one per time step including t = 0.

    ``frames`` has shape (steps + 1, site count); ``amplitudes`` is kept
    only on request (reversibility checks need it) and then has shape
    (steps + 1, 2 * site count).
    """

    spec: BilliardSpec
    steps: int
    sites: np.ndarray
    frames: np.ndarray
    amplitudes: np.ndarray | None = None


def step(state: SpinorState, op: UnitaryOperator) -> SpinorState:
    """Apply one step: psi(t+1) = U psi(t).  Norm is preserved."""
    if op.dim != state.amplitudes.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator is {op.dim}, state is "
            f"{state.amplitudes.shape[0]}"
        )
    return SpinorState(state.grid, op.matrix @ state.amplitudes)


def run(
    spec: BilliardSpec,
    steps: int,
    initial: SpinorState | None = None,
    keep_amplitudes: bool = False,
) -> EvolutionRecord:
    """Evolve for ``steps`` steps from ``initial`` (default: centered state).

    Uses repeated matrix-vector products, not matrix powers; the result is
    deterministic and contains ``steps + 1`` frames.
    """
    if steps < 0:
        raise ValueError(f"step count must be nonnegative, got {steps}")
    grid = spec.grid
    if initial is None:
        initial = centered_default_state(grid)
    op = compose_step(spec)
    if op.dim != initial.amplitudes.shape[0]:
        raise ValueError("initial state does not live on the billiard grid")

    frames = np.empty((steps + 1, grid.size))
    amps = np.empty((steps + 1, grid.dim), dtype=complex) if keep_amplitudes else None
    state = initial
    for t in range(steps + 1):
        frames[t] = site_probabilities(state)
        if amps is not None:
            amps[t] = state.amplitudes
        if t < steps:
            state = step(state, op)
    return EvolutionRecord(spec, steps, grid.sites(), frames, amps)


def to_csv(record: EvolutionRecord) -> str:
    """CSV body ``t,site,probability`` in (t-major, site-minor) row order."""
    lines = ["t,site,probability"]
    for t in range(record.steps + 1):
        for site, p in zip(record.sites, record.frames[t]):
            lines.append(f"{t},{site},{p:.17g}")
    return "\n".join(lines) + "\n"
