"""One-step billiard unitaries.

Builders for the coin, the two boundary-bounce shift mechanisms, their
curved-path variants, the position-dependent electric phase, and the
composed step operator.  All builders are pure functions returning dense
matrices wrapped in :class:`UnitaryOperator`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .lattice import CurvedPath, Grid, Grid1D, Kind2Grid, Spin


class OperatorOrder(Enum):
    """Order of shift and coin inside one step.

    SHIFT_THEN_COIN is the default, U = W C (coin acts first on the state);
    COIN_THEN_SHIFT gives U = C W.  The two are similar, so spectra agree,
    but evolution snapshots differ.
    """

    SHIFT_THEN_COIN = "shift-then-coin"
    COIN_THEN_SHIFT = "coin-then-shift"


@dataclass(frozen=True)
class UnitaryOperator:
    """Dense complex square matrix with a unit-modulus spectrum contract.

    ``label`` records provenance for output metadata; ``site_coordinates``
    optionally carries the (f(alpha), alpha) decoration of curved paths.
    """

    matrix: np.ndarray
    label: str = ""
    site_coordinates: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "UnitaryOperator":
        return UnitaryOperator(self.matrix.conj().T, label=f"adjoint({self.label})")


def coin_matrix(theta: float) -> np.ndarray:
    """The 2x2 coin [[cos t, sin t], [-sin t, cos t]]: orthogonal, det 1."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def verify_unitarity(op: UnitaryOperator | np.ndarray) -> float:
    """Max-abs entry of U^dag U - I.  Callers assert < 1e-12."""
    m = op.matrix if isinstance(op, UnitaryOperator) else np.asarray(op, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def kind1_shift(grid: Grid1D) -> UnitaryOperator:
    """Shift of the first bounce mechanism: the walker flips its spin at a wall.

    Up moves right, down moves left; at the right wall up turns into down on
    the same site, at the left wall down turns into up.  The matrix is a
    permutation forming a single cycle through all 2N basis states.
    """
    W = np.zeros((grid.dim, grid.dim))
    for n in grid.sites():
        if n < grid.n_right:
            W[grid.index(n + 1, Spin.UP), grid.index(n, Spin.UP)] = 1.0
        else:
            W[grid.index(n, Spin.DOWN), grid.index(n, Spin.UP)] = 1.0
        if n > grid.n_left:
            W[grid.index(n - 1, Spin.DOWN), grid.index(n, Spin.DOWN)] = 1.0
        else:
            W[grid.index(n, Spin.UP), grid.index(n, Spin.DOWN)] = 1.0
    return UnitaryOperator(W, label=f"kind1_shift({grid.n_left}..{grid.n_right})")


def kind2_shift(grid: Kind2Grid) -> UnitaryOperator:
    """Shift of the second bounce mechanism: spin is conserved, moves are +-2.

    Spin-up walkers run right on the even sublattice and left on the odd
    one; spin-down walkers do the opposite.  A wall bounce moves one single
    unit, transferring the walker between sublattices without flipping its
    spin.  Each spin sector is one cycle through all sites.
    """
    W = np.zeros((grid.dim, grid.dim))
    p_l, p_r = grid.even_left, grid.even_right
    i_l, i_r = grid.odd_left, grid.odd_right
    up, down = Spin.UP, Spin.DOWN
    for p in grid.even_sites():
        target_up = p + 2 if p < p_r else i_r
        W[grid.index(target_up, up), grid.index(p, up)] = 1.0
        target_down = p - 2 if p > p_l else i_l
        W[grid.index(target_down, down), grid.index(p, down)] = 1.0
    for i in grid.odd_sites():
        target_up = i - 2 if i > i_l else p_l
        W[grid.index(target_up, up), grid.index(i, up)] = 1.0
        target_down = i + 2 if i < i_r else p_r
        W[grid.index(target_down, down), grid.index(i, down)] = 1.0
    return UnitaryOperator(W, label=f"kind2_shift({grid.n_left}..{grid.n_right})")


def curved_shift(path: CurvedPath, kind: int) -> UnitaryOperator:
    """Shift along a curved path.

    The matrix is exactly the straight-line shift of the same kind on the
    integer index grid; the curve only relabels each basis state with the
    coordinate pair (f(alpha), alpha), kept here as metadata.
    """
    grid = path.site_grid(kind)
    base = kind1_shift(grid) if kind == 1 else kind2_shift(grid)
    coords = tuple((float(f), float(a)) for f, a in path.coordinates())
    label = (
        f"curved_shift({path.path.tag.value}, kind={kind}, "
        f"alpha={path.alpha_left}..{path.alpha_right}, step={path.step})"
    )
    return UnitaryOperator(base.matrix, label=label, site_coordinates=coords)


@dataclass(frozen=True)
class ElectricField:
    """Uniform electric phase exp(i phi (x - origin)) applied per site.

    ``origin`` is the site whose phase is fixed to 1; ``None`` selects the
    leftmost site of whatever grid the field is applied to.
    """

    phi: float = 0.0
    origin: int | None = None


def electric_phase(grid: Grid, field: ElectricField) -> UnitaryOperator:
    """Diagonal phase operator, identical on both spin components of a site."""
    origin = grid.n_left if field.origin is None else field.origin
    phases = np.exp(1j * field.phi * (grid.sites() - origin))
    diag = np.repeat(phases, 2)
    return UnitaryOperator(
        np.diag(diag), label=f"electric(phi={field.phi}, origin={origin})"
    )


@dataclass(frozen=True)
class BilliardSpec:
    """Full description of a one-dimensional billiard.

    The walk grid is derived from ``path`` (a straight billiard is a line
    path of step 1); ``kind`` picks the bounce mechanism, ``theta`` the
    coin angle, ``electric`` an optional uniform phase.
    """

    kind: int
    path: CurvedPath
    theta: float
    electric: ElectricField = field(default_factory=ElectricField)
    operator_order: OperatorOrder = OperatorOrder.SHIFT_THEN_COIN

    def __post_init__(self) -> None:
        if self.kind not in (1, 2):
            raise ValueError(f"billiard kind must be 1 or 2, got {self.kind}")
        self.path.site_grid(self.kind)  # validates kind/grid pairing

    @classmethod
    def straight(
        cls,
        kind: int,
        n_left: int,
        n_right: int,
        theta: float,
        electric: ElectricField | None = None,
        operator_order: OperatorOrder = OperatorOrder.SHIFT_THEN_COIN,
    ) -> "BilliardSpec":
        return cls(
            kind,
            CurvedPath.line(n_left, n_right),
            theta,
            electric or ElectricField(),
            operator_order,
        )

    @property
    def grid(self) -> Grid:
        return self.path.site_grid(self.kind)

    def shift_operator(self) -> UnitaryOperator:
        return curved_shift(self.path, self.kind)

    def label(self) -> str:
        parts = [
            f"kind={self.kind}",
            f"path={self.path.path.tag.value}",
            f"sites={self.grid.n_left}..{self.grid.n_right}",
            f"theta={self.theta}",
        ]
        if self.electric.phi:
            parts.append(f"phi={self.electric.phi}")
        if self.operator_order is not OperatorOrder.SHIFT_THEN_COIN:
            parts.append("order=coin-then-shift")
        return "billiard(" + ", ".join(parts) + ")"


def compose_step(spec: BilliardSpec) -> UnitaryOperator:
    """One-step evolution operator E W C (or E C W behind the order switch).

    The coin acts as ``coin_matrix`` on every site's spin pair; the electric
    factor is skipped when phi is zero.
    """
    grid = spec.grid
    shift = spec.shift_operator()
    coin_full = np.kron(np.eye(grid.size), coin_matrix(spec.theta))
    if spec.operator_order is OperatorOrder.SHIFT_THEN_COIN:
        step = shift.matrix @ coin_full
    else:
        step = coin_full @ shift.matrix
    if spec.electric.phi != 0.0:
        step = electric_phase(grid, spec.electric).matrix @ step
    return UnitaryOperator(
        step, label=f"step[{spec.label()}]", site_coordinates=shift.site_coordinates
    )
