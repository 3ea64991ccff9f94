"""Grids, spin, walker states and path functions.

All index and ordering conventions used by the rest of the package live
here.  Basis states are laid out site-major with the spin minor, so the
flattened index of (site x, spin s) is ``2 * (x - n_left) + s``.  Every
value is immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Callable, Union

import numpy as np


class Spin(IntEnum):
    """Internal coin state.  UP flattens to offset 0, DOWN to offset 1."""

    UP = 0
    DOWN = 1


@dataclass(frozen=True)
class Grid1D:
    """Contiguous integer sites ``n_left .. n_right`` (both inclusive)."""

    n_left: int
    n_right: int

    def __post_init__(self) -> None:
        if self.n_left >= self.n_right:
            raise ValueError(
                f"grid needs n_left < n_right, got {self.n_left}..{self.n_right}"
            )

    @property
    def size(self) -> int:
        return self.n_right - self.n_left + 1

    @property
    def dim(self) -> int:
        """Hilbert-space dimension: two spin components per site."""
        return 2 * self.size

    def sites(self) -> np.ndarray:
        return np.arange(self.n_left, self.n_right + 1)

    def __contains__(self, site: int) -> bool:
        return self.n_left <= site <= self.n_right

    def index(self, site: int, spin: Spin | int) -> int:
        if site not in self:
            raise IndexError(f"site {site} outside grid {self.n_left}..{self.n_right}")
        return 2 * (site - self.n_left) + int(spin)

    def site_of(self, index: int) -> tuple[int, Spin]:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside 0..{self.dim - 1}")
        return self.n_left + index // 2, Spin(index % 2)

    def center(self) -> int:
        """Central site; for an even site count, the left of the two middles."""
        return self.n_left + (self.size - 1) // 2


@dataclass(frozen=True)
class Kind2Grid:
    """Two interleaved sublattices covering one contiguous segment.

    The walker of the second bounce mechanism propagates in steps of two
    on the "even" sublattice until a wall transfers it to the "odd" one.
    ``even_left``/``even_right`` bound the starting sublattice and
    ``odd_left``/``odd_right`` the other; the four endpoints must
    interleave so that the union is the contiguous run
    ``even_left .. odd_right``.
    """

    even_left: int
    even_right: int
    odd_left: int
    odd_right: int

    def __post_init__(self) -> None:
        if (self.even_right - self.even_left) % 2 != 0:
            raise ValueError("even sublattice endpoints must share parity")
        if self.odd_left != self.even_left + 1 or self.odd_right != self.even_right + 1:
            raise ValueError(
                "sublattices must interleave: odd_left == even_left + 1 "
                "and odd_right == even_right + 1"
            )
        if self.even_right < self.even_left + 2:
            raise ValueError("each sublattice needs at least two sites")

    @classmethod
    def from_range(cls, n_left: int, n_right: int) -> "Kind2Grid":
        """Interleaved grid on the contiguous sites ``n_left .. n_right``."""
        count = n_right - n_left + 1
        if count % 2 != 0:
            raise ValueError(f"total site count must be even, got {count}")
        return cls(n_left, n_right - 1, n_left + 1, n_right)

    @property
    def n_left(self) -> int:
        return self.even_left

    @property
    def n_right(self) -> int:
        return self.odd_right

    @property
    def size(self) -> int:
        return self.n_right - self.n_left + 1

    @property
    def dim(self) -> int:
        return 2 * self.size

    def sites(self) -> np.ndarray:
        return np.arange(self.n_left, self.n_right + 1)

    def even_sites(self) -> np.ndarray:
        return np.arange(self.even_left, self.even_right + 1, 2)

    def odd_sites(self) -> np.ndarray:
        return np.arange(self.odd_left, self.odd_right + 1, 2)

    def __contains__(self, site: int) -> bool:
        return self.n_left <= site <= self.n_right

    def index(self, site: int, spin: Spin | int) -> int:
        if site not in self:
            raise IndexError(f"site {site} outside grid {self.n_left}..{self.n_right}")
        return 2 * (site - self.n_left) + int(spin)

    def site_of(self, index: int) -> tuple[int, Spin]:
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside 0..{self.dim - 1}")
        return self.n_left + index // 2, Spin(index % 2)

    def center(self) -> int:
        return self.n_left + (self.size - 1) // 2


Grid = Union[Grid1D, Kind2Grid]


class PathTag(Enum):
    LINE = "line"
    SIN = "sin"
    COS = "cos"
    COSH = "cosh"
    TANH = "tanh"
    CUSTOM = "custom"


_EVALUATORS: dict[PathTag, Callable[[float], float]] = {
    PathTag.LINE: lambda a: a,
    PathTag.SIN: math.sin,
    PathTag.COS: math.cos,
    PathTag.COSH: math.cosh,
    PathTag.TANH: math.tanh,
}


@dataclass(frozen=True)
class PathFunction:
    """Shape of a curved billiard: a total real map plus its tag."""

    tag: PathTag
    evaluator: Callable[[float], float]

    @classmethod
    def named(cls, name: str) -> "PathFunction":
        tag = PathTag(name.lower())
        if tag is PathTag.CUSTOM:
            raise ValueError("custom paths need an explicit evaluator")
        return cls(tag, _EVALUATORS[tag])

    @classmethod
    def line(cls) -> "PathFunction":
        return cls(PathTag.LINE, _EVALUATORS[PathTag.LINE])

    @classmethod
    def custom(cls, evaluator: Callable[[float], float]) -> "PathFunction":
        return cls(PathTag.CUSTOM, evaluator)

    def __call__(self, alpha: float) -> float:
        return self.evaluator(alpha)


_CLOSURE_TOL = 1e-9


@dataclass(frozen=True)
class CurvedPath:
    """Discretised parameter range of a billiard path.

    ``step`` is the leap between one grid point and the next; the range
    must close exactly, i.e. ``(alpha_right - alpha_left) / step`` has to
    be a positive integer.  Internally the walk runs on the integer index
    grid ``round(alpha_left / step) + j``; the pair ``(f(alpha), alpha)``
    is carried along as a coordinate decoration only.
    """

    path: PathFunction
    alpha_left: float
    alpha_right: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        ratio = (self.alpha_right - self.alpha_left) / self.step
        if ratio < 0.5 or abs(ratio - round(ratio)) > _CLOSURE_TOL * max(1.0, ratio):
            raise ValueError(
                f"grid does not close: ({self.alpha_right} - {self.alpha_left})"
                f" / {self.step} = {ratio} is not a positive integer"
            )

    @classmethod
    def line(cls, n_left: int, n_right: int) -> "CurvedPath":
        """Straight path on the integer sites ``n_left .. n_right``."""
        return cls(PathFunction.line(), float(n_left), float(n_right), 1.0)

    @property
    def n_steps(self) -> int:
        return round((self.alpha_right - self.alpha_left) / self.step)

    @property
    def n_points(self) -> int:
        return self.n_steps + 1

    @property
    def site_origin(self) -> int:
        """Integer index coordinate of the left end (alpha in step units)."""
        return round(self.alpha_left / self.step)

    def site_grid(self, kind: int) -> Grid:
        """Integer walk grid carrying this path, for the given bounce kind."""
        left = self.site_origin
        right = left + self.n_steps
        if kind == 1:
            return Grid1D(left, right)
        if kind == 2:
            return Kind2Grid.from_range(left, right)
        raise ValueError(f"billiard kind must be 1 or 2, got {kind}")

    def alphas(self) -> np.ndarray:
        return self.alpha_left + self.step * np.arange(self.n_points)

    def coordinates(self) -> np.ndarray:
        """Per-site decoration (f(alpha), alpha), shape (n_points, 2)."""
        a = self.alphas()
        f = np.array([self.path(x) for x in a])
        return np.column_stack([f, a])


@dataclass(frozen=True)
class SpinorState:
    """Complex amplitude field over (site, spin) on a fixed grid."""

    grid: Grid
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.dim,):
            raise ValueError(
                f"amplitude vector must have length {self.grid.dim}, got {amps.shape}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


def make_delta_state(
    grid: Grid, site: int, spin_weights: tuple[complex, complex]
) -> SpinorState:
    """Normalised state supported on the two spin components of one site.

    Raises ``IndexError`` when ``site`` lies outside the grid and
    ``ValueError`` when both weights vanish.
    """
    up, down = complex(spin_weights[0]), complex(spin_weights[1])
    weight = math.hypot(abs(up), abs(down))
    if weight == 0.0:
        raise ValueError("spin weights must not both be zero")
    amps = np.zeros(grid.dim, dtype=complex)
    amps[grid.index(site, Spin.UP)] = up / weight
    amps[grid.index(site, Spin.DOWN)] = down / weight
    return SpinorState(grid, amps)


def centered_default_state(grid: Grid) -> SpinorState:
    """The package default start: weights (1, i)/sqrt(2) at the central site."""
    return make_delta_state(grid, grid.center(), (1.0, 1.0j))


def state_norm(state: SpinorState) -> float:
    return float(np.linalg.norm(state.amplitudes))


def probability_profile(state: SpinorState) -> list[tuple[int, float]]:
    """Per-site probability |up|^2 + |down|^2; sums to the squared norm."""
    probs = site_probabilities(state)
    return [(int(site), float(p)) for site, p in zip(state.grid.sites(), probs)]


def site_probabilities(state: SpinorState) -> np.ndarray:
    """Vector form of :func:`probability_profile`, ordered like ``grid.sites()``."""
    density = np.abs(state.amplitudes) ** 2
    return density.reshape(-1, 2).sum(axis=1)
