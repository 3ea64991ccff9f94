"""Quasi-energy spectra: direct diagonalisation and plane-wave matrices.

Eigenphases live on (-pi, pi]; values within 1e-12 of -pi are mapped to
+pi so that spectra landing exactly on the branch cut are deterministic.
The plane-wave builders produce the k-decorated finite matrices whose
eigenphases trace the dispersion bands; hop rows carry e^{-ik} when the
source site lies left of the target and e^{+ik} when it lies right, and
wall rows carry bare coin entries.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lattice import CurvedPath, Kind2Grid
from .operators import UnitaryOperator, verify_unitarity

_REJECT_TOL = 1e-8
_BRANCH_SNAP = 1e-12


class UnitarityError(ValueError):
    """Raised when an operator fails the unitarity or modulus post-check."""


def wrap_phase(phases: np.ndarray | float) -> np.ndarray:
    """Map angles into (-pi, pi], snapping the -pi edge to +pi."""
    p = np.mod(np.asarray(phases, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    p = np.where(p <= -np.pi + _BRANCH_SNAP, p + 2.0 * np.pi, p)
    return p


def phase_multiset_distance(
    a: np.ndarray, b: np.ndarray, branch_tol: float = 1e-9
) -> float:
    """Largest circular mismatch between two equally sized phase multisets.

    Values within ``branch_tol`` of -pi are folded onto +pi before the
    sorted elementwise comparison, so spectra landing exactly on the branch
    cut compare equal regardless of which side numerics put them on.
    """
    pa, pb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if pa.shape != pb.shape:
        raise ValueError(f"phase multisets differ in size: {pa.shape} vs {pb.shape}")

    def canon(p: np.ndarray) -> np.ndarray:
        p = wrap_phase(p)
        return np.sort(np.where(p <= -np.pi + branch_tol, p + 2.0 * np.pi, p))

    d = np.abs(canon(pa) - canon(pb))
    return float(np.max(np.minimum(d, 2.0 * np.pi - d))) if d.size else 0.0


@dataclass(frozen=True)
class SpectrumResult:
    """Sorted eigenphases with the matching eigenvalues and provenance."""

    eigenphases: np.ndarray
    eigenvalues: np.ndarray
    source: str

    @property
    def dim(self) -> int:
        return self.eigenphases.shape[0]


def eigenphases(
    op: UnitaryOperator | np.ndarray, source: str | None = None
) -> SpectrumResult:
    """Full spectrum of a unitary matrix, phases sorted ascending.

    The input must pass the unitarity check and every eigenvalue modulus is
    validated after the solve; deviations above 1e-8 reject the run rather
    than silently trusting the eigensolver.
    """
    if isinstance(op, UnitaryOperator):
        matrix = op.matrix
        label = source or op.label
    else:
        matrix = np.asarray(op, dtype=complex)
        label = source or "matrix"
    defect = verify_unitarity(matrix)
    if defect > _REJECT_TOL:
        raise UnitarityError(
            f"operator '{label}' is not unitary: max|U^dag U - I| = {defect:.3e}"
        )
    values = np.linalg.eigvals(matrix)
    drift = float(np.max(np.abs(np.abs(values) - 1.0)))
    if drift > _REJECT_TOL:
        raise UnitarityError(
            f"eigenvalue modulus drift {drift:.3e} for '{label}' exceeds {_REJECT_TOL}"
        )
    phases = wrap_phase(np.angle(values))
    order = np.argsort(phases, kind="stable")
    return SpectrumResult(phases[order], values[order], label)


class BlochVariant(Enum):
    """Which form of the curved-path substitution to apply.

    LITERAL carries the same e^{i k_path} factor on both hop directions
    and enters the path differences without a k_path coupling;
    PLANE_WAVE_CONSISTENT is the substitution implied by the ansatz
    psi ~ e^{i k_path f(alpha)} e^{i k_alpha alpha}.  The two genuinely
    differ, so both are kept and selected explicitly.
    """

    LITERAL = "literal"
    PLANE_WAVE_CONSISTENT = "planewave"


@dataclass(frozen=True)
class BlochParams:
    """Plane-wave parameters: straight k, curved (k_path, k_alpha), slice alpha."""

    k: float = 0.0
    k_path: float = 0.0
    k_alpha: float = 0.0
    alpha: float = 0.0
    variant: BlochVariant = BlochVariant.LITERAL


def _kind1_pattern(theta: float, plus: complex, minus: complex, sites: int) -> np.ndarray:
    """Kind-1 plane-wave layout with e^{+ik} -> plus, e^{-ik} -> minus."""
    if sites < 2:
        raise ValueError(f"need at least 2 sites, got {sites}")
    c, s = np.cos(theta), np.sin(theta)
    m = np.zeros((2 * sites, 2 * sites), dtype=complex)
    for x in range(sites):
        row_u, row_d = 2 * x, 2 * x + 1
        if x == 0:
            m[row_u, 0] = -s  # left wall: coin down-row, bare
            m[row_u, 1] = c
        else:
            m[row_u, 2 * (x - 1)] = minus * c  # right-mover, source at x-1
            m[row_u, 2 * (x - 1) + 1] = minus * s
        if x == sites - 1:
            m[row_d, 2 * x] = c  # right wall: coin up-row, bare
            m[row_d, 2 * x + 1] = s
        else:
            m[row_d, 2 * (x + 1)] = plus * -s  # left-mover, source at x+1
            m[row_d, 2 * (x + 1) + 1] = plus * c
    return m


def _kind2_pattern(theta: float, plus: complex, minus: complex, sites: int) -> np.ndarray:
    """Kind-2 plane-wave layout assembled from the two-unit hop structure.

    Bulk rows whose source lies two sites left carry ``minus`` and those
    whose source lies two sites right carry ``plus``; the four wall rows
    are bare.  At plus = minus = 1 this is exactly the kind-2 shift times
    the coin.
    """
    grid = Kind2Grid.from_range(0, sites - 1)
    c, s = np.cos(theta), np.sin(theta)
    up_row = np.array([c, s], dtype=complex)
    down_row = np.array([-s, c], dtype=complex)
    m = np.zeros((grid.dim, grid.dim), dtype=complex)

    def put(target: int, spin: int, source: int, factor: complex) -> None:
        row = grid.index(target, spin)
        coin_row = up_row if spin == 0 else down_row
        m[row, grid.index(source, 0)] = factor * coin_row[0]
        m[row, grid.index(source, 1)] = factor * coin_row[1]

    p_l, p_r = grid.even_left, grid.even_right
    i_l, i_r = grid.odd_left, grid.odd_right
    for p in grid.even_sites():
        if p < p_r:
            put(p + 2, 0, p, minus)
        else:
            put(i_r, 0, p, 1.0)
        if p > p_l:
            put(p - 2, 1, p, plus)
        else:
            put(i_l, 1, p, 1.0)
    for i in grid.odd_sites():
        if i > i_l:
            put(i - 2, 0, i, plus)
        else:
            put(p_l, 0, i, 1.0)
        if i < i_r:
            put(i + 2, 1, i, minus)
        else:
            put(p_r, 1, i, 1.0)
    return m


def bloch_kind1(theta: float, k: float, sites: int) -> np.ndarray:
    """Plane-wave matrix of the kind-1 billiard for ``sites`` grid points."""
    return _kind1_pattern(theta, np.exp(1j * k), np.exp(-1j * k), sites)


def bloch_kind2(theta: float, k: float, sites: int) -> np.ndarray:
    """Plane-wave matrix of the kind-2 billiard."""
    return _kind2_pattern(theta, np.exp(1j * k), np.exp(-1j * k), sites)


def bloch_substitution(
    params: BlochParams, path: CurvedPath
) -> tuple[complex, complex]:
    """Replacement factors (for e^{+ik} and e^{-ik}) of a curved path."""
    f = path.path
    a, s = params.alpha, path.step
    df_minus = f(a - s) - f(a)
    df_plus = f(a + s) - f(a)
    if params.variant is BlochVariant.LITERAL:
        plus = np.exp(1j * (params.k_path + df_minus + params.k_alpha))
        minus = np.exp(1j * (params.k_path + df_plus - params.k_alpha))
    else:
        plus = np.exp(1j * (params.k_path * df_plus + params.k_alpha * s))
        minus = np.exp(1j * (params.k_path * df_minus - params.k_alpha * s))
    return complex(plus), complex(minus)


def bloch_curved(
    theta: float, params: BlochParams, path: CurvedPath, kind: int
) -> np.ndarray:
    """Plane-wave matrix of a curved billiard at a fixed slice alpha.

    Starts from the straight layout of the given kind and substitutes the
    e^{+-ik} slots with the unit-modulus factors of the selected variant,
    so the result stays unitary for any parameters.
    """
    plus, minus = bloch_substitution(params, path)
    if kind == 1:
        return _kind1_pattern(theta, plus, minus, path.n_points)
    if kind == 2:
        return _kind2_pattern(theta, plus, minus, path.n_points)
    raise ValueError(f"billiard kind must be 1 or 2, got {kind}")


@dataclass(frozen=True)
class DispersionScan:
    """Eigenphase bands sampled over a momentum range; shape (samples, dim)."""

    k_values: np.ndarray
    bands: np.ndarray
    source: str


def dispersion_scan(
    builder,
    k_min: float,
    k_max: float,
    resolution: int,
    threads: int = 1,
    source: str = "dispersion",
) -> DispersionScan:
    """Sorted eigenphases of ``builder(k)`` at ``resolution`` samples.

    Samples may be diagonalised by a worker pool; rows are assembled in
    sample order regardless of completion order, so output is deterministic.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    ks = np.linspace(k_min, k_max, resolution)

    def solve(k: float) -> np.ndarray:
        return eigenphases(builder(k), source=f"{source}@k={k}").eigenphases

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, ks))
    else:
        rows = [solve(k) for k in ks]
    return DispersionScan(ks, np.vstack(rows), source)


def spectrum_to_csv(result: SpectrumResult) -> str:
    """CSV body ``index,re,im,phase``."""
    lines = ["index,re,im,phase"]
    for i, (value, phase) in enumerate(zip(result.eigenvalues, result.eigenphases)):
        lines.append(f"{i},{value.real:.17g},{value.imag:.17g},{phase:.17g}")
    return "\n".join(lines) + "\n"


def dispersion_to_csv(scan: DispersionScan) -> str:
    """CSV body ``k,band_index,phase``."""
    lines = ["k,band_index,phase"]
    for k, row in zip(scan.k_values, scan.bands):
        for j, phase in enumerate(row):
            lines.append(f"{k:.17g},{j},{phase:.17g}")
    return "\n".join(lines) + "\n"
