import math

import mpmath
import numpy as np
import pytest

from conftest import assert_phases_match
from qwbilliards.lattice import CurvedPath, Kind2Grid, PathFunction
from qwbilliards.operators import BilliardSpec, coin_matrix, compose_step, kind2_shift
from qwbilliards.spectral import (
    BlochParams,
    BlochVariant,
    UnitarityError,
    bloch_curved,
    bloch_kind1,
    bloch_kind2,
    dispersion_scan,
    dispersion_to_csv,
    eigenphases,
    phase_multiset_distance,
    spectrum_to_csv,
    wrap_phase,
)

PI = math.pi


def roots_of_unity(order: int, multiplicity: int = 1) -> np.ndarray:
    return wrap_phase(np.repeat(2.0 * PI * np.arange(order) / order, multiplicity))


def charpoly_coefficients(matrix: np.ndarray) -> list[complex]:
    """Faddeev-LeVerrier recursion; monic coefficients highest power first."""
    n = matrix.shape[0]
    coeffs = [1.0 + 0.0j]
    aux = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        aux = matrix @ aux
        c = -np.trace(aux) / k
        coeffs.append(complex(c))
        aux = aux + c * np.eye(n)
    return coeffs


class TestEigenphases:
    def test_identity(self):
        result = eigenphases(np.eye(4, dtype=complex))
        np.testing.assert_array_equal(result.eigenphases, np.zeros(4))

    def test_kind1_theta_zero_roots_of_unity(self):
        spec = BilliardSpec.straight(1, -2, 2, 0.0)
        result = eigenphases(compose_step(spec))
        assert_phases_match(result.eigenphases, roots_of_unity(10), tol=1e-10)

    def test_kind2_theta_zero_double_roots(self):
        spec = BilliardSpec.straight(2, 0, 5, 0.0)
        result = eigenphases(compose_step(spec))
        assert_phases_match(result.eigenphases, roots_of_unity(6, 2), tol=1e-10)

    def test_sorted_and_complete(self):
        result = eigenphases(compose_step(BilliardSpec.straight(1, 0, 8, 1.0)))
        assert result.dim == 18
        assert np.all(np.diff(result.eigenphases) >= 0)
        assert np.max(np.abs(np.abs(result.eigenvalues) - 1.0)) < 1e-10

    def test_branch_is_plus_pi(self):
        result = eigenphases(np.diag([-1.0 + 0j, 1.0]))
        assert result.eigenphases[-1] == pytest.approx(PI)
        assert np.all(result.eigenphases > -PI)

    def test_rejects_non_unitary(self):
        bad = np.eye(4, dtype=complex)
        bad[0, 0] = 0.5
        with pytest.raises(UnitarityError, match="not unitary"):
            eigenphases(bad)

    def test_permutation_similarity_invariance(self, rng):
        spec = BilliardSpec.straight(1, 0, 6, 0.8)
        U = compose_step(spec).matrix
        base = eigenphases(U).eigenphases
        for _ in range(5):
            perm = rng.permutation(U.shape[0])
            P = np.eye(U.shape[0])[perm]
            shuffled = eigenphases(P @ U @ P.T).eigenphases
            assert_phases_match(shuffled, base, tol=1e-10)


class TestBlochKind1:
    def test_unitarity_random_pairs(self, rng):
        worst = 0.0
        for theta, k in rng.uniform(-PI, PI, size=(300, 2)):
            m = bloch_kind1(theta, k, 5)
            worst = max(worst, np.max(np.abs(m.conj().T @ m - np.eye(10))))
        assert worst < 1e-12

    def test_k_zero_is_the_walk_operator(self):
        for theta in (0.3, PI / 4, 2.0):
            direct = compose_step(BilliardSpec.straight(1, 0, 4, theta)).matrix
            np.testing.assert_allclose(bloch_kind1(theta, 0.0, 5), direct, atol=1e-15)

    def test_k_zero_spectrum_oracle(self):
        for theta in (0.3, PI / 4, 1.2):
            bloch = eigenphases(bloch_kind1(theta, 0.0, 5)).eigenphases
            direct = eigenphases(
                compose_step(BilliardSpec.straight(1, 0, 4, theta))
            ).eigenphases
            assert_phases_match(bloch, direct, tol=1e-10)

    def test_theta_zero_k_zero_permutation_like(self):
        m = bloch_kind1(0.0, 0.0, 5)
        assert set(np.round(np.unique(m.real), 12)) <= {-1.0, 0.0, 1.0}
        assert np.max(np.abs(m.imag)) == 0.0

    def test_hop_phase_placement(self):
        # one e^{-ik} right-mover row, one e^{+ik} left-mover row, bare walls
        k, theta = 0.83, 0.4
        m = bloch_kind1(theta, k, 5)
        c, s = math.cos(theta), math.sin(theta)
        assert m[2, 0] == pytest.approx(np.exp(-1j * k) * c)
        assert m[1, 2] == pytest.approx(np.exp(1j * k) * -s)
        assert m[0, 0] == pytest.approx(-s)
        assert m[9, 9] == pytest.approx(s)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            bloch_kind1(0.3, 0.1, 1)


class TestBlochKind2:
    def test_k_zero_is_shift_times_coin(self):
        for theta in (0.5, PI / 4):
            grid = Kind2Grid.from_range(0, 5)
            direct = kind2_shift(grid).matrix @ np.kron(np.eye(6), coin_matrix(theta))
            np.testing.assert_allclose(bloch_kind2(theta, 0.0, 6), direct, atol=1e-15)

    def test_unitarity(self, rng):
        for theta, k in rng.uniform(-PI, PI, size=(100, 2)):
            m = bloch_kind2(theta, k, 8)
            assert np.max(np.abs(m.conj().T @ m - np.eye(16))) < 1e-12

    def test_straight_bands_are_flat_in_k(self):
        # closed walls mean zero net displacement around every orbit, so the
        # k-decoration of a straight billiard is a pure gauge; the spectrum
        # cannot depend on k (true for kind 1 as well)
        p0 = eigenphases(bloch_kind2(0.7, 0.0, 6)).eigenphases
        for k in (0.4, 1.0, -2.7):
            pk = eigenphases(bloch_kind2(0.7, k, 6)).eigenphases
            assert phase_multiset_distance(p0, pk) < 1e-10


class TestBlochCurved:
    line = CurvedPath.line(0, 4)

    def test_literal_line_reduction(self):
        # The literal substitution keeps e^{+i k_path} on both hop directions,
        # so it collapses onto the straight matrix on the k_path in {0, pi}
        # slice, after relabeling the basis by the per-site phase e^{i step x}.
        relabel = np.exp(1j * np.repeat(np.arange(5), 2))
        for theta in (0.4, PI / 4):
            for k_path in (0.0, PI):
                for k_alpha in (-1.1, 0.6):
                    params = BlochParams(
                        k_path=k_path, k_alpha=k_alpha, alpha=0.3,
                        variant=BlochVariant.LITERAL,
                    )
                    curved = bloch_curved(theta, params, self.line, 1)
                    target = bloch_kind1(theta, k_path + k_alpha, 5)
                    relabeled = (relabel[:, None] * target) * relabel.conj()[None, :]
                    assert np.max(np.abs(curved - relabeled)) < 1e-14

    def test_planewave_line_reduction(self, rng):
        for theta in (0.4, 1.3):
            for k_path, k_alpha in rng.uniform(-PI, PI, size=(6, 2)):
                params = BlochParams(
                    k_path=k_path, k_alpha=k_alpha, alpha=-0.9,
                    variant=BlochVariant.PLANE_WAVE_CONSISTENT,
                )
                curved = bloch_curved(theta, params, self.line, 1)
                target = bloch_kind1(theta, k_path + k_alpha, 5)
                assert np.max(np.abs(curved - target)) < 1e-14

    @pytest.mark.parametrize("variant", list(BlochVariant))
    @pytest.mark.parametrize("kind,points", [(1, 5), (2, 6)])
    def test_unitarity_any_params(self, rng, variant, kind, points):
        path = CurvedPath(PathFunction.named("sin"), 0.0, float(points - 1), 1.0)
        for theta, k_path, k_alpha, alpha in rng.uniform(-PI, PI, size=(25, 4)):
            params = BlochParams(
                k_path=k_path, k_alpha=k_alpha, alpha=alpha, variant=variant
            )
            m = bloch_curved(theta, params, path, kind)
            assert np.max(np.abs(m.conj().T @ m - np.eye(2 * points))) < 1e-12

    @pytest.mark.parametrize("variant", list(BlochVariant))
    def test_sin_slice_periodicity(self, variant):
        path = CurvedPath(PathFunction.named("sin"), 0.0, 4.0, 1.0)
        for alpha in (0.0, 0.7, -2.1):
            a = bloch_curved(
                0.8, BlochParams(k_path=0.5, k_alpha=1.1, alpha=alpha, variant=variant),
                path, 1,
            )
            b = bloch_curved(
                0.8,
                BlochParams(
                    k_path=0.5, k_alpha=1.1, alpha=alpha + 2.0 * PI, variant=variant
                ),
                path, 1,
            )
            np.testing.assert_allclose(a, b, atol=1e-14)

    @pytest.mark.parametrize("variant", list(BlochVariant))
    def test_curved_bands_really_disperse(self, variant):
        # unlike straight billiards, the curved substitution carries genuine
        # k_path dependence (nontrivial holonomy around the bounce orbit)
        path = CurvedPath(PathFunction.named("cos"), 0.0, 5.0, 1.0)
        spectra = []
        for k_path in (0.0, 0.9):
            params = BlochParams(k_path=k_path, k_alpha=0.2, alpha=1.0, variant=variant)
            spectra.append(eigenphases(bloch_curved(0.7, params, path, 2)).eigenphases)
        assert phase_multiset_distance(spectra[0], spectra[1]) > 1e-3

    def test_literal_differs_from_planewave(self):
        path = CurvedPath(PathFunction.named("cos"), 0.0, 5.0, 1.0)
        lit = bloch_curved(
            0.7, BlochParams(k_path=0.9, k_alpha=0.4, alpha=1.0), path, 2
        )
        pwc = bloch_curved(
            0.7,
            BlochParams(
                k_path=0.9, k_alpha=0.4, alpha=1.0,
                variant=BlochVariant.PLANE_WAVE_CONSISTENT,
            ),
            path, 2,
        )
        assert np.max(np.abs(lit - pwc)) > 1e-3


class TestCharPolyOracle:
    @pytest.mark.parametrize("sites", [2, 3, 4, 5])
    def test_roots_match_direct_diagonalization(self, sites):
        # independent route: Faddeev-LeVerrier coefficients + mpmath polyroots
        theta = 0.9
        matrix = compose_step(BilliardSpec.straight(1, 0, sites - 1, theta)).matrix
        coeffs = charpoly_coefficients(matrix)
        roots = mpmath.polyroots(
            [mpmath.mpc(c) for c in coeffs], maxsteps=200, extraprec=120
        )
        oracle = np.sort(wrap_phase(np.array([float(mpmath.arg(r)) for r in roots])))
        direct = eigenphases(matrix).eigenphases
        assert_phases_match(direct, oracle, tol=1e-8)


class TestDispersionScan:
    def test_identity_builder_flat_bands(self):
        scan = dispersion_scan(lambda k: np.eye(4, dtype=complex), -PI, PI, 10)
        np.testing.assert_array_equal(scan.bands, np.zeros((10, 4)))

    def test_shape(self):
        scan = dispersion_scan(lambda k: bloch_kind1(0.6, k, 5), -PI, PI, 100)
        assert scan.k_values.shape == (100,)
        assert scan.bands.shape == (100, 10)
        assert np.all(np.diff(scan.bands, axis=1) >= 0)

    def test_k_reflection_negates_phases(self):
        for theta in (PI / 2, 0.8):
            for k in (0.4, 1.9):
                plus = eigenphases(bloch_kind1(theta, k, 5)).eigenphases
                minus = eigenphases(bloch_kind1(theta, -k, 5)).eigenphases
                assert_phases_match(minus, -plus, tol=1e-10)

    def test_threads_do_not_change_result(self):
        builder = lambda k: bloch_kind2(0.9, k, 6)
        serial = dispersion_scan(builder, -1.0, 1.0, 16, threads=1)
        pooled = dispersion_scan(builder, -1.0, 1.0, 16, threads=4)
        np.testing.assert_array_equal(serial.bands, pooled.bands)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            dispersion_scan(lambda k: np.eye(2, dtype=complex), 0.0, 1.0, 1)


class TestCsv:
    def test_spectrum_csv(self):
        result = eigenphases(compose_step(BilliardSpec.straight(1, 0, 2, 0.4)))
        lines = spectrum_to_csv(result).strip().split("\n")
        assert lines[0] == "index,re,im,phase"
        assert len(lines) == 1 + result.dim
        re, im = (float(x) for x in lines[1].split(",")[1:3])
        assert re == result.eigenvalues[0].real
        assert im == result.eigenvalues[0].imag

    def test_dispersion_csv(self):
        scan = dispersion_scan(lambda k: bloch_kind1(0.5, k, 2), 0.0, 1.0, 3)
        lines = dispersion_to_csv(scan).strip().split("\n")
        assert lines[0] == "k,band_index,phase"
        assert len(lines) == 1 + 3 * 4
