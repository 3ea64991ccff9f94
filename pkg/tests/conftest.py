import numpy as np
import pytest

from qwbilliards.spectral import phase_multiset_distance


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def assert_phases_match(got, expected, tol=1e-10):
    """Compare phase multisets on the circle, tolerant of the -pi/+pi branch."""
    dist = phase_multiset_distance(got, expected, branch_tol=max(tol, 1e-12))
    assert dist < tol, f"phase multisets differ by {dist:.3e} (tol {tol:.1e})"
