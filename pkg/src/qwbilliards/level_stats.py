"""Nearest-neighbour level-spacing statistics.

Spacings are mean-normalised and compared against the two standard
references: the Wigner surmise (pi/2) s exp(-pi s^2 / 4) for level
repulsion and the Poisson density exp(-s) for uncorrelated levels.
No further unfolding is performed beyond the mean normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .spectral import SpectrumResult


@dataclass(frozen=True)
class SpacingSequence:
    """Mean-1 nearest-neighbour spacings after gap exclusion.

    ``excluded_gaps`` holds the raw values removed (largest first) and
    ``raw_mean`` the pre-normalisation mean of the kept spacings.
    """

    spacings: np.ndarray
    excluded_gaps: np.ndarray
    raw_mean: float


@dataclass(frozen=True)
class SpacingHistogram:
    bin_edges: np.ndarray
    densities: np.ndarray


class Verdict(Enum):
    WIGNER_LIKE = "WignerLike"
    POISSON_LIKE = "PoissonLike"
    INCONCLUSIVE = "Inconclusive"


class ClassifyResult(NamedTuple):
    ks_wigner: float
    ks_poisson: float
    verdict: Verdict


def _phases_of(spectrum: SpectrumResult | np.ndarray) -> np.ndarray:
    if isinstance(spectrum, SpectrumResult):
        return np.asarray(spectrum.eigenphases, dtype=float)
    return np.asarray(spectrum, dtype=float)


def spacings_from_spectrum(
    spectrum: SpectrumResult | np.ndarray,
    gaps_to_exclude: int = 0,
    circular: bool = True,
    degeneracy_tolerance: float = 0.0,
) -> SpacingSequence:
    """Consecutive differences of the sorted phases, normalised to mean 1.

    With ``circular`` (the default, since quasi-energies live on a circle)
    the wraparound interval 2 pi - (max - min) is included.  The
    ``gaps_to_exclude`` largest raw spacings are removed first; among equal
    values the one at the lower sorted-phase position goes first.  Exact
    degeneracies stay as zero spacings unless ``degeneracy_tolerance`` is
    set, in which case phases closer than the tolerance are collapsed.
    """
    phases = np.sort(_phases_of(spectrum))
    if degeneracy_tolerance > 0.0 and phases.size:
        keep = np.concatenate([[True], np.diff(phases) > degeneracy_tolerance])
        phases = phases[keep]
    n = phases.size
    if n < 3:
        raise ValueError(f"need at least 3 levels, got {n}")
    if gaps_to_exclude < 0:
        raise ValueError(f"gaps_to_exclude must be nonnegative, got {gaps_to_exclude}")
    if gaps_to_exclude >= n - 1:
        raise ValueError(
            f"cannot exclude {gaps_to_exclude} gaps from {n} levels"
        )
    raw = np.diff(phases)
    if circular:
        raw = np.append(raw, 2.0 * np.pi - (phases[-1] - phases[0]))
    if gaps_to_exclude:
        drop = np.argsort(-raw, kind="stable")[:gaps_to_exclude]
        excluded = raw[drop]
        keep_mask = np.ones(raw.size, dtype=bool)
        keep_mask[drop] = False
        kept = raw[keep_mask]
    else:
        excluded = np.empty(0)
        kept = raw
    mean = float(kept.mean())
    if mean <= 0.0:
        raise ValueError("all remaining spacings are zero; spectrum fully degenerate")
    return SpacingSequence(kept / mean, excluded, mean)


def normalized_sequence(values: np.ndarray) -> SpacingSequence:
    """Wrap raw spacing samples (e.g. synthetic draws) as a mean-1 sequence."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty spacing sample")
    mean = float(v.mean())
    if mean <= 0.0:
        raise ValueError("spacing samples must have positive mean")
    return SpacingSequence(v / mean, np.empty(0), mean)


def wigner_pdf(s):
    """Wigner surmise density (pi/2) s exp(-pi s^2 / 4)."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("spacing must be nonnegative")
    out = 0.5 * np.pi * arr * np.exp(-0.25 * np.pi * arr * arr)
    return out if arr.ndim else float(out)


def poisson_pdf(s):
    """Poisson density exp(-s) of uncorrelated levels."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("spacing must be nonnegative")
    out = np.exp(-arr)
    return out if arr.ndim else float(out)


def wigner_cdf(s):
    arr = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-0.25 * np.pi * arr * arr)


def poisson_cdf(s):
    arr = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-arr)


def histogram(seq: SpacingSequence | np.ndarray, bins: int) -> SpacingHistogram:
    """Density-normalised histogram over [0, max spacing]."""
    spacings = seq.spacings if isinstance(seq, SpacingSequence) else np.asarray(seq)
    if spacings.size == 0:
        raise ValueError("cannot histogram an empty spacing sequence")
    if bins < 1:
        raise ValueError(f"bins must be at least 1, got {bins}")
    top = float(spacings.max())
    if top <= 0.0:
        raise ValueError("spacing sequence has no positive entries")
    densities, edges = np.histogram(spacings, bins=bins, range=(0.0, top), density=True)
    return SpacingHistogram(edges, densities)


def ks_distance(sample: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov sup-distance against a reference CDF."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    ref = cdf(x)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - ref), np.max(ref - steps + 1.0 / n)))


def classify(seq: SpacingSequence, margin: float = 0.05) -> ClassifyResult:
    """KS distances against both references plus the closer-reference verdict.

    The verdict is Inconclusive when the two distances differ by less than
    ``margin``; the procedure has no randomness of its own.
    """
    spacings = seq.spacings
    if spacings.size < 10:
        raise ValueError(f"need at least 10 spacings to classify, got {spacings.size}")
    ks_w = ks_distance(spacings, wigner_cdf)
    ks_p = ks_distance(spacings, poisson_cdf)
    if abs(ks_w - ks_p) < margin:
        verdict = Verdict.INCONCLUSIVE
    elif ks_w < ks_p:
        verdict = Verdict.WIGNER_LIKE
    else:
        verdict = Verdict.POISSON_LIKE
    return ClassifyResult(ks_w, ks_p, verdict)


def sample_poisson_spacings(n: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws from exp(-s), reproducible for a fixed seed."""
    u = np.random.default_rng(seed).random(n)
    return -np.log1p(-u)


def sample_wigner_spacings(n: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws from the Wigner surmise, reproducible for a fixed seed."""
    u = np.random.default_rng(seed).random(n)
    return np.sqrt(-4.0 / np.pi * np.log1p(-u))


def spacings_to_csv(seq: SpacingSequence) -> str:
    """CSV body ``index,spacing``."""
    lines = ["index,spacing"]
    for i, s in enumerate(seq.spacings):
        lines.append(f"{i},{s:.17g}")
    return "\n".join(lines) + "\n"


def histogram_to_csv(hist: SpacingHistogram) -> str:
    """CSV body ``bin_left,bin_right,density``."""
    lines = ["bin_left,bin_right,density"]
    for left, right, d in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.densities):
        lines.append(f"{left:.17g},{right:.17g},{d:.17g}")
    return "\n".join(lines) + "\n"
