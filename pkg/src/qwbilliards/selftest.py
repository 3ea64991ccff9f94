"""Built-in verification suite behind the ``selftest`` CLI command.

Each check returns (passed, detail); report-only checks return ``None``
for passed.  The checks are shared with the test suite so that the CLI
and pytest exercise exactly the same oracles.
"""

from __future__ import annotations

import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .billiard2d import Billiard2DSpec, tensor_operator, tensor_spectrum
from .evolution import run
from .lattice import CurvedPath, PathFunction
from .level_stats import (
    Verdict,
    classify,
    histogram,
    normalized_sequence,
    sample_poisson_spacings,
    sample_wigner_spacings,
    spacings_from_spectrum,
)
from .operators import BilliardSpec, ElectricField, compose_step, verify_unitarity
from .spectral import (
    BlochParams,
    BlochVariant,
    bloch_curved,
    bloch_kind1,
    eigenphases,
    phase_multiset_distance,
    wrap_phase,
)

PI = np.pi


def check_unitarity_sweep() -> tuple[bool, str]:
    """Every builder output is unitary across kinds, paths, angles and sizes."""
    thetas = (0.0, PI / 6, PI / 4, PI / 2, PI, 1.0)
    paths = ("line", "sin", "cos", "cosh", "tanh")
    phis = (0.0, 1.0, PI)
    worst, count = 0.0, 0
    for kind in (1, 2):
        for n in range(4, 13):
            if kind == 2 and n % 2:
                continue
            for name in paths:
                cp = CurvedPath(PathFunction.named(name), 0.0, float(n - 1), 1.0)
                for theta in thetas:
                    for phi in phis:
                        spec = BilliardSpec(kind, cp, theta, ElectricField(phi))
                        worst = max(worst, verify_unitarity(compose_step(spec)))
                        count += 1
    return worst < 1e-12, f"{count} operators, worst deviation {worst:.2e} (< 1e-12)"


def check_evolution() -> tuple[bool, str]:
    """70 steps on -35..35: unit frames, confinement, adjoint reversibility."""
    spec = BilliardSpec.straight(1, -35, 35, PI / 4)
    record = run(spec, 70, keep_amplitudes=True)
    sums = record.frames.sum(axis=1)
    sum_err = float(np.max(np.abs(sums - 1.0)))
    confined = record.frames.shape == (71, 71) and bool(np.all(record.frames >= 0.0))
    amps = record.amplitudes[-1].copy()
    adjoint = compose_step(spec).adjoint().matrix
    for _ in range(70):
        amps = adjoint @ amps
    rev_err = float(np.max(np.abs(amps - record.amplitudes[0])))
    ok = sum_err < 1e-12 and confined and rev_err < 1e-10
    return ok, (
        f"frame-sum error {sum_err:.2e} (< 1e-12), reversal error {rev_err:.2e}"
        " (< 1e-10), support confined"
    )


def check_permutation_spectra() -> tuple[bool, str]:
    """Zero-angle walks are permutations with pure root-of-unity spectra."""
    worst = 0.0
    for n in range(2, 9):
        spec = BilliardSpec.straight(1, 0, n - 1, 0.0)
        got = eigenphases(compose_step(spec)).eigenphases
        expected = wrap_phase(2.0 * PI * np.arange(2 * n) / (2 * n))
        worst = max(worst, phase_multiset_distance(got, expected))
    for n in (6, 8):
        spec = BilliardSpec.straight(2, 0, n - 1, 0.0)
        got = eigenphases(compose_step(spec)).eigenphases
        expected = wrap_phase(np.repeat(2.0 * PI * np.arange(n) / n, 2))
        worst = max(worst, phase_multiset_distance(got, expected))
    return worst < 1e-10, f"worst root-of-unity mismatch {worst:.2e} (< 1e-10)"


def check_plane_wave_oracle() -> tuple[bool, str]:
    """Plane-wave matrix: unitary for 1000 random (theta, k); k=0 matches."""
    rng = np.random.default_rng(20240)
    worst_unitarity = 0.0
    for theta, k in rng.uniform(-PI, PI, size=(1000, 2)):
        worst_unitarity = max(worst_unitarity, verify_unitarity(bloch_kind1(theta, k, 5)))
    worst_spec = 0.0
    for theta in (0.3, PI / 4, 1.2, 2.5):
        direct = eigenphases(compose_step(BilliardSpec.straight(1, 0, 4, theta)))
        bloch = eigenphases(bloch_kind1(theta, 0.0, 5))
        worst_spec = max(
            worst_spec,
            phase_multiset_distance(bloch.eigenphases, direct.eigenphases),
        )
    ok = worst_unitarity < 1e-12 and worst_spec < 1e-10
    return ok, (
        f"unitarity {worst_unitarity:.2e} (< 1e-12) over 1000 draws, "
        f"k=0 spectrum mismatch {worst_spec:.2e} (< 1e-10)"
    )


def check_curved_reduction() -> tuple[bool, str]:
    """Line-path substitution collapses onto the straight plane-wave matrix.

    The ansatz-consistent variant reduces entrywise at k = k_path + k_alpha
    for any split.  The literal substitution carries e^{i k_path} on both
    hop directions, so it reduces on the k_path in {0, pi} slice, up to the
    per-site relabeling diag(e^{i step x}).
    """
    sites, step = 5, 1.0
    line = CurvedPath.line(0, sites - 1)
    relabel = np.exp(1j * step * np.repeat(np.arange(sites), 2))
    rng = np.random.default_rng(7)
    worst_lit, worst_pwc = 0.0, 0.0
    for theta in (0.4, PI / 4, 1.1):
        for k_path in (0.0, PI):
            for k_alpha in (-1.3, 0.45, 2.9):
                params = BlochParams(
                    k_path=k_path,
                    k_alpha=k_alpha,
                    alpha=0.7,
                    variant=BlochVariant.LITERAL,
                )
                curved = bloch_curved(theta, params, line, 1)
                target = bloch_kind1(theta, k_path + k_alpha, sites)
                relabeled = (relabel[:, None] * target) * relabel.conj()[None, :]
                worst_lit = max(worst_lit, float(np.max(np.abs(curved - relabeled))))
        for k_path, k_alpha in rng.uniform(-PI, PI, size=(5, 2)):
            params = BlochParams(
                k_path=k_path,
                k_alpha=k_alpha,
                alpha=-1.2,
                variant=BlochVariant.PLANE_WAVE_CONSISTENT,
            )
            curved = bloch_curved(theta, params, line, 1)
            target = bloch_kind1(theta, (k_path + k_alpha) * step, sites)
            worst_pwc = max(worst_pwc, float(np.max(np.abs(curved - target))))
    ok = worst_lit < 1e-14 and worst_pwc < 1e-14
    return ok, (
        f"literal (k_path in {{0, pi}}, after relabeling) {worst_lit:.2e}, "
        f"plane-wave-consistent {worst_pwc:.2e} (both < 1e-14)"
    )


def _tensor_pairs() -> list[Billiard2DSpec]:
    sin5 = CurvedPath(PathFunction.named("sin"), 0.0, 6.0, 1.0)
    cos6 = CurvedPath(PathFunction.named("cos"), 0.0, 5.0, 1.0)
    return [
        Billiard2DSpec(
            BilliardSpec.straight(1, 0, 4, PI / 4),
            BilliardSpec.straight(1, 0, 4, 0.3),
        ),
        Billiard2DSpec(
            BilliardSpec.straight(1, 0, 7, 1.0),
            BilliardSpec.straight(2, 0, 7, PI / 6),
        ),
        Billiard2DSpec(
            BilliardSpec.straight(1, 0, 9, PI / 4),
            BilliardSpec.straight(2, 0, 9, 1.0),
        ),
        Billiard2DSpec(
            BilliardSpec.straight(1, 0, 5, PI / 4, ElectricField(1.0)),
            BilliardSpec.straight(1, 0, 4, 0.9),
        ),
        Billiard2DSpec(
            BilliardSpec(1, sin5, 0.6),
            BilliardSpec(2, cos6, PI / 4),
        ),
    ]


def check_tensor_oracle() -> tuple[bool, str]:
    """Sumset spectra match the materialised Kronecker products."""
    worst, biggest = 0.0, 0
    for pair in _tensor_pairs():
        sumset = tensor_spectrum(pair)
        direct = eigenphases(tensor_operator(pair))
        biggest = max(biggest, direct.dim)
        worst = max(
            worst,
            phase_multiset_distance(
                sumset.eigenphases, direct.eigenphases, branch_tol=1e-9
            ),
        )
    return worst < 1e-9, (
        f"{len(_tensor_pairs())} products up to dim {biggest}, "
        f"worst mismatch {worst:.2e} (< 1e-9)"
    )


def check_statistics_pipeline() -> tuple[bool, str]:
    """Mean-1 spacings, unit-mass histograms, synthetic classification."""
    rng = np.random.default_rng(99)
    worst_mean, worst_hist = 0.0, 0.0
    for i in range(20):
        phases = np.sort(rng.uniform(-PI, PI, 40 + i))
        seq = spacings_from_spectrum(phases, gaps_to_exclude=i % 3, circular=bool(i % 2))
        worst_mean = max(worst_mean, abs(float(seq.spacings.mean()) - 1.0))
        hist = histogram(seq, 1 + i)
        mass = float(np.sum(hist.densities * np.diff(hist.bin_edges)))
        worst_hist = max(worst_hist, abs(mass - 1.0))
    poisson = classify(normalized_sequence(sample_poisson_spacings(10_000, seed=7)))
    wigner = classify(normalized_sequence(sample_wigner_spacings(10_000, seed=11)))
    p_margin = abs(poisson.ks_wigner - poisson.ks_poisson)
    w_margin = abs(wigner.ks_wigner - wigner.ks_poisson)
    ok = (
        worst_mean < 1e-12
        and worst_hist < 1e-10
        and poisson.verdict is Verdict.POISSON_LIKE
        and wigner.verdict is Verdict.WIGNER_LIKE
        and p_margin > 0.05
        and w_margin > 0.05
    )
    return ok, (
        f"mean error {worst_mean:.2e} (< 1e-12), histogram mass error "
        f"{worst_hist:.2e} (< 1e-10), synthetic verdicts {poisson.verdict.value}/"
        f"{wigner.verdict.value} with KS margins {p_margin:.3f}/{w_margin:.3f} (> 0.05)"
    )


def check_gap_exclusion() -> tuple[bool, str]:
    """Excluding g gaps removes exactly the g largest raw spacings."""
    rng = np.random.default_rng(4242)
    for trial in range(100):
        n = int(rng.integers(10, 60))
        phases = np.sort(rng.uniform(-PI, PI, n))
        circular = bool(trial % 2)
        g = int(rng.integers(1, 5))
        raw = np.diff(phases)
        if circular:
            raw = np.append(raw, 2.0 * PI - (phases[-1] - phases[0]))
        seq = spacings_from_spectrum(phases, gaps_to_exclude=g, circular=circular)
        expected_removed = np.sort(raw)[-g:]
        if not np.allclose(np.sort(seq.excluded_gaps), expected_removed, atol=1e-12):
            return False, f"trial {trial}: excluded gaps are not the {g} largest"
        expected_kept = np.sort(raw)[:-g] / np.sort(raw)[:-g].mean()
        if not np.allclose(np.sort(seq.spacings), expected_kept, atol=1e-12):
            return False, f"trial {trial}: kept spacings disagree with sort oracle"
    return True, "100 random spectra agree with the sort-based oracle"


def check_electric_report() -> tuple[None, str]:
    """Report-only: spacing statistics of the electric Line (x) Line billiard."""
    electric = ElectricField(1.0)
    factor = BilliardSpec.straight(1, 0, 11, PI / 4, electric)
    spectrum = tensor_spectrum(Billiard2DSpec(factor, factor))
    seq = spacings_from_spectrum(spectrum, gaps_to_exclude=2)
    result = classify(seq)
    closer = "Poisson" if result.ks_poisson < result.ks_wigner else "Wigner"
    return None, (
        f"Line(x)Line kind-1, N=12, theta=pi/4, phi=1, gaps=2: "
        f"ks_wigner={result.ks_wigner:.4f}, ks_poisson={result.ks_poisson:.4f}, "
        f"verdict={result.verdict.value} ({closer}-closer; regular expected, report only)"
    )


def check_cli_determinism() -> tuple[bool, str]:
    """Identical CLI invocations produce byte-identical CSV/SVG artifacts."""
    from .cli import main  # local import: cli imports this module

    jobs = [
        ["evolve", "--n", "9", "--steps", "12", "--theta", "0.7853981633974483", "--svg"],
        ["dispersion", "--n", "5", "--samples", "24", "--threads", "2", "--svg"],
        [
            "spacing", "--left", "cosh:2", "--right", "cosh:2",
            "--n1", "6", "--n2", "6", "--gaps", "2", "--svg",
        ],
    ]
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        for j, argv in enumerate(jobs):
            out_dir = root / f"job{j}"
            out_dir.mkdir()
            full_argv = argv + ["--output", str(out_dir / f"{argv[0]}.csv")]
            snapshots: list[dict[str, bytes]] = []
            for _ in range(2):
                code = main(full_argv)
                if code != 0:
                    return False, f"{argv[0]} run exited with code {code}"
                snapshots.append(
                    {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
                )
            if snapshots[0] != snapshots[1]:
                return False, f"outputs of {argv[0]} differ between identical runs"
    return True, "evolve/dispersion(threads=2)/spacing reruns are byte-identical"


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool | None
    detail: str


CHECKS: list[tuple[int, str, Callable[[], tuple[bool | None, str]]]] = [
    (1, "unitarity sweep", check_unitarity_sweep),
    (2, "evolution norms and reversibility", check_evolution),
    (3, "permutation spectra", check_permutation_spectra),
    (4, "plane-wave matrix oracle", check_plane_wave_oracle),
    (5, "curved-path reduction", check_curved_reduction),
    (6, "tensor spectrum oracle", check_tensor_oracle),
    (7, "statistics pipeline", check_statistics_pipeline),
    (8, "gap exclusion", check_gap_exclusion),
    (9, "electric billiard report", check_electric_report),
    (10, "CLI determinism", check_cli_determinism),
]


def run_all() -> list[CheckResult]:
    results = []
    for number, name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(number, name, passed, detail))
    return results


def run_selftest(stream=None) -> int:
    stream = stream if stream is not None else sys.stdout
    failed = 0
    for result in run_all():
        if result.passed is None:
            status = "REPORT"
        elif result.passed:
            status = "PASS"
        else:
            status = "FAIL"
            failed += 1
        print(
            f"{status:6s} criterion {result.number:2d}  {result.name}: {result.detail}",
            file=stream,
        )
    verdict = "all checks passed" if not failed else f"{failed} check(s) FAILED"
    print(f"selftest: {verdict}", file=stream)
    return 1 if failed else 0
