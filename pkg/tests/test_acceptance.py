"""Exit criteria for the sampler; each test reports one PASS/FAIL line."""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from perpetuity import RngStream, kernel
from perpetuity.cli import main
from perpetuity.oracle import (
    bisection_reference, coupler_checks, exact_moments, forward_chain_samples,
    inversion_checks, random_points,
)
from perpetuity.sampler import sample_many, sample_with_steps
from perpetuity.stats import empirical_moments, ks_two_sample

SEED = 2012


def report(label, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    sample_many(RngStream(0), 10)


@pytest.fixture(scope="module")
def million():
    start = time.perf_counter()
    samples, steps = sample_with_steps(RngStream(SEED), 10**6)
    return samples, steps, time.perf_counter() - start


def test_1_moments(million):
    samples, _, elapsed = million
    mean, _, var = exact_moments()
    m, v = empirical_moments(samples)
    ok = abs(m - mean) <= 0.0008 and abs(v - var) <= 0.001 and elapsed <= 5.0
    report("1 moments", ok, f"mean {m:.6f} (1/3 +/- 0.0008), variance {v:.6f} "
                            f"(1/45 +/- 0.001), {elapsed:.2f}s <= 5s")


def test_2_ks_against_forward_chain():
    start = time.perf_counter()
    perfect = sample_many(RngStream.for_worker(SEED, 1), 10**5)
    forward = forward_chain_samples(RngStream.for_worker(SEED, 2), 10**5)
    d = ks_two_sample(perfect, forward)
    elapsed = time.perf_counter() - start
    report("2 KS perfect vs forward", d <= 0.01 and elapsed <= 30.0,
           f"D = {d:.5f} <= 0.01, {elapsed:.2f}s <= 30s")


@pytest.fixture(scope="module")
def inversion_reference():
    xs, zs, _, _ = random_points(SEED)
    return bisection_reference(xs, zs)


def test_3_inversion(inversion_reference):
    start = time.perf_counter()
    # includes a fresh bisection pass so the timing covers the whole criterion
    checks = inversion_checks(kernel.inverse_G, SEED)
    elapsed = time.perf_counter() - start
    ok = all(c.passed for c in checks) and elapsed <= 2.0
    detail = ", ".join(f"{c.name} {c.measured:.2e}" for c in checks)
    report("3 inversion oracle", ok, f"{detail} (all <= 1e-9), {elapsed:.2f}s <= 2s")


def test_4_coupler_structure(million):
    checks = {c.name: c for c in coupler_checks(step=1 / 512)}
    _, steps, _ = million
    p0 = float(np.mean(steps == 0))
    ok = (checks["density_lower_bound_on_quarter"].passed
          and checks["decomposition_min_phi_minus_r"].passed
          and abs(p0 - 0.125) <= 0.002)
    report("4 coupler structure", ok,
           f"min phi on [0,1/4] {checks['density_lower_bound_on_quarter'].measured:.6f} >= 0.5, "
           f"min phi-r {checks['decomposition_min_phi_minus_r'].measured:.3g} >= 0, "
           f"P(N=0) {p0:.5f} (0.125 +/- 0.002)")


def test_5_complexity(million):
    _, steps, _ = million
    mean_n, mean_u = float(np.mean(steps)), float(np.mean(steps + 1))
    ok = abs(mean_n - 7) <= 0.05 and abs(mean_u - 8) <= 0.05
    report("5 complexity", ok, f"mean N {mean_n:.4f} (7 +/- 0.05), "
                               f"mean uniforms {mean_u:.4f} (8 +/- 0.05)")


def test_6_figure_histogram(tmp_path):
    out = tmp_path / "fig1.csv"
    start = time.perf_counter()
    code = main(["hist", "--n", "10000000", "--bins", "200", "--seed", "1", "--out", str(out)])
    elapsed = time.perf_counter() - start
    rows = out.read_text().splitlines()
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    area = float(np.sum(data[:, 2] * (data[:, 1] - data[:, 0])))
    low = data[data[:, 1] <= 0.25, 2]
    ok = (code == 0 and elapsed <= 60.0 and rows[0] == "bin_lo,bin_hi,density"
          and data.shape == (200, 3) and abs(area - 1) <= 1e-9
          and low.size == 50 and low.min() >= 0.45)
    # area 1 over [0, 1) means no sample fell outside [0, 1)
    report("6 figure histogram", ok, f"{elapsed:.1f}s <= 60s, {data.shape[0]} bins, "
                                     f"area {area:.12f}, min density on [0,1/4) {low.min():.4f} >= 0.45")


COEFF_COUNT = kernel.INVERSE_COEFFICIENTS.size


def test_7_mutation_sensitivity(inversion_reference):
    survivors = []
    for i in range(COEFF_COUNT):
        for delta in (1e-3, -1e-3):
            c = kernel.INVERSE_COEFFICIENTS.copy()
            c[i] += delta
            checks = inversion_checks(kernel.inverse_G_with(c), SEED, reference=inversion_reference)
            if all(chk.passed for chk in checks):
                survivors.append((i, delta))
    report("7 mutation sensitivity", not survivors,
           f"{2 * COEFF_COUNT - len(survivors)}/{2 * COEFF_COUNT} coefficient perturbations "
           f"of +/-1e-3 caught by criterion 3")
