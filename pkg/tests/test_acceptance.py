"""Acceptance gate: ten end-to-end checks of the package's headline claims.

Each test prints one PASS line on success; a failure reports the first
violated bound.  Numerical targets are frozen here, not imported from the
code under test.
"""

import math
import time
import warnings

import numpy as np
import pytest

from spinjc.classical import (
    ClassicalParams,
    PhasePoint,
    canonical_transform,
    critical_coupling_scan,
    find_fixed_points,
    grad,
    h_counter,
    h_rotating,
    integrate_orbit,
    lambda_from_coupling_finite_j,
    separatrix_energy,
    trace_contours,
)
from spinjc.mjc_model import (
    ModelParams,
    ProductBasis,
    build_h_bosonic,
    build_h_two_spin,
)
from spinjc.spectra import blockwise_spectrum, second_difference, spectrum_scan
from spinjc.spin_algebra import HalfInteger

# frozen oracle values
ROTATING_MAX_ENERGY = 4 * math.sqrt(6) / 9  # at (q, p) = (0, 1/3)
LAMBDA_PRIME_CRITICAL = 1 / math.sqrt(2)


def _model(j1, j2, g=0.0, gp=0.0, eps=1.0):
    return ModelParams(
        epsilon=eps,
        g=g,
        gprime=gp,
        j1=HalfInteger.from_value(j1),
        j2=HalfInteger.from_value(j2),
    )


def test_criterion_01_spinorization_isomorphism():
    """Two-spin and bosonic Hamiltonians agree entrywise to 1e-12."""
    t0 = time.time()
    worst = 0.0
    for j1, j2 in [(0.5, 0.5), (0.5, 5), (5, 5), (25, 25)]:
        for g, gp in [(0.5, 0.0), (0.0, 0.5), (1.0, 1.0)]:
            p = _model(j1, j2, g=g, gp=gp)
            delta = np.abs(
                build_h_two_spin(p).entries - build_h_bosonic(p).entries
            ).max()
            worst = max(worst, delta)
            assert delta <= 1e-12, f"(j1={j1}, j2={j2}, g={g}, g'={gp}): {delta:.3e}"
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"took {elapsed:.1f} s"
    print(f"\ncriterion 1 PASS: isomorphism max |delta| = {worst:.3e} in {elapsed:.2f} s")


def test_criterion_02_analytic_doublets():
    """Single-atom rotating spectrum matches eps(n+1/2) +- g sqrt(n+1)."""
    worst = 0.0
    for g in (0.1, 0.3, 1.0):
        p = _model(0.5, 8, g=g)
        spec = blockwise_spectrum(p, "rotating")
        for n in range(11):
            k = n + 0.5  # conserved n + m1 of the doublet
            block = np.sort(spec.eigenvalues[spec.block_values == k])
            split = g * math.sqrt(n + 1)
            expected = np.array([(n + 0.5) - split, (n + 0.5) + split])
            delta = np.abs(block - expected).max()
            worst = max(worst, delta)
            assert delta <= 1e-10, f"g={g}, n={n}: {delta:.3e}"
    print(f"\ncriterion 2 PASS: doublet energies max |delta| = {worst:.3e}")


def test_criterion_03_conservation():
    """[H, N+J1z] = 0 at g'=0 and [H, N-J1z] = 0 at g=0."""
    p_rot = _model(10, 10, g=0.7)
    p_ctr = _model(10, 10, gp=0.7)
    basis = ProductBasis(p_rot.j1, p_rot.j2)
    n_plus = np.diag(basis.occupations() + basis.inversions())
    n_minus = np.diag(basis.occupations() - basis.inversions())
    h_rot = build_h_bosonic(p_rot).entries
    h_ctr = build_h_bosonic(p_ctr).entries
    r1 = np.abs(h_rot @ n_plus - n_plus @ h_rot).max()
    r2 = np.abs(h_ctr @ n_minus - n_minus @ h_ctr).max()
    assert r1 <= 1e-12, f"rotating: {r1:.3e}"
    assert r2 <= 1e-12, f"counter: {r2:.3e}"
    print(f"\ncriterion 3 PASS: commutator residuals {r1:.3e}, {r2:.3e}")


def test_criterion_04_block_completeness():
    """Blockwise eigenvalues equal dense eigenvalues pairwise to 1e-8."""
    worst = 0.0
    for approx, g, gp in [("rotating", 0.6, 0.0), ("counter", 0.0, 0.6)]:
        p = _model(10, 10, g=g, gp=gp)
        dense = np.linalg.eigvalsh(build_h_bosonic(p).entries)
        blocked = np.sort(blockwise_spectrum(p, approx).eigenvalues)
        delta = np.abs(blocked - dense).max()
        worst = max(worst, delta)
        assert delta <= 1e-8, f"{approx}: {delta:.3e}"
    print(f"\ncriterion 4 PASS: block vs dense max |delta| = {worst:.3e}")


def test_criterion_05_large_spin_scans():
    """j1=j2=25 scans complete under 60 s each with sane observables."""
    grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]
    p = _model(25, 25)
    timings = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t0 = time.time()
        rot_curve, rot_obs = spectrum_scan(p, grid, "rotating")
        timings["rotating"] = time.time() - t0
        t0 = time.time()
        ctr_curve, ctr_obs = spectrum_scan(p, grid, "counter")
        timings["counter"] = time.time() - t0
    for name, dt in timings.items():
        assert dt < 60.0, f"{name} scan took {dt:.1f} s"
    for curve in (rot_curve, ctr_curve):
        assert curve.energies.shape == (len(grid), 51 * 51)
        assert np.all(np.isfinite(curve.energies))
        assert np.all(np.diff(curve.energies, axis=1) >= -1e-12)
    assert ctr_obs.values[0] == pytest.approx(0.0, abs=1e-12)
    assert ctr_obs.values[-1] > 0.0
    print(
        f"\ncriterion 5 PASS: rotating {timings['rotating']:.1f} s, counter "
        f"{timings['counter']:.1f} s, <n> 0 -> {ctr_obs.values[-1]:.2f}"
    )


def test_criterion_06_rotating_maximum():
    """Maximum of the rotating reduced Hamiltonian at lambda = 1."""
    fps = find_fixed_points("rotating", ClassicalParams(lam=1.0))
    top = max(fps, key=lambda f: f.energy)
    dq = abs(top.point.q)
    dp = abs(top.point.p - 1 / 3)
    de = abs(top.energy - ROTATING_MAX_ENERGY)
    assert dq <= 1e-8 and dp <= 1e-8, f"location off by ({dq:.2e}, {dp:.2e})"
    assert de <= 1e-8, f"value off by {de:.2e}"
    print(f"\ncriterion 6 PASS: maximum 4*sqrt(6)/9 located to {max(dq, dp, de):.2e}")


def test_criterion_07_bifurcation():
    """critical_coupling_scan finds lambda'_c = 1/sqrt(2) within 1e-3."""
    lam_c = critical_coupling_scan(tol=1e-4)
    delta = abs(lam_c - LAMBDA_PRIME_CRITICAL)
    assert delta <= 1e-3, f"lambda'_c = {lam_c:.6f}, off by {delta:.2e}"
    print(f"\ncriterion 7 PASS: lambda'_c = {lam_c:.6f} (delta {delta:.1e})")


def test_criterion_08_saddle_separatrix():
    """Stated target: a saddle at (pi, -0.476837), separatrix energy
    -1.112622, and a traced contour through it.

    This fails honestly: the q = pi branch point at lambda' = 1 is a
    local minimum (positive-definite Hessian), its momentum is
    -0.47683362... (3.4e-6 away from the six-digit target), and the
    level set at its energy is a single point, so no contour passes
    through it.  The failure is kept visible rather than papered over.
    """
    fps = find_fixed_points("counter", ClassicalParams(lam_prime=1.0))
    branch = [f for f in fps if abs(f.point.q) > 2.0]
    assert branch, "no q = pi branch point found"
    fp = branch[0]
    assert fp.kind == "saddle", f"branch point is a {fp.kind}, not a saddle"
    assert abs(fp.point.p - (-0.476837)) <= 1e-6
    energy = separatrix_energy(ClassicalParams(lam_prime=1.0))
    assert abs(energy - (-1.112622)) <= 1e-6
    contours = trace_contours(
        "counter", ClassicalParams(lam_prime=1.0), [energy], n_q=512, n_p=512
    )
    cell = math.hypot(2 * math.pi / 511, 2.0 / 511)
    near = any(
        np.hypot(poly[:, 0] - fp.point.q, poly[:, 1] - fp.point.p).min() <= cell
        for poly in contours[0].polylines
    )
    assert near, "no contour vertex within one grid cell of the branch point"
    print("\ncriterion 8 PASS: saddle, separatrix energy, and contour as stated")


def test_criterion_09_numerical_hygiene():
    """Gradients vs finite differences, orbit drift, symplectic Jacobian."""
    rng = np.random.default_rng(2026)
    params = ClassicalParams(lam=1.0, lam_prime=1.0)
    worst = 0.0
    for which in ("rotating", "counter"):
        h = h_rotating if which == "rotating" else h_counter
        for _ in range(500):
            q = rng.uniform(-math.pi, math.pi)
            p = rng.uniform(-0.95, 0.95)
            gq, gp = grad(which, PhasePoint(q=q, p=p), params)
            eps = 1e-6
            fd_q = (h(p, q + eps, 1.0) - h(p, q - eps, 1.0)) / (2 * eps)
            fd_p = (h(p + eps, q, 1.0) - h(p - eps, q, 1.0)) / (2 * eps)
            scale = max(1.0, abs(fd_q), abs(fd_p))
            err = max(abs(gq - fd_q), abs(gp - fd_p)) / scale
            worst = max(worst, err)
            assert err <= 1e-6, f"{which} at (q={q:.3f}, p={p:.3f}): {err:.2e}"

    traj = integrate_orbit(
        "rotating",
        ClassicalParams(lam=1.0),
        PhasePoint(q=0.5, p=0.0),
        dt=1e-3,
        steps=10_000,
    )
    energies = traj.energies("rotating", ClassicalParams(lam=1.0))
    drift = np.abs(energies - energies[0]).max()
    assert drift <= 1e-8, f"orbit energy drift {drift:.2e}"

    def fwd(z):
        p1, q1, p2, q2 = z[1], z[0], z[3], z[2]
        pa, qa, pb, qb = canonical_transform(p1, q1, p2, q2)
        return np.array([qa, pa, qb, pb])

    m = np.column_stack([fwd(col) for col in np.eye(4)])
    omega = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ]
    )
    symp = np.abs(m.T @ omega @ m - omega).max()
    assert symp <= 1e-12, f"symplectic residual {symp:.2e}"
    print(
        f"\ncriterion 9 PASS: grad err {worst:.1e}, drift {drift:.1e}, "
        f"symplectic {symp:.1e}"
    )


def test_criterion_10_inflection_correlation():
    """Ground-energy curvature peak approaches lambda'_c as j grows.

    The finite-j coupling is mapped to its classical counterpart with
    the (j(j+1))^(1/4) scaling factor; under the bare 2g' map the peak
    coupling shrinks like 1/sqrt(j) and cannot converge to a constant.
    """
    grid = np.round(np.arange(0.02, 0.6201, 0.02), 12)
    distances = []
    peaks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for jval in (5, 10, 25):
            j = HalfInteger.from_value(jval)
            p = ModelParams(epsilon=1.0, g=0.0, gprime=0.0, j1=j, j2=j)
            e0 = [
                blockwise_spectrum(p.with_coupling(gprime=float(c)), "counter")
                .eigenvalues[0]
                for c in grid
            ]
            sd = second_difference(grid, e0)
            lam = lambda_from_coupling_finite_j(sd.peak_coupling, j)
            peaks.append((jval, sd.peak_coupling, lam))
            distances.append(abs(lam - LAMBDA_PRIME_CRITICAL))
    assert distances[0] > distances[1] > distances[2], (
        f"not monotonically approaching lambda'_c: {peaks}"
    )
    trail = ", ".join(f"j={j}: {lam:.3f}" for j, _, lam in peaks)
    print(f"\ncriterion 10 PASS: curvature peaks approach {LAMBDA_PRIME_CRITICAL:.4f} ({trail})")
