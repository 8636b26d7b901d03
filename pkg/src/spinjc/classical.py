"""Classical limit of the spinorized model and its phase-space analysis.

Spin operators are scaled to the unit sphere (the Lieb prescription,
J_k / sqrt(J(J+1)) with J -> infinity), giving canonical pairs
p = cos(theta), q = phi.  The resulting two-degree-of-freedom Hamiltonian
reduces, in each pure approximation, to one degree of freedom:

    rotating:  H(p, q) = lambda  (1 + p) sqrt(1 - p) cos(q)
    counter:   H(p, q) = p + lambda' (1 + p) sqrt(1 - p) cos(q)

with lambda = 2 g / eps and lambda' = 2 g' / eps.  The module finds the
stationary points of these reduced Hamiltonians, classifies them by the
Hessian determinant, locates the coupling where the counter-rotating
transition point is born (lambda'_c = 1/sqrt(2)), extracts level-set
contours, and integrates orbits.

Note on the counter-rotating structure: for every lambda' > 0 there is a
center on the q = 0 branch.  At lambda'_c a second stationary point is
born on the q = pi branch at the domain edge p = -1 (together with a pair
of hyperbolic points that live exactly on the p = -1 boundary line).  The
q = pi point is a local minimum of H; its energy is the lowest energy at
which closed orbits exist, and it is the energy reported by
separatrix_energy().
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from skimage.measure import find_contours

from .errors import NumericalError
from .spin_algebra import HalfInteger, make_spin_operators

__all__ = [
    "ClassicalParams",
    "PhasePoint",
    "FixedPoint",
    "Contour",
    "Trajectory",
    "LiebReport",
    "LAMBDA_PRIME_CRITICAL",
    "lieb_limit_check",
    "h_full",
    "classical_energy_offset",
    "canonical_transform",
    "canonical_inverse",
    "h_rotating",
    "h_counter",
    "grad",
    "hessian",
    "find_fixed_points",
    "critical_coupling_scan",
    "separatrix_energy",
    "trace_contours",
    "integrate_orbit",
    "lambda_from_coupling",
    "lambda_from_coupling_finite_j",
]

BOUNDARY_INSET = 1e-6
GRAD_TOL = 1e-10
DEDUP_RADIUS = 1e-6
HESSIAN_DEGENERATE_TOL = 1e-8

#: Coupling at which the counter-rotating transition point appears
#: (stationarity on the q = pi branch first admits a solution, at p -> -1:
#: 2 sqrt(1 - p) = lambda' (1 - 3 p) gives lambda' sqrt(2) = 1).
LAMBDA_PRIME_CRITICAL = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ClassicalParams:
    """Dimensionless couplings lambda = 2g/eps, lambda' = 2g'/eps and the
    conserved additive constant of the transformed Hamiltonian."""

    lam: float = 0.0
    lam_prime: float = 0.0
    a_const: float = 0.0

    def __post_init__(self):
        if self.lam < 0 or self.lam_prime < 0:
            raise ValueError("couplings must be >= 0")


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float


@dataclass(frozen=True)
class FixedPoint:
    point: PhasePoint
    energy: float
    kind: str  # "center", "saddle", or "degenerate"


@dataclass(frozen=True)
class Contour:
    level: float
    polylines: tuple  # of (N, 2) arrays with columns (q, p)
    closed: tuple  # of bools, per polyline


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    qs: np.ndarray
    ps: np.ndarray
    boundary_hit: bool

    def energies(self, which: str, params: ClassicalParams) -> np.ndarray:
        h = _reduced_h(which)
        lam = _coupling_of(which, params)
        return h(self.ps, self.qs, lam)


@dataclass(frozen=True)
class LiebReport:
    j: HalfInteger
    ratio: float  # J / sqrt(J(J+1)), the top of the scaled Jz spectrum
    deviation: float  # 1 - ratio


def lambda_from_coupling(g: float, epsilon: float = 1.0) -> float:
    """Classical coupling in the scaling limit: lambda = 2 g / eps."""
    return 2.0 * g / epsilon


def lambda_from_coupling_finite_j(
    g: float, j: HalfInteger, epsilon: float = 1.0
) -> float:
    """Effective classical coupling of the finite-j quantum model.

    Scaling the interaction term the same way as the energy terms leaves a
    residual factor (J(J+1))^(1/4): a† grows like (J(J+1))^(1/4) while a†a
    and Jz grow like sqrt(J(J+1)).  Pure 2g/eps only applies after that
    factor is absorbed into the coupling; for comparing a finite-j quantum
    scan against the classical critical coupling the factor must be kept.
    """
    jv = j.value
    return 2.0 * g * (jv * (jv + 1)) ** 0.25 / epsilon


def lieb_limit_check(j: HalfInteger) -> LiebReport:
    """How far the scaled Jz spectrum of a finite spin is from [-1, 1].

    The top eigenvalue of Jz / sqrt(J(J+1)) is J / sqrt(J(J+1)), which
    tends to 1 as J grows; this justifies p = cos(theta) in [-1, 1].
    """
    if j.twice_value < 1:
        raise ValueError("lieb_limit_check requires j >= 1/2")
    jv = j.value
    norm = math.sqrt(jv * (jv + 1))
    top = np.diag(make_spin_operators(j).jz.entries).max()
    return LiebReport(j=j, ratio=float(top) / norm, deviation=1.0 - jv / norm)


def h_full(
    p1: float,
    q1: float,
    p2: float,
    q2: float,
    params: ClassicalParams,
    epsilon: float = 1.0,
) -> float:
    """Two-degree-of-freedom classical Hamiltonian on the unit spheres.

    eps (p1 + p2) + eps·lambda  sqrt(1+p2) sqrt(1-p1^2) cos(q2 - q1)
                  + eps·lambda' sqrt(1+p2) sqrt(1-p1^2) cos(q2 + q1)

    The additive constant eps·j2 is NOT included; use
    classical_energy_offset() when comparing with quantum energies.
    """
    if abs(p1) > 1 or not (-1 <= p2 <= 1):
        raise ValueError("momenta must satisfy |p1| <= 1 and -1 <= p2 <= 1")
    if not (np.isfinite(q1) and np.isfinite(q2)):
        raise ValueError("angles must be finite")
    amp = math.sqrt(1 + p2) * math.sqrt(max(1 - p1 * p1, 0.0))
    return epsilon * (
        p1
        + p2
        + params.lam * amp * math.cos(q2 - q1)
        + params.lam_prime * amp * math.cos(q2 + q1)
    )


def classical_energy_offset(epsilon: float, j2: HalfInteger) -> float:
    """The constant eps·j2 dropped from h_full and the reduced Hamiltonians."""
    return epsilon * j2.value


def canonical_transform(p1, q1, p2, q2):
    """(p1,q1,p2,q2) -> (pa,qa,pb,qb): pa = (p2+p1)/2, qa = q2+q1,
    pb = (p2-p1)/2, qb = q2-q1.  Linear and symplectic."""
    return (p2 + p1) / 2, q2 + q1, (p2 - p1) / 2, q2 - q1


def canonical_inverse(pa, qa, pb, qb):
    """Exact inverse of canonical_transform."""
    return pa - pb, (qa - qb) / 2, pa + pb, (qa + qb) / 2


def _check_p(p, strict: bool):
    p = np.asarray(p, dtype=float)
    limit = 1.0
    if strict:
        if np.any(np.abs(p) >= limit):
            raise ValueError("evaluation requires |p| < 1 strictly")
    elif np.any(np.abs(p) > limit):
        raise ValueError("momentum out of range: |p| <= 1 required")
    return p


def h_rotating(p, q, lam: float):
    """Reduced rotating-wave Hamiltonian lambda (1+p) sqrt(1-p) cos(q)."""
    p = _check_p(p, strict=False)
    q = np.asarray(q, dtype=float)
    out = lam * (1 + p) * np.sqrt(1 - p) * np.cos(q)
    return float(out) if out.ndim == 0 else out


def h_counter(p, q, lam_prime: float):
    """Reduced counter-rotating Hamiltonian p + lambda' (1+p) sqrt(1-p) cos(q)."""
    p = _check_p(p, strict=False)
    q = np.asarray(q, dtype=float)
    out = p + lam_prime * (1 + p) * np.sqrt(1 - p) * np.cos(q)
    return float(out) if out.ndim == 0 else out


def _reduced_h(which: str):
    if which == "rotating":
        return h_rotating
    if which == "counter":
        return h_counter
    raise ValueError(f"unknown reduced Hamiltonian {which!r}")


def _coupling_of(which: str, params: ClassicalParams) -> float:
    return params.lam if which == "rotating" else params.lam_prime


def _grad_arrays(which: str, lam: float, p, q):
    """(dH/dq, dH/dp); the drift term contributes +1 to dH/dp for counter."""
    root = np.sqrt(1 - p)
    dq = -lam * (1 + p) * root * np.sin(q)
    dp = lam * np.cos(q) * (1 - 3 * p) / (2 * root)
    if which == "counter":
        dp = dp + 1.0
    return dq, dp


def _hess_arrays(which: str, lam: float, p, q):
    root = np.sqrt(1 - p)
    hqq = -lam * (1 + p) * root * np.cos(q)
    hqp = -lam * np.sin(q) * (1 - 3 * p) / (2 * root)
    hpp = lam * np.cos(q) * (3 * p - 5) / (4 * (1 - p) ** 1.5)
    return hqq, hqp, hpp


def grad(which: str, point: PhasePoint, params: ClassicalParams):
    """Analytic (dH/dq, dH/dp) of the chosen reduced Hamiltonian."""
    _reduced_h(which)
    p = _check_p(point.p, strict=True)
    dq, dp = _grad_arrays(which, _coupling_of(which, params), p, point.q)
    return float(dq), float(dp)


def hessian(which: str, point: PhasePoint, params: ClassicalParams):
    """Analytic second derivatives ((Hqq, Hqp), (Hqp, Hpp))."""
    _reduced_h(which)
    p = _check_p(point.p, strict=True)
    hqq, hqp, hpp = _hess_arrays(which, _coupling_of(which, params), p, point.q)
    return np.array([[hqq, hqp], [hqp, hpp]], dtype=float)


def _wrap_q(q: float) -> float:
    """Canonicalize the angle into (-pi, pi]."""
    return math.pi - (math.pi - q) % (2 * math.pi)


def _axis_line_roots(which: str, lam: float, p_lo: float, p_hi: float):
    """Roots of dH/dp along the sin q = 0 lines, by sign-change bisection.

    dH/dq vanishes identically on q = 0 and q = pi, so stationary points
    there reduce to a one-dimensional root problem; this catches points
    near the p = -1 edge where the 2-d Newton Hessian is ill-conditioned.
    """
    roots = []
    ps = np.linspace(p_lo, p_hi, 2048)
    for q_line in (0.0, math.pi):
        _, gp = _grad_arrays(which, lam, ps, q_line)
        sign = np.sign(gp)
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
            lo, hi = ps[i], ps[i + 1]
            flo = gp[i]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                _, fmid = _grad_arrays(which, lam, mid, q_line)
                if flo * fmid <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            roots.append((q_line, 0.5 * (lo + hi)))
        for i in np.flatnonzero(gp == 0.0):
            roots.append((q_line, float(ps[i])))
    return roots


def find_fixed_points(
    which: str,
    params: ClassicalParams,
    p_inset: float = BOUNDARY_INSET,
    seed_grid: int = 64,
) -> list[FixedPoint]:
    """Interior stationary points of a reduced Hamiltonian.

    Newton iterations are seeded at local minima of |grad H|^2 on a
    seed_grid x seed_grid mesh over q in [-pi, pi], p in
    [-1+p_inset, 1-p_inset]; non-converging seeds are dropped (the dense
    seeding keeps coverage).  A one-dimensional root scan along the
    sin q = 0 symmetry lines supplements the seeds.  Points are
    deduplicated, classified by the Hessian determinant (> 0 center,
    < 0 saddle, ~0 degenerate), and returned sorted by (q, p).
    """
    h = _reduced_h(which)
    lam = _coupling_of(which, params)
    p_lo, p_hi = -1 + p_inset, 1 - p_inset
    qs = np.linspace(-math.pi, math.pi, seed_grid)
    ps = np.linspace(p_lo, p_hi, seed_grid)
    qg, pg = np.meshgrid(qs, ps, indexing="ij")
    dq, dp = _grad_arrays(which, lam, pg, qg)
    norm2 = dq * dq + dp * dp

    # local minima of |grad|^2, with wrap-around in q
    padded = np.full((seed_grid + 2, seed_grid + 2), np.inf)
    padded[1:-1, 1:-1] = norm2
    padded[0, 1:-1] = norm2[-1]
    padded[-1, 1:-1] = norm2[0]
    seeds = []
    for i in range(seed_grid):
        for jx in range(seed_grid):
            window = padded[i : i + 3, jx : jx + 3]
            if norm2[i, jx] <= window.min():
                seeds.append((qg[i, jx], pg[i, jx]))

    found: list[tuple[float, float]] = []
    for q, p in _axis_line_roots(which, lam, p_lo, p_hi):
        gq, gp = _grad_arrays(which, lam, p, q)
        if math.hypot(gq, gp) > GRAD_TOL:
            continue
        if not any(math.hypot(q - fq, p - fp) < DEDUP_RADIUS for fq, fp in found):
            found.append((q, p))

    for q0, p0 in seeds:
        q, p = q0, p0
        gq, gp = _grad_arrays(which, lam, p, q)
        gn = math.hypot(gq, gp)
        converged = False
        for _ in range(100):
            if gn <= 1e-13:
                converged = True
                break
            hqq, hqp, hpp = _hess_arrays(which, lam, p, q)
            det = hqq * hpp - hqp * hqp
            if abs(det) < 1e-300:
                break
            step_q = -(hpp * gq - hqp * gp) / det
            step_p = -(-hqp * gq + hqq * gp) / det
            scale = 1.0
            improved = False
            for _ in range(40):  # backtrack until |grad| decreases
                q_new = _wrap_q(q + scale * step_q)
                p_new = min(max(p + scale * step_p, p_lo), p_hi)
                gq_new, gp_new = _grad_arrays(which, lam, p_new, q_new)
                gn_new = math.hypot(gq_new, gp_new)
                if gn_new < gn:
                    q, p, gq, gp, gn = q_new, p_new, gq_new, gp_new, gn_new
                    improved = True
                    break
                scale /= 2
            if not improved:
                break
        if not (converged or gn <= GRAD_TOL):
            continue
        duplicate = any(
            math.hypot(_wrap_q(q - fq) if abs(q - fq) > math.pi else q - fq, p - fp)
            < DEDUP_RADIUS
            for fq, fp in found
        )
        if not duplicate:
            found.append((q, p))

    points = []
    for q, p in sorted((float(q) + 0.0, float(p)) for q, p in found):
        hqq, hqp, hpp = _hess_arrays(which, lam, p, q)
        det = hqq * hpp - hqp * hqp
        if abs(det) <= HESSIAN_DEGENERATE_TOL:
            kind = "degenerate"
        elif det > 0:
            kind = "center"
        else:
            kind = "saddle"
        points.append(
            FixedPoint(
                point=PhasePoint(q=q, p=p),
                energy=float(h(p, q, lam)),
                kind=kind,
            )
        )
    return points


def _transition_point(params: ClassicalParams) -> FixedPoint | None:
    """The counter-rotating stationary point on the q = pi branch, i.e. the
    one born at lambda'_c.  None when subcritical."""
    for fp in find_fixed_points("counter", params):
        if math.cos(fp.point.q) < -0.5:
            return fp
    return None


def critical_coupling_scan(
    lam_lo: float = 0.1, lam_hi: float = 2.0, tol: float = 1e-4
) -> float:
    """Coupling at which the counter-rotating transition point appears.

    Bisection on the existence of the q = pi-branch stationary point,
    which is born at the domain edge p = -1 when lambda' crosses
    1/sqrt(2).  (A center on the q = 0 branch exists for every positive
    coupling, so plain existence of interior stationary points cannot
    bracket the transition.)
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")

    def supercritical(lam_prime: float) -> bool:
        return _transition_point(ClassicalParams(lam_prime=lam_prime)) is not None

    lo_super = supercritical(lam_lo)
    hi_super = supercritical(lam_hi)
    if lo_super or not hi_super:
        raise NumericalError(
            f"range [{lam_lo}, {lam_hi}] does not bracket the transition "
            f"(expected near {LAMBDA_PRIME_CRITICAL:.6f})"
        )
    lo, hi = lam_lo, lam_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if supercritical(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def separatrix_energy(params: ClassicalParams) -> float:
    """Energy of the counter-rotating transition point (q = pi branch).

    This is the lowest energy at which closed orbits exist; below the
    critical coupling no such point exists and the call fails.
    """
    fp = _transition_point(params)
    if fp is None:
        raise NumericalError(
            f"no transition point at lambda' = {params.lam_prime}; the "
            f"critical coupling is lambda'_c = {LAMBDA_PRIME_CRITICAL:.6f}"
        )
    return fp.energy


def reduced_h_grid(
    which: str, params: ClassicalParams, n_q: int = 512, n_p: int = 512
):
    """Axes and values of a reduced Hamiltonian sampled on the rectangle
    q in [-pi, pi], p in [-1, 1]."""
    h = _reduced_h(which)
    lam = _coupling_of(which, params)
    if n_q < 16 or n_p < 16:
        raise ValueError("grid must be at least 16x16")
    qs = np.linspace(-math.pi, math.pi, n_q)
    ps = np.linspace(-1.0, 1.0, n_p)
    qg, pg = np.meshgrid(qs, ps, indexing="ij")
    return qs, ps, h(pg, qg, lam)


def trace_contours(
    which: str,
    params: ClassicalParams,
    levels,
    n_q: int = 512,
    n_p: int = 512,
) -> list[Contour]:
    """Marching-squares level sets of a reduced Hamiltonian on the
    rectangle q in [-pi, pi], p in [-1, 1].

    H is evaluated exactly on the boundary (the square roots vanish
    there).  A polyline is flagged closed when its endpoints coincide
    within one cell diagonal.  Levels with no crossings yield empty
    contours rather than errors.
    """
    levels = [float(lv) for lv in levels]
    if not all(math.isfinite(lv) for lv in levels):
        raise ValueError("levels must be finite")
    qs, ps, grid = reduced_h_grid(which, params, n_q=n_q, n_p=n_p)
    dq = qs[1] - qs[0]
    dp = ps[1] - ps[0]
    cell_diag = math.hypot(dq, dp)
    out = []
    for level in levels:
        polylines = []
        closed = []
        for verts in find_contours(grid, level):
            poly = np.column_stack(
                (-math.pi + verts[:, 0] * dq, -1.0 + verts[:, 1] * dp)
            )
            polylines.append(poly)
            closed.append(
                bool(np.hypot(*(poly[0] - poly[-1])) <= cell_diag)
            )
        out.append(Contour(level=level, polylines=tuple(polylines), closed=tuple(closed)))
    return out


def integrate_orbit(
    which: str,
    params: ClassicalParams,
    start: PhasePoint,
    dt: float = 1e-3,
    steps: int = 10_000,
) -> Trajectory:
    """Fixed-step 4th-order Runge-Kutta integration of
    qdot = dH/dp, pdot = -dH/dq.

    Terminates early with boundary_hit when |p| reaches 1 - 1e-6 (the
    derivative of sqrt(1-p) is singular at the edge).  q is accumulated
    without wrapping so open orbits show their winding.
    """
    _reduced_h(which)
    lam = _coupling_of(which, params)
    if dt <= 0 or dt > 1e-2:
        raise ValueError("dt must be in (0, 1e-2]")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if abs(start.p) >= 1 - BOUNDARY_INSET:
        raise ValueError("start must lie strictly inside |p| < 1 - 1e-6")

    p_clip = 1 - 1e-12

    def rhs(q, p):
        p = min(max(p, -p_clip), p_clip)
        gq, gp = _grad_arrays(which, lam, p, q)
        return gp, -gq

    qs = [start.q]
    ps = [start.p]
    times = [0.0]
    q, p = start.q, start.p
    boundary = False
    for k in range(steps):
        k1q, k1p = rhs(q, p)
        k2q, k2p = rhs(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p)
        k3q, k3p = rhs(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p)
        k4q, k4p = rhs(q + dt * k3q, p + dt * k3p)
        q = q + dt * (k1q + 2 * k2q + 2 * k3q + k4q) / 6
        p = p + dt * (k1p + 2 * k2p + 2 * k3p + k4p) / 6
        if abs(p) >= 1 - BOUNDARY_INSET:
            boundary = True
            break
        qs.append(q)
        ps.append(p)
        times.append((k + 1) * dt)
    return Trajectory(
        times=np.array(times),
        qs=np.array(qs),
        ps=np.array(ps),
        boundary_hit=boundary,
    )
