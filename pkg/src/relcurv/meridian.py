"""Constant-relative-curvature meridians: ODE integration and quadrature.

The meridian radius of a rotational hypersurface of pointwise constant
relative curvature solves

    r'' = (B r^2 (1 + r'^2)^2 - 2 (1 + r'^2)) / r,        a - b = B,

whose first integral is b = A r^2 with a second constant A, equivalently
a = A r^2 + B.  In graph form t(r) the same curve is

    t(r) = int r sqrt(A r^2 + B) / sqrt(1 - A r^4 - B r^2) dr,

valid where 0 < (A r^2 + B) r^2 < 1; the upper boundary (A r^2 + B) r^2 = 1
is a meridian turning point (r' = 0) where the integrand has an integrable
inverse-square-root singularity, removed here by the substitution
r = r_t -/+ s^2 on the adjacent subinterval.  The ODE path is regular at
turning points, so it serves as the reference for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import (
    DomainExitError,
    DomainViolationError,
    QuadratureFailureError,
    RadiusCollapseError,
    StepFailureError,
)
from .profiles import ProfileCurve
from .rotational import (
    ab_coefficients,
    lambda_closed_form,
    relative_curvature_value,
    scalar_curvature,
)

R_COLLAPSE_FLOOR = 1e-6
SLOPE_CEILING = 1e3


def _rhs_factory(B: float):
    def f(r: float, v: float) -> float:
        w = 1.0 + v * v
        return B * r * w * w - 2.0 * w / r

    def f_r(r: float, v: float) -> float:
        w = 1.0 + v * v
        return B * w * w + 2.0 * w / (r * r)

    def f_v(r: float, v: float) -> float:
        w = 1.0 + v * v
        return 4.0 * B * r * v * w - 4.0 * v / r

    def f_rr(r: float, v: float) -> float:
        return -4.0 * (1.0 + v * v) / r**3

    def f_rv(r: float, v: float) -> float:
        return 4.0 * B * v * (1.0 + v * v) + 4.0 * v / (r * r)

    def f_vv(r: float, v: float) -> float:
        return 4.0 * B * r * (1.0 + 3.0 * v * v) - 4.0 / r

    return f, f_r, f_v, f_rr, f_rv, f_vv


@dataclass(frozen=True)
class MeridianSolution:
    """Sampled meridian with its two constants and per-sample diagnostics."""

    t: np.ndarray
    r: np.ndarray
    r_prime: np.ndarray
    A: float
    B: float
    dim: int
    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray
    tau: np.ndarray
    k: np.ndarray
    profile: ProfileCurve

    @property
    def t_span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def a_minus_b_spread(self) -> float:
        return float(np.abs((self.a - self.b) - self.B).max())

    def A_spread(self) -> float:
        return float(np.abs(self.b / self.r**2 - self.A).max())


def _ode_profile(sol, B: float, span: tuple[float, float]) -> ProfileCurve:
    """Profile backed by the dense ODE solution; higher derivatives come from
    the right-hand side and its total derivatives, not from differencing."""
    f, f_r, f_v, f_rr, f_rv, f_vv = _rhs_factory(B)

    def state(t: float) -> tuple[float, float]:
        r, v = sol(t)
        return float(r), float(v)

    def d2r(t: float) -> float:
        r, v = state(t)
        return f(r, v)

    def d3r(t: float) -> float:
        r, v = state(t)
        return f_r(r, v) * v + f_v(r, v) * f(r, v)

    def d4r(t: float) -> float:
        r, v = state(t)
        fv = f(r, v)
        g_r = f_rr(r, v) * v + f_rv(r, v) * fv + f_v(r, v) * f_r(r, v)
        g_v = f_rv(r, v) * v + f_r(r, v) + f_vv(r, v) * fv + f_v(r, v) * f_v(r, v)
        return g_r * v + g_v * fv

    return ProfileCurve(
        r=lambda t: state(t)[0],
        dr=lambda t: state(t)[1],
        d2r=d2r, d3r=d3r, d4r=d4r,
        domain=span, family="ode-generated",
    )


def _integrate_leg(B: float, y0, t0: float, t_end: float, tol: float):
    f = _rhs_factory(B)[0]

    def rhs(t, y):
        return [y[1], f(y[0], y[1])]

    def ev_collapse(t, y):
        return y[0] - R_COLLAPSE_FLOOR

    ev_collapse.terminal = True

    def ev_slope(t, y):
        return abs(y[1]) - SLOPE_CEILING

    ev_slope.terminal = True

    res = solve_ivp(
        rhs, (t0, t_end), y0, method="RK45", rtol=tol, atol=tol,
        dense_output=True, events=[ev_collapse, ev_slope],
    )
    if res.status == -1:
        raise StepFailureError(f"integrator failed: {res.message}")
    if res.status == 1:
        if len(res.t_events[0]):
            raise RadiusCollapseError(
                f"meridian radius reached {R_COLLAPSE_FLOOR} at t = {res.t_events[0][0]!r}"
            )
        t_ev = res.t_events[1][0]
        r_ev = res.y_events[1][0][0]
        # a vertical meridian at small radius is a pole, not a chart boundary
        if r_ev < 0.05 * max(1.0, y0[0]):
            raise RadiusCollapseError(
                f"meridian radius collapsing: r = {r_ev!r} with vertical slope at t = {t_ev!r}"
            )
        raise DomainExitError(
            f"meridian slope exceeded {SLOPE_CEILING} at t = {t_ev!r} (r = {r_ev!r})"
        )
    return res.sol


def meridian_ode(
    B: float,
    r0: float,
    v0: float,
    t_span: tuple[float, float],
    tol: float = 1e-10,
    dim: int = 3,
    sample_count: int = 201,
    t0: float = 0.0,
) -> MeridianSolution:
    """Integrate the meridian equation with r(t0) = r0, r'(t0) = v0 over t_span.

    The span may straddle t0; backward and forward legs share the initial
    data.  Events terminate the run when the radius collapses toward zero
    (RadiusCollapseError) or the slope blows up at the chart boundary
    (DomainExitError); integrator breakdown raises StepFailureError.
    Diagnostics and the recorded invariant A = b / r^2 use ``dim`` leaves.
    """
    if r0 <= 0.0:
        raise ValueError("initial radius must be positive")
    t_lo, t_hi = float(t_span[0]), float(t_span[1])
    if not t_lo <= t0 <= t_hi:
        raise ValueError("t0 must lie inside t_span")
    sol_fwd = _integrate_leg(B, [r0, v0], t0, t_hi, tol) if t_hi > t0 else None
    sol_bwd = _integrate_leg(B, [r0, v0], t0, t_lo, tol) if t_lo < t0 else None

    def sol(t: float):
        if t >= t0:
            return sol_fwd(t) if sol_fwd is not None else np.array([r0, v0])
        return sol_bwd(t) if sol_bwd is not None else np.array([r0, v0])

    lo, hi = t_lo, t_hi
    pad = 1e-12 * max(1.0, hi - lo)  # dense output is valid on the closed span
    profile = _ode_profile(sol, B, (lo - pad, hi + pad))

    ts = np.linspace(lo, hi, sample_count)
    rr = np.empty(sample_count)
    vv = np.empty(sample_count)
    for i, t in enumerate(ts):
        rr[i], vv[i] = sol(t)
    a0, b0 = ab_coefficients_arrays(profile, ts)
    # first integral: A = b / r^2, fixed by the initial data
    A = (1.0 / (r0 * r0 * (1.0 + v0 * v0)) - B) / (r0 * r0)
    lam = np.array([lambda_closed_form(profile, t) for t in ts])
    tau = np.array([scalar_curvature(profile, dim, t) for t in ts])
    k = np.array([relative_curvature_value(profile, dim, t) for t in ts])
    return MeridianSolution(
        t=ts, r=rr, r_prime=vv, A=A, B=B, dim=dim,
        a=a0, b=b0, lam=lam, tau=tau, k=k, profile=profile,
    )


def ab_coefficients_arrays(profile: ProfileCurve, ts: np.ndarray):
    a = np.empty(ts.size)
    b = np.empty(ts.size)
    for i, t in enumerate(ts):
        a[i], b[i] = ab_coefficients(profile, float(t))
    return a, b


# ---------------------------------------------------------------------------
# quadrature form t(r)


def turning_radii(A: float, B: float) -> list[float]:
    """Positive radii where (A r^2 + B) r^2 = 1 (meridian turning points)."""
    if A == 0.0:
        return [1.0 / math.sqrt(B)] if B > 0 else []
    disc = B * B + 4.0 * A
    if disc < 0.0:
        return []
    roots = [(-B + math.sqrt(disc)) / (2.0 * A), (-B - math.sqrt(disc)) / (2.0 * A)]
    return sorted(math.sqrt(q) for q in roots if q > 0.0)


def _constraint(A: float, B: float, r: np.ndarray) -> np.ndarray:
    return (A * r * r + B) * r * r


def _sqrt_P_factored(A: float, B: float, r: float, root: float) -> float:
    """sqrt(1 - A r^4 - B r^2) with the (root^2 - r^2) factor pulled out,
    returning sqrt(P) / sqrt(|root^2 - r^2|) without cancellation."""
    q = r * r
    if A == 0.0:
        return math.sqrt(B)
    # P = A (q1 - q)(q - q2) for the root pair q1 = root^2, q2 = other root
    q2 = -1.0 / (A * root * root)  # product of roots of A q^2 + B q - 1 is -1/A
    return math.sqrt(abs(A * (q - q2)))


def _quad(fn, a: float, b: float) -> float:
    val, err = quad(fn, a, b, limit=200, epsabs=1e-12, epsrel=1e-12)
    if err > max(1e-9, 1e-9 * abs(val)):
        raise QuadratureFailureError(
            f"quadrature error estimate {err:.3e} too large on [{a!r}, {b!r}]"
        )
    return val


def _integrate_piece(A: float, B: float, ra: float, rb: float, roots: list[float]) -> float:
    """t-increment over [ra, rb] with substitution at singular endpoints."""

    def integrand(r: float) -> float:
        P = 1.0 - A * r**4 - B * r * r
        return r * math.sqrt(A * r * r + B) / math.sqrt(P)

    def near(r: float) -> float | None:
        for rt in roots:
            if abs(r - rt) <= 1e-9 * max(1.0, rt):
                return rt
        return None

    rt_hi = near(rb)
    rt_lo = near(ra)
    if rt_hi is not None:
        # r = rt - s^2; sqrt(P) = s sqrt(rt + r) * sqrt_P_factored
        def sub(s: float) -> float:
            r = rt_hi - s * s
            num = 2.0 * r * math.sqrt(max(A * r * r + B, 0.0))
            den = math.sqrt(rt_hi + r) * _sqrt_P_factored(A, B, r, rt_hi)
            return num / den

        return _quad(sub, 0.0, math.sqrt(max(rt_hi - ra, 0.0)))
    if rt_lo is not None:
        def sub(s: float) -> float:
            r = rt_lo + s * s
            num = 2.0 * r * math.sqrt(max(A * r * r + B, 0.0))
            den = math.sqrt(r + rt_lo) * _sqrt_P_factored(A, B, r, rt_lo)
            return num / den

        return _quad(sub, 0.0, math.sqrt(max(rb - rt_lo, 0.0)))
    return _quad(integrand, ra, rb)


def meridian_quadrature(
    A: float,
    B: float,
    r_range: tuple[float, float],
    num: int = 101,
    r_values: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Meridian samples t(r) on r_range by adaptive quadrature, t(r_lo) = 0.

    The range may touch a turning radius at either end; the interior must
    satisfy 0 < (A r^2 + B) r^2 < 1 or DomainViolationError is raised.
    ``r_values`` overrides the uniform sample grid (must be increasing and
    inside r_range).
    """
    r_lo, r_hi = float(r_range[0]), float(r_range[1])
    if not (0.0 < r_lo < r_hi):
        raise DomainViolationError(f"invalid radius range {r_range!r}")
    probe = np.linspace(r_lo, r_hi, max(4 * num, 256))[1:-1]
    c = _constraint(A, B, probe)
    if c.min() <= 0.0 or c.max() >= 1.0:
        raise DomainViolationError(
            "constraint 0 < (A r^2 + B) r^2 < 1 broken inside the range: "
            f"range [{c.min():.6g}, {c.max():.6g}]"
        )
    ends = _constraint(A, B, np.array([r_lo, r_hi]))
    if ends.min() < -1e-12 or ends.max() > 1.0 + 1e-12:
        raise DomainViolationError("constraint broken at a range endpoint")

    roots = turning_radii(A, B)
    if r_values is None:
        rs = np.linspace(r_lo, r_hi, num)
    else:
        rs = np.asarray(r_values, dtype=float)
        if rs.size < 2 or np.any(np.diff(rs) <= 0):
            raise DomainViolationError("r_values must be strictly increasing")
        if rs[0] < r_lo - 1e-12 or rs[-1] > r_hi + 1e-12:
            raise DomainViolationError("r_values outside r_range")
    ts = np.zeros(rs.size)
    ts[0] = _integrate_piece(A, B, r_lo, float(rs[0]), roots) if rs[0] > r_lo else 0.0
    for i in range(rs.size - 1):
        ts[i + 1] = ts[i] + _integrate_piece(A, B, float(rs[i]), float(rs[i + 1]), roots)
    return rs, ts


def initial_speed(A: float, B: float, r0: float) -> float:
    """|r'| on the (A, B) meridian at radius r0, from the first integral."""
    c = _constraint(A, B, np.array([r0]))[0]
    if not (0.0 < c <= 1.0):
        raise DomainViolationError(f"radius {r0!r} not on the (A, B) meridian band")
    return math.sqrt(max(1.0 / c - 1.0, 0.0))


def ode_t_of_r(sol: MeridianSolution, r_probe: np.ndarray) -> np.ndarray:
    """Invert r(t) for each probe radius on the last monotone branch of the
    ODE solution, by bracketed root finding on the dense output."""
    from scipy.optimize import brentq

    v = sol.r_prime
    sign_changes = np.where(np.diff(np.signbit(v)))[0]
    lo = 0 if sign_changes.size == 0 else int(sign_changes[-1]) + 1
    r_seg, t_seg = sol.r[lo:], sol.t[lo:]
    if r_seg.size < 8:  # branch too short, use the leading one instead
        hi = sol.r.size if sign_changes.size == 0 else int(sign_changes[0]) + 1
        r_seg, t_seg = sol.r[:hi], sol.t[:hi]
    order = np.argsort(r_seg)
    r_seg, t_seg = r_seg[order], t_seg[order]
    rfun = sol.profile.r
    out = np.empty(np.asarray(r_probe).size)
    for i, rp in enumerate(np.asarray(r_probe, dtype=float)):
        j = int(np.searchsorted(r_seg, rp))
        if j == 0 or j >= r_seg.size:
            raise DomainViolationError(
                f"probe radius {rp!r} outside the ODE branch range "
                f"[{r_seg[0]!r}, {r_seg[-1]!r}]"
            )
        ta, tb = sorted((float(t_seg[j - 1]), float(t_seg[j])))
        out[i] = brentq(lambda t: rfun(t) - rp, ta, tb, xtol=1e-14)
    return out


def compare_with_quadrature(sol: MeridianSolution, r_probe: np.ndarray) -> float:
    """Largest |t| mismatch between the ODE meridian and the quadrature
    meridian of the same (A, B), at the probe radii, after aligning by
    t-translation (and reflection, since the graph orientation is free)."""
    r_probe = np.sort(np.asarray(r_probe, dtype=float))
    t_ode = ode_t_of_r(sol, r_probe)
    lo = min(float(r_probe[0]), sol.r.min())
    hi = max(float(r_probe[-1]), min(sol.r.max(), _hull_hi(sol)))
    _, t_qd = meridian_quadrature(sol.A, sol.B, (lo, hi), r_values=r_probe)
    best = math.inf
    for sgn in (1.0, -1.0):
        diff = sgn * t_ode - t_qd
        diff = diff - 0.5 * (diff.max() + diff.min())  # optimal sup-norm shift
        best = min(best, float(np.abs(diff).max()))
    return best


def _hull_hi(sol: MeridianSolution) -> float:
    rts = [rt for rt in turning_radii(sol.A, sol.B) if rt >= sol.r.min() - 1e-9]
    return min(rts) if rts else math.inf
