"""Geometry of rotational hypersurfaces in the induced warped chart.

A hypersurface of revolution with meridian radius r(t) carries the induced
metric r(t)^2 ghat (+) (1 + r'(t)^2) dt^2.  Its curvature tensor decomposes
as R = a pi + b Phi with

    a = 1 / (r^2 (1 + r'^2)),
    b = -(1 + r'^2 + r r'') / (r^2 (1 + r'^2)^2),

the second fundamental tensor is c_g g - c_eta eta (x) eta, the axial unit
form eta is sqrt(1 + r'^2) dt, and the umbilicity factor of the orthogonal
distribution is lambda = r' / (r sqrt(1 + r'^2)).  The covariant derivative
of R has the closed form

    nabla R = lambda * b * Pi(eta) + (xi(b) - 2 b lambda) eta (x) Phi,

which the pipeline cross-checks componentwise.
"""

from __future__ import annotations

import math

import numpy as np

from .curvature import curvature_bundle
from .errors import ConstantCurvatureDegeneracyError
from .jets import MetricSpec, as_coords, evaluate_metric_jet
from .model_tensors import build_Pi, build_phi, build_pi
from .profiles import ProfileCurve


def induced_chart(profile: ProfileCurve, n: int) -> MetricSpec:
    """Warped-product chart of the rotational hypersurface of dimension n."""
    return MetricSpec.rotational(profile, n)


def axial_covector(profile: ProfileCurve, n: int, t: float) -> np.ndarray:
    """Unit covector dual to the meridian direction: sqrt(1 + r'^2) dt."""
    profile.check_domain(t)
    eta = np.zeros(n)
    eta[-1] = math.sqrt(1.0 + profile.dr(t) ** 2)
    return eta


def axial_vector(profile: ProfileCurve, n: int, t: float) -> np.ndarray:
    """Unit vector along the meridian direction: d_t / sqrt(1 + r'^2)."""
    profile.check_domain(t)
    xi = np.zeros(n)
    xi[-1] = 1.0 / math.sqrt(1.0 + profile.dr(t) ** 2)
    return xi


def second_fundamental(profile: ProfileCurve, t: float) -> tuple[float, float]:
    """Coefficients (c_g, c_eta) of the second fundamental tensor
    h = c_g g - c_eta eta (x) eta."""
    profile.check_domain(t)
    r = profile.r(t)
    r1 = profile.dr(t)
    r2 = profile.d2r(t)
    w = 1.0 + r1 * r1
    c_g = 1.0 / (r * math.sqrt(w))
    c_eta = (w + r * r2) / (r * w**1.5)
    return c_g, c_eta


def ab_coefficients(profile: ProfileCurve, t: float) -> tuple[float, float]:
    """Curvature decomposition functions (a, b) of the induced metric."""
    profile.check_domain(t)
    r = profile.r(t)
    r1 = profile.dr(t)
    r2 = profile.d2r(t)
    w = 1.0 + r1 * r1
    a = 1.0 / (r * r * w)
    b = -(w + r * r2) / (r * r * w * w)
    return a, b


def ab_derivatives(profile: ProfileCurve, t: float) -> tuple[float, float]:
    """t-derivatives (a'(t), b'(t)) of the decomposition functions."""
    profile.check_domain(t)
    r = profile.r(t)
    r1 = profile.dr(t)
    r2 = profile.d2r(t)
    r3 = profile.d3r(t)
    w = 1.0 + r1 * r1
    da = -2.0 * r1 * (w + r * r2) / (r**3 * w * w)
    num = w + r * r2
    dnum = 3.0 * r1 * r2 + r * r3
    den = r * r * w * w
    dden = 2.0 * r * r1 * w * (w + 2.0 * r * r2)
    db = -(dnum * den - num * dden) / den**2
    return da, db


def xi_derivative(profile: ProfileCurve, t: float, dvalue_dt: float) -> float:
    """Directional derivative along the unit meridian field of a function of t."""
    return dvalue_dt / math.sqrt(1.0 + profile.dr(t) ** 2)


def lambda_umbilic(profile: ProfileCurve, t: float, b_floor: float = 1e-12) -> float:
    """Umbilicity factor lambda = xi(a) / (2 b).

    Equals r' / (r sqrt(1 + r'^2)) identically; the quotient form is the
    primary route and degenerates when b vanishes (constant-curvature case),
    which raises ConstantCurvatureDegeneracyError so callers can fall back
    to the closed form knowingly.
    """
    a, b = ab_coefficients(profile, t)
    if abs(b) < b_floor:
        raise ConstantCurvatureDegeneracyError(
            f"umbilicity quotient undefined: b = {b!r} at t = {t!r}"
        )
    da, _ = ab_derivatives(profile, t)
    return xi_derivative(profile, t, da) / (2.0 * b)


def lambda_closed_form(profile: ProfileCurve, t: float) -> float:
    """lambda = r' / (r sqrt(1 + r'^2)), valid for every profile."""
    profile.check_domain(t)
    r = profile.r(t)
    r1 = profile.dr(t)
    return r1 / (r * math.sqrt(1.0 + r1 * r1))


def scalar_curvature(profile: ProfileCurve, n: int, t: float) -> float:
    """tau = (n-1)(n a + 2 b), the double trace of a pi + b Phi."""
    a, b = ab_coefficients(profile, t)
    return (n - 1) * (n * a + 2.0 * b)


def scalar_curvature_rate(profile: ProfileCurve, n: int, t: float) -> float:
    """tau'(t) = (n-1)(n a' + 2 b')."""
    da, db = ab_derivatives(profile, t)
    return (n - 1) * (n * da + 2.0 * db)


def relative_curvature_value(profile: ProfileCurve, n: int, t: float) -> float:
    """Nonnegative relative-curvature value 2 ||dtau|| / ((n-1)(n+2))."""
    dtau_norm = abs(scalar_curvature_rate(profile, n, t)) / math.sqrt(
        1.0 + profile.dr(t) ** 2
    )
    return 2.0 * dtau_norm / ((n - 1) * (n + 2))


def curvature_identity_check(
    profile: ProfileCurve, n: int, t: float, u=None
) -> float:
    """Max-norm residual between the pipeline curvature tensor and
    a pi + b Phi on the induced chart at (u, t)."""
    spec = induced_chart(profile, n)
    point = _chart_point(profile, n, t, u)
    jet = evaluate_metric_jet(spec, point)
    from .curvature import christoffel, riemann

    riem = riemann(jet, christoffel(jet))
    a, b = ab_coefficients(profile, t)
    eta = axial_covector(profile, n, t)
    model = a * build_pi(jet) + b * build_phi(jet, eta)
    return float(np.abs(riem - model).max())


def nablaR_analytic(profile: ProfileCurve, n: int, t: float, u=None) -> np.ndarray:
    """Closed-form covariant curvature derivative on the induced chart."""
    spec = induced_chart(profile, n)
    point = _chart_point(profile, n, t, u)
    jet = evaluate_metric_jet(spec, point)
    eta = axial_covector(profile, n, t)
    lam = lambda_closed_form(profile, t)
    _, b = ab_coefficients(profile, t)
    _, db = ab_derivatives(profile, t)
    xi_b = xi_derivative(profile, t, db)
    phi = build_phi(jet, eta)
    return lam * b * build_Pi(eta, jet) + (xi_b - 2.0 * b * lam) * np.einsum(
        "m,ijkl->mijkl", eta, phi
    )


def _chart_point(profile: ProfileCurve, n: int, t: float, u) -> np.ndarray:
    if u is None:
        u = np.zeros(n - 1)
    u = as_coords(u, n - 1)
    return np.concatenate([u, [t]])


def chart_bundle(profile: ProfileCurve, n: int, t: float, u=None):
    """Full curvature bundle of the induced chart at (u, t)."""
    return curvature_bundle(induced_chart(profile, n), _chart_point(profile, n, t, u))
