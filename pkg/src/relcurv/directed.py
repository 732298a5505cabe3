"""Directedness classification and pointwise-constant relative curvature.

A tangent 2-plane E with orthonormal basis (X, Y) carries the 1-form
phi_E(Z) = (nabla_Z R)(X, Y, Y, X).  The chart is *directed* by a unit
covector eta when every phi_E on planes meeting eta's kernel distribution
transversally is collinear with eta restricted to E, and phi_E vanishes on
planes inside the kernel.  The proportionality factor k(E, p) is the
relative sectional curvature; pointwise constancy of k is equivalent to

    nabla R = (k / 4) Pi(eta),      d tau = ((n-1)(n+2)/2) k eta,

which the fit below tests by least-squares projection onto Pi(eta), keeping
the trace route 2 ||dtau|| / ((n-1)(n+2)) as an independent consistency
estimate.  The direction form is taken from the scalar-curvature gradient,
eta = dtau / ||dtau||, which fixes its sign so k >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureBundle, curvature_bundle
from .errors import (
    DegenerateScalarGradientError,
    PlaneInsideDistributionError,
)
from .jets import MetricJet, MetricSpec
from .model_tensors import build_Pi, covector_norm, g_inner, g_norm

EPS_FLOOR = 1e-14


@dataclass(frozen=True)
class Tolerances:
    """Classification thresholds; the residual ones are relative."""

    residual: float = 1e-6
    locally_symmetric: float = 1e-8
    scalar_gradient: float = 1e-10
    plane_in_distribution: float = 1e-8

    @classmethod
    def for_spec(cls, spec: MetricSpec) -> "Tolerances":
        if spec.jet_mode == "finite-difference":
            return cls(residual=1e-3, locally_symmetric=1e-4, scalar_gradient=1e-6)
        return cls()


@dataclass(frozen=True)
class TwoPlane:
    """Ordered g-orthonormal tangent pair spanning a section."""

    x: np.ndarray
    y: np.ndarray

    @classmethod
    def orthonormalize(cls, jet: MetricJet, v: np.ndarray, w: np.ndarray) -> "TwoPlane":
        g = jet.g
        x = v / math.sqrt(v @ g @ v)
        w2 = w - (x @ g @ w) * x
        nrm = math.sqrt(w2 @ g @ w2)
        if nrm < 1e-12:
            raise ValueError("vectors do not span a 2-plane")
        return cls(x=x, y=w2 / nrm)

    def validate(self, jet: MetricJet, tol: float = 1e-12) -> None:
        g = jet.g
        checks = (
            abs(self.x @ g @ self.x - 1.0),
            abs(self.y @ g @ self.y - 1.0),
            abs(self.x @ g @ self.y),
        )
        if max(checks) > tol:
            raise ValueError(f"plane basis not g-orthonormal: {checks}")

    def cos2gamma(self, eta: np.ndarray) -> float:
        """Squared cosine of the angle to the eta-direction:
        eta(X)^2 + eta(Y)^2."""
        return float((eta @ self.x) ** 2 + (eta @ self.y) ** 2)


@dataclass(frozen=True)
class SectionalForm:
    """Components of phi_E on the plane basis (X, Y)."""

    phi_x: float
    phi_y: float

    def norm(self) -> float:
        return math.hypot(self.phi_x, self.phi_y)


def sectional_one_form(nabla_riem: np.ndarray, plane: TwoPlane) -> SectionalForm:
    """phi_E components ( (nabla_X R)(X,Y,Y,X), (nabla_Y R)(X,Y,Y,X) )."""
    x, y = plane.x, plane.y
    core = np.einsum("mijkl,i,j,k,l->m", nabla_riem, x, y, y, x)
    return SectionalForm(phi_x=float(core @ x), phi_y=float(core @ y))


def eta_from_dtau(
    dtau: np.ndarray, jet: MetricJet, tol: float = 1e-10
) -> np.ndarray:
    """Unit covector dtau / ||dtau||_g.

    With this orientation the fitted relative curvature is nonnegative.
    Raises DegenerateScalarGradientError when ||dtau|| <= tol; the caller
    must branch to the locally-symmetric classification.
    """
    nrm = covector_norm(np.asarray(dtau, float), jet)
    if nrm <= tol:
        raise DegenerateScalarGradientError(
            f"scalar-curvature gradient norm {nrm:.3e} below tolerance"
        )
    return np.asarray(dtau, float) / nrm


def relative_curvature(
    plane: TwoPlane,
    eta: np.ndarray,
    nabla_riem: np.ndarray,
    tol: float = 1e-8,
) -> float:
    """k(E, p) = (phi_X eta(X) + phi_Y eta(Y)) / (eta(X)^2 + eta(Y)^2)."""
    ex = float(eta @ plane.x)
    ey = float(eta @ plane.y)
    denom = ex * ex + ey * ey
    if denom <= tol:
        raise PlaneInsideDistributionError(
            "plane lies inside the direction form's kernel distribution"
        )
    phi = sectional_one_form(nabla_riem, plane)
    return (phi.phi_x * ex + phi.phi_y * ey) / denom


def sample_planes(
    jet: MetricJet,
    eta: np.ndarray | None,
    count: int,
    seed: int,
) -> tuple[list[TwoPlane], list[TwoPlane], list[TwoPlane]]:
    """Seeded stratified plane sample: (containing xi, inside Delta, generic).

    Generic pairs are g-orthonormalized Gaussian draws; the Delta stratum is
    empty when eta is absent or the chart dimension is 2.
    """
    if count < 8:
        raise ValueError("sample_count must be at least 8")
    rng = np.random.default_rng(seed)
    n = jet.n
    g = jet.g
    ginv = jet.inverse()

    def gaussian() -> np.ndarray:
        while True:
            v = rng.normal(size=n)
            if math.sqrt(v @ g @ v) > 1e-8:
                return v

    containing: list[TwoPlane] = []
    inside: list[TwoPlane] = []
    generic: list[TwoPlane] = []

    n_xi = count // 4 if eta is not None else 0
    n_delta = count // 4 if (eta is not None and n >= 3) else 0
    n_gen = count - n_xi - n_delta

    if eta is not None:
        xi = ginv @ eta
        xi = xi / math.sqrt(xi @ g @ xi)

        def off_xi(v: np.ndarray) -> np.ndarray:
            return v - (xi @ g @ v) * xi

        for _ in range(n_xi):
            containing.append(TwoPlane.orthonormalize(jet, xi, gaussian()))
        for _ in range(n_delta):
            while True:
                v, w = off_xi(gaussian()), off_xi(gaussian())
                try:
                    inside.append(TwoPlane.orthonormalize(jet, v, w))
                    break
                except ValueError:
                    continue
    for _ in range(n_gen):
        while True:
            try:
                generic.append(TwoPlane.orthonormalize(jet, gaussian(), gaussian()))
                break
            except ValueError:
                continue
    return containing, inside, generic


@dataclass(frozen=True)
class DirectedReport:
    """Pointwise directedness classification with its numeric evidence."""

    eta: np.ndarray | None
    k_fit: float | None
    residual_collinearity: float
    residual_delta_planes: float
    residual_constant_fit: float
    locally_symmetric: bool
    directed: bool
    pointwise_constant: bool
    nabla_r_norm: float
    dtau_norm: float


@dataclass(frozen=True)
class ConstantRelCurvResult:
    """Least-squares fit of the curvature derivative against Pi(eta)."""

    k_fit: float
    residual: float
    k_from_dtau: float
    locally_symmetric: bool
    nabla_r_norm: float

    @property
    def consistency(self) -> float:
        return abs(self.k_fit - self.k_from_dtau)

    def as_tuple(self) -> tuple[float, float]:
        return self.k_fit, self.residual


def _constant_fit(bundle: CurvatureBundle, tol: Tolerances) -> ConstantRelCurvResult:
    jet = bundle.jet
    nr_norm = g_norm(bundle.nabla_riem, jet)
    if nr_norm < tol.locally_symmetric:
        return ConstantRelCurvResult(
            k_fit=0.0, residual=0.0, k_from_dtau=0.0,
            locally_symmetric=True, nabla_r_norm=nr_norm,
        )
    eta = eta_from_dtau(bundle.dtau, jet, tol.scalar_gradient)
    Pi = build_Pi(eta, jet)
    k_fit = 4.0 * g_inner(bundle.nabla_riem, Pi, jet) / g_inner(Pi, Pi, jet)
    resid = g_norm(bundle.nabla_riem - 0.25 * k_fit * Pi, jet) / max(nr_norm, EPS_FLOOR)
    n = jet.n
    k_dtau = 2.0 * covector_norm(bundle.dtau, jet) / ((n - 1) * (n + 2))
    return ConstantRelCurvResult(
        k_fit=k_fit, residual=resid, k_from_dtau=k_dtau,
        locally_symmetric=False, nabla_r_norm=nr_norm,
    )


def constant_relcurv_test(
    point, spec: MetricSpec, tol: Tolerances | None = None
) -> ConstantRelCurvResult:
    """Fit nabla R = (k/4) Pi(eta) at the point and report the relative
    residual; locally symmetric points pass vacuously with k = 0.

    Raises DegenerateScalarGradientError when the scalar gradient vanishes
    while nabla R does not (no direction form can be extracted).
    """
    tol = tol or Tolerances.for_spec(spec)
    return _constant_fit(curvature_bundle(spec, point), tol)


def directedness_report(
    point,
    spec: MetricSpec,
    sample_count: int = 64,
    seed: int = 42,
    tol: Tolerances | None = None,
) -> DirectedReport:
    """Sample planes in three strata and classify the point.

    residual_collinearity is the largest wedge |phi_X eta(Y) - phi_Y eta(X)|
    over planes transversal to the kernel distribution, relative to the
    largest sampled ||phi_E||; residual_delta_planes is the largest
    ||phi_E|| over planes inside the kernel, on the same scale.
    """
    tol = tol or Tolerances.for_spec(spec)
    bundle = curvature_bundle(spec, point)
    jet = bundle.jet
    nr_norm = g_norm(bundle.nabla_riem, jet)
    dtau_norm = covector_norm(bundle.dtau, jet)

    if nr_norm < tol.locally_symmetric:
        return DirectedReport(
            eta=None, k_fit=0.0,
            residual_collinearity=0.0, residual_delta_planes=0.0,
            residual_constant_fit=0.0,
            locally_symmetric=True, directed=True, pointwise_constant=True,
            nabla_r_norm=nr_norm, dtau_norm=dtau_norm,
        )

    try:
        eta = eta_from_dtau(bundle.dtau, jet, tol.scalar_gradient)
    except DegenerateScalarGradientError:
        # no direction form available: only the symmetric classification
        return DirectedReport(
            eta=None, k_fit=None,
            residual_collinearity=math.inf, residual_delta_planes=math.inf,
            residual_constant_fit=math.inf,
            locally_symmetric=False, directed=False, pointwise_constant=False,
            nabla_r_norm=nr_norm, dtau_norm=dtau_norm,
        )

    containing, inside, generic = sample_planes(jet, eta, sample_count, seed)
    wedges: list[float] = []
    norms: list[float] = []
    for plane in containing + generic:
        ex, ey = float(eta @ plane.x), float(eta @ plane.y)
        if ex * ex + ey * ey <= tol.plane_in_distribution:
            continue
        phi = sectional_one_form(bundle.nabla_riem, plane)
        wedges.append(abs(phi.phi_x * ey - phi.phi_y * ex))
        norms.append(phi.norm())
    scale = max(max(norms, default=0.0), EPS_FLOOR)
    res_collin = max(wedges, default=0.0) / scale
    res_delta = max(
        (sectional_one_form(bundle.nabla_riem, pl).norm() for pl in inside),
        default=0.0,
    ) / scale

    fit = _constant_fit(bundle, tol)
    directed = res_collin < tol.residual and res_delta < tol.residual
    return DirectedReport(
        eta=eta, k_fit=fit.k_fit,
        residual_collinearity=res_collin, residual_delta_planes=res_delta,
        residual_constant_fit=fit.residual,
        locally_symmetric=False, directed=directed,
        pointwise_constant=fit.residual < tol.residual,
        nabla_r_norm=nr_norm, dtau_norm=dtau_norm,
    )


@dataclass(frozen=True)
class LocalSymmetryReport:
    is_locally_symmetric: bool
    nabla_r_norm: float
    dtau_norm: float
    equivalence_holds: bool

    def __bool__(self) -> bool:
        return self.is_locally_symmetric


def locally_symmetric_test(
    point, spec: MetricSpec, tol: Tolerances | None = None
) -> LocalSymmetryReport:
    """||nabla R|| < tol classification, with the scalar-gradient side.

    For charts of pointwise constant relative curvature the two conditions
    ||nabla R|| = 0 and ||dtau|| = 0 are equivalent; ``equivalence_holds``
    records whether both sides of that biconditional agree here.
    """
    tol = tol or Tolerances.for_spec(spec)
    bundle = curvature_bundle(spec, point)
    nr_norm = g_norm(bundle.nabla_riem, bundle.jet)
    dtau_norm = covector_norm(bundle.dtau, bundle.jet)
    sym = nr_norm < tol.locally_symmetric
    grad_zero = dtau_norm < tol.locally_symmetric
    return LocalSymmetryReport(
        is_locally_symmetric=sym,
        nabla_r_norm=nr_norm,
        dtau_norm=dtau_norm,
        equivalence_holds=(sym == grad_zero),
    )
