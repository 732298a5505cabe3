"""Metric charts and derivative jets.

A :class:`MetricJet` holds the metric components g together with the partial
derivative arrays needed downstream: three derivative orders are required to
form the covariant derivative of the curvature tensor.  Index convention for
the derivative arrays is derivative-first:

    dg[k, i, j]          = d_k g_ij
    d2g[l, k, i, j]      = d_l d_k g_ij
    d3g[m, l, k, i, j]   = d_m d_l d_k g_ij

Built-in families (flat, sphere, rotational warped product) ship closed-form
jets.  Arbitrary metric callables are wrapped by a central-difference
provider with per-order steps h_k = max(1, |x|) * eps^(1/(k+2)); third-order
differencing loses roughly five digits, so identities checked downstream get
a looser tolerance (1e-3 instead of 1e-9) in finite-difference mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateMetricError,
    JetOrderInsufficientError,
    OutOfDomainError,
    ProfileDomainError,
)
from .profiles import ProfileCurve

_EPS = float(np.finfo(float).eps)

PD_EIGENVALUE_FLOOR = 1e-12


@dataclass(frozen=True)
class ChartPoint:
    """A point in chart coordinates."""

    coords: tuple[float, ...]

    @classmethod
    def of(cls, *coords: float) -> "ChartPoint":
        return cls(tuple(float(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.coords, dtype=dtype or float)


def as_coords(p, n: int | None = None) -> np.ndarray:
    x = np.asarray(p, dtype=float).reshape(-1)
    if n is not None and x.size != n:
        raise OutOfDomainError(f"point has {x.size} coordinates, chart expects {n}")
    if not np.all(np.isfinite(x)):
        raise OutOfDomainError("point has non-finite coordinates")
    return x


@dataclass(frozen=True)
class MetricJet:
    """Metric components and partial derivatives at a single chart point."""

    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    d3g: np.ndarray | None
    point: np.ndarray

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def require_order3(self) -> np.ndarray:
        if self.d3g is None:
            raise JetOrderInsufficientError(
                "third metric derivatives required but jet was built at order 2"
            )
        return self.d3g

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.g)

    def validate(self, eig_floor: float = PD_EIGENVALUE_FLOOR) -> None:
        if not np.allclose(self.g, self.g.T, atol=1e-12):
            raise DegenerateMetricError("metric components not symmetric")
        w = np.linalg.eigvalsh(0.5 * (self.g + self.g.T))
        if w.min() <= eig_floor:
            raise DegenerateMetricError(
                f"metric not positive definite: min eigenvalue {w.min():.3e}"
            )

    def scaled(self, c: float) -> "MetricJet":
        """Jet of the conformally constant rescaling c * g."""
        return MetricJet(
            g=c * self.g,
            dg=c * self.dg,
            d2g=c * self.d2g,
            d3g=None if self.d3g is None else c * self.d3g,
            point=self.point,
        )


# ---------------------------------------------------------------------------
# closed-form building blocks


def _conformal_flat_jets(x: np.ndarray, rho: float):
    """Jets of g_ij = c(x) delta_ij with c = 4 rho^4 / (rho^2 + |x|^2)^2."""
    n = x.size
    q = float(x @ x)
    base = rho * rho + q
    s1 = -2.0 * base**-3
    s2 = 6.0 * base**-4
    s3 = -24.0 * base**-5
    c = 4.0 * rho**4 * base**-2
    eye = np.eye(n)
    dc = 4.0 * rho**4 * s1 * 2.0 * x
    d2c = 4.0 * rho**4 * (4.0 * s2 * np.multiply.outer(x, x) + 2.0 * s1 * eye)
    d3c = 4.0 * rho**4 * (
        8.0 * s3 * np.einsum("k,l,m->klm", x, x, x)
        + 4.0 * s2 * (
            np.einsum("km,l->klm", eye, x)
            + np.einsum("lm,k->klm", eye, x)
            + np.einsum("kl,m->klm", eye, x)
        )
    )
    g = c * eye
    dg = np.einsum("k,ij->kij", dc, eye)
    d2g = np.einsum("lk,ij->lkij", d2c, eye)
    d3g = np.einsum("mlk,ij->mlkij", d3c, eye)
    return g, dg, d2g, d3g


def _sphere_polar_jets(x: np.ndarray, rho: float):
    theta = x[0]
    g = np.diag([rho * rho, rho * rho * math.sin(theta) ** 2])
    dg = np.zeros((2, 2, 2))
    d2g = np.zeros((2, 2, 2, 2))
    d3g = np.zeros((2, 2, 2, 2, 2))
    dg[0, 1, 1] = rho * rho * math.sin(2.0 * theta)
    d2g[0, 0, 1, 1] = 2.0 * rho * rho * math.cos(2.0 * theta)
    d3g[0, 0, 0, 1, 1] = -4.0 * rho * rho * math.sin(2.0 * theta)
    return g, dg, d2g, d3g


def _warped_jets(x: np.ndarray, profile: ProfileCurve, n: int):
    """Warped-product metric r(t)^2 ghat(u) (+) (1 + r'(t)^2) dt^2.

    ghat is the stereographic round metric on the unit (n-1)-sphere,
    ghat_ab = 4 delta_ab / (1 + |u|^2)^2.  Coordinates are (u_1..u_{n-1}, t).
    """
    u = x[:-1]
    t = float(x[-1])
    profile.check_domain(t)
    r = profile.r(t)
    r1 = profile.dr(t)
    r2 = profile.d2r(t)
    r3 = profile.d3r(t)
    r4 = profile.fourth(t)
    if r <= 0.0:
        raise ProfileDomainError(f"profile radius nonpositive at t={t!r}")

    # sphere-factor conformal block and its u-derivatives
    sg, sdg, sd2g, sd3g = _conformal_flat_jets(u, 1.0)

    F = (r * r, 2.0 * r * r1, 2.0 * (r1 * r1 + r * r2), 2.0 * (3.0 * r1 * r2 + r * r3))
    G = (
        1.0 + r1 * r1,
        2.0 * r1 * r2,
        2.0 * (r2 * r2 + r1 * r3),
        2.0 * (3.0 * r2 * r3 + r1 * r4),
    )

    m = n - 1
    g = np.zeros((n, n))
    dg = np.zeros((n, n, n))
    d2g = np.zeros((n, n, n, n))
    d3g = np.zeros((n, n, n, n, n))
    sl = slice(0, m)

    g[sl, sl] = F[0] * sg
    g[m, m] = G[0]

    dg[sl, sl, sl] = F[0] * sdg
    dg[m, sl, sl] = F[1] * sg
    dg[m, m, m] = G[1]

    d2g[sl, sl, sl, sl] = F[0] * sd2g
    d2g[m, sl, sl, sl] = F[1] * sdg
    d2g[sl, m, sl, sl] = F[1] * sdg
    d2g[m, m, sl, sl] = F[2] * sg
    d2g[m, m, m, m] = G[2]

    d3g[sl, sl, sl, sl, sl] = F[0] * sd3g
    for block in ((m, sl, sl), (sl, m, sl), (sl, sl, m)):
        d3g[block[0], block[1], block[2], sl, sl] = F[1] * sd2g
    for block in ((m, m, sl), (m, sl, m), (sl, m, m)):
        d3g[block[0], block[1], block[2], sl, sl] = F[2] * sdg
    d3g[m, m, m, sl, sl] = F[3] * sg
    d3g[m, m, m, m, m] = G[3]
    return g, dg, d2g, d3g


# ---------------------------------------------------------------------------
# finite-difference provider


def _fd_steps(x: np.ndarray, order: int) -> np.ndarray:
    return np.maximum(1.0, np.abs(x)) * _EPS ** (1.0 / (order + 2))


def finite_difference_jet(
    fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, order: int = 3
) -> MetricJet:
    """Build a MetricJet from a plain metric evaluator by central differences.

    ``order`` <= 3 controls how many derivative arrays are produced; an
    order-2 jet makes downstream covariant-derivative ops raise
    JetOrderInsufficientError.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    g = np.asarray(fn(x), dtype=float)

    def at(*shifts: tuple[int, float]) -> np.ndarray:
        y = x.copy()
        for axis, delta in shifts:
            y[axis] += delta
        return np.asarray(fn(y), dtype=float)

    h1 = _fd_steps(x, 1)
    dg = np.empty((n, n, n))
    for k in range(n):
        dg[k] = (at((k, h1[k])) - at((k, -h1[k]))) / (2.0 * h1[k])

    h2 = _fd_steps(x, 2)
    d2g = np.empty((n, n, n, n))
    for k in range(n):
        d2g[k, k] = (at((k, h2[k])) - 2.0 * g + at((k, -h2[k]))) / h2[k] ** 2
        for l in range(k + 1, n):
            mixed = (
                at((k, h2[k]), (l, h2[l]))
                - at((k, h2[k]), (l, -h2[l]))
                - at((k, -h2[k]), (l, h2[l]))
                + at((k, -h2[k]), (l, -h2[l]))
            ) / (4.0 * h2[k] * h2[l])
            d2g[k, l] = mixed
            d2g[l, k] = mixed

    if order < 3:
        return MetricJet(g=g, dg=dg, d2g=d2g, d3g=None, point=x)

    h3 = _fd_steps(x, 3)
    d3g = np.empty((n, n, n, n, n))
    for k in range(n):
        for l in range(k, n):
            for m in range(l, n):
                axes = (k, l, m)
                if k == l == m:
                    val = (
                        at((k, 2 * h3[k]))
                        - 2.0 * at((k, h3[k]))
                        + 2.0 * at((k, -h3[k]))
                        - at((k, -2 * h3[k]))
                    ) / (2.0 * h3[k] ** 3)
                elif k == l or l == m:
                    rep, single = (k, m) if k == l else (l, k)
                    hr, hs = h3[rep], h3[single]
                    val = (
                        at((rep, hr), (single, hs))
                        - 2.0 * at((single, hs))
                        + at((rep, -hr), (single, hs))
                        - at((rep, hr), (single, -hs))
                        + 2.0 * at((single, -hs))
                        - at((rep, -hr), (single, -hs))
                    ) / (2.0 * hr * hr * hs)
                else:
                    val = np.zeros((n, n))
                    for s1 in (1.0, -1.0):
                        for s2 in (1.0, -1.0):
                            for s3 in (1.0, -1.0):
                                val = val + s1 * s2 * s3 * at(
                                    (k, s1 * h3[k]), (l, s2 * h3[l]), (m, s3 * h3[m])
                                )
                    val /= 8.0 * h3[k] * h3[l] * h3[m]
                for perm in set(permutations(axes)):
                    d3g[perm] = val
    return MetricJet(g=g, dg=dg, d2g=d2g, d3g=d3g, point=x)


# ---------------------------------------------------------------------------
# metric specifications


@dataclass(frozen=True)
class MetricSpec:
    """Description of a metric chart: family, dimension, parameters, jet mode."""

    family: str
    dim: int
    radius: float | None = None
    profile: ProfileCurve | None = None
    chart: str = "stereographic"
    jet_mode: str = "analytic"
    metric_fn: Callable[[np.ndarray], np.ndarray] | None = field(
        default=None, repr=False
    )
    jet_fn: Callable[[np.ndarray], tuple] | None = field(default=None, repr=False)
    fd_order: int = 3

    @classmethod
    def flat(cls, n: int) -> "MetricSpec":
        if n < 2:
            raise ValueError("dimension must be at least 2")
        return cls(family="flat", dim=n)

    @classmethod
    def sphere(cls, n: int, radius: float, chart: str = "stereographic") -> "MetricSpec":
        if n < 2:
            raise ValueError("dimension must be at least 2")
        if radius <= 0:
            raise ValueError("sphere radius must be positive")
        if chart not in ("stereographic", "polar"):
            raise ValueError(f"unknown sphere chart {chart!r}")
        if chart == "polar" and n != 2:
            raise ValueError("polar sphere chart is implemented for n = 2 only")
        return cls(family="sphere", dim=n, radius=radius, chart=chart)

    @classmethod
    def rotational(cls, profile: ProfileCurve, n: int) -> "MetricSpec":
        if n < 2:
            raise ValueError("dimension must be at least 2")
        return cls(family="rotational", dim=n, profile=profile)

    @classmethod
    def custom(
        cls,
        metric_fn: Callable[[np.ndarray], np.ndarray],
        n: int,
        jet_fn: Callable[[np.ndarray], tuple] | None = None,
        fd_order: int = 3,
    ) -> "MetricSpec":
        """Arbitrary metric evaluator; analytic jets optional via ``jet_fn``
        returning (g, dg, d2g, d3g), else central differences."""
        mode = "analytic" if jet_fn is not None else "finite-difference"
        return cls(
            family="custom", dim=n, metric_fn=metric_fn, jet_fn=jet_fn,
            jet_mode=mode, fd_order=fd_order,
        )

    def with_jet_mode(self, jet_mode: str, fd_order: int = 3) -> "MetricSpec":
        if jet_mode not in ("analytic", "finite-difference"):
            raise ValueError(f"unknown jet mode {jet_mode!r}")
        return MetricSpec(
            family=self.family, dim=self.dim, radius=self.radius,
            profile=self.profile, chart=self.chart, jet_mode=jet_mode,
            metric_fn=self.metric_fn, jet_fn=self.jet_fn, fd_order=fd_order,
        )

    # -- dispatch ----------------------------------------------------------

    def check_domain(self, x: np.ndarray) -> None:
        if self.family == "sphere" and self.chart == "polar":
            if not (0.0 < x[0] < math.pi):
                raise OutOfDomainError(
                    f"polar chart requires 0 < theta < pi, got {x[0]!r}"
                )
        elif self.family == "rotational":
            assert self.profile is not None
            self.profile.check_domain(float(x[-1]))

    def metric_at(self, p) -> np.ndarray:
        """Metric components only (used by the finite-difference provider)."""
        x = as_coords(p, self.dim)
        if self.family == "flat":
            return np.eye(self.dim)
        if self.family == "sphere":
            if self.chart == "polar":
                return _sphere_polar_jets(x, self.radius)[0]
            return _conformal_flat_jets(x, self.radius)[0]
        if self.family == "rotational":
            return _warped_jets(x, self.profile, self.dim)[0]
        if self.family == "custom":
            return np.asarray(self.metric_fn(x), dtype=float)
        raise ValueError(f"unknown metric family {self.family!r}")


def evaluate_metric_jet(spec: MetricSpec, p) -> MetricJet:
    """Evaluate the metric jet of ``spec`` at chart point ``p``.

    Analytic mode is exact up to round-off; finite-difference mode carries
    the documented loss of accuracy (about five digits at third order).
    Raises OutOfDomainError outside the chart and DegenerateMetricError if
    the metric fails the positive-definiteness floor.
    """
    x = as_coords(p, spec.dim)
    spec.check_domain(x)
    if spec.jet_mode == "finite-difference":
        jet = finite_difference_jet(spec.metric_at, x, order=spec.fd_order)
    elif spec.family == "flat":
        n = spec.dim
        jet = MetricJet(
            g=np.eye(n), dg=np.zeros((n, n, n)), d2g=np.zeros((n, n, n, n)),
            d3g=np.zeros((n, n, n, n, n)), point=x,
        )
    elif spec.family == "sphere":
        builder = _sphere_polar_jets if spec.chart == "polar" else _conformal_flat_jets
        g, dg, d2g, d3g = builder(x, spec.radius)
        jet = MetricJet(g=g, dg=dg, d2g=d2g, d3g=d3g, point=x)
    elif spec.family == "rotational":
        g, dg, d2g, d3g = _warped_jets(x, spec.profile, spec.dim)
        jet = MetricJet(g=g, dg=dg, d2g=d2g, d3g=d3g, point=x)
    elif spec.family == "custom":
        if spec.jet_fn is None:
            raise ValueError("custom spec in analytic mode needs jet_fn")
        g, dg, d2g, d3g = spec.jet_fn(x)
        jet = MetricJet(
            g=np.asarray(g, float), dg=np.asarray(dg, float),
            d2g=np.asarray(d2g, float),
            d3g=None if d3g is None else np.asarray(d3g, float), point=x,
        )
    else:
        raise ValueError(f"unknown metric family {spec.family!r}")
    jet.validate()
    return jet


def grid_points(axes: Sequence[np.ndarray]) -> np.ndarray:
    """Cartesian product of per-coordinate sample arrays, first axis slowest."""
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)
