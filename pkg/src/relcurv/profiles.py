"""Meridian profile curves r(t) for surfaces and hypersurfaces of revolution.

A profile carries evaluators for r and its first four derivatives on an open
interval.  The fourth derivative is needed because the warped-product metric
component 1 + r'(t)^2 must be differentiated three times when building
third-order metric jets; families that cannot supply it analytically fall
back to a central difference of r'''.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import ProfileDomainError

_EPS = 2.220446049250313e-16


def _fd_step(t: float, order: int) -> float:
    return max(1.0, abs(t)) * _EPS ** (1.0 / (order + 2))


@dataclass(frozen=True)
class ProfileCurve:
    """Radius function of a rotational chart, with derivatives to order 4.

    Invariants: r > 0 on the open domain; derivative evaluators agree with
    finite differences of r (see :meth:`validate`).
    """

    r: Callable[[float], float]
    dr: Callable[[float], float]
    d2r: Callable[[float], float]
    d3r: Callable[[float], float]
    domain: tuple[float, float]
    family: str = "custom"
    d4r: Callable[[float], float] | None = field(default=None)

    def check_domain(self, t: float) -> None:
        lo, hi = self.domain
        if not (lo < t < hi) or not math.isfinite(t):
            raise ProfileDomainError(
                f"t={t!r} outside profile domain ({lo!r}, {hi!r})"
            )

    def fourth(self, t: float) -> float:
        """r''''(t); analytic when available, else central difference of r'''."""
        if self.d4r is not None:
            return self.d4r(t)
        h = _fd_step(t, 1)
        lo, hi = self.domain
        h = min(h, 0.25 * (hi - t), 0.25 * (t - lo))
        return (self.d3r(t + h) - self.d3r(t - h)) / (2.0 * h)

    def validate(self, t: float, tol: float = 1e-6) -> None:
        """Cross-check dr, d2r, d3r against central differences of r at t."""
        self.check_domain(t)
        if self.r(t) <= 0.0:
            raise ProfileDomainError(f"profile radius nonpositive at t={t!r}")
        h = _fd_step(t, 1)
        fd1 = (self.r(t + h) - self.r(t - h)) / (2.0 * h)
        h2 = _fd_step(t, 2)
        fd2 = (self.r(t + h2) - 2.0 * self.r(t) + self.r(t - h2)) / h2**2
        h3 = _fd_step(t, 3)
        fd3 = (
            self.r(t + 2 * h3)
            - 2.0 * self.r(t + h3)
            + 2.0 * self.r(t - h3)
            - self.r(t - 2 * h3)
        ) / (2.0 * h3**3)
        scale = max(1.0, abs(self.r(t)))
        for got, ref in ((self.dr(t), fd1), (self.d2r(t), fd2), (self.d3r(t), fd3)):
            if abs(got - ref) > tol * max(scale, abs(ref)):
                raise ValueError(
                    f"profile derivative evaluators inconsistent at t={t!r}: "
                    f"{got!r} vs finite-difference {ref!r}"
                )

    # -- families ---------------------------------------------------------

    @classmethod
    def constant(cls, rho: float) -> "ProfileCurve":
        """Cylinder profile r = rho."""
        if rho <= 0:
            raise ValueError("cylinder radius must be positive")
        zero = lambda t: 0.0
        return cls(
            r=lambda t: rho, dr=zero, d2r=zero, d3r=zero, d4r=zero,
            domain=(-math.inf, math.inf), family="constant",
        )

    @classmethod
    def circle(cls, rho: float, margin: float = 1e-6) -> "ProfileCurve":
        """Sphere profile r = sqrt(rho^2 - t^2) on (-rho, rho), shrunk by margin."""
        if rho <= 0:
            raise ValueError("sphere radius must be positive")

        def r(t: float) -> float:
            return math.sqrt(rho * rho - t * t)

        def dr(t: float) -> float:
            return -t / r(t)

        def d2r(t: float) -> float:
            return -rho * rho / r(t) ** 3

        def d3r(t: float) -> float:
            return -3.0 * rho * rho * t / r(t) ** 5

        def d4r(t: float) -> float:
            rr = r(t)
            return -3.0 * rho * rho * (rr * rr + 5.0 * t * t) / rr**7

        lim = rho * (1.0 - margin)
        return cls(r=r, dr=dr, d2r=d2r, d3r=d3r, d4r=d4r,
                   domain=(-lim, lim), family="circle")

    @classmethod
    def cosh(cls, scale: float = 1.0) -> "ProfileCurve":
        """Catenary-type profile r = scale * cosh(t / scale)."""
        if scale <= 0:
            raise ValueError("cosh scale must be positive")
        c = scale
        return cls(
            r=lambda t: c * math.cosh(t / c),
            dr=lambda t: math.sinh(t / c),
            d2r=lambda t: math.cosh(t / c) / c,
            d3r=lambda t: math.sinh(t / c) / c**2,
            d4r=lambda t: math.cosh(t / c) / c**3,
            domain=(-math.inf, math.inf),
            family="cosh",
        )

    @classmethod
    def from_callables(
        cls,
        r: Callable[[float], float],
        domain: tuple[float, float],
        dr: Callable[[float], float] | None = None,
        d2r: Callable[[float], float] | None = None,
        d3r: Callable[[float], float] | None = None,
        d4r: Callable[[float], float] | None = None,
        family: str = "custom",
    ) -> "ProfileCurve":
        """Wrap a plain radius function; missing derivatives use central differences."""

        def fd(order: int) -> Callable[[float], float]:
            def ev(t: float) -> float:
                h = _fd_step(t, order)
                if order == 1:
                    return (r(t + h) - r(t - h)) / (2 * h)
                if order == 2:
                    return (r(t + h) - 2 * r(t) + r(t - h)) / h**2
                if order == 3:
                    return (r(t + 2 * h) - 2 * r(t + h) + 2 * r(t - h) - r(t - 2 * h)) / (2 * h**3)
                raise ValueError(order)

            return ev

        return cls(
            r=r,
            dr=dr if dr is not None else fd(1),
            d2r=d2r if d2r is not None else fd(2),
            d3r=d3r if d3r is not None else fd(3),
            d4r=d4r,
            domain=domain,
            family=family,
        )
