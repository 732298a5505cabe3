"""Curvature pipeline: connection coefficients, curvature tensor, its
covariant derivative, Ricci contraction, scalar curvature and its gradient.

Sign conventions: the curvature operator is R(X,Y) = [nabla_X, nabla_Y]
- nabla_[X,Y] and the (0,4) tensor is R(X,Y,Z,U) = g(R(X,Y)Z, U), stored as
riem[i,j,k,l].  The Ricci contraction Ric_jk = g^{il} R_ijkl makes the round
sphere's scalar curvature positive.  The (0,5) covariant derivative stores
the differentiation direction in the first slot: nabla_riem[m,i,j,k,l]
= (nabla_m R)_{ijkl}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SymmetryViolationError
from .jets import MetricJet, MetricSpec, evaluate_metric_jet


class ChristoffelJet(NamedTuple):
    gamma: np.ndarray    # gamma[i,j,k] = Gamma^i_{jk}
    dgamma: np.ndarray   # dgamma[m,i,j,k] = d_m Gamma^i_{jk}
    d2gamma: np.ndarray | None  # d2gamma[p,m,i,j,k] = d_p d_m Gamma^i_{jk}


def christoffel(jet: MetricJet) -> ChristoffelJet:
    """Levi-Civita connection coefficients and their first two derivatives.

    Gamma^i_jk = (1/2) g^{il} (d_j g_lk + d_k g_jl - d_l g_jk); the
    derivative arrays differentiate this formula through the inverse metric.
    Second derivatives are produced only when the jet carries d3g.
    """
    jet.validate()
    g = jet.g
    dg = jet.dg
    d2g = jet.d2g
    ginv = jet.inverse()

    # S[l,j,k] = d_j g_lk + d_k g_jl - d_l g_jk
    S = dg.transpose(1, 0, 2) + dg.transpose(2, 1, 0) - dg
    gamma = 0.5 * np.einsum("il,ljk->ijk", ginv, S)

    # d_m g^{il} = -g^{ia} (d_m g_ab) g^{bl}
    dginv = -np.einsum("ia,mab,bl->mil", ginv, dg, ginv)
    dS = d2g.transpose(0, 2, 1, 3) + d2g.transpose(0, 3, 2, 1) - d2g
    dgamma = 0.5 * (
        np.einsum("mil,ljk->mijk", dginv, S) + np.einsum("il,mljk->mijk", ginv, dS)
    )

    if jet.d3g is None:
        return ChristoffelJet(gamma, dgamma, None)

    d3g = jet.d3g
    d2ginv = -(
        np.einsum("pia,mab,bl->pmil", dginv, dg, ginv)
        + np.einsum("ia,pmab,bl->pmil", ginv, d2g, ginv)
        + np.einsum("ia,mab,pbl->pmil", ginv, dg, dginv)
    )
    d2S = d3g.transpose(0, 1, 3, 2, 4) + d3g.transpose(0, 1, 4, 3, 2) - d3g
    d2gamma = 0.5 * (
        np.einsum("pmil,ljk->pmijk", d2ginv, S)
        + np.einsum("mil,pljk->pmijk", dginv, dS)
        + np.einsum("pil,mljk->pmijk", dginv, dS)
        + np.einsum("il,pmljk->pmijk", ginv, d2S)
    )
    return ChristoffelJet(gamma, dgamma, d2gamma)


def _riemann_up(ch: ChristoffelJet) -> np.ndarray:
    """R^l_{ijk} as the e_l coefficient of R(e_i, e_j) e_k."""
    gamma, dgamma = ch.gamma, ch.dgamma
    return (
        np.einsum("iljk->lijk", dgamma)
        - np.einsum("jlik->lijk", dgamma)
        + np.einsum("lip,pjk->lijk", gamma, gamma)
        - np.einsum("ljp,pik->lijk", gamma, gamma)
    )


def riemann(jet: MetricJet, ch: ChristoffelJet | None = None) -> np.ndarray:
    """Covariant (0,4) curvature tensor riem[i,j,k,l] = R(e_i,e_j,e_k,e_l)."""
    if ch is None:
        ch = christoffel(jet)
    rup = _riemann_up(ch)
    return np.einsum("ml,mijk->ijkl", jet.g, rup)


def nabla_riemann(jet: MetricJet, ch: ChristoffelJet | None = None) -> np.ndarray:
    """Covariant derivative (nabla_m R)_{ijkl}, first index = direction.

    Requires third metric derivatives (raises JetOrderInsufficientError via
    the jet otherwise).
    """
    jet.require_order3()
    if ch is None:
        ch = christoffel(jet)
    gamma, dgamma, d2gamma = ch
    assert d2gamma is not None
    rup = _riemann_up(ch)
    riem = np.einsum("ml,mijk->ijkl", jet.g, rup)

    drup = (
        np.einsum("miljk->mlijk", d2gamma)
        - np.einsum("mjlik->mlijk", d2gamma)
        + np.einsum("mlip,pjk->mlijk", dgamma, gamma)
        + np.einsum("lip,mpjk->mlijk", gamma, dgamma)
        - np.einsum("mljp,pik->mlijk", dgamma, gamma)
        - np.einsum("ljp,mpik->mlijk", gamma, dgamma)
    )
    driem = np.einsum("mql,qijk->mijkl", jet.dg, rup) + np.einsum(
        "ql,mqijk->mijkl", jet.g, drup
    )
    nabla = (
        driem
        - np.einsum("pmi,pjkl->mijkl", gamma, riem)
        - np.einsum("pmj,ipkl->mijkl", gamma, riem)
        - np.einsum("pmk,ijpl->mijkl", gamma, riem)
        - np.einsum("pml,ijkp->mijkl", gamma, riem)
    )
    return nabla


def ricci_and_scalar(riem: np.ndarray, jet: MetricJet) -> tuple[np.ndarray, float]:
    """Ricci tensor Ric_jk = g^{il} R_ijkl and scalar tau = g^{jk} Ric_jk."""
    ginv = jet.inverse()
    ricci = np.einsum("il,ijkl->jk", ginv, riem)
    tau = float(np.einsum("jk,jk->", ginv, ricci))
    return ricci, tau


@dataclass(frozen=True)
class CurvatureBundle:
    """All pointwise curvature data derived from a metric jet."""

    jet: MetricJet
    gamma: np.ndarray
    dgamma: np.ndarray
    d2gamma: np.ndarray
    riem: np.ndarray
    nabla_riem: np.ndarray
    ricci: np.ndarray
    tau: float
    dtau: np.ndarray

    @property
    def n(self) -> int:
        return self.jet.n


def dtau_from_bianchi(
    nabla_riem: np.ndarray,
    jet: MetricJet,
    check_tol: float | None = 1e-6,
) -> np.ndarray:
    """Gradient covector of the scalar curvature from the (0,5) derivative.

    The twice-contracted differential identity of the curvature derivative
    gives (dtau)_m = g^{il} g^{jk} (nabla_m R)_{ijkl}, keeping dtau at the
    same derivative order as nabla R instead of differencing tau.  When
    ``check_tol`` is set, the rank-5 identity residuals are verified first;
    a violation makes the contraction meaningless.
    """
    if check_tol is not None:
        from .symmetries import symmetry_residuals

        res = symmetry_residuals(nabla_riem)
        scale = max(float(np.abs(nabla_riem).max()), 1.0)
        if res.max() > check_tol * scale:
            raise SymmetryViolationError(
                f"rank-5 input fails identity checks: max residual {res.max():.3e}"
            )
    ginv = jet.inverse()
    return np.einsum("il,jk,mijkl->m", ginv, ginv, nabla_riem)


def curvature_bundle(spec: MetricSpec, p, check_tol: float | None = None) -> CurvatureBundle:
    """Evaluate the full pipeline at a point of the given chart."""
    jet = evaluate_metric_jet(spec, p)
    ch = christoffel(jet)
    riem = riemann(jet, ch)
    nr = nabla_riemann(jet, ch)
    ricci, tau = ricci_and_scalar(riem, jet)
    dtau = dtau_from_bianchi(nr, jet, check_tol=check_tol)
    return CurvatureBundle(
        jet=jet, gamma=ch.gamma, dgamma=ch.dgamma, d2gamma=ch.d2gamma,
        riem=riem, nabla_riem=nr, ricci=ricci, tau=tau, dtau=dtau,
    )
