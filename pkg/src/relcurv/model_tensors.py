"""Model curvature-type tensors built from the metric and a 1-form.

build_pi is the constant-curvature model (0,4) tensor, build_phi its
direction-weighted companion, and build_Pi the rank-5 gradient-type pattern
that carries the same identities as a curvature derivative.  Full
g-contraction inner products and norms live here as well.
"""

from __future__ import annotations

import numpy as np

from .errors import NotUnitError
from .jets import MetricJet

UNIT_TOL = 1e-10


def build_pi(jet: MetricJet) -> np.ndarray:
    """pi(X,Y,Z,U) = g(Y,Z) g(X,U) - g(X,Z) g(Y,U), componentwise."""
    g = jet.g
    return np.einsum("jk,il->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g)


def covector_norm(omega: np.ndarray, jet: MetricJet) -> float:
    """g-norm of a covector, ||omega||^2 = g^{ij} omega_i omega_j."""
    return float(np.sqrt(omega @ jet.inverse() @ omega))


def build_phi(jet: MetricJet, eta: np.ndarray, unit_tol: float = UNIT_TOL) -> np.ndarray:
    """Four-term (0,4) tensor from the metric and a unit covector eta:

    Phi(X,Y,Z,U) = g(Y,Z) eta(X) eta(U) - g(X,Z) eta(Y) eta(U)
                 + g(X,U) eta(Y) eta(Z) - g(Y,U) eta(X) eta(Z).
    """
    eta = np.asarray(eta, dtype=float)
    nrm = covector_norm(eta, jet)
    if abs(nrm - 1.0) > unit_tol:
        raise NotUnitError(f"covector has g-norm {nrm!r}, expected 1")
    g = jet.g
    return (
        np.einsum("jk,i,l->ijkl", g, eta, eta)
        - np.einsum("ik,j,l->ijkl", g, eta, eta)
        + np.einsum("il,j,k->ijkl", g, eta, eta)
        - np.einsum("jl,i,k->ijkl", g, eta, eta)
    )


def build_Pi(omega: np.ndarray, jet: MetricJet) -> np.ndarray:
    """Rank-5 gradient-type pattern of a 1-form:

    Pi(omega)(W,X,Y,Z,U) = 2 omega(W) pi(X,Y,Z,U) + omega(X) pi(W,Y,Z,U)
        + omega(Y) pi(X,W,Z,U) + omega(Z) pi(X,Y,W,U) + omega(U) pi(X,Y,Z,W).

    The result satisfies every identity of a curvature derivative.
    """
    omega = np.asarray(omega, dtype=float)
    pi = build_pi(jet)
    return (
        2.0 * np.einsum("w,xyzu->wxyzu", omega, pi)
        + np.einsum("x,wyzu->wxyzu", omega, pi)
        + np.einsum("y,xwzu->wxyzu", omega, pi)
        + np.einsum("z,xywu->wxyzu", omega, pi)
        + np.einsum("u,xyzw->wxyzu", omega, pi)
    )


def raise_all(T: np.ndarray, jet: MetricJet) -> np.ndarray:
    """Raise every index of a covariant tensor with the inverse metric."""
    ginv = jet.inverse()
    out = T
    for axis in range(T.ndim):
        out = np.tensordot(out, ginv, axes=(0, 0))
        # tensordot moves the contracted axis to the end; cycling each axis
        # through position 0 restores the original ordering after ndim steps.
    return out


def g_inner(S: np.ndarray, T: np.ndarray, jet: MetricJet) -> float:
    """Full g-contraction inner product <S, T> of equal-rank covariant tensors."""
    return float(np.sum(S * raise_all(T, jet)))


def g_norm(T: np.ndarray, jet: MetricJet) -> float:
    return float(np.sqrt(max(g_inner(T, T, jet), 0.0)))
