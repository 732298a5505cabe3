"""Identity residuals for rank-5 tensors and the constrained-space rank check.

A curvature-derivative-type tensor T[m,i,j,k,l] (first slot the direction)
satisfies four identity families:

    T[m,i,j,k,l] = -T[m,j,i,k,l]                      (antisym_xy)
    T[m,i,j,k,l] = -T[m,i,j,l,k]                      (antisym_zu)
    T[m,i,j,k,l] + T[m,j,k,i,l] + T[m,k,i,j,l] = 0    (first Bianchi)
    T[m,i,j,k,l] + T[i,j,m,k,l] + T[j,m,i,k,l] = 0    (cyclic in m,i,j)

The rank check computes, by stacked nullspaces, the dimension of the linear
space cut out by these identities and the dimension left after additionally
imposing the quintic diagonal constraint L(X,X,Z,Z,X) = 0 over a polarizing
family of vector pairs.  The constrained dimension is expected to be zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankToleranceError

SV_REL_CUTOFF = 1e-8


@dataclass(frozen=True)
class SymmetryResiduals:
    antisym_xy: float
    antisym_zu: float
    first_bianchi: float
    cyclic_wxy: float

    def max(self) -> float:
        return max(self.antisym_xy, self.antisym_zu, self.first_bianchi, self.cyclic_wxy)


def symmetry_residuals(T: np.ndarray) -> SymmetryResiduals:
    """Max-norm residual of each rank-5 identity family."""
    if T.ndim != 5:
        raise ValueError("expected a rank-5 tensor")
    a1 = np.abs(T + T.transpose(0, 2, 1, 3, 4)).max()
    a2 = np.abs(T + T.transpose(0, 1, 2, 4, 3)).max()
    b1 = np.abs(T + T.transpose(0, 2, 3, 1, 4) + T.transpose(0, 3, 1, 2, 4)).max()
    b2 = np.abs(T + T.transpose(1, 2, 0, 3, 4) + T.transpose(2, 0, 1, 3, 4)).max()
    return SymmetryResiduals(float(a1), float(a2), float(b1), float(b2))


def _nullspace(M: np.ndarray, rel_cutoff: float, min_gap: float):
    """Orthonormal nullspace rows of M plus the singular-value gap at the cut.

    The cutoff is relative to max(sigma_max, 1); constraint matrices here
    have O(1) coefficients by construction, so an all-zero matrix is
    classified as rank 0 rather than full rank.
    """
    _, s, vt = np.linalg.svd(M)
    cut = rel_cutoff * max(float(s[0]) if s.size else 0.0, 1.0)
    rank = int((s > cut).sum())
    kept = float(s[rank - 1]) if rank > 0 else np.inf
    dropped = float(s[rank]) if rank < s.size else 0.0
    gap = kept / dropped if dropped > 0.0 else np.inf
    if gap < min_gap:
        raise RankToleranceError(
            f"ambiguous rank: singular-value gap {gap:.3e} below {min_gap:.1e}"
        )
    return vt[rank:], gap


def curvature_space_basis(n: int, rel_cutoff: float = SV_REL_CUTOFF) -> np.ndarray:
    """Orthonormal basis (rows, flattened) of (0,4) curvature-type tensors."""
    N = n**4
    eye = np.eye(N).reshape(N, n, n, n, n)
    rows = [
        (eye + eye.transpose(0, 2, 1, 3, 4)).reshape(N, N),
        (eye + eye.transpose(0, 1, 2, 4, 3)).reshape(N, N),
        (eye + eye.transpose(0, 2, 3, 1, 4) + eye.transpose(0, 3, 1, 2, 4)).reshape(N, N),
    ]
    M = np.concatenate(rows, axis=0)
    basis, _ = _nullspace(M, rel_cutoff, min_gap=1.0)
    return basis


@dataclass(frozen=True)
class RankCheckResult:
    n: int
    dim_sym: int
    dim_constrained: int
    gap_sym: float
    gap_constrained: float
    basis: np.ndarray  # dim_sym x n^5, flattened symmetric-space basis

    def as_tuple(self) -> tuple[int, int]:
        return self.dim_sym, self.dim_constrained


def rank5_symmetric_basis(n: int, rel_cutoff: float = SV_REL_CUTOFF):
    """Basis of the rank-5 identity space, via curvature-type slices.

    Antisymmetries and the first Bianchi identity act slice-by-slice in the
    last four arguments, so the space is parameterized by n curvature-type
    slices; only the cyclic identity couples slices and is imposed by SVD.
    """
    B4 = curvature_space_basis(n, rel_cutoff)
    d4 = B4.shape[0]
    B4t = B4.reshape(d4, n, n, n, n)
    # unknowns c[m, alpha]; constraint per component (p,q,r,s,t):
    #   sum_a c[p,a] B[a,q,r,s,t] + c[q,a] B[a,r,p,s,t] + c[r,a] B[a,p,q,s,t] = 0
    rows = np.zeros((n**5, n, d4))
    comp = 0
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    for t in range(n):
                        rows[comp, p] += B4t[:, q, r, s, t]
                        rows[comp, q] += B4t[:, r, p, s, t]
                        rows[comp, r] += B4t[:, p, q, s, t]
                        comp += 1
    M = rows.reshape(n**5, n * d4)
    cbasis, gap = _nullspace(M, rel_cutoff, min_gap=1.0)
    tensors = np.einsum("cma,aijkl->cmijkl", cbasis.reshape(-1, n, d4), B4t)
    return tensors.reshape(-1, n**5), gap


def rank5_identity_dims(
    n: int,
    extra_pairs: int | None = None,
    seed: int = 2024,
    rel_cutoff: float = SV_REL_CUTOFF,
    min_gap: float = 1e6,
) -> RankCheckResult:
    """Dimensions of the rank-5 identity space before and after the diagonal
    vanishing constraint L(X,X,Z,Z,X) = 0.

    The polarizing family is every ordered basis pair plus seeded Gaussian
    pairs; since each pair contributes one linear functional, the family is
    sized past dim_sym so a zero constrained space is decidable.  Raises
    RankToleranceError when the deciding singular-value gap is below
    ``min_gap``.
    """
    if not 2 <= n <= 4:
        raise ValueError("rank check is sized for 2 <= n <= 4")
    basis, gap_sym = rank5_symmetric_basis(n, rel_cutoff)
    dim_sym = basis.shape[0]
    if extra_pairs is None:
        extra_pairs = max(20, dim_sym + 12)
    rng = np.random.default_rng(seed)
    pairs = [
        (np.eye(n)[i], np.eye(n)[j]) for i in range(n) for j in range(n)
    ] + [tuple(rng.normal(size=(2, n))) for _ in range(extra_pairs)]

    Bt = basis.reshape(dim_sym, n, n, n, n, n)
    rows = np.empty((len(pairs), dim_sym))
    for r, (X, Z) in enumerate(pairs):
        rows[r] = np.einsum(
            "cmijkl,m,i,j,k,l->c", Bt, X, X, Z, Z, X, optimize=True
        )
    if dim_sym == 0:
        return RankCheckResult(n, 0, 0, gap_sym, np.inf, basis)
    _, s, _ = np.linalg.svd(rows)
    cut = rel_cutoff * max(float(s[0]), 1.0)
    rank = int((s > cut).sum())
    dim_constrained = dim_sym - rank
    kept = float(s[rank - 1]) if rank else np.inf
    dropped = float(s[rank]) if rank < s.size else 0.0
    gap_constrained = kept / dropped if dropped > 0.0 else kept / cut
    if gap_constrained < min_gap:
        raise RankToleranceError(
            f"ambiguous constrained rank: gap {gap_constrained:.3e}"
        )
    return RankCheckResult(n, dim_sym, dim_constrained, gap_sym, gap_constrained, basis)
