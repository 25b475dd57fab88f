"""Trust communities from the spectrum of ``A^T A``.

The similarity of two object-trust vectors is ``<A phi | A psi>``, the
inner product of the recommender vectors they induce.  Its extremal
directions are the eigenspaces of ``A^T A``; each eigenspace is a latent
community of objects with projector ``P_k``.  Projecting a private trust
vector onto ``P_k`` gives community-specific trust, and reweighting the SVD
pieces ``Pi_k = A P_k / sqrt(lambda_k)`` by the user's affinity to each
community gives a personalized recommendation matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .graph import TrustMatrix

__all__ = [
    "jacobi_eigh",
    "CommunityDecomposition",
    "similarity",
    "decompose",
    "community_trust",
    "community_affinity",
    "personalized_matrix",
    "community_report",
]

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
KERNEL_TOL = 1e-12
GROUPING_TOL = 1e-8


def _values(A):
    return np.asarray(A.values if isinstance(A, TrustMatrix) else A, dtype=float)


def jacobi_eigh(M, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with eigenvalues ``w`` in descending order and
    orthonormal eigenvectors in the columns of ``V``.  Sweeps stop once the
    off-diagonal Frobenius norm falls below ``tol`` times the norm of ``M``.
    """
    a = np.array(M, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix must be symmetric")
    a = (a + a.T) / 2
    V = np.eye(n)
    scale = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, np.sum(a * a) - np.sum(np.diag(a) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    # theta would overflow; tan of the rotation angle is apq / diff
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass(frozen=True)
class CommunityDecomposition:
    """Communities ``k = 0 .. m-1`` in order of decreasing eigenvalue.

    ``kernel_projector`` covers the directions with (numerically) zero
    eigenvalue, which carry no community and no SVD factor.
    """

    eigenvalues: np.ndarray
    projectors: np.ndarray  # (m, J, J)
    svd_factors: np.ndarray  # (m, U, J)
    bases: tuple  # per community, (J, multiplicity) orthonormal columns
    kernel_projector: np.ndarray
    rows: tuple = ()
    cols: tuple = ()
    multiplicities: tuple = field(default=())

    @property
    def m(self) -> int:
        return len(self.eigenvalues)

    def check_index(self, k):
        if not 0 <= k < self.m:
            raise IndexError(f"community {k} out of range (m = {self.m})")

    def reconstruct(self):
        """``sum_k sqrt(lambda_k) Pi_k``."""
        if self.m == 0:
            return np.zeros(self.svd_factors.shape[1:])
        return np.einsum("k,kuj->uj", np.sqrt(self.eigenvalues), self.svd_factors)


def similarity(phi, psi, A):
    """``<A phi | A psi>``."""
    a = _values(A)
    phi, psi = np.asarray(phi, dtype=float), np.asarray(psi, dtype=float)
    if phi.shape != (a.shape[1],) or psi.shape != (a.shape[1],):
        raise ConfigurationError(
            f"trust vectors must have length {a.shape[1]}, got {phi.shape} and {psi.shape}")
    return float(np.dot(a @ phi, a @ psi))


def decompose(A, grouping_tol=None, max_communities=None) -> CommunityDecomposition:
    """Spectral communities of ``A^T A``.

    Eigenvalues closer than ``grouping_tol`` (default ``1e-8 * lambda_1``)
    are merged into one community; eigenvalues below ``1e-12 * lambda_1``
    form the kernel.  ``max_communities`` keeps only the leading ones, the
    rest joining the kernel projector.
    """
    a = _values(A)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    U, J = a.shape
    w, V = jacobi_eigh(a.T @ a)
    top = max(w[0], 0.0) if J else 0.0
    if grouping_tol is None:
        grouping_tol = GROUPING_TOL * top

    groups = []
    kernel_cols = []
    for idx, lam in enumerate(w):
        if top == 0.0 or lam < KERNEL_TOL * top:
            kernel_cols.append(idx)
        elif groups and groups[-1][-1][1] - lam <= grouping_tol:
            groups[-1].append((idx, lam))
        else:
            groups.append([(idx, lam)])
    if max_communities is not None and len(groups) > max_communities:
        for g in groups[max_communities:]:
            kernel_cols.extend(i for i, _ in g)
        groups = groups[:max_communities]

    eigenvalues, projectors, factors, bases, mults = [], [], [], [], []
    for g in groups:
        cols = [i for i, _ in g]
        lam = float(np.mean([w[i] for i in cols]))
        B = V[:, cols]
        P = B @ B.T
        eigenvalues.append(lam)
        projectors.append(P)
        factors.append(a @ P / math.sqrt(lam))
        bases.append(B)
        mults.append(len(cols))
    K = V[:, kernel_cols]
    rows = A.rows if isinstance(A, TrustMatrix) else ()
    cols_ = A.cols if isinstance(A, TrustMatrix) else ()
    return CommunityDecomposition(
        np.array(eigenvalues),
        np.array(projectors).reshape(len(groups), J, J),
        np.array(factors).reshape(len(groups), U, J),
        tuple(bases),
        K @ K.T,
        rows,
        cols_,
        tuple(mults),
    )


def community_trust(tau, decomp: CommunityDecomposition, k: int):
    """``P_k tau``: the part of ``tau`` inside community ``k``."""
    decomp.check_index(k)
    return decomp.projectors[k] @ np.asarray(tau, dtype=float)


def community_affinity(tau, decomp: CommunityDecomposition, k: int) -> float:
    """``<tau | P_k tau>``, the weight ``tau`` puts on community ``k``."""
    decomp.check_index(k)
    tau = np.asarray(tau, dtype=float)
    # ||B^T tau||^2 is the same quantity, and nonnegative by construction
    return float(np.sum((decomp.bases[k].T @ tau) ** 2))


def personalized_matrix(A, tau, decomp: CommunityDecomposition):
    """``sum_k sqrt(<tau | P_k tau>) Pi_k``, returned like ``A`` (matrix or array)."""
    weights = np.sqrt([community_affinity(tau, decomp, k) for k in range(decomp.m)])
    a = _values(A)
    out = np.einsum("k,kuj->uj", weights, decomp.svd_factors) if decomp.m else np.zeros_like(a)
    if isinstance(A, TrustMatrix):
        return TrustMatrix(A.rows, A.cols, out)
    return out


def community_report(decomp: CommunityDecomposition, tau=None, top: int = 3):
    """Plain-data summary: eigenvalues, top-weighted objects per community, affinities."""
    labels = decomp.cols or tuple(str(j) for j in range(decomp.kernel_projector.shape[0]))
    communities = []
    for k in range(decomp.m):
        weight = np.diag(decomp.projectors[k])
        order = np.argsort(-weight, kind="stable")[:top]
        entry = {
            "community": k,
            "eigenvalue": float(decomp.eigenvalues[k]),
            "multiplicity": decomp.multiplicities[k],
            "top_objects": [{"object": labels[j], "weight": float(weight[j])} for j in order],
        }
        if tau is not None:
            entry["affinity"] = community_affinity(tau, decomp, k)
        communities.append(entry)
    report = {"eigenvalues": [float(x) for x in decomp.eigenvalues], "communities": communities}
    if tau is not None:
        t = np.asarray(tau, dtype=float)
        report["kernel_affinity"] = float(t @ decomp.kernel_projector @ t)
        report["trust_norm_squared"] = float(t @ t)
    return report
