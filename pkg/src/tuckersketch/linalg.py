"""Matrix factorizations with pinned sign conventions.

Every routine here is deterministic for a fixed input: singular vectors are
sign-normalized so the largest-magnitude entry of each left vector is
positive (ties broken by lowest index), and QR bases make the corresponding
R diagonal nonnegative. Rank decisions use the threshold 1e-12 * sigma_1.
"""

import warnings
from typing import NamedTuple

import numpy as np

RANK_RTOL = 1e-12


class RankDeficiencyWarning(UserWarning):
    """Requested basis width exceeds the numerical rank of the input."""


class SvdResult(NamedTuple):
    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


def svd(a):
    """Full (thin) SVD with the package sign convention.

    Returns ``SvdResult(u, s, vt)`` with ``u @ diag(s) @ vt == a``, singular
    values non-increasing, and each column of ``u`` flipped so its
    largest-magnitude entry is positive.
    """
    a = np.asarray(a, dtype=np.float64)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    u, vt = _fix_signs(u, vt)
    return SvdResult(u, s, vt)


def column_sign_flips(u):
    """+-1 per column making each column's largest-magnitude entry positive.

    Ties take the lowest row index (argmax semantics).
    """
    idx = np.argmax(np.abs(u), axis=0)
    return np.where(u[idx, np.arange(u.shape[1])] < 0, -1.0, 1.0)


def _fix_signs(u, vt):
    flip = column_sign_flips(u)
    return u * flip, vt * flip[:, None]


def delta_tail(s, k):
    """Tail energy sqrt(sum_{i >= k} s_i^2) for 1-based ``k``.

    ``s`` must be non-increasing; ``k`` past the end of ``s`` gives 0.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError("singular values must be a 1-d sequence")
    if np.any(np.diff(s) > 0):
        raise ValueError("singular values must be non-increasing")
    if k < 1:
        raise ValueError(f"tail index must be >= 1, got {k}")
    if k > s.size:
        return 0.0
    return float(np.linalg.norm(s[k - 1:]))


def numerical_rank(s):
    """Number of singular values above 1e-12 * sigma_1."""
    s = np.asarray(s, dtype=np.float64)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > RANK_RTOL * s[0]))


def fixed_rank_basis(a, mu):
    """Rank-``mu`` orthonormal basis of the range of ``a`` via truncated SVD.

    Returns ``(q, s)`` with ``q`` the leading ``mu`` left singular vectors and
    ``s = diag(sigma_1..sigma_mu) @ vt``, so ``q @ s`` is the best rank-``mu``
    approximation of ``a`` and ``||q @ s - a||_2 <= sigma_{mu+1}(a)``.

    If ``mu`` exceeds the numerical rank, the trailing columns of ``q`` are an
    arbitrary orthonormal completion and a :class:`RankDeficiencyWarning` is
    emitted. The row norms of ``s`` are exactly the leading singular values,
    so callers can re-derive the rank decision from the returned data.
    """
    a = np.asarray(a, dtype=np.float64)
    if not 1 <= mu <= min(a.shape):
        raise ValueError(
            f"basis width must be in 1..{min(a.shape)} for shape {a.shape}, got {mu}"
        )
    u, sig, vt = svd(a)
    if numerical_rank(sig) < mu:
        warnings.warn(
            f"requested basis width {mu} exceeds numerical rank {numerical_rank(sig)}",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    q = u[:, :mu]
    s = sig[:mu, None] * vt[:mu]
    return q, s


def orthonormal_basis_qr(a):
    """Orthonormal basis for the columns of ``a`` via economy QR.

    The R diagonal is made nonnegative, so an input with orthonormal columns
    comes back unchanged. Columns beyond the numerical rank (judged from the
    R diagonal, the cheap stand-in for sigma_1 here) are still orthonormal but
    arbitrary, and a :class:`RankDeficiencyWarning` is emitted.
    """
    q, rank = qr_basis_with_rank(a)
    if rank < q.shape[1]:
        warnings.warn(
            f"columns are numerically rank deficient ({rank} < {q.shape[1]})",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    return q


def qr_basis_with_rank(a):
    """Sign-normalized economy QR basis plus the R-diagonal rank decision."""
    a = np.asarray(a, dtype=np.float64)
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    q = q * np.where(diag < 0, -1.0, 1.0)
    return q, qr_rank(diag)


def qr_rank(rdiag):
    """Rank decision from QR diagonal magnitudes, threshold 1e-12 * max."""
    mags = np.abs(np.asarray(rdiag, dtype=np.float64))
    if mags.size == 0 or mags.max() == 0.0:
        return 0
    return int(np.count_nonzero(mags > RANK_RTOL * mags.max()))
