"""Low multilinear rank approximation of order-N tensors.

All algorithms return a :class:`TuckerApprox` whose core is the source tensor
projected onto the orthonormal factor bases, so the reconstruction error obeys
``||a - recon||^2 = ||a||^2 - ||core||^2`` up to roundoff.

Randomized algorithms are pure functions of (tensor, plan/parameters, seed);
see :mod:`tuckersketch.sketch` for the stream derivation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .core import SparseTensor, frob_norm, mode_product, unfold
from .sketch import (
    GaussianStream,
    default_plan,
    gaussian_matrix,
    sketch_full_gaussian,
    sketch_khatri_rao,
    sketch_mode,
)

ORTHO_TOL = 1e-10


class RankTooLargeError(ValueError):
    """Requested multilinear rank exceeds a tensor dimension."""


def _dims_of(a):
    return a.dims if isinstance(a, SparseTensor) else tuple(np.asarray(a).shape)


@dataclass
class TuckerApprox:
    """Core tensor plus one orthonormal factor matrix per mode.

    ``factors[n-1]`` has shape (I_n, mu_n); orthonormality is checked at
    construction. ``rank_warnings`` lists modes whose requested width exceeded
    the numerical rank of the sketched/unfolded data (those trailing basis
    columns are arbitrary). ``fit_history`` is populated by :func:`hooi`.
    """

    core: np.ndarray
    factors: list
    rank_warnings: tuple = ()
    fit_history: tuple = ()

    def __post_init__(self):
        self.core = np.asarray(self.core, dtype=np.float64)
        self.factors = [np.asarray(q, dtype=np.float64) for q in self.factors]
        if self.core.ndim != len(self.factors):
            raise ValueError(
                f"core order {self.core.ndim} does not match {len(self.factors)} factors"
            )
        for n, q in enumerate(self.factors, start=1):
            if q.ndim != 2 or q.shape[1] != self.core.shape[n - 1]:
                raise ValueError(
                    f"factor {n} shape {q.shape} does not match core dim "
                    f"{self.core.shape[n - 1]}"
                )
            gram_err = np.abs(q.T @ q - np.eye(q.shape[1])).max()
            if gram_err > ORTHO_TOL:
                raise ValueError(
                    f"factor {n} is not orthonormal (deviation {gram_err:.2e})"
                )

    @property
    def dims(self):
        return tuple(q.shape[0] for q in self.factors)

    @property
    def target_rank(self):
        return self.core.shape

    def source_residuals(self, source):
        """Consistency of this approximation against its source tensor.

        Returns ``(core_rel, pythagoras_rel)``: the relative error between the
        stored core and ``source x_n Q_n^T``, and the relative gap in
        ``||a - recon||^2 == ||a||^2 - ||core||^2``.
        """
        norm_a = frob_norm(source)
        if norm_a == 0.0:
            return 0.0, 0.0
        chain = _project(source, self.factors)
        core_rel = float(np.linalg.norm((chain - self.core).ravel())) / norm_a
        err = rlne(source, self) * norm_a
        pyth = abs(err**2 - (norm_a**2 - frob_norm(self.core) ** 2)) / norm_a**2
        return core_rel, float(pyth)


@dataclass
class Metrics:
    rlne: float
    fit: float
    wall_time_s: float


_IDENTITY_CACHE = {}


def _identity_factor(dim):
    if dim not in _IDENTITY_CACHE:
        _IDENTITY_CACHE[dim] = np.eye(dim)
    return _IDENTITY_CACHE[dim]


def _project(a, factors, skip=None):
    """``a x_m Q_m^T`` over all modes (except ``skip``), densified output.

    Contracts in decreasing shrink ratio, ties by ascending mode; factors that
    are the cached identity (degenerate full-rank modes) are no-ops and are
    skipped.
    """
    dims = _dims_of(a)
    jobs = []
    for m in range(1, len(dims) + 1):
        if m == skip:
            continue
        q = factors[m - 1]
        if q is _IDENTITY_CACHE.get(q.shape[0]):
            continue
        jobs.append((dims[m - 1] / q.shape[1], m, q))
    out = a
    for _, m, q in sorted(jobs, key=lambda j: (-j[0], j[1])):
        out = mode_product(out, m, q.T)
    if isinstance(out, SparseTensor):
        out = out.densify()
    return out


def reconstruct(approx):
    """Dense tensor ``core x_n Q_n`` of the approximation."""
    out = approx.core
    for n, q in enumerate(approx.factors, start=1):
        out = mode_product(out, n, q)
    return out


def rlne(a, approx):
    """Relative low-rank norm error ||a - reconstruct|| / ||a||."""
    norm_a = frob_norm(a)
    recon = reconstruct(approx)
    if isinstance(a, SparseTensor):
        if a.nnz:
            recon[tuple(a.coords.T)] -= a.values
        err = float(np.linalg.norm(recon.ravel()))
    else:
        err = float(np.linalg.norm((np.asarray(a) - recon).ravel()))
    if norm_a == 0.0:
        return 0.0 if err == 0.0 else math.inf
    return err / norm_a


def metrics_for(a, approx, wall_time_s=float("nan")):
    e = rlne(a, approx)
    return Metrics(rlne=e, fit=1.0 - e, wall_time_s=wall_time_s)


def _validate_rank(dims, target_rank):
    if len(target_rank) != len(dims):
        raise ValueError(
            f"target rank has {len(target_rank)} entries for an order-{len(dims)} tensor"
        )
    for n, (mu, dim) in enumerate(zip(target_rank, dims), start=1):
        if mu < 1:
            raise ValueError(f"target rank for mode {n} must be >= 1, got {mu}")
        if mu > dim:
            raise RankTooLargeError(
                f"target rank {mu} for mode {n} exceeds dimension {dim}"
            )


def _basis_rank_from_s(s):
    # row norms of s are exactly the leading singular values
    return linalg.numerical_rank(np.linalg.norm(s, axis=1))


def tucker_svd_batch(a, plan):
    """Batch sketched decomposition: every mode sketches the original tensor.

    For each mode independently, compress all other modes of ``a`` with
    Gaussian matrices, take the rank-mu_n SVD basis of the mode-n unfolding of
    the sketch, then project ``a`` onto all the bases at once for the core.
    """
    dims = _dims_of(a)
    target_rank = plan.target_rank
    _validate_rank(dims, target_rank)
    factors = [None] * len(dims)
    warned = []
    for n in range(1, len(dims) + 1):
        mu = target_rank[n - 1]
        if mu == dims[n - 1]:
            factors[n - 1] = _identity_factor(mu)
            continue
        b = sketch_mode(a, n, plan, GaussianStream(plan.seed, n))
        q, s = linalg.fixed_rank_basis(b, mu)
        if _basis_rank_from_s(s) < mu:
            warned.append(n)
        factors[n - 1] = q
    core = _project(a, factors)
    return TuckerApprox(core, factors, rank_warnings=tuple(warned))


def tucker_svd_seq(a, plan):
    """Sequential sketched decomposition (the recommended default).

    Modes are processed in ``plan.order``; each processed mode immediately
    shrinks the working tensor, so later sketches act on smaller data. The
    final working tensor is the core.
    """
    dims = list(_dims_of(a))
    target_rank = plan.target_rank
    _validate_rank(dims, target_rank)
    c = a
    factors = [None] * len(dims)
    warned = []
    for n in plan.order:
        mu = target_rank[n - 1]
        if mu == dims[n - 1]:
            factors[n - 1] = _identity_factor(mu)
            continue
        b = sketch_mode(c, n, plan, GaussianStream(plan.seed, n))
        q, s = linalg.fixed_rank_basis(b, mu)
        if _basis_rank_from_s(s) < mu:
            warned.append(n)
        factors[n - 1] = q
        c = mode_product(c, n, q.T)
        dims[n - 1] = mu
    if isinstance(c, SparseTensor):
        c = c.densify()
    return TuckerApprox(c, factors, rank_warnings=tuple(sorted(warned)))


def _gaussian_sequential(a, target_rank, lprime, seed, sketcher):
    dims = list(_dims_of(a))
    _validate_rank(dims, target_rank)
    lprimes = _per_mode_lprime(lprime, target_rank)
    c = a
    factors = [None] * len(dims)
    warned = []
    for n in range(1, len(dims) + 1):
        mu = target_rank[n - 1]
        if mu == dims[n - 1]:
            factors[n - 1] = _identity_factor(mu)
            continue
        b = sketcher(c, n, lprimes[n - 1], GaussianStream(seed, n))
        q, rank = linalg.qr_basis_with_rank(b)
        if rank < mu:
            warned.append(n)
        factors[n - 1] = q[:, :mu]
        c = mode_product(c, n, factors[n - 1].T)
        dims[n - 1] = mu
    if isinstance(c, SparseTensor):
        c = c.densify()
    return TuckerApprox(c, factors, rank_warnings=tuple(warned))


def _per_mode_lprime(lprime, target_rank):
    if np.isscalar(lprime):
        out = [int(lprime)] * len(target_rank)
    else:
        out = [int(x) for x in lprime]
        if len(out) != len(target_rank):
            raise ValueError(f"need one sketch width per mode, got {out}")
    for mu, lp in zip(target_rank, out):
        if lp < mu:
            raise ValueError(f"sketch width {lp} is below target rank {mu}")
    return out


def ran_tucker(a, target_rank, lprime=None, oversampling=10, seed=0):
    """Sequential decomposition with one unstructured Gaussian sketch per mode.

    Reference point for the structured sketches: the test matrix is a full
    (prod of other dims) x lprime Gaussian, and the basis comes from QR
    truncated to mu_n columns. ``lprime`` defaults to mu_n + oversampling.
    """
    target_rank = tuple(int(r) for r in target_rank)
    if lprime is None:
        lprime = [mu + oversampling for mu in target_rank]
    return _gaussian_sequential(a, target_rank, lprime, seed, sketch_full_gaussian)


def kr_tucker(a, target_rank, lprime=None, oversampling=10, seed=0):
    """Sequential decomposition sketching with Khatri-Rao structured Gaussians.

    Same loop as :func:`ran_tucker` but the test matrix is a column-wise
    Kronecker chain of per-mode I_m x lprime Gaussians, so only
    sum(I_m) * lprime variates are drawn per mode.
    """
    target_rank = tuple(int(r) for r in target_rank)
    if lprime is None:
        lprime = [mu + oversampling for mu in target_rank]
    return _gaussian_sequential(a, target_rank, lprime, seed, sketch_khatri_rao)


def truncated_hosvd(a, target_rank):
    """Leading-mu_n left singular vectors of each unfolding, then project.

    Deterministic baseline. Dense inputs take the SVD of each unfolding;
    sparse inputs use the eigendecomposition of the (small) Gram matrix of the
    unfolding, which never densifies the tensor.
    """
    dims = _dims_of(a)
    target_rank = tuple(int(r) for r in target_rank)
    _validate_rank(dims, target_rank)
    factors = [None] * len(dims)
    warned = []
    for n in range(1, len(dims) + 1):
        mu = target_rank[n - 1]
        if mu == dims[n - 1]:
            factors[n - 1] = _identity_factor(mu)
            continue
        if isinstance(a, SparseTensor):
            x = a.unfold_csr(n)
            gram = (x @ x.T).toarray()
            evals, evecs = np.linalg.eigh(gram)
            order = np.argsort(evals)[::-1]
            sig = np.sqrt(np.clip(evals[order], 0.0, None))
            u = evecs[:, order]
            q = (u * linalg.column_sign_flips(u))[:, :mu]
        else:
            u, sig, _ = linalg.svd(unfold(a, n))
            q = u[:, :mu]
        if linalg.numerical_rank(sig) < mu:
            warned.append(n)
        factors[n - 1] = q
    core = _project(a, factors)
    return TuckerApprox(core, factors, rank_warnings=tuple(warned))


def hooi(a, target_rank, max_iters=50, tol=1e-4, seed=0, init="random"):
    """Alternating least squares refinement of the factor subspaces.

    Each sweep updates every mode with the leading left singular vectors of
    the all-but-one projected unfolding; stops when the fit
    (1 - relative error) improves by less than ``tol`` or after ``max_iters``
    sweeps. ``init`` is ``"random"`` (orthonormalized Gaussian factors drawn
    from (seed, mode) streams) or ``"hosvd"``.
    """
    dims = _dims_of(a)
    target_rank = tuple(int(r) for r in target_rank)
    _validate_rank(dims, target_rank)
    n_modes = len(dims)
    if init == "hosvd":
        factors = truncated_hosvd(a, target_rank).factors
    elif init == "random":
        factors = []
        for n in range(1, n_modes + 1):
            g = gaussian_matrix(GaussianStream(seed, n), dims[n - 1], target_rank[n - 1])
            factors.append(linalg.qr_basis_with_rank(g)[0])
    else:
        raise ValueError(f"init must be 'random' or 'hosvd', got {init!r}")
    norm_a = frob_norm(a)
    fit_prev = -math.inf
    history = []
    core = None
    warned = set()
    for _ in range(max_iters):
        w = None
        for n in range(1, n_modes + 1):
            w = _project(a, factors, skip=n)
            u, sig, _ = linalg.svd(unfold(w, n))
            if linalg.numerical_rank(sig) < target_rank[n - 1]:
                warned.add(n)
            factors[n - 1] = u[:, : target_rank[n - 1]]
        core = mode_product(w, n_modes, factors[n_modes - 1].T)
        if norm_a == 0.0:
            fit = 1.0
        else:
            err2 = max(norm_a**2 - frob_norm(core) ** 2, 0.0)
            fit = 1.0 - math.sqrt(err2) / norm_a
        history.append(fit)
        if fit - fit_prev < tol:
            break
        fit_prev = fit
    return TuckerApprox(
        core, factors, rank_warnings=tuple(sorted(warned)), fit_history=tuple(history)
    )


ALGORITHMS = (
    "tucker_svd_seq",
    "tucker_svd_batch",
    "hooi",
    "truncated_hosvd",
    "ran_tucker",
    "kr_tucker",
)


def decompose(
    a,
    algorithm,
    target_rank,
    oversampling=10,
    seed=0,
    plan=None,
    lprime=None,
    max_iters=50,
    tol=1e-4,
    init="random",
):
    """Run one algorithm by name with shared parameter conventions."""
    if algorithm not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; valid names: {', '.join(ALGORITHMS)}"
        )
    target_rank = tuple(int(r) for r in target_rank)
    _validate_rank(_dims_of(a), target_rank)
    if algorithm in ("tucker_svd_seq", "tucker_svd_batch"):
        if plan is None:
            plan = default_plan(_dims_of(a), target_rank, oversampling, seed)
        fn = tucker_svd_seq if algorithm == "tucker_svd_seq" else tucker_svd_batch
        return fn(a, plan)
    if algorithm == "hooi":
        return hooi(a, target_rank, max_iters=max_iters, tol=tol, seed=seed, init=init)
    if algorithm == "truncated_hosvd":
        return truncated_hosvd(a, target_rank)
    fn = ran_tucker if algorithm == "ran_tucker" else kr_tucker
    return fn(a, target_rank, lprime=lprime, oversampling=oversampling, seed=seed)
