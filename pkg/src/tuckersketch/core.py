"""Dense and sparse tensor primitives.

Conventions used across the package:

* Modes are numbered 1..N in every public signature, matching the data model
  and the file formats. Axis arithmetic is 0-based internally only.
* The linearization of a dense tensor is first-mode-fastest: element
  (i_1, ..., i_N) sits at offset (i_1-1) + (i_2-1)*I_1 + (i_3-1)*I_1*I_2 + ...
  Equivalently, ``arr.ravel(order="F")`` lists values in file order, and
  ``unfold(t, 1)`` is a pure reshape of that layout.
* ``unfold(t, n)`` maps (i_1, ..., i_N) to row i_n and column
  j = 1 + sum_{m != n} (i_m - 1) * prod_{k < m, k != n} I_k,
  i.e. the remaining modes in ascending order, earliest fastest.

Dense tensors are plain float ndarrays; only the index maps above carry
meaning, not the in-memory strides.
"""

import numpy as np
import scipy.sparse


def _check_mode(mode, ndim):
    if not 1 <= mode <= ndim:
        raise ValueError(f"mode must be in 1..{ndim}, got {mode}")


def unfold(t, mode):
    """Matricize ``t`` along ``mode`` (1-based).

    Returns the I_n x (prod of the other dims) matrix whose columns enumerate
    the remaining modes in ascending order with the earliest varying fastest.
    """
    t = np.asarray(t, dtype=np.float64)
    _check_mode(mode, t.ndim)
    return np.reshape(np.moveaxis(t, mode - 1, 0), (t.shape[mode - 1], -1), order="F")


def fold(mat, mode, dims):
    """Inverse of :func:`unfold`: rebuild the tensor of shape ``dims``."""
    dims = tuple(int(d) for d in dims)
    _check_mode(mode, len(dims))
    mat = np.asarray(mat, dtype=np.float64)
    rest = tuple(d for i, d in enumerate(dims) if i != mode - 1)
    if mat.shape != (dims[mode - 1], int(np.prod(rest, dtype=np.int64))):
        raise ValueError(
            f"matrix shape {mat.shape} does not match dims {dims} for mode {mode}"
        )
    t = np.reshape(mat, (dims[mode - 1],) + rest, order="F")
    return np.moveaxis(t, 0, mode - 1)


def mode_product(t, mode, b):
    """Mode-``mode`` product ``t x_mode b`` with a matrix ``b``.

    ``b`` has shape (J, I_mode); the result replaces dimension I_mode by J.
    Accepts a :class:`SparseTensor` for ``t`` (the result is dense).
    """
    b = np.asarray(b, dtype=np.float64)
    if isinstance(t, SparseTensor):
        _check_mode(mode, len(t.dims))
        if b.shape[1] != t.dims[mode - 1]:
            raise ValueError(
                f"matrix has {b.shape[1]} columns, mode {mode} has size {t.dims[mode - 1]}"
            )
        prod = (t.unfold_csr(mode).T @ b.T).T
        new_dims = list(t.dims)
        new_dims[mode - 1] = b.shape[0]
        return fold(prod, mode, new_dims)
    t = np.asarray(t, dtype=np.float64)
    _check_mode(mode, t.ndim)
    if b.shape[1] != t.shape[mode - 1]:
        raise ValueError(
            f"matrix has {b.shape[1]} columns, mode {mode} has size {t.shape[mode - 1]}"
        )
    new_dims = list(t.shape)
    new_dims[mode - 1] = b.shape[0]
    return fold(b @ unfold(t, mode), mode, new_dims)


def frob_norm(t):
    """Frobenius norm of a dense or sparse tensor."""
    if isinstance(t, SparseTensor):
        return float(np.linalg.norm(t.values))
    return float(np.linalg.norm(np.asarray(t, dtype=np.float64).ravel()))


def kron(a, b):
    """Kronecker product; (i_a, i_b) block layout with b-indices fastest."""
    return np.kron(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))


def khatri_rao(a, b):
    """Column-wise Kronecker product of two matrices with equal column counts."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"column mismatch: left has {a.shape[1]} columns, right has {b.shape[1]}"
        )
    # column l is kron(a[:, l], b[:, l]); b-index fastest, as in kron
    return (a[:, None, :] * b[None, :, :]).reshape(a.shape[0] * b.shape[0], a.shape[1])


class SparseTensor:
    """Order-N tensor stored as coordinates + values.

    ``coords`` is an (nnz, N) int array of 0-based indices, ``values`` the
    matching floats. Duplicate coordinates are rejected; use
    :func:`accumulate_sparse` to sum duplicates first. File formats write the
    same entries with 1-based indices.
    """

    def __init__(self, dims, coords, values):
        self.dims = tuple(int(d) for d in dims)
        coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
        values = np.asarray(values, dtype=np.float64).ravel()
        if coords.size == 0:
            coords = coords.reshape(0, len(self.dims))
        if coords.shape != (values.size, len(self.dims)):
            raise ValueError(
                f"coords shape {coords.shape} does not match {values.size} values "
                f"of an order-{len(self.dims)} tensor"
            )
        if any(d < 1 for d in self.dims):
            raise ValueError(f"dims must be positive, got {self.dims}")
        if coords.size:
            if coords.min() < 0 or np.any(coords >= np.asarray(self.dims)):
                raise ValueError("coords out of range for dims " + str(self.dims))
            lin = np.ravel_multi_index(coords.T, self.dims, order="F")
            if np.unique(lin).size != lin.size:
                raise ValueError("duplicate coordinates; sum duplicates before building")
        self.coords = coords
        self.values = values

    @property
    def nnz(self):
        return self.values.size

    @property
    def ndim(self):
        return len(self.dims)

    def densify(self):
        out = np.zeros(self.dims)
        if self.nnz:
            out[tuple(self.coords.T)] = self.values
        return out

    def unfold_csr(self, mode):
        """Mode-``mode`` unfolding as a scipy CSR matrix (same index map as unfold)."""
        _check_mode(mode, self.ndim)
        rows = self.coords[:, mode - 1]
        other = [m for m in range(self.ndim) if m != mode - 1]
        rest = tuple(self.dims[m] for m in other)
        if rest:
            cols = np.ravel_multi_index(
                tuple(self.coords[:, m] for m in other), rest, order="F"
            )
        else:
            cols = np.zeros(self.nnz, dtype=np.int64)
        shape = (self.dims[mode - 1], int(np.prod(rest, dtype=np.int64)) if rest else 1)
        return scipy.sparse.csr_matrix(
            (self.values, (rows, cols)), shape=shape
        )


def accumulate_sparse(dims, coords, values):
    """Build a :class:`SparseTensor`, summing entries that share coordinates.

    Exact zeros produced by cancellation are kept (the entry count is what the
    accumulation produced, not a pruned support).
    """
    dims = tuple(int(d) for d in dims)
    coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
    values = np.asarray(values, dtype=np.float64).ravel()
    if coords.size == 0:
        return SparseTensor(dims, np.empty((0, len(dims)), dtype=np.int64), [])
    lin = np.ravel_multi_index(coords.T, dims, order="F")
    uniq, inverse = np.unique(lin, return_inverse=True)
    summed = np.zeros(uniq.size)
    np.add.at(summed, inverse, values)
    out_coords = np.column_stack(np.unravel_index(uniq, dims, order="F"))
    return SparseTensor(dims, out_coords, summed)


def sparse_unfold_times(s, mode, m):
    """``unfold(densify(s), mode) @ m`` without densifying ``s``."""
    m = np.asarray(m, dtype=np.float64)
    csr = s.unfold_csr(mode)
    if m.shape[0] != csr.shape[1]:
        raise ValueError(
            f"matrix has {m.shape[0]} rows, mode-{mode} unfolding has {csr.shape[1]} columns"
        )
    return np.asarray(csr @ m)
