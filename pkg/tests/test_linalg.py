"""Matrix routine tests against an independent Gram-eigendecomposition oracle.

The frozen singular values and left vectors below were computed from
eigendecompositions of A^T A and A A^T (not from any SVD routine), with the
same sign convention the package promises: the largest-magnitude entry of
each left singular vector is positive.
"""

import numpy as np
import pytest

from tuckersketch import linalg

A_FIXED = np.array(
    [
        [2.0, -1.0, 3.0],
        [0.0, 4.0, 1.0],
        [-2.0, 1.0, 0.0],
        [1.0, 1.0, -2.0],
    ]
)

# from the Gram-route oracle
SIGMA_FIXED = (4.536084501488366, 3.8756755179660285, 2.5304301363198705)
U_FIXED = np.array(
    [
        [-0.5713279325773877, 0.6929980661137696, 0.10451178175612993],
        [0.6950528226592922, 0.6823159162873631, 0.10206273359052766],
        [0.3447051514428515, -0.050745998116835514, -0.6269006420299718],
        [0.2677019345073161, -0.22720808616472774, 0.765281693828225],
    ]
)


def test_svd_matches_gram_oracle():
    u, s, vt = linalg.svd(A_FIXED)
    np.testing.assert_allclose(s, SIGMA_FIXED, atol=1e-10)
    np.testing.assert_allclose(u[:, :3], U_FIXED, atol=1e-9)
    np.testing.assert_allclose((u * s) @ vt, A_FIXED, atol=1e-10)


def test_svd_reconstruction_and_orthogonality():
    rng = np.random.default_rng(0)
    for shape in [(6, 4), (4, 6), (5, 5)]:
        a = rng.standard_normal(shape)
        u, s, vt = linalg.svd(a)
        k = min(shape)
        np.testing.assert_allclose((u * s) @ vt, a, atol=1e-10)
        np.testing.assert_allclose(u.T @ u, np.eye(k), atol=1e-12)
        np.testing.assert_allclose(vt @ vt.T, np.eye(k), atol=1e-12)
        assert np.all(np.diff(s) <= 1e-14)


def test_svd_sign_convention():
    rng = np.random.default_rng(42)
    for _ in range(10):
        a = rng.standard_normal((7, 5))
        u, _, _ = linalg.svd(a)
        for j in range(u.shape[1]):
            assert u[np.argmax(np.abs(u[:, j])), j] > 0


def test_delta_tail_values():
    s = np.array([3.0, 2.0, 1.0])
    assert linalg.delta_tail(s, 1) == pytest.approx(np.sqrt(14.0), abs=1e-14)
    assert linalg.delta_tail(s, 2) == pytest.approx(np.sqrt(5.0), abs=1e-14)
    assert linalg.delta_tail(s, 3) == pytest.approx(1.0, abs=1e-14)
    assert linalg.delta_tail(s, 4) == 0.0
    assert linalg.delta_tail(s, 10) == 0.0


def test_delta_tail_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.delta_tail(np.array([1.0, 2.0]), 1)  # increasing
    with pytest.raises(ValueError):
        linalg.delta_tail(np.array([2.0, 1.0]), 0)  # k is 1-based


def test_numerical_rank_threshold():
    # relative threshold 1e-12 * sigma_1
    assert linalg.numerical_rank(np.array([1.0, 1e-13, 1e-14])) == 1
    assert linalg.numerical_rank(np.array([1.0, 1e-11])) == 2
    assert linalg.numerical_rank(np.array([0.0, 0.0])) == 0
    assert linalg.numerical_rank(np.array([5.0, 4.0, 3.0])) == 3


def test_fixed_rank_basis_properties():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((8, 12))
    q, s = linalg.fixed_rank_basis(a, 3)
    assert q.shape == (8, 3)
    assert s.shape == (3, 12)
    np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-12)
    # row norms of s are the leading singular values
    sig = np.linalg.svd(a, compute_uv=False)
    np.testing.assert_allclose(np.linalg.norm(s, axis=1), sig[:3], atol=1e-10)
    # q @ s is the best rank-3 approximation
    u, sv, vt = np.linalg.svd(a)
    best = (u[:, :3] * sv[:3]) @ vt[:3]
    np.testing.assert_allclose(q @ s, best, atol=1e-10)


def test_fixed_rank_basis_warns_on_deficiency():
    rank1 = np.outer(np.arange(1.0, 5.0), np.arange(1.0, 7.0))
    with pytest.warns(linalg.RankDeficiencyWarning):
        q, s = linalg.fixed_rank_basis(rank1, 3)
    assert q.shape == (4, 3)
    np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-10)


def test_orthonormal_basis_qr_spans_range():
    rng = np.random.default_rng(14)
    a = rng.standard_normal((9, 5))
    q = linalg.orthonormal_basis_qr(a)
    np.testing.assert_allclose(q.T @ q, np.eye(5), atol=1e-12)
    # projection onto span(q) reproduces a
    np.testing.assert_allclose(q @ (q.T @ a), a, atol=1e-10)


def test_qr_basis_with_rank_detects_deficiency():
    rng = np.random.default_rng(15)
    base = rng.standard_normal((10, 2))
    a = base @ rng.standard_normal((2, 6))  # rank 2, 6 columns
    q, rank = linalg.qr_basis_with_rank(a)  # reports, never warns
    assert rank == 2
    assert q.shape == (10, 6)
    with pytest.warns(linalg.RankDeficiencyWarning):
        linalg.orthonormal_basis_qr(a)


def test_sketch_preserves_singular_value_bounds():
    # sigma_k(A G) <= ||G||_2 * sigma_k(A) for any G
    rng = np.random.default_rng(33)
    for _ in range(20):
        a = rng.standard_normal((6, 40))
        g = rng.standard_normal((40, 9))
        sa = np.linalg.svd(a, compute_uv=False)
        sag = np.linalg.svd(a @ g, compute_uv=False)
        gnorm = np.linalg.svd(g, compute_uv=False)[0]
        for k in range(len(sag)):
            assert sag[k] <= gnorm * sa[k] + 1e-9
