"""Synthetic family tests.

The overlapping-support outer-sum oracle below was computed by an explicit
triple loop over term entries before the vectorized generator existed; the
four nonzeros and their values are frozen.
"""

import math

import numpy as np
import pytest

import tuckersketch as ts
from tuckersketch import generators


def test_reciprocal_sum_entries():
    a = ts.gen_reciprocal_sum((4, 4, 4))
    assert a[0, 0, 0] == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert a[1, 2, 3] == pytest.approx(1.0 / 9.0, abs=1e-15)
    # symmetric under index permutation for cubic dims
    np.testing.assert_allclose(a, a.transpose(1, 0, 2), atol=1e-15)
    np.testing.assert_allclose(a, a.transpose(2, 1, 0), atol=1e-15)


def test_reciprocal_sum_order4():
    a = ts.gen_reciprocal_sum((3, 3, 3, 3))
    assert a[0, 0, 0, 0] == pytest.approx(0.25, abs=1e-15)
    assert a.shape == (3, 3, 3, 3)


def test_log_reciprocal_entries():
    b = ts.gen_log_reciprocal((4, 4, 4))
    assert b[0, 0, 0] == pytest.approx(1.0 / math.log(6.0), abs=1e-15)
    assert b[2, 1, 0] == pytest.approx(1.0 / math.log(10.0), abs=1e-15)
    # ln is increasing, so entries fall along every axis
    assert np.all(np.diff(b, axis=0) <= 0)
    assert np.all(np.diff(b, axis=2) <= 0)
    assert np.all(b > 0)
    assert b.max() == b[0, 0, 0]


def test_log_reciprocal_rejects_other_orders():
    with pytest.raises(ValueError):
        ts.gen_log_reciprocal((4, 4))
    with pytest.raises(ValueError):
        ts.gen_log_reciprocal((4, 4, 4, 4))


def test_sparse_outer_sum_frozen_oracle():
    terms = [
        (2.0, [([0, 2], [1.0, 3.0]), ([1], [2.0]), ([0, 1], [1.0, 1.0])]),
        (-1.0, [([0], [2.0]), ([1], [4.0]), ([0], [1.0])]),
    ]
    s = ts.sparse_outer_sum((3, 3, 3), terms)
    assert s.nnz == 4
    d = s.densify()
    assert d[0, 1, 0] == -4.0
    assert d[0, 1, 1] == 4.0
    assert d[2, 1, 0] == 12.0
    assert d[2, 1, 1] == 12.0
    assert np.count_nonzero(d) == 4


def test_sparse_outer_sum_single_singleton_term():
    # one entry: 1000 * 0.5 * 0.5 * 0.5 at 1-based position (1, 2, 3)
    terms = [(1000.0, [([0], [0.5]), ([1], [0.5]), ([2], [0.5])])]
    s = ts.sparse_outer_sum((5, 5, 5), terms)
    assert s.nnz == 1
    assert s.densify()[0, 1, 2] == 125.0


def test_sparse_outer_sum_empty_vector_drops_term():
    terms = [(7.0, [([], []), ([0], [1.0]), ([0], [1.0])])]
    s = ts.sparse_outer_sum((3, 3, 3), terms)
    assert s.nnz == 0


def test_gen_sparse_outer_determinism_and_support():
    a = ts.gen_sparse_outer(40, seed=5)
    b = ts.gen_sparse_outer(40, seed=5)
    np.testing.assert_array_equal(a.coords, b.coords)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.dims == (40, 40, 40)
    assert a.nnz > 0
    assert not np.array_equal(a.values, ts.gen_sparse_outer(40, seed=6).values)


def test_gen_sparse_outer_first_terms_dominate():
    # reimplement the documented sampling to split leading and tail terms:
    # weights fall from 1000/j to 1/j after j=10, so the first ten outer
    # products must carry nearly all the energy
    i_dim = 100
    densities = (0.015, 0.025, 0.035)
    rng = generators.philox_rng(0, 0)
    terms = []
    for j in range(1, i_dim + 1):
        weight = 1000.0 / j if j <= 10 else 1.0 / j
        vectors = []
        for dens in densities:
            idx = np.flatnonzero(rng.random(i_dim) < dens)
            vectors.append((idx, rng.random(idx.size)))
        terms.append((weight, vectors))
    full = ts.sparse_outer_sum((i_dim,) * 3, terms)
    lead = ts.sparse_outer_sum((i_dim,) * 3, terms[:10])
    built = ts.gen_sparse_outer(i_dim, seed=0)
    # the reimplementation must agree with the generator exactly
    np.testing.assert_array_equal(full.coords, built.coords)
    np.testing.assert_array_equal(full.values, built.values)
    assert ts.frob_norm(lead) ** 2 >= 0.99 * ts.frob_norm(full) ** 2


def test_gen_sparse_outer_density_validation():
    with pytest.raises(ValueError):
        ts.gen_sparse_outer(20, densities=(0.5, 0.5))
    with pytest.raises(ValueError):
        ts.gen_sparse_outer(20, densities=(0.0, 0.5, 0.5))
    with pytest.raises(ValueError):
        ts.gen_sparse_outer(20, densities=(0.5, 0.5, 1.5))


def test_gen_sparse_outer_zero_when_densities_tiny():
    s = ts.gen_sparse_outer(10, densities=(1e-9, 1e-9, 1e-9), seed=0)
    assert s.nnz == 0


def test_gen_random_sparse_exact_support():
    s = ts.gen_random_sparse((12, 11, 10), 100, seed=4)
    assert s.nnz == 100
    # coordinates unique and in range
    lin = np.ravel_multi_index(s.coords.T, s.dims, order="F")
    assert len(np.unique(lin)) == 100
    assert np.all(s.values > 0) and np.all(s.values < 1)
    t = ts.gen_random_sparse((12, 11, 10), 100, seed=4)
    np.testing.assert_array_equal(s.coords, t.coords)
    np.testing.assert_array_equal(s.values, t.values)


def test_gen_random_sparse_bounds():
    with pytest.raises(ValueError):
        ts.gen_random_sparse((2, 2, 2), 9)
    assert ts.gen_random_sparse((2, 2, 2), 0).nnz == 0
    full = ts.gen_random_sparse((2, 2, 2), 8, seed=1)
    assert full.nnz == 8


def test_tucker_noise_infinite_snr_is_exact_rank():
    spec = ts.NoisySpec((3, 3, 3), float("inf"), seed=2)
    a, beta = ts.gen_tucker_noise(spec, (15, 15, 15))
    assert beta == 0.0
    for n in (1, 2, 3):
        sig = np.linalg.svd(ts.unfold(a, n), compute_uv=False)
        assert sig[3] <= 1e-10 * sig[0]


def test_tucker_noise_realized_snr_exact():
    # reconstruct signal and noise from the return values and recompute the
    # ratio the beta was solved from
    for snr in (0.0, 10.0, 25.0):
        spec = ts.NoisySpec((3, 3, 3), snr, seed=7)
        noisy, beta = ts.gen_tucker_noise(spec, (12, 12, 12))
        clean, _ = ts.gen_tucker_noise(ts.NoisySpec((3, 3, 3), float("inf"), seed=7), (12, 12, 12))
        scaled_noise = noisy - clean
        realized = 20.0 * math.log10(ts.frob_norm(clean) / ts.frob_norm(scaled_noise))
        assert realized == pytest.approx(snr, abs=1e-9)
        assert beta > 0


def test_tucker_noise_zero_db_balances_energy():
    spec = ts.NoisySpec((2, 2, 2), 0.0, seed=3)
    noisy, beta = ts.gen_tucker_noise(spec, (10, 10, 10))
    clean, _ = ts.gen_tucker_noise(ts.NoisySpec((2, 2, 2), float("inf"), seed=3), (10, 10, 10))
    assert ts.frob_norm(noisy - clean) == pytest.approx(ts.frob_norm(clean), rel=1e-9)


def test_tucker_noise_core_dim_validation():
    with pytest.raises(ValueError):
        ts.gen_tucker_noise(ts.NoisySpec((5, 5, 5), 10.0), (4, 8, 8))
    with pytest.raises(ValueError):
        ts.gen_tucker_noise(ts.NoisySpec((2, 2), 10.0), (4, 4, 4))


def test_generator_seed_isolation():
    # different families under the same seed draw from independent streams;
    # the random-sparse support must not shift when only values change
    a = ts.gen_random_sparse((9, 9, 9), 50, seed=0)
    b = ts.gen_random_sparse((9, 9, 9), 50, seed=0)
    np.testing.assert_array_equal(a.coords, b.coords)
