"""
Sketch plans and reproducible randomness
========================================

The sketched algorithms never form a large random matrix.  Each mode is
compressed by a chain of small Gaussians whose widths come from a plan; the
implied big test matrix is their Kronecker product.  This walk-through shows
what a plan contains, that the streams behind it are counter-based (same seed
in, same bits out, in any chunking), and that the structured sketch really
equals the unfold-times-Kronecker product it stands for.
"""

import warnings

import numpy as np

import tuckersketch as ts

# --- counter-based Gaussian streams --------------------------------------
s = ts.GaussianStream(seed=7, stream_id=3)
print("first five normals of stream (7,3):", np.round(s.normals(5), 6))

# chunking does not change the sequence
a = ts.GaussianStream(7, 3).normals(9)
b = np.concatenate([ts.GaussianStream(7, 3).normals(4), ts.GaussianStream(7, 3)
                    .normals(9)[4:]])
print("chunk-invariant:", np.array_equal(a, b))

# --- what a plan looks like ------------------------------------------------
dims, rank = (100, 100, 100), (5, 5, 5)
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    plan = ts.default_plan(dims, rank, oversampling=10, seed=0)
print()
print("plan for dims", dims, "rank", rank)
print("  chain widths per target mode:", plan.sketch_dims)
print("  processing order:", plan.order)
for w in caught:
    print("  note:", str(w.message).splitlines()[0])
print("  (default widths favor speed; widen via a custom SketchPlan when the")
print("   guarantee matters more than the constant factor)")

# --- the sketch equals unfold @ kron(...)^T --------------------------------
warnings.filterwarnings("ignore", category=ts.SketchWidthWarning)  # seen above
rng = np.random.default_rng(0)
small = rng.standard_normal((8, 9, 7))
plan_s = ts.default_plan(small.shape, (2, 2, 2), oversampling=2, seed=1)
sk = ts.sketch_mode(small, 1, plan_s, ts.GaussianStream(plan_s.seed, 1))

stream = ts.GaussianStream(plan_s.seed, 1)
l12, l13 = plan_s.sketch_dims[1]
g2 = ts.gaussian_matrix(stream.fork(2), l12, 9)
g3 = ts.gaussian_matrix(stream.fork(3), l13, 7)
explicit = ts.unfold(small, 1) @ ts.kron(g3, g2).T
print()
print("structured sketch matches explicit Kronecker product:",
      np.allclose(sk, explicit, atol=1e-10))
print("sketch shape:", sk.shape, "— the full test matrix",
      (ts.kron(g3, g2).T).shape, "is never built at real sizes")
