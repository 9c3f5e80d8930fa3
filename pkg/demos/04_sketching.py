"""Streaming sketches: approximating the covariance without O(d^2) state.

The dense sketch keeps m orthonormal directions; the sparse variant factors
them as F @ Z so each round touches O(m^2 + m*s) state instead of O(m*d).
Both reconstruct the same shrunken covariance, and the sketched learners
built on them agree to near machine precision.
"""

import time

import numpy as np

from costsense import (
    LossVariant,
    OjaSketch,
    SketchedCSGD,
    SparseOjaSketch,
    SparseSketchedCSGD,
    to_sketch_vector,
)

rng = np.random.default_rng(0)

# --- subspace recovery on a low-rank stream --------------------------------
d, m, T = 40, 5, 800
basis = np.linalg.qr(rng.standard_normal((d, m)))[0]  # true m-dim subspace
weights = np.array([3.0, 2.0, 1.5, 1.0, 0.5])
sketch = OjaSketch(m, d)
sparse_sketch = SparseOjaSketch(m, d)
acc = np.zeros((d, d))
for _ in range(T):
    x = basis @ (weights * rng.standard_normal(m))
    x /= np.linalg.norm(x)
    acc += np.outer(x, x)
    pos = np.arange(d)
    sketch.update(pos, to_sketch_vector(x, 1.0))
    sparse_sketch.update(pos, to_sketch_vector(x, 1.0))

top = np.linalg.eigh(acc)[1][:, -m:]
alignment = np.linalg.norm(sketch.V @ top, 2)
err_pair = np.abs(sketch.reconstruct_sigma() - sparse_sketch.reconstruct_sigma()).max()
print(f"rank-{m} stream in d={d}, T={T}:")
print(f"  sketch basis vs true top-{m} subspace: alignment "
      f"{alignment:.3f} (1 = contained)")
print(f"  estimated vs true top eigenvalues: "
      f"{np.sort(sketch.t * sketch.lam)[::-1].round(0)} vs "
      f"{np.sort(np.linalg.eigvalsh(acc))[::-1][:m].round(0)}")
print(f"  dense vs sparse sketch reconstruction: max|diff| = {err_pair:.2e}")

# --- the two sketched learners are one algorithm ---------------------------
d = 300
dense = SketchedCSGD(d, eta=0.5, gamma=1.0, m=5, variant=LossVariant.II)
sparse = SparseSketchedCSGD(d, eta=0.5, gamma=1.0, m=5, variant=LossVariant.II)
gap = 0.0
for _ in range(500):
    nnz = rng.integers(3, 12)
    pos = np.sort(rng.choice(d, size=nnz, replace=False))
    vals = rng.standard_normal(nnz)
    y = 1 if rng.random() < 0.25 else -1
    dense.update(pos, vals, y, rho=3.0)
    sparse.update(pos, vals, y, rho=3.0)
    gap = max(gap, np.abs(dense.mu - sparse.materialize_mu()).max())
print(f"\nlearner equivalence over 500 sparse rounds: max weight gap {gap:.2e}")

# --- where sparsity pays ----------------------------------------------------
d = 20_000
T = 2000
samples = []
for _ in range(T):
    pos = np.sort(rng.choice(d, size=10, replace=False))
    samples.append((pos, rng.standard_normal(10), 1 if rng.random() < 0.3 else -1))

for name, learner in [
    ("dense sketch ", SketchedCSGD(d, 0.5, 1.0, m=5)),
    ("sparse sketch", SparseSketchedCSGD(d, 0.5, 1.0, m=5)),
]:
    t0 = time.perf_counter()
    for pos, vals, y in samples:
        learner.update(pos, vals, y, rho=2.0)
    print(f"{name}: {T} rounds at d={d}, 10 nonzeros -> "
          f"{1e3 * (time.perf_counter() - t0):.0f} ms")
