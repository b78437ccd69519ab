"""Time the numba kernel against its pure-numpy twin on the convolution
integrand, and a full susceptibility point through each.

Run: python benchmarks/kernel_speed.py
(Set DOTGAIN_DISABLE_NUMBA=1 to check what the fallback path costs in a
real run; this script always times both implementations directly.)
"""

import time

import numpy as np

from dotgain import QuadratureConfig, build_ndqd, mhz_to_uev, \
    susceptibility_point, symmetric_bias_leads
from dotgain.kernels import (NUMBA_ENABLED, integrand_batch_numba,
                             integrand_batch_numpy)

medium = build_ndqd(7.0, 16.4, mhz_to_uev(50.0), 4)
leads = symmetric_bias_leads(2.6, 250.0, 0.69)
omega = mhz_to_uev(7880.5)

args = (omega, medium.hamiltonian, medium.coupling, leads.gamma_left,
        leads.gamma_right, medium.left_site, medium.right_site,
        leads.mu_left, leads.mu_right, leads.beta)
nodes = np.linspace(-600.0, 600.0, 30_000)


def bench(fn, repeats=5):
    fn(nodes[:16], *args)  # warmup / JIT
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(nodes, *args)
        best = min(best, time.perf_counter() - t0)
    return best


t_numpy = bench(integrand_batch_numpy)
print(f"numpy kernel : {t_numpy * 1e3:8.2f} ms for {nodes.size} nodes "
      f"({t_numpy / nodes.size * 1e6:.3f} us/node)")

if NUMBA_ENABLED:
    t_numba = bench(integrand_batch_numba)
    print(f"numba kernel : {t_numba * 1e3:8.2f} ms for {nodes.size} nodes "
          f"({t_numba / nodes.size * 1e6:.3f} us/node)")
    print(f"speedup      : {t_numpy / t_numba:8.2f}x")
    ref = integrand_batch_numpy(nodes[:256], *args)
    got = integrand_batch_numba(nodes[:256], *args)
    dev = np.max(np.abs(got - ref)) / np.max(np.abs(ref))
    print(f"path mismatch: {dev:.2e} (relative)")
else:
    print("numba unavailable or disabled; only the numpy path was timed")

quad = QuadratureConfig()
susceptibility_point(omega, leads, medium, quad)  # warm
t0 = time.perf_counter()
for _ in range(20):
    susceptibility_point(omega, leads, medium, quad)
dt = (time.perf_counter() - t0) / 20
print(f"susceptibility point (active path): {dt * 1e3:.2f} ms")
