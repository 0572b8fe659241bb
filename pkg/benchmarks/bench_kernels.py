"""Compare the compiled masked-Adam kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--size N] [--free-fraction F] [--repeat R]

Also times one full training step (forward, backward, update) of a
784-800-800-10 network at batch 256 with each backend.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np
from threadpoolctl import threadpool_limits

from clnp import kernels
from clnp.nn_core import AdamState, NetworkSpec, Parameters, UpdateMask, _loss_and_grads


def kernel_args(n: int, free: float, seed: int = 0):
    rng = np.random.default_rng(seed)
    return (
        rng.normal(size=n),
        rng.normal(size=n) * 1e-3,
        (rng.random(n) < free).astype(np.uint8),
        np.zeros(n),
        np.zeros(n),
    )


def time_kernel(fn, n: int, free: float, repeat: int) -> float:
    w, g, mask, m, v = kernel_args(n, free)
    call = lambda: fn(w, g, mask, m, v, 1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001, 1e-5)  # noqa: E731
    return min(timeit.repeat(call, number=1, repeat=repeat))


def time_step(fn, repeat: int, free: float) -> float:
    spec = NetworkSpec((784, 800, 800, 10))
    rng = np.random.default_rng(0)
    params = Parameters.glorot(spec, rng)
    mask = UpdateMask([rng.random(w.shape) < free for w in params.weights], [np.ones_like(b, bool) for b in params.biases])
    state = AdamState.fresh(params)
    x, y = rng.random((256, 784)), rng.integers(0, 10, 256)
    alphas = (1e-7, 1e-5, 1e-6)

    def step():
        _, grads = _loss_and_grads(params, x, y, None)
        state.t += 1
        bc1, bc2 = 1 - state.beta1**state.t, 1 - state.beta2**state.t
        for l, (w, g) in enumerate(zip(params.weights, grads.weights)):
            fn(w.reshape(-1), g.reshape(-1), mask.weights[l].reshape(-1).view(np.uint8),
               state.m.weights[l].reshape(-1), state.v.weights[l].reshape(-1),
               2e-3, state.beta1, state.beta2, state.eps, bc1, bc2, alphas[l])

    return min(timeit.repeat(step, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1_276_800)
    ap.add_argument("--free-fraction", type=float, default=0.7)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    backends = {"numpy": kernels.python_masked_adam_update}
    if kernels.compiled_masked_adam_update is not None:
        backends["cython"] = kernels.compiled_masked_adam_update
    else:
        print("compiled kernel not built; timing the numpy fallback only")
    with threadpool_limits(limits=1):
        print(f"masked Adam update, {args.size} weights, {args.free_fraction:.0%} trainable")
        base = None
        for name, fn in backends.items():
            t = time_kernel(fn, args.size, args.free_fraction, args.repeat)
            base = base or t
            print(f"  {name:7s} {t * 1e3:8.2f} ms   x{base / t:.2f}")
        print("full step, 784-800-800-10, batch 256")
        base = None
        for name, fn in backends.items():
            t = time_step(fn, max(3, args.repeat // 4), args.free_fraction)
            base = base or t
            print(f"  {name:7s} {t * 1e3:8.2f} ms   x{base / t:.2f}")


if __name__ == "__main__":
    main()
