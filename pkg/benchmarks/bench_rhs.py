"""Benchmark the compiled Lindblad RHS kernel against the numpy fallback.

Times the batched right-hand side on realistic problem sizes (the 64-Pauli
tomography batch at several truncations) and a short end-to-end evolution.

Run with:  python3 benchmarks/bench_rhs.py
"""
from __future__ import annotations

import time

import numpy as np

from cbsim import gate as G
from cbsim import params as P
from cbsim._rhs_py import lindblad_rhs as rhs_py
from cbsim.lindblad import active_kernel, evolve

try:
    from cbsim._rhs_cy import lindblad_rhs as rhs_cy
except ImportError:  # pragma: no cover - build without the extension
    rhs_cy = None


def _problem(alpha_sq: float, batch: int):
    eff = P.preset("fig3", alpha_sq=alpha_sq)
    ctx = G.make_context(eff)
    sched = G.sequential_schedule(*P.gate_timing(eff))
    h = G.hamiltonian_for_segment(ctx, sched, sched.segments[0])
    jumps = [(g, np.ascontiguousarray(l)) for g, l in G.ancilla_jumps(ctx) if g > 0]
    n = ctx.spec.total_dim
    rng = np.random.default_rng(7)
    x = rng.normal(size=(batch, n, n)) + 1j * rng.normal(size=(batch, n, n))
    rho = x @ x.conj().transpose(0, 2, 1)
    rho /= np.trace(rho, axis1=1, axis2=2)[:, None, None]
    return ctx, h.astype(complex), jumps, rho


def _time(fn, *args, repeats: int = 5, **kw) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args, **kw)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels() -> None:
    print(f"active kernel: {active_kernel()}")
    print(f"{'alpha^2':>8} {'batch':>6} {'dim':>5} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for alpha_sq, batch in [(2.0, 1), (2.0, 64), (3.0, 64), (7.0, 16)]:
        ctx, h, jumps, rho = _problem(alpha_sq, batch)
        m = ctx.spec.dim_a * ctx.spec.dim_b
        out = np.empty_like(rho)
        t_py = _time(rhs_py, rho, h, jumps, m, out=out)
        row = (
            f"{alpha_sq:8.1f} {batch:6d} {ctx.spec.total_dim:5d} "
            f"{1e3 * t_py:8.2f}ms"
        )
        if rhs_cy is not None:
            t_cy = _time(rhs_cy, rho, h, jumps, m, out=out)
            ref = np.empty_like(rho)
            rhs_py(rho, h, jumps, m, out=ref)
            assert np.allclose(out, ref, atol=1e-10), "kernels disagree"
            row += f" {1e3 * t_cy:8.2f}ms {t_py / t_cy:7.2f}x"
        else:
            row += "      (extension not built)"
        print(row)


def bench_evolution() -> None:
    eff = P.preset("fig3", alpha_sq=3.0)
    ctx = G.make_context(eff)
    sched = G.sequential_schedule(*P.gate_timing(eff))
    rho0 = ctx.initial_state("1", "01")
    t0 = time.perf_counter()
    res = evolve(ctx, sched, rho0, n_times=5)
    dt = time.perf_counter() - t0
    print(
        f"\nfull gate evolution (alpha^2 = 3, dim {ctx.spec.total_dim}): "
        f"{dt:.2f}s, {res.nfev} RHS evaluations, kernel = {res.kernel}"
    )


if __name__ == "__main__":
    bench_kernels()
    bench_evolution()
