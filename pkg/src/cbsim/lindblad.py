"""Open-system time evolution of the gate.

The master equation with single-photon loss/gain and two-photon loss on the
ancilla is integrated segment by segment (the Hamiltonian is piecewise
constant in time) with an adaptive Runge-Kutta method.  Density matrices are
evolved as a batch ``(B, n, n)`` so that all 64 inputs of a process-tomography
run share every Hamiltonian product.

The hot inner loop lives in the compiled module ``cbsim._rhs_cy`` when it was
built, with a numpy fallback in ``cbsim._rhs_py``; set ``CBSIM_PURE_PY=1`` to
force the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from . import _rhs_py
from .gate import DriveSchedule, GateContext, ancilla_jumps, hamiltonian_for_segment

try:  # pragma: no cover - depends on the build environment
    from . import _rhs_cy
except ImportError:  # pragma: no cover
    _rhs_cy = None

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10


def active_kernel() -> str:
    """Name of the RHS implementation selected at import/run time."""
    if _rhs_cy is not None and not os.environ.get("CBSIM_PURE_PY"):
        return "cython"
    return "numpy"


def _kernel():
    if active_kernel() == "cython":
        return _rhs_cy.lindblad_rhs
    return _rhs_py.lindblad_rhs


@dataclass
class EvolutionResult:
    """Trajectory data from one integration.

    ``expectations[name]`` has shape (B, T) (squeezed to (T,) when a single
    state was evolved); ``final`` is the state (stack) at the last time.
    """

    times: np.ndarray
    expectations: dict
    final: np.ndarray
    schedule: DriveSchedule
    nfev: int = 0
    kernel: str = ""
    states: np.ndarray = None  # (T, B, n, n) only when requested

    def expect(self, name: str) -> np.ndarray:
        return self.expectations[name]


def _effective_hamiltonian(ctx: GateContext, sched, seg) -> np.ndarray:
    """H - (i/2) sum gamma L^dag L with the ancilla-local dissipators embedded."""
    h = hamiltonian_for_segment(ctx, sched, seg).astype(complex)
    damp = np.zeros((ctx.basis.keep, ctx.basis.keep), dtype=complex)
    for gamma, loc in ancilla_jumps(ctx):
        if gamma:
            damp += gamma * (loc.conj().T @ loc)
    return h - 0.5j * ctx.embed_ancilla(damp)


def evolve(
    ctx: GateContext,
    sched: DriveSchedule,
    rho0: np.ndarray,
    observables: dict = None,
    n_times: int = 201,
    t_eval: np.ndarray = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    method: str = "RK45",
    store_states: bool = False,
) -> EvolutionResult:
    """Integrate the master equation over the full drive schedule.

    ``rho0`` is one density matrix (n, n) or a Hermitian stack (B, n, n).
    ``observables`` maps names to full-space operators; expectation values are
    recorded at every output time.  Segment boundaries are always included in
    the time grid so the integrator never steps across a drive switch.
    """
    single = rho0.ndim == 2
    rho = rho0[None, :, :] if single else rho0
    batch, n, _ = rho.shape
    if n != ctx.dim:
        raise ValueError(f"state dimension {n} does not match context dimension {ctx.dim}")

    if t_eval is None:
        t_eval = np.linspace(0.0, sched.total_duration, n_times)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval[0] != 0.0 or np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must start at 0 and increase strictly")

    observables = observables or {}
    obs_names = list(observables)
    obs_mats = [np.ascontiguousarray(observables[k]) for k in obs_names]
    records = {k: np.empty((batch, t_eval.size), dtype=complex) for k in obs_names}
    states = np.empty((t_eval.size, batch, n, n), dtype=complex) if store_states else None

    jumps = [(g, np.ascontiguousarray(l)) for g, l in ancilla_jumps(ctx) if g > 0]
    kernel = _kernel()
    m = ctx.pair_dim
    nfev = 0

    def record(idx: int, stack: np.ndarray):
        for name, mat in zip(obs_names, obs_mats):
            # tr(rho O) batched via an elementwise product
            records[name][:, idx] = np.einsum("bij,ji->b", stack, mat)
        if store_states:
            states[idx] = stack

    y = np.ascontiguousarray(rho, dtype=complex)
    record(0, y)
    out_buf = np.empty_like(y)

    edges = sched.boundaries
    for si, seg in enumerate(sched.segments):
        t_lo, t_hi = edges[si], edges[si + 1]
        mask = (t_eval > t_lo + 1e-15) & (t_eval <= t_hi + 1e-12)
        seg_times = t_eval[mask]
        targets = np.concatenate([seg_times, [t_hi]]) if (
            seg_times.size == 0 or abs(seg_times[-1] - t_hi) > 1e-12
        ) else seg_times
        h_eff = np.ascontiguousarray(_effective_hamiltonian(ctx, sched, seg))

        def rhs(t, flat):
            stack = flat.reshape(batch, n, n)
            return kernel(stack, h_eff, jumps, m, out_buf).ravel()

        sol = solve_ivp(
            rhs,
            (t_lo, t_hi),
            y.ravel(),
            t_eval=targets,
            method=method,
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:  # pragma: no cover - integrator failure is exceptional
            raise RuntimeError(f"integration failed on segment {si}: {sol.message}")
        nfev += sol.nfev

        out_indices = np.nonzero(mask)[0]
        for col, idx in enumerate(out_indices):
            stack = sol.y[:, col].reshape(batch, n, n)
            record(idx, stack)
        y = np.ascontiguousarray(sol.y[:, -1].reshape(batch, n, n))
        # re-Hermitize between segments to shed accumulated round-off
        y = 0.5 * (y + y.conj().transpose(0, 2, 1))

    if single:
        records = {k: v[0] for k, v in records.items()}
        final = y[0]
    else:
        final = y
    return EvolutionResult(
        times=t_eval,
        expectations=records,
        final=final,
        schedule=sched,
        nfev=nfev,
        kernel=active_kernel(),
        states=states if not (store_states and single) else states[:, 0],
    )


def schedule_propagator(ctx: GateContext, sched: DriveSchedule) -> np.ndarray:
    """Closed-system propagator exp(-i H_k dt_k) ... for the full schedule.

    Used as the unitary-limit cross-check of the integrator (all dissipation
    rates ignored).
    """
    u = np.eye(ctx.dim, dtype=complex)
    for seg in sched.segments:
        h = hamiltonian_for_segment(ctx, sched, seg)
        u = expm(-1j * h * seg.duration) @ u
    return u
