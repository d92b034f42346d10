"""Pure-numpy Lindblad right-hand side for batches of density matrices.

This is the fallback for the compiled kernel in ``cbsim._rhs_cy``; both
implement exactly the same contract and are cross-checked in the tests.

Contract
--------
``lindblad_rhs(rho, h_eff, jumps, m, out)`` computes, for each density matrix
in the stack,

    drho = -i (h_eff rho) + [-i (h_eff rho)]^dag + sum_k gamma_k L_k rho L_k^dag

where ``h_eff = H - (i/2) sum_k gamma_k L_k^dag L_k`` already folds the
anticommutator in, and every jump operator is *ancilla-local*: the embedded
operator is ``identity(m) (x) l`` with ``l`` of size ``nc = n // m``.  The
conjugate-transpose trick makes the result exact only for Hermitian input,
which is all the integrator ever feeds it.
"""
from __future__ import annotations

import numpy as np


def lindblad_rhs(
    rho: np.ndarray,
    h_eff: np.ndarray,
    jumps: list,
    m: int,
    out: np.ndarray = None,
) -> np.ndarray:
    """Batched Lindblad RHS; ``rho`` and ``out`` have shape (B, n, n)."""
    batch, n, _ = rho.shape
    nc = n // m
    if out is None:
        out = np.empty_like(rho)

    a = np.matmul(h_eff, rho)
    np.multiply(a, -1j, out=out)
    out += out.conj().transpose(0, 2, 1)

    for gamma, loc in jumps:
        if gamma == 0.0:
            continue
        # (I (x) l) rho (I (x) l^dag) via two block contractions
        x = np.matmul(loc, rho.reshape(batch, m, nc, n))
        x = np.matmul(x.reshape(batch, m, nc, m, nc), loc.conj().T)
        out += gamma * x.reshape(batch, n, n)
    return out
