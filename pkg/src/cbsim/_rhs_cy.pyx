# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Lindblad right-hand side.

Same contract as ``cbsim._rhs_py.lindblad_rhs``; see that module for the
specification.  The batch loop, the effective-Hamiltonian product and the
ancilla-local jump contractions all go straight to BLAS zgemm with
preallocated scratch, avoiding the temporaries of the numpy path.
"""
import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex zcomplex


cdef inline void _gemm_rm(int rows, int cols, int inner,
                          zcomplex alpha,
                          zcomplex *a, int lda,
                          zcomplex *b, int ldb,
                          zcomplex beta,
                          zcomplex *c, int ldc) noexcept nogil:
    # Row-major C = alpha * A @ B + beta * C via column-major BLAS:
    # compute C^T = B^T A^T by swapping the operands.
    cdef char no = b'N'
    zgemm(&no, &no, &cols, &rows, &inner, &alpha,
          b, &ldb, a, &lda, &beta, c, &ldc)


def lindblad_rhs(zcomplex[:, :, ::1] rho,
                 zcomplex[:, ::1] h_eff,
                 list jumps,
                 int m,
                 zcomplex[:, :, ::1] out):
    """Batched Lindblad RHS; ``rho`` and ``out`` have shape (B, n, n)."""
    cdef int batch = rho.shape[0]
    cdef int n = rho.shape[1]
    cdef int nc = n // m
    cdef int b, i, j, k, blk
    cdef zcomplex minus_i = -1j
    cdef zcomplex one = 1.0
    cdef zcomplex zero = 0.0
    cdef zcomplex gamma_z
    cdef double gamma
    cdef zcomplex aij, aji

    scratch_a = np.empty((n, n), dtype=np.complex128)
    scratch_t = np.empty((n, n), dtype=np.complex128)
    cdef zcomplex[:, ::1] A = scratch_a
    cdef zcomplex[:, ::1] T = scratch_t
    cdef zcomplex[:, ::1] loc
    cdef zcomplex[:, ::1] loc_dag

    # Pre-split the jump list into typed views (tiny, done once per call).
    locs = []
    for gamma_obj, loc_obj in jumps:
        if gamma_obj == 0.0:
            continue
        loc_arr = np.ascontiguousarray(loc_obj, dtype=np.complex128)
        locs.append((float(gamma_obj), loc_arr,
                     np.ascontiguousarray(loc_arr.conj().T)))

    for b in range(batch):
        with nogil:
            # A = h_eff @ rho[b]
            _gemm_rm(n, n, n, one, &h_eff[0, 0], n,
                     &rho[b, 0, 0], n, zero, &A[0, 0], n)
            # out[b] = -i A + (-i A)^dag
            for i in range(n):
                for j in range(n):
                    aij = A[i, j]
                    aji = A[j, i]
                    out[b, i, j] = minus_i * aij + 1j * aji.conjugate()
        for gamma, loc_obj, loc_dag_obj in locs:
            loc = loc_obj
            loc_dag = loc_dag_obj
            gamma_z = gamma
            with nogil:
                # T = (I (x) l) rho[b]: one gemm per nc-row block
                for blk in range(m):
                    _gemm_rm(nc, n, nc, one, &loc[0, 0], nc,
                             &rho[b, blk * nc, 0], n,
                             zero, &T[blk * nc, 0], n)
                # out[b] += gamma * T (I (x) l^dag): single gemm on the
                # (n*m, nc) row-major view, accumulating in place.
                _gemm_rm(n * m, nc, nc, gamma_z, &T[0, 0], nc,
                         &loc_dag[0, 0], nc, one, &out[b, 0, 0], nc)
    return np.asarray(out)
