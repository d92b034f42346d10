"""Working basis for the Kerr-cat ancilla.

The cat qubit lives in the two quasi-degenerate top eigenstates of the
inverted-well Hamiltonian

    H_diag = -K c^dag^2 c^2 + eps_diag c^dag^2 + conj(eps_diag) c^2.

Diagonalizing once and keeping only a handful of eigenstates shrinks the
ancilla Hilbert space dramatically (8 kept states reproduce 18 Fock states at
alpha^2 = 3).  Mode operators are carried into the kept basis exactly, by
projecting the full Fock-space operator with the eigenvector isometry, so
products like c^2 or c^dag c are *projections of the exact product*, not
products of projections.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import operators as ops


class BasisError(ValueError):
    """The two lowest cat states could not be identified reliably."""


@dataclass(frozen=True)
class CatBasis:
    """Kept eigenbasis of the cat Hamiltonian.

    Basis ordering: index 0 is the even cat state, index 1 the odd cat state,
    the remaining ``keep - 2`` states follow in descending eigenvalue order.
    ``V`` maps kept-basis vectors to Fock space (columns are eigenvectors).
    """

    kerr: float
    epsilon_diag: complex
    fock_dim: int
    keep: int
    alpha: float
    eigvals: np.ndarray  # (keep,) descending
    V: np.ndarray  # (fock_dim, keep) isometry
    c_op: np.ndarray  # (keep, keep) annihilation in kept basis
    cdag_op: np.ndarray
    n_op: np.ndarray  # projection of c^dag c
    c2_op: np.ndarray  # projection of c^2
    cdag2_op: np.ndarray
    kerr_op: np.ndarray  # projection of c^dag^2 c^2
    parity_op: np.ndarray
    state_0: np.ndarray = field(repr=False)  # computational |0> in kept basis
    state_1: np.ndarray = field(repr=False)

    @property
    def gap(self) -> float:
        """Energy gap between the logical manifold and the next eigenstate."""
        full = _sorted_eigvals(self.kerr, self.epsilon_diag, self.fock_dim)
        return float(min(full[0], full[1]) - full[2])

    @property
    def P_logical(self) -> np.ndarray:
        proj = np.zeros((self.keep, self.keep), dtype=complex)
        proj[0, 0] = proj[1, 1] = 1.0
        return proj

    @property
    def P_leak(self) -> np.ndarray:
        return np.eye(self.keep, dtype=complex) - self.P_logical

    @property
    def X_L(self) -> np.ndarray:
        """|C+><C+| - |C-><C-| (cat states lie on the Bloch X axis)."""
        x = np.zeros((self.keep, self.keep), dtype=complex)
        x[0, 0] = 1.0
        x[1, 1] = -1.0
        return x

    @property
    def Z_L(self) -> np.ndarray:
        return ops.dm(self.state_0) - ops.dm(self.state_1)

    @property
    def Y_L(self) -> np.ndarray:
        return -1j * np.outer(self.state_0, self.state_1.conj()) + 1j * np.outer(
            self.state_1, self.state_0.conj()
        )

    def logical_state(self, name: str) -> np.ndarray:
        """Kept-basis vector for one of 0, 1, +, -, C+, C-."""
        root2 = np.sqrt(2.0)
        table = {
            "0": self.state_0,
            "1": self.state_1,
            "+": (self.state_0 + self.state_1) / root2,
            "-": (self.state_0 - self.state_1) / root2,
        }
        if name in table:
            return table[name]
        if name in ("C+", "c+"):
            return ops.fock(self.keep, 0)
        if name in ("C-", "c-"):
            return ops.fock(self.keep, 1)
        raise ValueError(f"unknown logical state {name!r}")

    def project(self, fock_op: np.ndarray) -> np.ndarray:
        """Carry a Fock-space ancilla operator into the kept basis."""
        if fock_op.shape != (self.fock_dim, self.fock_dim):
            raise ops.DimensionError(
                f"expected Fock operator of dim {self.fock_dim}, got {fock_op.shape}"
            )
        return self.V.conj().T @ fock_op @ self.V


def _cat_hamiltonian(kerr: float, epsilon_diag: complex, fock_dim: int) -> np.ndarray:
    c = ops.annihilation(fock_dim)
    cd = c.conj().T
    return -kerr * (cd @ cd @ c @ c) + epsilon_diag * (cd @ cd) + np.conj(epsilon_diag) * (c @ c)


def _sorted_eigvals(kerr: float, epsilon_diag: complex, fock_dim: int) -> np.ndarray:
    vals = np.linalg.eigvalsh(_cat_hamiltonian(kerr, epsilon_diag, fock_dim))
    return vals[::-1]


def default_truncation(alpha_sq: float) -> tuple:
    """(fock_dim, keep) adequate for a given cat size."""
    if alpha_sq <= 3.0 + 1e-9:
        return 18, 8
    if alpha_sq <= 7.0 + 1e-9:
        return 40, 12
    fock_dim = max(18, int(np.ceil(5.0 * alpha_sq + 8)))
    return fock_dim, 16


def build_cat_basis(
    kerr: float, epsilon_diag: complex, fock_dim: int, keep: int
) -> CatBasis:
    """Diagonalize the cat Hamiltonian and keep the top ``keep`` eigenstates.

    The manifold sits at the *top* of the spectrum (inverted well), so states
    are ordered by descending eigenvalue.  Raises :class:`BasisError` when the
    quasi-degenerate pair is split by more than a tenth of the gap to the next
    state, i.e. when the cat is too small for a clean logical manifold.
    """
    alpha = float(np.sqrt(np.abs(epsilon_diag) / kerr))
    min_dim = max(4, int(np.ceil(alpha**2)) + 2)
    if fock_dim < min_dim:
        raise ops.DimensionError(f"fock_dim {fock_dim} too small for alpha^2 = {alpha**2:.2f}")
    if keep % 2 != 0 or keep > fock_dim or keep < 2:
        raise ops.DimensionError(f"keep must be even and within [2, {fock_dim}], got {keep}")

    ham = _cat_hamiltonian(kerr, epsilon_diag, fock_dim)
    vals, vecs = np.linalg.eigh(ham)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]

    splitting = vals[0] - vals[1]
    gap = vals[1] - vals[2]
    # eps = 0 leaves the pair exactly degenerate; only flag genuine ambiguity
    if splitting > gap / 10 and splitting > 1e-12 * abs(kerr):
        raise BasisError(
            f"cat manifold splitting {splitting:.3e} exceeds gap/10 = {gap / 10:.3e}; "
            "increase the cat size or truncation"
        )

    # Order the pair as (even cat, odd cat) via photon-number parity.
    par = ops.parity(fock_dim)
    p0 = np.real(vecs[:, 0].conj() @ par @ vecs[:, 0])
    if p0 < 0:
        vecs[:, [0, 1]] = vecs[:, [1, 0]]
        vals[[0, 1]] = vals[[1, 0]]

    # Reproducible global phases: largest Fock amplitude real positive.
    for k in range(keep):
        col = vecs[:, k]
        idx = int(np.argmax(np.abs(col)))
        phase = col[idx] / abs(col[idx])
        vecs[:, k] = col / phase

    V = vecs[:, :keep].astype(complex)
    c = ops.annihilation(fock_dim)
    cd = c.conj().T
    proj = lambda op: V.conj().T @ op @ V  # noqa: E731

    basis = CatBasis(
        kerr=kerr,
        epsilon_diag=complex(epsilon_diag),
        fock_dim=fock_dim,
        keep=keep,
        alpha=alpha,
        eigvals=vals[:keep].copy(),
        V=V,
        c_op=proj(c),
        cdag_op=proj(cd),
        n_op=proj(cd @ c),
        c2_op=proj(c @ c),
        cdag2_op=proj(cd @ cd),
        kerr_op=proj(cd @ cd @ c @ c),
        parity_op=proj(par),
        state_0=np.zeros(keep, dtype=complex),
        state_1=np.zeros(keep, dtype=complex),
    )

    # Computational states (|C+> +/- |C->)/sqrt(2), sign fixed so that
    # <0|(c + c^dag)|0> > 0, i.e. |0> sits near |+alpha>.
    root2 = np.sqrt(2.0)
    s0 = (ops.fock(keep, 0) + ops.fock(keep, 1)) / root2
    s1 = (ops.fock(keep, 0) - ops.fock(keep, 1)) / root2
    quad = basis.c_op + basis.cdag_op
    if np.real(s0.conj() @ quad @ s0) < 0:
        s0, s1 = s1, s0
    basis.state_0[:] = s0
    basis.state_1[:] = s1
    return basis


def transition_element(basis: CatBasis) -> complex:
    """<1_L|(c^dag c - alpha^2)|0_L> from the numerical basis.

    The closed form for ideal cat states is -alpha^2 csch(2 alpha^2); the
    numerical value tracks it closely for moderate cats.
    """
    op = basis.n_op - basis.alpha**2 * np.eye(basis.keep)
    return complex(basis.state_1.conj() @ op @ basis.state_0)


def transition_element_closed_form(alpha_sq: float) -> float:
    return float(-alpha_sq / np.sinh(2.0 * alpha_sq))


def logical_observables(basis: CatBasis) -> dict:
    """Pauli operators and projectors of the cat qubit, in the kept basis."""
    return {
        "X_L": basis.X_L,
        "Y_L": basis.Y_L,
        "Z_L": basis.Z_L,
        "P_logical": basis.P_logical,
        "P_leak": basis.P_leak,
    }
