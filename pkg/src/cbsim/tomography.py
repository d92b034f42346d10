"""Process tomography of the three-qubit gate and its error budget.

The logical system is 3 qubits (d = 8): the two lowest Fock states of each
cavity and the logical pair of the cat ancilla.  The channel is characterized
by its Pauli transfer matrix

    R_ij = Tr[P_i Lambda(P_j)] / d,

built from the evolution of all 64 embedded Pauli operators (one batched
integration).  Pauli strings are ordered lexicographically over (I, X, Y, Z)
per slot with slot order (cavity A, cavity B, ancilla), ancilla index fastest,
so index 0 is III.

Error analysis follows the standard chain R -> R_noise = R R_id^{-1} ->
chi_noise, with dephasing/non-dephasing/leakage classification of the chi
diagonal and a modified fidelity in which the deterministic ancilla
phase-flip factor R_IIZ = I (x) I (x) diag(1, 1-2p, 1-2p, 1), p = kappa
alpha^2 t, is divided out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .gate import DriveSchedule, GateContext
from .lindblad import evolve

D_LOGICAL = 8
N_PAULI = 64

_SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_LETTERS = "IXYZ"


class TomographyError(RuntimeError):
    """Numerical failure while assembling or decomposing the transfer matrix."""


def pauli_labels() -> list:
    return ["".join(s) for s in product(_LETTERS, repeat=3)]


def logical_pauli_stack() -> np.ndarray:
    """(64, 8, 8) standard three-qubit Pauli matrices in label order."""
    out = np.empty((N_PAULI, D_LOGICAL, D_LOGICAL), dtype=complex)
    for k, label in enumerate(pauli_labels()):
        mat = np.eye(1, dtype=complex)
        for ch in label:
            mat = np.kron(mat, _SIGMA[ch])
        out[k] = mat
    return out


def _cavity_paulis(dim: int) -> dict:
    """Qubit Paulis on the {|0>, |1>} Fock subspace, zero-padded to ``dim``.

    The identity slot is the subspace projector, so the 64 embedded strings
    stay trace-orthogonal: Tr[P_i P_j] = 8 delta_ij.
    """
    out = {}
    for name, sig in _SIGMA.items():
        mat = np.zeros((dim, dim), dtype=complex)
        mat[:2, :2] = sig
        out[name] = mat
    return out


def embedded_pauli_stack(ctx: GateContext) -> np.ndarray:
    """(64, n, n) Pauli strings embedded in the full simulation space."""
    pa = _cavity_paulis(ctx.spec.dim_a)
    pb = _cavity_paulis(ctx.spec.dim_b)
    bs = ctx.basis
    pc = {"I": bs.P_logical, "X": bs.X_L, "Y": bs.Y_L, "Z": bs.Z_L}
    n = ctx.dim
    out = np.empty((N_PAULI, n, n), dtype=complex)
    for k, label in enumerate(pauli_labels()):
        out[k] = np.kron(np.kron(pa[label[0]], pb[label[1]]), pc[label[2]])
    return out


@dataclass(frozen=True)
class PauliTransferMatrix:
    R: np.ndarray  # (64, 64) real
    labels: tuple = field(default_factory=lambda: tuple(pauli_labels()))

    def __post_init__(self):
        if self.R.shape != (N_PAULI, N_PAULI):
            raise ValueError(f"transfer matrix must be 64x64, got {self.R.shape}")
        peak = np.max(np.abs(self.R))
        if peak > 1 + 1e-6:
            raise TomographyError(f"transfer-matrix entry {peak:.6f} exceeds 1")

    @property
    def leakage(self) -> float:
        """Population escaping the qubit subspace for the maximally mixed input."""
        return float(1.0 - self.R[0, 0])


def _contract_ptm(paulis: np.ndarray, evolved: np.ndarray) -> np.ndarray:
    r = np.einsum("imn,jnm->ij", paulis, evolved) / D_LOGICAL
    imag = np.max(np.abs(r.imag))
    if imag > 1e-8:
        raise TomographyError(f"transfer matrix has imaginary part {imag:.2e}")
    return np.ascontiguousarray(r.real)


def compute_ptm(
    ctx: GateContext,
    sched: DriveSchedule,
    rtol: float = None,
    atol: float = None,
) -> PauliTransferMatrix:
    """Transfer matrix of the full dissipative gate (one batched evolution)."""
    paulis = embedded_pauli_stack(ctx)
    kwargs = {}
    if rtol is not None:
        kwargs["rtol"] = rtol
    if atol is not None:
        kwargs["atol"] = atol
    res = evolve(
        ctx,
        sched,
        paulis,
        t_eval=np.array([0.0, sched.total_duration]),
        **kwargs,
    )
    return PauliTransferMatrix(R=_contract_ptm(paulis, res.final))


def ptm_of_unitary(ctx: GateContext, u: np.ndarray) -> PauliTransferMatrix:
    paulis = embedded_pauli_stack(ctx)
    evolved = np.matmul(np.matmul(u, paulis), u.conj().T)
    return PauliTransferMatrix(R=_contract_ptm(paulis, evolved))


def noise_decomposition(R: PauliTransferMatrix, R_id: PauliTransferMatrix) -> tuple:
    """(R_noise, fidelity) with R = R_noise R_id and F = (Tr R_noise + d)/(d^2 + d)."""
    r_noise = np.linalg.solve(R_id.R.T, R.R.T).T  # R @ R_id^{-1}
    fid = float((np.trace(r_noise) + D_LOGICAL) / (D_LOGICAL**2 + D_LOGICAL))
    return PauliTransferMatrix(R=r_noise), fid


def _pauli_vec_matrix() -> np.ndarray:
    """Columns are column-stacked vec(P_m); M^dag M = d * identity."""
    paulis = logical_pauli_stack()
    # column-stacking: vec(P)[i*d + b] = P[b, i]
    return paulis.transpose(0, 2, 1).reshape(N_PAULI, -1).T


def ptm_to_chi(R_noise: PauliTransferMatrix) -> np.ndarray:
    """Process (chi) matrix of the channel: Lambda(rho) = sum chi_mn P_m rho P_n.

    Hermitian by construction; its diagonal is the Pauli-error distribution
    when the channel is close to the identity.
    """
    m = _pauli_vec_matrix()
    s = (m @ R_noise.R @ m.conj().T) / D_LOGICAL  # superoperator, vec-column
    s4 = s.reshape(D_LOGICAL, D_LOGICAL, D_LOGICAL, D_LOGICAL)
    p = logical_pauli_stack()
    # S = sum chi_mn (P_n^T (x) P_m); project onto the orthogonal basis
    chi = np.einsum("mdb,nac,abcd->mn", p, p, s4, optimize=True) / D_LOGICAL**2
    herm_dev = np.max(np.abs(chi - chi.conj().T))
    if herm_dev > 1e-9:
        raise TomographyError(f"chi matrix deviates from Hermiticity by {herm_dev:.2e}")
    return 0.5 * (chi + chi.conj().T)


def chi_to_ptm(chi: np.ndarray) -> PauliTransferMatrix:
    """Inverse of :func:`ptm_to_chi` (exact linear-map round trip)."""
    p = logical_pauli_stack()
    s = np.einsum("mn,nca,mbd->abcd", chi, p, p, optimize=True).reshape(
        D_LOGICAL**2, D_LOGICAL**2
    )
    m = _pauli_vec_matrix()
    r = (m.conj().T @ s @ m).real / D_LOGICAL
    return PauliTransferMatrix(R=np.ascontiguousarray(r))


def classify_errors(chi: np.ndarray, psd_tol: float = 1e-7) -> tuple:
    """(p_Z, p_nonZ) from the chi diagonal.

    p_Z sums the diagonal over strings built from I and Z only (III excluded);
    p_nonZ sums strings containing at least one X or Y.
    """
    eigmin = float(np.linalg.eigvalsh(chi)[0])
    if eigmin < -psd_tol:
        raise TomographyError(f"chi matrix has eigenvalue {eigmin:.2e} < -{psd_tol:.0e}")
    diag = np.real(np.diag(chi))
    p_z = 0.0
    p_nonz = 0.0
    for k, label in enumerate(pauli_labels()):
        if k == 0:
            continue
        if set(label) <= {"I", "Z"}:
            p_z += diag[k]
        else:
            p_nonz += diag[k]
    return float(p_z), float(p_nonz)


def ancilla_phaseflip_ptm(p: float) -> np.ndarray:
    """Transfer matrix of a probability-p phase flip on the ancilla slot."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"phase-flip probability must lie in [0, 0.5), got {p}")
    return np.kron(np.eye(16), np.diag([1.0, 1.0 - 2.0 * p, 1.0 - 2.0 * p, 1.0]))


def modified_fidelity(R: PauliTransferMatrix, R_id: PauliTransferMatrix, p: float) -> float:
    """Fidelity with the deterministic ancilla phase-flip factor divided out.

    Decomposes R = R_bar R_IIZ R_id and applies the fidelity formula to
    R_bar; with p = kappa alpha^2 t this isolates the errors that a perfect
    ancilla phase-flip correction could not remove.
    """
    r_noise, _ = noise_decomposition(R, R_id)
    r_iiz = ancilla_phaseflip_ptm(p)
    r_bar = np.linalg.solve(r_iiz.T, r_noise.R.T).T  # R_noise @ R_IIZ^{-1}
    return float((np.trace(r_bar) + D_LOGICAL) / (D_LOGICAL**2 + D_LOGICAL))


@dataclass(frozen=True)
class ErrorBudget:
    """Scalar summary of one tomography run."""

    fidelity: float
    fidelity_modified: float
    p_Z: float
    p_nonZ: float
    p_leak: float
    p_ancilla_phaseflip: float

    def __post_init__(self):
        for name in ("fidelity", "fidelity_modified", "p_Z", "p_nonZ", "p_leak"):
            val = getattr(self, name)
            if not -1e-6 <= val <= 1 + 1e-6:
                raise TomographyError(f"{name} = {val:.6g} outside [0, 1]")

    def as_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "fidelity_modified": self.fidelity_modified,
            "p_Z": self.p_Z,
            "p_nonZ": self.p_nonZ,
            "p_leak": self.p_leak,
            "p_ancilla_phaseflip": self.p_ancilla_phaseflip,
        }


def error_budget(
    ctx: GateContext,
    sched: DriveSchedule,
    R: PauliTransferMatrix,
    R_id: PauliTransferMatrix,
) -> ErrorBudget:
    """Full fidelity / classification chain for one simulated transfer matrix."""
    r_noise, fid = noise_decomposition(R, R_id)
    chi = ptm_to_chi(r_noise)
    p_z, p_nonz = classify_errors(chi)
    alpha_sq = abs(ctx.params.alpha) ** 2
    p_flip = ctx.params.kappa * alpha_sq * sched.total_duration
    return ErrorBudget(
        fidelity=fid,
        fidelity_modified=modified_fidelity(R, R_id, p_flip),
        p_Z=p_z,
        p_nonZ=p_nonz,
        p_leak=R.leakage,
        p_ancilla_phaseflip=p_flip,
    )
