"""Dense operator algebra on the composite cavity-cavity-ancilla Hilbert space.

Everything is a plain complex ndarray; the tensor order is fixed as
cavity A (x) cavity B (x) ancilla throughout the package.  At the sizes we
care about (total dimension of a few hundred) dense matrices beat any sparse
format, so there is deliberately no sparse code path.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

HERMITICITY_TOL = 1e-12


class DimensionError(ValueError):
    """Operator or state dimensions do not match the declared space."""


@dataclass(frozen=True)
class HilbertSpec:
    """Fock truncations of the three factors.

    ``dim_c`` counts states in whatever ancilla basis is active (bare Fock
    states or kept eigenstates of the cat Hamiltonian).
    """

    dim_a: int
    dim_b: int
    dim_c: int
    ancilla_basis: str = "fock"  # "fock" | "diagonal"

    def __post_init__(self):
        for name in ("dim_a", "dim_b", "dim_c"):
            if getattr(self, name) < 2:
                raise DimensionError(f"{name} must be >= 2, got {getattr(self, name)}")
        if self.ancilla_basis not in ("fock", "diagonal"):
            raise DimensionError(f"unknown ancilla basis {self.ancilla_basis!r}")

    @property
    def total_dim(self) -> int:
        return self.dim_a * self.dim_b * self.dim_c

    @property
    def dims(self) -> tuple:
        return (self.dim_a, self.dim_b, self.dim_c)


def annihilation(dim: int) -> np.ndarray:
    """Single-mode ladder operator with <n-1|a|n> = sqrt(n)."""
    if dim < 2:
        raise DimensionError(f"annihilation needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number(dim: int) -> np.ndarray:
    if dim < 2:
        raise DimensionError(f"number needs dim >= 2, got {dim}")
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def parity(dim: int) -> np.ndarray:
    """Photon-number parity (-1)^n."""
    return np.diag((-1.0) ** np.arange(dim)).astype(complex)


def fock(dim: int, n: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise DimensionError(f"Fock index {n} outside [0, {dim})")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return vec


def displacement(amp: complex, dim: int) -> np.ndarray:
    """D(amp) = exp(amp*a^dag - conj(amp)*a) at the working truncation.

    Unitary only up to truncation error; the caller must keep |amp|^2 well
    below dim.
    """
    if abs(amp) ** 2 > dim / 4:
        warnings.warn(
            f"displacement amplitude |{amp}|^2 = {abs(amp)**2:.2f} is large for "
            f"truncation {dim}; result may be visibly non-unitary",
            stacklevel=2,
        )
    a = annihilation(dim)
    return expm(amp * a.conj().T - np.conj(amp) * a)


def coherent(amp: complex, dim: int) -> np.ndarray:
    return displacement(amp, dim) @ fock(dim, 0)


def embed(op: np.ndarray, slot: str, spec: HilbertSpec) -> np.ndarray:
    """Embed a single-mode operator as op (x) identity on the other factors."""
    dims = {"a": spec.dim_a, "b": spec.dim_b, "c": spec.dim_c}
    slot = slot.lower()
    if slot not in dims:
        raise DimensionError(f"slot must be one of a/b/c, got {slot!r}")
    if op.shape != (dims[slot], dims[slot]):
        raise DimensionError(
            f"operator shape {op.shape} does not match slot {slot} dim {dims[slot]}"
        )
    factors = {
        "a": (op, identity(spec.dim_b), identity(spec.dim_c)),
        "b": (identity(spec.dim_a), op, identity(spec.dim_c)),
        "c": (identity(spec.dim_a), identity(spec.dim_b), op),
    }[slot]
    return kron3(*factors)


def kron3(op_a: np.ndarray, op_b: np.ndarray, op_c: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(op_a, op_b), op_c)


def expectation(state: np.ndarray, obs: np.ndarray) -> complex:
    """Tr[state . obs] for a density-matrix-like state."""
    if state.shape != obs.shape or state.shape[0] != state.shape[1]:
        raise DimensionError(
            f"state shape {state.shape} incompatible with observable {obs.shape}"
        )
    return complex(np.trace(state @ obs))


def dm(vec: np.ndarray) -> np.ndarray:
    """|vec><vec| for a normalized state vector."""
    return np.outer(vec, vec.conj())


def assert_hermitian(op: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    dev = np.max(np.abs(op - op.conj().T))
    if dev > tol:
        raise ValueError(f"operator deviates from Hermiticity by {dev:.3e} > {tol:.0e}")
