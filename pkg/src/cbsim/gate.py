"""Hamiltonian assembly for the controlled-beam-splitter gate.

A :class:`GateContext` freezes the effective parameters, the Hilbert-space
truncations and the ancilla working basis, and caches every operator the
time-dependent Hamiltonian needs.  ``hamiltonian_at`` is then a cheap, pure
function of time, which is what the integrator wants.

Ancilla truncation note: a bare Fock truncation of dimension n is exactly the
diagonal basis with keep = n (the two differ by a unitary rotation of the
ancilla factor), so every simulation here runs in the diagonalized cat basis
and "Fock-basis" convergence runs simply set keep = fock_dim.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import operators as ops
from .catbasis import CatBasis, build_cat_basis, default_truncation
from .params import EffectiveParams, ParameterError


class ScheduleError(ValueError):
    """Malformed drive schedule or out-of-range evaluation time."""


@dataclass(frozen=True)
class Segment:
    duration: float
    zeta1_on: bool
    zeta2_on: bool


@dataclass(frozen=True)
class DriveSchedule:
    """Time-segmented drive program with instantaneous switching.

    Sequential schedules have exactly two segments (cPBS then BS);
    simultaneous schedules a single segment with both couplings on.  The
    ``simultaneous_cancelled`` scheme is the simultaneous one with the
    residual linear ancilla drive forced to zero.
    """

    scheme: str  # "sequential" | "simultaneous" | "simultaneous_cancelled"
    cpbs_form: str  # "asymmetric" | "symmetric"
    segments: tuple

    def __post_init__(self):
        if self.scheme not in ("sequential", "simultaneous", "simultaneous_cancelled"):
            raise ScheduleError(f"unknown scheme {self.scheme!r}")
        if self.cpbs_form not in ("asymmetric", "symmetric"):
            raise ScheduleError(f"unknown cPBS form {self.cpbs_form!r}")
        if any(seg.duration <= 0 for seg in self.segments):
            raise ScheduleError("segment durations must be positive")
        if self.scheme == "sequential":
            if len(self.segments) != 2 or not (
                self.segments[0].zeta1_on
                and not self.segments[0].zeta2_on
                and self.segments[1].zeta2_on
                and not self.segments[1].zeta1_on
            ):
                raise ScheduleError("sequential scheme needs a cPBS segment then a BS segment")
        else:
            if len(self.segments) != 1:
                raise ScheduleError("simultaneous schemes have a single segment")

    @property
    def total_duration(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    @property
    def boundaries(self) -> np.ndarray:
        """Cumulative segment edges including 0 and the total duration."""
        return np.concatenate([[0.0], np.cumsum([seg.duration for seg in self.segments])])

    @property
    def linear_term_active(self) -> bool:
        return self.scheme == "simultaneous"

    def segment_index(self, t: float) -> int:
        edges = self.boundaries
        if t < -1e-12 or t > edges[-1] * (1 + 1e-12) + 1e-12:
            raise ScheduleError(f"time {t} outside schedule span [0, {edges[-1]}]")
        idx = int(np.searchsorted(edges, t, side="right")) - 1
        return min(max(idx, 0), len(self.segments) - 1)


def sequential_schedule(t1: float, t2: float, cpbs_form: str = "asymmetric") -> DriveSchedule:
    return DriveSchedule(
        scheme="sequential",
        cpbs_form=cpbs_form,
        segments=(Segment(t1, True, False), Segment(t2, False, True)),
    )


def simultaneous_schedule(
    duration: float, cancelled: bool = False, cpbs_form: str = "asymmetric"
) -> DriveSchedule:
    return DriveSchedule(
        scheme="simultaneous_cancelled" if cancelled else "simultaneous",
        cpbs_form=cpbs_form,
        segments=(Segment(duration, True, True),),
    )


@dataclass(frozen=True)
class GateContext:
    """Immutable bundle of parameters, space and cached operators."""

    params: EffectiveParams
    spec: ops.HilbertSpec
    basis: CatBasis
    # cached pair-space (cavity A x B) and ancilla-local operators
    pair_dim: int = field(init=False, default=0)
    _cache: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        if self.basis.keep != self.spec.dim_c:
            raise ops.DimensionError(
                f"basis keeps {self.basis.keep} states but spec.dim_c = {self.spec.dim_c}"
            )
        object.__setattr__(self, "pair_dim", self.spec.dim_a * self.spec.dim_b)
        self._build_cache()

    def _build_cache(self):
        p = self.params
        da, db = self.spec.dim_a, self.spec.dim_b
        a = ops.annihilation(da)
        bb = ops.annihilation(db)
        eye_a, eye_b = ops.identity(da), ops.identity(db)
        adag_b = np.kron(a.conj().T, bb)  # a^dag b on the pair space
        n_pair = np.kron(ops.number(da), eye_b) + np.kron(eye_a, ops.number(db))
        eye_pair = np.eye(self.pair_dim, dtype=complex)
        eye_c = np.eye(self.basis.keep, dtype=complex)

        bs = self.basis
        h_cat = (
            -p.kerr * bs.kerr_op
            + p.epsilon * bs.cdag2_op
            + np.conj(p.epsilon) * bs.c2_op
        )
        alpha_sq = abs(p.alpha) ** 2
        h_ck = -p.chi * np.kron(n_pair - p.N * eye_pair, bs.n_op - alpha_sq * eye_c)
        h_base = np.kron(eye_pair, h_cat) + h_ck

        h_cpbs_asym = -p.zeta1 * np.kron(adag_b, bs.cdag_op) - np.conj(p.zeta1) * np.kron(
            adag_b.conj().T, bs.c_op
        )
        h_cpbs_sym = -np.kron(
            adag_b + adag_b.conj().T,
            p.zeta1 * bs.cdag_op + np.conj(p.zeta1) * bs.c_op,
        )
        h_bs = np.kron(p.zeta2 * adag_b + np.conj(p.zeta2) * adag_b.conj().T, eye_c)
        lam = p.linear_term_amp * p.kerr
        h_lin = np.kron(eye_pair, lam * bs.cdag_op + np.conj(lam) * bs.c_op)

        self._cache.update(
            a=a, b=bb, adag_b=adag_b, n_pair=n_pair, eye_pair=eye_pair,
            h_base=h_base, h_cpbs_asym=h_cpbs_asym, h_cpbs_sym=h_cpbs_sym,
            h_bs=h_bs, h_lin=h_lin,
            n_a=np.kron(np.kron(ops.number(da), eye_b), eye_c),
            n_b=np.kron(np.kron(eye_a, ops.number(db)), eye_c),
        )

    # -- cached views ------------------------------------------------------
    @property
    def n_a(self) -> np.ndarray:
        return self._cache["n_a"]

    @property
    def n_b(self) -> np.ndarray:
        return self._cache["n_b"]

    @property
    def dim(self) -> int:
        return self.spec.total_dim

    def embed_ancilla(self, op: np.ndarray) -> np.ndarray:
        return np.kron(self._cache["eye_pair"], op)

    def embed_pair(self, op: np.ndarray) -> np.ndarray:
        return np.kron(op, np.eye(self.basis.keep, dtype=complex))

    def logical_projectors(self) -> tuple:
        """(Pi_0, Pi_1) embedded projectors onto the ancilla logical states."""
        return (
            self.embed_ancilla(ops.dm(self.basis.state_0)),
            self.embed_ancilla(ops.dm(self.basis.state_1)),
        )

    def cavity_fock_projector(self, na: int, nb: int) -> np.ndarray:
        proj = np.kron(
            ops.dm(ops.fock(self.spec.dim_a, na)), ops.dm(ops.fock(self.spec.dim_b, nb))
        )
        return self.embed_pair(proj)

    def initial_state(self, ancilla: str, cavity: str) -> np.ndarray:
        """Product state |n_a n_b> x |ancilla logical>, e.g. ("1", "01")."""
        na, nb = int(cavity[0]), int(cavity[1])
        vec = np.kron(
            np.kron(ops.fock(self.spec.dim_a, na), ops.fock(self.spec.dim_b, nb)),
            self.basis.logical_state(ancilla),
        )
        return ops.dm(vec)


def make_context(
    params: EffectiveParams,
    dim_a: int = 3,
    dim_b: int = 3,
    fock_dim: int = None,
    keep: int = None,
) -> GateContext:
    """Build a GateContext, choosing ancilla truncations from the cat size."""
    alpha_sq = abs(params.alpha) ** 2
    fd, kp = default_truncation(alpha_sq)
    fock_dim = fd if fock_dim is None else fock_dim
    keep = kp if keep is None else keep
    keep = min(keep, fock_dim)
    basis = build_cat_basis(params.kerr, params.epsilon_diag, fock_dim, keep)
    spec = ops.HilbertSpec(dim_a, dim_b, keep, ancilla_basis="diagonal")
    return GateContext(params=params, spec=spec, basis=basis)


def hamiltonian_at(ctx: GateContext, sched: DriveSchedule, t: float) -> np.ndarray:
    """Total Hamiltonian at time t under the given schedule (units of K)."""
    seg = sched.segments[sched.segment_index(t)]
    return hamiltonian_for_segment(ctx, sched, seg)


def hamiltonian_for_segment(
    ctx: GateContext, sched: DriveSchedule, seg: Segment
) -> np.ndarray:
    cache = ctx._cache
    h = cache["h_base"].copy()
    if seg.zeta1_on:
        h += cache["h_cpbs_sym" if sched.cpbs_form == "symmetric" else "h_cpbs_asym"]
    if seg.zeta2_on:
        h += cache["h_bs"]
    if sched.linear_term_active and seg.zeta1_on and seg.zeta2_on:
        h += cache["h_lin"]
    return h


def collapse_operators(ctx: GateContext) -> list:
    """[(rate, embedded op)] for single-photon loss/gain and two-photon loss."""
    p = ctx.params
    return [(rate, ctx.embed_ancilla(op)) for rate, op in ancilla_jumps(ctx)]


def ancilla_jumps(ctx: GateContext) -> list:
    """Ancilla-local jump operators with their rates (zero rates included)."""
    p = ctx.params
    bs = ctx.basis
    return [
        (p.kappa * (1.0 + p.N_t), bs.c_op),
        (p.kappa * p.N_t, bs.cdag_op),
        (p.kappa2, bs.c2_op),
    ]


def recorded_observables(ctx: GateContext) -> dict:
    """Named observables for dynamics runs (all embedded in the full space).

    Expectation values of these generate every Fig.-style curve: populations,
    logical X/Y (phase rotation), logical-state projectors (bit flip),
    P_logical (leakage = 1 - value) and the two-photon bunching projectors.
    """
    bs = ctx.basis
    obs = {
        "n_a": ctx.n_a,
        "n_b": ctx.n_b,
        "n_c": ctx.embed_ancilla(bs.n_op),
        "x_L": ctx.embed_ancilla(bs.X_L),
        "y_L": ctx.embed_ancilla(bs.Y_L),
        "p_logical": ctx.embed_ancilla(bs.P_logical),
        "pi_0": ctx.embed_ancilla(ops.dm(bs.state_0)),
        "pi_1": ctx.embed_ancilla(ops.dm(bs.state_1)),
    }
    if ctx.spec.dim_a >= 3 and ctx.spec.dim_b >= 3:
        obs["p_20"] = ctx.cavity_fock_projector(2, 0)
        obs["p_02"] = ctx.cavity_fock_projector(0, 2)
        obs["p_11"] = ctx.cavity_fock_projector(1, 1)
    return obs


# -- analytic oracles ------------------------------------------------------


def mean_field_evolution(zeta0: float, phi: float, t: float, a0: complex, b0: complex) -> tuple:
    """Classical splitter transformation of the mode amplitudes.

    The cPBS rate is written as -/+ zeta1*alpha = zeta0 e^{i phi}; the field
    map is a(t) = cos(zeta0 t) a0 + i sin(zeta0 t) e^{i phi} b0 and its
    b-counterpart with the conjugate phase.
    """
    c, s = np.cos(zeta0 * t), np.sin(zeta0 * t)
    a_t = c * a0 + 1j * s * np.exp(1j * phi) * b0
    b_t = 1j * s * np.exp(-1j * phi) * a0 + c * b0
    return a_t, b_t


def _mode_matrix(mu: complex, t: float) -> np.ndarray:
    """State-map matrix for H = mu a^dag b + h.c.: modes -> M @ modes."""
    theta = abs(mu) * t
    if theta == 0.0:
        return np.eye(2, dtype=complex)
    phase = mu / abs(mu)
    return np.array(
        [
            [np.cos(theta), 1j * np.sin(theta) * phase],
            [1j * np.sin(theta) * np.conj(phase), np.cos(theta)],
        ]
    )


def mean_field_pair_hamiltonian(
    ctx: GateContext, sched: DriveSchedule, seg: Segment, branch: int
) -> np.ndarray:
    """Pair-space Hamiltonian with the ancilla frozen at <c> = +/-alpha."""
    p = ctx.params
    alpha = abs(p.alpha)
    sign = 1.0 if branch == 0 else -1.0
    adag_b = ctx._cache["adag_b"]
    h = np.zeros_like(adag_b)
    if seg.zeta1_on:
        if sched.cpbs_form == "symmetric":
            h += -sign * alpha * (p.zeta1 + np.conj(p.zeta1)) * (adag_b + adag_b.conj().T)
        else:
            mu = -sign * alpha * p.zeta1
            h += mu * adag_b + np.conj(mu) * adag_b.conj().T
    if seg.zeta2_on:
        h += p.zeta2 * adag_b + np.conj(p.zeta2) * adag_b.conj().T
    return h


def ideal_schedule_unitary(ctx: GateContext, sched: DriveSchedule) -> np.ndarray:
    """Dissipation-free target unitary implied by the mean-field picture.

    Each ancilla logical branch sees a classical splitter Hamiltonian; the
    branch propagators are stitched together with the logical projectors and
    the identity on the leakage space.
    """
    u_branch = []
    for branch in (0, 1):
        u = np.eye(ctx.pair_dim, dtype=complex)
        for seg in sched.segments:
            h = mean_field_pair_hamiltonian(ctx, sched, seg, branch)
            u = expm(-1j * h * seg.duration) @ u
        u_branch.append(u)
    pi0 = ops.dm(ctx.basis.state_0)
    pi1 = ops.dm(ctx.basis.state_1)
    return (
        np.kron(u_branch[0], pi0)
        + np.kron(u_branch[1], pi1)
        + np.kron(np.eye(ctx.pair_dim, dtype=complex), ctx.basis.P_leak)
    )


def ideal_gate_unitary(ctx: GateContext, theta: float, conditional: bool = True) -> np.ndarray:
    """exp[(theta/2) Z (a^dag b - a b^dag)] (or the unconditional version).

    The conditional version acts as identity on the ancilla leakage space.
    """
    adag_b = ctx._cache["adag_b"]
    g_pair = adag_b - adag_b.conj().T
    if conditional:
        gen = 0.5 * theta * np.kron(g_pair, ctx.basis.Z_L)
    else:
        gen = 0.5 * theta * np.kron(g_pair, np.eye(ctx.basis.keep, dtype=complex))
    return expm(gen)


def cswap_unitary(ctx: GateContext) -> np.ndarray:
    """Controlled-SWAP with the splitter orientation the drive phases realize.

    Ancilla |0> sees the identity, |1> a full swap; equal to the sequential
    ``ideal_schedule_unitary`` on the logical subspace.
    """
    return ideal_gate_unitary(ctx, -np.pi / 2, conditional=False) @ ideal_gate_unitary(
        ctx, np.pi / 2, conditional=True
    )


@dataclass(frozen=True)
class HomLeakage:
    eta: complex
    mu: float
    amp_11: complex
    amp_20: complex
    amp_02: complex


def hom_leakage_state(fraction: float, zeta1_phase: float = -np.pi / 2) -> HomLeakage:
    """Two-photon amplitudes after an ancilla bit flip during the cPBS stage.

    ``fraction`` locates the flip within the cPBS segment of an ideal full
    swap (ancilla nominally in |1>).  The three splitter stages are composed
    as 2x2 mode maps; |eta|^2 + mu^2 = 1 by unitarity.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    zeta1 = np.exp(1j * zeta1_phase)
    mu1 = zeta1  # branch |1>: H = +zeta1 alpha a^dag b + h.c. (unit rate)
    quarter = np.pi / 4
    m = _mode_matrix(mu1, quarter * fraction)
    m = _mode_matrix(-mu1, quarter * (1.0 - fraction)) @ m
    m = _mode_matrix(mu1, quarter) @ m  # BS stage, zeta2 = zeta1 alpha
    n = m.conj()  # creation operators transform with the conjugate matrix
    eta = n[0, 0] * n[1, 1] + n[0, 1] * n[1, 0]
    amp_20 = np.sqrt(2.0) * n[0, 0] * n[1, 0]
    amp_02 = np.sqrt(2.0) * n[0, 1] * n[1, 1]
    mu = float(np.sqrt(abs(amp_20) ** 2 + abs(amp_02) ** 2))
    return HomLeakage(eta=complex(eta), mu=mu, amp_11=complex(eta), amp_20=complex(amp_20), amp_02=complex(amp_02))
