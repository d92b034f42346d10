"""Device parameters: bare-circuit inputs, dressing, and effective gate rates.

All internal computation is done in units of the Kerr nonlinearity (K = 1,
time in 1/K); conversion to physical units happens once, at the CLI boundary.
The effective level (rates zeta1, zeta2, chi, kappa, ... relative to K) is the
native parameterization of every simulation; deriving it from bare circuit
parameters is optional.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

TWO_PI = 2.0 * np.pi


class ParameterError(ValueError):
    """Inconsistent or out-of-regime device parameters."""


class ResonanceError(ParameterError):
    """A drive tone sits too close to a mode frequency for the displacement
    transformation to converge."""


class ConfigurationError(ParameterError):
    """A required drive tone is missing or ambiguous."""


class AsymmetryError(ParameterError):
    """Cavity cross-Kerr rates differ while the symmetric form was requested."""


@dataclass(frozen=True)
class Drive:
    omega: float
    epsilon: complex


@dataclass(frozen=True)
class BareParams:
    """Bare circuit frequencies and couplings (angular frequencies)."""

    omega_a0: float
    omega_b0: float
    omega_c0: float
    g_a: float
    g_b: float
    g_3: float
    g_4: float
    drives: tuple = ()

    def __post_init__(self):
        if self.delta_a == 0.0 or self.delta_b == 0.0:
            raise ParameterError("cavities must be detuned from the SNAIL (dispersive regime)")
        for name, ratio in (("g_a/Delta_a", self.ratio_a), ("g_b/Delta_b", self.ratio_b)):
            if abs(ratio) >= 0.5:
                raise ParameterError(f"|{name}| = {abs(ratio):.3f} breaks the perturbative dressing")

    @property
    def delta_a(self) -> float:
        return self.omega_a0 - self.omega_c0

    @property
    def delta_b(self) -> float:
        return self.omega_b0 - self.omega_c0

    @property
    def ratio_a(self) -> float:
        return self.g_a / self.delta_a

    @property
    def ratio_b(self) -> float:
        return self.g_b / self.delta_b


@dataclass(frozen=True)
class DressedParams:
    """Frequencies and drive amplitudes after dressing and displacement."""

    omega_a: float
    omega_b: float
    omega_c: float
    omega_a_rot: float
    omega_b_rot: float
    omega_c_rot: float
    xi_a: tuple
    xi_b: tuple
    xi_c: tuple
    xi_eff: tuple


@dataclass(frozen=True)
class EffectiveParams:
    """Everything the gate Hamiltonian and dissipators need, in units of K."""

    kerr: float = 1.0
    epsilon: complex = 0.0
    alpha: complex = 0.0
    zeta1: complex = 0.0
    zeta2: complex = 0.0
    chi_a: float = 0.0
    chi_b: float = 0.0
    chi: float = 0.0
    N: float = 0.0
    kappa: float = 0.0
    kappa2: float = 0.0
    N_t: float = 0.0
    epsilon_diag: complex = 0.0
    xi_eff: tuple = ()
    linear_term_amp: complex = 0.0

    def __post_init__(self):
        if self.kerr <= 0:
            raise ParameterError("K must be positive (convention K = -6 g4, g4 < 0)")
        for name in ("kappa", "kappa2", "N_t"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")

    def as_dict(self) -> dict:
        out = {}
        for name in (
            "kerr", "epsilon", "alpha", "zeta1", "zeta2", "chi_a", "chi_b",
            "chi", "N", "kappa", "kappa2", "N_t", "epsilon_diag", "linear_term_amp",
        ):
            val = getattr(self, name)
            if isinstance(val, complex):
                out[name] = {"re": val.real, "im": val.imag}
            else:
                out[name] = val
        return out


def dress_parameters(bare: BareParams, resonance_factor: float = 10.0) -> DressedParams:
    """Dressed frequencies, displacement amplitudes and Stark-shifted rotating frame.

    Raises :class:`ResonanceError` when any drive sits within
    ``resonance_factor * |epsilon_k|`` of a dressed mode frequency.
    """
    ra, rb = bare.ratio_a, bare.ratio_b
    wa = bare.omega_a0 + 2 * bare.g_a**2 / bare.delta_a + bare.omega_c0 * ra**2
    wb = bare.omega_b0 + 2 * bare.g_b**2 / bare.delta_b + bare.omega_c0 * rb**2
    wc = (
        bare.omega_c0
        - 2 * bare.g_a**2 / bare.delta_a
        - 2 * bare.g_b**2 / bare.delta_b
        + bare.omega_a0 * ra**2
        + bare.omega_b0 * rb**2
    )

    xi_a, xi_b, xi_c, xi_eff = [], [], [], []
    for drv in bare.drives:
        for mode_name, mode_freq in (("a", wa), ("b", wb), ("c", wc)):
            if abs(drv.omega - mode_freq) <= resonance_factor * abs(drv.epsilon):
                raise ResonanceError(
                    f"drive at {drv.omega:.6g} is near-resonant with mode {mode_name} "
                    f"({mode_freq:.6g}); displacement transformation diverges"
                )
        xa = ra * drv.epsilon / (drv.omega - wa)
        xb = rb * drv.epsilon / (drv.omega - wb)
        xc = drv.epsilon / (drv.omega - wc)
        xi_a.append(xa)
        xi_b.append(xb)
        xi_c.append(xc)
        xi_eff.append(ra * xa + rb * xb + xc)

    stark = 1.0 + 2.0 * sum(abs(x) ** 2 for x in xi_c)
    wa_rot = wa + 12 * bare.g_4 * ra**2 * stark
    wb_rot = wb + 12 * bare.g_4 * rb**2 * stark
    wc_rot = wc + 12 * bare.g_4 * (stark + ra**2 + rb**2)

    return DressedParams(
        omega_a=wa, omega_b=wb, omega_c=wc,
        omega_a_rot=wa_rot, omega_b_rot=wb_rot, omega_c_rot=wc_rot,
        xi_a=tuple(xi_a), xi_b=tuple(xi_b), xi_c=tuple(xi_c), xi_eff=tuple(xi_eff),
    )


def _match_drive(bare: BareParams, dressed: DressedParams, target: float, label: str, rtol: float) -> int:
    scale = abs(dressed.omega_c_rot) or 1.0
    hits = [k for k, drv in enumerate(bare.drives) if abs(drv.omega - target) <= rtol * scale]
    if len(hits) != 1:
        raise ConfigurationError(
            f"expected exactly one drive tone at {label} = {target:.6g}, found {len(hits)}"
        )
    return hits[0]


def derive_effective_couplings(
    bare: BareParams, dressed: DressedParams, freq_rtol: float = 1e-6
) -> EffectiveParams:
    """Effective gate rates from the dressed picture.

    Needs three tones: two-photon drive at 2*omega_c', cPBS pump at
    omega_c' + Delta and BS pump at Delta, with Delta = omega_a' - omega_b'.
    """
    if bare.g_4 >= 0:
        raise ParameterError("g_4 must be negative so that K = -6 g_4 > 0")
    delta = dressed.omega_a_rot - dressed.omega_b_rot
    k1 = _match_drive(bare, dressed, 2 * dressed.omega_c_rot, "2*omega_c'", freq_rtol)
    k2 = _match_drive(bare, dressed, dressed.omega_c_rot + delta, "omega_c' + Delta", freq_rtol)
    k3 = _match_drive(bare, dressed, delta, "Delta", freq_rtol)

    kerr = -6.0 * bare.g_4
    ra, rb = bare.ratio_a, bare.ratio_b
    epsilon = 3.0 * bare.g_3 * dressed.xi_eff[k1]
    zeta1 = 4.0 * kerr * ra * rb * dressed.xi_eff[k2]
    zeta2 = 6.0 * bare.g_3 * ra * rb * dressed.xi_eff[k3]
    chi_a = 4.0 * kerr * ra**2
    chi_b = 4.0 * kerr * rb**2
    chi = chi_a if np.isclose(chi_a, chi_b, rtol=1e-9) else 0.5 * (chi_a + chi_b)
    return EffectiveParams(
        kerr=kerr,
        epsilon=epsilon,
        epsilon_diag=epsilon,
        alpha=complex(np.sqrt(epsilon / kerr + 0j)),
        zeta1=zeta1,
        zeta2=zeta2,
        chi_a=chi_a,
        chi_b=chi_b,
        chi=chi,
        xi_eff=dressed.xi_eff,
    )


def compensate_cross_kerr(eff: EffectiveParams, n_a: float, n_b: float) -> EffectiveParams:
    """Record the mean-field photon numbers cancelled out of the cross-Kerr term.

    After compensation the Hamiltonian builder emits
    -chi (n_a + n_b - N)(c^dag c - |alpha|^2) with N = n_a + n_b.
    """
    if not np.isclose(eff.chi_a, eff.chi_b, rtol=1e-9, atol=1e-15):
        raise AsymmetryError(
            f"chi_a = {eff.chi_a:.6g} differs from chi_b = {eff.chi_b:.6g}; "
            "symmetric compensation undefined"
        )
    return replace(eff, chi=eff.chi_a, N=float(n_a + n_b))


def adjust_two_photon_drive(
    eff: EffectiveParams, alpha_target: float, paper_phase: bool = False
) -> EffectiveParams:
    """Compensate two-photon dissipation so the steady cat amplitude stays real.

    The no-jump back action shifts the cat amplitude to
    alpha = sqrt(eps / (K + i*kappa2/2)); we pick |eps| = alpha^2 *
    sqrt(K^2 + kappa2^2/4) and a phase that keeps alpha real positive.  The
    self-consistent phase is arctan(kappa2 / (2K)), which makes the
    diagonalization amplitude eps/(1 + i kappa2/2K) exactly real;
    ``paper_phase`` selects the alternative arctan(kappa2 / (4K)) convention,
    which compensates only half the angle (real alpha to first order only).
    """
    if alpha_target <= 0:
        raise ParameterError("target cat amplitude must be real positive")
    kerr, kappa2 = eff.kerr, eff.kappa2
    denom = 2.0 if not paper_phase else 4.0
    phi = np.arctan(kappa2 / (denom * kerr))
    epsilon = alpha_target**2 * np.sqrt(kerr**2 + kappa2**2 / 4.0) * np.exp(1j * phi)
    epsilon_diag = kerr * epsilon / (kerr + 0.5j * kappa2)
    return replace(
        eff,
        alpha=complex(alpha_target),
        epsilon=complex(epsilon),
        epsilon_diag=complex(epsilon_diag),
    )


def gate_timing(
    eff: EffectiveParams, theta: float = np.pi / 2, symmetric: bool = False
) -> tuple:
    """Segment durations (t1, t2) realizing a total splitter angle theta.

    A full swap is theta = pi/2: each stage contributes theta/2, with the
    beam-splitter stage length fixed by the cancellation condition
    |zeta1| alpha t1 = |zeta2| t2.  The symmetric coupling form doubles the
    effective cPBS rate (c + c^dag = 2 alpha Z on the logical subspace).
    """
    alpha = abs(eff.alpha)
    rate1 = abs(eff.zeta1) * alpha * (2.0 if symmetric else 1.0)
    rate2 = abs(eff.zeta2)
    if theta == 0.0:
        return 0.0, 0.0
    if rate1 == 0.0 or rate2 == 0.0:
        raise ParameterError("gate timing undefined for zero coupling")
    t1 = theta / (2.0 * rate1)
    t2 = rate1 * t1 / rate2
    return float(t1), float(t2)


def _fig3_base(alpha_sq: float = 3.0) -> EffectiveParams:
    alpha = float(np.sqrt(alpha_sq))
    eff = EffectiveParams(
        kerr=1.0,
        zeta1=0.018 * np.exp(-0.5j * np.pi),
        chi_a=0.09,
        chi_b=0.09,
        chi=0.09,
        N=1.0,
        kappa=2.0e-4,
        kappa2=8.0e-2,
        N_t=0.06,
    )
    eff = replace(eff, zeta2=eff.zeta1 * alpha)
    return adjust_two_photon_drive(eff, alpha)


def preset(name: str, alpha_sq: float = None) -> EffectiveParams:
    """Named parameter sets used by the reference experiments.

    fig3
        Sequential asymmetric gate, alpha^2 = 3 unless overridden.
    fig5-symmetric
        Symmetric coupling form at the same gate duration; the coupling phase
        is taken real so that the symmetric operator couples to the logical Z
        quadrature.
    fig6-simultaneous
        Halved cPBS rate with both pumps on simultaneously, plus the residual
        linear drive on the ancilla.
    """
    a2 = 3.0 if alpha_sq is None else float(alpha_sq)
    alpha = float(np.sqrt(a2))
    if name == "fig3":
        return _fig3_base(a2)
    if name == "fig5-symmetric":
        eff = _fig3_base(a2)
        zeta1 = 0.009 + 0.0j
        return replace(eff, zeta1=zeta1, zeta2=2.0 * zeta1 * alpha)
    if name == "fig6-simultaneous":
        eff = _fig3_base(a2)
        zeta1 = 0.009 * np.exp(-0.5j * np.pi)
        return replace(
            eff,
            zeta1=zeta1,
            zeta2=zeta1 * alpha,
            linear_term_amp=-0.037 * alpha,
        )
    raise ConfigurationError(f"unknown preset {name!r}")


PRESET_NAMES = ("fig3", "fig5-symmetric", "fig6-simultaneous")
