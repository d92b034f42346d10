import numpy as np
import pytest

from cbsim import params as P

TWO_PI = 2 * np.pi


def _table_bare():
    """Bare circuit parameters close to the reference hardware point."""
    wa0 = TWO_PI * 7.0e9
    wb0 = TWO_PI * 6.5e9
    wc0 = TWO_PI * 6.0e9
    return dict(
        omega_a0=wa0,
        omega_b0=wb0,
        omega_c0=wc0,
        g_a=TWO_PI * 100e6,
        g_b=TWO_PI * 50e6,
        g_3=TWO_PI * 20e6,
        g_4=-TWO_PI * 6.7e6 / 6.0,
    )


def _with_tones(base: dict, amp=TWO_PI * 1e6) -> P.BareParams:
    """Attach the three pump tones at their matching frequencies."""
    bare = P.BareParams(**base)
    dressed = P.dress_parameters(bare)
    delta = dressed.omega_a_rot - dressed.omega_b_rot
    drives = (
        P.Drive(2 * dressed.omega_c_rot, amp),
        P.Drive(dressed.omega_c_rot + delta, amp),
        P.Drive(delta, amp),
    )
    return P.BareParams(**base, drives=drives)


class TestBareValidation:
    def test_resonant_cavity_rejected(self):
        base = _table_bare()
        base["omega_a0"] = base["omega_c0"]
        with pytest.raises(P.ParameterError):
            P.BareParams(**base)

    def test_strong_coupling_rejected(self):
        base = _table_bare()
        base["g_a"] = 0.6 * (base["omega_a0"] - base["omega_c0"])
        with pytest.raises(P.ParameterError):
            P.BareParams(**base)

    def test_ratios(self):
        bare = P.BareParams(**_table_bare())
        assert bare.ratio_a == pytest.approx(0.1)
        assert bare.ratio_b == pytest.approx(0.1)


class TestDressing:
    def test_dressed_mode_formula(self):
        bare = P.BareParams(**_table_bare())
        dressed = P.dress_parameters(bare)
        # cavities above the nonlinear mode are pushed up
        assert dressed.omega_a > bare.omega_a0
        assert dressed.omega_b > bare.omega_b0
        expect_c = (
            bare.omega_c0
            - 2 * bare.g_a**2 / bare.delta_a
            - 2 * bare.g_b**2 / bare.delta_b
            + bare.omega_a0 * bare.ratio_a**2
            + bare.omega_b0 * bare.ratio_b**2
        )
        assert dressed.omega_c == pytest.approx(expect_c, rel=1e-12)

    def test_dressed_shift_magnitude(self):
        bare = P.BareParams(**_table_bare())
        dressed = P.dress_parameters(bare)
        expected = bare.omega_a0 + 2 * bare.g_a**2 / bare.delta_a + bare.omega_c0 * bare.ratio_a**2
        assert dressed.omega_a == pytest.approx(expected, rel=1e-12)

    def test_near_resonant_drive_rejected(self):
        base = _table_bare()
        bare = P.BareParams(**base)
        dressed = P.dress_parameters(bare)
        bad = P.BareParams(**base, drives=(P.Drive(dressed.omega_a + 1.0, 10.0),))
        with pytest.raises(P.ResonanceError):
            P.dress_parameters(bad)

    def test_displacement_amplitudes(self):
        bare = _with_tones(_table_bare())
        dressed = P.dress_parameters(bare)
        for k, drv in enumerate(bare.drives):
            expect = bare.ratio_a * drv.epsilon / (drv.omega - dressed.omega_a)
            assert dressed.xi_a[k] == pytest.approx(expect, rel=1e-12)
            combo = (
                bare.ratio_a * dressed.xi_a[k]
                + bare.ratio_b * dressed.xi_b[k]
                + dressed.xi_c[k]
            )
            assert dressed.xi_eff[k] == pytest.approx(combo, rel=1e-12)


class TestEffectiveCouplings:
    def test_kerr_sign_convention(self):
        bare = _with_tones(_table_bare())
        dressed = P.dress_parameters(bare)
        eff = P.derive_effective_couplings(bare, dressed)
        assert eff.kerr == pytest.approx(-6.0 * bare.g_4)
        assert eff.kerr > 0

    def test_rate_formulas(self):
        bare = _with_tones(_table_bare())
        dressed = P.dress_parameters(bare)
        eff = P.derive_effective_couplings(bare, dressed)
        ra, rb = bare.ratio_a, bare.ratio_b
        assert eff.epsilon == pytest.approx(3 * bare.g_3 * dressed.xi_eff[0], rel=1e-12)
        assert eff.zeta1 == pytest.approx(4 * eff.kerr * ra * rb * dressed.xi_eff[1], rel=1e-12)
        assert eff.zeta2 == pytest.approx(6 * bare.g_3 * ra * rb * dressed.xi_eff[2], rel=1e-12)
        assert eff.chi_a == pytest.approx(4 * eff.kerr * ra**2, rel=1e-12)

    def test_missing_tone(self):
        bare = P.BareParams(**_table_bare())
        dressed = P.dress_parameters(bare)
        with pytest.raises(P.ConfigurationError):
            P.derive_effective_couplings(bare, dressed)

    def test_positive_g4_rejected(self):
        base = _table_bare()
        base["g_4"] = abs(base["g_4"])
        bare = _with_tones(base)
        with pytest.raises(P.ParameterError):
            P.derive_effective_couplings(bare, P.dress_parameters(bare))


class TestCrossKerrCompensation:
    def test_symmetric_point(self):
        eff = P.EffectiveParams(chi_a=0.09, chi_b=0.09)
        out = P.compensate_cross_kerr(eff, 1.0, 0.0)
        assert out.N == 1.0
        assert out.chi == pytest.approx(0.09)

    def test_asymmetric_rejected(self):
        eff = P.EffectiveParams(chi_a=0.09, chi_b=0.08)
        with pytest.raises(P.AsymmetryError):
            P.compensate_cross_kerr(eff, 1.0, 0.0)


class TestTwoPhotonDriveAdjustment:
    def test_alpha_real_after_adjustment(self):
        eff = P.EffectiveParams(kappa2=0.08)
        out = P.adjust_two_photon_drive(eff, np.sqrt(3.0))
        # the diagonalization amplitude eps/(1 + i kappa2/2) comes out real
        ratio = out.epsilon / (1.0 + 0.5j * out.kappa2)
        assert abs(ratio.imag) < 1e-12
        assert ratio.real == pytest.approx(3.0, rel=1e-12)

    def test_magnitude(self):
        eff = P.EffectiveParams(kappa2=0.08)
        out = P.adjust_two_photon_drive(eff, np.sqrt(2.0))
        assert abs(out.epsilon) == pytest.approx(2.0 * np.sqrt(1 + 0.08**2 / 4), rel=1e-12)

    def test_zero_dissipation_limit(self):
        eff = P.EffectiveParams(kappa2=0.0)
        out = P.adjust_two_photon_drive(eff, 1.5)
        assert out.epsilon == pytest.approx(1.5**2)
        assert out.epsilon_diag == pytest.approx(1.5**2)

    def test_paper_phase_variant(self):
        eff = P.EffectiveParams(kappa2=0.08)
        a = P.adjust_two_photon_drive(eff, 2.0)
        b = P.adjust_two_photon_drive(eff, 2.0, paper_phase=True)
        # alternative convention halves the compensation angle at leading order
        assert np.angle(a.epsilon) == pytest.approx(2 * np.angle(b.epsilon), rel=1e-3)
        # only the default keeps the diagonalization amplitude exactly real
        assert abs((b.epsilon / (1.0 + 0.04j)).imag) > 1e-4

    def test_invalid_target(self):
        with pytest.raises(P.ParameterError):
            P.adjust_two_photon_drive(P.EffectiveParams(), -1.0)


class TestGateTiming:
    def test_reference_gate_time(self):
        """Sequential full swap at alpha^2 = 3 lasts 1.2 us for K/2pi = 6.7 MHz."""
        eff = P.preset("fig3")
        t1, t2 = P.gate_timing(eff)
        kerr = 2 * np.pi * 6.7e6
        assert (t1 + t2) / kerr == pytest.approx(1.2e-6, rel=0.05)

    def test_equal_segments_when_zeta2_matched(self):
        eff = P.preset("fig3")
        t1, t2 = P.gate_timing(eff)
        # zeta2 = zeta1 alpha makes both segments equally long
        assert t1 == pytest.approx(t2, rel=1e-12)

    def test_symmetric_form_halves_cpbs_time(self):
        eff = P.preset("fig3")
        t1, _ = P.gate_timing(eff)
        t1s, _ = P.gate_timing(eff, symmetric=True)
        assert t1s == pytest.approx(t1 / 2, rel=1e-12)

    def test_zero_angle(self):
        assert P.gate_timing(P.preset("fig3"), theta=0.0) == (0.0, 0.0)

    def test_zero_coupling_rejected(self):
        with pytest.raises(P.ParameterError):
            P.gate_timing(P.EffectiveParams(alpha=1.0))


class TestPresets:
    def test_names(self):
        for name in P.PRESET_NAMES:
            eff = P.preset(name)
            assert abs(eff.alpha) == pytest.approx(np.sqrt(3.0))

    def test_fig3_values(self):
        eff = P.preset("fig3")
        assert abs(eff.zeta1) == pytest.approx(0.018)
        assert np.angle(eff.zeta1) == pytest.approx(-np.pi / 2)
        assert eff.zeta2 == pytest.approx(eff.zeta1 * np.sqrt(3.0))
        assert (eff.chi, eff.N, eff.kappa, eff.kappa2, eff.N_t) == (
            0.09, 1.0, 2e-4, 8e-2, 0.06)

    def test_simultaneous_preset(self):
        eff = P.preset("fig6-simultaneous", alpha_sq=3.0)
        assert abs(eff.zeta1) == pytest.approx(0.009)
        assert eff.linear_term_amp == pytest.approx(-0.037 * np.sqrt(3.0))

    def test_unknown_preset(self):
        with pytest.raises(P.ConfigurationError):
            P.preset("fig9")

    def test_alpha_override(self):
        eff = P.preset("fig3", alpha_sq=7.0)
        assert abs(eff.alpha) ** 2 == pytest.approx(7.0)

    def test_as_dict_roundtrippable(self):
        d = P.preset("fig3").as_dict()
        assert d["zeta1"]["im"] == pytest.approx(-0.018)
        assert isinstance(d["kappa"], float)
