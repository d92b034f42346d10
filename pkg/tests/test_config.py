import numpy as np
import pytest

from cbsim import config as C
from cbsim import params as P


class TestParsers:
    def test_complex_forms(self):
        assert C.parse_complex("0.018j") == 0.018j
        assert C.parse_complex("1+2j") == 1 + 2j
        assert C.parse_complex("-0.5") == -0.5
        with pytest.raises(C.ConfigError):
            C.parse_complex("abc")

    def test_rate_suffixes(self):
        assert C.parse_rate("6.7 MHz") == pytest.approx(2 * np.pi * 6.7e6)
        assert C.parse_rate("100 kHz") == pytest.approx(2 * np.pi * 1e5)
        assert C.parse_rate("0.018") == 0.018
        with pytest.raises(C.ConfigError):
            C.parse_rate("6.7 parsec")

    def test_bool(self):
        assert C.parse_bool("yes") is True
        assert C.parse_bool("0") is False
        with pytest.raises(C.ConfigError):
            C.parse_bool("maybe")


class TestLoadConfig:
    def test_defaults(self):
        cfg = C.load_config(None)
        assert cfg.preset == "fig3"
        assert cfg.scheme == "sequential"
        assert cfg.dim_a == 3

    def test_empty_file_equals_preset(self, tmp_path):
        path = tmp_path / "empty.ini"
        path.write_text("")
        cfg = C.load_config(str(path), preset="fig3")
        eff = cfg.effective_params()
        ref = P.preset("fig3")
        assert eff.zeta1 == ref.zeta1
        assert eff.kappa2 == ref.kappa2

    def test_file_overrides_preset(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(
            "[effective]\nalpha2 = 5\nzeta1 = -0.02j\n"
            "[dissipation]\nkappa = 1e-4\n"
            "[schedule]\nscheme = simultaneous\n"
            "[truncation]\ndim_a = 4\n"
        )
        cfg = C.load_config(str(path))
        eff = cfg.effective_params()
        assert abs(eff.alpha) ** 2 == pytest.approx(5.0)
        assert eff.zeta1 == -0.02j
        assert eff.kappa == 1e-4
        assert cfg.scheme == "simultaneous"
        assert cfg.dim_a == 4

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[effective]\nalpha2 = 5\n")
        cfg = C.load_config(str(path), alpha2=7.0)
        assert abs(cfg.effective_params().alpha) ** 2 == pytest.approx(7.0)

    def test_unknown_key_is_hard_error(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[effective]\nzeta_one = 0.018\n")
        with pytest.raises(C.ConfigError, match="zeta_one"):
            C.load_config(str(path))

    def test_unknown_section(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[mystery]\nx = 1\n")
        with pytest.raises(C.ConfigError, match="mystery"):
            C.load_config(str(path))

    def test_malformed_numeric_reports_line(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[effective]\nalpha2 = 5\nchi = zero\n")
        with pytest.raises(C.ConfigError, match="line 3"):
            C.load_config(str(path))

    def test_missing_file(self):
        with pytest.raises(C.ConfigError):
            C.load_config("/nonexistent/run.ini")

    def test_unknown_preset_or_scheme(self):
        with pytest.raises(C.ConfigError):
            C.load_config(None, preset="fig9")
        with pytest.raises(C.ConfigError):
            C.load_config(None, scheme="interleaved")

    def test_kappa2_override_recomputes_drive(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[dissipation]\nkappa2 = 0.0\n")
        eff = C.load_config(str(path)).effective_params()
        # with no two-photon loss the drive needs no phase compensation
        assert abs(np.angle(eff.epsilon)) < 1e-12
        assert eff.epsilon == pytest.approx(3.0)

    def test_metadata_echo(self):
        meta = C.load_config(None).as_metadata()
        assert meta["preset"] == "fig3"
        assert meta["effective"]["zeta1"]["im"] == pytest.approx(-0.018)


class TestLoadBareConfig:
    def _write(self, tmp_path, extra=""):
        path = tmp_path / "bare.ini"
        path.write_text(
            "[bare]\n"
            "omega_a0 = 7000 MHz\n"
            "omega_b0 = 6500 MHz\n"
            "omega_c0 = 6000 MHz\n"
            "g_a = 100 MHz\n"
            "g_b = 50 MHz\n"
            "g_3 = 20 MHz\n"
            "g_4 = -1.1166 MHz\n" + extra
        )
        return str(path)

    def test_roundtrip(self, tmp_path):
        bare = C.load_bare_config(self._write(tmp_path))
        assert bare.omega_a0 == pytest.approx(2 * np.pi * 7e9)
        assert bare.g_4 < 0
        assert bare.drives == ()

    def test_drives(self, tmp_path):
        path = self._write(
            tmp_path,
            "drive1_omega = 76545 MHz\ndrive1_epsilon = 6.3\n",
        )
        bare = C.load_bare_config(path)
        assert len(bare.drives) == 1
        assert bare.drives[0].epsilon == 6.3

    def test_missing_key(self, tmp_path):
        path = tmp_path / "bare.ini"
        path.write_text("[bare]\nomega_a0 = 7000 MHz\n")
        with pytest.raises(C.ConfigError, match="omega_b0"):
            C.load_bare_config(str(path))

    def test_unknown_key(self, tmp_path):
        path = self._write(tmp_path, "g_5 = 1 MHz\n")
        with pytest.raises(C.ConfigError, match="g_5"):
            C.load_bare_config(path)

    def test_missing_section(self, tmp_path):
        path = tmp_path / "bare.ini"
        path.write_text("[effective]\nalpha2 = 3\n")
        with pytest.raises(C.ConfigError, match="bare"):
            C.load_bare_config(str(path))
