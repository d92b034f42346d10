"""Configuration files and layered parameter resolution.

Config files are INI format with four optional sections::

    [effective]      # rates in units of K: zeta1, zeta2, chi, alpha2, ...
    [dissipation]    # kappa, kappa2, N_t
    [schedule]       # scheme, cpbs_form, theta
    [truncation]     # dim_a, dim_b, fock_dim, keep

Resolution order is preset < file < CLI flags; the fully resolved record is
echoed into every output file's metadata header.  Unknown keys are a hard
error (typos must not silently fall back to preset values).
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

import numpy as np

from . import params as P


class ConfigError(ValueError):
    """Malformed or inconsistent configuration input."""


_EFFECTIVE_KEYS = {
    "alpha2", "zeta1", "zeta2", "chi", "n_offset", "linear_term_amp", "paper_phase",
}
_DISSIPATION_KEYS = {"kappa", "kappa2", "n_t"}
_SCHEDULE_KEYS = {"scheme", "cpbs_form", "theta", "t1", "t2"}
_TRUNCATION_KEYS = {"dim_a", "dim_b", "fock_dim", "keep"}
_SECTIONS = {
    "effective": _EFFECTIVE_KEYS,
    "dissipation": _DISSIPATION_KEYS,
    "schedule": _SCHEDULE_KEYS,
    "truncation": _TRUNCATION_KEYS,
}

SCHEMES = ("sequential", "simultaneous", "simultaneous_cancelled")


def parse_complex(text: str) -> complex:
    """Parse a complex literal, accepting forms like '0.018j' and '1+2j'."""
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"malformed complex number {text!r}") from exc


def parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"malformed number {text!r}") from exc


def parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"malformed integer {text!r}") from exc


def parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"malformed boolean {text!r}")


_UNIT_SUFFIXES = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}


def parse_rate(text: str) -> float:
    """Rate given either as a plain number or in Hz with a unit suffix.

    Suffixed values ('6.7 MHz') are converted to angular frequency; plain
    numbers pass through unchanged (caller-defined units, typically K = 1).
    """
    parts = text.strip().split()
    if len(parts) == 2 and parts[1].lower() in _UNIT_SUFFIXES:
        return 2.0 * np.pi * parse_float(parts[0]) * _UNIT_SUFFIXES[parts[1].lower()]
    if len(parts) == 1:
        return parse_float(parts[0])
    raise ConfigError(f"malformed rate {text!r} (expected number or 'X MHz')")


_BARE_SCALARS = ("omega_a0", "omega_b0", "omega_c0", "g_a", "g_b", "g_3", "g_4")


def load_bare_config(path: str) -> P.BareParams:
    """Bare circuit parameters from the [bare] section of an INI file.

    Drive tones are numbered pairs ``drive1_omega`` / ``drive1_epsilon``, ...
    """
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    if not cp.has_section("bare"):
        raise ConfigError(f"{path} has no [bare] section")
    items = dict(cp.items("bare"))
    fields = {}
    for key in _BARE_SCALARS:
        if key not in items:
            raise ConfigError(f"[bare] section missing required key {key!r}")
        fields[key] = parse_rate(items.pop(key))
    drives = []
    k = 1
    while f"drive{k}_omega" in items:
        omega = parse_rate(items.pop(f"drive{k}_omega"))
        eps_key = f"drive{k}_epsilon"
        if eps_key not in items:
            raise ConfigError(f"[bare] drive{k}_omega given without {eps_key}")
        drives.append(P.Drive(omega, parse_complex(items.pop(eps_key))))
        k += 1
    if items:
        raise ConfigError(f"unknown keys in [bare] section: {sorted(items)}")
    try:
        return P.BareParams(**fields, drives=tuple(drives))
    except P.ParameterError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration for one experiment invocation."""

    preset: str = "fig3"
    alpha2: float = None
    overrides: dict = field(default_factory=dict)  # section -> {key: parsed value}
    scheme: str = "sequential"
    cpbs_form: str = "asymmetric"
    theta: float = np.pi / 2
    t1: float = None  # explicit segment durations override gate timing
    t2: float = None
    dim_a: int = 3
    dim_b: int = 3
    fock_dim: int = None
    keep: int = None

    def effective_params(self) -> P.EffectiveParams:
        """Layer the file/flag overrides on top of the preset."""
        eff = P.preset(self.preset, alpha_sq=self.alpha2)
        ov = dict(self.overrides.get("effective", {}))
        diss = self.overrides.get("dissipation", {})
        fields = {}
        if "zeta1" in ov:
            fields["zeta1"] = ov["zeta1"]
        if "zeta2" in ov:
            fields["zeta2"] = ov["zeta2"]
        if "chi" in ov:
            fields.update(chi=ov["chi"], chi_a=ov["chi"], chi_b=ov["chi"])
        if "n_offset" in ov:
            fields["N"] = ov["n_offset"]
        if "linear_term_amp" in ov:
            fields["linear_term_amp"] = ov["linear_term_amp"]
        if "kappa" in diss:
            fields["kappa"] = diss["kappa"]
        if "kappa2" in diss:
            fields["kappa2"] = diss["kappa2"]
        if "n_t" in diss:
            fields["N_t"] = diss["n_t"]
        if fields:
            eff = replace(eff, **fields)
        if "kappa2" in diss or ov.get("paper_phase"):
            # two-photon compensation depends on kappa2: recompute the drive
            eff = P.adjust_two_photon_drive(
                eff, abs(eff.alpha), paper_phase=bool(ov.get("paper_phase", False))
            )
        return eff

    def as_metadata(self) -> dict:
        eff = self.effective_params()
        return {
            "preset": self.preset,
            "alpha2": abs(eff.alpha) ** 2,
            "scheme": self.scheme,
            "cpbs_form": self.cpbs_form,
            "theta": self.theta,
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "effective": eff.as_dict(),
        }


_PARSERS = {
    ("effective", "alpha2"): parse_float,
    ("effective", "zeta1"): parse_complex,
    ("effective", "zeta2"): parse_complex,
    ("effective", "chi"): parse_float,
    ("effective", "n_offset"): parse_float,
    ("effective", "linear_term_amp"): parse_complex,
    ("effective", "paper_phase"): parse_bool,
    ("dissipation", "kappa"): parse_float,
    ("dissipation", "kappa2"): parse_float,
    ("dissipation", "n_t"): parse_float,
    ("schedule", "scheme"): str,
    ("schedule", "cpbs_form"): str,
    ("schedule", "theta"): parse_float,
    ("schedule", "t1"): parse_float,
    ("schedule", "t2"): parse_float,
    ("truncation", "dim_a"): parse_int,
    ("truncation", "dim_b"): parse_int,
    ("truncation", "fock_dim"): parse_int,
    ("truncation", "keep"): parse_int,
}


def _find_line(path: str, key: str) -> int:
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.split("=")[0].strip().lower() == key:
                    return lineno
    except OSError:
        pass
    return 0


def load_config(path: str = None, preset: str = "fig3", **flag_overrides) -> RunConfig:
    """Parse an INI file and apply CLI flag overrides on top.

    ``flag_overrides`` accepts the CLI's flat flags (alpha2, scheme, ...).
    Raises :class:`ConfigError` for unknown sections/keys or malformed values,
    naming the offending line.
    """
    parsed: dict = {}
    if path is not None:
        cp = configparser.ConfigParser()
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"config parse error in {path}: {exc}") from exc
        if "preset" in cp.defaults():
            preset = cp.defaults()["preset"]
        for section in cp.sections():
            if section not in _SECTIONS:
                raise ConfigError(
                    f"unknown config section [{section}] in {path}; "
                    f"expected one of {sorted(_SECTIONS)}"
                )
            for key, raw in cp.items(section):
                if key == "preset":
                    continue
                if key not in _SECTIONS[section]:
                    raise ConfigError(
                        f"unknown key {key!r} in section [{section}] of {path} "
                        f"(line {_find_line(path, key)})"
                    )
                try:
                    parsed.setdefault(section, {})[key] = _PARSERS[(section, key)](raw)
                except ConfigError as exc:
                    raise ConfigError(
                        f"{exc} (key {key!r}, line {_find_line(path, key)} of {path})"
                    ) from None

    sched = parsed.get("schedule", {})
    trunc = parsed.get("truncation", {})
    cfg = RunConfig(
        preset=preset,
        alpha2=parsed.get("effective", {}).get("alpha2"),
        overrides={k: v for k, v in parsed.items() if k in ("effective", "dissipation")},
        scheme=sched.get("scheme", "sequential"),
        cpbs_form=sched.get("cpbs_form", "asymmetric"),
        theta=sched.get("theta", np.pi / 2),
        t1=sched.get("t1"),
        t2=sched.get("t2"),
        dim_a=trunc.get("dim_a", 3),
        dim_b=trunc.get("dim_b", 3),
        fock_dim=trunc.get("fock_dim"),
        keep=trunc.get("keep"),
    )

    updates = {}
    for key in ("alpha2", "scheme", "cpbs_form", "theta", "dim_a", "dim_b",
                "fock_dim", "keep", "t1", "t2"):
        val = flag_overrides.pop(key, None)
        if val is not None:
            updates[key] = val
    if flag_overrides:
        raise ConfigError(f"unknown flags: {sorted(flag_overrides)}")
    if updates:
        cfg = replace(cfg, **updates)
    if cfg.preset not in P.PRESET_NAMES:
        raise ConfigError(f"unknown preset {cfg.preset!r}; choose from {P.PRESET_NAMES}")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {cfg.scheme!r}; choose from {SCHEMES}")
    if cfg.cpbs_form not in ("asymmetric", "symmetric"):
        raise ConfigError(f"unknown cPBS form {cfg.cpbs_form!r}")
    if cfg.alpha2 is not None and cfg.alpha2 <= 0:
        raise ConfigError(f"alpha2 must be positive, got {cfg.alpha2}")
    return cfg
