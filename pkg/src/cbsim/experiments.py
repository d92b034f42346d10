"""Named, reproducible experiment drivers.

Each ``run_*`` function performs one of the reference studies (swap dynamics,
fidelity/error sweep, photon bunching, driving-scheme comparison, truncation
convergence) and writes a deterministic CSV: '#'-prefixed JSON metadata
header, then a header row, then data formatted with 12 significant digits.
All times are in units of 1/K.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from . import gate as G
from . import params as P
from . import tomography as T
from .config import RunConfig
from .lindblad import evolve

FLOAT_FMT = "%.12g"
DEFAULT_ALPHA2_GRID = (2.0, 3.0, 4.0, 5.0, 6.0, 7.0)


def _fmt(value) -> str:
    return FLOAT_FMT % value


def write_csv(path, columns: dict, metadata: dict) -> None:
    """Write named columns with a commented JSON metadata header."""
    names = list(columns)
    rows = len(next(iter(columns.values())))
    meta = dict(metadata)
    meta["version"] = __version__
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        fh.write(",".join(names) + "\n")
        for r in range(rows):
            fh.write(",".join(_fmt(columns[name][r]) for name in names) + "\n")


def read_csv(path) -> tuple:
    """(metadata dict, {column: array}) inverse of :func:`write_csv`."""
    meta = {}
    with open(path, encoding="utf-8") as fh:
        line = fh.readline()
        while line.startswith("#"):
            meta.update(json.loads(line[1:].strip()))
            line = fh.readline()
        names = line.strip().split(",")
        data = [[] for _ in names]
        for line in fh:
            if not line.strip():
                continue
            for col, tok in zip(data, line.strip().split(",")):
                col.append(float(tok))
    return meta, {name: np.asarray(col) for name, col in zip(names, data)}


def build_schedule(cfg: RunConfig, eff: P.EffectiveParams) -> G.DriveSchedule:
    """Schedule from the resolved config (explicit durations win over timing)."""
    symmetric = cfg.cpbs_form == "symmetric"
    if cfg.scheme == "sequential":
        if cfg.t1 is not None and cfg.t2 is not None:
            t1, t2 = cfg.t1, cfg.t2
        else:
            t1, t2 = P.gate_timing(eff, theta=cfg.theta, symmetric=symmetric)
        return G.sequential_schedule(t1, t2, cpbs_form=cfg.cpbs_form)
    duration = cfg.t1
    if duration is None:
        t1, _ = P.gate_timing(eff, theta=cfg.theta, symmetric=symmetric)
        duration = t1
    return G.simultaneous_schedule(
        duration,
        cancelled=cfg.scheme == "simultaneous_cancelled",
        cpbs_form=cfg.cpbs_form,
    )


def make_context_from_config(cfg: RunConfig, eff: P.EffectiveParams = None) -> G.GateContext:
    eff = cfg.effective_params() if eff is None else eff
    return G.make_context(
        eff, dim_a=cfg.dim_a, dim_b=cfg.dim_b, fock_dim=cfg.fock_dim, keep=cfg.keep
    )


# -- swap dynamics (sequential gate, Fig.-3-style curves) -------------------


def run_dynamics(cfg: RunConfig, out_path, n_times: int = 401) -> dict:
    """Populations, phase rotation, bit-flip and leakage vs time.

    Curves are produced for ancilla starts |0>, |1> (populations, bit flip,
    leakage; cavities in |01>) and |+> (phase rotation), each with the
    configured thermal occupation and with N_t = 0 for comparison.
    """
    eff = cfg.effective_params()
    columns: dict = {}
    meta = cfg.as_metadata()
    for tag, n_t in (("", eff.N_t), ("_cold", 0.0)):
        eff_v = replace(eff, N_t=n_t)
        ctx = make_context_from_config(cfg, eff_v)
        sched = build_schedule(cfg, eff_v)
        obs = G.recorded_observables(ctx)
        t_eval = np.linspace(0.0, sched.total_duration, n_times)
        starts = {"0": "01", "1": "01", "+": "01"}
        stack = np.stack(
            [ctx.initial_state(anc, cav) for anc, cav in starts.items()]
        )
        res = evolve(ctx, sched, stack, observables=obs, t_eval=t_eval)
        if "t" not in columns:
            columns["t"] = res.times
            if sched.scheme == "sequential":
                meta["t1"] = sched.segments[0].duration
            meta["t_total"] = sched.total_duration
        for idx, anc in enumerate(starts):
            key = {"0": "anc0", "1": "anc1", "+": "ancp"}[anc]
            if anc in ("0", "1"):
                columns[f"n_a_{key}{tag}"] = res.expect("n_a")[idx].real
                columns[f"n_b_{key}{tag}"] = res.expect("n_b")[idx].real
                flipped = "pi_1" if anc == "0" else "pi_0"
                columns[f"bitflip_{key}{tag}"] = res.expect(flipped)[idx].real
                columns[f"leakage_{key}{tag}"] = (
                    1.0 - res.expect("p_logical")[idx].real
                )
            else:
                x = res.expect("x_L")[idx].real
                y = res.expect("y_L")[idx].real
                columns[f"x_L_{key}{tag}"] = x
                columns[f"phase_{key}{tag}"] = np.unwrap(np.arctan2(y, x))
    if out_path is not None:
        write_csv(out_path, columns, meta)
    return columns


# -- fidelity and error-classification sweep (Fig.-4-style) -----------------


def _budget_at_alpha(cfg: RunConfig, alpha_sq: float, chi_override: float = None):
    eff = replace(cfg, alpha2=alpha_sq).effective_params()
    if chi_override is not None:
        eff = replace(eff, chi=chi_override, chi_a=chi_override, chi_b=chi_override)
    sub = replace(cfg, alpha2=alpha_sq)
    ctx = make_context_from_config(sub, eff)
    sched = build_schedule(sub, eff)
    R = T.compute_ptm(ctx, sched)
    R_id = T.ptm_of_unitary(ctx, G.ideal_schedule_unitary(ctx, sched))
    return T.error_budget(ctx, sched, R, R_id)


def run_error_budget(
    cfg: RunConfig,
    out_path,
    alpha2_grid=DEFAULT_ALPHA2_GRID,
    threads: int = 1,
) -> dict:
    """Error budget vs cat size: one 64-Pauli tomography run per grid point."""
    grid = tuple(float(a) for a in alpha2_grid)
    if len(grid) == 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("alpha2 grid must be nonempty and strictly increasing")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            budgets = list(pool.map(lambda a2: _budget_at_alpha(cfg, a2), grid))
    else:
        budgets = [_budget_at_alpha(cfg, a2) for a2 in grid]
    columns = {
        "alpha2": np.asarray(grid),
        "fidelity": np.array([b.fidelity for b in budgets]),
        "fidelity_modified": np.array([b.fidelity_modified for b in budgets]),
        "p_Z": np.array([b.p_Z for b in budgets]),
        "p_nonZ": np.array([b.p_nonZ for b in budgets]),
        "p_leak": np.array([b.p_leak for b in budgets]),
        "p_ancilla_phaseflip": np.array([b.p_ancilla_phaseflip for b in budgets]),
    }
    if out_path is not None:
        write_csv(out_path, columns, cfg.as_metadata())
    return columns


# -- photon bunching vs cat size (Fig.-5-style) -----------------------------


def run_bunching(cfg: RunConfig, out_path, alpha2_grid=DEFAULT_ALPHA2_GRID) -> dict:
    """P(2,0) + P(0,2) at gate end for |11> input, ancilla |1>.

    Four variants: {asymmetric, symmetric} cPBS x {truncated (keep = 2),
    full} ancilla basis.  The truncated basis removes the leakage states, so
    bunching there comes only from thermal bit flips; the full basis adds the
    leakage-mediated channel.
    """
    grid = tuple(float(a) for a in alpha2_grid)
    columns: dict = {"alpha2": np.asarray(grid)}
    variants = [
        ("asym_trunc", "asymmetric", 2),
        ("asym_full", "asymmetric", None),
        ("sym_trunc", "symmetric", 2),
        ("sym_full", "symmetric", None),
    ]
    for name, form, keep in variants:
        vals, p20s, p02s = [], [], []
        for a2 in grid:
            sub = replace(cfg, alpha2=a2, cpbs_form=form, keep=keep)
            eff = sub.effective_params()
            if form == "symmetric":
                # symmetric coupling needs a real drive phase to address the
                # logical quadrature; rate halved to keep the gate time equal
                z1 = abs(eff.zeta1) / 2.0
                eff = replace(eff, zeta1=z1, zeta2=2.0 * z1 * abs(eff.alpha))
            ctx = make_context_from_config(sub, eff)
            sched = build_schedule(sub, eff)
            obs = G.recorded_observables(ctx)
            rho0 = ctx.initial_state("1", "11")
            res = evolve(
                ctx, sched, rho0,
                observables={"p_20": obs["p_20"], "p_02": obs["p_02"]},
                t_eval=np.array([0.0, sched.total_duration]),
            )
            p20 = res.expect("p_20")[-1].real
            p02 = res.expect("p_02")[-1].real
            vals.append(p20 + p02)
            p20s.append(p20)
            p02s.append(p02)
        columns[f"bunching_{name}"] = np.asarray(vals)
        columns[f"p20_{name}"] = np.asarray(p20s)
        columns[f"p02_{name}"] = np.asarray(p02s)
    if out_path is not None:
        write_csv(out_path, columns, cfg.as_metadata())
    return columns


# -- driving-scheme comparison (Fig.-6-style) -------------------------------


def run_schemes(cfg: RunConfig, out_path, n_times: int = 201) -> dict:
    """Sequential vs simultaneous vs linear-drive-cancelled simultaneous.

    The sequential reference uses the nominal coupling; the simultaneous
    schemes run both pumps at half rate over a single span equal to the
    sequential total, so all three realize the same gate in the same time.
    """
    eff_seq = replace(cfg, preset="fig3").effective_params()
    t1, t2 = P.gate_timing(eff_seq, theta=cfg.theta)
    eff_sim = replace(cfg, preset="fig6-simultaneous").effective_params()
    span = t1 + t2

    runs = {
        "sequential": (eff_seq, G.sequential_schedule(t1, t2)),
        "simultaneous": (eff_sim, G.simultaneous_schedule(span)),
        "cancelled": (eff_sim, G.simultaneous_schedule(span, cancelled=True)),
    }
    columns: dict = {}
    meta = cfg.as_metadata()
    meta["t_total"] = span
    for name, (eff, sched) in runs.items():
        ctx = make_context_from_config(cfg, eff)
        obs = G.recorded_observables(ctx)
        t_eval = np.linspace(0.0, span, n_times)
        stack = np.stack(
            [
                ctx.initial_state("+", "01"),
                ctx.initial_state("0", "01"),
                ctx.initial_state("1", "01"),
            ]
        )
        res = evolve(ctx, sched, stack, observables=obs, t_eval=t_eval)
        if "t" not in columns:
            columns["t"] = res.times
        columns[f"x_L_{name}"] = res.expect("x_L")[0].real
        columns[f"bitflip_anc0_{name}"] = res.expect("pi_1")[1].real
        columns[f"bitflip_anc1_{name}"] = res.expect("pi_0")[2].real
        columns[f"leakage_anc0_{name}"] = 1.0 - res.expect("p_logical")[1].real
        columns[f"leakage_anc1_{name}"] = 1.0 - res.expect("p_logical")[2].real
    if out_path is not None:
        write_csv(out_path, columns, meta)
    return columns


# -- ancilla truncation convergence (Fig.-7-style) --------------------------


def run_convergence(cfg: RunConfig, out_path, fock_dims=(14, 16, 18),
                    diag_keep: int = 8, n_times: int = 201) -> dict:
    """Leakage vs time for bare-Fock truncations against the small kept basis.

    A bare Fock truncation of dimension n equals the diagonal basis with
    keep = n, so the Fock curves are keep = fock_dim runs.
    """
    columns: dict = {}
    meta = cfg.as_metadata()
    variants = [(f"fock{d}", d, d) for d in fock_dims]
    variants.append((f"diag{diag_keep}", max(fock_dims), diag_keep))
    for name, fock_dim, keep in variants:
        sub = replace(cfg, fock_dim=fock_dim, keep=keep)
        eff = sub.effective_params()
        ctx = make_context_from_config(sub, eff)
        sched = build_schedule(sub, eff)
        t_eval = np.linspace(0.0, sched.total_duration, n_times)
        rho0 = ctx.initial_state("1", "01")
        res = evolve(
            ctx, sched, rho0,
            observables={"p_logical": G.recorded_observables(ctx)["p_logical"]},
            t_eval=t_eval,
        )
        if "t" not in columns:
            columns["t"] = res.times
            meta["t1"] = sched.segments[0].duration
        columns[f"leakage_{name}"] = 1.0 - res.expect("p_logical").real
    if out_path is not None:
        write_csv(out_path, columns, meta)
    return columns


# -- single tomography run --------------------------------------------------


def run_ptm(cfg: RunConfig, out_dir) -> T.ErrorBudget:
    """One full tomography at the configured cat size; writes R, budget, chi."""
    import os

    eff = cfg.effective_params()
    ctx = make_context_from_config(cfg, eff)
    sched = build_schedule(cfg, eff)
    R = T.compute_ptm(ctx, sched)
    R_id = T.ptm_of_unitary(ctx, G.ideal_schedule_unitary(ctx, sched))
    budget = T.error_budget(ctx, sched, R, R_id)
    labels = T.pauli_labels()
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "ptm.csv"), "w", encoding="utf-8") as fh:
            meta = cfg.as_metadata()
            meta["version"] = __version__
            fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            fh.write("label," + ",".join(labels) + "\n")
            for i, lab in enumerate(labels):
                fh.write(lab + "," + ",".join(_fmt(v) for v in R.R[i]) + "\n")
        with open(os.path.join(out_dir, "budget.json"), "w", encoding="utf-8") as fh:
            json.dump(budget.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        r_noise, _ = T.noise_decomposition(R, R_id)
        chi = T.ptm_to_chi(r_noise)
        write_csv(
            os.path.join(out_dir, "chi_diag.csv"),
            {"index": np.arange(64), "chi_diag": np.real(np.diag(chi))},
            cfg.as_metadata(),
        )
    return budget
