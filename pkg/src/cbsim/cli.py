"""The ``cbs-sim`` command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from . import experiments as X
from . import params as P
from .catbasis import build_cat_basis, default_truncation, transition_element
from .config import ConfigError, SCHEMES, load_bare_config, load_config
from .tomography import TomographyError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="INI config file")
    sub.add_argument("--preset", default="fig3", choices=P.PRESET_NAMES)
    sub.add_argument("--out", metavar="DIR", default=".", help="output directory")
    sub.add_argument("--alpha2", type=float, help="cat size override")
    sub.add_argument("--scheme", choices=SCHEMES)
    sub.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbs-sim",
        description="Simulate the Kerr-cat-mediated controlled beam-splitter gate",
    )
    parser.add_argument("--version", action="version", version=f"cbs-sim {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("derive-params", "derive effective gate rates from bare circuit parameters"),
        ("cat-basis", "dump the diagonalized cat-basis summary as JSON"),
        ("dynamics", "swap dynamics curves (populations, phase, bit flip, leakage)"),
        ("ptm", "single process-tomography run with error budget"),
        ("sweep", "error budget vs cat size"),
        ("bunching", "two-photon bunching vs cat size"),
        ("schemes", "driving-scheme comparison"),
        ("convergence", "ancilla truncation convergence"),
    ]:
        sub = subs.add_parser(name, help=text)
        _add_common(sub)
        if name == "sweep":
            sub.add_argument(
                "--grid", default="2,3,4,5,6,7",
                help="comma-separated alpha^2 grid",
            )
    return parser


def _resolve(args) -> "X.RunConfig":
    flags = {}
    if args.alpha2 is not None:
        flags["alpha2"] = args.alpha2
    if args.scheme is not None:
        flags["scheme"] = args.scheme
    return load_config(args.config, preset=args.preset, **flags)


def _cmd_derive_params(args) -> int:
    if not args.config:
        print("derive-params requires --config with a [bare] section", file=sys.stderr)
        return EXIT_CONFIG
    bare = load_bare_config(args.config)
    dressed = P.dress_parameters(bare)
    eff = P.derive_effective_couplings(bare, dressed)
    record = {k: v for k, v in eff.as_dict().items()}
    kerr = eff.kerr
    # normalize every rate to units of K for the printed record
    for key in ("epsilon", "zeta1", "zeta2"):
        record[key] = {"re": record[key]["re"] / kerr, "im": record[key]["im"] / kerr}
    for key in ("chi_a", "chi_b", "chi", "kappa", "kappa2"):
        record[key] = record[key] / kerr
    record["kerr_rad_per_s"] = kerr
    record["kerr"] = 1.0
    print(json.dumps(record, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_cat_basis(args) -> int:
    cfg = _resolve(args)
    eff = cfg.effective_params()
    alpha_sq = abs(eff.alpha) ** 2
    fock_dim, keep = default_truncation(alpha_sq)
    fock_dim = cfg.fock_dim or fock_dim
    keep = cfg.keep or keep
    basis = build_cat_basis(eff.kerr, eff.epsilon_diag, fock_dim, keep)
    n0 = float(np.real(basis.state_0.conj() @ basis.n_op @ basis.state_0))
    n1 = float(np.real(basis.state_1.conj() @ basis.n_op @ basis.state_1))
    record = {
        "alpha2": alpha_sq,
        "fock_dim": fock_dim,
        "keep": keep,
        "eigenvalues": [float(v) for v in basis.eigvals.real],
        "gap": basis.gap,
        "n_logical_0": n0,
        "n_logical_1": n1,
        "transition_element": float(np.real(transition_element(basis))),
    }
    print(json.dumps(record, indent=2, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "derive-params":
            return _cmd_derive_params(args)
        if args.command == "cat-basis":
            return _cmd_cat_basis(args)

        cfg = _resolve(args)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "dynamics":
            X.run_dynamics(cfg, os.path.join(args.out, "dynamics.csv"))
        elif args.command == "ptm":
            budget = X.run_ptm(cfg, args.out)
            print(json.dumps(budget.as_dict(), indent=2, sort_keys=True))
        elif args.command == "sweep":
            grid = tuple(float(tok) for tok in args.grid.split(","))
            X.run_error_budget(
                cfg, os.path.join(args.out, "error_budget.csv"),
                alpha2_grid=grid, threads=args.threads,
            )
        elif args.command == "bunching":
            X.run_bunching(cfg, os.path.join(args.out, "bunching.csv"))
        elif args.command == "schemes":
            X.run_schemes(cfg, os.path.join(args.out, "schemes.csv"))
        elif args.command == "convergence":
            X.run_convergence(cfg, os.path.join(args.out, "convergence.csv"))
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TomographyError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
