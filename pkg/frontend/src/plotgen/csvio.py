"""Reader for the cbs-sim CSV contract.

Files carry one or more '#'-prefixed JSON metadata lines, then a header row,
then comma-separated float columns.
"""
from __future__ import annotations

import json

import numpy as np


class PlotgenError(ValueError):
    """Bad input data or recipe."""


def read_csv(path) -> tuple:
    """Return (metadata dict, {column name: float array}).

    Raises :class:`PlotgenError` for missing files, files without data rows,
    or malformed numeric fields.
    """
    meta: dict = {}
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise PlotgenError(f"input file not found: {path}") from None
    with fh:
        line = fh.readline()
        while line.startswith("#"):
            try:
                meta.update(json.loads(line[1:].strip()))
            except json.JSONDecodeError as exc:
                raise PlotgenError(f"bad metadata header in {path}: {exc}") from None
            line = fh.readline()
        names = [tok.strip() for tok in line.strip().split(",") if tok.strip()]
        if not names:
            raise PlotgenError(f"{path} is empty (no header row)")
        data: list = [[] for _ in names]
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            toks = line.strip().split(",")
            if len(toks) != len(names):
                raise PlotgenError(
                    f"{path}: row {lineno} has {len(toks)} fields, expected {len(names)}"
                )
            for col, tok in zip(data, toks):
                try:
                    col.append(float(tok))
                except ValueError:
                    raise PlotgenError(
                        f"{path}: non-numeric value {tok!r} in row {lineno}"
                    ) from None
    if not data[0]:
        raise PlotgenError(f"{path} contains no data rows")
    return meta, {name: np.asarray(col) for name, col in zip(names, data)}
