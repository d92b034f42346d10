"""Declarative figure recipes and the deterministic renderer."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")  # pinned backend: output must not depend on the host GUI

import matplotlib.pyplot as plt

from .csvio import PlotgenError, read_csv

_PKG_DIR = os.path.dirname(__file__)
RECIPE_DIR = os.path.join(_PKG_DIR, "recipes")
STYLE_FILE = os.path.join(_PKG_DIR, "default.mplstyle")


@dataclass(frozen=True)
class FigureRecipe:
    """One committed figure description.

    ``panels`` is a list of dicts with keys title, ylabel, yscale and curves;
    each curve names a CSV column plus optional label/marker/linestyle.
    """

    figure_id: str
    title: str
    input: str
    layout: tuple
    x: str
    xlabel: str
    panels: tuple
    vlines_meta: tuple = field(default_factory=tuple)

    def __post_init__(self):
        rows, cols = self.layout
        if len(self.panels) != rows * cols:
            raise PlotgenError(
                f"recipe {self.figure_id!r}: {len(self.panels)} panels do not "
                f"fill the {rows}x{cols} layout"
            )
        for panel in self.panels:
            if panel.get("yscale", "linear") not in ("linear", "log"):
                raise PlotgenError(
                    f"recipe {self.figure_id!r}: bad yscale {panel.get('yscale')!r}"
                )
            if not panel.get("curves"):
                raise PlotgenError(f"recipe {self.figure_id!r}: panel without curves")

    @property
    def columns(self) -> list:
        """All CSV columns the recipe references (x first)."""
        cols = [self.x]
        for panel in self.panels:
            cols.extend(curve["column"] for curve in panel["curves"])
        return cols


def available_figures() -> list:
    return sorted(
        os.path.splitext(name)[0]
        for name in os.listdir(RECIPE_DIR)
        if name.endswith(".json")
    )


def load_recipe(figure_id: str) -> FigureRecipe:
    path = os.path.join(RECIPE_DIR, f"{figure_id}.json")
    if not os.path.exists(path):
        raise PlotgenError(
            f"unknown figure {figure_id!r}; available: {available_figures()}"
        )
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return FigureRecipe(
        figure_id=raw["figure_id"],
        title=raw["title"],
        input=raw["input"],
        layout=tuple(raw["layout"]),
        x=raw["x"],
        xlabel=raw["xlabel"],
        panels=tuple(raw["panels"]),
        vlines_meta=tuple(raw.get("vlines_meta", ())),
    )


def render(recipe: FigureRecipe, in_dir, out_dir) -> str:
    """Render one figure from ``in_dir`` CSVs into ``out_dir``; returns the path.

    Pure function of (CSV bytes, recipe, style file): repeated runs produce
    byte-identical PNG output.
    """
    csv_path = os.path.join(in_dir, recipe.input)
    meta, data = read_csv(csv_path)
    for column in recipe.columns:
        if column not in data:
            raise PlotgenError(
                f"column {column!r} required by recipe {recipe.figure_id!r} "
                f"is missing from {csv_path}"
            )
    x = data[recipe.x]
    rows, cols = recipe.layout
    with plt.style.context(STYLE_FILE):
        fig, axes = plt.subplots(
            rows, cols, figsize=(3.4 * cols, 2.6 * rows), squeeze=False
        )
        for panel, ax in zip(recipe.panels, axes.ravel()):
            for curve in panel["curves"]:
                ax.plot(
                    x,
                    data[curve["column"]],
                    label=curve.get("label", curve["column"]),
                    marker=curve.get("marker", ""),
                    linestyle=curve.get("linestyle", "-"),
                    markersize=3.5,
                )
            for key in recipe.vlines_meta:
                if key in meta:
                    ax.axvline(meta[key], color="0.3", linestyle=":", linewidth=0.9)
            ax.set_title(panel["title"])
            ax.set_xlabel(recipe.xlabel)
            ax.set_ylabel(panel["ylabel"])
            ax.set_yscale(panel.get("yscale", "linear"))
            ax.legend(loc="best")
        fig.suptitle(recipe.title)
        fig.tight_layout(rect=(0, 0, 1, 0.95))
        os.makedirs(out_dir, exist_ok=True)
        out_path = os.path.join(out_dir, f"{recipe.figure_id}.png")
        # pinned metadata so the PNG bytes do not depend on the environment
        fig.savefig(out_path, metadata={"Software": "plotgen"})
        plt.close(fig)
    return out_path
