"""Render figures from markovlab CSV artifacts.

Three plot kinds are supported:

- ``diagram-overlay``: one or more ``x,omega,varpi,limit`` CSVs; plots
  the submatrix-route diagram (omega), the critical-point-route diagram
  (varpi, when present) and the limit shape on a shared axis.
- ``shape-convergence``: the same CSVs; plots the pointwise deviation of
  each diagram column from the limit column.
- ``clt-variance``: a CLT summary CSV; bar chart of measured variances
  with confidence intervals against their targets.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("diagram-overlay", "shape-convergence", "clt-variance")

_REQUIRED_COLUMNS = {
    "diagram-overlay": ["x", "omega", "limit"],
    "shape-convergence": ["x", "omega", "limit"],
    "clt-variance": ["ensemble", "k", "var", "var_lo", "var_hi", "target"],
}


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple
    kind: str
    output: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}")
        inputs = tuple(str(p) for p in self.inputs)
        if not inputs:
            raise ValueError("need at least one input CSV")
        object.__setattr__(self, "inputs", inputs)


def read_table(path) -> dict:
    """Column-name -> list of strings; '#' lines are metadata comments."""
    rows = []
    header = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = next(csv.reader([line]))
            if header is None:
                header = fields
            else:
                rows.append(fields)
    if header is None or not rows:
        raise ValueError(f"{path}: empty CSV, nothing to plot")
    return {name: [r[i] for r in rows] for i, name in enumerate(header)}


def require_columns(path, table: dict, names: list) -> None:
    missing = [name for name in names if name not in table]
    if missing:
        raise ValueError(f"{path}: missing column(s): {', '.join(missing)}")


def _floats(values) -> np.ndarray:
    return np.array([float(v) for v in values])


def _optional_column(table: dict, name: str):
    """A float array for a column whose cells may all be blank, else None."""
    values = table.get(name)
    if values is None or all(v == "" for v in values):
        return None
    return _floats(values)


def _render_diagram_overlay(spec: PlotSpec, ax) -> None:
    limit_drawn = False
    for i, path in enumerate(spec.inputs):
        table = read_table(path)
        require_columns(path, table, _REQUIRED_COLUMNS[spec.kind])
        x = _floats(table["x"])
        label = Path(path).stem if len(spec.inputs) > 1 else None
        suffix = f" [{label}]" if label else ""
        ax.plot(
            x,
            _floats(table["omega"]),
            color="tab:blue",
            alpha=0.9 if i == 0 else 0.5,
            label="omega (submatrix route, fluctuates on scale 1/sqrt(n))"
            + suffix,
        )
        varpi = _optional_column(table, "varpi")
        if varpi is not None:
            ax.plot(
                x,
                varpi,
                color="tab:green",
                alpha=0.9 if i == 0 else 0.5,
                label="varpi (critical-point route, fluctuates on scale 1/n)"
                + suffix,
            )
        if not limit_drawn:
            ax.plot(
                x,
                _floats(table["limit"]),
                color="black",
                linestyle="--",
                label="limit shape",
            )
            limit_drawn = True
    ax.set_xlabel("x")
    ax.set_ylabel("diagram")
    ax.legend(fontsize=8)


def _render_shape_convergence(spec: PlotSpec, ax) -> None:
    for path in spec.inputs:
        table = read_table(path)
        require_columns(path, table, _REQUIRED_COLUMNS[spec.kind])
        x = _floats(table["x"])
        limit = _floats(table["limit"])
        stem = Path(path).stem
        ax.plot(
            x,
            np.abs(_floats(table["omega"]) - limit),
            color="tab:blue",
            alpha=0.7,
            label=f"|omega - limit| [{stem}]",
        )
        varpi = _optional_column(table, "varpi")
        if varpi is not None:
            ax.plot(
                x,
                np.abs(varpi - limit),
                color="tab:green",
                alpha=0.7,
                label=f"|varpi - limit| [{stem}]",
            )
    ax.set_xlabel("x")
    ax.set_ylabel("deviation from limit shape")
    ax.legend(fontsize=7)


def _render_clt_variance(spec: PlotSpec, ax) -> None:
    offset = 0
    ticks, tick_labels = [], []
    for path in spec.inputs:
        table = read_table(path)
        require_columns(path, table, _REQUIRED_COLUMNS[spec.kind])
        k = [int(v) for v in table["k"]]
        var = _floats(table["var"])
        lo = _floats(table["var_lo"])
        hi = _floats(table["var_hi"])
        target = _floats(table["target"])
        pos = offset + np.arange(len(k))
        ax.bar(
            pos,
            var,
            width=0.6,
            color="tab:blue",
            yerr=[np.maximum(var - lo, 0), np.maximum(hi - var, 0)],
            capsize=3,
            label=f"measured [{table['ensemble'][0]}]",
        )
        ax.scatter(pos, target, color="black", marker="_", s=300, label="target")
        ticks.extend(pos)
        tick_labels.extend(f"k={v}" for v in k)
        offset += len(k) + 1
    ax.set_xticks(ticks)
    ax.set_xticklabels(tick_labels)
    ax.set_ylabel("variance")
    handles, labels = ax.get_legend_handles_labels()
    unique = dict(zip(labels, handles))
    ax.legend(unique.values(), unique.keys(), fontsize=8)


_RENDERERS = {
    "diagram-overlay": _render_diagram_overlay,
    "shape-convergence": _render_shape_convergence,
    "clt-variance": _render_clt_variance,
}


def render(spec: PlotSpec) -> str:
    """Render the figure and return the output path."""
    fig, ax = plt.subplots(figsize=(8, 5), dpi=120)
    try:
        _RENDERERS[spec.kind](spec, ax)
        fig.tight_layout()
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output
