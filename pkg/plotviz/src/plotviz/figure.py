"""ROC figure assembly from score sweep files.

Input is the scores CSV written by a sweep run (header
``s,rho,hypothesis,trial,statistic``) plus its ``auc.json`` summary. The
figure groups cells into one panel per value of the panel variable and one
curve per value of the curve variable. All plotted numbers are derived
from the CSV rows; the summary JSON is used only as a cross-check, and a
disagreement beyond 1e-3 aborts the render rather than drawing a figure
whose legend contradicts its source run.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

SCORES_HEADER = ["s", "rho", "hypothesis", "trial", "statistic"]
AUC_TOLERANCE = 1e-3
CELL_VARS = ("s", "rho")


class PlotError(Exception):
    """Any condition that prevents an honest figure."""


class SchemaError(PlotError):
    """Input file does not have the expected columns."""


class SidecarError(PlotError):
    """Summary JSON is missing, incomplete, or disagrees with the CSV."""


@dataclass(frozen=True)
class FigureSpec:
    scores: tuple
    out: str
    panel: str = "rho"
    curve: str = "s"
    sidecar: str | None = None
    title: str = "{panel}={value}"
    panel_values: tuple | None = None
    curve_values: tuple | None = None

    def __post_init__(self):
        if self.panel not in CELL_VARS or self.curve not in CELL_VARS:
            raise PlotError(f"panel and curve must be drawn from {CELL_VARS}")
        if self.panel == self.curve:
            raise PlotError("panel and curve variables must differ")
        if not self.scores:
            raise PlotError("at least one scores CSV is required")

    def sidecar_path(self) -> Path:
        if self.sidecar is not None:
            return Path(self.sidecar)
        return Path(self.scores[0]).parent / "auc.json"


def load_scores(paths):
    """Read one or more scores CSVs into {(s, rho): {"H0": [...], "H1": [...]}}."""
    cells = {}
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != SCORES_HEADER:
                raise SchemaError(
                    f"{path}: expected columns {SCORES_HEADER}, got {header}")
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(SCORES_HEADER):
                    raise SchemaError(f"{path}:{lineno}: expected "
                                      f"{len(SCORES_HEADER)} fields, got {len(row)}")
                try:
                    s = int(row[0])
                    rho = float(row[1])
                    hyp = row[2]
                    value = float(row[4])
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: {exc}") from None
                if hyp not in ("H0", "H1"):
                    raise SchemaError(
                        f"{path}:{lineno}: hypothesis must be H0 or H1, got {hyp!r}")
                cell = cells.setdefault((s, rho), {"H0": [], "H1": []})
                cell[hyp].append(value)
    if not cells:
        raise SchemaError("no score rows found")
    for key, cell in cells.items():
        if not cell["H0"] or not cell["H1"]:
            raise SchemaError(f"cell {key}: needs scores under both hypotheses")
    return cells


def auc_midrank(h0, h1) -> float:
    """Mann-Whitney AUC with midranks for ties."""
    h0 = np.asarray(h0, dtype=float)
    h1 = np.asarray(h1, dtype=float)
    pooled = np.concatenate([h0, h1])
    _, inverse, counts = np.unique(pooled, return_inverse=True,
                                   return_counts=True)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    midranks = starts + (counts + 1) / 2.0
    ranks = midranks[inverse]
    n0, n1 = len(h0), len(h1)
    return float((ranks[n0:].sum() - n1 * (n1 + 1) / 2.0) / (n0 * n1))


def roc_points(h0, h1):
    """Threshold-sweep ROC starting at (0,0); trapezoid area equals auc_midrank."""
    h0 = np.asarray(h0, dtype=float)
    h1 = np.asarray(h1, dtype=float)
    thresholds = np.unique(np.concatenate([h0, h1]))[::-1]
    fpr = [0.0]
    tpr = [0.0]
    for t in thresholds:
        fpr.append(float(np.mean(h0 >= t)))
        tpr.append(float(np.mean(h1 >= t)))
    return np.array(fpr), np.array(tpr)


def load_sidecar(path: Path):
    """Map {(s, rho): auc} out of a run summary JSON."""
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SidecarError(f"cannot read summary {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SidecarError(f"summary {path} is not valid JSON: {exc}") from None
    cells = payload.get("cells")
    if not isinstance(cells, list):
        raise SidecarError(f"summary {path} has no 'cells' list")
    out = {}
    for entry in cells:
        try:
            out[(int(entry["s"]), float(entry["rho"]))] = float(entry["auc"])
        except (KeyError, TypeError, ValueError):
            raise SidecarError(
                f"summary {path}: cell entries need s, rho, auc: {entry!r}") from None
    return out


def _cell_key(panel_var, panel_value, curve_value):
    # cells are keyed (s, rho) regardless of which variable panels the figure
    if panel_var == "rho":
        return (curve_value, panel_value)
    return (panel_value, curve_value)


def _axis_values(spec: FigureSpec, cells):
    var_index = {"s": 0, "rho": 1}
    panel_values = spec.panel_values
    if panel_values is None:
        panel_values = tuple(sorted({k[var_index[spec.panel]] for k in cells}))
    curve_values = spec.curve_values
    if curve_values is None:
        curve_values = tuple(sorted({k[var_index[spec.curve]] for k in cells}))
    missing = [
        (pv, cv)
        for pv in panel_values for cv in curve_values
        if _cell_key(spec.panel, pv, cv) not in cells
    ]
    if missing:
        raise PlotError(
            "grid is incomplete: no scores for "
            + ", ".join(f"({spec.panel}={pv}, {spec.curve}={cv})"
                        for pv, cv in missing))
    return panel_values, curve_values


def build_figure(spec: FigureSpec):
    """Assemble the figure and return (Figure, {cell: legend auc}).

    Raises SidecarError before any drawing if a recomputed AUC is farther
    than AUC_TOLERANCE from the run summary's value for that cell.
    """
    cells = load_scores(spec.scores)
    panel_values, curve_values = _axis_values(spec, cells)
    sidecar = load_sidecar(spec.sidecar_path())

    aucs = {}
    for pv in panel_values:
        for cv in curve_values:
            key = _cell_key(spec.panel, pv, cv)
            auc = auc_midrank(cells[key]["H0"], cells[key]["H1"])
            if key not in sidecar:
                raise SidecarError(f"summary has no cell {key}")
            if abs(auc - sidecar[key]) > AUC_TOLERANCE:
                raise SidecarError(
                    f"cell {key}: recomputed AUC {auc:.6f} disagrees with "
                    f"summary {sidecar[key]:.6f} beyond {AUC_TOLERANCE}")
            aucs[key] = auc

    ncols = 1 if len(panel_values) == 1 else 2
    nrows = math.ceil(len(panel_values) / ncols)
    fig = Figure(figsize=(4.5 * ncols, 4.0 * nrows))
    axes = fig.subplots(nrows, ncols, squeeze=False)
    flat = [ax for row in axes for ax in row]
    for ax in flat[len(panel_values):]:
        ax.set_visible(False)

    for ax, pv in zip(flat, panel_values):
        ax.plot([0, 1], [0, 1], linestyle="--", color="0.6", linewidth=1,
                label="_nolegend_")
        for cv in curve_values:
            key = _cell_key(spec.panel, pv, cv)
            fpr, tpr = roc_points(cells[key]["H0"], cells[key]["H1"])
            ax.plot(fpr, tpr,
                    label=f"{spec.curve}={cv:g} (AUC={aucs[key]:.3f})")
        ax.set_title(spec.title.format(panel=spec.panel, value=f"{pv:g}"))
        ax.set_xlabel("false positive rate")
        ax.set_ylabel("true positive rate")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1.02)
        ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    return fig, aucs


def render_roc(spec: FigureSpec) -> str:
    """Write the figure to spec.out and return the path."""
    fig, _ = build_figure(spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    # fixed dpi and metadata keep the output a function of the input bytes
    fig.savefig(out, dpi=100, format=out.suffix.lstrip(".") or "png",
                metadata={"Software": "plotviz"})
    return str(out)
