"""Figure assembly tests.

Sweeps are generated here with plain numpy so the expectations are
independent of any producer package; the summary JSON is built with the
brute-force pairwise AUC below rather than the library's own ranker.
"""

import csv
import json
import re

import numpy as np
import pytest

from plotviz import (FigureSpec, PlotError, SchemaError, SidecarError,
                     auc_midrank, build_figure, render_roc, roc_points)

HEADER = ["s", "rho", "hypothesis", "trial", "statistic"]


def pair_auc(h0, h1):
    """Reference AUC: count ordered pairs, ties at half weight."""
    total = 0.0
    for a in h0:
        for b in h1:
            if b > a:
                total += 1.0
            elif b == a:
                total += 0.5
    return total / (len(h0) * len(h1))


def write_sweep(dirpath, cells, trials=30, seed=0):
    """Write scores.csv and auc.json for {(s, rho): h1_shift} cells."""
    rng = np.random.default_rng(seed)
    rows = []
    summary = []
    for (s, rho), shift in sorted(cells.items()):
        h0 = rng.normal(0.0, 1.0, trials)
        h1 = rng.normal(shift, 1.0, trials)
        for trial, v in enumerate(h0):
            rows.append([s, rho, "H0", trial, v])
        for trial, v in enumerate(h1):
            rows.append([s, rho, "H1", trial, v])
        summary.append({"s": s, "rho": rho, "auc": pair_auc(h0, h1),
                        "trials_per_hypothesis": trials})
    scores = dirpath / "scores.csv"
    with open(scores, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        writer.writerows(rows)
    (dirpath / "auc.json").write_text(
        json.dumps({"config_hash": "test", "cells": summary}, indent=2))
    return scores


def grid_cells():
    cells = {}
    for s in (80, 85, 90, 95, 100):
        for rho in (0.85, 0.9, 0.95, 0.99):
            cells[(s, rho)] = 0.02 * (s - 75) * rho
    return cells


def visible_axes(fig):
    return [ax for ax in fig.axes if ax.get_visible()]


def test_perfect_separation_hits_corner(tmp_path):
    scores = tmp_path / "scores.csv"
    with open(scores, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        for t in range(10):
            writer.writerow([5, 0.5, "H0", t, float(t)])
            writer.writerow([5, 0.5, "H1", t, 100.0 + t])
    (tmp_path / "auc.json").write_text(json.dumps(
        {"cells": [{"s": 5, "rho": 0.5, "auc": 1.0}]}))
    fig, aucs = build_figure(FigureSpec(scores=(str(scores),),
                                        out=str(tmp_path / "fig.png")))
    assert aucs[(5, 0.5)] == 1.0
    (ax,) = visible_axes(fig)
    curve = ax.get_lines()[-1]
    points = set(zip(curve.get_xdata(), curve.get_ydata()))
    assert (0.0, 1.0) in points
    assert ax.get_legend().get_texts()[0].get_text() == "s=5 (AUC=1.000)"


def test_tampered_sidecar_aborts(tmp_path):
    scores = write_sweep(tmp_path, {(10, 0.5): 1.0})
    payload = json.loads((tmp_path / "auc.json").read_text())
    payload["cells"][0]["auc"] += 0.01
    (tmp_path / "auc.json").write_text(json.dumps(payload))
    with pytest.raises(SidecarError, match="disagrees"):
        build_figure(FigureSpec(scores=(str(scores),),
                                out=str(tmp_path / "fig.png")))


def test_four_panels_five_curves(tmp_path):
    scores = write_sweep(tmp_path, grid_cells(), seed=3)
    out = tmp_path / "fig.png"
    path = render_roc(FigureSpec(scores=(str(scores),), out=str(out)))
    assert path == str(out)
    assert out.stat().st_size > 0
    fig, _ = build_figure(FigureSpec(scores=(str(scores),), out=str(out)))
    panels = visible_axes(fig)
    assert len(panels) == 4
    titles = [ax.get_title() for ax in panels]
    assert titles == ["rho=0.85", "rho=0.9", "rho=0.95", "rho=0.99"]
    for ax in panels:
        # diagonal reference plus one curve per s value
        assert len(ax.get_lines()) == 6
        labels = [t.get_text() for t in ax.get_legend().get_texts()]
        assert len(labels) == 5
        assert all(re.fullmatch(r"s=\d+ \(AUC=\d\.\d{3}\)", lab)
                   for lab in labels)
        assert labels == sorted(labels, key=lambda lab: int(
            lab.split("=")[1].split()[0]))


def test_legend_auc_is_mann_whitney(tmp_path):
    cells = {(10, 0.5): 0.8, (20, 0.5): 1.6}
    scores = write_sweep(tmp_path, cells, trials=40, seed=9)
    fig, aucs = build_figure(FigureSpec(scores=(str(scores),),
                                        out=str(tmp_path / "fig.png")))
    loaded = {}
    with open(scores, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for s, rho, hyp, _, value in reader:
            loaded.setdefault((int(s), float(rho)), {"H0": [], "H1": []})[
                hyp].append(float(value))
    for key, cell in loaded.items():
        assert aucs[key] == pytest.approx(pair_auc(cell["H0"], cell["H1"]),
                                          abs=1e-12)
    (ax,) = visible_axes(fig)
    labels = [t.get_text() for t in ax.get_legend().get_texts()]
    assert labels == [f"s=10 (AUC={aucs[(10, 0.5)]:.3f})",
                      f"s=20 (AUC={aucs[(20, 0.5)]:.3f})"]


def test_schema_error_names_columns(tmp_path):
    scores = tmp_path / "scores.csv"
    scores.write_text("s,rho,hyp,trial,stat\n5,0.5,H0,0,1.0\n")
    with pytest.raises(SchemaError, match=r"expected columns .*hypothesis"):
        build_figure(FigureSpec(scores=(str(scores),),
                                out=str(tmp_path / "fig.png")))


def test_incomplete_grid_rejected(tmp_path):
    scores = write_sweep(tmp_path, {(80, 0.85): 0.5, (85, 0.9): 0.5})
    with pytest.raises(PlotError, match="grid is incomplete"):
        build_figure(FigureSpec(scores=(str(scores),),
                                out=str(tmp_path / "fig.png")))


def test_missing_sidecar(tmp_path):
    scores = write_sweep(tmp_path, {(10, 0.5): 1.0})
    (tmp_path / "auc.json").unlink()
    with pytest.raises(SidecarError, match="cannot read"):
        build_figure(FigureSpec(scores=(str(scores),),
                                out=str(tmp_path / "fig.png")))


def test_sidecar_missing_cell(tmp_path):
    scores = write_sweep(tmp_path, {(10, 0.5): 1.0, (20, 0.5): 1.0})
    payload = json.loads((tmp_path / "auc.json").read_text())
    payload["cells"] = payload["cells"][:1]
    (tmp_path / "auc.json").write_text(json.dumps(payload))
    with pytest.raises(SidecarError, match="no cell"):
        build_figure(FigureSpec(scores=(str(scores),),
                                out=str(tmp_path / "fig.png")))


def test_render_is_deterministic(tmp_path):
    scores = write_sweep(tmp_path, grid_cells(), trials=10, seed=5)
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    render_roc(FigureSpec(scores=(str(scores),), out=str(a)))
    render_roc(FigureSpec(scores=(str(scores),), out=str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_roc_trapezoid_matches_midrank():
    rng = np.random.default_rng(12)
    for _ in range(50):
        h0 = rng.integers(0, 6, 25).astype(float)
        h1 = rng.integers(0, 6, 30).astype(float) + rng.choice([0.0, 0.5])
        fpr, tpr = roc_points(h0, h1)
        area = float(np.trapezoid(tpr, fpr))
        assert area == pytest.approx(auc_midrank(h0, h1), abs=1e-12)
        assert fpr[0] == tpr[0] == 0.0
        assert fpr[-1] == tpr[-1] == 1.0


def test_panel_curve_swap(tmp_path):
    scores = write_sweep(tmp_path, grid_cells(), trials=10, seed=7)
    fig, _ = build_figure(FigureSpec(scores=(str(scores),),
                                     out=str(tmp_path / "fig.png"),
                                     panel="s", curve="rho"))
    panels = visible_axes(fig)
    assert len(panels) == 5
    labels = [t.get_text() for t in panels[0].get_legend().get_texts()]
    assert labels[0].startswith("rho=0.85 ")


def test_bad_spec_rejected(tmp_path):
    with pytest.raises(PlotError, match="must differ"):
        FigureSpec(scores=("x.csv",), out="f.png", panel="s", curve="s")
    with pytest.raises(PlotError):
        FigureSpec(scores=(), out="f.png")
