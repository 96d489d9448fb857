from .figure import (AUC_TOLERANCE, FigureSpec, PlotError, SchemaError,
                     SidecarError, auc_midrank, build_figure, load_scores,
                     load_sidecar, render_roc, roc_points)

__all__ = [
    "AUC_TOLERANCE",
    "FigureSpec",
    "PlotError",
    "SchemaError",
    "SidecarError",
    "auc_midrank",
    "build_figure",
    "load_scores",
    "load_sidecar",
    "render_roc",
    "roc_points",
]
