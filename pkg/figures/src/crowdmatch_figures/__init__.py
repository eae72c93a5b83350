"""Offline plotting for crowdmatch metrics.csv outputs."""

from .render import RenderError, load_metrics, prepare_series, render, trailing_mean
from .specs import CSV_COLUMNS, FIGURES, FigureSpec, figure_ids, get_spec

__version__ = "0.1.0"
