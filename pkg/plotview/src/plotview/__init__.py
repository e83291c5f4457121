"""Figures from phase-scan CSV exports: filled regions, band, zero curve."""

from .render import FigureSpec, SchemaError, read_curve_csv, read_scan_csv, render

__all__ = ["FigureSpec", "SchemaError", "read_curve_csv", "read_scan_csv", "render"]
