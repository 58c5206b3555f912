"""Figure rendering for jamcraft sweep CSVs."""

from .render import FigureSpec, SchemaError, load_sweep_csv, preset_spec, \
    render, render_heatmap, render_lines

__version__ = "0.1.0"
