"""Figure rendering for decolab sweep CSVs."""

from .render import (
    EmptyInputError,
    FigureSpec,
    MissingColumnError,
    Panel,
    RenderError,
    read_series,
    render,
    render_to_file,
)

__version__ = "0.1.0"
