"""Phase-transition figures from threshold-scan CSV logs."""

from .render import (
    CSV_COLUMNS,
    CurveSpec,
    RenderReport,
    SchemaMismatch,
    load_results,
    render,
    wilson_interval,
)

__all__ = [
    "CSV_COLUMNS",
    "CurveSpec",
    "RenderReport",
    "SchemaMismatch",
    "load_results",
    "render",
    "wilson_interval",
]
