from .result_display import (
    format_payload,
    render_complex,
    render_complex_shift,
    render_cross,
    render_depth,
    render_ekr,
    render_family_shift,
    render_hibi,
    render_info,
    render_reduction,
    render_shift_properties,
    render_stability,
    render_stability_trace,
    render_vd,
)

__all__ = [
    "format_payload",
    "render_complex",
    "render_complex_shift",
    "render_cross",
    "render_depth",
    "render_ekr",
    "render_family_shift",
    "render_hibi",
    "render_info",
    "render_reduction",
    "render_shift_properties",
    "render_stability",
    "render_stability_trace",
    "render_vd",
]
