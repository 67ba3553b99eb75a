from .export import export_intervals, interval_frame, read_intervals
from .render import render_json, render_text, result_payload
from .verdict import Status, Verdict, Witness, fmt_fraction, fmt_value, weakest

__all__ = [
    "Status",
    "Verdict",
    "Witness",
    "export_intervals",
    "fmt_fraction",
    "fmt_value",
    "interval_frame",
    "read_intervals",
    "render_json",
    "render_text",
    "result_payload",
    "weakest",
]
