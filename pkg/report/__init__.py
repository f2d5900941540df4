"""HTML report rendering for experiment results."""

from .render import ChartSpec, SeriesSpec, chart_specs, render_chart_image, render_html, render_report

__all__ = ["ChartSpec", "SeriesSpec", "chart_specs", "render_chart_image", "render_html", "render_report"]
