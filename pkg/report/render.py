"""Rendering experiment results as a self-contained HTML report with embedded charts."""

from __future__ import annotations

import base64
import io
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from jinja2 import Environment, FileSystemLoader, select_autoescape
from pydantic import BaseModel, Field

from errors import EmitError, PreconditionError

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=select_autoescape(["html", "xml"]),
)

MAX_CHARTS = 8
_ABSCISSAE = ("t", "kappa")


class SeriesSpec(BaseModel):
    name: Optional[str] = None
    x: List[float]
    y: List[float]


class ChartSpec(BaseModel):
    """Description of one line chart built from the result records."""

    title: str = Field(..., max_length=120)
    x_label: str
    y_label: str
    series: List[SeriesSpec] = Field(default_factory=list)
    log_x: bool = False
    log_y: bool = False
    caption: Optional[str] = Field(default=None, max_length=400)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _numeric_columns(records: Sequence[Mapping[str, Any]]) -> List[str]:
    columns: Dict[str, None] = {}
    for row in records:
        for key, value in row.items():
            if _is_number(value):
                columns.setdefault(key, None)
    return list(columns)


def _abscissa(records: Sequence[Mapping[str, Any]], columns: Sequence[str]) -> Optional[str]:
    for name in _ABSCISSAE:
        if name in columns and len({row.get(name) for row in records}) > 1:
            return name
    return None


def chart_specs(records: Sequence[Mapping[str, Any]]) -> List[ChartSpec]:
    """Line charts of every numeric column against time (grouped by κ) or against κ."""
    columns = _numeric_columns(records)
    x_name = _abscissa(records, columns)
    if x_name is None:
        return []
    group_by_kappa = x_name == "t" and len({row.get("kappa") for row in records}) > 1
    specs: List[ChartSpec] = []
    for y_name in columns:
        if y_name in _ABSCISSAE or len(specs) >= MAX_CHARTS:
            continue
        groups: Dict[Any, SeriesSpec] = {}
        for row in records:
            x, y = row.get(x_name), row.get(y_name)
            if not (_is_number(x) and _is_number(y)):
                continue
            key = row.get("kappa") if group_by_kappa else None
            spec = groups.setdefault(key, SeriesSpec(name=None if key is None else f"κ={key:g}", x=[], y=[]))
            spec.x.append(float(x))
            spec.y.append(float(y))
        if not groups:
            continue
        values = [v for s in groups.values() for v in s.y]
        specs.append(
            ChartSpec(
                title=f"{y_name} vs {x_name}",
                x_label=x_name,
                y_label=y_name,
                series=list(groups.values()),
                log_x=x_name == "kappa" and all(v > 0 for s in groups.values() for v in s.x),
                log_y=x_name == "kappa" and all(v > 0 for v in values),
            )
        )
    return specs


def render_chart_image(spec: ChartSpec) -> Dict[str, Any]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not spec.series:
        raise PreconditionError(f"chart '{spec.title}' has no series")

    fig, ax = plt.subplots(dpi=120)
    for series in spec.series:
        ax.plot(series.x, series.y, marker="o", markersize=3, label=series.name)
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_title(spec.title)
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    ax.grid(alpha=0.3)
    if any(series.name for series in spec.series):
        ax.legend()

    buffer = io.BytesIO()
    fig.tight_layout()
    fig.savefig(buffer, format="png", bbox_inches="tight")
    plt.close(fig)

    encoded = base64.b64encode(buffer.getvalue()).decode("ascii")
    return {
        "title": spec.title,
        "caption": spec.caption,
        "data_url": f"data:image/png;base64,{encoded}",
        "alt": spec.title,
    }


def _render_charts(records: Sequence[Mapping[str, Any]]) -> List[Dict[str, Any]]:
    charts: List[Dict[str, Any]] = []
    for spec in chart_specs(records):
        try:
            charts.append(render_chart_image(spec))
        except Exception as exc:  # pragma: no cover - chart rendering edge cases
            logger.warning("Skipping chart '%s': %s", spec.title, exc)
    return charts


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _flatten(mapping: Mapping[str, Any], prefix: str = "") -> List[Dict[str, str]]:
    rows: List[Dict[str, str]] = []
    for key, value in mapping.items():
        label = f"{prefix}{key}"
        if isinstance(value, Mapping):
            rows.extend(_flatten(value, prefix=f"{label}."))
        else:
            rows.append({"label": label, "value": _format_value(value)})
    return rows


def render_html(result: Mapping[str, Any], *, title: Optional[str] = None) -> str:
    """Render the report as an HTML document."""
    records = list(result.get("records", []))
    columns: Dict[str, None] = {}
    for row in records:
        for key in row:
            columns.setdefault(key, None)
    template = _env.get_template("report.html")
    return template.render(
        title=title or f"{result.get('kind', 'experiment')} report",
        kind=result.get("kind"),
        seed=result.get("seed"),
        config=_flatten(result.get("config", {})),
        summary=_flatten(result.get("summary", {})),
        fits=result.get("fits", {}),
        reports=result.get("reports", {}),
        columns=list(columns),
        rows=[[_format_value(row.get(c, "")) for c in columns] for row in records],
        charts=_render_charts(records),
        generated_at=datetime.now(timezone.utc).strftime("%B %d, %Y • %H:%M %Z"),
    )


def render_report(result: Mapping[str, Any], path: Union[str, Path]) -> Path:
    target = Path(path)
    html = render_html(result)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(html, encoding="utf-8")
    except OSError as exc:
        raise EmitError(f"could not write report to {target}: {exc}", path=str(target)) from exc
    return target


__all__ = ["ChartSpec", "SeriesSpec", "chart_specs", "render_chart_image", "render_html", "render_report"]
