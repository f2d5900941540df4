"""Chart selection and HTML rendering of emitted results."""

import pytest

from errors import PreconditionError
from report import ChartSpec, chart_specs, render_chart_image, render_html, render_report

SWEEP = [
    {"kappa": 0.1, "t": 0.0, "besov": 2.0, "label": "a"},
    {"kappa": 0.1, "t": 1.0, "besov": 1.5, "label": "a"},
    {"kappa": 0.01, "t": 0.0, "besov": 2.0, "label": "b"},
    {"kappa": 0.01, "t": 1.0, "besov": 1.9, "label": "b"},
]


def test_time_charts_group_by_kappa():
    (spec,) = chart_specs(SWEEP)
    assert spec.title == "besov vs t"
    assert [series.name for series in spec.series] == ["κ=0.1", "κ=0.01"]
    assert not spec.log_x


def test_kappa_charts_are_log_log():
    records = [{"kappa": k, "strong_error": 10 * k} for k in (1e-1, 1e-2, 1e-3)]
    (spec,) = chart_specs(records)
    assert spec.x_label == "kappa"
    assert spec.log_x and spec.log_y


def test_no_abscissa():
    assert chart_specs([{"value": 1.0}, {"value": 2.0}]) == []


def test_chart_without_series():
    with pytest.raises(PreconditionError, match="no series"):
        render_chart_image(ChartSpec(title="empty", x_label="t", y_label="y"))


def test_chart_image_is_embedded():
    (spec,) = chart_specs(SWEEP)
    image = render_chart_image(spec)
    assert image["data_url"].startswith("data:image/png;base64,")


def test_render_html(tmp_path):
    result = {
        "kind": "diffusive",
        "seed": 4,
        "config": {"kind": "diffusive", "n": 32},
        "summary": {"sup_minimal_C": 1.25, "per_kappa": {"kappa=0.1": {"minimal_C": 1.1}}},
        "records": SWEEP,
        "reports": {"diffusive": {"name": "diffusive", "minimal_constant": 1.25, "rows": [{}, {}], "inputs": {}}},
    }
    html = render_html(result)
    assert "diffusive report" in html
    assert "per_kappa.kappa=0.1.minimal_C" in html
    assert "data:image/png;base64," in html
    path = render_report(result, tmp_path / "out" / "report.html")
    assert "<h2>Records</h2>" in path.read_text(encoding="utf-8")
