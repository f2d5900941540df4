"""Configuration, presets, fits, bounds, the staged harness and the experiment runners."""

import asyncio
import csv
import json
import math

import numpy as np
import pytest
from scipy.special import jv

from errors import ConfigError, EmitError, InvalidParameterError, PreconditionError
from experiments import (
    Experiment,
    ExperimentResult,
    Job,
    RateBoundInputs,
    auto_load_experiments,
    build_experiment_workflow,
    checkerboard,
    dissipation_rhs,
    emit,
    fit_line,
    fit_log_rate,
    get_experiment,
    harmonic,
    initial_datum,
    load_config,
    load_result,
    log_weight,
    make_config,
    random_band_limited,
    read_config_file,
    run_diffusive,
    run_experiment,
    run_mixing,
    run_regularity,
    run_zero_diffusivity_sweep,
    strong_rhs,
    weak_scale,
)
from experiments.common import kappa_key
from experiments.harness import default_workers
from experiments.mixing import analyse_mixing
from experiments.registry import _merge_experiments
from solver import TimeSeries
from spectral import TorusGrid, inverse_transform, lq_norm

SQRT_PI = math.sqrt(math.pi)

SHEAR = {
    "kind": "regularity",
    "velocity": "steady_shear",
    "d": 2,
    "n": 32,
    "band": 4,
    "t_end": 0.1,
    "dt": 1e-2,
    "samples": 3,
}
HEAT = {
    "velocity": "zero",
    "d": 1,
    "n": 32,
    "preset": "harmonic",
    "mode": 4,
    "dt": 0.05,
}


class TestConfig:
    """The key = value reader and pydantic validation."""

    def test_read_config_file(self, tmp_path):
        path = tmp_path / "sweep.cfg"
        path.write_text('# sweep\nkind = zerodiff\nkappas = "1e-1, 1e-2"  # four decades later\n\nn=32\n')
        assert read_config_file(path) == {"kind": "zerodiff", "kappas": "1e-1, 1e-2", "n": "32"}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("kind = mixing\nvelocity\n")
        with pytest.raises(ConfigError, match=r"bad.cfg:2"):
            read_config_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            read_config_file(tmp_path / "absent.cfg")

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("kind = mixing\nn = 32\nkappas = 0.01,0.001\n")
        config = load_config(path, n="16", csv=str(tmp_path / "out.csv"), json=None)
        assert config.n == 16
        assert config.kappas == (0.01, 0.001)
        assert config.csv_path == tmp_path / "out.csv"
        assert config.json_path is None

    @pytest.mark.parametrize(
        "values, message",
        [
            ({"kind": "mixing", "a": 0.4}, "a must lie"),
            ({"kind": "mixing", "a": 1.0, "p": 2.0}, "a must lie"),
            ({"kind": "mixing", "n": 48}, "power of two"),
            ({"kind": "mixing", "kappas": "-1"}, "diffusivities"),
            ({"kind": "turbulence"}, "kind"),
            ({"kind": "mixing", "colour": "red"}, "colour"),
        ],
    )
    def test_invalid_values(self, values, message):
        with pytest.raises(ConfigError, match=message):
            make_config(values)

    def test_record_uses_aliases(self, tmp_path):
        config = make_config({"kind": "mixing", "json": str(tmp_path / "r.json")})
        record = config.as_record()
        assert record["json"] == str(tmp_path / "r.json")
        assert config.q == pytest.approx(2.0)


class TestPresets:
    """Initial data are mean-free with unit sup norm."""

    @pytest.mark.parametrize(
        "build",
        [
            lambda grid: harmonic(grid, 3),
            lambda grid: random_band_limited(grid, 6, seed=2),
            lambda grid: checkerboard(grid, 4),
        ],
    )
    def test_normalisation(self, plane32, build):
        theta = build(plane32)
        assert abs(theta.mean) <= 1e-15
        assert lq_norm(theta, math.inf) == pytest.approx(1.0)

    def test_random_is_reproducible(self, plane32):
        first = random_band_limited(plane32, 4, seed=9)
        np.testing.assert_array_equal(first.coeffs, random_band_limited(plane32, 4, seed=9).coeffs)
        assert not np.allclose(first.coeffs, random_band_limited(plane32, 4, seed=10).coeffs)

    def test_unresolved_parameters(self, plane32):
        with pytest.raises(ConfigError, match="not resolved"):
            harmonic(plane32, 16)
        with pytest.raises(ConfigError, match="even cell count"):
            checkerboard(plane32, 3)

    def test_initial_datum_from_config(self):
        config = make_config({"kind": "mixing", **HEAT})
        values = inverse_transform(initial_datum(config)).values
        np.testing.assert_allclose(values, np.cos(4 * config.grid.coordinates()[0]), atol=1e-14)


class TestFitsAndBounds:
    """Least-squares fits and the rate bound right-hand sides."""

    def test_fit_line(self):
        fit = fit_line([0.0, 1.0, 2.0], [1.0, 3.0, 5.0])
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(fit.predict([3.0]), [7.0])

    def test_fit_needs_distinct_abscissae(self):
        with pytest.raises(PreconditionError, match="distinct"):
            fit_line([1.0, 1.0], [0.0, 1.0])

    def test_fit_log_rate_recovers_exponent(self):
        kappas = [1e-2, 1e-3, 1e-4, 1e-5]
        errors = [log_weight(k, 1.0, 0.75) for k in kappas]
        assert fit_log_rate(errors, kappas, 1.0).slope == pytest.approx(-0.75)

    def test_fit_log_rate_skips_zero_errors(self):
        with pytest.raises(PreconditionError, match="two positive"):
            fit_log_rate([0.0, 0.1], [1e-2, 1e-3], 1.0)

    def test_weights(self):
        assert log_weight(1.0, 1.0, 1.0) == pytest.approx(1.0 / math.log(3.0))
        assert weak_scale(0.25, 1.0, 1.0) == pytest.approx(0.5 / math.log(6.0))

    def test_bound_values(self):
        inputs = RateBoundInputs(linf0=1.0, besov0=2.0, grad_u_integral=4.0, a=0.5)
        assert inputs.lam == pytest.approx(4.0)
        weight = log_weight(0.1, 1.0, 0.5)
        assert strong_rhs(inputs, 0.1, 1.0, 2.0) == pytest.approx(weight * 19.0)
        assert dissipation_rhs(inputs, 0.1, 1.0) == pytest.approx(weight * 4.0)

    def test_bounds_reject_bad_inputs(self):
        with pytest.raises(InvalidParameterError, match="kappa > 0"):
            log_weight(0.0, 1.0, 1.0)
        with pytest.raises(InvalidParameterError, match="besov0"):
            RateBoundInputs(linf0=1.0, besov0=-1.0, grad_u_integral=0.0, a=1.0)


class TestRegistry:
    """Runner modules are discovered by their get_experiments hook."""

    def test_discovers_every_runner(self):
        assert list(auto_load_experiments()) == ["diffusive", "mixing", "regularity", "zerodiff"]

    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="unknown experiment kind"):
            get_experiment("turbulence")

    def test_duplicate_kind(self):
        experiment = get_experiment("mixing")
        target = {"mixing": experiment}
        with pytest.raises(ConfigError, match="registered twice"):
            _merge_experiments(target, {"mixing": experiment}, module_name="experiments.copy")

    def test_non_mapping(self):
        with pytest.raises(TypeError, match="non-mapping"):
            _merge_experiments({}, [get_experiment("mixing")], module_name="experiments.bad")


class TestEmit:
    """CSV, JSON and reloading of results."""

    @pytest.fixture
    def result(self):
        return ExperimentResult("demo", {"seed": 3}, [{"t": 0.0, "x": 1.0}, {"t": 1.0, "y": math.inf}], {"ok": True})

    def test_csv_uses_union_of_columns(self, result, tmp_path):
        path = emit(result, "csv", tmp_path / "nested" / "demo.csv")
        with path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert list(rows[0]) == ["t", "x", "y"]
        assert rows[0]["y"] == ""
        assert rows[1]["y"] == "inf"

    def test_json_round_trip(self, result, tmp_path):
        payload = load_result(emit(result, "json", tmp_path / "demo.json"))
        assert payload["seed"] == 3
        assert payload["records"][1]["y"] == "inf"
        assert payload["summary"] == {"ok": True}

    def test_empty_result(self, tmp_path):
        with pytest.raises(PreconditionError, match="no records"):
            emit(ExperimentResult("demo", {}), "csv", tmp_path / "empty.csv")

    def test_unknown_format(self, result, tmp_path):
        with pytest.raises(PreconditionError, match="unknown output format"):
            emit(result, "parquet", tmp_path / "demo.parquet")

    def test_unwritable_target(self, result, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        with pytest.raises(EmitError) as info:
            emit(result, "csv", blocker / "demo.csv")
        assert info.value.path.endswith("demo.csv")

    def test_load_rejects_other_json(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"rows": []}))
        with pytest.raises(EmitError, match="no 'records'"):
            load_result(path)
        path.write_text("{not json")
        with pytest.raises(EmitError, match="not a results JSON"):
            load_result(path)


class TestHarness:
    """The staged async workflow."""

    def test_stages_and_outputs(self, tmp_path):
        config = make_config(
            {
                **SHEAR,
                "csv": str(tmp_path / "r.csv"),
                "json": str(tmp_path / "r.json"),
                "report": str(tmp_path / "r.html"),
            }
        )
        seen = []

        async def progress(snapshot):
            seen.append(snapshot["stage"])

        workflow = build_experiment_workflow(workers=2)
        state = asyncio.run(workflow(config, progress_handler=progress))
        assert seen == ["setup", "simulate", "analyse", "emit"]
        assert state.stage == "done"
        assert state.total_steps == 5
        assert set(state.outputs) == {"csv", "json", "report"}
        assert (tmp_path / "r.html").read_text().startswith("<!DOCTYPE html>")
        assert load_result(tmp_path / "r.json")["kind"] == "regularity"

    def test_plain_callable_handler(self):
        seen = []
        workflow = build_experiment_workflow(workers=1)
        state = asyncio.run(workflow(make_config(SHEAR), progress_handler=seen.append, emit=False))
        assert [entry["stage"] for entry in seen] == ["setup", "simulate", "analyse"]
        assert state.outputs == {}

    def test_job_failure_propagates(self):
        def broken():
            raise ConfigError("no such datum")

        experiment = Experiment("regularity", lambda cfg: [Job("kappa=0", broken)], lambda cfg, out: None)
        workflow = build_experiment_workflow({"regularity": experiment}, workers=1)
        with pytest.raises(ConfigError, match="no such datum"):
            asyncio.run(workflow(make_config(SHEAR), emit=False))

    def test_run_experiment(self):
        result = run_experiment(make_config(SHEAR), workers=1, emit=False)
        assert result.kind == "regularity"
        assert result.records

    @pytest.mark.parametrize("value, expected", [("2", 2), ("0", 1), ("many", 4)])
    def test_default_workers(self, monkeypatch, value, expected):
        monkeypatch.setenv("LOGBESOV_WORKERS", value)
        assert default_workers() == expected


class TestRunners:
    """Each experiment on a small grid, against closed forms where they exist."""

    def test_regularity(self):
        result = run_regularity(make_config(SHEAR))
        report = result.reports["regularity"]
        assert report.rows[0]["ratio"] == pytest.approx(1.0)
        assert 1.0 <= result.summary["sup_minimal_C"] < math.inf
        assert result.summary["grad_u_integral"] == pytest.approx(0.1 * math.pi * math.sqrt(2.0))

    def test_regularity_rejects_diffusion(self):
        with pytest.raises(ConfigError, match="inviscid"):
            run_regularity(make_config({**SHEAR, "kappas": "0.1"}))

    def test_diffusive(self):
        result = run_diffusive(make_config({**SHEAR, "kind": "diffusive", "kappas": "0.1,0.01"}))
        assert set(result.summary["per_kappa"]) == {"kappa=0.1", "kappa=0.01"}
        assert math.isfinite(result.summary["sup_minimal_C"])
        assert all(row["dissipation_term"] >= 0.0 for row in result.records)

    def test_diffusive_needs_kappas(self):
        with pytest.raises(ConfigError, match="kappa > 0"):
            run_diffusive(make_config({**SHEAR, "kind": "diffusive"}))

    def test_zero_diffusivity_heat_flow(self):
        config = make_config({**HEAT, "kind": "zerodiff", "kappas": "1e-1,1e-2,1e-3,1e-4", "t_end": 0.5, "samples": 3})
        result = run_zero_diffusivity_sweep(config)
        assert [row["kappa"] for row in result.records] == [1e-1, 1e-2, 1e-3, 1e-4]
        for row in result.records:
            expected = (1.0 - math.exp(-16 * row["kappa"] * 0.5)) * SQRT_PI
            assert row["strong_error"] == pytest.approx(expected, rel=1e-10)
            assert row["weak_error"] > 0.0
        assert result.summary["inputs"]["grad_u_integral"] == 0.0
        assert result.summary["slope_steeper_than_bound"] is True
        assert set(result.fits) == {"strong", "dissipation", "weak"}

    def test_zero_diffusivity_needs_decades(self):
        config = make_config({**HEAT, "kind": "zerodiff", "kappas": "1e-1,1e-2"})
        with pytest.raises(ConfigError, match="4 decades"):
            run_zero_diffusivity_sweep(config)

    def test_mixing_without_flow(self):
        config = make_config({**HEAT, "kind": "mixing", "kappas": "0.01", "t_end": 1.0, "samples": 5})
        result = run_mixing(config)
        assert result.summary["rate"] == pytest.approx(0.0, abs=1e-10)
        assert result.summary["sub_exponential"] is False
        assert result.summary["envelope_holds"] is True
        (diffusive,) = result.summary["enhanced_dissipation"]
        assert diffusive["decay_rate"] == pytest.approx(0.16, rel=1e-8)
        assert diffusive["consequence_applies"] is False
        assert len(result.records) == 5

    def test_mixing_envelope_lies_below_every_sample(self):
        times = np.arange(9.0)
        log_h = -0.3 * times
        log_h[4] -= 0.4
        series = TimeSeries()
        for t, h in zip(times, log_h):
            series.append(t, {"hminus1": math.exp(h)})
        config = make_config({**HEAT, "kind": "mixing", "t_end": 8.0})
        result = analyse_mixing(config, {kappa_key(0.0): series})
        assert result.summary["rate"] == pytest.approx(0.3, rel=1e-10)
        assert result.summary["envelope_intercept"] == pytest.approx(-0.4, abs=1e-12)
        assert result.summary["envelope_margin"] == pytest.approx(0.4 - 0.4 / 9.0, rel=1e-10)
        assert result.summary["envelope_holds"] is True
        assert result.summary["sub_exponential"] is False
        assert all(row["envelope"] <= row["log_hminus1"] + 1e-12 for row in result.records)

        strict = make_config({**HEAT, "kind": "mixing", "t_end": 8.0, "envelope_tolerance": 0.1})
        assert analyse_mixing(strict, {kappa_key(0.0): series}).summary["envelope_holds"] is False

    def test_steady_shear_decay_slows_down(self):
        config = make_config(
            {
                "kind": "mixing",
                "velocity": "steady_shear",
                "d": 2,
                "n": 128,
                "preset": "harmonic",
                "mode": 2,
                "t_end": 40.0,
                "dt": 0.1,
                "samples": 41,
            }
        )
        result = run_mixing(config)
        summary = result.summary
        assert summary["amplitude"] == pytest.approx(1.0 / (math.pi * math.sqrt(2.0)), rel=1e-10)
        assert summary["early_tail_rate"] > 0.0
        assert summary["late_tail_rate"] < 0.75 * summary["early_tail_rate"]
        assert summary["sub_exponential"] is True

        # cos(2(x1 - A t sin x2)) = Σ_k J_k(2At) cos(2x1 - k x2)
        final = result.records[-1]
        z = 2.0 * summary["amplitude"] * final["t"]
        k = np.arange(-60, 61)
        exact = math.sqrt(2.0 * math.pi**2 * np.sum(jv(k, z) ** 2 / (4.0 + k**2)))
        assert final["t"] == pytest.approx(40.0)
        assert final["hminus1"] == pytest.approx(exact, rel=1e-4)

    def test_alternating_shear_mixes_above_envelope(self):
        config = make_config(
            {
                "kind": "mixing",
                "velocity": "alternating_shear",
                "d": 2,
                "n": 128,
                "preset": "random",
                "band": 4,
                "t_end": 10.0,
                "dt": 0.05,
                "samples": 21,
            }
        )
        result = run_mixing(config)
        assert result.summary["rate"] > 0.0
        assert result.summary["envelope_margin"] >= 0.0
        assert result.summary["envelope_holds"] is True
        assert len(result.records) == 21
        for row in result.records:
            assert row["envelope"] <= row["log_hminus1"] + 1e-12
