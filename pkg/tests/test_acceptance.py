"""Refinement and sampling studies over many fields; the heavy ones are marked slow."""

import math

import numpy as np
import pytest

from experiments import make_config, run_mixing, run_zero_diffusivity_sweep
from filters import family_for, littlewood_paley_ratio
from norms import (
    check_gradient_interpolation,
    check_square_function_interpolation,
    check_sup_interpolation,
    gagliardo_log_seminorm,
    mixing_duality_check,
)
from solver import SolverConfig, VelocityModel, commutator_bound_constant, commutator_trajectory
from spectral import PhysicalField, SpectralField, TorusGrid, inverse_transform
from transport import check_l1_transport_interpolation, log_cost

from conftest import cosine, random_field

FIELDS = 100
BASE_N = 32

INEQUALITIES = {
    "sup_highpass": lambda F: check_sup_interpolation(F, 0.9, [0.3, 0.6, 0.9]),
    "sup_block": lambda F: check_sup_interpolation(F, 0.9, [0.3, 0.6, 0.9], variant="block"),
    "square_function": lambda F: check_square_function_interpolation(F, 0.9, [(0.0, 2.0), (0.5, 2.0), (0.3, 4.0)]),
    "gradient": lambda F: check_gradient_interpolation(F, 0.9, [2.0, 4.0, 8.0, 16.0]),
    "mixing_duality": lambda F: mixing_duality_check(F, 0.9),
}


def band_limited(grid: TorusGrid, seed: int, band: int = 8) -> SpectralField:
    """The same band-limited mean-free field on any grid with n > 2·band."""
    base_grid = TorusGrid(d=grid.d, n=BASE_N)
    base = random_field(base_grid, seed).multiply(base_grid.wavenumber_magnitude() <= band)
    modes = np.r_[0 : band + 1, -band:0]
    coeffs = np.zeros(grid.shape, dtype=complex)
    coeffs[np.ix_(*[modes % grid.n] * grid.d)] = base.coeffs[np.ix_(*[modes % BASE_N] * grid.d)]
    return SpectralField(grid, coeffs)


def minimal_constant(check, grid: TorusGrid) -> float:
    return max(check(band_limited(grid, seed)).minimal_constant for seed in range(FIELDS))


@pytest.mark.slow
class TestLittlewoodPaleyRatio:
    """Square-function equivalence interval over many fields."""

    @pytest.mark.parametrize("q", [4.0, 6.0])
    def test_interval_is_stable_under_refinement(self, q):
        intervals = []
        for n in (128, 256):
            grid = TorusGrid(d=2, n=n)
            fam = family_for(grid)
            ratios = [littlewood_paley_ratio(band_limited(grid, seed), q, fam) for seed in range(FIELDS)]
            intervals.append((min(ratios), max(ratios)))
        (lo_coarse, hi_coarse), (lo_fine, hi_fine) = intervals
        assert 0.0 < lo_coarse <= hi_coarse < math.inf
        assert lo_fine == pytest.approx(lo_coarse, rel=0.15)
        assert hi_fine == pytest.approx(hi_coarse, rel=0.15)


@pytest.mark.slow
class TestInequalityConstants:
    """Minimal constants over 100 fields barely move when the grid is doubled."""

    @pytest.mark.parametrize("name", sorted(INEQUALITIES))
    def test_constant_is_stable_under_refinement(self, name):
        check = INEQUALITIES[name]
        coarse = minimal_constant(check, TorusGrid(d=2, n=64))
        fine = minimal_constant(check, TorusGrid(d=2, n=128))
        assert 0.0 < coarse < math.inf
        assert fine == pytest.approx(coarse, rel=0.25)

    @pytest.mark.parametrize("kind", ["steady_shear", "alternating_shear"])
    @pytest.mark.parametrize("a", [0.6, 0.9])
    def test_commutator_bound_is_stable_under_refinement(self, kind, a):
        constants = []
        for n in (64, 128):
            grid = TorusGrid(d=2, n=n)
            config = SolverConfig(dt=0.01, grid=grid)
            samples = commutator_trajectory(band_limited(grid, 11), VelocityModel(kind=kind), config, a, 0.25, samples=5)
            constants.append(commutator_bound_constant(samples, a).minimal_constant)
        coarse, fine = constants
        assert 0.0 < coarse < math.inf
        assert fine == pytest.approx(coarse, rel=0.25)

    def test_transport_interpolation_of_a_cosine(self):
        constants = []
        for n in (64, 128, 256):
            grid = TorusGrid(d=1, n=n)
            report = check_l1_transport_interpolation(cosine(grid, 1), 0.9, [8.0], 0.1)
            assert report.inputs["l1"] == pytest.approx(4.0, rel=1e-2)
            constants.append(report.minimal_constant)
        assert 0.0 < constants[0] < math.inf
        for coarse, fine in zip(constants, constants[1:]):
            assert fine == pytest.approx(coarse, rel=0.25)


@pytest.mark.slow
class TestRunnerStudies:
    """Full experiment runs at acceptance resolution."""

    def test_alternating_shear_envelope_on_fine_grid(self):
        config = make_config(
            {
                "kind": "mixing",
                "velocity": "alternating_shear",
                "d": 2,
                "n": 256,
                "band": 4,
                "t_end": 10.0,
                "dt": 0.05,
                "samples": 21,
            }
        )
        result = run_mixing(config)
        assert result.summary["rate"] > 0.0
        assert result.summary["envelope_holds"] is True
        assert math.isfinite(result.summary["exponential_residual"])
        for row in result.records:
            assert row["envelope"] <= row["log_hminus1"] + 1e-12

    def test_zero_diffusivity_sweep_under_alternating_shear(self):
        config = make_config(
            {
                "kind": "zerodiff",
                "velocity": "alternating_shear",
                "d": 2,
                "n": 64,
                "band": 4,
                "t_end": 1.0,
                "dt": 0.01,
                "samples": 3,
                "kappas": "1e-3,1e-4,1e-5,1e-6",
                "ot_max_support": 256,
            }
        )
        result = run_zero_diffusivity_sweep(config)
        assert result.summary["slope_within_margin"] is True
        assert result.summary["slopes"]["strong"] <= -config.a + 0.3
        for constant in result.summary["minimal_C"].values():
            assert 0.0 < constant < math.inf


class TestInvariances:
    """Symmetries every empirical constant must respect."""

    def test_log_cost_is_subadditive(self):
        rng = np.random.default_rng(0)
        z1, z2 = rng.exponential(2.0, size=(2, 10_000))
        for delta in (1e-3, 0.1, 1.0):
            assert np.all(log_cost(z1 + z2, delta) <= log_cost(z1, delta) + log_cost(z2, delta) + 1e-12)

    @pytest.mark.parametrize("d,shift", [(1, (5,)), (2, (3, 7))])
    def test_gagliardo_is_translation_invariant(self, d, shift):
        grid = TorusGrid(d=d, n=32)
        values = inverse_transform(random_field(grid, seed=2)).values
        moved = np.roll(values, shift, axis=tuple(range(d)))
        original = gagliardo_log_seminorm(PhysicalField(grid, values), 0.9)
        assert gagliardo_log_seminorm(PhysicalField(grid, moved), 0.9) == pytest.approx(original, rel=1e-10)

    @pytest.mark.parametrize("name", sorted(INEQUALITIES))
    def test_constants_ignore_amplitude(self, name):
        F = band_limited(TorusGrid(d=2, n=64), seed=5)
        check = INEQUALITIES[name]
        assert check(F.scaled(7.0)).minimal_constant == pytest.approx(check(F).minimal_constant, rel=1e-10)

    def test_transport_interpolation_ignores_amplitude(self):
        sigma = cosine(TorusGrid(d=1, n=32), 1)
        single = check_l1_transport_interpolation(sigma, 0.9, [8.0], 0.1).minimal_constant
        scaled = check_l1_transport_interpolation(sigma.scaled(7.0), 0.9, [8.0], 0.1).minimal_constant
        assert scaled == pytest.approx(single, rel=1e-6)
