"""Logarithmic-cost transport: closed forms, vertex enumeration and the KR distance."""

import math
from itertools import combinations

import numpy as np
import pytest

from errors import (
    ConvergenceError,
    EmptyMeasureError,
    InvalidParameterError,
    MassMismatchError,
    PreconditionError,
    ResourceLimitError,
)
from spectral import PhysicalField, TorusGrid, inverse_transform
from transport import (
    DiscreteMeasure,
    check_l1_transport_interpolation,
    coarsen,
    cost_matrix,
    entropic_convergence_table,
    entropic_ot,
    exact_ot,
    kr_distance,
    kr_transport,
    lipschitz_violation,
    log_cost,
    signed_split,
    torus_distance,
)

from conftest import cosine


def dirac(*coords, mass=1.0):
    return DiscreteMeasure(np.array([coords]), np.array([mass]))


def random_instance(seed: int, size: int = 3):
    rng = np.random.default_rng(seed)
    a = rng.random(size) + 0.1
    b = rng.random(size) + 0.1
    b *= a.sum() / b.sum()
    mu = DiscreteMeasure(rng.random((size, 2)) * 2 * math.pi, a)
    nu = DiscreteMeasure(rng.random((size, 2)) * 2 * math.pi, b)
    return mu, nu


def vertex_minimum(C: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Cheapest basic feasible coupling, found by trying every basis of m + k - 1 cells."""
    m, k = C.shape
    A = np.vstack([np.kron(np.eye(m), np.ones((1, k))), np.kron(np.ones((1, m)), np.eye(k))])
    rhs = np.concatenate([a, b])
    best = math.inf
    for cells in combinations(range(m * k), m + k - 1):
        sub = A[:, cells]
        if np.linalg.matrix_rank(sub) < m + k - 1:
            continue
        x = np.linalg.lstsq(sub, rhs, rcond=None)[0]
        if np.any(x < -1e-12) or not np.allclose(sub @ x, rhs, atol=1e-12):
            continue
        best = min(best, float(C.ravel()[list(cells)] @ x))
    return best


class TestCost:
    """The logarithmic cost and the geodesic torus distance."""

    def test_log_cost_values(self):
        assert log_cost(0.0, 0.5) == 0.0
        assert log_cost(0.5 * (math.e - 1), 0.5) == pytest.approx(1.0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidParameterError, match="delta must be > 0"):
            log_cost(1.0, 0.0)
        with pytest.raises(InvalidParameterError, match=">= 0"):
            log_cost(np.array([-1.0]), 1.0)

    def test_distance_wraps_around(self):
        assert torus_distance(np.array([0.1]), np.array([2 * math.pi - 0.1])) == pytest.approx(0.2)
        assert torus_distance(np.array([0.0, 0.0]), np.array([math.pi, math.pi])) == pytest.approx(math.pi * math.sqrt(2))

    def test_cost_is_a_metric(self):
        points = np.random.default_rng(0).random((12, 2)) * 2 * math.pi
        C = cost_matrix(points, points, 0.3)
        np.testing.assert_allclose(np.diag(C), 0.0)
        np.testing.assert_allclose(C, C.T)
        # triangle inequality on every triple
        assert np.all(C[:, None, :] <= C[:, :, None] + C[None, :, :] + 1e-12)


class TestExactTransport:
    """Linear-programming transport against closed forms and brute force."""

    @pytest.mark.parametrize("delta", [0.1, 1.0])
    def test_two_diracs(self, delta):
        result = exact_ot(dirac(0.0, 0.0), dirac(1.0, 0.0), delta)
        assert result.cost == pytest.approx(math.log(1.0 / delta + 1.0), rel=1e-12)
        assert result.gap < 1e-8

    def test_two_diracs_across_the_seam(self):
        result = exact_ot(dirac(0.1, 3.0, mass=2.0), dirac(2 * math.pi - 0.1, 3.0, mass=2.0), 1.0)
        assert result.cost == pytest.approx(2.0 * math.log(1.2), rel=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_vertex_enumeration(self, seed):
        mu, nu = random_instance(seed)
        delta = 0.5
        result = exact_ot(mu, nu, delta)
        expected = vertex_minimum(cost_matrix(mu.points, nu.points, delta), mu.masses, nu.masses)
        assert result.cost == pytest.approx(expected, abs=1e-9)
        assert result.gap < 1e-8
        assert result.marginal_violation < 1e-9
        assert lipschitz_violation(result, mu, nu, delta) <= 1e-12

    def test_mass_mismatch(self):
        with pytest.raises(MassMismatchError, match="total masses differ"):
            exact_ot(dirac(0.0, 0.0), dirac(1.0, 0.0, mass=2.0), 1.0)

    def test_support_limit(self):
        points = np.zeros((2049, 1))
        masses = np.ones(2049)
        with pytest.raises(ResourceLimitError, match="combined support"):
            exact_ot(DiscreteMeasure(points, masses), DiscreteMeasure(points + 1.0, masses), 1.0)


class TestEntropicTransport:
    """Sinkhorn iterations in the log domain."""

    def test_two_diracs(self):
        eps = 1e-3 * math.log(2.0)
        result = entropic_ot(dirac(0.0, 0.0), dirac(1.0, 0.0), 0.5, eps)
        assert result.cost == pytest.approx(math.log(3.0), rel=1e-2)

    def test_convergence_table_is_monotone(self):
        mu, nu = random_instance(7)
        rows = entropic_convergence_table(mu, nu, 0.5, [0.01, 1.0, 0.1, 0.3, 0.03])
        assert [row["eps"] for row in rows] == [1.0, 0.3, 0.1, 0.03, 0.01]
        gaps = [row["gap"] for row in rows]
        for previous, current in zip(gaps, gaps[1:]):
            assert current <= previous + 1e-6
        assert all(gap >= -1e-6 for gap in gaps)
        assert gaps[-1] < 0.05

    def test_rejects_non_positive_eps(self):
        with pytest.raises(InvalidParameterError, match="eps must be > 0"):
            entropic_ot(dirac(0.0, 0.0), dirac(1.0, 0.0), 1.0, 0.0)

    def test_iteration_budget(self):
        mu, nu = random_instance(3)
        with pytest.raises(ConvergenceError) as info:
            entropic_ot(mu, nu, 0.5, 0.01, max_iter=1)
        assert info.value.iterations == 1


class TestMeasures:
    """Signed splitting and box coarsening of grid fields."""

    def test_split_balances_mass(self, line64):
        mu, nu = signed_split(cosine(line64, 1))
        assert mu.total_mass == pytest.approx(nu.total_mass, rel=1e-12)
        assert mu.total_mass == pytest.approx(2.0, rel=1e-2)

    def test_split_of_zero_field(self, line64):
        with pytest.raises(EmptyMeasureError):
            signed_split(PhysicalField(line64, np.zeros(line64.shape)))

    def test_split_needs_mean_free(self, line64):
        with pytest.raises(PreconditionError, match="mean-free"):
            signed_split(PhysicalField(line64, 1.0 + np.cos(line64.coordinates()[0])))

    def test_coarsening_preserves_mass(self, plane32):
        mu, _ = signed_split(cosine(plane32, 3, axis=1))
        coarse, radius = coarsen(mu, plane32, 4)
        assert coarse.size < mu.size
        assert coarse.total_mass == pytest.approx(mu.total_mass)
        assert radius == pytest.approx(2 * plane32.spacing * math.sqrt(2))

    def test_coarsening_factor_must_divide(self, plane32):
        mu, _ = signed_split(cosine(plane32))
        with pytest.raises(InvalidParameterError, match="must divide"):
            coarsen(mu, plane32, 3)


class TestKRDistance:
    """Distance between grid fields through their signed difference."""

    def test_identical_fields(self, cos4):
        assert kr_distance(cos4, cos4, 1.0) == 0.0

    def test_decreases_with_delta(self, line64):
        theta = cosine(line64, 1)
        zero = theta.scaled(0.0)
        assert kr_distance(theta, zero, 0.1) > kr_distance(theta, zero, 1.0)

    def test_coarsening_error_is_bounded(self):
        grid = TorusGrid(d=1, n=32)
        theta = inverse_transform(cosine(grid, 1))
        zero = PhysicalField(grid, np.zeros(grid.shape))
        fine = kr_transport(theta, zero, 1.0)
        coarse = kr_transport(theta, zero, 1.0, max_support=16)
        assert fine.coarsening_factor == 1
        assert coarse.coarsening_factor > 1
        assert coarse.source_support + coarse.target_support <= 16
        mass = signed_split(theta)[0].total_mass
        assert abs(coarse.value - fine.value) <= 2 * mass * log_cost(coarse.coarsening_radius, 1.0)

    def test_entropic_method_is_close(self):
        grid = TorusGrid(d=1, n=32)
        theta = cosine(grid, 1)
        zero = theta.scaled(0.0)
        exact = kr_transport(theta, zero, 1.0)
        entropic = kr_transport(theta, zero, 1.0, method="entropic", eps=1e-2)
        assert entropic.method == "entropic"
        assert entropic.value == pytest.approx(exact.value, rel=5e-2)
        assert entropic.as_dict()["marginal_violation"] < 1e-6

    def test_rejects_unknown_method(self, cos4):
        with pytest.raises(InvalidParameterError, match="unknown transport method"):
            kr_transport(cos4, cos4.scaled(0.0), 1.0, method="greedy")

    def test_rejects_grid_mismatch(self, cos4):
        with pytest.raises(PreconditionError, match="different grids"):
            kr_transport(cos4, cosine(TorusGrid(d=1, n=32)), 1.0)

    def test_l1_interpolation(self, cos4):
        report = check_l1_transport_interpolation(cos4, 1.0, [2.0, 4.0, 8.0], 1.0)
        assert len(report.rows) == 3
        assert report.inputs["l1"] == pytest.approx(4.0, rel=1e-2)
        assert 0.0 < report.minimal_constant < 10.0

    def test_l1_interpolation_needs_ell_two(self, cos4):
        with pytest.raises(InvalidParameterError, match="ell must be >= 2"):
            check_l1_transport_interpolation(cos4, 1.0, [1.5], 1.0)
