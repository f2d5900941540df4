"""Transforms, operators and snapshot files on the torus grid."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from errors import EmitError, InvalidExponentError, NonFiniteFieldError, SnapshotFormatError, SymmetryViolationError
from spectral import (
    PhysicalField,
    SpectralField,
    TorusGrid,
    dealias,
    dealiased_product,
    divergence_residual,
    forward_transform,
    gradient,
    inner_product,
    inverse_transform,
    laplacian,
    lq_norm,
    parseval_l2,
    project_divergence_free,
    read_snapshot,
    remove_mean,
    vector_from_values,
    write_snapshot,
)
from spectral.snapshot import decode_snapshot, encode_snapshot

from conftest import cosine, random_field


class TestTorusGrid:
    """Grid validation and geometry."""

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValidationError, match="power of two"):
            TorusGrid(d=1, n=48)

    def test_rejects_three_dimensions(self):
        with pytest.raises(ValidationError):
            TorusGrid(d=3, n=16)

    def test_geometry(self, plane32):
        assert plane32.shape == (32, 32)
        assert plane32.size == 1024
        assert plane32.spacing == pytest.approx(2 * math.pi / 32)
        assert plane32.volume == pytest.approx(4 * math.pi**2)
        assert plane32.points().shape == (1024, 2)

    def test_wavenumbers_in_fft_order(self, line64):
        (k,) = line64.wavenumbers()
        assert k[1] == 1
        assert k[-1] == -1
        assert k[32] == -32


class TestTransforms:
    """Forward and inverse FFT with averaged coefficients."""

    def test_cosine_coefficients(self, cos4):
        coeffs = cos4.coeffs
        assert coeffs[4] == pytest.approx(0.5)
        assert coeffs[-4] == pytest.approx(0.5)
        np.testing.assert_allclose(np.delete(coeffs, [4, 60]), 0.0, atol=1e-14)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_physical_field_rejects_non_finite_samples(self, line64, bad):
        values = np.cos(line64.coordinates()[0])
        values[7] = bad
        with pytest.raises(NonFiniteFieldError, match="1 NaN or inf"):
            PhysicalField(line64, values)

    def test_inverse_recovers_samples(self, plane32):
        F = random_field(plane32, seed=3)
        values = inverse_transform(F).values
        np.testing.assert_allclose(forward_transform(PhysicalField(plane32, values)).coeffs, F.coeffs, atol=1e-14)

    def test_rejects_non_hermitian_coefficients(self, line64):
        coeffs = np.zeros(line64.shape, dtype=complex)
        coeffs[1] = 1j
        with pytest.raises(SymmetryViolationError, match="Hermitian"):
            inverse_transform(SpectralField(line64, coeffs))

    def test_parseval_matches_quadrature(self, plane32):
        F = random_field(plane32, seed=5)
        assert parseval_l2(F) == pytest.approx(lq_norm(F, 2.0), rel=1e-12)

    def test_norms_of_cosine(self, cos4):
        assert lq_norm(cos4, 2.0) == pytest.approx(math.sqrt(math.pi))
        assert lq_norm(cos4, math.inf) == pytest.approx(1.0)
        assert parseval_l2(cos4) == pytest.approx(math.sqrt(math.pi))

    def test_exponent_below_one(self, cos4):
        with pytest.raises(InvalidExponentError, match="exponent"):
            lq_norm(cos4, 0.5)

    def test_remove_mean_keeps_field_type(self, line64):
        shifted = PhysicalField(line64, 1.0 + np.cos(line64.coordinates()[0]))
        centred = remove_mean(shifted)
        assert isinstance(centred, PhysicalField)
        assert centred.mean == pytest.approx(0.0, abs=1e-15)


class TestOperators:
    """Differentiation, dealiasing and projection."""

    def test_gradient_of_sine(self, line64):
        x = line64.coordinates()[0]
        F = forward_transform(PhysicalField(line64, np.sin(3 * x)))
        (dx,) = gradient(F)
        np.testing.assert_allclose(inverse_transform(dx).values, 3 * np.cos(3 * x), atol=1e-12)

    def test_laplacian_of_cosine(self, cos4):
        np.testing.assert_allclose(laplacian(cos4).coeffs, -16 * cos4.coeffs, atol=1e-14)

    def test_gradient_drops_nyquist(self, line64):
        x = line64.coordinates()[0]
        F = forward_transform(PhysicalField(line64, np.cos(32 * x)))
        (dx,) = gradient(F)
        np.testing.assert_allclose(dx.coeffs, 0.0, atol=1e-14)

    def test_two_thirds_rule(self, line64):
        kept = cosine(line64, 21)
        dropped = cosine(line64, 22)
        np.testing.assert_allclose(dealias(kept).coeffs, kept.coeffs, atol=1e-15)
        np.testing.assert_allclose(dealias(dropped).coeffs, 0.0, atol=1e-15)

    def test_dealiased_product(self, line64):
        x = line64.coordinates()[0]
        product = dealiased_product(cosine(line64, 2), cosine(line64, 3))
        np.testing.assert_allclose(inverse_transform(product).values, 0.5 * (np.cos(x) + np.cos(5 * x)), atol=1e-13)

    def test_projection_is_divergence_free(self, plane32):
        rng = np.random.default_rng(11)
        v = vector_from_values(plane32, rng.standard_normal((2, 32, 32)))
        assert divergence_residual(v) > 1e-3
        projected = project_divergence_free(v)
        assert projected.divergence_free
        assert divergence_residual(projected) <= 1e-12

    def test_inner_product(self, cos4, line64):
        assert inner_product(cos4, cos4) == pytest.approx(math.pi)
        assert inner_product(cos4, cosine(line64, 5)) == pytest.approx(0.0, abs=1e-13)


class TestSnapshots:
    """LPTF snapshot files."""

    def test_write_then_read(self, tmp_path, plane32):
        field = inverse_transform(random_field(plane32, seed=2))
        path = write_snapshot(tmp_path / "theta.lptf", field)
        loaded = read_snapshot(path)
        assert loaded.grid == plane32
        np.testing.assert_array_equal(loaded.values, field.values)

    def test_bad_magic(self, line64):
        payload = bytearray(encode_snapshot(inverse_transform(cosine(line64))))
        payload[:4] = b"XXXX"
        with pytest.raises(SnapshotFormatError, match="bad magic"):
            decode_snapshot(bytes(payload))

    def test_bad_version(self, line64):
        payload = bytearray(encode_snapshot(inverse_transform(cosine(line64))))
        payload[4] = 2
        with pytest.raises(SnapshotFormatError, match="unsupported"):
            decode_snapshot(bytes(payload))

    def test_truncated_payload(self, line64):
        payload = encode_snapshot(inverse_transform(cosine(line64)))
        with pytest.raises(SnapshotFormatError, match="expected"):
            decode_snapshot(payload[:-8])

    def test_short_header(self):
        with pytest.raises(SnapshotFormatError, match="header"):
            decode_snapshot(b"LPTF")

    def test_missing_file(self, tmp_path):
        with pytest.raises(EmitError) as info:
            read_snapshot(tmp_path / "missing.lptf")
        assert info.value.path.endswith("missing.lptf")
