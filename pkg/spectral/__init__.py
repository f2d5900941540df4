"""Torus grids, fields and spectral operators."""

from .fields import PhysicalField, SpectralField, VectorField
from .grid import TorusGrid
from .ops import (
    as_physical,
    as_spectral,
    certify,
    dealias,
    dealiased_product,
    divergence,
    divergence_residual,
    forward_transform,
    gradient,
    inner_product,
    inverse_transform,
    laplacian,
    lq_norm,
    parseval_l2,
    project_divergence_free,
    remove_mean,
    vector_from_values,
    vector_values,
)
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    "TorusGrid",
    "PhysicalField",
    "SpectralField",
    "VectorField",
    "as_physical",
    "as_spectral",
    "certify",
    "dealias",
    "dealiased_product",
    "divergence",
    "divergence_residual",
    "forward_transform",
    "gradient",
    "inner_product",
    "inverse_transform",
    "laplacian",
    "lq_norm",
    "parseval_l2",
    "project_divergence_free",
    "remove_mean",
    "vector_from_values",
    "vector_values",
    "read_snapshot",
    "write_snapshot",
]
