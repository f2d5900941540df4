"""Kantorovich–Rubinstein transport with logarithmic cost on the torus."""

from .cost import cost_matrix, log_cost, torus_distance
from .distance import KRDistance, check_l1_transport_interpolation, kr_distance, kr_transport
from .entropic import entropic_convergence_table, entropic_ot
from .exact import OTResult, TransportPlan, exact_ot, lipschitz_violation
from .measures import DiscreteMeasure, coarsen, signed_split

__all__ = [
    "DiscreteMeasure",
    "KRDistance",
    "OTResult",
    "TransportPlan",
    "check_l1_transport_interpolation",
    "coarsen",
    "cost_matrix",
    "entropic_convergence_table",
    "entropic_ot",
    "exact_ot",
    "kr_distance",
    "kr_transport",
    "lipschitz_violation",
    "log_cost",
    "signed_split",
    "torus_distance",
]
