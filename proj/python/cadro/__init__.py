"""Certified data-driven distributionally robust optimization.

Thin Python surface over the C++ core: facility-instance generation, the
certified pipeline and baseline runners, the worst-case oracles, and the
confidence-bound / radius calibrations.
"""

try:
    from ._cadro import *  # noqa: F401,F403  (installed package layout)
    from ._cadro import __doc__ as _core_doc  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _cadro import *  # noqa: F401,F403
    from _cadro import __doc__ as _core_doc  # noqa: F401

__all__ = [
    "FacilityInstance",
    "generate_instance",
    "save_instance",
    "load_instance",
    "eval_costs",
    "transport_cost_matrix",
    "run",
    "tau_schedule",
    "cadro_worst_case",
    "tv_worst_case",
    "kl_worst_case",
    "w_worst_case",
    "hoeffding_radius",
    "gamma_value",
    "mean_bound",
    "tv_radius",
    "kl_radius",
    "w_radius",
]
