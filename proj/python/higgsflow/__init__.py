"""Hermitian metrics on Higgs bundles over flat Kahler tori.

Thin wrapper over the C++ core: scenario catalog, functional evaluation,
identity verification, and the descent flow toward Hermite-Yang-Mills
metrics. Scenario documents are JSON strings; see ``catalog_scenario`` for
the schema.
"""

from higgsflow._core import (
    catalog,
    catalog_scenario,
    degree,
    first_variation,
    flow,
    functional_report,
    mean_curvature,
    verify,
)

__all__ = [
    "catalog",
    "catalog_scenario",
    "degree",
    "first_variation",
    "flow",
    "functional_report",
    "mean_curvature",
    "verify",
]
