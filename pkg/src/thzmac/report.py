"""Tabular outputs: the two-method KPI comparison and single-run KPI rows.

Pure formatting over :func:`thzmac.scoring.kpi_report`; no number computed
here that is not re-derivable from the KPI record.
"""

from __future__ import annotations

import io

from .scoring import Assignment, KPIReport, kpi_report
from .topology import Snapshot

KPI_COLUMNS = ("Allocated", "Unblocked Links", "Links with 1 Partial Blocker",
               "Used", "Capacity Respected", "Capacity Overloaded",
               "Average UEs per AP", "Avg Overload Pct")


def _kpi_cells(kpi: KPIReport) -> list[str]:
    return [str(kpi.allocated), str(kpi.unblocked_links),
            str(kpi.links_with_1_blocker), str(kpi.aps_used),
            str(kpi.capacity_respected), str(kpi.capacity_overloaded),
            f"{kpi.avg_ues_per_used_ap:.2f}", f"{kpi.avg_overload_pct:.2f}"]


def kpi_csv(snapshot: Snapshot, assignment: Assignment) -> str:
    """One-row KPI CSV for a single assignment."""
    kpi = kpi_report(snapshot, assignment)
    out = io.StringIO()
    out.write(",".join(KPI_COLUMNS) + "\n")
    out.write(",".join(_kpi_cells(kpi)) + "\n")
    return out.getvalue()


def table1(snapshot: Snapshot, solver_assignment: Assignment,
           ml_assignment: Assignment) -> str:
    """Metaheuristics-vs-ML KPI comparison CSV (percentages to 2 decimals)."""
    out = io.StringIO()
    out.write("Method," + ",".join(KPI_COLUMNS) + "\n")
    for method, assignment in (("Metaheuristics", solver_assignment),
                               ("ML", ml_assignment)):
        kpi = kpi_report(snapshot, assignment)
        out.write(",".join([method] + _kpi_cells(kpi)) + "\n")
    return out.getvalue()
