import numpy as np

from thzmac.report import KPI_COLUMNS, kpi_csv, table1
from thzmac.scoring import Assignment, kpi_report
from thzmac.topology import SnapshotConfig, generate_snapshot


def test_identical_assignments_identical_rows(desk_snapshot):
    asg = Assignment.from_clustering(desk_snapshot)
    text = table1(desk_snapshot, asg, asg)
    lines = text.strip().split("\n")
    assert len(lines) == 3
    meta = lines[1].split(",", 1)[1]
    ml = lines[2].split(",", 1)[1]
    assert meta == ml
    assert lines[1].startswith("Metaheuristics,")
    assert lines[2].startswith("ML,")


def test_cells_re_derivable_from_kpi(desk_snapshot):
    rng = np.random.default_rng(1)
    asg = Assignment(desk_snapshot,
                     rng.integers(0, desk_snapshot.n_aps, desk_snapshot.n_ues))
    kpi = kpi_report(desk_snapshot, asg)
    row = kpi_csv(desk_snapshot, asg).strip().split("\n")[1].split(",")
    assert row[0] == str(kpi.allocated)
    assert row[3] == str(kpi.aps_used)
    assert row[6] == f"{kpi.avg_ues_per_used_ap:.2f}"
    assert row[7] == f"{kpi.avg_overload_pct:.2f}"


def test_header_matches_expected_columns(desk_snapshot):
    asg = Assignment.from_clustering(desk_snapshot)
    header = kpi_csv(desk_snapshot, asg).split("\n")[0]
    assert header == ",".join(KPI_COLUMNS)
    assert "Capacity Respected" in header


def test_percentages_two_decimals():
    snap = generate_snapshot(SnapshotConfig(area_km2=0.02, n_aps=2, n_ues=10,
                                            seed=3, capacity_range=(20, 30)))
    asg = Assignment(snap, np.zeros(10, dtype=np.int64))
    row = kpi_csv(snap, asg).strip().split("\n")[1].split(",")
    assert len(row[7].split(".")[-1]) == 2
