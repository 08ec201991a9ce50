import dataclasses
import logging
from pathlib import Path

import numpy as np
import pytest

import tconverge.engine as engine
from tconverge import (
    CellRunError,
    CellSpec,
    ConfigError,
    ContractViolation,
    cell_identifier,
    expand_grid,
    lookup,
    read_results,
    run_cell,
    run_grid,
)
from tconverge.engine import RESULTS_HEADER, _result_to_row, _row_to_result, write_canonical

NORMAL = lookup("normal")
UNIFORM = lookup("uniform")
LAPLACE = lookup("laplace")


def small_cell(n=6, R=50, B=3, y=NORMAL, x=UNIFORM, z=None):
    return CellSpec(y_dist=y, x_dist=x, z_dist=z, n=n, R=R, B=B)


def mask_elapsed(csv_text: str) -> str:
    lines = csv_text.strip().split("\n")
    col = RESULTS_HEADER.index("elapsed_ms")
    out = []
    for line in lines:
        parts = line.split(",")
        parts[col] = "-"
        out.append(",".join(parts))
    return "\n".join(out)


def test_cell_identifier_is_stable_and_sensitive():
    assert cell_identifier("normal", "uniform", None, 10, 100, 50) == 1900005232020866566
    assert cell_identifier("normal", "uniform", "laplace", 10, 100, 50) == 17897666944609313620
    base = cell_identifier("normal", "uniform", None, 10, 100, 50)
    assert cell_identifier("uniform", "normal", None, 10, 100, 50) != base
    assert cell_identifier("normal", "uniform", None, 11, 100, 50) != base
    assert cell_identifier("normal", "uniform", None, 10, 101, 50) != base
    assert cell_identifier("normal", "uniform", None, 10, 100, 51) != base


def test_cellspec_validates_sizes():
    with pytest.raises(ContractViolation):
        small_cell(n=3)
    with pytest.raises(ContractViolation):
        small_cell(n=4, z=LAPLACE)
    with pytest.raises(ContractViolation):
        small_cell(R=1)
    with pytest.raises(ContractViolation):
        small_cell(B=0)
    assert small_cell(n=4).cell_id != 0
    assert small_cell(n=5, z=LAPLACE).z_dist is LAPLACE


def test_run_cell_smallest_size_and_determinism():
    spec = CellSpec(y_dist=NORMAL, x_dist=UNIFORM, z_dist=None, n=4, R=2, B=1)
    a = run_cell(spec, master_seed=9)
    b = run_cell(spec, master_seed=9)
    assert dataclasses.replace(a, elapsed_ms=0) == dataclasses.replace(b, elapsed_ms=0)
    assert a.type1_rate_x in (0.0, 0.5, 1.0)  # 2 regressions total
    assert a.ad_reject_rate in (0.0, 1.0)  # single repeat
    assert a.z_dist is None and a.type1_rate_z is None
    c = run_cell(spec, master_seed=10)
    assert dataclasses.replace(a, elapsed_ms=0) != dataclasses.replace(c, elapsed_ms=0)


def test_run_cell_with_second_regressor():
    spec = CellSpec(y_dist=NORMAL, x_dist=UNIFORM, z_dist=LAPLACE, n=8, R=40, B=4)
    r = run_cell(spec, master_seed=3)
    assert r.z_dist == "laplace"
    assert r.type1_rate_z is not None
    assert 0.0 <= r.type1_rate_z <= 1.0
    assert r.master_seed == 3
    assert r.n == 8 and r.R == 40 and r.B == 4


def test_run_cell_redraws_degenerate_rows(monkeypatch):
    real = engine.fit_simple_batch
    forced = {"left": 2}

    def flaky(Y, X):
        t, ok = real(Y, X)
        if forced["left"] > 0 and ok.all():
            forced["left"] -= 1
            ok = ok.copy()
            ok[0] = False
        return t, ok

    monkeypatch.setattr(engine, "fit_simple_batch", flaky)
    r = run_cell(small_cell(R=20, B=2), master_seed=4)
    assert r.redraw_count == 2
    assert 0.0 <= r.ad_reject_rate <= 1.0


def test_run_cell_redraw_budget_is_enforced(monkeypatch):
    def always_bad(Y, X):
        return np.zeros(Y.shape[0]), np.zeros(Y.shape[0], dtype=bool)

    monkeypatch.setattr(engine, "fit_simple_batch", always_bad)
    with pytest.raises(CellRunError, match="redraw budget"):
        run_cell(small_cell(R=2, B=1), master_seed=4)


def test_expand_grid_order_and_uniqueness():
    cells = expand_grid([NORMAL, UNIFORM], [LAPLACE], None, [4, 10], R=10, B=2)
    assert [(c.y_dist.label, c.n) for c in cells] == [
        ("normal", 4),
        ("normal", 10),
        ("uniform", 4),
        ("uniform", 10),
    ]
    assert len({c.cell_id for c in cells}) == 4
    tri = expand_grid([NORMAL], [UNIFORM], [LAPLACE, NORMAL], [6], R=10, B=2)
    assert [c.z_dist.label for c in tri] == ["laplace", "normal"]
    with pytest.raises(ConfigError, match="duplicate"):
        expand_grid([NORMAL, NORMAL], [UNIFORM], None, [4], R=10, B=2)


def test_result_row_roundtrip():
    cells = [small_cell(), small_cell(n=8, z=LAPLACE)]
    for c in cells:
        r = run_cell(c, master_seed=1)
        assert _row_to_result(_result_to_row(r)) == r


def test_row_parsing_rejects_malformed_rows():
    r = run_cell(small_cell(), master_seed=1)
    row = _result_to_row(r)
    with pytest.raises(ValueError):
        _row_to_result(row[:-1])  # short row
    bad = list(row)
    bad[7] = "not-a-number"
    with pytest.raises(ValueError):
        _row_to_result(bad)
    bad = list(row)
    bad[8] = "1.5"  # rate outside [0, 1]
    with pytest.raises(ValueError):
        _row_to_result(bad)


def test_run_grid_writes_canonical_csv(tmp_path):
    path = tmp_path / "out.csv"
    cells = expand_grid([NORMAL, UNIFORM], [UNIFORM], None, [4, 6], R=20, B=2)
    summary = run_grid(cells, master_seed=5, results_path=path)
    assert summary.cells_total == 4 and summary.cells_run == 4
    assert summary.cells_skipped == 0
    results, dropped = read_results(path)
    assert dropped == 0
    assert set(results) == {c.cell_id for c in cells}
    text = path.read_text()
    assert text.startswith(",".join(RESULTS_HEADER))
    ids = [int(line.split(",")[0]) for line in text.strip().split("\n")[1:]]
    assert ids == sorted(ids)


def test_run_grid_resume_skips_done_cells(tmp_path):
    path = tmp_path / "r.csv"
    cells = expand_grid([NORMAL], [UNIFORM, LAPLACE], None, [4, 6], R=20, B=2)
    run_grid(cells, master_seed=7, results_path=path)
    full = mask_elapsed(path.read_text())

    # drop two rows to simulate a killed run
    lines = path.read_text().strip().split("\n")
    path.write_text("\n".join(lines[:3]) + "\n")
    summary = run_grid(cells, master_seed=7, results_path=path, resume=True)
    assert summary.cells_skipped == 2 and summary.cells_run == 2
    assert mask_elapsed(path.read_text()) == full


def test_run_grid_resume_reruns_corrupt_rows(tmp_path, caplog):
    path = tmp_path / "c.csv"
    cells = expand_grid([NORMAL], [UNIFORM], None, [4, 6], R=20, B=2)
    run_grid(cells, master_seed=2, results_path=path)
    full = mask_elapsed(path.read_text())

    lines = path.read_text().strip().split("\n")
    parts = lines[1].split(",")
    parts[7] = "garbage"
    lines[1] = ",".join(parts)
    path.write_text("\n".join(lines) + "\n")
    with caplog.at_level(logging.WARNING):
        summary = run_grid(cells, master_seed=2, results_path=path, resume=True)
    assert summary.cells_run == 1 and summary.cells_skipped == 1
    assert "corrupt" in caplog.text
    assert mask_elapsed(path.read_text()) == full


def test_run_grid_fresh_run_overwrites(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("junk that is not a results file\n")
    cells = [small_cell()]
    run_grid(cells, master_seed=1, results_path=path)
    results, dropped = read_results(path)
    assert dropped == 0 and len(results) == 1


def test_run_grid_worker_count_is_invisible(tmp_path):
    cells = expand_grid([NORMAL, LAPLACE], [UNIFORM], None, [4, 8], R=20, B=2)
    p1 = tmp_path / "w1.csv"
    p3 = tmp_path / "w3.csv"
    run_grid(cells, master_seed=11, results_path=p1, workers=1)
    run_grid(cells, master_seed=11, results_path=p3, workers=3)
    assert mask_elapsed(p1.read_text()) == mask_elapsed(p3.read_text())


def test_run_grid_rejects_bad_paths_and_workers(tmp_path):
    cells = [small_cell()]
    with pytest.raises(CellRunError, match="directory"):
        run_grid(cells, master_seed=1, results_path=tmp_path / "nope" / "x.csv")
    with pytest.raises(ConfigError):
        run_grid(cells, master_seed=1, results_path=tmp_path / "x.csv", workers=0)


def test_write_canonical_sorts_and_replaces(tmp_path):
    path = tmp_path / "s.csv"
    rs = [run_cell(small_cell(n=n), master_seed=1) for n in (4, 6, 8)]
    write_canonical(path, list(reversed(rs)))
    results, dropped = read_results(path)
    assert dropped == 0
    assert list(results) == sorted(r.cell_id for r in rs)


def test_null_calibration_with_normal_response():
    # a normal y makes the slope t exactly t(n-2) whatever x is, so the
    # fit test should reject at close to its nominal level even against
    # the heaviest regressor in the catalog
    for n in (5, 40):
        spec = CellSpec(y_dist=NORMAL, x_dist=lookup("lognormal_2"), z_dist=None, n=n, R=300, B=150)
        r = run_cell(spec, master_seed=31)
        assert abs(r.ad_reject_rate - 0.05) <= 0.06, (n, r.ad_reject_rate)
        assert abs(r.type1_rate_x - 0.05) <= 0.01, (n, r.type1_rate_x)
