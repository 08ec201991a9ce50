"""Acceptance gate.

One test per required behavior, each at its stated tolerance; running
``pytest -v tests/test_acceptance.py`` prints one pass/fail line per
criterion.  Everything is deterministic under MASTER below; assertion
messages carry the measured values.
"""

import time
from pathlib import Path

import pytest

from tconverge import CellSpec, lookup, run_cell, run_grid
from tconverge.check import gof_calibration_check, moment_check, ols_oracle_check
from tconverge.cli import main
from tconverge.config import default_config, build_cells
from tconverge.engine import RESULTS_HEADER, expand_grid

MASTER = 20260819


def run_one(y, x, n, R, B, z=None):
    spec = CellSpec(
        y_dist=lookup(y),
        x_dist=lookup(x),
        z_dist=lookup(z) if z else None,
        n=n,
        R=R,
        B=B,
    )
    return run_cell(spec, MASTER)


def mask_elapsed(text: str) -> str:
    col = RESULTS_HEADER.index("elapsed_ms")
    out = []
    for line in text.strip().split("\n"):
        parts = line.split(",")
        parts[col] = "-"
        out.append(",".join(parts))
    return "\n".join(out)


def test_a01_moment_table_matches_reference_to_two_decimals():
    started = time.perf_counter()
    outcome = moment_check()
    elapsed = time.perf_counter() - started
    assert outcome.ok, outcome.detail
    assert elapsed < 1.0, f"moment table took {elapsed:.2f}s"


def test_a02_fits_agree_with_extended_precision_oracle():
    started = time.perf_counter()
    outcome = ols_oracle_check(instances=10_000)
    elapsed = time.perf_counter() - started
    assert outcome.ok, outcome.detail
    assert elapsed < 10.0, f"oracle comparison took {elapsed:.1f}s"


def test_a03_gof_tests_hold_their_level_on_exact_null_draws():
    started = time.perf_counter()
    outcome = gof_calibration_check(B=500, m=1000, df=28)
    elapsed = time.perf_counter() - started
    assert outcome.ok, outcome.detail
    assert elapsed < 60.0, f"calibration took {elapsed:.1f}s"


@pytest.mark.parametrize("pair", [("normal", "normal"), ("uniform", "laplace")])
@pytest.mark.parametrize("n", [4, 10, 30])
def test_a04_light_tail_pairs_stay_calibrated(pair, n):
    y, x = pair
    r = run_one(y, x, n, R=1000, B=500)
    assert abs(r.ad_reject_rate - 0.05) <= 0.03, (
        f"{y} x {x} n={n}: ad rejection {r.ad_reject_rate:.3f} outside 0.05 +/- 0.03"
    )


def test_a05_bimodal_beta_pair_breaks_at_n4_and_recovers_by_n8():
    r4 = run_one("beta_0.1_0.1", "beta_0.1_0.1", 4, R=1000, B=500)
    assert r4.ad_reject_rate > 0.15, f"n=4 ad rejection {r4.ad_reject_rate:.3f} <= 0.15"
    r8 = run_one("beta_0.1_0.1", "beta_0.1_0.1", 8, R=1000, B=500)
    assert abs(r8.ad_reject_rate - 0.05) <= 0.03, (
        f"n=8 ad rejection {r8.ad_reject_rate:.3f} outside 0.05 +/- 0.03"
    )


def test_a06_heavy_lognormal_pair_still_detected_at_n_1000():
    r = run_one("lognormal_2", "lognormal_2", 1000, R=1000, B=200)
    assert r.ad_reject_rate > 0.9, f"ad rejection {r.ad_reject_rate:.3f} <= 0.9"


def test_a07_type_one_error_sits_near_six_percent_at_n_30():
    r = run_one("lognormal_2", "lognormal_2", 30, R=1000, B=500)
    assert abs(r.type1_rate_x - 0.06) <= 0.01, (
        f"type-I rate {r.type1_rate_x:.4f} outside 0.06 +/- 0.01"
    )


@pytest.mark.parametrize("n", [10, 30])
def test_a08_second_regressor_shape_leaves_fit_rates_unchanged(n):
    a = run_one("normal", "lognormal_1", n, R=1000, B=200, z="normal")
    b = run_one("normal", "lognormal_1", n, R=1000, B=200, z="lognormal_1")
    delta = abs(a.ad_reject_rate - b.ad_reject_rate)
    assert delta < 0.05, (
        f"n={n}: ad rejection moved by {delta:.3f} when z changed shape "
        f"({a.ad_reject_rate:.3f} vs {b.ad_reject_rate:.3f})"
    )


def preset_n_values():
    from tconverge.config import resolve_n_values

    return resolve_n_values(default_config())


def test_a09_results_are_identical_across_worker_counts(tmp_path):
    cells = expand_grid(
        [lookup("normal"), lookup("lognormal_2")],
        [lookup("uniform"), lookup("beta_0.1_0.1")],
        None,
        preset_n_values(),
        R=20,
        B=5,
    )
    assert len(cells) == 216
    p1 = tmp_path / "workers1.csv"
    p8 = tmp_path / "workers8.csv"
    s1 = run_grid(cells, master_seed=MASTER, results_path=p1, workers=1)
    s8 = run_grid(cells, master_seed=MASTER, results_path=p8, workers=8)
    assert s1.cells_run == s8.cells_run == 216
    assert mask_elapsed(p1.read_text()) == mask_elapsed(p8.read_text())


def test_a10_default_grid_expands_to_6534_cells(capsys):
    cells = build_cells(default_config())
    assert len(cells) == 6534
    assert len({c.cell_id for c in cells}) == 6534
    assert len({c.n for c in cells}) == 54
    assert len({(c.y_dist.label, c.x_dist.label) for c in cells}) == 121
    assert main(["expand"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 6534
