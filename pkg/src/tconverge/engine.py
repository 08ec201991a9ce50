"""Grid expansion, deterministic cell execution, CSV checkpointing.

A cell is one (y_dist, x_dist[, z_dist], n) combination run for B outer
repeats of R regressions each.  Every repeat of every cell draws from its
own stream seeded by (master_seed, cell_id, repeat), so results do not
depend on worker count, scheduling, or resume boundaries.

Results stream to an append-only CSV as cells finish; on successful
completion the file is rewritten in canonical order (sorted by cell_id).
A resumed run parses the existing file, drops corrupt rows with a warning,
and re-runs whatever is missing.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import DistributionSpec, draw, theoretical_moments
from .errors import CellRunError, ConfigError, ContractViolation
from .gof import evaluate_pit
from .regression import fit_simple_batch, fit_two_batch, t_cdf
from .rng import derive_seed, make_stream

log = logging.getLogger(__name__)

RESULTS_HEADER = (
    "cell_id",
    "y_dist",
    "x_dist",
    "z_dist",
    "n",
    "R",
    "B",
    "ad_reject_rate",
    "cvm_reject_rate",
    "ks_reject_rate",
    "type1_rate_x",
    "type1_rate_z",
    "redraw_count",
    "clamp_count",
    "elapsed_ms",
    "master_seed",
)

# give up on a cell once redrawn rows exceed this multiple of R
_REDRAW_BUDGET_PER_R = 100


def cell_identifier(
    y_label: str, x_label: str, z_label: str | None, n: int, R: int, B: int
) -> int:
    """Stable 64-bit id of a cell, from its labels and sizes."""
    key = f"{y_label}|{x_label}|{z_label or ''}|{n}|{R}|{B}"
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class CellSpec:
    """One grid point.  ``z_dist`` is None for the bivariate design."""

    y_dist: DistributionSpec
    x_dist: DistributionSpec
    z_dist: DistributionSpec | None
    n: int
    R: int = 1000
    B: int = 500
    cell_id: int = 0

    def __post_init__(self) -> None:
        n_min = 5 if self.z_dist is not None else 4
        if self.n < n_min:
            raise ContractViolation(
                f"n must be >= {n_min} for this design, got {self.n}"
            )
        if self.R < 2:
            raise ContractViolation(f"R must be >= 2, got {self.R}")
        if self.B < 1:
            raise ContractViolation(f"B must be >= 1, got {self.B}")
        object.__setattr__(
            self,
            "cell_id",
            cell_identifier(
                self.y_dist.label,
                self.x_dist.label,
                self.z_dist.label if self.z_dist is not None else None,
                self.n,
                self.R,
                self.B,
            ),
        )


@dataclass(frozen=True)
class CellResult:
    """Aggregated outcome of one cell.

    Rejection rates are fractions of the B repeats whose batch-level
    goodness-of-fit p-value fell at or below alpha; Type-I rates are
    fractions of all B*R regressions whose slope test rejected at alpha.
    """

    cell_id: int
    y_dist: str
    x_dist: str
    z_dist: str | None
    n: int
    R: int
    B: int
    ad_reject_rate: float
    cvm_reject_rate: float
    ks_reject_rate: float
    type1_rate_x: float
    type1_rate_z: float | None
    redraw_count: int
    clamp_count: int
    elapsed_ms: int
    master_seed: int


def run_cell(spec: CellSpec, master_seed: int, alpha: float = 0.05) -> CellResult:
    """Execute one cell deterministically under ``master_seed``."""
    started = time.perf_counter()
    n, R, B = spec.n, spec.R, spec.B
    with_z = spec.z_dist is not None
    df = n - (3 if with_z else 2)
    y_mean = theoretical_moments(spec.y_dist).mean
    half_alpha = alpha / 2.0
    redraw_budget = _REDRAW_BUDGET_PER_R * R

    ad_hits = cvm_hits = ks_hits = 0
    rej_x = rej_z = 0
    redraws = 0
    clamps = 0

    for b in range(B):
        stream = make_stream(derive_seed(master_seed, spec.cell_id, b))
        Y = draw(spec.y_dist, (R, n), stream) - y_mean
        X = draw(spec.x_dist, (R, n), stream)
        Z = draw(spec.z_dist, (R, n), stream) if with_z else None

        if with_z:
            t_x, t_z, ok = fit_two_batch(Y, X, Z)
        else:
            t_x, ok = fit_simple_batch(Y, X)
            t_z = None

        while not ok.all():
            bad = np.flatnonzero(~ok)
            redraws += bad.size
            if redraws > redraw_budget:
                raise CellRunError(
                    f"cell {spec.y_dist.label} x {spec.x_dist.label} n={n}: "
                    f"redraw budget ({redraw_budget}) exceeded"
                )
            Y[bad] = draw(spec.y_dist, (bad.size, n), stream) - y_mean
            X[bad] = draw(spec.x_dist, (bad.size, n), stream)
            if with_z:
                Z[bad] = draw(spec.z_dist, (bad.size, n), stream)
                sub_x, sub_z, sub_ok = fit_two_batch(Y[bad], X[bad], Z[bad])
                t_z[bad] = sub_z
            else:
                sub_x, sub_ok = fit_simple_batch(Y[bad], X[bad])
            t_x[bad] = sub_x
            ok[bad] = sub_ok

        u = t_cdf(t_x, df)
        rej_x += int(np.count_nonzero(np.minimum(u, 1.0 - u) <= half_alpha))
        if with_z:
            uz = t_cdf(t_z, df)
            rej_z += int(np.count_nonzero(np.minimum(uz, 1.0 - uz) <= half_alpha))

        report = evaluate_pit(u, df)
        clamps += report.n_clamped
        ad_hits += report.p_ad <= alpha
        cvm_hits += report.p_cvm <= alpha
        ks_hits += report.p_ks <= alpha

    elapsed_ms = int(round((time.perf_counter() - started) * 1000.0))
    total = B * R
    return CellResult(
        cell_id=spec.cell_id,
        y_dist=spec.y_dist.label,
        x_dist=spec.x_dist.label,
        z_dist=spec.z_dist.label if with_z else None,
        n=n,
        R=R,
        B=B,
        ad_reject_rate=ad_hits / B,
        cvm_reject_rate=cvm_hits / B,
        ks_reject_rate=ks_hits / B,
        type1_rate_x=rej_x / total,
        type1_rate_z=(rej_z / total) if with_z else None,
        redraw_count=redraws,
        clamp_count=clamps,
        elapsed_ms=elapsed_ms,
        master_seed=master_seed,
    )


def expand_grid(
    y_dists: list[DistributionSpec],
    x_dists: list[DistributionSpec],
    z_dists: list[DistributionSpec] | None,
    n_values: list[int],
    R: int,
    B: int,
) -> list[CellSpec]:
    """All (y, x[, z], n) combinations, in listing order."""
    cells: list[CellSpec] = []
    zs: list[DistributionSpec | None] = list(z_dists) if z_dists else [None]
    for y in y_dists:
        for x in x_dists:
            for z in zs:
                for n in n_values:
                    cells.append(CellSpec(y_dist=y, x_dist=x, z_dist=z, n=n, R=R, B=B))
    ids = {c.cell_id for c in cells}
    if len(ids) != len(cells):
        raise ConfigError("grid contains duplicate cells")
    return cells


def _result_to_row(r: CellResult) -> list[str]:
    return [
        str(r.cell_id),
        r.y_dist,
        r.x_dist,
        r.z_dist or "",
        str(r.n),
        str(r.R),
        str(r.B),
        repr(r.ad_reject_rate),
        repr(r.cvm_reject_rate),
        repr(r.ks_reject_rate),
        repr(r.type1_rate_x),
        "" if r.type1_rate_z is None else repr(r.type1_rate_z),
        str(r.redraw_count),
        str(r.clamp_count),
        str(r.elapsed_ms),
        str(r.master_seed),
    ]


def _row_to_result(row: list[str]) -> CellResult:
    if len(row) != len(RESULTS_HEADER):
        raise ValueError(f"expected {len(RESULTS_HEADER)} fields, got {len(row)}")
    rates = [float(row[i]) for i in range(7, 11)]
    if any(not (0.0 <= v <= 1.0) for v in rates):
        raise ValueError("rate outside [0, 1]")
    t1z = None if row[11] == "" else float(row[11])
    if t1z is not None and not (0.0 <= t1z <= 1.0):
        raise ValueError("rate outside [0, 1]")
    return CellResult(
        cell_id=int(row[0]),
        y_dist=row[1],
        x_dist=row[2],
        z_dist=row[3] or None,
        n=int(row[4]),
        R=int(row[5]),
        B=int(row[6]),
        ad_reject_rate=rates[0],
        cvm_reject_rate=rates[1],
        ks_reject_rate=rates[2],
        type1_rate_x=rates[3],
        type1_rate_z=t1z,
        redraw_count=int(row[12]),
        clamp_count=int(row[13]),
        elapsed_ms=int(row[14]),
        master_seed=int(row[15]),
    )


def read_results(path: str | Path) -> tuple[dict[int, CellResult], int]:
    """Valid rows keyed by cell_id, plus the count of rows dropped."""
    results: dict[int, CellResult] = {}
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1 and row and row[0] == RESULTS_HEADER[0]:
                continue
            if not row:
                continue
            try:
                r = _row_to_result(row)
            except (ValueError, IndexError) as exc:
                dropped += 1
                log.warning("%s line %d: dropping corrupt row (%s)", path, lineno, exc)
                continue
            results[r.cell_id] = r
    return results, dropped


def _write_header(path: Path) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerow(RESULTS_HEADER)


def _append_result(path: Path, r: CellResult) -> None:
    with open(path, "a", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerow(_result_to_row(r))


def write_canonical(path: str | Path, results: list[CellResult]) -> None:
    """Rewrite the results file sorted by cell_id (atomic replace)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for r in sorted(results, key=lambda c: c.cell_id):
            writer.writerow(_result_to_row(r))
    os.replace(tmp, path)


@dataclass(frozen=True)
class GridSummary:
    cells_total: int
    cells_run: int
    cells_skipped: int
    redraw_total: int
    clamp_total: int
    wall_ms: int
    results_path: str


def run_grid(
    cells: list[CellSpec],
    master_seed: int,
    results_path: str | Path,
    workers: int = 1,
    alpha: float = 0.05,
    resume: bool = False,
) -> GridSummary:
    """Run ``cells``, checkpointing to ``results_path`` as they finish.

    With ``resume=True`` an existing file is scanned first and completed
    cells are skipped; otherwise the file is started fresh.  The finished
    file holds exactly one canonically ordered row per cell.
    """
    started = time.perf_counter()
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    path = Path(results_path)
    if path.parent and not path.parent.exists():
        raise CellRunError(f"output directory does not exist: {path.parent}")

    done: dict[int, CellResult] = {}
    if resume and path.exists():
        done, dropped = read_results(path)
        if dropped:
            log.warning("%s: %d corrupt rows dropped; their cells re-run", path, dropped)
    else:
        _write_header(path)

    wanted = {c.cell_id for c in cells}
    done = {cid: r for cid, r in done.items() if cid in wanted}
    pending = [c for c in cells if c.cell_id not in done]
    log.info("grid: %d cells, %d already done, %d to run", len(cells), len(done), len(pending))

    fresh: dict[int, CellResult] = {}
    if workers == 1:
        for c in pending:
            r = run_cell(c, master_seed, alpha)
            fresh[r.cell_id] = r
            _append_result(path, r)
            log.info("cell %s x %s n=%d done in %d ms", r.y_dist, r.x_dist, r.n, r.elapsed_ms)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(run_cell, c, master_seed, alpha): c for c in pending}
            for fut in as_completed(futures):
                r = fut.result()
                fresh[r.cell_id] = r
                _append_result(path, r)
                log.info("cell %s x %s n=%d done in %d ms", r.y_dist, r.x_dist, r.n, r.elapsed_ms)

    all_results = [done.get(c.cell_id) or fresh[c.cell_id] for c in cells]
    write_canonical(path, all_results)
    wall_ms = int(round((time.perf_counter() - started) * 1000.0))
    return GridSummary(
        cells_total=len(cells),
        cells_run=len(fresh),
        cells_skipped=len(done),
        redraw_total=sum(r.redraw_count for r in all_results),
        clamp_total=sum(r.clamp_count for r in all_results),
        wall_ms=wall_ms,
        results_path=str(path),
    )
