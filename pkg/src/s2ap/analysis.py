"""Batch scans over ``t`` and moment diagnostics for the joint laws."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from s2ap.density1d import cusick_c
from s2ap.densitymd import cusick_pair_density, delta_md
from s2ap.dyadic import Dyadic

HALF = Dyadic(1, 1)
QUARTER = Dyadic(1, 2)

DISTANCE_METRIC = (
    "total variation between the kept entries (normalized by kept mass) and a "
    "Gaussian with the same mean and covariance, evaluated on the same lattice "
    "points and renormalized to mass 1"
)
ERROR_MODEL = (
    "lost mass sits on ray continuations past the kept support: a lost point i "
    "steps beyond a kept point carries relative weight 2^-i, so per unit of lost "
    "mass E|k_l| <= R + 1 and E k_l^2 <= R^2 + 2R + 3 with R = max|k| + 1"
)


@dataclass(frozen=True)
class ScanRow:
    t: int
    lower: Dyadic
    upper: Dyadic
    flagged: bool
    running_min: Dyadic

    @property
    def value(self) -> float:
        return float((self.lower + self.upper).half())


def _cusick_chunk(ts: Sequence[int]) -> list[tuple[int, Dyadic]]:
    return [(t, cusick_c(t)) for t in ts]


def _problem1_chunk(args: tuple[Sequence[int], int]) -> list[tuple[int, Dyadic, Dyadic]]:
    ts, precision = args
    return [(t, *cusick_pair_density(t, precision)) for t in ts]


def _chunks(t_lo: int, t_hi: int, jobs: int) -> list[range]:
    size = max(1, (t_hi - t_lo + 1 + 4 * jobs - 1) // (4 * jobs))
    return [range(a, min(a + size, t_hi + 1)) for a in range(t_lo, t_hi + 1, size)]


def _run(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        parts = [fn(x) for x in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(fn, tasks))
    return [row for part in parts for row in part]


def _check_range(t_lo: int, t_hi: int) -> None:
    if t_lo < 1 or t_hi < t_lo - 1:
        raise ValueError(f"need 1 <= t_lo <= t_hi, got [{t_lo}, {t_hi}]")


def scan_cusick(t_lo: int, t_hi: int, jobs: int = 1) -> list[ScanRow]:
    """Exact ``c_t`` for ``t_lo <= t <= t_hi``; rows with ``c_t <= 1/2`` are flagged."""
    _check_range(t_lo, t_hi)
    vals = _run(_cusick_chunk, _chunks(t_lo, t_hi, jobs), jobs)
    rows = []
    low = None
    for t, c in vals:
        low = c if low is None or c < low else low
        rows.append(ScanRow(t, c, c, c <= HALF, low))
    return rows


def scan_problem1(t_lo: int, t_hi: int, precision: int = 30, jobs: int = 1) -> list[ScanRow]:
    """Certified bounds on the two-step Cusick density; lower bounds ``<= 1/4`` are flagged."""
    _check_range(t_lo, t_hi)
    tasks = [(r, precision) for r in _chunks(t_lo, t_hi, jobs)]
    vals = _run(_problem1_chunk, tasks, jobs)
    rows = []
    low = None
    for t, lo, hi in vals:
        low = lo if low is None or lo < low else low
        rows.append(ScanRow(t, lo, hi, lo <= QUARTER, low))
    return rows


@dataclass
class MomentReport:
    m: int
    t: int
    precision: int
    kept_mass: Dyadic
    lost_mass_bound: Dyadic
    support_radius: int
    mean: list[Dyadic]
    mean_err: Dyadic
    covariance: list[list[Dyadic]]
    covariance_err: list[list[Dyadic]]
    distance: float | None
    note: str = ""
    metadata: dict = field(default_factory=lambda: {
        "distance_metric": DISTANCE_METRIC,
        "error_model": ERROR_MODEL,
    })

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "precision": self.precision,
            "kept_mass": self.kept_mass.to_json(),
            "lost_mass_bound": self.lost_mass_bound.to_json(),
            "support_radius": self.support_radius,
            "mean": [x.to_json() for x in self.mean],
            "mean_err": self.mean_err.to_json(),
            "covariance": [[x.to_json() for x in row] for row in self.covariance],
            "covariance_err": [[x.to_json() for x in row] for row in self.covariance_err],
            "distance": self.distance,
            "note": self.note,
            "metadata": self.metadata,
        }


def _gaussian_distance(points: np.ndarray, probs: np.ndarray, mu: np.ndarray, cov: np.ndarray) -> float:
    diff = points - mu
    q = np.einsum("ij,jk,ik->i", diff, np.linalg.inv(cov), diff)
    logw = -0.5 * q
    w = np.exp(logw - logw.max())  # normalizing constant cancels after renormalization
    w /= w.sum()
    return 0.5 * float(np.abs(probs / probs.sum() - w).sum())


def gaussian_report(m: int, t: int, precision: int = 30) -> MomentReport:
    """Mean, covariance and Gaussian distance of ``k -> delta(k, 0, t)`` over the kept support.

    Moments are plain sums over kept entries (not renormalized).
    """
    if m not in (1, 2, 3):
        raise ValueError(f"m must be 1, 2 or 3, got {m}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    d = delta_md(m, t, None, precision)
    keys = list(d.nums)
    e = d.exp
    lost = d.lost_mass_bound
    radius = max(max(abs(x) for x in k) for k in keys) + 1

    first = [Dyadic.of(sum(k[i] * d.nums[k] for k in keys), e) for i in range(m)]
    second = [[Dyadic.of(sum(k[i] * k[j] * d.nums[k] for k in keys), e) for j in range(m)]
              for i in range(m)]
    cov = [[second[i][j] - first[i] * first[j] for j in range(m)] for i in range(m)]

    mean_err = lost * (radius + 1)
    second_err = lost * (radius * radius + 2 * radius + 3)
    cov_err = [[second_err + (abs(first[i]) + abs(first[j])) * mean_err + mean_err * mean_err
                for j in range(m)] for i in range(m)]

    pts = np.array(keys, dtype=float)
    probs = np.array([float(Dyadic.of(d.nums[k], e)) for k in keys])
    mass = probs.sum()
    mu = pts.T @ probs / mass
    c = (pts - mu).T @ ((pts - mu) * probs[:, None]) / mass
    distance = None
    note = ""
    if np.linalg.matrix_rank(c) < m or np.linalg.det(c) <= 1e-12:
        note = "degenerate covariance; Gaussian comparison skipped"
    else:
        distance = _gaussian_distance(pts, probs, mu, c)
    return MomentReport(m, t, precision, d.total(), lost, radius, first, mean_err,
                        cov, cov_err, distance, note)


CUSICK_COLUMNS = ["t", "c_num", "c_den", "c_float", "flag_le_half", "running_min_num", "running_min_den"]
PROBLEM1_COLUMNS = ["t", "lo_num", "lo_den", "hi_num", "hi_den", "lo_float", "hi_float",
                    "flag_le_quarter", "running_inf_num", "running_inf_den"]


def _csv_row(row: ScanRow, kind: str) -> list:
    if kind == "cusick":
        return [row.t, row.lower.num, row.lower.denominator, repr(float(row.lower)),
                int(row.flagged), row.running_min.num, row.running_min.denominator]
    return [row.t, row.lower.num, row.lower.denominator, row.upper.num, row.upper.denominator,
            repr(float(row.lower)), repr(float(row.upper)), int(row.flagged),
            row.running_min.num, row.running_min.denominator]


def _json_row(row: ScanRow, kind: str) -> dict:
    if kind == "cusick":
        return {"t": row.t, "c": row.lower.to_json(), "flag_le_half": row.flagged,
                "running_min": row.running_min.to_json()}
    return {"t": row.t, "lower": row.lower.to_json(), "upper": row.upper.to_json(),
            "flag_le_quarter": row.flagged, "running_inf": row.running_min.to_json()}


def export(obj: Sequence[ScanRow] | MomentReport, fmt: str, out: IO[str], kind: str = "cusick") -> None:
    """Serialize scan rows (``kind`` is ``"cusick"`` or ``"problem1"``) or a report.

    Exact values are always written exactly; floats are renderings only.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, MomentReport):
        if fmt != "json":
            raise ValueError("moment reports are exported as json")
        json.dump(obj.to_json(), out, indent=2)
        out.write("\n")
        return
    if kind not in ("cusick", "problem1"):
        raise ValueError(f"unknown scan kind {kind!r}")
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CUSICK_COLUMNS if kind == "cusick" else PROBLEM1_COLUMNS)
        for row in obj:
            w.writerow(_csv_row(row, kind))
    else:
        json.dump({"kind": kind, "rows": [_json_row(r, kind) for r in obj]}, out, indent=2)
        out.write("\n")


def export_string(obj, fmt: str, kind: str = "cusick") -> str:
    buf = io.StringIO()
    export(obj, fmt, buf, kind)
    return buf.getvalue()
