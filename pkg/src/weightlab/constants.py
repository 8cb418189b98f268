"""Grid-scan estimates of the six weight constants.

Every constant is a supremum over subintervals; here the supremum is scanned
over all pairs of grid points (uniform resolution plus every piece
breakpoint).  Closed-form cumulative antiderivatives make one scan
O(resolution^2) with numpy pair matrices.  The maximal-function constant is
the documented expensive one: O(resolution^3) via an incremental recurrence.

Estimates are lower bounds of the true suprema, monotone under grid
refinement (for nested grids), and exact on the step/power families whose
suprema sit on breakpoint-anchored intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, ParameterError
from .weights import (
    Interval,
    MomentKind,
    Weight,
    breakpoints,
    cumulative_moment,
    evaluate,
    moment,
)

__all__ = [
    "OrliczKind",
    "ConstantsReport",
    "scan_grid",
    "rh1_constant",
    "ainf_constant",
    "rhp_constant",
    "ap_constant",
    "maximal_function",
    "rh1_prime_constant",
    "luxemburg_norm",
    "rh1_doubleprime_constant",
    "rh1_limit_check",
    "compute_report",
]

DEFAULT_RESOLUTION = 201
# the two nested-scan constants default coarser; they cost res^3 / res^2*quad
DEFAULT_MAXIMAL_RESOLUTION = 64


class OrliczKind(Enum):
    L = "L"
    LLOGL = "LlogL"
    EXP_MINUS_ONE = "expL-1"


def _grid_points(w: Weight, resolution: int, interval: Interval | None = None) -> np.ndarray:
    """Sorted unique grid: `resolution` uniform points plus breakpoints.

    Points closer than 1e-12 are merged to avoid degenerate cells.
    """
    if resolution < 2:
        raise ParameterError(f"resolution must be >= 2, got {resolution}")
    a, b = (interval.a, interval.b) if interval is not None else (0.0, 1.0)
    pts = np.linspace(a, b, resolution)
    bps = [t for t in breakpoints(w) if a < t < b]
    pts = np.unique(np.concatenate([pts, np.asarray(bps, dtype=float)]))
    keep = np.concatenate([[True], np.diff(pts) > 1e-12])
    return pts[keep]


def scan_grid(w: Weight, resolution: int = DEFAULT_RESOLUTION) -> list[Interval]:
    """All subintervals spanned by pairs of grid points, lexicographic order."""
    pts = _grid_points(w, resolution)
    return [
        Interval(float(pts[i]), float(pts[j]))
        for i in range(len(pts) - 1)
        for j in range(i + 1, len(pts))
    ]


def _pair_averages(pts: np.ndarray, cum: np.ndarray) -> np.ndarray:
    """Matrix avg[i, j] = (cum[j]-cum[i])/(pts[j]-pts[i]); lower half is nan."""
    with np.errstate(invalid="ignore", divide="ignore"):
        diff = cum[None, :] - cum[:, None]
        dl = pts[None, :] - pts[:, None]
        return diff / dl


def _argmax_interval(mat: np.ndarray, pts: np.ndarray) -> tuple[float, Interval]:
    """Max over the strict upper triangle; first hit = lexicographic argmax."""
    scan = np.array(mat, copy=True)
    scan[np.tril_indices_from(scan)] = -np.inf
    scan[np.isnan(scan)] = -np.inf
    flat = int(np.argmax(scan))
    i, j = divmod(flat, scan.shape[1])
    return float(scan[i, j]), Interval(float(pts[i]), float(pts[j]))


def rh1_constant(w: Weight, resolution: int = DEFAULT_RESOLUTION) -> tuple[float, Interval]:
    """Normalized entropy sup: max of [avg(w log w) - avg(w) log avg(w)] / avg(w)."""
    pts = _grid_points(w, resolution)
    avg_w = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W))
    avg_wlw = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W_LOG_W))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = (avg_wlw - avg_w * np.log(avg_w)) / avg_w
    return _argmax_interval(ratio, pts)


def ainf_constant(w: Weight, resolution: int = DEFAULT_RESOLUTION) -> tuple[float, Interval]:
    """Jensen-gap sup: max of avg(w) * exp(-avg(log w))."""
    pts = _grid_points(w, resolution)
    avg_w = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W))
    avg_lw = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_LOG_W))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        ratio = avg_w * np.exp(-avg_lw)
    return _argmax_interval(ratio, pts)


def rhp_constant(w: Weight, p: float, resolution: int = DEFAULT_RESOLUTION) -> tuple[float, Interval]:
    """Reverse Holder sup: max of avg(w^p)^(1/p) / avg(w); +inf when a scanned
    interval touching 0 has a divergent p-th moment."""
    if not (p > 1.0 and math.isfinite(p)):
        raise ParameterError(f"rhp_constant needs p > 1, got {p}")
    pts = _grid_points(w, resolution)
    avg_w = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W))
    avg_wp = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W_POW, p))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        ratio = avg_wp ** (1.0 / p) / avg_w
    return _argmax_interval(ratio, pts)


def ap_constant(w: Weight, p: float, resolution: int = DEFAULT_RESOLUTION) -> tuple[float, Interval]:
    """Muckenhoupt sup: max of avg(w) * avg(w^(-1/(p-1)))^(p-1)."""
    if not (p > 1.0 and math.isfinite(p)):
        raise ParameterError(f"ap_constant needs p > 1, got {p}")
    dual = -1.0 / (p - 1.0)
    pts = _grid_points(w, resolution)
    avg_w = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W))
    avg_dual = _pair_averages(pts, cumulative_moment(w, pts, MomentKind.AVG_W_POW, dual))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        ratio = avg_w * avg_dual ** (p - 1.0)
    return _argmax_interval(ratio, pts)


def maximal_function(
    w: Weight, interval: Interval, t: float, resolution: int = DEFAULT_RESOLUTION
) -> float:
    """Uncentered maximal average of w restricted to `interval`, at t.

    Max over grid subintervals containing t, plus the pointwise value w(t)
    (the limit of shrinking intervals at a Lebesgue point).
    """
    if not (interval.a <= t <= interval.b):
        raise DomainError(f"t = {t} outside [{interval.a}, {interval.b}]")
    pts = _grid_points(w, resolution, interval)
    if not np.any(np.abs(pts - t) <= 1e-15):
        pts = np.sort(np.append(pts, t))
    cum = cumulative_moment(w, pts, MomentKind.AVG_W)
    left = pts <= t
    right = pts >= t
    with np.errstate(invalid="ignore", divide="ignore"):
        avg = (cum[None, right] - cum[left, None]) / (pts[None, right] - pts[left, None])
    best = float(np.nanmax(avg)) if avg.size else -math.inf
    if t > 0.0:
        best = max(best, evaluate(w, t))
    return best


def rh1_prime_constant(
    w: Weight, resolution: int = DEFAULT_MAXIMAL_RESOLUTION
) -> tuple[float, Interval]:
    """Maximal-function variant: sup over I of avg_I(M(w 1_I)) / avg_I(w).

    For each interval [pts[p], pts[q]] the maximal function is evaluated on
    the grid cells via an incremental recurrence in q: extending the interval
    by one cell adds one column of candidate averages, whose running prefix
    maxima update every cell in O(cells).  Total cost O(resolution^3).
    """
    pts = _grid_points(w, resolution)
    n = len(pts)
    cum = cumulative_moment(w, pts, MomentKind.AVG_W)
    cell_len = np.diff(pts)
    mids = 0.5 * (pts[:-1] + pts[1:])
    wmid = np.array([evaluate(w, float(t)) for t in mids])
    best = -math.inf
    best_iv = (0, 1)
    for p in range(n - 1):
        m_vec = np.empty(0)
        for q in range(p + 1, n):
            col = (cum[q] - cum[p:q]) / (pts[q] - pts[p:q])
            prefix = np.maximum.accumulate(col)
            m_vec = np.maximum(np.append(m_vec, wmid[q - 1]), prefix)
            length = pts[q] - pts[p]
            avg_m = float(np.dot(m_vec, cell_len[p:q])) / length
            avg_w = float(cum[q] - cum[p]) / length
            ratio = avg_m / avg_w
            if ratio > best:
                best = ratio
                best_iv = (p, q)
    return best, Interval(float(pts[best_iv[0]]), float(pts[best_iv[1]]))


# ---------------------------------------------------------------------------
# Orlicz (Luxemburg) norms

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GRADING_POWER = 4.0  # substitution t = e*u^m for segments touching 0


def _segments(w: Weight, interval: Interval) -> list[tuple[float, float, float, float]]:
    """(start, end, coeff, exponent) for each piece overlap with the interval."""
    segs = []
    for piece in w.pieces:
        s = max(interval.a, piece.support.a)
        e = min(interval.b, piece.support.b)
        if e > s:
            segs.append((s, e, piece.coeff, piece.exponent))
    return segs


def _quad_nodes(
    w: Weight, interval: Interval, panels: int = 6
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes, quadrature weights and w values on the interval.

    A segment starting at t = 0 is graded with t = e*u^m to absorb the
    integrable singularity of a negative-exponent piece.
    """
    ns, qs, vs = [], [], []
    for s, e, c, alpha in _segments(w, interval):
        if s == 0.0 and alpha != 0.0:
            m = _GRADING_POWER
            for k in range(panels):
                u0, u1 = k / panels, (k + 1) / panels
                u = 0.5 * (u1 - u0) * _GL_X + 0.5 * (u0 + u1)
                du = 0.5 * (u1 - u0) * _GL_W
                t = e * u**m
                ns.append(t)
                qs.append(du * e * m * u ** (m - 1.0))
                vs.append(c * t**alpha)
        else:
            for k in range(panels):
                t0 = s + (e - s) * k / panels
                t1 = s + (e - s) * (k + 1) / panels
                t = 0.5 * (t1 - t0) * _GL_X + 0.5 * (t0 + t1)
                dt = 0.5 * (t1 - t0) * _GL_W
                ns.append(t)
                qs.append(dt)
                vs.append(c * t**alpha)
    return np.concatenate(ns), np.concatenate(qs), np.concatenate(vs)


def _phi_values(kind: OrliczKind, s: np.ndarray) -> np.ndarray:
    if kind is OrliczKind.L:
        return s
    if kind is OrliczKind.LLOGL:
        return s * np.log(math.e + s)
    if kind is OrliczKind.EXP_MINUS_ONE:
        with np.errstate(over="ignore"):
            return np.expm1(s)
    raise ParameterError(f"unknown Orlicz kind {kind}")


def _unbounded_on(w: Weight, interval: Interval) -> bool:
    return interval.a == 0.0 and w.pieces[0].exponent < 0.0


def luxemburg_norm(
    w: Weight, interval: Interval, kind: OrliczKind, tol: float = 1e-10
) -> float:
    """Luxemburg norm inf{lam > 0 : avg_I Phi(w/lam) <= 1}.

    The L norm is exactly avg(w).  The exponential norm of a weight
    unbounded on the interval is +inf.  Otherwise: bisection on lam, using
    that Phi(s) >= s makes avg(w) a guaranteed lower bracket.
    """
    if kind is OrliczKind.L:
        return moment(w, interval, MomentKind.AVG_W)
    if kind is OrliczKind.EXP_MINUS_ONE and _unbounded_on(w, interval):
        return math.inf
    nodes, qw, wv = _quad_nodes(w, interval)
    length = interval.length

    def gval(lam: float) -> float:
        return float(np.dot(qw, _phi_values(kind, wv / lam))) / length

    lo = moment(w, interval, MomentKind.AVG_W)
    while gval(lo) < 1.0:
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    hi = lo * math.e
    for _ in range(200):
        if gval(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        return math.inf
    it = 0
    while hi - lo > tol * max(1.0, hi) and it < 200:
        mid = 0.5 * (lo + hi)
        if gval(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        it += 1
    return hi


def rh1_doubleprime_constant(
    w: Weight, resolution: int = DEFAULT_MAXIMAL_RESOLUTION
) -> tuple[float, Interval]:
    """Orlicz-ratio sup: max over I of ||w||_{LlogL, I} / ||w||_{L, I}.

    All grid intervals are bisected simultaneously on flat node arrays.
    """
    pts = _grid_points(w, resolution)
    n = len(pts)
    cum = cumulative_moment(w, pts, MomentKind.AVG_W)
    ivs = [(i, j) for i in range(n - 1) for j in range(i + 1, n)]
    nodes_l, qw_l, wv_l, starts, lengths, avg_w = [], [], [], [], [], []
    pos = 0
    for i, j in ivs:
        iv = Interval(float(pts[i]), float(pts[j]))
        nd, qw, wv = _quad_nodes(w, iv, panels=4)
        nodes_l.append(nd)
        qw_l.append(qw)
        wv_l.append(wv)
        starts.append(pos)
        pos += len(nd)
        lengths.append(iv.length)
        avg_w.append((cum[j] - cum[i]) / iv.length)
    qw_flat = np.concatenate(qw_l)
    wv_flat = np.concatenate(wv_l)
    starts = np.asarray(starts)
    lengths = np.asarray(lengths)
    avg_w = np.asarray(avg_w)
    sizes = np.diff(np.append(starts, pos))

    def gvals(lam: np.ndarray) -> np.ndarray:
        lam_rep = np.repeat(lam, sizes)
        s = wv_flat / lam_rep
        vals = qw_flat * s * np.log(math.e + s)
        return np.add.reduceat(vals, starts) / lengths

    lo = avg_w.copy()
    for _ in range(60):
        mask = gvals(lo) < 1.0
        if not mask.any():
            break
        lo[mask] *= 0.5
    hi = lo * math.e
    for _ in range(200):
        mask = gvals(hi) > 1.0
        if not mask.any():
            break
        hi[mask] *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        over = gvals(mid) > 1.0
        lo = np.where(over, mid, lo)
        hi = np.where(over, hi, mid)
    ratio = hi / avg_w
    k = int(np.argmax(ratio))
    i, j = ivs[k]
    return float(ratio[k]), Interval(float(pts[i]), float(pts[j]))


def rh1_limit_check(w: Weight, interval: Interval, p: float) -> tuple[float, float]:
    """(lhs, rhs) of the p -> 1 limit identity on one interval.

    lhs = (p/(p-1)) log( avg(w^p)^{1/p} / avg(w) ), rhs = the normalized
    entropy of w on the interval; lhs decreases to rhs as p -> 1+.
    """
    if not (1.0 < p < 2.0):
        raise ParameterError(f"rh1_limit_check needs p in (1, 2), got {p}")
    avg_w = moment(w, interval, MomentKind.AVG_W)
    avg_wp = moment(w, interval, MomentKind.AVG_W_POW, p)
    if avg_wp == math.inf:
        raise DomainError(f"avg of w^{p} diverges on [{interval.a}, {interval.b}]")
    lhs = (p / (p - 1.0)) * (math.log(avg_wp) / p - math.log(avg_w))
    avg_wlw = moment(w, interval, MomentKind.AVG_W_LOG_W)
    rhs = (avg_wlw - avg_w * math.log(avg_w)) / avg_w
    return lhs, rhs


# ---------------------------------------------------------------------------
# report plumbing for the CLI

KNOWN_CONSTANTS = ("rh1", "ainf", "rhp", "ap", "rh1_prime", "rh1_doubleprime")


@dataclass
class ConstantsReport:
    resolution: int
    rh1: tuple[float, Interval] | None = None
    ainf: tuple[float, Interval] | None = None
    rh_p: dict[float, tuple[float, Interval]] = field(default_factory=dict)
    a_p: dict[float, tuple[float, Interval]] = field(default_factory=dict)
    rh1_prime: tuple[float, Interval] | None = None
    rh1_doubleprime: tuple[float, Interval] | None = None


def compute_report(
    w: Weight,
    resolution: int = DEFAULT_RESOLUTION,
    which: tuple[str, ...] = ("rh1", "ainf"),
    p_values: tuple[float, ...] = (2.0,),
    maximal_resolution: int = DEFAULT_MAXIMAL_RESOLUTION,
) -> ConstantsReport:
    for name in which:
        if name not in KNOWN_CONSTANTS:
            raise ParameterError(f"unknown constant {name!r}; choose from {KNOWN_CONSTANTS}")
    report = ConstantsReport(resolution=resolution)
    if "rh1" in which:
        report.rh1 = rh1_constant(w, resolution)
    if "ainf" in which:
        report.ainf = ainf_constant(w, resolution)
    if "rhp" in which:
        report.rh_p = {p: rhp_constant(w, p, resolution) for p in p_values}
    if "ap" in which:
        report.a_p = {p: ap_constant(w, p, resolution) for p in p_values}
    if "rh1_prime" in which:
        report.rh1_prime = rh1_prime_constant(w, maximal_resolution)
    if "rh1_doubleprime" in which:
        report.rh1_doubleprime = rh1_doubleprime_constant(w, maximal_resolution)
    return report
