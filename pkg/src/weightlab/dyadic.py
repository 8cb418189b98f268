"""Recursive interval splitting with moment points confined to a domain.

A weight with sup-type constant at most q keeps every interval's moment
point inside the corresponding domain; splitting an interval subdivides its
point along a chord.  The splitter picks a cut ratio so the whole chord
stays inside the slightly enlarged domain (constant q1 > q), which is what
makes telescoping sums against a concave surface built at q1 monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bellman import BellmanSurface, SurfaceKind, evaluate
from .errors import DomainError, ParameterError, SplitError
from .weights import Interval, MomentKind, Weight, moment

__all__ = [
    "SplitMode",
    "SplitConfig",
    "PartitionNode",
    "PartitionTree",
    "ChainReport",
    "split",
    "build_partition",
    "chain_verify",
]

SEGMENT_SAMPLES = 100


class SplitMode(Enum):
    LOG = "log"
    ENTROPY = "entropy"


@dataclass(frozen=True)
class SplitConfig:
    q: float
    q1: float
    delta0: float = 0.05

    def __post_init__(self):
        if not (self.q > 0.0 and math.isfinite(self.q)):
            raise ParameterError(f"q must be positive, got {self.q}")
        if not (self.q1 > self.q):
            raise ParameterError(f"q1 must exceed q, got q1 = {self.q1} <= q = {self.q}")
        if not (0.0 < self.delta0 <= 0.45):
            raise ParameterError(f"delta0 must lie in (0, 0.45], got {self.delta0}")


@dataclass(frozen=True)
class PartitionNode:
    interval: Interval
    point: tuple[float, float]
    children: tuple["PartitionNode", ...] = ()


@dataclass(frozen=True)
class PartitionTree:
    root: PartitionNode
    mode: SplitMode
    config: SplitConfig
    depth: int


def _point(w: Weight, interval: Interval, mode: SplitMode) -> tuple[float, float]:
    x = moment(w, interval, MomentKind.AVG_W)
    if mode is SplitMode.LOG:
        y = moment(w, interval, MomentKind.AVG_LOG_W)
    else:
        y = moment(w, interval, MomentKind.AVG_W_LOG_W)
    return x, y


def _segment_violation(
    p0: tuple[float, float], p1: tuple[float, float], q: float, mode: SplitMode
) -> float:
    """Worst signed domain violation along the chord, scale-normalized."""
    s = np.linspace(0.0, 1.0, SEGMENT_SAMPLES)
    x = p0[0] + s * (p1[0] - p0[0])
    y = p0[1] + s * (p1[1] - p0[1])
    if mode is SplitMode.LOG:
        r = x * np.exp(-y)
        viol = np.maximum(1.0 - r, r - q)
        scale = max(1.0, q)
    else:
        base = x * np.log(x)
        viol = np.maximum(base - y, y - base - q * x)
        scale = max(1.0, float(np.max(np.abs(base))), q * float(np.max(x)))
    return float(np.max(viol)) / scale


def _point_violation(p: tuple[float, float], q: float, mode: SplitMode) -> float:
    return _segment_violation(p, p, q, mode)


def _alpha_candidates(delta0: float) -> list[float]:
    """Cut ratios tried in order: 1/2, then outward in steps of 0.01."""
    out = [0.5]
    k = 1
    while True:
        lo, hi = 0.5 - 0.01 * k, 0.5 + 0.01 * k
        added = False
        if lo >= delta0 - 1e-12:
            out.append(lo)
            added = True
        if hi <= 1.0 - delta0 + 1e-12:
            out.append(hi)
            added = True
        if not added:
            return out
        k += 1


def split(
    w: Weight, interval: Interval, cfg: SplitConfig, mode: SplitMode = SplitMode.LOG
) -> tuple[Interval, Interval, float]:
    """Cut the interval so the chord between child points stays in the q1 domain.

    Returns (left, right, alpha) with |left| = alpha * |interval|.  Raises
    SplitError carrying the best candidate when no admissible ratio exists.
    """
    a, b = interval.a, interval.b
    best_alpha, best_viol = math.nan, math.inf
    for alpha in _alpha_candidates(cfg.delta0):
        mid = a + alpha * (b - a)
        if mid <= a or mid >= b:
            continue
        left, right = Interval(a, mid), Interval(mid, b)
        viol = _segment_violation(
            _point(w, left, mode), _point(w, right, mode), cfg.q1, mode
        )
        if viol <= 1e-12:
            return left, right, alpha
        if viol < best_viol:
            best_alpha, best_viol = alpha, viol
    raise SplitError(
        f"no cut ratio in [{cfg.delta0}, {1.0 - cfg.delta0}] keeps the chord "
        f"inside the q1 = {cfg.q1} domain on [{a}, {b}] "
        f"(best alpha = {best_alpha} with violation {best_viol:.3e})",
        best_alpha=best_alpha,
        best_violation=best_viol,
    )


def build_partition(
    w: Weight,
    cfg: SplitConfig,
    mode: SplitMode = SplitMode.LOG,
    max_depth: int = 4,
) -> PartitionTree:
    """Full binary tree of admissible splits down to max_depth.

    Every node's own moment point must lie in the q domain; a violation
    means the weight's constant exceeds q and the construction is vacuous.
    """
    if not isinstance(max_depth, int) or max_depth < 0:
        raise ParameterError(f"max_depth must be a nonnegative integer, got {max_depth}")

    def rec(iv: Interval, depth: int) -> PartitionNode:
        pt = _point(w, iv, mode)
        if _point_violation(pt, cfg.q, mode) > 1e-9:
            raise DomainError(
                f"moment point {pt} of [{iv.a}, {iv.b}] leaves the q = {cfg.q} domain; "
                "the weight's constant exceeds q"
            )
        if depth == max_depth:
            return PartitionNode(iv, pt)
        left, right, _ = split(w, iv, cfg, mode)
        return PartitionNode(iv, pt, (rec(left, depth + 1), rec(right, depth + 1)))

    return PartitionTree(rec(Interval(0.0, 1.0), 0), mode, cfg, max_depth)


@dataclass(frozen=True)
class ChainReport:
    sums: tuple[float, ...]
    target: float
    monotone: bool
    meets_target: bool
    final_gap: float


def chain_verify(surface: BellmanSurface, w: Weight, tree: PartitionTree) -> ChainReport:
    """Telescoping check: per-generation surface sums decrease toward the moment.

    S_k = sum over generation-k nodes of |I| * B(point_I); concavity of the
    surface along admissible chords forces S_0 >= S_1 >= ... >= target, where
    the target is the avg of w log w (log coordinates) or of w^{1+eps}
    (entropy coordinates) over the root interval.
    """
    if surface.kind is SurfaceKind.AINF_UPPER:
        if tree.mode is not SplitMode.LOG:
            raise ParameterError("AINF_UPPER chains need a LOG-mode partition")
    elif surface.kind is SurfaceKind.GEHRING:
        if tree.mode is not SplitMode.ENTROPY:
            raise ParameterError("GEHRING chains need an ENTROPY-mode partition")
    else:
        raise ParameterError("chain_verify bounds from above; use AINF_UPPER or GEHRING")
    if surface.q < tree.config.q1 - 1e-12:
        raise ParameterError(
            f"surface built at q = {surface.q} but the partition guarantees chords "
            f"only in the q1 = {tree.config.q1} domain"
        )

    root_len = tree.root.interval.b - tree.root.interval.a
    sums = []
    generation = [tree.root]
    while generation:
        total = 0.0
        for node in generation:
            frac = (node.interval.b - node.interval.a) / root_len
            try:
                total += frac * evaluate(surface, node.point[0], node.point[1])
            except DomainError as exc:
                raise DomainError(
                    f"node [{node.interval.a}, {node.interval.b}]: {exc}"
                ) from None
        sums.append(total)
        generation = [c for n in generation for c in n.children]

    root_iv = tree.root.interval
    if surface.kind is SurfaceKind.AINF_UPPER:
        target = moment(w, root_iv, MomentKind.AVG_W_LOG_W)
    else:
        target = moment(w, root_iv, MomentKind.AVG_W_POW, p=1.0 + surface.eps)

    slack = 1e-9
    monotone = all(
        sums[k + 1] <= sums[k] + slack * max(1.0, abs(sums[k]))
        for k in range(len(sums) - 1)
    )
    gap = sums[-1] - target
    meets = gap >= -slack * max(1.0, abs(target))
    return ChainReport(tuple(sums), target, monotone, meets, gap)
