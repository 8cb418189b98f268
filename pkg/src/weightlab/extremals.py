"""Extremal weights attaining the Bellman surface values.

Every family glues a power spike t^{alpha} at the origin to a constant tail
(or is a single pure power).  The glue point and the spike exponent come
from the tangent-line construction, so that for the designated moment the
weight reproduces the surface value exactly, not just approximately.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .bellman import BellmanSurface, SurfaceKind, evaluate, in_domain, tangent_point
from .constants import ainf_constant, rh1_constant
from .errors import InfeasibleTargetError, ParameterError
from .solvers import funny_bound_log, gamma_entropy_roots, gamma_log
from .weights import (
    Interval,
    MomentKind,
    PowerPiece,
    Weight,
    constant_weight,
    moment,
)

__all__ = [
    "Family",
    "ExtremalSpec",
    "AttainmentReport",
    "build",
    "default_target",
    "attainment_check",
    "constant_attainment",
    "divergence_probe",
    "sharpness_sweep",
]

GLUE_TOL = 1e-12


class Family(Enum):
    AINF_UPPER = "ainf_upper"
    GEHRING_BOUNDARY = "gehring_boundary"
    GEHRING_INTERIOR = "gehring_interior"
    FUNNY = "funny"


@dataclass(frozen=True)
class ExtremalSpec:
    family: Family
    q: float
    target: tuple[float, float] | None = None
    eps: float | None = None

    def __post_init__(self):
        if self.family is Family.AINF_UPPER:
            if not (self.q > 1.0 and math.isfinite(self.q)):
                raise ParameterError(f"{self.family.value} needs q > 1, got {self.q}")
        elif not (self.q > 0.0 and math.isfinite(self.q)):
            raise ParameterError(f"{self.family.value} needs q > 0, got {self.q}")


def _surface_for(spec: ExtremalSpec) -> BellmanSurface:
    if spec.family is Family.AINF_UPPER:
        return BellmanSurface(SurfaceKind.AINF_UPPER, spec.q)
    if spec.family is Family.FUNNY:
        return BellmanSurface(SurfaceKind.AINF_LOWER, spec.q)
    return BellmanSurface(SurfaceKind.GEHRING, spec.q, eps=spec.eps)


def default_target(spec: ExtremalSpec) -> tuple[float, float]:
    """Representative interior (or boundary) point for each family."""
    if spec.family is Family.AINF_UPPER:
        # mid-domain: x = 1, x e^{-y} = sqrt(Q)
        return 1.0, -0.5 * math.log(spec.q)
    gp = gamma_entropy_roots(spec.q)[1].root
    if spec.family is Family.GEHRING_BOUNDARY:
        x = gp
        return x, x * math.log(x) + spec.q * x
    if spec.family is Family.GEHRING_INTERIOR:
        # midpoint of the tangent segment through v = 1
        x = 0.5 * (1.0 + gp)
        return x, gp * (x - 1.0)
    return 1.0, spec.q  # FUNNY: entropy point of the spike, on the upper boundary


def _power_spike(value: float, glue: float, exponent: float) -> Weight:
    """Weight equal to value * (t/glue)^exponent on [0, glue] and value after."""
    if glue >= 1.0 - GLUE_TOL:
        return Weight((PowerPiece(Interval(0.0, 1.0), value * glue**-exponent, exponent),))
    if glue <= GLUE_TOL:
        return constant_weight(value)
    c = value * glue**-exponent
    return Weight(
        (
            PowerPiece(Interval(0.0, glue), c, exponent),
            PowerPiece(Interval(glue, 1.0), value, 0.0),
        )
    )


def build(spec: ExtremalSpec) -> Weight:
    """Construct the extremal weight; raises InfeasibleTargetError off-domain."""
    target = spec.target if spec.target is not None else default_target(spec)
    x, y = target
    if spec.family is Family.FUNNY:
        gm = gamma_entropy_roots(spec.q)[0].root
        return Weight(
            (PowerPiece(Interval(0.0, 1.0), 1.0 / gm, (1.0 - gm) / gm),)
        )
    surface = _surface_for(spec)
    if not in_domain(surface, x, y, tol=1e-9):
        raise InfeasibleTargetError(
            f"target ({x}, {y}) outside the {surface.kind.value} domain for q = {spec.q}"
        )
    if spec.family is Family.AINF_UPPER:
        g = surface.gamma
        v = tangent_point(surface, x, y).root
        a = g * (x - v) / (v * (1.0 - g))
        return _power_spike(v, min(max(a, 0.0), 1.0), g - 1.0)
    gp = surface.gamma
    alpha = (1.0 - gp) / gp
    if spec.family is Family.GEHRING_BOUNDARY:
        if not (x > 0.0):
            raise InfeasibleTargetError(f"boundary family needs x > 0, got {x}")
        base = x * math.log(x) + spec.q * x
        if abs(y - base) > 1e-9 * max(1.0, abs(base)):
            raise InfeasibleTargetError(
                f"target ({x}, {y}) is not on the upper boundary y = x log x + q x"
            )
        return Weight((PowerPiece(Interval(0.0, 1.0), x / gp, alpha),))
    v = tangent_point(surface, x, y).root
    u = (x - v) / (v * (gp - 1.0))
    return _power_spike(v, min(max(u, 0.0), 1.0), alpha)


@dataclass(frozen=True)
class AttainmentReport:
    surface_value: float
    weight_value: float
    gap: float
    x: float
    y: float


def attainment_check(spec: ExtremalSpec, eps: float | None = None) -> AttainmentReport:
    """Compare the designated moment of the built weight with the surface value.

    AINF_UPPER compares avg(w log w); GEHRING families compare avg(w^{1+eps});
    FUNNY compares avg(log w) against the lower surface.  The gap is relative.
    """
    eff_eps = eps if eps is not None else spec.eps
    if spec.family in (Family.GEHRING_BOUNDARY, Family.GEHRING_INTERIOR):
        if eff_eps is None:
            raise ParameterError("gehring attainment needs eps")
        spec = ExtremalSpec(spec.family, spec.q, spec.target, eff_eps)
    w = build(spec)
    target = spec.target if spec.target is not None else default_target(spec)
    x, y = target
    surface = _surface_for(spec)
    full = Interval(0.0, 1.0)
    if spec.family is Family.AINF_UPPER:
        value = evaluate(surface, x, y)
        measured = moment(w, full, MomentKind.AVG_W_LOG_W)
    elif spec.family is Family.FUNNY:
        value = evaluate(surface, x, y)
        measured = moment(w, full, MomentKind.AVG_LOG_W)
    else:
        value = evaluate(surface, x, y)
        measured = moment(w, full, MomentKind.AVG_W_POW, p=1.0 + eff_eps)
    scale = max(1.0, abs(value))
    return AttainmentReport(value, measured, (measured - value) / scale, x, y)


def constant_attainment(spec: ExtremalSpec, resolution: int = 201) -> tuple[float, float]:
    """Scan the relevant sup-type constant of the built weight against q.

    AINF_UPPER uses the exp-entropy constant; the other families use the
    normalized-entropy constant.  Returns (measured, measured - q).
    """
    w = build(spec)
    if spec.family is Family.AINF_UPPER:
        measured, _ = ainf_constant(w, resolution=resolution)
    else:
        measured, _ = rh1_constant(w, resolution=resolution)
    return measured, measured - spec.q


def divergence_probe(w: Weight, p: float, deltas: tuple[float, ...]) -> list[float]:
    """Truncated integrals of w^p over [delta, 1] for a divergence diagnostic."""
    out = []
    for d in deltas:
        if not (0.0 < d < 1.0):
            raise ParameterError(f"delta must be in (0, 1), got {d}")
        iv = Interval(d, 1.0)
        out.append(moment(w, iv, MomentKind.AVG_W_POW, p=p) * (1.0 - d))
    return out


def _sweep_row(q: float) -> tuple[float, float, float]:
    if q > 1.0:
        g = gamma_log(q).root
        e_ratio = (math.log(g) + 1.0 / g - 1.0) / q
    else:
        e_ratio = math.nan
    # ratio of log funny_bound = 1/g + g - (q+2), g the small entropy root,
    # to its asymptote e^{q+1} - q - 2; both blow up like e^{q+1} and the
    # relative gap is below (q+2)e^{-(q+1)}, so past q ~ 690 the ratio is 1
    # to double precision and the direct quotient would overflow.
    if q + 1.0 > 690.0:
        funny_ratio = 1.0
    else:
        funny_ratio = funny_bound_log(q) / (math.exp(q + 1.0) - q - 2.0)
    return q, e_ratio, funny_ratio


def sharpness_sweep(
    q_values: tuple[float, ...], max_workers: int | None = None
) -> list[tuple[float, float, float]]:
    """Ratio-to-asymptote table for the sup-bound constants.

    Columns: q, (log g + 1/g - 1)/q for the exp-entropy bound (NaN for q <= 1),
    and the tangent-construction lower bound divided by e^{q+1} - q - 2.
    Worker count defaults to the WEIGHTLAB_THREADS environment variable.
    """
    for q in q_values:
        if not (q > 0.0 and math.isfinite(q)):
            raise ParameterError(f"sweep needs q > 0, got {q}")
    if max_workers is None:
        max_workers = int(os.environ.get("WEIGHTLAB_THREADS", "1"))
    if max_workers > 1 and len(q_values) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_sweep_row, q_values))
    return [_sweep_row(q) for q in q_values]
