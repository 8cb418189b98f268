"""Three explicit Bellman surfaces and their verification toolkit.

Each surface is built from tangent lines to the lower boundary curve of its
domain, touching the upper boundary; the tangent abscissa v solves a
monotone scalar equation per point, after which the surface value, gradient
and second derivatives are closed forms.  The surfaces:

AINF_UPPER  domain 1 <= x e^{-y} <= Q (x = avg w, y = avg log w),
            value = sharp upper bound on avg(w log w);
GEHRING     domain x log x <= y <= x log x + Q x (y = avg w log w),
            value = sharp upper bound on avg(w^{1+eps});
AINF_LOWER  same entropy domain, value = sharp lower bound on avg(log w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import DomainError, ParameterError
from .solvers import RootResult, gamma_entropy_roots, gamma_log

__all__ = [
    "SurfaceKind",
    "BellmanSurface",
    "HessianResult",
    "BoundsReport",
    "in_domain",
    "tangent_point",
    "evaluate",
    "hessian",
    "tangent_linearity_check",
    "bounds_check_ainf",
]

DOMAIN_TOL = 1e-12


class SurfaceKind(Enum):
    AINF_UPPER = "ainf_upper"
    GEHRING = "gehring"
    AINF_LOWER = "ainf_lower"


@dataclass(frozen=True)
class BellmanSurface:
    kind: SurfaceKind
    q: float
    eps: float | None = None

    def __post_init__(self):
        if self.kind is SurfaceKind.AINF_UPPER:
            if not (self.q > 1.0 and math.isfinite(self.q)):
                raise ParameterError(f"AINF_UPPER needs q > 1, got {self.q}")
        else:
            if not (self.q > 0.0 and math.isfinite(self.q)):
                raise ParameterError(f"{self.kind.value} needs q > 0, got {self.q}")
        if self.eps is not None:
            if self.kind is not SurfaceKind.GEHRING:
                raise ParameterError("eps only applies to the GEHRING surface")
            if not (0.0 < self.eps < 1.0 / (self.gamma - 1.0)):
                raise ParameterError(
                    f"GEHRING eps must lie in (0, {1.0 / (self.gamma - 1.0)}), got {self.eps}"
                )

    @cached_property
    def gamma(self) -> float:
        """Tangency slope parameter: the relevant root of t - log t = rhs."""
        if self.kind is SurfaceKind.AINF_UPPER:
            return gamma_log(self.q).root
        minus, plus = gamma_entropy_roots(self.q)
        return plus.root if self.kind is SurfaceKind.GEHRING else minus.root

    @property
    def entropy_coordinates(self) -> bool:
        return self.kind is not SurfaceKind.AINF_UPPER


def in_domain(surface: BellmanSurface, x: float, y: float, tol: float = DOMAIN_TOL) -> bool:
    """Domain membership with absolute tolerance scaled to the boundary size."""
    if not (x > 0.0 and math.isfinite(x) and math.isfinite(y)):
        return False
    if surface.entropy_coordinates:
        base = x * math.log(x)
        slack = tol * max(1.0, abs(base) + surface.q * x)
        return base - slack <= y <= base + surface.q * x + slack
    r = x * math.exp(-y)
    slack = tol * max(1.0, surface.q)
    return 1.0 - slack <= r <= surface.q + slack


def _tangent_bracket(surface: BellmanSurface, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = surface.gamma
    if surface.kind is SurfaceKind.AINF_UPPER:
        return g * x, x
    if surface.kind is SurfaceKind.GEHRING:
        return x / g, x
    return x, x / g


def _tangent_g(surface: BellmanSurface, v: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Tangent equation, oriented to increase in v on the bracket."""
    g = surface.gamma
    if surface.kind is SurfaceKind.AINF_UPPER:
        return g * x / v + np.log(v) - g - y
    val = (np.log(v) + g) * x - g * v - y
    if surface.kind is SurfaceKind.GEHRING:
        return -val
    return val


def _tangent_solve(surface: BellmanSurface, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized bisection for the tangent abscissa; ~machine precision."""
    lo, hi = _tangent_bracket(surface, x)
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(110):
        mid = 0.5 * (lo + hi)
        pos = _tangent_g(surface, mid, x, y) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return 0.5 * (lo + hi)


def tangent_point(surface: BellmanSurface, x: float, y: float) -> RootResult:
    """Tangent abscissa v for the point; v = x on the lower boundary."""
    if not in_domain(surface, x, y, tol=1e-9):
        raise DomainError(f"point ({x}, {y}) outside the {surface.kind.value} domain")
    xa, ya = np.asarray([x], dtype=float), np.asarray([y], dtype=float)
    v = float(_tangent_solve(surface, xa, ya)[0])
    residual = float(_tangent_g(surface, np.asarray([v]), xa, ya)[0])
    lo, hi = _tangent_bracket(surface, np.asarray([x], dtype=float))
    return RootResult(v, residual, (float(lo[0]), float(hi[0])), 110)


def _value(surface: BellmanSurface, x: np.ndarray, y: np.ndarray, v: np.ndarray) -> np.ndarray:
    g = surface.gamma
    if surface.kind is SurfaceKind.AINF_UPPER:
        return x * np.log(v) + (x - v) / g
    if surface.kind is SurfaceKind.GEHRING:
        eps = _require_eps(surface)
        d = 1.0 + eps - g * eps
        return v**eps * (x * (1.0 + eps) - eps * g * v) / d
    return np.log(v) + (x - v) / (g * v)


def _require_eps(surface: BellmanSurface) -> float:
    if surface.eps is None:
        raise ParameterError("GEHRING surface evaluation needs eps")
    return surface.eps


def _evaluate_raw(surface: BellmanSurface, x: float, y: float) -> float:
    xa, ya = np.asarray([x], dtype=float), np.asarray([y], dtype=float)
    v = _tangent_solve(surface, xa, ya)
    return float(_value(surface, xa, ya, v)[0])


def evaluate(surface: BellmanSurface, x: float, y: float) -> float:
    """Surface value at an admissible point."""
    if surface.kind is SurfaceKind.GEHRING:
        _require_eps(surface)
    if not in_domain(surface, x, y, tol=1e-9):
        raise DomainError(f"point ({x}, {y}) outside the {surface.kind.value} domain")
    return _evaluate_raw(surface, x, y)


def evaluate_many(surface: BellmanSurface, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized evaluate without per-point domain checks (grid verifications)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = _tangent_solve(surface, x, y)
    return _value(surface, x, y, v)


@dataclass(frozen=True)
class HessianResult:
    matrix: np.ndarray
    eigenvalues: tuple[float, float]
    det: float
    method: str
    boundary_warning: bool


def _closed_hessian(surface: BellmanSurface, x: float, y: float, v: float) -> np.ndarray:
    g = surface.gamma
    if surface.kind is SurfaceKind.AINF_UPPER:
        bxx = g / (g * x - v)
        byy = -v * v / (g * (v - g * x))
        bxy = v / (v - g * x)
        return np.array([[bxx, bxy], [bxy, byy]])
    a = math.log(v) + g
    if surface.kind is SurfaceKind.GEHRING:
        eps = _require_eps(surface)
        d = 1.0 + eps - g * eps
        scale = eps * eps * (1.0 + eps) * v**eps / (d * (x - g * v))
    else:
        scale = 1.0 / (g * v * (x - g * v))
    return scale * np.array([[a * a, -a], [-a, 1.0]])


def _boundary_margin(surface: BellmanSurface, x: float, y: float) -> float:
    """Safe coordinate step keeping x +- h, y +- h inside the domain."""
    if surface.entropy_coordinates:
        base = x * math.log(x)
        lower = y - base
        upper = base + surface.q * x - y
        slope = abs(math.log(x)) + 1.0 + surface.q
        return min(lower, upper) / (2.0 * max(slope, 1.0))
    lr = math.log(x) - y  # = log r in [0, log Q]
    margin = min(lr, math.log(surface.q) - lr)
    return margin / 2.0 * min(1.0, x)


def _fd_hessian(surface: BellmanSurface, x: float, y: float, h: float) -> np.ndarray:
    f = lambda xx, yy: _evaluate_raw(surface, xx, yy)

    def second(h_: float) -> np.ndarray:
        fxx = (f(x + h_, y) - 2.0 * f(x, y) + f(x - h_, y)) / (h_ * h_)
        fyy = (f(x, y + h_) - 2.0 * f(x, y) + f(x, y - h_)) / (h_ * h_)
        fxy = (
            f(x + h_, y + h_) - f(x + h_, y - h_) - f(x - h_, y + h_) + f(x - h_, y - h_)
        ) / (4.0 * h_ * h_)
        return np.array([[fxx, fxy], [fxy, fyy]])

    coarse = second(h)
    fine = second(h / 2.0)
    return (4.0 * fine - coarse) / 3.0  # Richardson: O(h^4) truncation


def hessian(
    surface: BellmanSurface, x: float, y: float, method: str = "closed"
) -> HessianResult:
    """Second derivative matrix at an interior point.

    "closed" uses implicit-differentiation formulas (det is exactly zero in
    exact arithmetic for all three surfaces); "fd" uses central differences
    with one Richardson step at h = 1e-5 * max(1, |x|), shrunk near the
    boundary with a warning flag.
    """
    if not in_domain(surface, x, y, tol=1e-9):
        raise DomainError(f"point ({x}, {y}) outside the {surface.kind.value} domain")
    warn = False
    if method == "closed":
        v = float(_tangent_solve(surface, np.asarray([x], float), np.asarray([y], float))[0])
        margin = _boundary_margin(surface, x, y)
        warn = margin < 1e-10 * max(1.0, abs(x))
        mat = _closed_hessian(surface, x, y, v)
    elif method == "fd":
        h = 1e-5 * max(1.0, abs(x))
        margin = _boundary_margin(surface, x, y)
        if margin <= 0.0:
            raise DomainError("point is on the boundary; finite differences need interior room")
        if margin < 2.0 * h:
            h = margin / 4.0
            warn = True
        mat = _fd_hessian(surface, x, y, h)
    else:
        raise ParameterError(f"unknown hessian method {method!r}")
    eigs = np.linalg.eigvalsh(mat)
    return HessianResult(
        matrix=mat,
        eigenvalues=(float(eigs[0]), float(eigs[1])),
        det=float(np.linalg.det(mat)),
        method=method,
        boundary_warning=warn,
    )


def _tangent_segment(surface: BellmanSurface, v: float) -> tuple[float, float]:
    """x-range of the tangent segment through abscissa v inside the domain."""
    g = surface.gamma
    if surface.kind is SurfaceKind.AINF_UPPER:
        return v, v / g
    if surface.kind is SurfaceKind.GEHRING:
        return v, g * v
    return g * v, v


def tangent_linearity_check(surface: BellmanSurface, v: float, n_samples: int = 33) -> float:
    """Max deviation of the evaluated surface from affine along one tangent line.

    The surface is linear on tangent segments by construction, so this
    measures how well evaluate() inverts the tangent equation.
    """
    if not (v > 0.0 and math.isfinite(v)):
        raise ParameterError(f"tangent abscissa must be positive, got {v}")
    if n_samples < 2:
        raise ParameterError("need at least 2 samples")
    g = surface.gamma
    x0, x1 = _tangent_segment(surface, v)
    xs = np.linspace(x0, x1, n_samples)
    if surface.kind is SurfaceKind.AINF_UPPER:
        ys = g * xs / v + math.log(v) - g
    else:
        ys = (math.log(v) + g) * xs - g * v
    vals = evaluate_many(surface, xs, ys)
    affine = vals[0] + (vals[-1] - vals[0]) * (xs - xs[0]) / (xs[-1] - xs[0])
    return float(np.max(np.abs(vals - affine)))


@dataclass(frozen=True)
class BoundsReport:
    grid: int
    max_lower_violation: float
    max_upper_violation: float
    ratio_max: float
    ratio_bound: float


def bounds_check_ainf(q: float, grid: int = 100) -> BoundsReport:
    """Check x log x <= B <= x log x + e q x on a grid of the log domain.

    Violations are reported as positive excesses (0 means the bound holds);
    ratio_max is the grid maximum of (B - x log x)/x, mathematically equal to
    the closed form log g + 1/g - 1 attained on the upper boundary.
    """
    surface = BellmanSurface(SurfaceKind.AINF_UPPER, q)
    if grid < 2:
        raise ParameterError("grid must be >= 2")
    xs = np.linspace(0.25, 4.0, grid)
    rs = np.geomspace(1.0, q, grid)
    xg, rg = np.meshgrid(xs, rs)
    yg = np.log(xg) - np.log(rg)
    vals = evaluate_many(surface, xg.ravel(), yg.ravel())
    base = (xg * np.log(xg)).ravel()
    xflat = xg.ravel()
    lower = np.max(base - vals)
    upper = np.max(vals - base - math.e * q * xflat)
    ratio = np.max((vals - base) / xflat)
    g = surface.gamma
    return BoundsReport(
        grid=grid,
        max_lower_violation=float(max(lower, 0.0)),
        max_upper_violation=float(max(upper, 0.0)),
        ratio_max=float(ratio),
        ratio_bound=math.log(g) + 1.0 / g - 1.0,
    )
