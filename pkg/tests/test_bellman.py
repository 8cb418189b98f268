import math

import numpy as np
import pytest

from weightlab import (
    BellmanSurface,
    DomainError,
    ParameterError,
    SurfaceKind,
    bounds_check_ainf,
    evaluate_surface,
    hessian,
    in_domain,
    tangent_linearity_check,
    tangent_point,
)
from weightlab.bellman import evaluate_many
from weightlab.solvers import funny_bound, gamma_entropy_roots

from _frozen import FUNNY_BOUND_1, GAMMA_PLUS_1, GEHRING_B_1_03, RATIO_BOUND_E


def gehring_surface(q, frac=0.5):
    gp = gamma_entropy_roots(q)[1].root
    return BellmanSurface(SurfaceKind.GEHRING, q, eps=frac / (gp - 1.0))


class TestConstruction:
    def test_parameter_validation(self):
        with pytest.raises(ParameterError):
            BellmanSurface(SurfaceKind.AINF_UPPER, 1.0)  # needs q > 1
        with pytest.raises(ParameterError):
            BellmanSurface(SurfaceKind.GEHRING, 0.0, eps=0.1)
        with pytest.raises(ParameterError):
            BellmanSurface(SurfaceKind.AINF_LOWER, -1.0)

    def test_gehring_eps_window(self):
        gp = gamma_entropy_roots(1.0)[1].root
        BellmanSurface(SurfaceKind.GEHRING, 1.0, eps=0.99 / (gp - 1.0))
        with pytest.raises(ParameterError):
            BellmanSurface(SurfaceKind.GEHRING, 1.0, eps=1.0 / (gp - 1.0))
        with pytest.raises(ParameterError):
            BellmanSurface(SurfaceKind.GEHRING, 1.0, eps=0.0)

    def test_gamma_parameter(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        assert 0.0 < up.gamma < 1.0
        assert gehring_surface(1.0).gamma == pytest.approx(GAMMA_PLUS_1, abs=1e-12)


class TestDomain:
    def test_log_coordinates(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        assert in_domain(up, 1.0, 0.0)  # ratio 1, lower edge
        assert in_domain(up, 1.0, -math.log(2.0))  # ratio q, upper edge
        assert in_domain(up, 1.0, -0.3)
        assert not in_domain(up, 1.0, 0.2)
        assert not in_domain(up, 1.0, -math.log(2.0) - 0.05)
        assert not in_domain(up, -1.0, 0.0)

    def test_entropy_coordinates(self):
        low = BellmanSurface(SurfaceKind.AINF_LOWER, 1.0)
        assert in_domain(low, 1.0, 0.0)
        assert in_domain(low, 1.0, 1.0)
        assert in_domain(low, 0.5, 0.5 * math.log(0.5) + 0.2)
        assert not in_domain(low, 1.0, -0.05)
        assert not in_domain(low, 1.0, 1.05)

    def test_evaluate_rejects_outside(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        with pytest.raises(DomainError):
            evaluate_surface(up, 1.0, 0.5)


class TestTangent:
    def test_lower_boundary_is_identity(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 3.0)
        for x in (0.4, 1.0, 2.3):
            tp = tangent_point(up, x, math.log(x))
            assert tp.root == pytest.approx(x, rel=1e-9)
        geh = gehring_surface(1.0)
        for x in (0.4, 1.0, 2.3):
            tp = tangent_point(geh, x, x * math.log(x))
            assert tp.root == pytest.approx(x, rel=1e-9)

    def test_upper_boundary_hits_bracket_end(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        tp = tangent_point(up, 1.0, -math.log(2.0))
        # tangency degenerates to second order on the boundary, so the
        # achievable accuracy in v is ~sqrt(eps)
        assert tp.root == pytest.approx(up.gamma, rel=1e-6)
        low = BellmanSurface(SurfaceKind.AINF_LOWER, 1.0)
        gm = gamma_entropy_roots(1.0)[0].root
        tp = tangent_point(low, 1.0, 1.0)
        assert tp.root == pytest.approx(1.0 / gm, rel=1e-5)

    def test_midpoint_of_unit_tangent(self):
        geh = gehring_surface(1.0, frac=0.6)
        x = (1.0 + GAMMA_PLUS_1) / 2.0
        y = GAMMA_PLUS_1 * (x - 1.0)
        assert tangent_point(geh, x, y).root == pytest.approx(1.0, abs=1e-9)

    def test_linearity_along_tangent_segments(self):
        surfaces = (
            BellmanSurface(SurfaceKind.AINF_UPPER, 2.0),
            gehring_surface(1.5),
            BellmanSurface(SurfaceKind.AINF_LOWER, 0.8),
        )
        for surface in surfaces:
            for v in (0.5, 1.0, 1.9):
                dev = tangent_linearity_check(surface, v, n_samples=50)
                assert dev <= 1e-9
                # two samples see only the segment endpoints: affine up to ulps
                assert tangent_linearity_check(surface, v, n_samples=2) <= 1e-15


class TestEvaluate:
    def test_lower_boundary_values(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        for x in (0.5, 1.0, 2.0):
            assert evaluate_surface(up, x, math.log(x)) == pytest.approx(
                x * math.log(x), abs=1e-12
            )
        geh = gehring_surface(1.0, frac=0.4)
        for x in (0.5, 1.0, 2.0):
            assert evaluate_surface(geh, x, x * math.log(x)) == pytest.approx(
                x ** (1.0 + geh.eps), rel=1e-12
            )
        low = BellmanSurface(SurfaceKind.AINF_LOWER, 1.0)
        for x in (0.5, 1.0, 2.0):
            assert evaluate_surface(low, x, x * math.log(x)) == pytest.approx(
                math.log(x), abs=1e-12
            )

    def test_frozen_gehring_value(self):
        geh = BellmanSurface(SurfaceKind.GEHRING, 1.0, eps=0.3)
        x = GAMMA_PLUS_1
        y = x * math.log(x) + 1.0 * x  # upper edge, where the tangent point is 1
        assert evaluate_surface(geh, x, y) == pytest.approx(GEHRING_B_1_03, rel=1e-12)

    def test_homogeneity_along_tangent_scaling(self):
        # B(v, v log v) identities pin the scaling normalization
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 4.0)
        v = 1.7
        assert evaluate_surface(up, v, math.log(v)) == pytest.approx(
            v * math.log(v), abs=1e-12
        )

    def test_flatness_envelope_attains_funny_bound(self):
        low = BellmanSurface(SurfaceKind.AINF_LOWER, 1.0)
        best = -math.inf
        for x in np.linspace(0.2, 3.0, 41):
            for f in np.linspace(0.0, 1.0, 81):
                y = x * math.log(x) + f * 1.0 * x
                val = x * math.exp(-evaluate_surface(low, float(x), float(y)))
                best = max(best, val)
        assert best == pytest.approx(FUNNY_BOUND_1, rel=1e-9)
        assert best <= FUNNY_BOUND_1 * (1.0 + 1e-9)

    def test_evaluate_many_matches_scalar(self):
        geh = gehring_surface(2.0)
        xs = np.linspace(0.5, 2.0, 7)
        ys = xs * np.log(xs) + 0.3 * 2.0 * xs
        vals = evaluate_many(geh, xs, ys)
        for x, y, v in zip(xs, ys, vals):
            assert v == pytest.approx(evaluate_surface(geh, float(x), float(y)), rel=1e-13)

    def test_gehring_needs_eps(self):
        bare = BellmanSurface(SurfaceKind.GEHRING, 1.0)
        with pytest.raises(ParameterError):
            evaluate_surface(bare, 1.0, 0.0)


class TestHessian:
    @pytest.mark.parametrize(
        "surface",
        [
            BellmanSurface(SurfaceKind.AINF_UPPER, 2.0),
            gehring_surface(1.0, frac=0.3),
            BellmanSurface(SurfaceKind.AINF_LOWER, 1.2),
        ],
        ids=["upper", "gehring", "lower"],
    )
    def test_closed_matches_finite_differences(self, surface):
        if surface.entropy_coordinates:
            pts = [(0.8, 0.8 * math.log(0.8) + 0.4 * surface.q * 0.8), (1.6, 1.6 * math.log(1.6) + 0.6 * surface.q * 1.6)]
        else:
            pts = [(0.8, math.log(0.8) - 0.4 * math.log(surface.q)), (1.6, math.log(1.6) - 0.6 * math.log(surface.q))]
        for x, y in pts:
            closed = hessian(surface, x, y, method="closed")
            fd = hessian(surface, x, y, method="fd")
            scale = max(1.0, float(np.max(np.abs(closed.matrix))))
            assert np.max(np.abs(closed.matrix - fd.matrix)) <= 1e-4 * scale

    def test_upper_surface_degenerate_concave(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 5.0)
        res = hessian(up, 1.3, math.log(1.3) - 0.5 * math.log(5.0))
        assert abs(res.det) <= 1e-10
        assert res.matrix[1, 1] < 0.0
        assert max(res.eigenvalues) <= 1e-10

    def test_gehring_concave_lower_convex(self):
        geh = gehring_surface(1.0, frac=0.5)
        res = hessian(geh, 1.1, 1.1 * math.log(1.1) + 0.3 * 1.1)
        assert max(res.eigenvalues) <= 1e-12
        low = BellmanSurface(SurfaceKind.AINF_LOWER, 1.0)
        res = hessian(low, 1.1, 1.1 * math.log(1.1) + 0.3 * 1.1)
        assert min(res.eigenvalues) >= -1e-12

    def test_boundary_warning_flag(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        near = hessian(up, 1.0, -1e-9, method="fd")
        assert near.boundary_warning
        interior = hessian(up, 1.0, -0.35, method="fd")
        assert not interior.boundary_warning

    def test_method_validation(self):
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 2.0)
        with pytest.raises(ParameterError):
            hessian(up, 1.0, -0.3, method="auto")


class TestBoundsCheck:
    def test_envelope_holds_and_ratio_at_e(self):
        rep = bounds_check_ainf(math.e, grid=80)
        assert rep.max_lower_violation <= 1e-9
        assert rep.max_upper_violation <= 1e-9
        assert rep.ratio_max == pytest.approx(RATIO_BOUND_E, rel=1e-12)
        assert rep.ratio_max <= rep.ratio_bound + 1e-12

    def test_various_q(self):
        for q in (1.2, 3.0, 20.0):
            rep = bounds_check_ainf(q, grid=60)
            assert rep.max_lower_violation <= 1e-9
            assert rep.max_upper_violation <= 1e-9

    def test_continuity_of_surface_along_path(self):
        # Lipschitz sanity sweep: small steps in (x, y) move B by O(step)
        up = BellmanSurface(SurfaceKind.AINF_UPPER, 3.0)
        xs = np.linspace(0.5, 2.0, 400)
        ys = np.log(xs) - 0.5 * math.log(3.0)
        vals = [evaluate_surface(up, float(x), float(y)) for x, y in zip(xs, ys)]
        diffs = np.abs(np.diff(vals))
        assert np.max(diffs) <= 0.05
