"""Rates of change of curvature along g + t*h.

Each analytic derivative formula is checked against a central-difference
oracle with an observed convergence order, and against hand-derived
closed forms where the background is flat.  The integral checks run on
small periodic grids where the expected rates are known exactly.
"""

import numpy as np
import pytest

from curvkit.catalog import catalog_metric
from curvkit.curvature import CurvatureJets
from curvkit.errors import DomainError, JetOrderError, SignatureError
from curvkit.fields import SymJet2
from curvkit.jets import ScalarJet
from curvkit.variation import (
    VARIATION_SELECTORS,
    DeformationField,
    deformation_analytic,
    deformation_fd,
    fd_oracle,
    integral_variation_check,
    integral_variation_suite,
    inverse_metric_derivative,
    riemann_derivative,
    variation_integrands,
    volume_element_derivative,
)

QUANTITIES = (
    "inverse_metric",
    "volume_element",
    "christoffel",
    "riemann",
    "ricci",
    "scalar",
)

DEFORMATION_KINDS = ("waves", "polynomial", "conformal")


def torus(dim=4, eps=0.05, seed=1):
    return catalog_metric("torus_perturbed", dim=dim, eps=eps, seed=seed)


def sample(entry, count, seed=0):
    return entry.sample_points(count, np.random.default_rng(seed))


def metric_deformation(base):
    """h equal to the metric itself, so g + t*h = (1 + t) g."""

    def builder(points, order):
        return base.jets(points, order, validate=False)

    return DeformationField("metric_copy", base, builder, 1.0)


def zero_deformation(base):
    def builder(points, order):
        return SymJet2.zeros(base.dim, order, points.shape[:-1])

    return DeformationField("zero", base, builder, 0.0)


def wave_conformal(base, kvec, amplitude=0.02):
    """h = f * identity with f = amplitude * cos(<k, x>), jets exact."""
    kvec = np.asarray(kvec, dtype=float)
    eye = np.eye(base.dim)

    def builder(points, order):
        f = ScalarJet.wave(points, kvec, 0.0, amplitude, order)
        nb = points.ndim - 1
        coeffs = []
        for k in range(order + 1):
            c = f.d(k)
            block = c.reshape(c.shape[:nb] + (1, 1) + c.shape[nb:])
            coeffs.append(block * eye.reshape((1,) * nb + eye.shape + (1,) * k))
        return SymJet2(base.dim, coeffs)

    return DeformationField("wave_conformal", base, builder, amplitude)


class TestFdOracle:
    def test_cubic_gives_exact_quadratic_error(self):
        # central differences of t^3 + 2t have error exactly s^2, so the
        # observed orders are 2 and the Richardson estimate is exact
        fd = fd_oracle(lambda t: t**3 + 2.0 * t, steps=(4e-2, 2e-2, 1e-2), reference=2.0)
        assert fd.orders == pytest.approx((2.0, 2.0), abs=1e-9)
        assert fd.min_order == pytest.approx(2.0, abs=1e-9)
        assert abs(float(fd.estimate) - 2.0) < 1e-12
        assert fd.agrees_with(2.0, 1e-12)

    def test_consecutive_differences_estimate_the_order(self):
        fd = fd_oracle(np.sin, steps=(2e-1, 1e-1, 5e-2))
        assert 1.9 <= fd.min_order <= 2.1

    def test_exact_derivatives_report_infinite_order(self):
        fd = fd_oracle(lambda t: 3.0 * t, steps=(2e-2, 1e-2, 5e-3), reference=3.0)
        assert fd.min_order == float("inf")

    def test_two_steps_give_an_estimate_but_no_orders(self):
        fd = fd_oracle(np.sin, steps=(1e-2, 5e-3))
        assert fd.orders == ()
        assert abs(float(fd.estimate) - 1.0) < 1e-10

    def test_degenerate_step_lists_are_rejected(self):
        with pytest.raises(DomainError):
            fd_oracle(np.sin, steps=(1e-2,))
        with pytest.raises(DomainError):
            fd_oracle(np.sin, steps=(1e-2, 1e-2))


class TestPointwiseRates:
    @pytest.mark.parametrize("kind", DEFORMATION_KINDS)
    @pytest.mark.parametrize("quantity", QUANTITIES)
    def test_formula_matches_finite_differences(self, quantity, kind):
        entry = torus()
        h = getattr(DeformationField, kind)(entry.metric, seed=3, amplitude=0.05)
        pts = sample(entry, 6, seed=11)
        analytic = deformation_analytic(quantity, h, pts)
        fd = deformation_fd(
            quantity, h, pts, steps=(2e-3, 1e-3, 5e-4), reference=analytic
        )
        assert fd.agrees_with(analytic, 1e-6 * fd.scale)
        assert fd.min_order >= 1.9

    def test_rates_are_linear_in_the_deformation(self):
        entry = torus()
        base = entry.metric
        h1 = DeformationField.waves(base, seed=3, amplitude=0.05)
        h2 = DeformationField.polynomial(base, seed=5, amplitude=0.05)
        combo = DeformationField.combine(h1, h2, a=2.0, b=-0.5)
        pts = sample(entry, 5, seed=4)
        for quantity in ("christoffel", "ricci", "scalar"):
            got = deformation_analytic(quantity, combo, pts)
            want = 2.0 * deformation_analytic(quantity, h1, pts) - 0.5 * deformation_analytic(
                quantity, h2, pts
            )
            scale = max(float(np.max(np.abs(want))), 1e-30)
            np.testing.assert_allclose(got, want, atol=1e-12 * scale)

    def test_combining_over_different_bases_is_rejected(self):
        h1 = DeformationField.waves(torus(seed=1).metric, seed=0)
        h2 = DeformationField.waves(torus(seed=2).metric, seed=0)
        with pytest.raises(DomainError):
            DeformationField.combine(h1, h2)

    def test_conformal_wave_on_flat_space_has_closed_form_rates(self):
        # with g = delta and h = f*delta the scalar rate is -3*lap(f) and
        # the Ricci rate is -hess(f) - lap(f)/2 * delta; for a cosine wave
        # both reduce to multiples of f itself
        entry = torus(eps=0.0)
        kvec = np.array([1.0, 1.0, 0.0, 0.0])
        amp = 0.02
        h = wave_conformal(entry.metric, kvec, amplitude=amp)
        pts = sample(entry, 12, seed=6)
        f = amp * np.cos(pts @ kvec)
        k2 = float(kvec @ kvec)

        tau_rate = deformation_analytic("scalar", h, pts)
        np.testing.assert_allclose(tau_rate, 3.0 * k2 * f, atol=1e-12 * amp)

        ricci_rate = deformation_analytic("ricci", h, pts)
        want = f[..., None, None] * (np.outer(kvec, kvec) + 0.5 * k2 * np.eye(4))
        np.testing.assert_allclose(ricci_rate, want, atol=1e-12 * amp)

    def test_inverse_metric_rate_closed_form(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(5, 3, 3))
        g = a @ a.swapaxes(-1, -2) + 3.0 * np.eye(3)
        h = rng.normal(size=(5, 3, 3))
        h = 0.5 * (h + h.swapaxes(-1, -2))
        gi = np.linalg.inv(g)
        want = -gi @ h @ gi
        np.testing.assert_allclose(inverse_metric_derivative(g, h), want, atol=1e-12)
        with pytest.raises(DomainError):
            inverse_metric_derivative(np.zeros((3, 3)), h[0])

    def test_volume_rate_is_half_the_raised_trace(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(4, 4))
        g = a @ a.T + 4.0 * np.eye(4)
        h = rng.normal(size=(4, 4))
        h = 0.5 * (h + h.T)
        want = 0.5 * np.trace(np.linalg.inv(g) @ h)
        got = volume_element_derivative(g, h)
        assert float(got) == pytest.approx(want, abs=1e-13)
        fd = fd_oracle(
            lambda t: np.sqrt(np.linalg.det(g + t * h) / np.linalg.det(g)),
            steps=(2e-3, 1e-3, 5e-4),
            reference=want,
        )
        assert fd.agrees_with(want, 1e-10)

    def test_volume_rate_needs_a_riemannian_metric(self):
        entry = catalog_metric("minkowski_perturbed", eps=0.02, seed=0)
        h = DeformationField.polynomial(entry.metric, seed=1)
        pts = sample(entry, 3)
        with pytest.raises(SignatureError):
            deformation_analytic("volume_element", h, pts)

    def test_stencil_outside_the_safety_region_is_rejected(self):
        entry = torus()
        h = DeformationField.waves(entry.metric, seed=3)
        pts = sample(entry, 4)
        with pytest.raises(DomainError):
            deformation_fd("scalar", h, pts, steps=(1e3, 5e2))

    def test_unknown_quantity_is_rejected(self):
        entry = torus()
        h = DeformationField.waves(entry.metric, seed=3)
        with pytest.raises(DomainError):
            deformation_fd("torsion", h, sample(entry, 2))
        with pytest.raises(DomainError):
            deformation_analytic("torsion", h, sample(entry, 2))

    def test_curvature_rates_need_order_two_jets(self):
        entry = torus()
        h = DeformationField.waves(entry.metric, seed=3)
        pts = sample(entry, 2)
        g_sym = entry.metric.jets(pts, 1)
        h_sym = h.jets(pts, 1)
        with pytest.raises(JetOrderError):
            riemann_derivative(g_sym, h_sym)

    def test_safe_step_range_from_eigenvalues(self):
        entry = torus(eps=0.0)
        assert metric_deformation(entry.metric).max_safe_t() == pytest.approx(0.5)
        assert zero_deformation(entry.metric).max_safe_t() == float("inf")


class TestIntegrands:
    @pytest.mark.parametrize(
        "name,params",
        [
            ("torus_perturbed", {"dim": 4, "eps": 0.05, "seed": 1}),
            ("sphere4", {"r": 1.0}),
            ("s2xs2", {"c1": 1.0, "c2": 2.0}),
        ],
    )
    def test_total_curvature_integrand_vanishes_in_four_dimensions(self, name, params):
        # the quadratic curvature identity kills the combined integrand
        # pointwise, which is what makes the differentiated total integral
        # vanish for every deformation of a closed four-manifold; the scale
        # is curvature squared times the raised-index factor, since the
        # individual integrands can themselves vanish (round sphere)
        entry = catalog_metric(name, **params)
        pts = sample(entry, 20, seed=9)
        cjets = CurvatureJets(entry.metric, pts, order=4)
        out = variation_integrands(cjets)
        pack = cjets.pack
        scale = (pack.norm_R2 + pack.tau**2) * np.abs(pack.g_inv).max(axis=(-2, -1))
        worst = np.abs(out["gauss_bonnet_total"]).max(axis=(-2, -1))
        assert float((worst / scale).max()) <= 1e-10

    def test_round_sphere_is_critical_for_quadratic_functionals(self):
        # at a space form the gradient of each quadratic curvature integral
        # is zero, not just their alternating sum; sampled away from the
        # chart margin, where fourth-order jets of the conformal factor
        # keep full precision
        entry = catalog_metric("sphere4", r=1.0)
        lo = np.asarray(entry.metric.box.lo)
        hi = np.asarray(entry.metric.box.hi)
        u = np.random.default_rng(9).uniform(0.25, 0.75, size=(10, entry.dim))
        pts = lo + u * (hi - lo)
        cjets = CurvatureJets(entry.metric, pts, order=4)
        out = variation_integrands(cjets)
        pack = cjets.pack
        scale = (pack.norm_R2 + pack.tau**2) * np.abs(pack.g_inv).max(axis=(-2, -1))
        for selector in ("curv_norm", "ricci_norm", "tau_sq"):
            worst = np.abs(out[selector]).max(axis=(-2, -1))
            assert float((worst / scale).max()) <= 1e-10, selector

    def test_scalar_integrand_vanishes_in_two_dimensions(self):
        # -rho + tau/2 g is the (raised) Einstein tensor, identically zero
        # in dimension two
        entry = torus(dim=2, eps=0.1, seed=3)
        pts = sample(entry, 30, seed=2)
        cjets = CurvatureJets(entry.metric, pts, order=2)
        out = variation_integrands(cjets)
        scale = max(float(np.max(np.abs(cjets.pack.ricci))), 1e-30)
        assert float(np.max(np.abs(out["scalar_2d"]))) <= 1e-12 * scale

    def test_available_integrands_follow_the_jet_order(self):
        entry = torus()
        pts = sample(entry, 3)
        shallow = variation_integrands(CurvatureJets(entry.metric, pts, order=2))
        assert set(shallow) == {"scalar_2d"}
        deep = variation_integrands(CurvatureJets(entry.metric, pts, order=4))
        assert set(deep) == set(VARIATION_SELECTORS)


class TestIntegralChecks:
    def test_two_torus_scalar_integral_is_stationary(self):
        # the integrated scalar curvature of a closed surface never moves,
        # and the matching integrand is exactly zero
        entry = torus(dim=2, eps=0.08, seed=2)
        h = DeformationField.waves(entry.metric, seed=5, amplitude=0.05)
        rec = integral_variation_check("scalar_2d", entry, h, nodes=16, dt=1e-3)
        assert rec.passed
        assert abs(rec.rhs) <= 1e-12
        assert abs(rec.lhs) <= 1e-8
        assert rec.nodes == (16, 16)

    def test_flat_torus_rates_vanish_on_both_sides(self):
        # at t = 0 every curvature integrand is zero, and the integrals
        # themselves are O(t^2), so both sides sit at quadrature noise
        entry = torus(eps=0.0)
        h = DeformationField.waves(entry.metric, seed=7, amplitude=0.05)
        records = integral_variation_suite(entry, h, nodes=8, dt=1e-3)
        assert [r.which for r in records] == [
            s for s in VARIATION_SELECTORS if s != "scalar_2d"
        ]
        for rec in records:
            assert rec.passed, (rec.which, rec.lhs, rec.rhs)
            assert abs(rec.rhs) <= 1e-12
            assert abs(rec.lhs) <= 1e-6
            assert rec.nodes == (8, 8, 8, 8)
            assert np.isfinite(rec.coarse_lhs)

    def test_open_charts_are_rejected(self):
        entry = catalog_metric("polynomial_random", dim=4, seed=0)
        h = DeformationField.polynomial(entry.metric, seed=1)
        with pytest.raises(DomainError):
            integral_variation_suite(entry, h, nodes=4)

    def test_mismatched_deformation_base_is_rejected(self):
        h = DeformationField.waves(torus(dim=2, seed=1).metric, seed=0)
        other = torus(dim=2, seed=2)
        with pytest.raises(DomainError):
            integral_variation_suite(other, h, nodes=4)

    def test_unknown_selector_is_rejected(self):
        entry = torus(dim=2)
        h = DeformationField.waves(entry.metric, seed=0)
        with pytest.raises(DomainError):
            integral_variation_suite(entry, h, which=["volume"], nodes=4)

    def test_step_beyond_certified_range_is_rejected(self):
        entry = torus(dim=2, eps=0.0)
        h = DeformationField.waves(entry.metric, seed=5, amplitude=0.05)
        with pytest.raises(DomainError):
            integral_variation_suite(entry, h, which=["scalar_2d"], nodes=8, dt=1e6)
