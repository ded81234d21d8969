"""Chart boxes, stacked symmetric jets, and builder-backed fields."""

import numpy as np
import pytest

from curvkit.errors import DegenerateMetricError, DomainError, JetOrderError
from curvkit.fields import Box, MetricField, Sym2Field, SymJet2, product_field
from curvkit.jets import ScalarJet


def diag_metric_builder(values):
    """Constant diagonal metric builder for a list of eigenvalues."""
    values = np.asarray(values, dtype=float)
    n = values.size

    def builder(points, order):
        out = SymJet2.zeros(n, order, points.shape[:-1])
        c0 = np.asarray(out.coeffs[0])
        c0[...] = np.diag(values)
        return out

    return builder


def curved_builder(points, order):
    """g = diag(1 + x0^2, 1) on a 2D chart, assembled from scalar jets."""
    x = ScalarJet.variable(points, 0, order)
    comps = {
        (0, 0): 1.0 + x * x,
        (1, 1): ScalarJet.constant(1.0, 2, order, points.shape[:-1]),
    }
    return SymJet2.from_components(2, order, comps, points.shape[:-1])


class TestBox:
    def test_sampling_stays_inside(self):
        box = Box([-1.0, 2.0], [1.0, 5.0])
        pts = box.sample(200, np.random.default_rng(0))
        assert pts.shape == (200, 2)
        assert np.all(box.contains(pts))

    def test_periodic_axes_never_reject(self):
        box = Box([0.0, 0.0], [1.0, 1.0], periodic=(True, False))
        pts = np.array([[7.3, 0.5], [-2.0, 0.99]])
        assert np.all(box.contains(pts))
        assert not box.contains(np.array([[0.5, 1.5]]))

    def test_period_property(self):
        box = Box([0.0], [2 * np.pi], periodic=(True,))
        assert box.period[0] == pytest.approx(2 * np.pi)

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            Box([0.0, 1.0], [1.0, 1.0])


class TestSymJet2:
    def test_from_components_fills_both_triangles(self):
        pts = np.random.default_rng(1).uniform(-1, 1, size=(4, 2))
        x = ScalarJet.variable(pts, 0, 2)
        y = ScalarJet.variable(pts, 1, 2)
        sym = SymJet2.from_components(
            2, 2, {(0, 1): x * y}, pts.shape[:-1]
        )
        np.testing.assert_allclose(sym.value[..., 0, 1], pts[:, 0] * pts[:, 1])
        np.testing.assert_allclose(sym.value[..., 1, 0], pts[:, 0] * pts[:, 1])
        assert np.all(sym.value[..., 0, 0] == 0.0)

    def test_component_round_trip(self):
        pts = np.random.default_rng(2).uniform(-1, 1, size=(3, 2))
        sym = curved_builder(pts, 2)
        back = sym.component(0, 0)
        np.testing.assert_allclose(back.value, 1.0 + pts[:, 0] ** 2)
        np.testing.assert_allclose(back.d(1)[..., 0], 2.0 * pts[:, 0])
        np.testing.assert_allclose(back.d(2)[..., 0, 0], 2.0)

    def test_truncated_refuses_extension(self):
        sym = SymJet2.zeros(2, 1, (3,))
        with pytest.raises(JetOrderError):
            sym.truncated(3)
        with pytest.raises(JetOrderError):
            sym.d(2)

    def test_linear_combination(self):
        a = SymJet2.zeros(2, 1, (2,))
        b = curved_builder(np.zeros((2, 2)), 1)
        combo = a + b * 2.0
        np.testing.assert_allclose(combo.value[..., 0, 0], 2.0)


class TestFields:
    def test_points_outside_box_raise(self):
        field = Sym2Field("h", Box([-1, -1], [1, 1]), curved_builder)
        with pytest.raises(DomainError):
            field.jets(np.array([[2.0, 0.0]]), 1)

    def test_dimension_mismatch_raises(self):
        field = Sym2Field("h", Box([-1, -1], [1, 1]), curved_builder)
        with pytest.raises(DomainError):
            field.jets(np.zeros((1, 3)), 1)

    def test_order_cap(self):
        field = Sym2Field("h", Box([-1, -1], [1, 1]), curved_builder, max_order=2)
        with pytest.raises(JetOrderError):
            field.jets(np.zeros((1, 2)), 3)

    def test_metric_signature_validation(self):
        with pytest.raises(ValueError):
            MetricField("g", Box([-1, -1], [1, 1]), curved_builder, signature=(1, 2))
        with pytest.raises(ValueError):
            MetricField("g", Box([-1, -1], [1, 1]), curved_builder, signature=(1,))

    def test_degenerate_metric_detected(self):
        field = MetricField(
            "g", Box([-1, -1], [1, 1]), diag_metric_builder([1.0, 0.0])
        )
        with pytest.raises(DegenerateMetricError):
            field.jets(np.zeros((1, 2)), 0)

    def test_signature_flip_detected(self):
        field = MetricField(
            "g", Box([-1, -1], [1, 1]), diag_metric_builder([1.0, -1.0])
        )
        with pytest.raises(DegenerateMetricError):
            field.jets(np.zeros((1, 2)), 0)
        lorentz = MetricField(
            "g",
            Box([-1, -1], [1, 1]),
            diag_metric_builder([-1.0, 1.0]),
            signature=(-1, 1),
        )
        jet = lorentz.jets(np.zeros((1, 2)), 0)
        assert not lorentz.riemannian
        np.testing.assert_allclose(jet.value[0], np.diag([-1.0, 1.0]))

    def test_deformed_adds_linearly(self):
        box = Box([-1, -1], [1, 1])
        g = MetricField("g", box, diag_metric_builder([2.0, 3.0]))
        h = Sym2Field("h", box, curved_builder)
        pts = np.random.default_rng(3).uniform(-0.9, 0.9, size=(5, 2))
        moved = g.deformed(h, 0.1)
        expect = np.diag([2.0, 3.0]) + 0.1 * curved_builder(pts, 0).value
        np.testing.assert_allclose(moved.jets(pts, 0).value, expect)
        assert moved.signature == g.signature

    def test_product_field_block_structure(self):
        b1 = Box([0.0], [1.0])
        b2 = Box([0.0, 0.0], [1.0, 1.0], periodic=(True, True))
        f1 = MetricField("a", b1, diag_metric_builder([5.0]))
        f2 = MetricField("b", b2, diag_metric_builder([1.0, 2.0]))
        prod = product_field(f1, f2, "axb")
        assert prod.dim == 3
        assert prod.box.periodic == (False, True, True)
        pts = np.random.default_rng(4).uniform(0.1, 0.9, size=(4, 3))
        val = prod.jets(pts, 1).value
        np.testing.assert_allclose(
            val, np.broadcast_to(np.diag([5.0, 1.0, 2.0]), val.shape)
        )
