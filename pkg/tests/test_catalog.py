"""The bundled metric catalog: reference data, determinism, error handling."""

import numpy as np
import pytest

from curvkit.catalog import CATALOG_NAMES, catalog_entries, catalog_metric
from curvkit.curvature import curvature_pack
from curvkit.errors import CatalogError


def pack_for(entry, count=12, seed=0):
    pts = entry.sample_points(count, np.random.default_rng(seed))
    return curvature_pack(entry.metric, pts)


class TestConstruction:
    def test_every_name_builds(self):
        entries = catalog_entries()
        assert [e.name for e in entries] == list(CATALOG_NAMES)

    def test_unknown_name(self):
        with pytest.raises(CatalogError):
            catalog_metric("nope")

    def test_bad_parameters(self):
        with pytest.raises(CatalogError):
            catalog_metric("sphere4", r=-1.0)
        with pytest.raises(CatalogError):
            catalog_metric("sphere4", radius=1.0)
        with pytest.raises(CatalogError):
            catalog_metric("torus_perturbed", eps=0.5)
        with pytest.raises(CatalogError):
            catalog_metric("torus_perturbed", dim=5)
        with pytest.raises(CatalogError):
            catalog_metric("s2xs2", c1=0.0)

    def test_same_seed_same_field(self):
        a = catalog_metric("torus_perturbed", seed=3, eps=0.1)
        b = catalog_metric("torus_perturbed", seed=3, eps=0.1)
        pts = a.sample_points(10, np.random.default_rng(1))
        np.testing.assert_array_equal(
            a.metric.jets(pts, 2).value, b.metric.jets(pts, 2).value
        )

    def test_different_seed_different_field(self):
        a = catalog_metric("torus_perturbed", seed=0, eps=0.1)
        b = catalog_metric("torus_perturbed", seed=1, eps=0.1)
        pts = a.sample_points(10, np.random.default_rng(1))
        assert np.abs(a.metric.jets(pts, 0).value - b.metric.jets(pts, 0).value).max() > 1e-6


class TestReferenceData:
    @pytest.mark.parametrize(
        "name,params",
        [
            ("flat4", {}),
            ("sphere4", {"r": 1.0}),
            ("sphere4", {"r": 2.0}),
            ("hyperbolic4", {"c": 1.0}),
            ("hyperbolic4", {"c": 0.5}),
            ("s2xs2", {"c1": 1.0, "c2": 2.0}),
            ("s2xh2", {"c": 1.0}),
            ("constcurv3", {"c": 1.0}),
            ("constcurv3", {"c": -1.0}),
        ],
    )
    def test_scalar_invariants_match_closed_forms(self, name, params):
        entry = catalog_metric(name, **params)
        pack = pack_for(entry)
        for key, attr in (("tau", "tau"), ("norm_R2", "norm_R2"), ("norm_rho2", "norm_rho2")):
            want = entry.reference.get(key)
            if want is None:
                continue
            got = getattr(pack, attr)
            scale = max(abs(want), 1.0)
            assert np.abs(got - want).max() < 1e-9 * scale, (
                f"{name}: {key} off by {np.abs(got - want).max():.2e}"
            )

    def test_flat_entries_have_zero_curvature(self):
        for name, params in [("flat4", {}), ("torus_perturbed", {"eps": 0.0})]:
            entry = catalog_metric(name, **params)
            assert entry.reference.get("flat")
            pack = pack_for(entry)
            assert np.abs(pack.riemann).max() < 1e-12

    def test_perturbed_torus_is_actually_curved(self):
        pack = pack_for(catalog_metric("torus_perturbed", eps=0.1))
        assert np.abs(pack.riemann).max() > 1e-4

    def test_minkowski_signature(self):
        entry = catalog_metric("minkowski_perturbed")
        assert entry.metric.signature == (-1, 1, 1, 1)
        assert not entry.metric.riemannian
        pack = pack_for(entry)
        assert pack.signature == (-1, 1, 1, 1)

    def test_product_3d_entry_structure(self):
        entry = catalog_metric("product_3d_x_line")
        assert entry.dim == 4
        pack = pack_for(entry, count=6)
        # last coordinate is the flat line factor
        np.testing.assert_allclose(pack.g[..., 3, 3], 1.0, atol=1e-14)
        assert np.abs(pack.g[..., 3, :3]).max() < 1e-14

    def test_periodicity_flags(self):
        assert all(catalog_metric("torus_perturbed").metric.box.periodic)
        assert all(catalog_metric("minkowski_perturbed").metric.box.periodic)
        assert not any(catalog_metric("polynomial_random").metric.box.periodic)

    def test_closed_flags(self):
        closed = {e.name for e in catalog_entries() if e.closed}
        assert closed == {
            "torus_perturbed",
            "sphere4",
            "s2xs2",
            "constcurv3",
            "minkowski_perturbed",
        }
        # negative-curvature 3D space forms are open
        assert not catalog_metric("constcurv3", c=-1.0).closed


class TestSampling:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_samples_are_valid_chart_points(self, name):
        entry = catalog_metric(name)
        pts = entry.sample_points(40, np.random.default_rng(7))
        assert pts.shape == (40, entry.dim)
        # jets evaluate cleanly (nondegenerate) at every sampled point
        entry.metric.jets(pts, 2)

    def test_sampling_is_rng_driven(self):
        entry = catalog_metric("sphere4")
        a = entry.sample_points(5, np.random.default_rng(0))
        b = entry.sample_points(5, np.random.default_rng(0))
        c = entry.sample_points(5, np.random.default_rng(1))
        np.testing.assert_array_equal(a, b)
        assert np.abs(a - c).max() > 1e-8
