"""Curvature assembly: Christoffel oracles, symmetries, jet pipeline."""

import numpy as np
import pytest

from curvkit.catalog import catalog_metric
from curvkit.curvature import (
    CurvatureJets,
    check_riemann_symmetries,
    christoffel,
    christoffel_jet,
    covariant_from_gamma,
    curvature_pack,
    density_arrays,
    density_arrays_numpy,
    laplace_beltrami,
    pack_from_sym_jets,
)
from curvkit.fields import Box, MetricField, SymJet2
from curvkit.jetalg import JetTensor
from curvkit.jets import ScalarJet

ENTRY_SPECS = [
    ("flat4", {}),
    ("torus_perturbed", {"eps": 0.1}),
    ("sphere4", {}),
    ("hyperbolic4", {}),
    ("s2xs2", {"c1": 1.0, "c2": 0.5}),
    ("s2xh2", {}),
    ("product_3d_x_line", {}),
    ("constcurv3", {}),
    ("polynomial_random", {"seed": 2}),
    ("conformal_flat", {}),
    ("minkowski_perturbed", {}),
]


def conformal_metric_2d():
    """g = exp(2 phi) delta with phi = a.x + quadratic, on a small box."""
    a = np.array([0.3, -0.2])
    q = np.array([[0.1, 0.05], [0.05, -0.08]])

    def builder(points, order):
        x = ScalarJet.variable(points, 0, order)
        y = ScalarJet.variable(points, 1, order)
        coords = [x, y]
        phi = a[0] * x + a[1] * y
        for i in range(2):
            for j in range(2):
                phi = phi + q[i, j] * coords[i] * coords[j]
        conf = (2.0 * phi).exp()
        zero = ScalarJet.constant(0.0, 2, order, points.shape[:-1])
        comps = {(0, 0): conf, (1, 1): conf, (0, 1): zero}
        return SymJet2.from_components(2, order, comps, points.shape[:-1])

    def grad_phi(points):
        return a + 2.0 * points @ q

    return MetricField("conf2", Box([-1, -1], [1, 1]), builder), grad_phi


class TestChristoffel:
    def test_conformal_closed_form(self):
        # for g = exp(2 phi) delta:
        # Gamma^k_ij = d_i(phi) delta^k_j + d_j(phi) delta^k_i - d_k(phi) delta_ij
        metric, grad_phi = conformal_metric_2d()
        pts = np.random.default_rng(0).uniform(-0.9, 0.9, size=(7, 2))
        gamma = christoffel(metric, pts)
        dphi = grad_phi(pts)
        eye = np.eye(2)
        expected = (
            np.einsum("...i,kj->...kij", dphi, eye)
            + np.einsum("...j,ki->...kij", dphi, eye)
            - np.einsum("...k,ij->...kij", dphi, eye)
        )
        np.testing.assert_allclose(gamma, expected, atol=1e-12)

    def test_flat_metric_has_zero_gamma(self):
        entry = catalog_metric("flat4")
        pts = entry.sample_points(5, np.random.default_rng(1))
        assert np.abs(christoffel(entry.metric, pts)).max() == 0.0

    def test_lower_index_pair_is_symmetric(self):
        entry = catalog_metric("sphere4")
        pts = entry.sample_points(10, np.random.default_rng(2))
        gamma = christoffel(entry.metric, pts)
        np.testing.assert_allclose(gamma, gamma.swapaxes(-1, -2), atol=1e-14)


class TestPack:
    @pytest.mark.parametrize("name,params", ENTRY_SPECS)
    def test_riemann_symmetries_hold(self, name, params):
        entry = catalog_metric(name, **params)
        pts = entry.sample_points(10, np.random.default_rng(3))
        report = check_riemann_symmetries(curvature_pack(entry.metric, pts))
        assert report.passed, f"{name}: residual {report.max_residual:.2e}"

    @pytest.mark.parametrize("name,params", ENTRY_SPECS)
    def test_metric_is_parallel(self, name, params):
        # nabla g = 0 is exact for the Levi-Civita connection
        entry = catalog_metric(name, **params)
        pts = entry.sample_points(8, np.random.default_rng(4))
        sym = entry.metric.jets(pts, 2, validate=False)
        gamma_jet, _ = christoffel_jet(sym)
        g_jet = JetTensor.from_symjet(sym.truncated(1), types="dd")
        nabla_g = covariant_from_gamma(g_jet, gamma_jet)
        scale = max(np.abs(sym.value).max(), 1.0)
        assert np.abs(nabla_g.value()).max() < 1e-12 * scale

    def test_sphere_sectional_curvature(self):
        # in this index convention constant curvature c means
        # R_ijkl = c (g_il g_jk - g_ik g_jl), with tau = n(n-1)c > 0
        entry = catalog_metric("sphere4", r=2.0)
        c = 0.25
        pts = entry.sample_points(6, np.random.default_rng(5))
        pack = curvature_pack(entry.metric, pts)
        want = c * (
            np.einsum("...il,...jk->...ijkl", pack.g, pack.g)
            - np.einsum("...ik,...jl->...ijkl", pack.g, pack.g)
        )
        scale = np.abs(want).max()
        np.testing.assert_allclose(pack.riemann, want, atol=1e-11 * scale)
        # chart conditioning near the pole margin costs a few digits
        np.testing.assert_allclose(pack.tau, 12 * c, rtol=1e-9)

    def test_hyperbolic_sign(self):
        entry = catalog_metric("hyperbolic4", c=1.0)
        pts = entry.sample_points(6, np.random.default_rng(6))
        pack = curvature_pack(entry.metric, pts)
        want = -1.0 * (
            np.einsum("...il,...jk->...ijkl", pack.g, pack.g)
            - np.einsum("...ik,...jl->...ijkl", pack.g, pack.g)
        )
        scale = np.abs(want).max()
        np.testing.assert_allclose(pack.riemann, want, atol=1e-10 * scale)
        np.testing.assert_allclose(pack.tau, -12.0, rtol=1e-12)

    def test_check_tensors_against_raw_contractions(self):
        entry = catalog_metric("torus_perturbed", eps=0.15, seed=5)
        pts = entry.sample_points(6, np.random.default_rng(7))
        pack = curvature_pack(entry.metric, pts)
        gi = pack.g_inv
        r_up3 = np.einsum(
            "...ai,...bj,...ck,...ijkl->...abcl", gi, gi, gi, pack.riemann
        )
        r_check = np.einsum("...abci,...abcj->...ij", pack.riemann, r_up3)
        np.testing.assert_allclose(pack.r_check, r_check, atol=1e-12)
        rho_up = np.einsum("...ia,...jb,...ab->...ij", gi, gi, pack.ricci)
        l_rho = 2.0 * np.einsum("...iabj,...ab->...ij", pack.riemann, rho_up)
        np.testing.assert_allclose(pack.l_rho, l_rho, atol=1e-12)

    def test_signature_flip_changes_nothing_even_order(self):
        # scalar invariants built from even metric contractions agree between
        # g and -g in even dimensions; a cheap parity check of conventions
        box = Box([-1] * 2, [1] * 2)

        def builder_pos(points, order):
            x = ScalarJet.variable(points, 0, order)
            conf = (0.4 * x * x + 1.0).log().exp()
            zero = ScalarJet.constant(0.0, 2, order, points.shape[:-1])
            return SymJet2.from_components(
                2, order, {(0, 0): conf, (1, 1): conf, (0, 1): zero},
                points.shape[:-1],
            )

        def builder_neg(points, order):
            return builder_pos(points, order) * -1.0

        gp = MetricField("p", box, builder_pos)
        gn = MetricField("n", box, builder_neg, signature=(-1, -1))
        pts = np.random.default_rng(8).uniform(-0.9, 0.9, size=(5, 2))
        pp = curvature_pack(gp, pts)
        pn = curvature_pack(gn, pts)
        np.testing.assert_allclose(pn.tau, -pp.tau, atol=1e-12)
        np.testing.assert_allclose(pn.norm_R2, pp.norm_R2, atol=1e-12)


class TestDensities:
    def test_jitted_and_numpy_routes_agree(self):
        entry = catalog_metric("torus_perturbed", eps=0.12, seed=3)
        pts = entry.sample_points(50, np.random.default_rng(9))
        sym = entry.metric.jets(pts, 2)
        got = density_arrays(*sym.coeffs[:3])
        want = density_arrays_numpy(*sym.coeffs[:3])
        for a, b in zip(got, want):
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-13)

    def test_densities_match_pack(self):
        entry = catalog_metric("s2xh2")
        pts = entry.sample_points(12, np.random.default_rng(10))
        sym = entry.metric.jets(pts, 2)
        sqrt_det, tau, r2, rho2 = density_arrays(*sym.coeffs[:3])
        pack = pack_from_sym_jets(sym)
        np.testing.assert_allclose(tau, pack.tau, atol=1e-12)
        np.testing.assert_allclose(r2, pack.norm_R2, atol=1e-12)
        np.testing.assert_allclose(rho2, pack.norm_rho2, atol=1e-12)
        np.testing.assert_allclose(sqrt_det, pack.sqrt_det, atol=1e-14)


class TestJetPipeline:
    def test_jet_values_match_pack(self):
        entry = catalog_metric("torus_perturbed", eps=0.1, seed=1)
        pts = entry.sample_points(6, np.random.default_rng(11))
        cj = CurvatureJets(entry.metric, pts, order=4)
        np.testing.assert_allclose(cj.rho_jet.value(), cj.pack.ricci, atol=1e-12)
        np.testing.assert_allclose(cj.tau_jet.value(), cj.pack.tau, atol=1e-12)
        np.testing.assert_allclose(cj.gamma_jet.value(), cj.pack.gamma, atol=1e-12)
        assert cj.rho_jet.order == 2
        assert cj.gamma_jet.order == 3

    def test_ricci_derivative_against_finite_differences(self):
        entry = catalog_metric("torus_perturbed", eps=0.1, seed=1)
        pts = entry.sample_points(4, np.random.default_rng(12))
        cj = CurvatureJets(entry.metric, pts, order=3)
        eps = 1e-5
        for axis in range(4):
            e = np.zeros(4)
            e[axis] = eps
            plus = curvature_pack(entry.metric, pts + e).ricci
            minus = curvature_pack(entry.metric, pts - e).ricci
            fd = (plus - minus) / (2 * eps)
            np.testing.assert_allclose(
                cj.rho_jet.coeffs[1][..., axis], fd, atol=1e-8
            )

    def test_scalar_hessian_is_symmetric_covariantly(self):
        # torsion-free connection: nabla_i nabla_j tau = nabla_j nabla_i tau
        entry = catalog_metric("torus_perturbed", eps=0.1, seed=2)
        pts = entry.sample_points(5, np.random.default_rng(13))
        cj = CurvatureJets(entry.metric, pts, order=4)
        tau_grad = covariant_from_gamma(cj.tau_jet, cj.gamma_jet)
        tau_hess = covariant_from_gamma(tau_grad, cj.gamma_jet)
        h = tau_hess.value()
        scale = max(np.abs(h).max(), 1.0)
        np.testing.assert_allclose(h, h.swapaxes(-1, -2), atol=1e-12 * scale)

    def test_laplacian_sign_on_flat_torus(self):
        # Delta cos(x0) = -cos(x0) pins the Laplacian convention
        entry = catalog_metric("torus_perturbed", eps=0.0)
        pts = entry.sample_points(9, np.random.default_rng(14))
        pack = curvature_pack(entry.metric, pts)
        f = ScalarJet.wave(pts, np.array([1.0, 0, 0, 0]), 0.0, 1.0, 2)
        lap = laplace_beltrami(f, pack)
        np.testing.assert_allclose(lap, -np.cos(pts[:, 0]), atol=1e-13)

    def test_truncated_inverse_depth_suffices(self):
        # the inverse-metric jet inside the Christoffel assembly only needs
        # one order less than the metric jet; orders must reflect that
        entry = catalog_metric("sphere4")
        pts = entry.sample_points(3, np.random.default_rng(15))
        sym = entry.metric.jets(pts, 3, validate=False)
        gamma_jet, g_inv_jet = christoffel_jet(sym)
        assert gamma_jet.order == 2
        assert g_inv_jet.order == 2
