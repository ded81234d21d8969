"""Curvature assembly from metric jets.

Two independent routes are implemented on purpose:

* the reference route builds ``R_ijk^l`` from Christoffel derivatives and
  lowers it (any dimension, full field set);
* the dense route assembles the lowered tensor directly from the
  classical second-derivative + Christoffel-quadratic formula, either
  vectorised here or jitted in :mod:`curvkit._kernels` for 4D scans.

Index conventions (calibrated so the unit round 4-sphere has tau = +12):

    R_ijk^l = d_i Gamma^l_jk - d_j Gamma^l_ik
              + Gamma^l_ia Gamma^a_jk - Gamma^l_ja Gamma^a_ik
    R_ijkl  = R_ijk^m g_ml
    rho_jk  = R_ajk^a,   tau = g^jk rho_jk

Derived fields follow the same contractions throughout the package:
``r_check[ij] = R_abci R^abc_j``, ``rho_check[ij] = rho_ia rho^a_j`` and
``l_rho[ij] = 2 R_iabj rho^ab``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SignatureError
from .fields import MetricField, SymJet2
from .jetalg import JetTensor, inverse_matrix_jet, jet_einsum


@dataclass
class CurvaturePack:
    """Pointwise curvature data of a metric (batched over points)."""

    dim: int
    signature: tuple
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray      # Gamma^k_ij, axes [..., k, i, j]
    dgamma: np.ndarray     # d_d Gamma^k_ij, axes [..., d, k, i, j]
    riemann: np.ndarray    # R_ijkl (all indices down)
    riemann_up: np.ndarray  # R_ijk^l
    ricci: np.ndarray
    tau: np.ndarray
    norm_R2: np.ndarray
    norm_rho2: np.ndarray
    r_check: np.ndarray
    rho_check: np.ndarray
    l_rho: np.ndarray
    sqrt_det: np.ndarray

    @property
    def batch_shape(self):
        return self.tau.shape

    @property
    def riemannian(self):
        return all(s == 1 for s in self.signature)


def _christoffel_arrays(g_inv, d1):
    """Gamma with the first index low and high from d_a g_ij (axes last)."""
    gamma_low = 0.5 * (
        np.einsum("...cji->...cij", d1)
        + np.einsum("...icj->...cij", d1)
        - np.einsum("...ijc->...cij", d1)
    )
    gamma_up = np.einsum("...kc,...cij->...kij", g_inv, gamma_low)
    return gamma_low, gamma_up


def pack_from_sym_jets(sym, signature=None):
    """Reference curvature pack from order-2 metric jets."""
    g, d1, d2 = sym.coeffs[0], sym.coeffs[1], sym.coeffs[2]
    n = sym.dim
    signature = tuple(signature) if signature is not None else (1,) * n

    g_inv = np.linalg.inv(g)
    gamma_low, gamma_up = _christoffel_arrays(g_inv, d1)

    # d_a g^ij = -g^ik g^jl d_a g_kl
    step = np.einsum("...ik,...kla->...ail", g_inv, d1)
    dg_inv = -np.einsum("...jl,...ail->...aij", g_inv, step)
    dgamma_low = 0.5 * (
        np.einsum("...cjid->...dcij", d2)
        + np.einsum("...icjd->...dcij", d2)
        - np.einsum("...ijcd->...dcij", d2)
    )
    dgamma_up = np.einsum("...dkc,...cij->...dkij", dg_inv, gamma_low) + np.einsum(
        "...kc,...dcij->...dkij", g_inv, dgamma_low
    )

    riemann_up = (
        np.einsum("...iljk->...ijkl", dgamma_up)
        - np.einsum("...jlik->...ijkl", dgamma_up)
        + np.einsum("...lia,...ajk->...ijkl", gamma_up, gamma_up)
        - np.einsum("...lja,...aik->...ijkl", gamma_up, gamma_up)
    )
    riemann = np.einsum("...ijkm,...ml->...ijkl", riemann_up, g)

    ricci = np.einsum("...ajka->...jk", riemann_up)
    tau = np.einsum("...jk,...jk->...", g_inv, ricci)

    r1 = np.einsum("...ai,...ijkl->...ajkl", g_inv, riemann)
    r2 = np.einsum("...bj,...ajkl->...abkl", g_inv, r1)
    r_mix = np.einsum("...ck,...abkl->...abcl", g_inv, r2)  # R^abc_l
    r_all = np.einsum("...dl,...abcl->...abcd", g_inv, r_mix)
    norm_R2 = np.einsum("...ijkl,...ijkl->...", riemann, r_all)
    r_check = np.einsum("...abci,...abcj->...ij", riemann, r_mix)

    rho_up = np.einsum("...ia,...jb,...ab->...ij", g_inv, g_inv, ricci)
    norm_rho2 = np.einsum("...ij,...ij->...", ricci, rho_up)
    rho_check = np.einsum("...ia,...ab,...bj->...ij", ricci, g_inv, ricci)
    l_rho = 2.0 * np.einsum("...iabj,...ab->...ij", riemann, rho_up)

    sqrt_det = np.sqrt(np.abs(np.linalg.det(g)))

    return CurvaturePack(
        dim=n,
        signature=signature,
        g=g,
        g_inv=g_inv,
        gamma=gamma_up,
        dgamma=dgamma_up,
        riemann=riemann,
        riemann_up=riemann_up,
        ricci=ricci,
        tau=tau,
        norm_R2=norm_R2,
        norm_rho2=norm_rho2,
        r_check=r_check,
        rho_check=rho_check,
        l_rho=l_rho,
        sqrt_det=sqrt_det,
    )


def christoffel(metric, points):
    """Gamma^k_ij at points, axes [..., k, i, j]."""
    sym = metric.jets(points, 1)
    g_inv = np.linalg.inv(sym.coeffs[0])
    _, gamma_up = _christoffel_arrays(g_inv, sym.coeffs[1])
    return gamma_up


def curvature_pack(metric, points, signature_aware=True):
    """Full curvature pack of a metric field at a batch of points."""
    if not signature_aware and not metric.riemannian:
        raise SignatureError(
            "signature_aware=False is only meaningful for Riemannian metrics"
        )
    sym = metric.jets(points, 2)
    return pack_from_sym_jets(sym, signature=metric.signature)


# ----------------------------------------------------------------------
# dense density route (lowered Riemann assembled directly)
# ----------------------------------------------------------------------


def riemann_lowered(g_inv, gamma_low, gamma_up, d2):
    """R_ijkl from second metric derivatives and Christoffel products."""
    sec = 0.5 * (
        np.einsum("...jlik->...ijkl", d2)
        + np.einsum("...ikjl->...ijkl", d2)
        - np.einsum("...jkil->...ijkl", d2)
        - np.einsum("...iljk->...ijkl", d2)
    )
    quad = np.einsum("...aik,...ajl->...ijkl", gamma_up, gamma_low) - np.einsum(
        "...ail,...ajk->...ijkl", gamma_up, gamma_low
    )
    return sec + quad


def density_arrays_numpy(g, d1, d2):
    """(sqrt|det g|, tau, |R|^2, |rho|^2) per node; any dimension."""
    g_inv = np.linalg.inv(g)
    gamma_low, gamma_up = _christoffel_arrays(g_inv, d1)
    riem = riemann_lowered(g_inv, gamma_low, gamma_up, d2)
    rho = np.einsum("...ac,...ajkc->...jk", g_inv, riem)
    tau = np.einsum("...jk,...jk->...", g_inv, rho)
    rho_up = np.einsum("...ia,...jc,...ac->...ij", g_inv, g_inv, rho)
    rho2 = np.einsum("...ij,...ij->...", rho, rho_up)
    r1 = np.einsum("...ia,...ijkl->...ajkl", g_inv, riem)
    r2 = np.einsum("...jb,...ajkl->...abkl", g_inv, r1)
    r3 = np.einsum("...kc,...abkl->...abcl", g_inv, r2)
    r4 = np.einsum("...ld,...abcl->...abcd", g_inv, r3)
    norm_R2 = np.einsum("...ijkl,...ijkl->...", riem, r4)
    sqrt_det = np.sqrt(np.abs(np.linalg.det(g)))
    return sqrt_det, tau, norm_R2, rho2


def density_arrays(g, d1, d2):
    """Dense scalar densities; jitted route for 4D, numpy otherwise."""
    if _kernels.HAVE_NUMBA and g.shape[-1] == 4:
        flat_g = np.ascontiguousarray(g.reshape(-1, 4, 4))
        flat_d1 = np.ascontiguousarray(d1.reshape(-1, 4, 4, 4))
        flat_d2 = np.ascontiguousarray(d2.reshape(-1, 4, 4, 4, 4))
        out = np.empty((flat_g.shape[0], 4))
        _kernels.density_kernel(flat_g, flat_d1, flat_d2, out)
        batch = g.shape[:-2]
        return tuple(out[:, i].reshape(batch) for i in range(4))
    return density_arrays_numpy(g, d1, d2)


# ----------------------------------------------------------------------
# symmetry checks
# ----------------------------------------------------------------------


@dataclass
class SymmetryReport:
    """Max-norm residuals of the algebraic Riemann symmetries."""

    antisym_first: float
    antisym_last: float
    pair_symmetry: float
    first_bianchi: float
    scale: float
    tolerance: float

    @property
    def max_residual(self):
        return max(
            self.antisym_first, self.antisym_last, self.pair_symmetry, self.first_bianchi
        )

    @property
    def passed(self):
        return self.max_residual <= self.tolerance * max(self.scale, 1.0)


def check_riemann_symmetries(pack, tolerance=1e-10):
    """Residuals of antisymmetry, pair symmetry and the first Bianchi sum."""
    r = pack.riemann
    scale = float(np.max(np.abs(r))) if r.size else 0.0
    a1 = float(np.max(np.abs(r + np.einsum("...jikl->...ijkl", r))))
    a2 = float(np.max(np.abs(r + np.einsum("...ijlk->...ijkl", r))))
    pair = float(np.max(np.abs(r - np.einsum("...klij->...ijkl", r))))
    bianchi = float(
        np.max(
            np.abs(
                r
                + np.einsum("...jkil->...ijkl", r)
                + np.einsum("...kijl->...ijkl", r)
            )
        )
    )
    return SymmetryReport(a1, a2, pair, bianchi, scale, tolerance)


# ----------------------------------------------------------------------
# jet pipeline (curvature fields with stored derivatives)
# ----------------------------------------------------------------------


def christoffel_jet(sym):
    """Jets of Gamma^k_ij and of g^ij (both order m-1) from metric jets."""
    g = JetTensor.from_symjet(sym)
    g_inv = inverse_matrix_jet(g.truncated(max(g.order - 1, 0)))
    dg = g.shift_derivative()
    gamma_low = (
        dg.transpose_components((1, 0, 2)) + dg.transpose_components((2, 1, 0)) - dg
    ) * 0.5
    gamma_up = jet_einsum(
        "kc,cij->kij", g_inv.truncated(gamma_low.order), gamma_low, types="udd"
    )
    return gamma_up, g_inv


def ricci_jet(gamma_up):
    """Jet of the Ricci tensor (order of gamma minus one)."""
    dgamma = gamma_up.shift_derivative()
    t1 = dgamma.component_einsum("aajk->jk")
    t2 = dgamma.component_einsum("jaak->jk")
    gt = gamma_up.truncated(gamma_up.order - 1)
    t3 = jet_einsum("aam,mjk->jk", gt, gt)
    t4 = jet_einsum("ajm,mak->jk", gt, gt)
    return JetTensor(
        gamma_up.dim,
        2,
        [(t1.coeffs[k] - t2.coeffs[k] + t3.coeffs[k] - t4.coeffs[k]) for k in range(t1.order + 1)],
        "dd",
    )


def scalar_curvature_jet(g_inv, ricci):
    """Jet of tau = g^jk rho_jk."""
    return jet_einsum("jk,jk->", g_inv.truncated(ricci.order), ricci, types="")


class CurvatureJets:
    """Curvature pack plus stored derivatives of rho and tau.

    Evaluating metric jets at order 4 leaves two derivative orders on the
    Ricci tensor, exactly what the variation integrands consume.
    """

    def __init__(self, metric, points, order=4, validate=False):
        sym = metric.jets(points, order, validate=validate) if isinstance(
            metric, MetricField
        ) else metric._builder(points, order)
        self.sym = sym
        self.pack = pack_from_sym_jets(sym.truncated(2), signature=getattr(metric, "signature", None))
        gamma_up, g_inv = christoffel_jet(sym)
        self.gamma_jet = gamma_up
        self.g_inv_jet = g_inv
        self.rho_jet = ricci_jet(gamma_up)
        self.tau_jet = scalar_curvature_jet(g_inv, self.rho_jet)


# ----------------------------------------------------------------------
# covariant differentiation
# ----------------------------------------------------------------------

_SLOT_LETTERS = "ijklmnpq"


def covariant_from_gamma(tensor, gamma_jet):
    """nabla T as a jet tensor; derivative slot appended last ('d')."""
    if tensor.types is None:
        raise ValueError("tensor needs a types string of 'u'/'d' flags")
    rank = tensor.rank
    comps = _SLOT_LETTERS[:rank]
    shifted = tensor.shift_derivative()
    out = shifted.transpose_components(tuple(range(1, rank + 1)) + (0,))
    order = min(out.order, gamma_jet.order)
    out = out.truncated(order)
    tt = tensor.truncated(order)
    gt = gamma_jet.truncated(order)
    for m, t in enumerate(tensor.types):
        letter = comps[m]
        swapped = comps[:m] + "z" + comps[m + 1:]
        if t == "d":
            corr = jet_einsum(f"za{letter},{swapped}->{comps}a", gt, tt)
            out = out - corr
        elif t == "u":
            corr = jet_einsum(f"{letter}az,{swapped}->{comps}a", gt, tt)
            out = out + corr
        else:
            raise ValueError(f"bad index type {t!r}")
    out.types = tensor.types + "d"
    return out


def covariant_derivative(tensor, metric, points):
    """Covariant derivative of a jet tensor evaluated at the same points."""
    sym = metric.jets(points, tensor.order, validate=False)
    gamma_up, _ = christoffel_jet(sym)
    return covariant_from_gamma(tensor, gamma_up)


def laplace_beltrami(fjet, pack):
    """Delta f = g^ab (d_a d_b f - Gamma^c_ab d_c f) from a scalar jet."""
    hess = fjet.d(2) - np.einsum("...cab,...c->...ab", pack.gamma, fjet.d(1))
    return np.einsum("...ab,...ab->...", pack.g_inv, hess)
