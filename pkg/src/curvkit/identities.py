"""Pointwise curvature identities and diagnostic residuals.

Everything here consumes a ``CurvaturePack`` (or raw orthonormal-frame
components) and produces residual tensors together with a scale that makes
"relative" comparisons meaningful.  The central object is the quadratic
residual

    residual_ij = Rcheck_ij - 2 rhocheck_ij - (L rho)_ij + tau rho_ij
                  - 1/4 (|R|^2 - 4 |rho|^2 + tau^2) g_ij

which vanishes for the curvature of any 4-dimensional metric, of either
signature.  The trace of the residual vanishes for *any* tensor with the
algebraic curvature symmetries, which makes it a cheap sanity check that
needs no metric at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import CurvaturePack
from .errors import DomainError

__all__ = [
    "IdentityReport",
    "ThreeDimReport",
    "identity_terms",
    "identity_residual",
    "identity_trace_check",
    "weakly_einstein_residual",
    "einstein_residual",
    "three_dim_reconstruct",
    "three_dim_norm_identity",
    "gauss_bonnet_integrand",
    "frame_ricci",
    "frame_identity_terms",
    "frame_identity_residual",
    "random_algebraic_curvature",
]

# Below this scale the residual is compared against an absolute floor
# instead of relatively; avoids 0/0 on flat regions.
SCALE_FLOOR = 1.0e-6
ABSOLUTE_FLOOR = 1.0e-12


@dataclass(frozen=True)
class IdentityReport:
    """Summary of a pointwise tensor residual over a batch of points."""

    name: str
    residual: np.ndarray
    max_abs: float
    scale: float
    tolerance: float

    @property
    def relative(self) -> float:
        if self.scale > SCALE_FLOOR:
            return self.max_abs / self.scale
        return 0.0 if self.max_abs <= ABSOLUTE_FLOOR else np.inf

    @property
    def passed(self) -> bool:
        if self.scale > SCALE_FLOOR:
            return bool(self.max_abs <= self.tolerance * self.scale)
        return bool(self.max_abs <= ABSOLUTE_FLOOR)

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"IdentityReport({self.name}: max_abs={self.max_abs:.3e}, "
            f"scale={self.scale:.3e}, passed={self.passed})"
        )


def _max_abs(arr: np.ndarray) -> float:
    return float(np.abs(arr).max()) if arr.size else 0.0


def _report(name: str, residual: np.ndarray, terms: list[np.ndarray],
            tolerance: float) -> IdentityReport:
    scale = max((_max_abs(t) for t in terms), default=0.0)
    return IdentityReport(
        name=name,
        residual=residual,
        max_abs=_max_abs(residual),
        scale=scale,
        tolerance=tolerance,
    )


def identity_terms(pack: CurvaturePack) -> dict[str, np.ndarray]:
    """The five (0,2) terms of the quadratic identity, all lowered."""
    gb = pack.norm_R2 - 4.0 * pack.norm_rho2 + pack.tau ** 2
    return {
        "r_check": pack.r_check,
        "rho_check_2": 2.0 * pack.rho_check,
        "l_rho": pack.l_rho,
        "tau_rho": pack.tau[..., None, None] * pack.ricci,
        "gb_quarter_g": 0.25 * gb[..., None, None] * pack.g,
    }


def identity_residual(pack: CurvaturePack, tolerance: float = 1.0e-9) -> IdentityReport:
    """Residual of the quadratic curvature identity; requires dim = 4."""
    if pack.dim != 4:
        raise DomainError(f"quadratic identity requires dim 4, got {pack.dim}")
    t = identity_terms(pack)
    residual = (t["r_check"] - t["rho_check_2"] - t["l_rho"]
                + t["tau_rho"] - t["gb_quarter_g"])
    return _report("identity_residual", residual, list(t.values()), tolerance)


def identity_trace_check(pack: CurvaturePack) -> np.ndarray:
    """g^{ij} residual_ij per point; vanishes by pure index algebra."""
    if pack.dim != 4:
        raise DomainError(f"trace check requires dim 4, got {pack.dim}")
    t = identity_terms(pack)
    residual = (t["r_check"] - t["rho_check_2"] - t["l_rho"]
                + t["tau_rho"] - t["gb_quarter_g"])
    return np.einsum("...ij,...ij->...", pack.g_inv, residual)


def weakly_einstein_residual(pack: CurvaturePack, tolerance: float = 1.0e-9) -> IdentityReport:
    """Rcheck - (|R|^2 / n) g; zero exactly on weakly Einstein spaces."""
    if pack.dim not in (3, 4):
        raise DomainError(f"weakly-Einstein residual requires dim 3 or 4, got {pack.dim}")
    mean = (pack.norm_R2 / pack.dim)[..., None, None] * pack.g
    residual = pack.r_check - mean
    return _report("weakly_einstein_residual", residual, [pack.r_check, mean], tolerance)


def einstein_residual(pack: CurvaturePack, tolerance: float = 1.0e-9) -> IdentityReport:
    """rho - (tau / n) g; zero exactly on Einstein spaces."""
    if pack.dim < 2:
        raise DomainError(f"Einstein residual requires dim >= 2, got {pack.dim}")
    mean = (pack.tau / pack.dim)[..., None, None] * pack.g
    residual = pack.ricci - mean
    return _report("einstein_residual", residual, [pack.ricci, mean], tolerance)


def gauss_bonnet_integrand(pack: CurvaturePack) -> np.ndarray:
    """|R|^2 - 4 |rho|^2 + tau^2 per point (dim 4 only)."""
    if pack.dim != 4:
        raise DomainError(f"Gauss-Bonnet integrand requires dim 4, got {pack.dim}")
    return pack.norm_R2 - 4.0 * pack.norm_rho2 + pack.tau ** 2


def three_dim_reconstruct(ricci: np.ndarray, tau: np.ndarray,
                          metric: np.ndarray | None = None) -> np.ndarray:
    """Rebuild the full 3D curvature tensor from Ricci and scalar curvature.

    In an orthonormal basis (``metric`` omitted):

        R_abcd = rho_ad d_bc - rho_ac d_bd + d_ad rho_bc - d_ac rho_bd
                 - tau/2 (d_ad d_bc - d_ac d_bd)

    Passing the coordinate metric gives the same tensor equation with g in
    place of the Kronecker delta.
    """
    ricci = np.asarray(ricci, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if ricci.shape[-2:] != (3, 3):
        raise DomainError(f"reconstruction requires 3x3 Ricci, got {ricci.shape[-2:]}")
    if metric is None:
        g = np.broadcast_to(np.eye(3), ricci.shape).copy()
    else:
        g = np.asarray(metric, dtype=float)
        if g.shape != ricci.shape:
            raise DomainError("metric and Ricci shapes differ")
    out = np.einsum("...ad,...bc->...abcd", ricci, g)
    out -= np.einsum("...ac,...bd->...abcd", ricci, g)
    out += np.einsum("...ad,...bc->...abcd", g, ricci)
    out -= np.einsum("...ac,...bd->...abcd", g, ricci)
    gg = (np.einsum("...ad,...bc->...abcd", g, g)
          - np.einsum("...ac,...bd->...abcd", g, g))
    out -= 0.5 * tau[..., None, None, None, None] * gg
    return out


@dataclass(frozen=True)
class ThreeDimReport:
    """Scalar identity and reconstruction defect for a 3D curvature block."""

    value: np.ndarray
    defect_sq: np.ndarray
    scale: np.ndarray

    @property
    def max_relative_value(self) -> float:
        return float((np.abs(self.value) / self.scale).max())

    @property
    def max_relative_defect(self) -> float:
        return float((np.abs(self.defect_sq) / self.scale).max())

    @property
    def max_relative_consistency(self) -> float:
        """Defect of (sum of squares) = 4 * (scalar identity value)."""
        return float((np.abs(self.defect_sq - 4.0 * self.value) / self.scale).max())


def _product_block_slices(pack: CurvaturePack):
    """Split a 3D-times-line product pack into its 3D block quantities."""
    g = pack.g
    off = np.abs(g[..., 3, :3]).max() if g.size else 0.0
    line = np.abs(g[..., 3, 3] - 1.0).max() if g.size else 0.0
    if off > 1.0e-12 or line > 1.0e-12:
        raise DomainError("pack is not a 3D x line product in adapted coordinates")
    return (pack.riemann[..., :3, :3, :3, :3], pack.ricci[..., :3, :3],
            pack.g[..., :3, :3], pack.g_inv[..., :3, :3], pack.tau)


def three_dim_norm_identity(pack: CurvaturePack) -> ThreeDimReport:
    """1/4 |R'|^2 - |rho'|^2 + 1/4 tau'^2 for a 3D metric.

    Accepts either a plain 3D pack or the 4D pack of a 3D-manifold-times-line
    product in adapted coordinates (where the statement arises by evaluating
    the quadratic identity on the line-line slot).  Also returns the squared
    norm of the reconstruction defect, which must equal four times the value.
    """
    if pack.dim == 3:
        riemann, ricci, g, g_inv, tau = (pack.riemann, pack.ricci, pack.g,
                                         pack.g_inv, pack.tau)
        norm_R2, norm_rho2 = pack.norm_R2, pack.norm_rho2
    elif pack.dim == 4:
        riemann, ricci, g, g_inv, tau = _product_block_slices(pack)
        rho_up = np.einsum("...ia,...jb,...ab->...ij", g_inv, g_inv, ricci)
        norm_rho2 = np.einsum("...ij,...ij->...", ricci, rho_up)
        r_up = np.einsum("...ia,...jb,...kc,...ld,...abcd->...ijkl",
                         g_inv, g_inv, g_inv, g_inv, riemann)
        norm_R2 = np.einsum("...ijkl,...ijkl->...", riemann, r_up)
    else:
        raise DomainError(f"requires a 3D pack or a 3D x line product, got dim {pack.dim}")

    value = 0.25 * norm_R2 - norm_rho2 + 0.25 * tau ** 2
    defect = riemann - three_dim_reconstruct(ricci, tau, g)
    defect_up = np.einsum("...ia,...jb,...kc,...ld,...abcd->...ijkl",
                          g_inv, g_inv, g_inv, g_inv, defect)
    defect_sq = np.einsum("...ijkl,...ijkl->...", defect, defect_up)
    scale = np.maximum(0.25 * norm_R2 + norm_rho2 + 0.25 * tau ** 2, SCALE_FLOOR)
    return ThreeDimReport(value=value, defect_sq=defect_sq, scale=scale)


# Orthonormal-frame (metric-free) variants.  These act on raw component
# arrays with the algebraic curvature symmetries and an implicit identity
# metric, which is all the frame-based checks need.

def frame_ricci(r: np.ndarray) -> np.ndarray:
    """rho_jk = sum_a R_ajka for orthonormal-frame components."""
    return np.einsum("...ajka->...jk", r)


def frame_identity_terms(r: np.ndarray) -> dict[str, np.ndarray]:
    rho = frame_ricci(r)
    tau = np.einsum("...jj->...", rho)
    n = r.shape[-1]
    eye = np.eye(n)
    gb = (np.einsum("...abcd,...abcd->...", r, r)
          - 4.0 * np.einsum("...ij,...ij->...", rho, rho) + tau ** 2)
    return {
        "r_check": np.einsum("...abci,...abcj->...ij", r, r),
        "rho_check_2": 2.0 * np.einsum("...ia,...ja->...ij", rho, rho),
        "l_rho": 2.0 * np.einsum("...iabj,...ab->...ij", r, rho),
        "tau_rho": tau[..., None, None] * rho,
        "gb_quarter_g": 0.25 * gb[..., None, None] * eye,
    }


def frame_identity_residual(r: np.ndarray) -> np.ndarray:
    t = frame_identity_terms(r)
    return (t["r_check"] - t["rho_check_2"] - t["l_rho"]
            + t["tau_rho"] - t["gb_quarter_g"])


def random_algebraic_curvature(rng: np.random.Generator, dim: int = 4,
                               batch_shape: tuple[int, ...] = ()) -> np.ndarray:
    """Random tensor with all algebraic curvature symmetries.

    Antisymmetrizes a raw random array in both index pairs, symmetrizes the
    pair exchange, then removes the first-Bianchi-violating part by
    projecting out the full antisymmetrization.  The result need not come
    from any metric.
    """
    raw = rng.standard_normal(batch_shape + (dim,) * 4)
    r = raw - raw.swapaxes(-4, -3)
    r = r - r.swapaxes(-2, -1)
    tr = r.transpose(*range(r.ndim - 4), -2, -1, -4, -3)
    r = 0.5 * (r + tr)
    # cyclic sum over the last three slots; subtracting a third of it kills
    # the totally antisymmetric part while keeping the other symmetries
    cyc = (r
           + r.transpose(*range(r.ndim - 4), -4, -2, -1, -3)
           + r.transpose(*range(r.ndim - 4), -4, -1, -3, -2))
    return r - cyc / 3.0
