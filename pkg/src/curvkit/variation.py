"""First-order behaviour of curvature along the linear family g + t*h.

Pointwise derivative formulas are evaluated from metric and deformation
jets; finite-difference oracles re-derive each of them numerically.  The
integral checks compare a finite difference of curvature integrals on a
fully periodic chart against the quadrature of the matching integrand
contracted with h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf, log

import numpy as np

from .catalog import CatalogEntry, _draw_waves, _wave_builder
from .curvature import (
    CurvatureJets,
    christoffel_jet,
    covariant_from_gamma,
    density_arrays,
    pack_from_sym_jets,
)
from .errors import DomainError, JetOrderError, SignatureError
from .fields import MetricField, Sym2Field, SymJet2
from .jetalg import JetTensor
from .jets import _product_coeff
from .quadrature import DEFAULT_NODES, atlas_for

VARIATION_SELECTORS = (
    "scalar_2d",
    "curv_norm",
    "ricci_norm",
    "tau_sq",
    "gauss_bonnet_total",
)


# ----------------------------------------------------------------------
# deformation fields
# ----------------------------------------------------------------------


def _scalar_times_sym(scalar_coeffs, sym):
    """Leibniz product of a scalar jet with a symmetric-matrix jet."""
    nb = len(sym.batch_shape)
    lifted = []
    for c in scalar_coeffs:
        c = np.asarray(c)
        lifted.append(c.reshape(c.shape[:nb] + (1, 1) + c.shape[nb:]))
    order = min(len(lifted) - 1, sym.order)
    coeffs = [_product_coeff(lifted, sym.coeffs, k) for k in range(order + 1)]
    return SymJet2(sym.dim, coeffs)


def _chart_scaling(box):
    """Centre and half-width per axis, mapping the box onto [-1, 1]^n."""
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def _quadratic_scalar_coeffs(points, order, const, lin, quad, center, halfw):
    """Exact jets of f = const + lin.u + u.quad.u in scaled coordinates."""
    batch = points.shape[:-1]
    n = points.shape[-1]
    u = (points - center) / halfw
    qu = u @ quad
    inv_s = 1.0 / halfw
    coeffs = [const + u @ lin + np.einsum("...a,...a->...", qu, u)]
    if order >= 1:
        coeffs.append((np.broadcast_to(lin, batch + (n,)) + 2.0 * qu) * inv_s)
    if order >= 2:
        coeffs.append(
            np.broadcast_to(2.0 * quad * np.outer(inv_s, inv_s), batch + (n, n))
        )
    for k in range(3, order + 1):
        coeffs.append(np.zeros(batch + (n,) * k))
    return coeffs


class DeformationField:
    """Symmetric (0,2) field h driving the family g(t) = g + t*h."""

    def __init__(self, name, base, builder, amplitude, params=None):
        if not isinstance(base, MetricField):
            raise DomainError("deformations need a base MetricField")
        self.base = base
        self.field = Sym2Field(name, base.box, builder, params=params)
        self.amplitude = float(amplitude)

    @property
    def name(self):
        return self.field.name

    @property
    def dim(self):
        return self.base.dim

    @property
    def box(self):
        return self.base.box

    def jets(self, points, order):
        return self.field.jets(points, order)

    def value(self, points):
        return self.field.jets(points, 0).value

    def deformed(self, t):
        """The metric g + t*h as a field on the same chart."""
        return self.base.deformed(self.field, t)

    def max_safe_t(self, points=None, samples=512, seed=0, margin=0.5):
        """Largest |t| with g + t*h certified non-degenerate by sampling."""
        if points is None:
            rng = np.random.default_rng(seed)
            points = self.box.sample(samples, rng)
        g = self.base.jets(points, 0, validate=False).value
        h = self.jets(points, 0).value
        mu = float(np.abs(np.linalg.eigvals(np.linalg.solve(g, h))).max())
        if mu == 0.0:
            return inf
        return margin / mu

    @classmethod
    def waves(cls, base, seed=0, amplitude=0.05, max_freq=2):
        """Cosine waves per component, periodic on fully periodic charts."""
        rng = np.random.default_rng(seed)
        waves = _draw_waves(rng, base.dim, amplitude, max_freq=max_freq)
        period = base.box.period
        scaled = {
            key: [
                (kvec * 2.0 * np.pi / period, phase, amp)
                for kvec, phase, amp in terms
            ]
            for key, terms in waves.items()
        }
        builder = _wave_builder(base.dim, scaled, base=np.zeros((base.dim, base.dim)))
        return cls(
            "waves",
            base,
            builder,
            amplitude,
            params={"seed": seed, "amplitude": amplitude, "max_freq": max_freq},
        )

    @classmethod
    def polynomial(cls, base, seed=0, amplitude=0.05):
        """Componentwise quadratic polynomials (exact jets at any order)."""
        rng = np.random.default_rng(seed)
        n = base.dim
        scale = amplitude / 3.0
        const = scale * rng.uniform(-1.0, 1.0, size=(n, n))
        const = 0.5 * (const + const.swapaxes(-1, -2))
        lin = scale * rng.uniform(-1.0, 1.0, size=(n, n, n))
        lin = 0.5 * (lin + lin.transpose(1, 0, 2))
        quad = scale * rng.uniform(-1.0, 1.0, size=(n, n, n, n))
        quad = 0.5 * (quad + quad.transpose(1, 0, 2, 3))
        quad = 0.5 * (quad + quad.transpose(0, 1, 3, 2))
        center, halfw = _chart_scaling(base.box)
        inv_s = 1.0 / halfw

        def builder(points, order):
            batch = points.shape[:-1]
            u = (points - center) / halfw
            val = (
                const
                + np.einsum("ija,...a->...ij", lin, u)
                + np.einsum("ijab,...a,...b->...ij", quad, u, u)
            )
            coeffs = [val]
            if order >= 1:
                d1 = np.broadcast_to(lin, batch + (n, n, n)).copy()
                d1 += 2.0 * np.einsum("ijab,...b->...ija", quad, u)
                coeffs.append(d1 * inv_s)
            if order >= 2:
                coeffs.append(
                    np.broadcast_to(
                        2.0 * quad * np.multiply.outer(inv_s, inv_s),
                        batch + (n, n, n, n),
                    )
                )
            for k in range(3, order + 1):
                coeffs.append(np.zeros(batch + (n, n) + (n,) * k))
            return SymJet2(n, coeffs)

        return cls(
            "polynomial",
            base,
            builder,
            amplitude,
            params={"seed": seed, "amplitude": amplitude},
        )

    @classmethod
    def conformal(cls, base, seed=0, amplitude=0.05):
        """h = f*g with f a random quadratic, so g(t) = (1 + t f) g."""
        rng = np.random.default_rng(seed)
        n = base.dim
        scale = amplitude / 3.0
        const = scale * rng.uniform(0.5, 1.0)
        lin = scale * rng.uniform(-1.0, 1.0, size=n)
        quad = scale * rng.uniform(-1.0, 1.0, size=(n, n))
        quad = 0.25 * (quad + quad.T)
        center, halfw = _chart_scaling(base.box)

        def builder(points, order):
            fc = _quadratic_scalar_coeffs(points, order, const, lin, quad, center, halfw)
            g = base.jets(points, order, validate=False)
            return _scalar_times_sym(fc, g)

        return cls(
            "conformal",
            base,
            builder,
            amplitude,
            params={"seed": seed, "amplitude": amplitude},
        )

    @classmethod
    def combine(cls, first, second, a=1.0, b=1.0):
        """The field a*h1 + b*h2 over a shared base metric."""
        if first.base is not second.base:
            raise DomainError("combined deformations need the same base metric")

        def builder(points, order):
            return (
                float(a) * first.field._builder(points, order)
                + float(b) * second.field._builder(points, order)
            )

        amplitude = abs(a) * first.amplitude + abs(b) * second.amplitude
        return cls("combined", first.base, builder, amplitude)


# ----------------------------------------------------------------------
# pointwise derivative formulas
# ----------------------------------------------------------------------


def inverse_metric_derivative(g, h):
    """d/dt of (g + t*h)^{-1} at t = 0: minus h with both indices raised."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"metric not invertible: {exc}") from None
    return -np.einsum("...ia,...jb,...ab->...ij", g_inv, g_inv, h)


def volume_element_derivative(g, h):
    """Factor multiplying the volume density in d/dt sqrt(det(g + t*h))."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    eig = np.linalg.eigvalsh(g)
    if np.any(eig <= 0.0):
        raise SignatureError("volume-element variation needs a Riemannian metric")
    return 0.5 * np.einsum("...ij,...ij->...", np.linalg.inv(g), h)


class DeformationJets:
    """Covariant derivatives of h over the base metric, computed once."""

    def __init__(self, g_sym, h_sym, signature=None):
        if g_sym.dim != h_sym.dim:
            raise DomainError("metric and deformation dimensions differ")
        if g_sym.order < 2 or h_sym.order < 2:
            raise JetOrderError(
                "curvature variation needs metric and deformation jets of order >= 2"
            )
        self.pack = pack_from_sym_jets(g_sym.truncated(2), signature=signature)
        gamma_up, _ = christoffel_jet(g_sym)
        hjet = JetTensor.from_symjet(h_sym)
        first = covariant_from_gamma(hjet, gamma_up)
        second = covariant_from_gamma(first, gamma_up)
        self.h = hjet.value()
        # nabla_a h_ij and nabla_b nabla_a h_ij, derivative slots last
        self.grad_h = first.value()
        self.hess_h = second.value()


def christoffel_derivative(g_sym, h_sym, signature=None):
    """d/dt of the connection coefficients at t = 0, axes [..., k, i, j]."""
    if g_sym.order < 1 or h_sym.order < 1:
        raise JetOrderError("connection variation needs jets of order >= 1")
    gamma_up, g_inv_jet = christoffel_jet(g_sym)
    grad_h = covariant_from_gamma(JetTensor.from_symjet(h_sym), gamma_up).value()
    g_inv = g_inv_jet.value()
    return 0.5 * (
        np.einsum("...ka,...aji->...kij", g_inv, grad_h)
        + np.einsum("...ka,...iaj->...kij", g_inv, grad_h)
        - np.einsum("...ka,...ija->...kij", g_inv, grad_h)
    )


def _riemann_dot(dj):
    pack, d2, h = dj.pack, dj.hess_h, dj.h
    gi = pack.g_inv
    h_mixed = np.einsum("...ac,...lc->...al", h, gi)
    out = -np.einsum("...ijka,...al->...ijkl", pack.riemann_up, h_mixed)
    out += np.einsum("...ijal,...ka->...ijkl", pack.riemann_up, h_mixed)
    out += np.einsum("...lc,...jcki->...ijkl", gi, d2)
    out -= np.einsum("...lc,...ickj->...ijkl", gi, d2)
    out -= np.einsum("...lc,...jkci->...ijkl", gi, d2)
    out += np.einsum("...lc,...ikcj->...ijkl", gi, d2)
    return 0.5 * out


def _ricci_dot(dj):
    pack, d2, h = dj.pack, dj.hess_h, dj.h
    gi = pack.g_inv
    h_mixed = np.einsum("...ac,...bc->...ab", h, gi)
    out = -np.einsum("...aijb,...ba->...ij", pack.riemann_up, h_mixed)
    out += np.einsum("...ia,...ja->...ij", pack.ricci, h_mixed)
    out += np.einsum("...ac,...icja->...ij", gi, d2)
    out -= np.einsum("...ac,...acji->...ij", gi, d2)
    out -= np.einsum("...ab,...ijab->...ij", gi, d2)
    out += np.einsum("...ac,...jcai->...ij", gi, d2)
    return 0.5 * out


def _scalar_dot(dj):
    pack, d2, h = dj.pack, dj.hess_h, dj.h
    gi = pack.g_inv
    h_up = np.einsum("...ia,...jb,...ab->...ij", gi, gi, h)
    out = -np.einsum("...ij,...ij->...", pack.ricci, h_up)
    out += np.einsum("...ik,...jl,...ijlk->...", gi, gi, d2)
    out -= np.einsum("...ik,...jl,...jlik->...", gi, gi, d2)
    return out


def riemann_derivative(g_sym, h_sym, signature=None):
    """d/dt of R(t)_{ijk}^l at t = 0 from metric and deformation jets."""
    return _riemann_dot(DeformationJets(g_sym, h_sym, signature))


def ricci_derivative(g_sym, h_sym, signature=None):
    """d/dt of the Ricci tensor at t = 0."""
    return _ricci_dot(DeformationJets(g_sym, h_sym, signature))


def scalar_derivative(g_sym, h_sym, signature=None):
    """d/dt of the scalar curvature at t = 0."""
    return _scalar_dot(DeformationJets(g_sym, h_sym, signature))


# ----------------------------------------------------------------------
# finite-difference oracle
# ----------------------------------------------------------------------


@dataclass
class FdResult:
    """Central differences across a step list plus convergence evidence."""

    estimate: np.ndarray
    steps: tuple
    raw: tuple
    orders: tuple
    scale: float

    def agrees_with(self, analytic, tolerance):
        return float(np.max(np.abs(self.estimate - analytic))) <= tolerance

    @property
    def min_order(self):
        finite = [o for o in self.orders if o != inf]
        return min(finite) if finite else inf


# central differences cancel ~16 digits over a 1e-3 step; observed orders
# mean nothing once errors sit at that cancellation level
ROUNDOFF_FLOOR = 1e-10


def fd_oracle(fn, steps=(2e-3, 1e-3, 5e-4), reference=None):
    """Central-difference derivative of fn(t) at t = 0.

    The estimate Richardson-extrapolates the two smallest steps.  The
    observed convergence order comes from errors against `reference`
    when given, otherwise from consecutive-step differences (which needs
    at least three steps).  Differences below the roundoff floor report
    order infinity rather than noise.
    """
    steps = tuple(sorted((float(s) for s in steps), reverse=True))
    if len(steps) < 2 or len(set(steps)) != len(steps):
        raise DomainError("fd_oracle needs at least two distinct steps")
    raw = []
    for s in steps:
        plus = np.asarray(fn(s), dtype=float)
        minus = np.asarray(fn(-s), dtype=float)
        raw.append((plus - minus) / (2.0 * s))
    s1, s2 = steps[-2], steps[-1]
    r = (s1 / s2) ** 2
    estimate = (r * raw[-1] - raw[-2]) / (r - 1.0)
    scale = float(max(np.max(np.abs(raw[-1])), np.max(np.abs(estimate)), 1.0))
    floor = ROUNDOFF_FLOOR * scale

    def order_from(errors, spans):
        orders = []
        for k in range(len(errors) - 1):
            if errors[k + 1] <= floor or errors[k] <= floor:
                orders.append(inf)
            else:
                orders.append(log(errors[k] / errors[k + 1]) / log(spans[k] / spans[k + 1]))
        return tuple(orders)

    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        errors = [float(np.max(np.abs(d - reference))) for d in raw]
        orders = order_from(errors, steps)
    elif len(steps) >= 3:
        diffs = [
            float(np.max(np.abs(raw[k] - raw[k + 1]))) for k in range(len(raw) - 1)
        ]
        orders = order_from(diffs, steps[:-1])
    else:
        orders = ()
    return FdResult(estimate, steps, tuple(raw), orders, scale)


_FD_QUANTITIES = (
    "inverse_metric",
    "volume_element",
    "christoffel",
    "riemann",
    "ricci",
    "scalar",
)


def deformation_fd(quantity, h, points, steps=(2e-3, 1e-3, 5e-4), reference=None):
    """Finite-difference derivative of a curvature quantity along g + t*h."""
    if quantity not in _FD_QUANTITIES:
        raise DomainError(
            f"unknown quantity {quantity!r}; expected one of {_FD_QUANTITIES}"
        )
    points = np.asarray(points, dtype=float)
    t_max = h.max_safe_t(points=points)
    if max(abs(float(s)) for s in steps) > t_max:
        raise DomainError(
            f"finite-difference stencil leaves the non-degeneracy region "
            f"(largest |t| allowed: {t_max:.3e})"
        )
    base_sqrt_det = None
    if quantity == "volume_element":
        g0 = h.base.jets(points, 0, validate=False).value
        base_sqrt_det = np.sqrt(np.abs(np.linalg.det(g0)))

    def fn(t):
        metric = h.deformed(t)
        if quantity == "inverse_metric":
            return np.linalg.inv(metric.jets(points, 0, validate=False).value)
        if quantity == "volume_element":
            g = metric.jets(points, 0, validate=False).value
            return np.sqrt(np.abs(np.linalg.det(g))) / base_sqrt_det
        sym = metric.jets(points, 2, validate=False)
        pack = pack_from_sym_jets(sym, signature=metric.signature)
        if quantity == "christoffel":
            return pack.gamma
        if quantity == "riemann":
            return pack.riemann_up
        if quantity == "ricci":
            return pack.ricci
        return pack.tau

    return fd_oracle(fn, steps=steps, reference=reference)


def deformation_analytic(quantity, h, points):
    """The analytic counterpart of deformation_fd at the same points."""
    points = np.asarray(points, dtype=float)
    order = 0 if quantity in ("inverse_metric", "volume_element") else 2
    g_sym = h.base.jets(points, order, validate=False)
    h_sym = h.jets(points, order)
    if quantity == "inverse_metric":
        return inverse_metric_derivative(g_sym.value, h_sym.value)
    if quantity == "volume_element":
        return volume_element_derivative(g_sym.value, h_sym.value)
    if quantity == "christoffel":
        return christoffel_derivative(g_sym, h_sym)
    dj = DeformationJets(g_sym, h_sym, signature=h.base.signature)
    if quantity == "riemann":
        return _riemann_dot(dj)
    if quantity == "ricci":
        return _ricci_dot(dj)
    if quantity == "scalar":
        return _scalar_dot(dj)
    raise DomainError(f"unknown quantity {quantity!r}")


# ----------------------------------------------------------------------
# integral variation identities
# ----------------------------------------------------------------------


def variation_integrands(cjets):
    """Raised-index integrands of the differentiated curvature integrals.

    Keys match the integral-check selectors; contracting a value with
    h_{ij} and the volume density gives the rate of change of the
    corresponding integral along g + t*h on a closed manifold.
    """
    pack = cjets.pack
    gi = pack.g_inv

    def raise2(t):
        return np.einsum("...ia,...jb,...ab->...ij", gi, gi, t)

    rho_up = raise2(pack.ricci)
    tau = pack.tau[..., None, None]
    out = {"scalar_2d": -rho_up + 0.5 * tau * gi}
    if cjets.rho_jet.order < 2:
        return out

    rho_hess = covariant_from_gamma(
        covariant_from_gamma(cjets.rho_jet.truncated(2), cjets.gamma_jet),
        cjets.gamma_jet,
    ).value()
    tau_hess = covariant_from_gamma(
        covariant_from_gamma(cjets.tau_jet.truncated(2), cjets.gamma_jet),
        cjets.gamma_jet,
    ).value()

    lap_rho_up = raise2(np.einsum("...ab,...ijab->...ij", gi, rho_hess))
    hess_tau_up = raise2(tau_hess)
    lap_tau = np.einsum("...ab,...ab->...", gi, tau_hess)
    r_check_up = raise2(pack.r_check)
    rho_check_up = raise2(pack.rho_check)
    rho_riem_up = 0.5 * raise2(pack.l_rho)
    lap_tau_g = lap_tau[..., None, None] * gi
    norm_r2 = pack.norm_R2[..., None, None]
    norm_rho2 = pack.norm_rho2[..., None, None]

    curv_norm = (
        -2.0 * r_check_up
        - 4.0 * lap_rho_up
        + 2.0 * hess_tau_up
        + 4.0 * rho_check_up
        - 4.0 * rho_riem_up
        + 0.5 * norm_r2 * gi
    )
    ricci_norm = (
        -2.0 * rho_riem_up
        - 0.5 * lap_tau_g
        - lap_rho_up
        + hess_tau_up
        + 0.5 * norm_rho2 * gi
    )
    tau_sq = -2.0 * tau * rho_up + 2.0 * hess_tau_up - 2.0 * lap_tau_g + 0.5 * tau**2 * gi
    out.update(
        curv_norm=curv_norm,
        ricci_norm=ricci_norm,
        tau_sq=tau_sq,
        gauss_bonnet_total=curv_norm - 4.0 * ricci_norm + tau_sq,
    )
    return out


_DENSITY_PICK = {
    "scalar_2d": lambda tau, r2, rho2: tau,
    "curv_norm": lambda tau, r2, rho2: r2,
    "ricci_norm": lambda tau, r2, rho2: rho2,
    "tau_sq": lambda tau, r2, rho2: tau * tau,
    "gauss_bonnet_total": lambda tau, r2, rho2: r2 - 4.0 * rho2 + tau * tau,
}


@dataclass
class IntegralVariationRecord:
    """One differentiated-integral comparison on a periodic chart."""

    which: str
    lhs: float
    rhs: float
    tolerance: float
    dt: float
    nodes: tuple
    coarse_lhs: float = 0.0

    @property
    def diff(self):
        return abs(self.lhs - self.rhs)

    @property
    def passed(self):
        return self.diff <= self.tolerance


def _default_tolerance(lhs):
    return max(1e-6, 1e-3 * abs(lhs))


SCAN_CHUNK = 8192


def integral_variation_suite(
    base,
    h,
    which=None,
    atlas=None,
    dt=1e-3,
    nodes=DEFAULT_NODES,
    chunk_size=512,
    tolerance=None,
):
    """Run several integral variation checks sharing the grid scans.

    The finite-difference side needs four metric scans (t = +-dt and
    +-dt/2, Richardson-combined); all selectors reuse them.  The
    quadrature side needs one pass of degree-4 jets for the integrand
    tensors.  Only fully periodic charts are accepted, so the discarded
    integration-by-parts boundary terms vanish exactly.
    """
    entry_name = None
    if isinstance(base, CatalogEntry):
        entry_name = base.name
        base = base.metric
    if not all(base.box.periodic):
        raise DomainError(
            "integral variation checks need a fully periodic chart"
            + (f" (got {entry_name or base.name})" if entry_name or base.name else "")
        )
    if h.base is not base and h.base.box is not base.box:
        raise DomainError("deformation base chart does not match the metric")
    if which is None:
        which = [s for s in VARIATION_SELECTORS if s != "scalar_2d" or base.dim == 2]
    unknown = [s for s in which if s not in VARIATION_SELECTORS]
    if unknown:
        raise DomainError(f"unknown selectors {unknown}; expected {VARIATION_SELECTORS}")
    if atlas is None:
        atlas = atlas_for(base, nodes)
    grid = atlas.charts[0].grid
    order = 2 if set(which) == {"scalar_2d"} else 4

    mu = 0.0
    for pts, _ in grid.chunks(SCAN_CHUNK):
        g0 = base.jets(pts, 0, validate=False).value
        h0 = h.jets(pts, 0).value
        mu = max(mu, float(np.abs(np.linalg.eigvals(np.linalg.solve(g0, h0))).max()))
    if mu > 0.0 and dt > 0.5 / mu:
        raise DomainError(
            f"dt={dt:.3e} exceeds the certified non-degeneracy range "
            f"(|t| <= {0.5 / mu:.3e} on this grid)"
        )

    def scan(t):
        metric = base.deformed(h.field, t)
        totals = {s: 0.0 for s in which}
        for pts, w in grid.chunks(SCAN_CHUNK):
            sym = metric.jets(pts, 2, validate=False)
            sqrt_det, tau, r2, rho2 = density_arrays(*sym.coeffs[:3])
            for s in which:
                totals[s] += float(
                    np.sum(w * _DENSITY_PICK[s](tau, r2, rho2) * sqrt_det)
                )
        return totals

    plus, minus = scan(dt), scan(-dt)
    plus_half, minus_half = scan(0.5 * dt), scan(-0.5 * dt)
    lhs = {}
    coarse = {}
    for s in which:
        d1 = (plus[s] - minus[s]) / (2.0 * dt)
        d2 = (plus_half[s] - minus_half[s]) / dt
        coarse[s] = d1
        lhs[s] = (4.0 * d2 - d1) / 3.0

    rhs = {s: 0.0 for s in which}
    for pts, w in grid.chunks(chunk_size):
        cjets = CurvatureJets(base, pts, order=order)
        integrands = variation_integrands(cjets)
        h_val = h.jets(pts, 0).value
        factor = w * cjets.pack.sqrt_det
        for s in which:
            rhs[s] += float(
                np.sum(factor * np.einsum("...ij,...ij->...", integrands[s], h_val))
            )

    records = []
    for s in which:
        tol = _default_tolerance(lhs[s]) if tolerance is None else tolerance
        records.append(
            IntegralVariationRecord(
                which=s,
                lhs=lhs[s],
                rhs=rhs[s],
                tolerance=tol,
                dt=dt,
                nodes=grid.nodes,
                coarse_lhs=coarse[s],
            )
        )
    return records


def integral_variation_check(which, base, h, atlas=None, **kwargs):
    """One differentiated-integral comparison; see the suite variant."""
    records = integral_variation_suite(base, h, which=[which], atlas=atlas, **kwargs)
    return records[0]
