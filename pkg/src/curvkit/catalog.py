"""Closed-form metric catalog.

Every entry couples a chart (:class:`~curvkit.fields.MetricField`) with the
reference curvature data known for it in closed form.  Entries are built
deterministically: randomised ones (tori, polynomial metrics) draw their
wave vectors and coefficients from ``default_rng(seed)`` at construction
time, so identical parameters always give the identical field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CatalogError, DegenerateMetricError
from .fields import Box, MetricField, SymJet2, product_field
from .jets import ScalarJet

POLE_MARGIN = 1e-3

CATALOG_NAMES = (
    "flat4",
    "torus_perturbed",
    "sphere4",
    "hyperbolic4",
    "s2xs2",
    "s2xh2",
    "product_3d_x_line",
    "constcurv3",
    "polynomial_random",
    "conformal_flat",
    "minkowski_perturbed",
)


@dataclass
class CatalogEntry:
    """A named metric plus its closed-form reference data."""

    name: str
    params: dict
    metric: MetricField
    closed: bool = False
    reference: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def dim(self):
        return self.metric.dim

    def sample_points(self, count, rng):
        return self.metric.box.sample(count, rng)


# ----------------------------------------------------------------------
# builder helpers
# ----------------------------------------------------------------------


def _constant_builder(matrix):
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]

    def builder(points, order):
        batch = points.shape[:-1]
        out = SymJet2.zeros(n, order, batch)
        c0 = np.asarray(out.coeffs[0])
        c0[...] = matrix
        return out

    return builder


def _wave_builder(dim, waves, base=None):
    """delta + sum of cosine waves per component, exact at any order.

    Each derivative order is a single matrix product: the (node, wave)
    oscillation matrix times a precomputed (wave, component x deriv)
    basis.  This keeps dense quadrature scans BLAS-bound instead of
    paying strided writes into the stacked coefficient arrays.
    """
    base = np.eye(dim) if base is None else np.asarray(base, dtype=float)
    flat = [
        (i, j, kvec, phase, amp)
        for (i, j), terms in sorted(waves.items())
        for kvec, phase, amp in terms
    ]
    nw = len(flat)
    kmat = np.array([w[2] for w in flat], dtype=float).reshape(nw, dim)
    phases = np.array([w[3] for w in flat])
    amps = np.array([w[4] for w in flat])
    basis = {}

    def wave_basis(k):
        # T[w] = M_w (x) kvec_w^(x)k with M_w symmetric one-hot at (i, j)
        tab = np.empty((nw,) + (dim, dim) + (dim,) * k)
        for w, (i, j, kvec, _, _) in enumerate(flat):
            m = np.zeros((dim, dim))
            m[i, j] = 1.0
            m[j, i] = 1.0
            kp = np.ones(())
            for _ in range(k):
                kp = np.multiply.outer(kp, kvec)
            tab[w] = np.multiply.outer(m, kp)
        return tab.reshape(nw, -1)

    def builder(points, order):
        batch = points.shape[:-1]
        coeffs = [np.zeros(batch + (dim, dim) + (dim,) * k) for k in range(order + 1)]
        coeffs[0][...] = base
        if nw == 0:
            return SymJet2(dim, coeffs)
        theta = points @ kmat.T + phases
        cos_t = amps * np.cos(theta)
        sin_t = amps * np.sin(theta)
        cycle = (cos_t, -sin_t, -cos_t, sin_t)
        for k in range(order + 1):
            if k not in basis:
                basis[k] = wave_basis(k)
            block = cycle[k % 4] @ basis[k]
            coeffs[k] += block.reshape(batch + (dim, dim) + (dim,) * k)
        return SymJet2(dim, coeffs)

    return builder


def _draw_waves(rng, dim, eps, diag_only=False, max_freq=2):
    """Random integer-frequency waves for each metric component."""
    waves = {}
    for i in range(dim):
        for j in range(i, dim):
            if diag_only and i != j:
                continue
            terms = []
            for _ in range(2):
                kvec = rng.integers(-max_freq, max_freq + 1, size=dim)
                if not np.any(kvec):
                    kvec[rng.integers(dim)] = 1
                phase = rng.uniform(0.0, 2.0 * np.pi)
                amp = eps * rng.uniform(0.3, 1.0) * (1.0 if i == j else 0.5)
                terms.append((kvec.astype(float), phase, amp))
            waves[(i, j)] = terms
    return waves


def _sample_check(metric, seed=20260814, count=200):
    rng = np.random.default_rng(seed)
    pts = metric.box.sample(count, rng)
    jet = metric._builder(pts, 0)
    metric.check_nondegenerate(jet.value, pts)


def _sphere_block(curv, dim, margin=POLE_MARGIN):
    """Round sphere of sectional curvature curv > 0, hyperspherical chart."""
    radius2 = 1.0 / curv
    lo = [margin] * (dim - 1) + [0.0]
    hi = [np.pi - margin] * (dim - 1) + [2.0 * np.pi]
    periodic = (False,) * (dim - 1) + (True,)
    box = Box(lo, hi, periodic)

    def builder(points, order):
        batch = points.shape[:-1]
        comps = {(0, 0): ScalarJet.constant(radius2, dim, order, batch)}
        running = None
        for a in range(1, dim):
            s2 = ScalarJet.variable(points, a - 1, order).sin() ** 2
            running = s2 if running is None else running * s2
            comps[(a, a)] = radius2 * running
        return SymJet2.from_components(dim, order, comps, batch)

    return box, builder


def _halfspace_block(curv, dim, depth=(1.0, 2.0), width=1.0):
    """Hyperbolic space of curvature -curv < 0 as an upper half-space slab."""
    lo = [-width] * (dim - 1) + [depth[0]]
    hi = [width] * (dim - 1) + [depth[1]]
    box = Box(lo, hi)

    def builder(points, order):
        batch = points.shape[:-1]
        y = ScalarJet.variable(points, dim - 1, order)
        conf = (y * y * curv).reciprocal()
        comps = {(a, a): conf for a in range(dim)}
        return SymJet2.from_components(dim, order, comps, batch)

    return box, builder


def _flat_block(dim, width=1.0):
    box = Box([-width] * dim, [width] * dim)
    return box, _constant_builder(np.eye(dim))


def _constcurv_field(curv, dim, name):
    if curv > 0:
        box, builder = _sphere_block(curv, dim)
    elif curv < 0:
        box, builder = _halfspace_block(-curv, dim)
    else:
        box, builder = _flat_block(dim)
    return MetricField(name, box, builder, params={"c": curv})


# ----------------------------------------------------------------------
# entries
# ----------------------------------------------------------------------


def _entry_flat4():
    box, builder = _flat_block(4)
    metric = MetricField("flat4", box, builder)
    ref = {"tau": 0.0, "norm_R2": 0.0, "norm_rho2": 0.0, "flat": True, "einstein": True}
    return CatalogEntry("flat4", {}, metric, closed=False, reference=ref)


def _entry_torus(seed=0, eps=0.05, dim=4):
    if dim not in (2, 3, 4):
        raise CatalogError("torus_perturbed supports dim in {2, 3, 4}")
    if not 0.0 <= eps <= 0.2:
        raise CatalogError("torus_perturbed needs 0 <= eps <= 0.2 to stay positive")
    rng = np.random.default_rng(seed)
    waves = _draw_waves(rng, dim, eps) if eps > 0 else {}
    box = Box([0.0] * dim, [2.0 * np.pi] * dim, periodic=(True,) * dim)
    metric = MetricField(
        "torus_perturbed",
        box,
        _wave_builder(dim, waves),
        params={"seed": seed, "eps": eps, "dim": dim},
    )
    if eps > 0:
        _sample_check(metric)
    ref = {"euler": 0.0, "flat": eps == 0.0}
    if eps == 0.0:
        ref.update({"tau": 0.0, "norm_R2": 0.0, "norm_rho2": 0.0})
    return CatalogEntry(
        "torus_perturbed",
        {"seed": seed, "eps": eps, "dim": dim},
        metric,
        closed=True,
        reference=ref,
        notes="flat torus for eps = 0",
    )


def _entry_sphere4(r=1.0):
    if r <= 0:
        raise CatalogError("sphere4 needs radius r > 0")
    curv = 1.0 / (r * r)
    box, builder = _sphere_block(curv, 4)
    metric = MetricField("sphere4", box, builder, params={"r": r})
    ref = {
        "tau": 12.0 * curv,
        "norm_R2": 24.0 * curv**2,
        "norm_rho2": 36.0 * curv**2,
        "euler": 2.0,
        "einstein": True,
        "weakly_einstein": True,
    }
    return CatalogEntry("sphere4", {"r": r}, metric, closed=True, reference=ref)


def _entry_hyperbolic4(c=1.0):
    if c <= 0:
        raise CatalogError("hyperbolic4 needs c > 0 (sectional curvature -c)")
    box, builder = _halfspace_block(c, 4)
    metric = MetricField("hyperbolic4", box, builder, params={"c": c})
    ref = {
        "tau": -12.0 * c,
        "norm_R2": 24.0 * c**2,
        "norm_rho2": 36.0 * c**2,
        "einstein": True,
        "weakly_einstein": True,
    }
    return CatalogEntry("hyperbolic4", {"c": c}, metric, closed=False, reference=ref)


def _entry_s2xs2(c1=1.0, c2=1.0):
    if c1 <= 0 or c2 <= 0:
        raise CatalogError("s2xs2 needs positive factor curvatures")
    b1, f1 = _sphere_block(c1, 2)
    b2, f2 = _sphere_block(c2, 2)
    m1 = MetricField("s2_a", b1, f1)
    m2 = MetricField("s2_b", b2, f2)
    metric = product_field(m1, m2, "s2xs2", params={"c1": c1, "c2": c2})
    ref = {
        "tau": 2.0 * (c1 + c2),
        "norm_R2": 4.0 * (c1**2 + c2**2),
        "norm_rho2": 2.0 * (c1**2 + c2**2),
        "euler": 4.0,
        "einstein": c1 == c2,
        "weakly_einstein": c1 == c2,
    }
    return CatalogEntry("s2xs2", {"c1": c1, "c2": c2}, metric, closed=True, reference=ref)


def _entry_s2xh2(c=1.0):
    if c <= 0:
        raise CatalogError("s2xh2 needs c > 0")
    b1, f1 = _sphere_block(c, 2)
    b2, f2 = _halfspace_block(c, 2)
    m1 = MetricField("s2", b1, f1)
    m2 = MetricField("h2", b2, f2)
    metric = product_field(m1, m2, "s2xh2", params={"c": c})
    ref = {
        "tau": 0.0,
        "norm_R2": 8.0 * c**2,
        "norm_rho2": 4.0 * c**2,
        "einstein": False,
        "weakly_einstein": True,
        "ricci_frame_diag": (c, c, -c, -c),
    }
    return CatalogEntry(
        "s2xh2",
        {"c": c},
        metric,
        closed=False,
        reference=ref,
        notes="weakly Einstein but not Einstein",
    )


def _entry_constcurv3(c=1.0):
    metric = _constcurv_field(c, 3, "constcurv3")
    ref = {
        "tau": 6.0 * c,
        "norm_R2": 12.0 * c**2,
        "norm_rho2": 12.0 * c**2,
        "einstein": True,
    }
    return CatalogEntry("constcurv3", {"c": c}, metric, closed=c > 0, reference=ref)


def _entry_product_3d_x_line(inner="constcurv3", **inner_params):
    if inner not in ("constcurv3", "polynomial_random", "torus_perturbed"):
        raise CatalogError(f"product_3d_x_line cannot use inner entry {inner!r}")
    if inner == "polynomial_random":
        inner_params.setdefault("dim", 3)
    if inner == "torus_perturbed":
        inner_params.setdefault("dim", 3)
    inner_entry = catalog_metric(inner, **inner_params)
    if inner_entry.dim != 3:
        raise CatalogError("product_3d_x_line needs a 3-dimensional inner entry")
    line_box, line_builder = _flat_block(1)
    line = MetricField("line", line_box, line_builder)
    metric = product_field(
        inner_entry.metric, line, "product_3d_x_line", params={"inner": inner, **inner_params}
    )
    ref = {}
    for key in ("tau", "norm_R2", "norm_rho2"):
        if key in inner_entry.reference:
            ref[key] = inner_entry.reference[key]
    return CatalogEntry(
        "product_3d_x_line",
        {"inner": inner, **inner_params},
        metric,
        closed=False,
        reference=ref,
        notes="3D inner factor times a unit line",
    )


def _entry_polynomial_random(seed=0, eps=0.05, dim=4):
    if dim not in (3, 4):
        raise CatalogError("polynomial_random supports dim in {3, 4}")
    if not 0.0 <= eps <= 0.2:
        raise CatalogError("polynomial_random needs 0 <= eps <= 0.2")
    rng = np.random.default_rng(seed)
    terms = {}
    for i in range(dim):
        for j in range(i, dim):
            rows = []
            for _ in range(3):
                degree = int(rng.integers(2, 4))
                axes = tuple(int(a) for a in rng.integers(0, dim, size=degree))
                coeff = eps * rng.uniform(-1.0, 1.0)
                rows.append((coeff, axes))
            terms[(i, j)] = rows
    box = Box([-1.0] * dim, [1.0] * dim)

    def builder(points, order):
        batch = points.shape[:-1]
        xs = [ScalarJet.variable(points, a, order) for a in range(dim)]
        comps = {}
        for (i, j), rows in terms.items():
            jet = ScalarJet.constant(1.0 if i == j else 0.0, dim, order, batch)
            for coeff, axes in rows:
                mono = xs[axes[0]]
                for a in axes[1:]:
                    mono = mono * xs[a]
                jet = jet + coeff * mono
            comps[(i, j)] = jet
        return SymJet2.from_components(dim, order, comps, batch)

    metric = MetricField(
        "polynomial_random", box, builder, params={"seed": seed, "eps": eps, "dim": dim}
    )
    _sample_check(metric)
    return CatalogEntry(
        "polynomial_random", {"seed": seed, "eps": eps, "dim": dim}, metric, closed=False
    )


def _entry_conformal_flat(seed=0, scale=0.1):
    if not 0.0 <= scale <= 0.5:
        raise CatalogError("conformal_flat needs 0 <= scale <= 0.5")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-scale, scale, size=4)
    b = rng.uniform(-scale, scale, size=(4, 4))
    b = 0.25 * (b + b.T)
    box = Box([-1.0] * 4, [1.0] * 4)

    def builder(points, order):
        batch = points.shape[:-1]
        xs = [ScalarJet.variable(points, k, order) for k in range(4)]
        phi = ScalarJet.constant(0.0, 4, order, batch)
        for k in range(4):
            phi = phi + a[k] * xs[k]
            for l in range(4):
                if b[k, l] != 0.0:
                    phi = phi + 0.5 * b[k, l] * (xs[k] * xs[l])
        conf = (2.0 * phi).exp()
        comps = {(i, i): conf for i in range(4)}
        return SymJet2.from_components(4, order, comps, batch)

    metric = MetricField("conformal_flat", box, builder, params={"seed": seed, "scale": scale})
    return CatalogEntry(
        "conformal_flat", {"seed": seed, "scale": scale}, metric, closed=False,
        notes="exp(2 phi) delta with affine-plus-quadratic phi",
    )


def _entry_minkowski_perturbed(seed=0, eps=0.02):
    if not 0.0 <= eps <= 0.1:
        raise CatalogError("minkowski_perturbed needs 0 <= eps <= 0.1")
    rng = np.random.default_rng(seed)
    waves = _draw_waves(rng, 4, eps) if eps > 0 else {}
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    box = Box([0.0] * 4, [2.0 * np.pi] * 4, periodic=(True,) * 4)
    metric = MetricField(
        "minkowski_perturbed",
        box,
        _wave_builder(4, waves, base=eta),
        signature=(-1, 1, 1, 1),
        params={"seed": seed, "eps": eps},
    )
    if eps > 0:
        _sample_check(metric)
    return CatalogEntry(
        "minkowski_perturbed", {"seed": seed, "eps": eps}, metric, closed=True,
        notes="Lorentzian waves on a flat background",
    )


_BUILDERS = {
    "flat4": _entry_flat4,
    "torus_perturbed": _entry_torus,
    "sphere4": _entry_sphere4,
    "hyperbolic4": _entry_hyperbolic4,
    "s2xs2": _entry_s2xs2,
    "s2xh2": _entry_s2xh2,
    "product_3d_x_line": _entry_product_3d_x_line,
    "constcurv3": _entry_constcurv3,
    "polynomial_random": _entry_polynomial_random,
    "conformal_flat": _entry_conformal_flat,
    "minkowski_perturbed": _entry_minkowski_perturbed,
}


def catalog_metric(name, **params):
    """Construct a catalog entry by name, validating its parameters."""
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise CatalogError(
            f"unknown catalog entry {name!r}; available: {', '.join(CATALOG_NAMES)}"
        ) from None
    try:
        return build(**params)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name}: {exc}") from None
    except DegenerateMetricError as exc:
        raise CatalogError(f"{name}: parameters make the metric degenerate ({exc})") from None


def catalog_entries():
    """All entries at their default parameters (used by the CLI listing)."""
    return [catalog_metric(name) for name in CATALOG_NAMES]
