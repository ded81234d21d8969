"""Metric and symmetric two-tensor fields backed by jet builders.

A field here is a chart box plus a builder that returns the jet of every
component at a batch of points.  Evaluated jets are stored stacked: the
order-k coefficient of a :class:`SymJet2` has shape
``batch + (dim, dim) + (dim,)*k`` with the derivative axes last, matching
the :class:`~curvkit.jets.ScalarJet` layout.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateMetricError, DomainError, JetOrderError
from .jets import MAX_ORDER, ScalarJet


class Box:
    """Axis-aligned chart domain, with per-axis periodicity flags."""

    def __init__(self, lo, hi, periodic=None):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        self.dim = self.lo.size
        self.periodic = tuple(periodic) if periodic is not None else (False,) * self.dim
        if np.any(self.hi <= self.lo):
            raise ValueError("box upper bounds must exceed lower bounds")

    @property
    def period(self):
        return self.hi - self.lo

    def contains(self, points):
        points = np.asarray(points, dtype=float)
        ok = np.ones(points.shape[:-1], dtype=bool)
        for a in range(self.dim):
            if self.periodic[a]:
                continue
            x = points[..., a]
            ok &= (x >= self.lo[a]) & (x <= self.hi[a])
        return ok

    def sample(self, count, rng):
        u = rng.uniform(size=(count, self.dim))
        return self.lo + u * (self.hi - self.lo)

    def __repr__(self):
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()}, periodic={self.periodic})"


class SymJet2:
    """Jets of a symmetric matrix-valued field, stacked per order."""

    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim, coeffs):
        self.dim = int(dim)
        self.order = len(coeffs) - 1
        self.coeffs = tuple(np.asarray(c, dtype=float) for c in coeffs)

    @classmethod
    def zeros(cls, dim, order, batch_shape):
        return cls(
            dim, [np.zeros(batch_shape + (dim, dim) + (dim,) * k) for k in range(order + 1)]
        )

    @classmethod
    def from_components(cls, dim, order, components, batch_shape):
        """Assemble from a dict {(i, j): ScalarJet} of the upper triangle."""
        out = cls.zeros(dim, order, batch_shape)
        coeffs = [np.asarray(c) for c in out.coeffs]
        for (i, j), jet in components.items():
            for k in range(order + 1):
                block = np.broadcast_to(jet.coeffs[k], batch_shape + (dim,) * k)
                coeffs[k][(..., i, j) + (slice(None),) * k] = block
                if i != j:
                    coeffs[k][(..., j, i) + (slice(None),) * k] = block
        return cls(dim, coeffs)

    @property
    def value(self):
        return self.coeffs[0]

    @property
    def batch_shape(self):
        return self.coeffs[0].shape[:-2]

    def d(self, k):
        if k > self.order:
            raise JetOrderError(f"derivative order {k} not stored (order {self.order})")
        return self.coeffs[k]

    def component(self, i, j):
        """The (i, j) entry as a ScalarJet."""
        sel = lambda c, k: c[(..., i, j) + (slice(None),) * k]
        return ScalarJet(self.dim, [sel(c, k) for k, c in enumerate(self.coeffs)])

    def matrix(self):
        """Nested list of ScalarJet components (the jet 'matrix')."""
        return [[self.component(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def truncated(self, order):
        if order > self.order:
            raise JetOrderError("cannot extend a jet to higher order")
        return SymJet2(self.dim, self.coeffs[: order + 1])

    def __add__(self, other):
        order = min(self.order, other.order)
        return SymJet2(self.dim, [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)])

    def __mul__(self, scalar):
        return SymJet2(self.dim, [c * scalar for c in self.coeffs])

    __rmul__ = __mul__


class Sym2Field:
    """Symmetric (0,2) tensor field on a chart box (builder-backed)."""

    kind = "tensor"

    def __init__(self, name, box, builder, params=None, max_order=MAX_ORDER):
        self.name = name
        self.box = box
        self.dim = box.dim
        self._builder = builder
        self.params = dict(params or {})
        self.max_order = max_order

    def jets(self, points, order):
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DomainError(
                f"points have dimension {points.shape[-1]}, chart has {self.dim}"
            )
        if order > self.max_order:
            raise JetOrderError(
                f"order {order} exceeds the supported maximum {self.max_order}"
            )
        inside = self.box.contains(points)
        if not np.all(inside):
            bad = np.asarray(points)[~inside]
            raise DomainError(f"{(~inside).sum()} point(s) outside chart box, e.g. {bad.flat[:4]}")
        return self._builder(points, order)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, dim={self.dim})"


class MetricField(Sym2Field):
    """A nondegenerate symmetric field with a declared signature."""

    kind = "metric"

    def __init__(self, name, box, builder, signature=None, params=None, max_order=MAX_ORDER):
        super().__init__(name, box, builder, params=params, max_order=max_order)
        self.signature = tuple(signature) if signature is not None else (1,) * box.dim
        if len(self.signature) != self.dim or any(s not in (-1, 1) for s in self.signature):
            raise ValueError("signature must be a tuple of +-1 of length dim")

    @property
    def riemannian(self):
        return all(s == 1 for s in self.signature)

    def jets(self, points, order, validate=True):
        jet = super().jets(points, order)
        if validate:
            self.check_nondegenerate(jet.value, np.asarray(points))
        return jet

    def check_nondegenerate(self, g, points, tol=1e-10):
        """Inertia of g must match the declared signature everywhere."""
        eig = np.linalg.eigvalsh(g)
        scale = np.abs(eig).max(axis=-1, keepdims=True)
        if np.any(np.abs(eig) <= tol * np.maximum(scale, 1.0)):
            flat = np.abs(eig).min(axis=-1).reshape(-1).argmin()
            where = points.reshape(-1, self.dim)[flat]
            raise DegenerateMetricError(f"metric degenerate near {where}")
        neg = (eig < 0).sum(axis=-1)
        want = sum(1 for s in self.signature if s < 0)
        if np.any(neg != want):
            raise DegenerateMetricError(
                f"metric inertia changed: expected {want} negative direction(s)"
            )

    def deformed(self, h, t):
        """The linearly deformed metric g + t*h on the same chart."""
        if h.dim != self.dim:
            raise ValueError("deformation dimension mismatch")

        def builder(points, order):
            return self._builder(points, order) + float(t) * h._builder(points, order)

        return MetricField(
            f"{self.name}+t*h",
            self.box,
            builder,
            signature=self.signature,
            params={**self.params, "t": float(t)},
            max_order=min(self.max_order, h.max_order),
        )


def evaluate_metric_jet(metric, points, order):
    """Jets of all metric components at points (validated entry point)."""
    return metric.jets(points, order, validate=True)


def product_field(f1, f2, name, signature=None, cls=None, params=None):
    """Block-diagonal product of two fields on the product box."""
    box = Box(
        np.concatenate([f1.box.lo, f2.box.lo]),
        np.concatenate([f1.box.hi, f2.box.hi]),
        f1.box.periodic + f2.box.periodic,
    )
    d1, d2 = f1.dim, f2.dim
    n = d1 + d2

    def builder(points, order):
        j1 = f1._builder(points[..., :d1], order)
        j2 = f2._builder(points[..., d1:], order)
        out = SymJet2.zeros(n, order, points.shape[:-1])
        coeffs = [np.asarray(c) for c in out.coeffs]
        for k in range(order + 1):
            s1 = (Ellipsis,) + (slice(0, d1),) * (2 + k)
            s2 = (Ellipsis,) + (slice(d1, n),) * (2 + k)
            coeffs[k][s1] = j1.coeffs[k]
            coeffs[k][s2] = j2.coeffs[k]
        return SymJet2(n, coeffs)

    cls = cls or (MetricField if isinstance(f1, MetricField) else Sym2Field)
    kwargs = {"params": params}
    if cls is MetricField:
        sig1 = getattr(f1, "signature", (1,) * d1)
        sig2 = getattr(f2, "signature", (1,) * d2)
        kwargs["signature"] = signature or (sig1 + sig2)
    return cls(name, box, builder, max_order=min(f1.max_order, f2.max_order), **kwargs)
