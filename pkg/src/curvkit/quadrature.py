"""Deterministic quadrature on coordinate charts and the Euler number.

Grids are stored per axis and expanded chunk by chunk, so refinement up
to the node budget never materialises the full tensor-product point set.
Chunks are accumulated in index order with plain summation, which keeps
repeated runs bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, prod

import numpy as np

from .catalog import CatalogEntry
from .curvature import density_arrays
from .errors import ConvergenceError, DomainError
from .fields import MetricField

DEFAULT_NODES = 24
NODE_BUDGET = 96
DEFAULT_CHUNK = 8192
EULER_NORMALISATION = 32.0 * pi**2


@dataclass(frozen=True)
class ChartGrid:
    """Tensor-product rule on a chart box.

    Bounded axes get Gauss-Legendre nodes, periodic axes an equal-weight
    rule on left endpoints (the trapezoid rule wrapped around the
    period).  Total weight equals the coordinate volume of the box.
    """

    nodes: tuple
    axis_points: tuple
    axis_weights: tuple

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def total_nodes(self):
        return prod(self.nodes)

    @property
    def coordinate_volume(self):
        return prod(float(w.sum()) for w in self.axis_weights)

    def chunks(self, chunk_size=DEFAULT_CHUNK):
        """Yield (points, weights) blocks in a fixed deterministic order."""
        total = self.total_nodes
        for start in range(0, total, chunk_size):
            flat = np.arange(start, min(start + chunk_size, total))
            multi = np.unravel_index(flat, self.nodes)
            pts = np.stack(
                [self.axis_points[a][multi[a]] for a in range(self.dim)], axis=-1
            )
            w = self.axis_weights[0][multi[0]].copy()
            for a in range(1, self.dim):
                w *= self.axis_weights[a][multi[a]]
            yield pts, w


def chart_grid(box, nodes=DEFAULT_NODES):
    """Quadrature grid for a chart box; `nodes` is per-axis (int or tuple)."""
    dim = box.dim
    if isinstance(nodes, int):
        nodes = (nodes,) * dim
    nodes = tuple(int(n) for n in nodes)
    if len(nodes) != dim or any(n < 2 for n in nodes):
        raise DomainError("need at least 2 nodes on each axis")
    axis_points = []
    axis_weights = []
    for a in range(dim):
        lo, hi = float(box.lo[a]), float(box.hi[a])
        n = nodes[a]
        if box.periodic[a]:
            period = hi - lo
            axis_points.append(lo + period * np.arange(n) / n)
            axis_weights.append(np.full(n, period / n))
        else:
            t, w = np.polynomial.legendre.leggauss(n)
            axis_points.append(0.5 * (hi + lo) + 0.5 * (hi - lo) * t)
            axis_weights.append(0.5 * (hi - lo) * w)
    return ChartGrid(nodes, tuple(axis_points), tuple(axis_weights))


@dataclass(frozen=True)
class Chart:
    """One chart of an atlas: metric, grid, optional coverage weight."""

    metric: MetricField
    grid: ChartGrid
    coverage: object = None

    def refined(self, factor=2):
        return Chart(
            self.metric,
            chart_grid(self.metric.box, tuple(n * factor for n in self.grid.nodes)),
            self.coverage,
        )


@dataclass(frozen=True)
class Atlas:
    """Charts covering a manifold up to measure zero."""

    charts: tuple
    closed: bool = False
    name: str = ""

    @property
    def dim(self):
        return self.charts[0].metric.dim

    def refined(self, factor=2):
        return Atlas(
            tuple(c.refined(factor) for c in self.charts), self.closed, self.name
        )

    @property
    def max_nodes_per_axis(self):
        return max(max(c.grid.nodes) for c in self.charts)


def atlas_for(source, nodes=DEFAULT_NODES):
    """Single-chart atlas for a catalog entry or a bare metric field."""
    if isinstance(source, CatalogEntry):
        metric, closed, name = source.metric, source.closed, source.name
    elif isinstance(source, MetricField):
        metric, closed, name = source, False, source.name
    else:
        raise DomainError(f"cannot build an atlas from {type(source).__name__}")
    return Atlas((Chart(metric, chart_grid(metric.box, nodes)),), closed, name)


def _chart_sum(chart, evaluator, chunk_size):
    """Sum weights * evaluator * sqrt|det g| over one chart's grid."""
    total = 0.0
    for pts, w in chart.grid.chunks(chunk_size):
        sym = chart.metric.jets(pts, 0, validate=False)
        sqrt_det = np.sqrt(np.abs(np.linalg.det(sym.value)))
        vals = np.asarray(evaluator(chart.metric, pts), dtype=float)
        if chart.coverage is not None:
            vals = vals * np.asarray(chart.coverage(pts), dtype=float)
        total += float(np.sum(w * vals * sqrt_det))
    return total


def _atlas_value(atlas, evaluator, chunk_size):
    return sum(_chart_sum(c, evaluator, chunk_size) for c in atlas.charts)


@dataclass
class IntegralResult:
    """Converged integral with its refinement trail."""

    value: float
    nodes_per_axis: int
    history: list = field(default_factory=list)

    def __float__(self):
        return self.value


def integrate_scalar(
    atlas,
    evaluator,
    rtol=1e-4,
    atol=0.0,
    node_budget=NODE_BUDGET,
    chunk_size=DEFAULT_CHUNK,
):
    """Integrate evaluator(metric, points) against the volume element.

    The evaluator returns integrand values per point (without the metric
    density; sqrt|det g| is applied here).  Each chart grid is doubled
    until two consecutive estimates agree within max(atol, rtol*|value|)
    or the per-axis budget is exhausted.
    """
    current = atlas
    value = _atlas_value(current, evaluator, chunk_size)
    history = [(current.max_nodes_per_axis, value)]
    while True:
        if current.max_nodes_per_axis * 2 > node_budget:
            raise ConvergenceError(
                f"integral did not settle within {node_budget} nodes per axis "
                f"(last delta {abs(history[-1][1] - history[-2][1]):.3e})"
                if len(history) > 1
                else f"node budget {node_budget} leaves no room to refine"
            )
        current = current.refined(2)
        refined_value = _atlas_value(current, evaluator, chunk_size)
        history.append((current.max_nodes_per_axis, refined_value))
        if abs(refined_value - value) <= max(atol, rtol * abs(refined_value)):
            return IntegralResult(refined_value, current.max_nodes_per_axis, history)
        value = refined_value


def volume(atlas, **kwargs):
    """Total volume of the atlas (integral of the constant 1)."""
    return integrate_scalar(atlas, lambda metric, pts: np.ones(pts.shape[:-1]), **kwargs)


def gauss_bonnet_density(metric, points):
    """|R|^2 - 4|rho|^2 + tau^2 per point (without the volume density)."""
    sym = metric.jets(points, 2, validate=False)
    _, tau, norm_r2, norm_rho2 = density_arrays(*sym.coeffs[:3])
    return norm_r2 - 4.0 * norm_rho2 + tau * tau


@dataclass
class EulerResult:
    """Euler number estimate from the curvature integral."""

    chi: float
    raw_integral: float
    nodes_per_axis: int
    history: list

    @property
    def normalisation(self):
        return EULER_NORMALISATION


def euler_characteristic(
    source,
    nodes=DEFAULT_NODES,
    rtol=1e-4,
    atol=1e-4,
    node_budget=NODE_BUDGET,
    chunk_size=DEFAULT_CHUNK,
):
    """Estimate chi from the 4D curvature integral on a closed manifold."""
    atlas = source if isinstance(source, Atlas) else atlas_for(source, nodes)
    if atlas.dim != 4:
        raise DomainError("the Euler-number integrand is specific to dimension 4")
    if not atlas.closed:
        raise DomainError("Euler-number integration needs a closed manifold")
    if not all(c.metric.riemannian for c in atlas.charts):
        raise DomainError("Euler-number integration needs a Riemannian metric")
    result = integrate_scalar(
        atlas,
        gauss_bonnet_density,
        rtol=rtol,
        atol=atol * EULER_NORMALISATION,
        node_budget=node_budget,
        chunk_size=chunk_size,
    )
    return EulerResult(
        chi=result.value / EULER_NORMALISATION,
        raw_integral=result.value,
        nodes_per_axis=result.nodes_per_axis,
        history=[(n, v / EULER_NORMALISATION) for n, v in result.history],
    )
