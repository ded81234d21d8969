"""Jet arithmetic for tensor-valued fields.

A :class:`JetTensor` carries the derivative jets of a tensor field at a
batch of points: ``coeffs[k]`` has shape ``batch + (dim,)*rank + (dim,)*k``
with component axes first and the (symmetric) derivative axes last.

:func:`jet_einsum` contracts component indices while propagating the
product rule over derivative slots, which is all the machinery needed to
push metric jets through inverse, Christoffel and Ricci assembly without
losing derivative orders.  Derivative axes are labelled with uppercase
einsum letters so they never collide with user component labels.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

_DERIV_LETTERS = "TUVW"


class JetTensor:
    """Batched jets of a tensor field (component axes + derivative axes)."""

    __slots__ = ("dim", "rank", "coeffs", "types")

    def __init__(self, dim, rank, coeffs, types=None):
        self.dim = int(dim)
        self.rank = int(rank)
        self.coeffs = list(coeffs)
        self.types = types
        if types is not None and len(types) != rank:
            raise ValueError("types string must match the component rank")

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def batch_shape(self):
        c0 = self.coeffs[0]
        return c0.shape[: c0.ndim - self.rank]

    @classmethod
    def from_symjet(cls, sym, types="dd"):
        return cls(sym.dim, 2, list(sym.coeffs), types=types)

    def value(self):
        return self.coeffs[0]

    def truncated(self, order):
        return JetTensor(self.dim, self.rank, self.coeffs[: order + 1], self.types)

    def __add__(self, other):
        order = min(self.order, other.order)
        return JetTensor(
            self.dim,
            self.rank,
            [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)],
            self.types,
        )

    def __sub__(self, other):
        order = min(self.order, other.order)
        return JetTensor(
            self.dim,
            self.rank,
            [self.coeffs[k] - other.coeffs[k] for k in range(order + 1)],
            self.types,
        )

    def __mul__(self, scalar):
        return JetTensor(self.dim, self.rank, [c * scalar for c in self.coeffs], self.types)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def transpose_components(self, perm, types=None):
        """Reorder component axes: out[..., a_0..] = in[..., a_perm[0]..]."""
        coeffs = []
        for k, c in enumerate(self.coeffs):
            base = c.ndim - self.rank - k
            axes = (
                list(range(base))
                + [base + p for p in perm]
                + list(range(base + self.rank, c.ndim))
            )
            coeffs.append(np.transpose(c, axes))
        return JetTensor(self.dim, self.rank, coeffs, types)

    def shift_derivative(self):
        """Jet of the partial-derivative field d_a T (axis a leads).

        Consumes one stored order: the result is exact to order - 1.
        """
        if self.order < 1:
            raise ValueError("no stored derivatives left to shift")
        coeffs = []
        for k in range(self.order):
            c = self.coeffs[k + 1]
            src = c.ndim - (k + 1)
            dst = c.ndim - (k + 1) - self.rank
            coeffs.append(np.moveaxis(c, src, dst))
        return JetTensor(self.dim, self.rank + 1, coeffs, None)

    def component_einsum(self, spec, types=None):
        """Single-operand einsum over component axes, jets carried along."""
        comp_in, comp_out = spec.split("->")
        coeffs = []
        for k, c in enumerate(self.coeffs):
            d = _DERIV_LETTERS[:k]
            coeffs.append(np.einsum(f"...{comp_in}{d}->...{comp_out}{d}", c))
        return JetTensor(self.dim, len(comp_out), coeffs, types)


def _routed_sum(base, k, p, nd_deriv_start):
    """Sum of all derivative-slot routings of one canonical product.

    ``base`` carries the first factor's p derivative axes before the
    second factor's k - p.  Coefficient arrays are symmetric in their
    derivative axes (an invariant of every jet built here), so routing a
    subset differently only permutes output axes: add moved views of the
    one product instead of recontracting per subset.
    """
    subsets = list(combinations(range(k), p))
    if len(subsets) == 1:
        return base
    src = list(range(nd_deriv_start, nd_deriv_start + p))
    acc = base.copy()
    for sel in subsets[1:]:
        acc += np.moveaxis(base, src, [nd_deriv_start + s for s in sel])
    return acc


def jet_einsum(spec, a, b, order=None, types=None):
    """Contract component indices of two jet tensors with the product rule.

    ``spec`` is a plain einsum signature over component axes, e.g.
    ``"ka,aij->kij"``.  Derivative slots of the output order k are summed
    over all ways of routing them to the two factors.
    """
    inputs, comp_out = spec.split("->")
    comp_a, comp_b = inputs.split(",")
    if order is None:
        order = min(a.order, b.order)
    coeffs = []
    for k in range(order + 1):
        letters = _DERIV_LETTERS[:k]
        acc = None
        for p in range(k + 1):
            if p > a.order or (k - p) > b.order:
                continue
            base = np.einsum(
                f"...{comp_a}{letters[:p]},...{comp_b}{letters[p:]}"
                f"->...{comp_out}{letters}",
                a.coeffs[p],
                b.coeffs[k - p],
                optimize=True,
            )
            routed = _routed_sum(base, k, p, base.ndim - k)
            acc = routed if acc is None else acc + routed
        coeffs.append(acc)
    return JetTensor(a.dim, len(comp_out), coeffs, types)


def inverse_matrix_jet(a):
    """Jet of the matrix inverse, solved order by order from (A A^-1) = I."""
    inv0 = np.linalg.inv(a.coeffs[0])
    coeffs = [inv0]
    for k in range(1, a.order + 1):
        letters = _DERIV_LETTERS[:k]
        acc = None
        for p in range(1, k + 1):
            base = np.einsum(
                f"...ia{letters[:p]},...aj{letters[p:]}->...ij{letters}",
                a.coeffs[p],
                coeffs[k - p],
                optimize=True,
            )
            routed = _routed_sum(base, k, p, base.ndim - k)
            acc = routed if acc is None else acc + routed
        coeffs.append(
            -np.einsum(f"...ia,...aj{letters}->...ij{letters}", inv0, acc, optimize=True)
        )
    return JetTensor(a.dim, 2, coeffs, "uu")
