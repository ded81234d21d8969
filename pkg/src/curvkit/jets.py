"""Truncated Taylor expansions (jets) of scalar fields on R^n.

A :class:`ScalarJet` stores the value and the symmetric partial-derivative
tensors of a scalar field at a batch of points, up to a fixed order K <= 4.
``coeffs[k]`` holds the raw derivatives ``d_{a1} ... d_{ak} f`` with shape
``batch_shape + (dim,)*k`` (derivative axes last, fully symmetric).

Arithmetic propagates exactly: sums are termwise, products follow the
Leibniz rule, and smooth univariate functions (exp, sin, sqrt, 1/u, ...)
compose through the Faa di Bruno formula.  No truncation error is
introduced for inputs that are themselves exact, which is what makes the
downstream curvature assembly exact for closed-form metrics.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import JetOrderError

MAX_ORDER = 4

_LETTERS = "abcd"

# Placement patterns for the symmetrised Leibniz rule: for output order k,
# each subset S of the k derivative slots routes |S| derivatives onto the
# left factor and the rest onto the right factor.
_PLACEMENTS = {
    k: [list(combinations(range(k), p)) for p in range(k + 1)] for k in range(MAX_ORDER + 1)
}


def _product_coeff(fc, gc, k):
    """Order-k derivative tensor of a product from the factor tensors."""
    out = None
    letters = _LETTERS[:k]
    for p, subsets in enumerate(_PLACEMENTS[k]):
        if p >= len(fc) or (k - p) >= len(gc):
            continue
        for sel in subsets:
            left = "".join(letters[i] for i in sel)
            right = "".join(letters[i] for i in range(k) if i not in sel)
            term = np.einsum(f"...{left},...{right}->...{letters}", fc[p], gc[k - p])
            out = term if out is None else out + term
    return out


def _compose_coeffs(deriv, uc):
    """Faa di Bruno: jet of f(u) from univariate derivatives of f at u0.

    ``deriv[m]`` is the m-th derivative of f evaluated at the value of u;
    ``uc`` are the coefficient tensors of u.  Hard-coded through order 4.
    """
    order = len(uc) - 1
    out = [deriv[0]]
    if order >= 1:
        u1 = uc[1]
        out.append(deriv[1][..., None] * u1)
    if order >= 2:
        u2 = uc[2]
        out.append(
            deriv[2][..., None, None] * np.einsum("...a,...b->...ab", u1, u1)
            + deriv[1][..., None, None] * u2
        )
    if order >= 3:
        u3 = uc[3]
        u1u1u1 = np.einsum("...a,...b,...c->...abc", u1, u1, u1)
        u2u1 = (
            np.einsum("...ab,...c->...abc", u2, u1)
            + np.einsum("...ac,...b->...abc", u2, u1)
            + np.einsum("...bc,...a->...abc", u2, u1)
        )
        out.append(
            deriv[3][..., None, None, None] * u1u1u1
            + deriv[2][..., None, None, None] * u2u1
            + deriv[1][..., None, None, None] * u3
        )
    if order >= 4:
        u4 = uc[4]
        idx4 = (...,) + (None,) * 4
        u1x4 = np.einsum("...a,...b,...c,...d->...abcd", u1, u1, u1, u1)
        u2u1u1 = sum(
            np.einsum(f"...{left},...{m1},...{m2}->...abcd", u2, u1, u1)
            for left, m1, m2 in
            [("ab", "c", "d"), ("ac", "b", "d"), ("ad", "b", "c"),
             ("bc", "a", "d"), ("bd", "a", "c"), ("cd", "a", "b")]
        )
        u2u2 = (
            np.einsum("...ab,...cd->...abcd", u2, u2)
            + np.einsum("...ac,...bd->...abcd", u2, u2)
            + np.einsum("...ad,...bc->...abcd", u2, u2)
        )
        u3u1 = sum(
            np.einsum(f"...{left},...{m}->...abcd", u3, u1)
            for left, m in [("abc", "d"), ("abd", "c"), ("acd", "b"), ("bcd", "a")]
        )
        out.append(
            deriv[4][idx4] * u1x4
            + deriv[3][idx4] * u2u1u1
            + deriv[2][idx4] * (u2u2 + u3u1)
            + deriv[1][idx4] * u4
        )
    return out


class ScalarJet:
    """Batched jet of a scalar field: value plus derivative tensors."""

    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim, coeffs):
        order = len(coeffs) - 1
        if order > MAX_ORDER:
            raise JetOrderError(f"jet order {order} exceeds the supported maximum {MAX_ORDER}")
        self.dim = int(dim)
        self.order = order
        self.coeffs = tuple(np.asarray(c, dtype=float) for c in coeffs)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, value, dim, order, batch_shape=()):
        value = np.broadcast_to(np.asarray(value, dtype=float), batch_shape).copy()
        coeffs = [value]
        for k in range(1, order + 1):
            coeffs.append(np.zeros(batch_shape + (dim,) * k))
        return cls(dim, coeffs)

    @classmethod
    def variable(cls, points, axis, order):
        """Jet of the coordinate function x^axis at the given points."""
        points = np.asarray(points, dtype=float)
        dim = points.shape[-1]
        batch = points.shape[:-1]
        coeffs = [points[..., axis].copy()]
        if order >= 1:
            e = np.zeros(batch + (dim,))
            e[..., axis] = 1.0
            coeffs.append(e)
        for k in range(2, order + 1):
            coeffs.append(np.zeros(batch + (dim,) * k))
        return cls(dim, coeffs)

    @classmethod
    def wave(cls, points, kvec, phase, amplitude, order, kind="cos"):
        """Jet of amplitude * cos(<k,x> + phase) (or sin) in closed form.

        Every derivative is an outer power of the wave vector times a
        shifted cosine, so no jet multiplications are needed.  Used by the
        periodic catalog entries, where k has integer components.
        """
        points = np.asarray(points, dtype=float)
        kvec = np.asarray(kvec, dtype=float)
        dim = points.shape[-1]
        theta = points @ kvec + phase
        if kind == "sin":
            theta = theta - 0.5 * np.pi
        elif kind != "cos":
            raise ValueError(f"unknown wave kind {kind!r}")
        coeffs = []
        kpow = np.ones(points.shape[:-1])
        for k in range(order + 1):
            osc = amplitude * np.cos(theta + 0.5 * np.pi * k)
            coeffs.append(osc[(...,) + (None,) * k] * kpow)
            kpow = kpow[..., None] * kvec
        return cls(dim, coeffs)

    # ------------------------------------------------------------------
    # basic access
    # ------------------------------------------------------------------

    @property
    def value(self):
        return self.coeffs[0]

    @property
    def batch_shape(self):
        return self.coeffs[0].shape

    def d(self, k):
        """k-th symmetric derivative tensor, shape batch + (dim,)*k."""
        if k > self.order:
            raise JetOrderError(f"derivative order {k} not stored (jet order {self.order})")
        return self.coeffs[k]

    def truncated(self, order):
        if order > self.order:
            raise JetOrderError("cannot extend a jet to higher order")
        return ScalarJet(self.dim, self.coeffs[: order + 1])

    def directional(self, v, t):
        """Evaluate the Taylor polynomial along x + t*v (for FD checks)."""
        v = np.asarray(v, dtype=float)
        total = np.zeros(np.broadcast_shapes(self.batch_shape, np.shape(t)))
        fact = 1.0
        for k, c in enumerate(self.coeffs):
            if k > 0:
                fact *= k
                for _ in range(k):
                    c = c @ v
            total = total + (t**k) * c / fact
        return total

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def _binary_order(self, other):
        if self.dim != other.dim:
            raise ValueError("jets live on spaces of different dimension")
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, ScalarJet):
            order = self._binary_order(other)
            return ScalarJet(
                self.dim, [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)]
            )
        coeffs = list(self.coeffs)
        coeffs[0] = coeffs[0] + other
        return ScalarJet(self.dim, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return ScalarJet(self.dim, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, ScalarJet) else -np.asarray(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ScalarJet):
            order = self._binary_order(other)
            return ScalarJet(
                self.dim,
                [_product_coeff(self.coeffs, other.coeffs, k) for k in range(order + 1)],
            )
        other = np.asarray(other, dtype=float)
        return ScalarJet(self.dim, [c * other[(...,) + (None,) * k] for k, c in enumerate(self.coeffs)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScalarJet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise ValueError("only non-negative integer powers; use power() for real ones")
        e = int(exponent)
        if e == 0:
            return ScalarJet.constant(1.0, self.dim, self.order, self.batch_shape)
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # ------------------------------------------------------------------
    # univariate compositions
    # ------------------------------------------------------------------

    def compose(self, deriv):
        """Apply Faa di Bruno given derivative values of the outer map."""
        return ScalarJet(self.dim, _compose_coeffs(deriv, self.coeffs))

    def reciprocal(self):
        u0 = self.coeffs[0]
        inv = 1.0 / u0
        deriv = [inv]
        sign, fact = -1.0, 1.0
        for m in range(1, self.order + 1):
            fact *= m
            deriv.append(sign * fact * inv ** (m + 1))
            sign = -sign
        return self.compose(deriv)

    def power(self, alpha):
        """Real power u**alpha (value must stay in the principal branch)."""
        u0 = self.coeffs[0]
        deriv = [u0**alpha]
        coeff = 1.0
        for m in range(1, self.order + 1):
            coeff *= alpha - (m - 1)
            deriv.append(coeff * u0 ** (alpha - m))
        return self.compose(deriv)

    def sqrt(self):
        return self.power(0.5)

    def exp(self):
        e = np.exp(self.coeffs[0])
        return self.compose([e] * (self.order + 1))

    def log(self):
        u0 = self.coeffs[0]
        deriv = [np.log(u0)]
        sign, fact = 1.0, 1.0
        for m in range(1, self.order + 1):
            if m > 1:
                fact *= m - 1
            deriv.append(sign * fact * u0 ** (-m))
            sign = -sign
        return self.compose(deriv)

    def sin(self):
        u0 = self.coeffs[0]
        deriv = [np.sin(u0 + 0.5 * np.pi * m) for m in range(self.order + 1)]
        return self.compose(deriv)

    def cos(self):
        u0 = self.coeffs[0]
        deriv = [np.cos(u0 + 0.5 * np.pi * m) for m in range(self.order + 1)]
        return self.compose(deriv)

    def __repr__(self):
        return f"ScalarJet(dim={self.dim}, order={self.order}, batch={self.batch_shape})"
