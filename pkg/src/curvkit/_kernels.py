"""Jitted inner loops for dense four-dimensional curvature scans.

The quadrature paths evaluate millions of nodes on a single core, which
rules out stacked einsum chains.  This kernel assembles the lowered
Riemann tensor per node from the classical second-derivative plus
Christoffel-quadratic form and reduces it straight to the scalar
densities needed by the Gauss-Bonnet integrand.  A vectorised numpy
twin lives in :mod:`curvkit.curvature`; the two are cross-checked in the
test suite.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(fn):
            return fn

        return deco if not (args and callable(args[0])) else args[0]


_PAIRS = np.array([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]], dtype=np.int64)


@njit(cache=True)
def density_kernel(g, d1, d2, out):
    """Per-node scalar densities of a 4D metric.

    Inputs follow the jet layout: ``g[b, i, j]``, ``d1[b, i, j, a]`` is
    ``d_a g_ij`` and ``d2[b, i, j, a, c]`` is ``d_a d_c g_ij``.  Writes
    ``out[b] = (sqrt|det g|, tau, |R|^2, |rho|^2)``.
    """
    nb = g.shape[0]
    aug = np.empty((4, 8))
    ginv = np.empty((4, 4))
    glow = np.empty((4, 4, 4))
    gup = np.empty((4, 4, 4))
    riem = np.zeros((4, 4, 4, 4))
    rho = np.empty((4, 4))
    rup = np.empty((4, 4))
    r2m = np.empty((6, 6))
    g2 = np.empty((6, 6))
    tmp = np.empty((6, 6))
    pairs = _PAIRS

    for b in range(nb):
        # ---- inverse and determinant by Gauss elimination with pivoting
        for i in range(4):
            for j in range(4):
                aug[i, j] = g[b, i, j]
                aug[i, 4 + j] = 1.0 if i == j else 0.0
        det = 1.0
        for col in range(4):
            piv = col
            best = abs(aug[col, col])
            for r in range(col + 1, 4):
                if abs(aug[r, col]) > best:
                    best = abs(aug[r, col])
                    piv = r
            if piv != col:
                for j in range(8):
                    t = aug[col, j]
                    aug[col, j] = aug[piv, j]
                    aug[piv, j] = t
                det = -det
            p = aug[col, col]
            det *= p
            inv_p = 1.0 / p
            for j in range(8):
                aug[col, j] *= inv_p
            for r in range(4):
                if r != col:
                    f = aug[r, col]
                    if f != 0.0:
                        for j in range(8):
                            aug[r, j] -= f * aug[col, j]
        for i in range(4):
            for j in range(4):
                ginv[i, j] = aug[i, 4 + j]

        # ---- Christoffel symbols (both index positions)
        for c in range(4):
            for i in range(4):
                for j in range(4):
                    glow[c, i, j] = 0.5 * (
                        d1[b, c, j, i] + d1[b, i, c, j] - d1[b, i, j, c]
                    )
        for k in range(4):
            for i in range(4):
                for j in range(4):
                    s = 0.0
                    for c in range(4):
                        s += ginv[k, c] * glow[c, i, j]
                    gup[k, i, j] = s

        # ---- lowered Riemann tensor from the classical formula
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(4):
                    for l in range(k + 1, 4):
                        quad = 0.0
                        for a in range(4):
                            quad += (
                                gup[a, i, k] * glow[a, j, l]
                                - gup[a, i, l] * glow[a, j, k]
                            )
                        val = 0.5 * (
                            d2[b, j, l, i, k]
                            + d2[b, i, k, j, l]
                            - d2[b, j, k, i, l]
                            - d2[b, i, l, j, k]
                        ) + quad
                        riem[i, j, k, l] = val
                        riem[j, i, k, l] = -val
                        riem[i, j, l, k] = -val
                        riem[j, i, l, k] = val

        # ---- Ricci, scalar curvature, |rho|^2
        tau = 0.0
        for j in range(4):
            for k in range(4):
                s = 0.0
                for a in range(4):
                    for c in range(4):
                        s += ginv[a, c] * riem[a, j, k, c]
                rho[j, k] = s
        for j in range(4):
            for k in range(4):
                tau += ginv[j, k] * rho[j, k]
        for i in range(4):
            for j in range(4):
                s = 0.0
                for a in range(4):
                    for c in range(4):
                        s += ginv[i, a] * ginv[j, c] * rho[a, c]
                rup[i, j] = s
        rho2 = 0.0
        for i in range(4):
            for j in range(4):
                rho2 += rho[i, j] * rup[i, j]

        # ---- |R|^2 through the two-form Gram matrices
        for A in range(6):
            iA = pairs[A, 0]
            jA = pairs[A, 1]
            for C in range(6):
                kC = pairs[C, 0]
                lC = pairs[C, 1]
                r2m[A, C] = riem[iA, jA, kC, lC]
                g2[A, C] = ginv[iA, kC] * ginv[jA, lC] - ginv[iA, lC] * ginv[jA, kC]
        for A in range(6):
            for C in range(6):
                s = 0.0
                for m in range(6):
                    s += g2[A, m] * r2m[m, C]
                tmp[A, C] = s
        r2 = 0.0
        for A in range(6):
            for C in range(6):
                s = 0.0
                for m in range(6):
                    s += tmp[A, m] * g2[m, C]
                r2 += s * r2m[A, C]
        r2 *= 4.0

        out[b, 0] = np.sqrt(abs(det))
        out[b, 1] = tau
        out[b, 2] = r2
        out[b, 3] = rho2
