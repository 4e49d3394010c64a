"""Orthonormal Hermite polynomials and Gaussian inner products.

The basis is normalized so that E[h_j(x)^2] = 1 under the standard Gaussian
(h_j = He_j / sqrt(j!) in terms of the monic probabilists' polynomials).
Degree-2 diagonal coefficients of set indicators tie Gaussian dilation
derivatives to plain moments: sum_i h2(x_i) = (||x||^2 - n) / sqrt(2).
"""

from __future__ import annotations

import math

import numpy as np

SQRT2 = math.sqrt(2.0)


def hermite_1d(j: int, x):
    """h_j(x) by the stable orthonormal recurrence.

    h_0 = 1, h_1 = x, sqrt(j+1) h_{j+1} = x h_j - sqrt(j) h_{j-1}.
    Vectorized over x.
    """
    if j < 0:
        raise ValueError(f"degree must be >= 0, got {j}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if j == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, j):
        prev, cur = cur, (x * cur - math.sqrt(k) * prev) / math.sqrt(k + 1)
    return cur if cur.ndim else float(cur)


def h2(x):
    """Degree-2 basis polynomial (x^2 - 1)/sqrt(2), the workhorse coefficient."""
    x = np.asarray(x, dtype=float)
    out = (x * x - 1.0) / SQRT2
    return out if out.ndim else float(out)


def hermite_nd(alpha, x) -> float:
    """Tensor-product basis function h_alpha(x) = prod_i h_{alpha_i}(x_i)."""
    alpha = tuple(int(a) for a in alpha)
    x = np.asarray(x, dtype=float)
    if x.shape != (len(alpha),):
        raise ValueError(f"point has shape {x.shape}, expected ({len(alpha)},)")
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be >= 0")
    out = 1.0
    for a, xi in zip(alpha, x):
        if a:
            out *= hermite_1d(a, float(xi))
    return float(out)


def gauss_hermite_nodes(count: int):
    """Probabilists' Gauss-Hermite nodes with weights summing to one.

    The returned pair integrates polynomials of degree <= 2*count - 1
    exactly against the standard Gaussian.
    """
    if count < 1:
        raise ValueError(f"need at least one node, got {count}")
    x, w = np.polynomial.hermite_e.hermegauss(count)
    return x, w / math.sqrt(2.0 * math.pi)


def inner_product_gh(f, g, max_degree: int, nodes: int | None = None) -> float:
    """Gaussian inner product E[f(x) g(x)] for polynomial f, g.

    max_degree bounds the degree of each factor; the node count is chosen so
    the product (degree <= 2*max_degree) is integrated exactly.  An explicit
    node override below the exactness requirement is rejected.
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    required = max_degree + 1
    if nodes is None:
        nodes = required
    elif nodes < required:
        raise ValueError(
            f"{nodes} nodes integrate degree <= {2 * nodes - 1} exactly; "
            f"the product needs {required}"
        )
    x, w = gauss_hermite_nodes(nodes)
    return float(np.dot(w, np.asarray(f(x), dtype=float) * np.asarray(g(x), dtype=float)))


def parseval_check(coeffs_f: dict, coeffs_g: dict) -> float:
    """Coefficient-space inner product sum_alpha fhat(alpha) ghat(alpha).

    Coefficient maps are keyed by multi-index tuples; absent keys are zero,
    so the sum runs over the support intersection.
    """
    if len(coeffs_f) > len(coeffs_g):
        coeffs_f, coeffs_g = coeffs_g, coeffs_f
    return float(sum(v * coeffs_g[k] for k, v in coeffs_f.items() if k in coeffs_g))
