"""NumPy implementations of the hot numeric kernels.

Fallback backend used when the compiled extension is unavailable; mirrors the
signatures of ``ufom._kernels`` exactly.  ``out`` arguments are float64
C-contiguous arrays owned by the caller.
"""

import numpy as np

_weight_cache: dict[int, np.ndarray] = {}


def _weights(n: int) -> np.ndarray:
    w = _weight_cache.get(n)
    if w is None:
        w = np.arange(1, n + 1, dtype=np.float64)
        _weight_cache[n] = w
    return w


def dot(a, b):
    return float(np.dot(a, b))


def nrm2sq(a):
    return float(np.dot(a, a))


def scale_add(out, a, x, b, y):
    """out = a*x + b*y, elementwise."""
    np.multiply(x, a, out=out)
    out += b * np.asarray(y)


def quad_value(x):
    x = np.asarray(x)
    return float(np.dot(_weights(x.shape[0]), x * x))


def quad_grad(out, x):
    np.multiply(x, _weights(np.asarray(x).shape[0]), out=out)
    out *= 2.0


def quad_ray_coeffs(x, d):
    """Coefficients (c0, c1, c2) of h -> sum_i i*(x_i + h*d_i)^2."""
    x = np.asarray(x)
    d = np.asarray(d)
    w = _weights(x.shape[0])
    wx = w * x
    return float(np.dot(wx, x)), 2.0 * float(np.dot(wx, d)), float(np.dot(w * d, d))


def maxquad_value(x, mu):
    x = np.asarray(x)
    return float(x.max()) + 0.5 * mu * float(np.dot(x, x))


def maxquad_value_subgrad(out, x, mu):
    """out = mu*x + e_j with j the lowest index attaining max(x); returns (f(x), j)."""
    x = np.asarray(x)
    j = int(np.argmax(x))
    value = float(x[j]) + 0.5 * mu * float(np.dot(x, x))
    np.multiply(x, mu, out=out)
    out[j] += 1.0
    return value, j


def shifted_max(x, d, h):
    """max and lowest argmax of x + h*d."""
    t = np.asarray(x) + h * np.asarray(d)
    j = int(np.argmax(t))
    return float(t[j]), j
