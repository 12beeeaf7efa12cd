"""Vector arithmetic and the objective-function contract shared by all solvers.

Vectors are dense, C-contiguous float64 NumPy arrays.  An :class:`Objective`
bundles the value and (sub)gradient oracles of a convex function together with
optional extras: a fast ray-restriction factory and the known optimal value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Vector = np.ndarray


def as_vector(x) -> Vector:
    """Coerce to a C-contiguous float64 vector, rejecting non-finite entries."""
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError(f"expected a 1-D vector of dimension >= 1, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("vector has non-finite coordinates")
    return v


def dot(a: Vector, b: Vector) -> float:
    """Standard inner product <a, b>."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a, b))


def axpy(a: float, x: Vector, y: Vector) -> Vector:
    """a*x + y, coordinatewise."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        out = a * x + y
    if not np.isfinite(out).all():
        raise ValueError("axpy produced non-finite coordinates")
    return out


class RayFunction:
    """Restriction of an objective to the ray h -> f(base + h*direction).

    Wraps a scalar value oracle and an optional scalar derivative oracle,
    counting calls to each.  The derivative may be any subgradient of the
    (convex) restriction, which is all sign-based bisection needs.
    """

    __slots__ = ("base", "direction", "_value", "_deriv", "value_calls", "deriv_calls")

    def __init__(
        self,
        value: Callable[[float], float],
        deriv: Optional[Callable[[float], float]] = None,
        base: Optional[Vector] = None,
        direction: Optional[Vector] = None,
    ):
        self.base = base
        self.direction = direction
        self._value = value
        self._deriv = deriv
        self.value_calls = 0
        self.deriv_calls = 0

    @property
    def has_deriv(self) -> bool:
        return self._deriv is not None

    def value(self, h: float) -> float:
        self.value_calls += 1
        return self._value(h)

    def deriv(self, h: float) -> float:
        if self._deriv is None:
            raise ValueError("ray has no derivative oracle")
        self.deriv_calls += 1
        return self._deriv(h)


@dataclass
class Objective:
    """Evaluation contract for a convex objective on R^n.

    ``grad`` returns the gradient where f is differentiable and any subgradient
    elsewhere.  ``ray`` (optional) builds a fast :class:`RayFunction` for
    f(x + h*d); when absent, solvers fall back to direct evaluation along the
    ray.  ``nu``/``m_nu`` are smoothness metadata used only by theory-side
    checks, never read by solvers.
    """

    n: int
    value: Callable[[Vector], float]
    grad: Callable[[Vector], Vector]
    ray: Optional[Callable[[Vector, Vector], RayFunction]] = None
    value_and_grad: Optional[Callable[[Vector], tuple[float, Vector]]] = None
    f_star: Optional[float] = None
    nu: Optional[float] = None
    m_nu: Optional[float] = None
    name: str = ""

    def restrict(self, x: Vector, d: Vector) -> RayFunction:
        """Ray restriction at base x along direction d (fast path if available)."""
        if self.ray is not None:
            return self.ray(x, d)
        value_fn = lambda h: self.value(x + h * d)
        return RayFunction(value_fn, base=x, direction=d)


def finite_diff_check(
    obj: Objective, x: Vector, tol: float = 1e-5
) -> tuple[bool, float]:
    """Compare the analytic gradient to central finite differences at x.

    Uses per-coordinate step 1e-6*(1+|x_i|); for n > 50 only 50 evenly spaced
    coordinates are sampled.  Returns (passed, max relative error), where the
    relative error is |g_i - fd_i| / (1 + max(|g_i|, |fd_i|)).
    """
    x = as_vector(x)
    g = np.asarray(obj.grad(x), dtype=np.float64)
    n = x.shape[0]
    if n > 50:
        coords = np.unique(np.linspace(0, n - 1, 50).astype(int))
    else:
        coords = np.arange(n)
    max_rel = 0.0
    for i in coords:
        h = 1e-6 * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fd = (obj.value(xp) - obj.value(xm)) / (2.0 * h)
        rel = abs(g[i] - fd) / (1.0 + max(abs(g[i]), abs(fd)))
        if rel > max_rel:
            max_rel = rel
    return max_rel <= tol, max_rel
