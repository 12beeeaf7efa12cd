"""Benchmark objectives with analytic optima, plus the composite ray cache.

Two families drive the benchmark harness: an ill-conditioned diagonal
quadratic (smooth, curvature growing linearly with the dimension) and a
max-of-coordinates term plus a small quadratic (non-smooth).  Both implement
the fast ray-restriction interface so steepest-descent line searches cost
O(n) setup and O(1) or O(n) per 1-D evaluation instead of a full objective
evaluation per probe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ufom import kernels
from ufom.core import Objective, RayFunction, Vector, as_vector


def quad_eval(n: int, x: Vector) -> float:
    """f(x) = sum_i i * x_i**2 (weights 1..n)."""
    x = np.asarray(x)
    if x.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {x.shape[0]}")
    return float(kernels.quad_value(x))


def quad_grad(n: int, x: Vector) -> Vector:
    """Gradient (2*1*x_1, ..., 2*n*x_n)."""
    x = np.asarray(x)
    if x.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {x.shape[0]}")
    out = np.empty_like(x)
    kernels.quad_grad(out, x)
    return out


def _quad_ray(x: Vector, d: Vector) -> RayFunction:
    c0, c1, c2 = kernels.quad_ray_coeffs(x, d)
    value = lambda h: c0 + h * (c1 + h * c2)
    deriv = lambda h: c1 + 2.0 * c2 * h
    return RayFunction(value, deriv, base=x, direction=d)


@dataclass(frozen=True)
class QuadraticProblem:
    """Diagonal quadratic with weights 1..n; f* = 0 at the origin."""

    n: int

    def objective(self) -> Objective:
        n = self.n

        def grad(x):
            out = np.empty_like(x)
            kernels.quad_grad(out, x)
            return out

        return Objective(
            n=n,
            value=kernels.quad_value,
            grad=grad,
            ray=_quad_ray,
            f_star=0.0,
            nu=1.0,
            m_nu=2.0 * n,
            name="quad",
        )

    def x_star(self) -> Vector:
        return np.zeros(self.n)


def maxquad_eval(n: int, mu: float, x: Vector) -> float:
    """f(x) = max_i x_i + (mu/2)*||x||^2."""
    x = np.asarray(x)
    if x.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {x.shape[0]}")
    if mu <= 0:
        raise ValueError("mu must be positive")
    return float(kernels.maxquad_value(x, mu))


def maxquad_subgrad(n: int, mu: float, x: Vector) -> Vector:
    """Subgradient mu*x + e_j, j the lowest index attaining max_i x_i."""
    x = np.asarray(x)
    if x.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {x.shape[0]}")
    if mu <= 0:
        raise ValueError("mu must be positive")
    out = np.empty_like(x)
    kernels.maxquad_value_subgrad(out, x, mu)
    return out


def _maxquad_ray(mu: float, x: Vector, d: Vector) -> RayFunction:
    # quadratic part closed-form in h; max part is one fused pass per probe
    s0 = kernels.nrm2sq(x)
    s1 = kernels.dot(x, d)
    s2 = kernels.nrm2sq(d)

    def value(h):
        m, _ = kernels.shifted_max(x, d, h)
        return m + 0.5 * mu * (s0 + h * (2.0 * s1 + h * s2))

    def deriv(h):
        _, j = kernels.shifted_max(x, d, h)
        return d[j] + mu * (s1 + h * s2)

    return RayFunction(value, deriv, base=x, direction=d)


@dataclass(frozen=True)
class MaxQuadProblem:
    """max_i x_i plus (mu/2)*||x||^2; f* = -1/(2*mu*n) at (-1/(mu*n))*e."""

    n: int
    mu: float = 0.1

    def objective(self) -> Objective:
        n, mu = self.n, self.mu
        if mu <= 0:
            raise ValueError("mu must be positive")

        def value(x):
            return kernels.maxquad_value(x, mu)

        def grad(x):
            out = np.empty_like(x)
            kernels.maxquad_value_subgrad(out, x, mu)
            return out

        def value_and_grad(x):
            out = np.empty_like(x)
            v, _ = kernels.maxquad_value_subgrad(out, x, mu)
            return v, out

        return Objective(
            n=n,
            value=value,
            grad=grad,
            ray=lambda x, d: _maxquad_ray(mu, x, d),
            value_and_grad=value_and_grad,
            f_star=-1.0 / (2.0 * mu * n),
            nu=0.0,
            name="maxquad",
        )

    def x_star(self) -> Vector:
        return np.full(self.n, -1.0 / (self.mu * self.n))


def diag_quadratic(weights) -> Objective:
    """f(x) = sum_i w_i * x_i**2 for positive weights w (test workhorse)."""
    w = as_vector(weights)
    if (w <= 0).any():
        raise ValueError("weights must be strictly positive")
    n = w.shape[0]

    def value(x):
        return float(np.dot(w, np.asarray(x) ** 2))

    def grad(x):
        return 2.0 * w * np.asarray(x)

    def ray(x, d):
        wx = w * x
        c0 = float(np.dot(wx, x))
        c1 = 2.0 * float(np.dot(wx, d))
        c2 = float(np.dot(w * d, d))
        return RayFunction(
            lambda h: c0 + h * (c1 + h * c2),
            lambda h: c1 + 2.0 * c2 * h,
            base=x,
            direction=d,
        )

    return Objective(n=n, value=value, grad=grad, ray=ray, f_star=0.0, nu=1.0,
                     m_nu=2.0 * float(w.max()), name="diag-quad")


@dataclass
class CompositeObjective:
    """f(x) = phi(A x) + psi(x) with the two matrix products per ray cached.

    ``matvec_count`` tracks products with A; a single ray restriction performs
    exactly two regardless of how many 1-D evaluations follow.
    """

    A: np.ndarray
    phi: Callable[[Vector], float]
    psi: Optional[Callable[[Vector], float]] = None
    phi_grad: Optional[Callable[[Vector], Vector]] = None
    psi_grad: Optional[Callable[[Vector], Vector]] = None
    matvec_count: int = field(default=0, compare=False)

    def __post_init__(self):
        self.A = np.ascontiguousarray(self.A, dtype=np.float64)
        if self.A.ndim != 2 or self.A.shape[0] != self.A.shape[1]:
            raise ValueError("A must be a square matrix")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def _matvec(self, v: Vector) -> Vector:
        self.matvec_count += 1
        return self.A @ v

    def value(self, x: Vector) -> float:
        out = self.phi(self._matvec(x))
        if self.psi is not None:
            out += self.psi(x)
        return float(out)

    def grad(self, x: Vector) -> Vector:
        if self.phi_grad is None:
            raise ValueError("phi_grad is required for gradient evaluation")
        self.matvec_count += 1
        g = self.A.T @ self.phi_grad(self._matvec(x))
        if self.psi_grad is not None:
            g = g + self.psi_grad(x)
        return g

    def objective(self, f_star: Optional[float] = None) -> Objective:
        return Objective(
            n=self.n,
            value=self.value,
            grad=self.grad,
            ray=lambda x, d: composite_restrict(self, x, d),
            f_star=f_star,
            name="composite",
        )


def composite_restrict(co: CompositeObjective, x: Vector, d: Vector) -> RayFunction:
    """Ray restriction of a composite objective with the A-products hoisted.

    Computes v0 = A x and v1 = A d once; every later evaluation is O(n).
    """
    x = np.asarray(x)
    d = np.asarray(d)
    if x.shape[0] != co.n or d.shape[0] != co.n:
        raise ValueError("dimension mismatch with A")
    v0 = co._matvec(x)
    v1 = co._matvec(d)
    if not (np.isfinite(v0).all() and np.isfinite(v1).all()):
        raise ValueError("matrix products produced non-finite values")

    def value(h):
        out = co.phi(v0 + h * v1)
        if co.psi is not None:
            out += co.psi(x + h * d)
        return float(out)

    deriv = None
    if co.phi_grad is not None and (co.psi is None or co.psi_grad is not None):
        def deriv(h):
            out = float(np.dot(co.phi_grad(v0 + h * v1), v1))
            if co.psi_grad is not None:
                out += float(np.dot(co.psi_grad(x + h * d), d))
            return out

    return RayFunction(value, deriv, base=x, direction=d)


def least_squares_composite(n: int, seed: int = 0) -> CompositeObjective:
    """Random dense least-squares instance f(x) = 0.5*||A x||^2, f* = 0."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) / np.sqrt(n)
    return CompositeObjective(
        A=A,
        phi=lambda v: 0.5 * float(np.dot(v, v)),
        phi_grad=lambda v: v,
    )
