"""Universal first-order solvers and the primal-dual stopping machinery.

Four methods share one skeleton: per outer iteration the inexact Lipschitz
estimate L is halved, then candidate steps are recomputed under doubling L
until an acceptance inequality certifies the step.  The linear-coupling
variant replaces the fixed gradient step with an exact steepest-descent line
search; the fixed-step variant exists as the executable form of the claim
that, in the Euclidean setting, it coincides with the fast-gradient method.
A conjugate-gradient baseline built from two line searches per iteration
rounds out the set.
"""

from __future__ import annotations

import math
import time
from array import array
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ufom import kernels
from ufom.core import Objective, Vector, as_vector
from ufom.linesearch import LineSearchConfig, LocalizationError, minimize_ray

L_FLOOR = 1e-300

TERM_TARGET = "target-value"
TERM_GAP = "dual-gap"
TERM_MAX_ITERS = "max-iterations"
TERM_TIME = "time-cap"
TERM_LINESEARCH = "line-search-failure"
TERM_ZERO_GRAD = "zero-gradient"


def inexact_lipschitz(delta: float, nu: float, m_nu: float) -> float:
    """Inexact Lipschitz constant making the quadratic upper model valid up
    to additive slack delta/2 for a gradient with Hoelder exponent nu."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    if m_nu < 0:
        raise ValueError("m_nu must be nonnegative")
    if nu == 1.0:
        # exponent (1-nu)/(1+nu) = 0; avoid 0**0
        return float(m_nu)
    e = (1.0 - nu) / (1.0 + nu)
    return (e * m_nu / delta) ** e * m_nu


def step_coefficients(alpha_k: float, L_k: float, L_k1: float) -> tuple[float, float]:
    """Next coupling coefficients (alpha_{k+1}, tau_k).

    alpha solves alpha^2*L_{k+1} - alpha = alpha_k^2*L_k, the recurrence that
    telescopes the per-iteration estimates; tau = 1/(alpha*L_{k+1}) in (0, 1].
    """
    if L_k <= 0 or L_k1 <= 0:
        raise ValueError("L values must be positive")
    if alpha_k < 0:
        raise ValueError("alpha_k must be nonnegative")
    if alpha_k == 0.0:
        alpha = 1.0 / L_k1
        tau = 1.0
    else:
        alpha = 0.5 / L_k1 + math.sqrt(0.25 / (L_k1 * L_k1) + alpha_k * alpha_k * L_k / L_k1)
        tau = 1.0 / (alpha * L_k1)
    if not (math.isfinite(alpha) and math.isfinite(tau)):
        raise ValueError("non-finite step coefficients")
    return alpha, tau


def ulcm_accept_test(
    alpha_k1: float,
    L_k1: float,
    tau_k: float,
    grad_x: Vector,
    z_k: Vector,
    z_k1: Vector,
    f_x: float,
    f_y: float,
    eps: float,
) -> bool:
    """Acceptance inequality of the linear-coupling step, evaluated verbatim:

    <alpha*g, z_k - z_{k+1}> - 0.5*||z_k - z_{k+1}||^2
        <= alpha^2 * L * (f(x_{k+1}) - f(y_{k+1}) + tau*eps/2)
    """
    diff = np.empty_like(z_k)
    kernels.scale_add(diff, 1.0, z_k, -1.0, z_k1)
    lhs = alpha_k1 * kernels.dot(grad_x, diff) - 0.5 * kernels.nrm2sq(diff)
    rhs = alpha_k1 * alpha_k1 * L_k1 * (f_x - f_y + 0.5 * tau_k * eps)
    return lhs <= rhs


@dataclass
class UniversalState:
    """State shared by the universal solvers after iteration k.

    ``c_dual`` accumulates sum_i alpha_i*(f(x_i) - <grad f(x_i), x_i>); the
    weighted gradient sum is recovered as z0 - z, so the accumulated linear
    lower model needs O(n) memory.
    """

    k: int
    x: Vector
    y: Vector
    z: Vector
    z0: Vector
    alpha: float
    A: float
    L: float
    tau_prev: float
    c_dual: float
    value_calls: int = 0
    grad_calls: int = 0


def dual_bound(state: UniversalState, theta: float) -> float:
    """Minimum of the accumulated linear lower model over the ball of radius
    sqrt(2*theta) around z0, divided by A: a computable lower bound on f*
    whenever theta >= 0.5*||z0 - x*||^2."""
    if state.A <= 0:
        raise ValueError("dual bound undefined before the first iteration (A = 0)")
    if theta <= 0:
        raise ValueError("theta must be positive")
    gm = np.empty_like(state.z0)
    kernels.scale_add(gm, 1.0, state.z0, -1.0, state.z)
    return (
        state.c_dual
        + kernels.dot(gm, state.z0)
        - math.sqrt(2.0 * theta) * math.sqrt(kernels.nrm2sq(gm))
    ) / state.A


@dataclass
class SolverOptions:
    """Run controls shared by all solvers.

    ``theta`` (an upper bound on 0.5*||x0 - x*||^2) enables the dual-gap stop
    and the per-iteration dual-bound trace; ``target`` enables the
    target-value stop; the iteration cap is always active.  ``delta`` relaxes
    the line search, degrading the accuracy guarantee from eps to eps+delta.
    """

    L0: float = 1.0
    eps: float = 1e-4
    delta: float = 0.0
    theta: Optional[float] = None
    target: Optional[float] = None
    x0: Optional[Vector] = None
    max_iters: int = 1_000_000
    time_cap_s: Optional[float] = None
    inner_cap: int = 60
    linesearch: LineSearchConfig = field(default_factory=LineSearchConfig)
    record_iterates: bool = False
    check_invariants: bool = False

    def __post_init__(self):
        if self.L0 <= 0:
            raise ValueError("L0 must be positive")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.theta is not None and self.theta <= 0:
            raise ValueError("theta must be positive when given")
        if self.max_iters < 1 or self.inner_cap < 1:
            raise ValueError("iteration caps must be >= 1")


class _TraceBuilder:
    __slots__ = ("f_y", "f_x", "L", "A", "alpha", "doublings", "t_s", "fhat")

    def __init__(self):
        self.f_y = array("d")
        self.f_x = array("d")
        self.L = array("d")
        self.A = array("d")
        self.alpha = array("d")
        self.doublings = array("l")
        self.t_s = array("d")
        self.fhat = array("d")

    def append(self, f_y, f_x, L, A, alpha, doublings, t_s, fhat):
        self.f_y.append(f_y)
        self.f_x.append(f_x)
        self.L.append(L)
        self.A.append(A)
        self.alpha.append(alpha)
        self.doublings.append(doublings)
        self.t_s.append(t_s)
        self.fhat.append(fhat)

    def finalize(self) -> "Trace":
        return Trace(
            f_y=np.asarray(self.f_y),
            f_x=np.asarray(self.f_x),
            L=np.asarray(self.L),
            A=np.asarray(self.A),
            alpha=np.asarray(self.alpha),
            doublings=np.asarray(self.doublings),
            t_s=np.asarray(self.t_s),
            fhat=np.asarray(self.fhat),
        )


@dataclass
class Trace:
    """Per-iteration history, one entry per accepted iteration k = 1..T.

    ``fhat`` is the dual bound (NaN when theta was not supplied); for the
    conjugate-gradient baseline the coupling columns (L, A, alpha, fhat) are
    NaN.
    """

    f_y: np.ndarray
    f_x: np.ndarray
    L: np.ndarray
    A: np.ndarray
    alpha: np.ndarray
    doublings: np.ndarray
    t_s: np.ndarray
    fhat: np.ndarray

    def __len__(self) -> int:
        return self.f_y.shape[0]

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, len(self) + 1)


@dataclass
class SolverReport:
    """Outcome of one solver run: final point, trace, and oracle accounting."""

    solver: str
    termination: str
    iterations: int
    x: Vector
    f: float
    f0: float
    wall_time_s: float
    value_calls: int
    grad_calls: int
    ray_deriv_calls: int
    trace: Trace
    opts: SolverOptions
    state: Optional[UniversalState] = None
    iterates: Optional[list] = None
    detail: str = ""


def _prepare_x0(obj: Objective, opts: SolverOptions) -> Vector:
    if opts.x0 is None:
        return np.zeros(obj.n)
    x0 = as_vector(opts.x0)
    if x0.shape[0] != obj.n:
        raise ValueError(f"x0 has dimension {x0.shape[0]}, objective expects {obj.n}")
    return x0


def _check_finite(name: str, v: float):
    if not math.isfinite(v):
        raise ValueError(f"objective produced a non-finite {name}")


def _universal_solve(obj: Objective, opts: SolverOptions, variant: str) -> SolverReport:
    t_start = time.perf_counter()
    x0 = _prepare_x0(obj, opts)
    n = x0.shape[0]

    y = x0.copy()
    z = x0.copy()
    z0 = x0.copy()
    alpha = 0.0
    A = 0.0
    L = float(opts.L0)
    tau_prev = 1.0
    c_dual = 0.0
    vc = gc = dc = 0

    f_y = float(obj.value(y))
    vc += 1
    _check_finite("value", f_y)
    f0 = f_y

    trace = _TraceBuilder()
    iterates = [] if opts.record_iterates else None
    gsum = np.zeros_like(x0) if opts.check_invariants else None

    x_new = x0.copy()
    y_new = np.empty_like(x0)
    z_new = np.empty_like(x0)
    w = np.empty_like(x0)

    reason = TERM_MAX_ITERS
    detail = ""
    final_override = None
    deadline = None if opts.time_cap_s is None else t_start + opts.time_cap_s
    sqrt_2theta = math.sqrt(2.0 * opts.theta) if opts.theta is not None else None
    last_h: Optional[float] = None

    if opts.target is not None and f_y <= opts.target:
        reason = TERM_TARGET
    else:
        k = 0
        while k < opts.max_iters:
            L_trial = max(0.5 * L, L_FLOOR)
            doublings = 0
            stop = None
            while True:
                alpha_t, tau = step_coefficients(alpha, L, L_trial)
                kernels.scale_add(x_new, tau, z, 1.0 - tau, y)
                if obj.value_and_grad is not None:
                    f_x, g = obj.value_and_grad(x_new)
                    f_x = float(f_x)
                else:
                    g = obj.grad(x_new)
                    f_x = float(obj.value(x_new))
                g = np.ascontiguousarray(g, dtype=np.float64)
                vc += 1
                gc += 1
                _check_finite("value", f_x)
                if kernels.nrm2sq(g) == 0.0:
                    stop = TERM_ZERO_GRAD
                    final_override = (x_new.copy(), f_x)
                    break

                if variant == "ulcm":
                    # L is certified against the fixed-step trial point; the
                    # line search below can only improve on it, so the
                    # accepted pair still satisfies this inequality
                    kernels.scale_add(y_new, 1.0, x_new, -1.0 / L_trial, g)
                    f_y_new = float(obj.value(y_new))
                    vc += 1
                    kernels.scale_add(z_new, 1.0, z, -alpha_t, g)
                    accept = ulcm_accept_test(
                        alpha_t, L_trial, tau, g, z, z_new, f_x, f_y_new, opts.eps
                    )
                elif variant == "ulcm-fixed":
                    kernels.scale_add(y_new, 1.0, x_new, -1.0 / L_trial, g)
                    f_y_new = float(obj.value(y_new))
                    vc += 1
                    kernels.scale_add(z_new, 1.0, z, -alpha_t, g)
                    accept = ulcm_accept_test(
                        alpha_t, L_trial, tau, g, z, z_new, f_x, f_y_new, opts.eps
                    )
                else:  # ufgm
                    kernels.scale_add(z_new, 1.0, z, -alpha_t, g)
                    kernels.scale_add(y_new, tau, z_new, 1.0 - tau, y)
                    f_y_new = float(obj.value(y_new))
                    vc += 1
                    kernels.scale_add(w, 1.0, y_new, -1.0, x_new)
                    model = (
                        f_x
                        + kernels.dot(g, w)
                        + 0.5 * L_trial * kernels.nrm2sq(w)
                        + 0.5 * tau * opts.eps
                    )
                    accept = f_y_new <= model
                _check_finite("value", f_y_new)
                if accept:
                    break
                doublings += 1
                if doublings > opts.inner_cap:
                    stop = TERM_LINESEARCH
                    detail = (
                        f"acceptance test still failing after {opts.inner_cap} "
                        f"doublings (L reached {L_trial:g})"
                    )
                    break
                L_trial *= 2.0

            if stop is not None:
                reason = stop
                break

            if variant == "ulcm":
                # steepest-descent step along the negative gradient from the
                # coupled point; keep whichever of (line-search point,
                # fixed-step trial) is lower
                ray = obj.restrict(x_new, -g)
                slack = 0.5 * tau * opts.delta if opts.delta > 0 else 0.0
                l0 = None if last_h is None else max(last_h, 1e-16)
                try:
                    ls = minimize_ray(ray, opts.linesearch, l0=l0, value_slack=slack)
                except LocalizationError as exc:
                    reason = TERM_LINESEARCH
                    detail = str(exc)
                    break
                vc += ls.value_calls
                dc += ls.deriv_calls
                last_h = ls.h
                if ls.value <= f_y_new:
                    kernels.scale_add(y_new, 1.0, x_new, -ls.h, g)
                    f_y_new = ls.value

            if opts.check_invariants:
                resid = abs(alpha_t * alpha_t * L_trial - alpha_t - alpha * alpha * L)
                assert resid <= 1e-12 * (1.0 + alpha * alpha * L), "coupling recurrence violated"
                assert 0.0 < tau <= 1.0 + 1e-15, "tau out of (0, 1]"

            alpha = alpha_t
            L = L_trial
            A += alpha_t
            tau_prev = tau
            c_dual += alpha_t * (f_x - kernels.dot(g, x_new))
            y, y_new = y_new, y
            z, z_new = z_new, z
            f_y = f_y_new
            k += 1

            if opts.check_invariants:
                gsum += alpha_t * g
                kernels.scale_add(w, 1.0, z0, -1.0, gsum)
                err = math.sqrt(kernels.nrm2sq(w - z))
                ref = 1.0 + math.sqrt(kernels.nrm2sq(z))
                assert err <= 1e-10 * ref, "z-update drifted from the explicit gradient sum"

            fhat = math.nan
            if sqrt_2theta is not None:
                kernels.scale_add(w, 1.0, z0, -1.0, z)
                fhat = (
                    c_dual + kernels.dot(w, z0) - sqrt_2theta * math.sqrt(kernels.nrm2sq(w))
                ) / A

            trace.append(
                f_y, f_x, L, A, alpha_t, doublings, time.perf_counter() - t_start, fhat
            )
            if iterates is not None:
                iterates.append((x_new.copy(), y.copy(), z.copy()))

            if opts.target is not None and f_y <= opts.target:
                reason = TERM_TARGET
                break
            if sqrt_2theta is not None and f_y - fhat <= opts.eps:
                reason = TERM_GAP
                break
            if deadline is not None and time.perf_counter() > deadline:
                reason = TERM_TIME
                break

    tr = trace.finalize()
    if final_override is not None:
        final_x, final_f = final_override
    else:
        final_x, final_f = y.copy(), f_y
    state = UniversalState(
        k=len(tr),
        x=x_new.copy(),
        y=final_x if final_override is None else y.copy(),
        z=z.copy(),
        z0=z0,
        alpha=alpha,
        A=A,
        L=L,
        tau_prev=tau_prev,
        c_dual=c_dual,
        value_calls=vc,
        grad_calls=gc,
    )
    return SolverReport(
        solver=variant,
        termination=reason,
        iterations=len(tr),
        x=final_x,
        f=final_f,
        f0=f0,
        wall_time_s=time.perf_counter() - t_start,
        value_calls=vc,
        grad_calls=gc,
        ray_deriv_calls=dc,
        trace=tr,
        opts=opts,
        state=state,
        iterates=iterates,
        detail=detail,
    )


def ulcm_solve(obj: Objective, opts: SolverOptions) -> SolverReport:
    """Linear-coupling method with a steepest-descent line search.

    Per accepted iteration: couple x = tau*z + (1-tau)*y, certify L against
    the fixed-step trial x - (1/L)*grad f(x), take the mirror step
    z <- z - alpha*grad f(x), then minimize f along the negative-gradient
    ray from x and keep the better of the two candidate points as y.  Since
    the kept y is never worse than the trial point, the acceptance
    inequality holds for the committed pair and the eps-accuracy analysis
    applies unchanged.  With ``opts.delta`` > 0 the line search is relaxed
    to a per-iteration value slack of tau*delta/2.
    """
    return _universal_solve(obj, opts, "ulcm")


def ulcm_fixed_step(obj: Objective, opts: SolverOptions) -> SolverReport:
    """Linear-coupling loop with the line search replaced by the fixed step
    y = x - (1/L)*grad f(x); in the Euclidean setting its iterates coincide
    with the fast-gradient method's."""
    return _universal_solve(obj, opts, "ulcm-fixed")


def ufgm_solve(obj: Objective, opts: SolverOptions) -> SolverReport:
    """Universal fast gradient method, Euclidean instantiation.

    The model minimizations collapse to closed form: v_k coincides with z_k
    and the mirror step is z <- z - alpha*grad f(x).  Acceptance is the
    quadratic-upper-model (descent lemma) inequality with slack tau*eps/2.
    """
    return _universal_solve(obj, opts, "ufgm")


def ncg_solve(obj: Objective, opts: SolverOptions) -> SolverReport:
    """Conjugate-gradient-style baseline without restarts.

    Each iteration solves two 1-D problems: an unconstrained search along
    y_{k-2} - x_k followed by a steepest-descent search from the result.
    """
    t_start = time.perf_counter()
    x0 = _prepare_x0(obj, opts)
    vc = gc = dc = 0

    x = x0.copy()
    f_x = float(obj.value(x))
    vc += 1
    _check_finite("value", f_x)
    f0 = f_x
    y_hist = [x0.copy(), x0.copy()]  # y_{k-2}, y_{k-1}

    trace = _TraceBuilder()
    reason = TERM_MAX_ITERS
    detail = ""
    deadline = None if opts.time_cap_s is None else t_start + opts.time_cap_s
    two_sided_cfg = replace(opts.linesearch, two_sided=True)
    slack = 0.5 * opts.delta if opts.delta > 0 else 0.0
    warm_alpha: Optional[float] = None
    warm_beta: Optional[float] = None

    if opts.target is not None and f_x <= opts.target:
        reason = TERM_TARGET
    else:
        k = 0
        while k < opts.max_iters:
            d = y_hist[0] - x
            if not d.any():
                y_k = x
                f_yk = f_x
            else:
                ray = obj.restrict(x, d)
                l0 = None if warm_alpha is None else max(abs(warm_alpha), 1e-16)
                try:
                    ls = minimize_ray(ray, two_sided_cfg, l0=l0, value_slack=slack)
                except LocalizationError as exc:
                    reason = TERM_LINESEARCH
                    detail = str(exc)
                    break
                vc += ls.value_calls
                dc += ls.deriv_calls
                warm_alpha = ls.h
                y_k = x + ls.h * d
                f_yk = ls.value

            g = np.ascontiguousarray(obj.grad(y_k), dtype=np.float64)
            gc += 1
            if kernels.nrm2sq(g) == 0.0:
                reason = TERM_ZERO_GRAD
                x, f_x = y_k.copy(), f_yk
                break

            ray = obj.restrict(y_k, -g)
            l0 = None if warm_beta is None else max(warm_beta, 1e-16)
            try:
                ls = minimize_ray(ray, opts.linesearch, l0=l0, value_slack=slack)
            except LocalizationError as exc:
                reason = TERM_LINESEARCH
                detail = str(exc)
                break
            vc += ls.value_calls
            dc += ls.deriv_calls
            warm_beta = ls.h
            x = y_k - ls.h * g
            f_x = ls.value
            _check_finite("value", f_x)

            y_hist = [y_hist[1], y_k]
            k += 1
            trace.append(
                f_x, f_yk, math.nan, math.nan, math.nan, 0,
                time.perf_counter() - t_start, math.nan,
            )
            if opts.target is not None and f_x <= opts.target:
                reason = TERM_TARGET
                break
            if deadline is not None and time.perf_counter() > deadline:
                reason = TERM_TIME
                break

    tr = trace.finalize()
    return SolverReport(
        solver="ncg",
        termination=reason,
        iterations=len(tr),
        x=x.copy(),
        f=f_x,
        f0=f0,
        wall_time_s=time.perf_counter() - t_start,
        value_calls=vc,
        grad_calls=gc,
        ray_deriv_calls=dc,
        trace=tr,
        opts=opts,
        detail=detail,
    )
