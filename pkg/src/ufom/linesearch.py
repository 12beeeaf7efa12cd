"""One-dimensional minimization over a ray.

Two stages: repeated doubling of a segment until the function stops
decreasing (which brackets a minimizer of a convex function), then bisection
on the derivative sign when a derivative oracle exists, golden-section on
values otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ufom.core import RayFunction

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class LocalizationError(RuntimeError):
    """The doubling stage hit its cap: the ray is unbounded below or the
    minimizer lies beyond 2^cap * l0 (non-coercive ray / objective misuse)."""


@dataclass(frozen=True)
class LineSearchConfig:
    """Accuracy knobs for the ray search.

    ``tol_h`` is scaled by (1 + initial bracket width) when ``scale_tol`` is
    set, so the default 1e-10 acts as a relative interval-width tolerance.
    ``tol_g`` stops derivative bisection early once |g'(mid)| <= tol_g.
    """

    l0: float = 1.0
    tol_h: float = 1e-10
    tol_g: float = 0.0
    max_doublings: int = 64
    max_bisect: int = 200
    two_sided: bool = False
    scale_tol: bool = True

    def __post_init__(self):
        if self.l0 <= 0 or self.tol_h <= 0:
            raise ValueError("l0 and tol_h must be strictly positive")
        if self.tol_g < 0:
            raise ValueError("tol_g must be nonnegative")
        if self.max_doublings < 1 or self.max_bisect < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass
class LineSearchResult:
    """Accepted step plus the certificate that came with it.

    ``bracket`` contains a true minimizer; ``value_bound`` is an upper bound
    on value(h) - min value (from the last derivative sample, when one
    exists).  ``certified`` is False when an iteration cap fired before the
    width/derivative tolerance was met.
    """

    h: float
    value: float
    bracket: tuple[float, float]
    value_calls: int
    deriv_calls: int
    certified: bool = True
    value_bound: Optional[float] = None


def _localize_fn(value_fn, l0: float, max_doublings: int) -> float:
    l = l0
    f_l = value_fn(l)
    f_2l = value_fn(2.0 * l)
    doublings = 0
    while f_2l <= f_l:
        doublings += 1
        if doublings > max_doublings:
            raise LocalizationError(
                f"no bracket after {max_doublings} doublings from l0={l0:g}: "
                "ray is unbounded below or its minimizer lies beyond the cap"
            )
        l = 2.0 * l
        f_l = f_2l
        f_2l = value_fn(2.0 * l)
    return l


def localize(g: RayFunction, l0: float, max_doublings: int = 64) -> float:
    """Double l while g(2l) <= g(l); the exit test certifies a minimizer
    of convex g in [0, 2l].

    Note the factor two: at exit only g(2l) > g(l) is known, which places a
    minimizer at or below 2l but not necessarily below l itself (the
    accepted-doubling history gives the lower half, minimizer >= l/2).
    Callers that need a guaranteed bracket should use [0, 2*localize(...)].
    """
    return _localize_fn(g.value, l0, max_doublings)


def bisect_min(
    g: RayFunction,
    bracket: tuple[float, float],
    cfg: LineSearchConfig,
    value_slack: float = 0.0,
) -> LineSearchResult:
    """Shrink a bracket known to contain a minimizer of convex g.

    Uses derivative-sign bisection when g has a derivative oracle, otherwise
    golden-section on values.  With ``value_slack`` > 0 the derivative path
    also stops once |g'(mid)| * width <= value_slack, which by convexity
    bounds the achieved suboptimality by value_slack.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not b >= a:
        raise ValueError(f"invalid bracket [{a}, {b}]")
    v0 = g.value_calls
    d0 = g.deriv_calls
    tol_w = cfg.tol_h * (1.0 + (b - a)) if cfg.scale_tol else cfg.tol_h

    if g.has_deriv:
        certified = False
        last_dm = None
        for _ in range(cfg.max_bisect):
            width = b - a
            if width <= tol_w:
                certified = True
                break
            mid = 0.5 * (a + b)
            dm = g.deriv(mid)
            last_dm = dm
            if abs(dm) <= cfg.tol_g or (value_slack > 0.0 and abs(dm) * width <= value_slack):
                a = b = mid
                certified = True
                break
            if dm > 0.0:
                b = mid
            else:
                a = mid
        h = min(max(0.5 * (a + b), a), b)
        bound = abs(last_dm) * (b - a) if last_dm is not None else None
    else:
        # golden section; keeps two interior points, one fresh value per step
        u = a + (1.0 - _INVPHI) * (b - a)
        v = a + _INVPHI * (b - a)
        fu = g.value(u)
        fv = g.value(v)
        certified = False
        for _ in range(cfg.max_bisect):
            if b - a <= tol_w:
                certified = True
                break
            if fu <= fv:
                b, v, fv = v, u, fu
                u = a + (1.0 - _INVPHI) * (b - a)
                fu = g.value(u)
            else:
                a, u, fu = u, v, fv
                v = a + _INVPHI * (b - a)
                fv = g.value(v)
        h = min(max(0.5 * (a + b), a), b)
        bound = None

    return LineSearchResult(
        h=h,
        value=g.value(h),
        bracket=(a, b),
        value_calls=g.value_calls - v0,
        deriv_calls=g.deriv_calls - d0,
        certified=certified,
        value_bound=bound,
    )


def minimize_ray(
    g: RayFunction,
    cfg: LineSearchConfig,
    l0: Optional[float] = None,
    value_slack: float = 0.0,
) -> LineSearchResult:
    """Localize then bisect; the achieved value never exceeds g(0).

    One-sided searches cover h >= 0; with ``cfg.two_sided`` both rays are
    localized first, bracketing a minimizer over all of R.
    """
    start = g.value_calls
    start_d = g.deriv_calls
    l0 = cfg.l0 if l0 is None else l0
    g0 = g.value(0.0)

    if not cfg.two_sided and g.has_deriv and g.deriv(0.0) >= 0.0:
        # ascent-free ray: h = 0 is already a minimizer over [0, inf)
        return LineSearchResult(
            h=0.0,
            value=g0,
            bracket=(0.0, 0.0),
            value_calls=g.value_calls - start,
            deriv_calls=g.deriv_calls - start_d,
            value_bound=0.0,
        )

    if cfg.two_sided:
        l_pos = _localize_fn(g.value, l0, cfg.max_doublings)
        l_neg = _localize_fn(lambda h: g.value(-h), l0, cfg.max_doublings)
        bracket = (-2.0 * l_neg, 2.0 * l_pos)
    else:
        bracket = (0.0, 2.0 * localize(g, l0, cfg.max_doublings))

    res = bisect_min(g, bracket, cfg, value_slack=value_slack)
    if res.value > g0:
        # keep h = 0 as a candidate; widen the bracket so it still contains
        # both the returned point and a true minimizer
        res.h = 0.0
        res.value = g0
        res.bracket = (min(res.bracket[0], 0.0), max(res.bracket[1], 0.0))
        res.value_bound = None
    res.value_calls = g.value_calls - start
    res.deriv_calls = g.deriv_calls - start_d
    return res
