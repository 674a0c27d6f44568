"""Proximate orders and their growth scales.

A proximate order is written rho(r) = rho + rho_hat(r) where rho_hat is a
zero proximate order satisfying the symmetry rho_hat(1/r) = -rho_hat(r),
i.e. the zero-part scale W(r) obeys W(1/r) = W(r) and W(1) = 1.  The full
comparison scale is ``scale(r) = r**rho * W(r)``.

The Potter factor ``potter_factor(order, t)`` is the extremal ratio

    sup_{r > 0} W(r t) / W(r),

the zero-part convention; the order-rho power re-enters through the Potter
inequality  ``scale(r t) <= t**rho * potter_factor(t) * scale(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import (DEFAULT_QUAD, SingularPointError,
                       golden_section_min, improper_quad)

__all__ = [
    "GridControl", "ZeroPart", "FlatZero", "LogPowerZero", "LogLogZero",
    "TabulatedZero", "ProximateOrder", "potter_factor", "potter_factor_lower",
    "potter_bound_report", "potter_decay_scan", "poisson_smoothed_scale",
]


@dataclass(frozen=True)
class GridControl:
    """Search grid for the Potter-factor supremum (log-uniform in r)."""
    ln_lo: float = -40.0
    ln_hi: float = 40.0
    points: int = 4001
    max_widenings: int = 5
    refine_xtol: float = 1e-9


DEFAULT_GRID = GridControl()


class ZeroPart:
    """Zero proximate order, represented through h(x) = ln W(e^x)."""

    symmetric = True

    def log_scale(self, x):
        raise NotImplementedError

    def slope(self, x):
        """d/dx ln W(e^x); raises SingularPointError where undefined."""
        raise NotImplementedError

    @property
    def concave_log_scale(self):
        """True when h(x) is concave on x > 0, so the Potter factor is W(t)."""
        return False

    def descriptor(self):
        raise NotImplementedError


@dataclass(frozen=True)
class FlatZero(ZeroPart):
    """rho_hat identically zero; W == 1."""

    def log_scale(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def slope(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    @property
    def concave_log_scale(self):
        return True

    def descriptor(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class LogPowerZero(ZeroPart):
    """W(r) = exp(A |ln r|**alpha) with alpha in (0, 1).

    The slope is singular at r = 1.
    """
    coef: float = 1.0
    alpha: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    def log_scale(self, x):
        x = np.asarray(x, dtype=float)
        return self.coef * np.abs(x) ** self.alpha

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x == 0.0):
            raise SingularPointError("slope undefined at r = 1 for this family")
        return self.coef * self.alpha * np.sign(x) * np.abs(x) ** (self.alpha - 1.0)

    @property
    def concave_log_scale(self):
        return self.coef > 0.0

    def descriptor(self):
        return {"kind": "log_power", "A": self.coef, "alpha": self.alpha}


@dataclass(frozen=True)
class LogLogZero(ZeroPart):
    """W(r) = 1 + |ln r|**alpha with alpha > 1."""
    alpha: float = 2.0

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise ValueError("alpha must exceed 1")

    def log_scale(self, x):
        x = np.asarray(x, dtype=float)
        return np.log1p(np.abs(x) ** self.alpha)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        return self.alpha * np.sign(x) * ax ** (self.alpha - 1.0) / (1.0 + ax ** self.alpha)

    def descriptor(self):
        return {"kind": "log_of_log_power", "alpha": self.alpha}


@dataclass(frozen=True)
class TabulatedZero(ZeroPart):
    """Zero order from a tabulated slope eta_hat on x = ln r >= 0.

    Values are linearly interpolated; symmetry supplies x < 0 through
    eta_hat(-x) = -eta_hat(x); beyond the last node the slope is frozen at
    its final value (grids should decay toward zero there).
    """
    xs: tuple = ()
    etas: tuple = ()
    _cum: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        etas = np.asarray(self.etas, dtype=float)
        if xs.size < 2 or xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
            raise ValueError("grid must start at ln r = 0 and strictly increase")
        if etas.size != xs.size:
            raise ValueError("grid and slope arrays must have equal length")
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (etas[1:] + etas[:-1]) * np.diff(xs))])
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "etas", tuple(etas))
        object.__setattr__(self, "_cum", tuple(cum))

    def log_scale(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        xs = np.asarray(self.xs)
        etas = np.asarray(self.etas)
        cum = np.asarray(self._cum)
        # trapezoid rule up to the enclosing node, linear slope beyond it
        idx = np.clip(np.searchsorted(xs, ax, side="right") - 1, 0, xs.size - 2)
        base = cum[idx] + 0.5 * (np.interp(ax, xs, etas) + etas[idx]) * (ax - xs[idx])
        return np.where(ax <= xs[-1], base, cum[-1] + etas[-1] * (ax - xs[-1]))

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        xs = np.asarray(self.xs)
        etas = np.asarray(self.etas)
        val = np.where(ax <= xs[-1], np.interp(ax, xs, etas), etas[-1])
        return np.sign(x) * val

    def descriptor(self):
        return {"kind": "tabulated_eta",
                "points": [[x, e] for x, e in zip(self.xs, self.etas)]}


@dataclass(frozen=True)
class ProximateOrder:
    """rho(r) = rho + rho_hat(r); evaluators for the scale r**rho(r)."""
    rho: float = 0.0
    zero_part: ZeroPart = FlatZero()
    closed_form_potter: bool = None

    @property
    def concave_zero_scale(self):
        if self.closed_form_potter is not None:
            return self.closed_form_potter
        return self.zero_part.concave_log_scale

    def log_scale(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("scale requires r > 0")
        x = np.log(r)
        return self.rho * x + self.zero_part.log_scale(x)

    def scale(self, r):
        """V(r) = r**rho(r); equals 1 exactly at r = 1."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("scale requires r > 0")
        # r**rho (exact for rho = 1) times the zero-part scale
        return r ** self.rho * np.exp(self.zero_part.log_scale(np.log(r)))

    def zero_scale(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("scale requires r > 0")
        return np.exp(self.zero_part.log_scale(np.log(r)))

    def log_derivative(self, r):
        """d ln V / d ln r, the local growth index (rho(r) + r ln r rho'(r))."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ValueError("log_derivative requires r > 0")
        return self.rho + self.zero_part.slope(np.log(r))

    def shifted(self, delta):
        return ProximateOrder(self.rho + float(delta), self.zero_part,
                              self.closed_form_potter)

    def descriptor(self):
        return {"rho": self.rho, "zero_part": self.zero_part.descriptor()}


def _grid_supremum(zero_part, tau, grid):
    h = zero_part.log_scale
    lo, hi = grid.ln_lo, grid.ln_hi
    for _ in range(grid.max_widenings + 1):
        xs = np.linspace(lo, hi, grid.points)
        g = h(xs + tau) - h(xs)
        k = int(np.argmax(g))
        best = g[k]
        edge = max(g[:  max(2, grid.points // 50)].max(),
                   g[-max(2, grid.points // 50):].max())
        if edge < best - 1e-9 * (1.0 + abs(best)) or lo < -5e5:
            break
        lo *= 2.0
        hi *= 2.0
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, xs.size - 1)]
    if b > a:
        _, neg = golden_section_min(lambda x: -(h(np.array([x + tau]))[0]
                                                - h(np.array([x]))[0]),
                                    a, b, xtol=grid.refine_xtol)
        best = max(best, -neg)
    return best


def potter_factor(order, t, grid=DEFAULT_GRID):
    """sup_{r>0} W(rt)/W(r) for the zero part W of the order.

    Uses the closed form W(t) for t >= 1 when the family has a concave
    log-scale; otherwise a widening log-uniform grid search with
    golden-section refinement around the grid argmax.
    """
    t = float(t)
    if t <= 0.0:
        raise ValueError("potter_factor requires t > 0")
    if t == 1.0 or isinstance(order.zero_part, FlatZero):
        return 1.0
    if order.concave_zero_scale and t >= 1.0:
        return float(order.zero_scale(t))
    tau = math.log(t)
    return float(math.exp(_grid_supremum(order.zero_part, tau, grid)))


def potter_factor_lower(order, t, grid=DEFAULT_GRID):
    """inf_{r>0} W(rt)/W(r) = 1 / potter_factor(1/t)."""
    t = float(t)
    if t <= 0.0:
        raise ValueError("potter_factor_lower requires t > 0")
    return 1.0 / potter_factor(order, 1.0 / t, grid)


@dataclass(frozen=True)
class PotterReport:
    max_violation: float
    worst_pair: tuple
    passed: bool
    tolerance: float


def potter_bound_report(order, samples, grid=DEFAULT_GRID, tolerance=1e-6):
    """Check scale(rt) <= t**rho * potter_factor(t) * scale(r) on samples.

    Violations are measured relatively, in log space to dodge overflow.
    """
    worst = 0.0
    worst_pair = None
    factor_cache = {}
    for r, t in samples:
        r = float(r)
        t = float(t)
        if t not in factor_cache:
            factor_cache[t] = potter_factor(order, t, grid)
        lhs = order.log_scale(r * t)
        rhs = order.rho * math.log(t) + math.log(factor_cache[t]) + order.log_scale(r)
        excess = float(lhs - rhs)
        if excess > worst:
            worst = excess
            worst_pair = (r, t)
    violation = math.expm1(worst) if worst > 0.0 else 0.0
    return PotterReport(max_violation=violation, worst_pair=worst_pair,
                        passed=violation <= tolerance, tolerance=tolerance)


def potter_decay_scan(order, t_grid, grid=DEFAULT_GRID):
    """Rows (t, ln gamma(t)/ln t, ln gamma(1/t)/ln t) over a t grid with t > e.

    Both rows tend to zero as t grows; for the concave families the forward
    column is exactly ln W(t)/ln t.
    """
    rows = []
    for t in t_grid:
        t = float(t)
        if t <= math.e:
            raise ValueError("decay scan requires t > e")
        lt = math.log(t)
        fwd = math.log(potter_factor(order, t, grid)) / lt
        bwd = math.log(potter_factor(order, 1.0 / t, grid)) / lt
        rows.append((t, fwd, bwd))
    return rows


def poisson_smoothed_scale(order, r, quad=DEFAULT_QUAD):
    """Harmonic smoothing (2r/pi) * integral of W(t)/(t^2+r^2) dt over (0,oo).

    Defined for zero orders only; the smoothed scale is holomorphic in the
    right half-plane, symmetric under r -> 1/r and asymptotic to W(r).
    """
    r = float(r)
    if r <= 0.0:
        raise ValueError("poisson smoothing requires r > 0")
    if order.rho != 0.0:
        raise ValueError("poisson smoothing is defined for zero orders")

    # substitute t = r*u so the kernel peak sits at u ~ 1
    def integrand(u):
        return order.zero_scale(r * u) / (u * u + 1.0)

    val = improper_quad(integrand, 0.0, None, quad)
    return float((2.0 / math.pi) * val.real)
