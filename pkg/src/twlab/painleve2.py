"""Hastings-McLeod solution of Painleve II and its asymptotic series.

The solution of u'' = t u + 2 u^3 with u ~ Ai(t) at +infinity and
u ~ sqrt(-t/2) at -infinity is a separatrix: shooting is exponentially
unstable in both directions, so the two-point boundary value problem is
solved globally by damped Newton iteration on a Numerov (fourth order)
discretization, with boundary data taken from Ai on the right and the
t -> -inf series on the left.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import solve_banded

from . import specfun
from .errors import BadInterval, NewtonDivergence, OrderTooHigh, OutOfRange, UnknownSeries

__all__ = [
    "AsymptoticSeries",
    "Painleve2Solution",
    "solve_hastings_mcleod",
    "eval",
    "eval_series",
    "series_term_magnitude",
    "export_csv",
    "fast_eval",
]

SQRT2 = np.sqrt(2.0)

# t -> -inf series, coefficients exact as printed: each term is
# coef * sqrt(2)^s2 * (-t)^expo.  For 'u' the ladder multiplies the leading
# sqrt(-t/2) = sqrt(2)^-1 (-t)^{1/2}.
_F = Fraction
_SERIES: dict[str, list[tuple[Fraction, int, Fraction]]] = {
    "u": [
        (_F(1), -1, _F(1, 2)),
        (_F(-1, 8), -1, _F(1, 2) - 3),
        (_F(-73, 128), -1, _F(1, 2) - 6),
        (_F(-10657, 1024), -1, _F(1, 2) - 9),
        (_F(-13912277, 32768), -1, _F(1, 2) - 12),
        (_F(-8045883943, 262144), -1, _F(1, 2) - 15),
        (_F(-14518451390349, 4194304), -1, _F(1, 2) - 18),
    ],
    "dlogu": [
        (_F(-1, 2), 0, _F(-1)),
        (_F(-3, 8), 0, _F(-4)),
        (_F(-111, 32), 0, _F(-7)),
        (_F(-1509, 16), 0, _F(-10)),
        (_F(-2617599, 512), 0, _F(-13)),
        (_F(-944695983, 2048), 0, _F(-16)),
        (_F(-127756233309, 2048), 0, _F(-19)),
    ],
    "omega": [
        (_F(-1, 4), 0, _F(2)),
        (_F(-1, 8), 0, _F(-1)),
        (_F(-9, 64), 0, _F(-4)),
        (_F(-189, 128), 0, _F(-7)),
        (_F(-21663, 512), 0, _F(-10)),
        (_F(-4825971, 2048), 0, _F(-13)),
        (_F(-3540311739, 16384), 0, _F(-16)),
        (_F(-241980297111, 8192), 0, _F(-19)),
    ],
    # second branch of the q2 expansion (the one the solved trajectory follows)
    "q2": [
        (_F(1), -1, _F(-3, 2)),
        (_F(21, 8), 0, _F(-3)),
        (_F(1707, 64), -1, _F(-9, 2)),
    ],
    # log F6 tail in the external variable, constant term excluded
    # (it is undetermined here; see asymptotics.TailModel)
    "logF6": [
        (_F(-1, 4), 0, _F(3)),
        (_F(2, 3), 1, _F(3, 2)),
    ],
}
_LOGF6_LOG_COEF = _F(1, 24)


@dataclass(frozen=True)
class AsymptoticSeries:
    """Truncated t -> -inf expansion with exact rational x sqrt(2)-power terms."""

    variable: str
    terms: tuple  # ((Fraction coef, int sqrt2_power, Fraction exponent), ...)
    log_coef: Fraction = _F(0)
    side: str = "-inf"

    def __call__(self, t: float) -> float:
        x = -float(t)
        if x <= 0:
            raise OutOfRange(f"{self.variable} series: needs t < 0, got {t}")
        total = sum(
            float(c) * SQRT2**s2 * x ** float(e) for c, s2, e in self.terms
        )
        if self.log_coef:
            total += float(self.log_coef) * np.log(x)
        return total


def series(kind: str, order: int) -> AsymptoticSeries:
    """Series object for `kind` truncated after `order` correction terms."""
    if kind not in _SERIES:
        raise UnknownSeries(f"unknown series kind {kind!r}")
    ladder = _SERIES[kind]
    if order < 0 or order + 1 > len(ladder):
        raise OrderTooHigh(
            f"{kind}: order {order} exceeds tabulated coefficients "
            f"(max {len(ladder) - 1})"
        )
    return AsymptoticSeries(
        variable=kind,
        terms=tuple(ladder[: order + 1]),
        log_coef=_LOGF6_LOG_COEF if kind == "logF6" else _F(0),
    )


def eval_series(kind: str, t: float, order: int) -> float:
    """Truncated series value; order counts correction terms past the leading one."""
    return series(kind, order)(t)


def series_term_magnitude(kind: str, t: float, index: int) -> float:
    """|term index| of the series at t, for remainder bounds in tests."""
    if kind not in _SERIES:
        raise UnknownSeries(f"unknown series kind {kind!r}")
    ladder = _SERIES[kind]
    if index >= len(ladder):
        raise OrderTooHigh(f"{kind}: no tabulated term {index}")
    c, s2, e = ladder[index]
    return abs(float(c)) * SQRT2**s2 * (-float(t)) ** float(e)


@dataclass(eq=False)
class Painleve2Solution:
    """Dense Hastings-McLeod table with cubic Hermite interpolation.

    omega stores the combination u^4 + t u^2 - ut^2 exactly as built from
    the table; _omega_smooth is the same function obtained by integrating
    u^2 from the right end, which keeps full relative accuracy where the
    algebraic form suffers exponential cancellation (t >> 1). The two agree
    to ~4e-11 relative wherever omega is not exponentially small.
    """

    grid: np.ndarray
    u: np.ndarray
    ut: np.ndarray
    omega: np.ndarray
    newton_iterations: int
    final_update: float
    _omega_smooth: np.ndarray = field(repr=False, default=None)
    _int_u2_right: np.ndarray = field(repr=False, default=None)   # int_t^tmax u^2
    _int_om_right: np.ndarray = field(repr=False, default=None)   # int_t^tmax omega
    _tail_int_u2: float = 0.0      # int_tmax^inf u^2
    _tail_int_om: float = 0.0      # int_tmax^inf omega

    @property
    def t_min(self) -> float:
        return float(self.grid[0])

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def _locate(self, t):
        t = np.asarray(t, dtype=np.float64)
        if t.size and (t.min() < self.t_min - 1e-12 or t.max() > self.t_max + 1e-12):
            raise OutOfRange(
                f"t outside solved interval [{self.t_min}, {self.t_max}]"
            )
        i = np.clip(
            ((t - self.grid[0]) / self.step).astype(int), 0, len(self.grid) - 2
        )
        s = (t - self.grid[i]) / self.step
        s = np.where(t == self.grid[i + 1], 1.0, s)  # exact at upper nodes
        return i, s

    def eval(self, t):
        """(u, ut, omega) by cubic Hermite interpolation."""
        t = np.asarray(t, dtype=np.float64)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        i, s = self._locate(t)
        h = self.step
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        u0, u1 = self.u[i], self.u[i + 1]
        uu = h00 * u0 + h10 * h * self.ut[i] + h01 * u1 + h11 * h * self.ut[i + 1]
        # derivative channel of ut is u'' = t u + 2 u^3, exact on nodes
        d0 = self.grid[i] * u0 + 2 * u0**3
        d1 = self.grid[i + 1] * u1 + 2 * u1**3
        ut = h00 * self.ut[i] + h10 * h * d0 + h01 * self.ut[i + 1] + h11 * h * d1
        om = (
            h00 * self.omega[i]
            + h10 * h * u0**2
            + h01 * self.omega[i + 1]
            + h11 * h * u1**2
        )
        if scalar:
            return float(uu[0]), float(ut[0]), float(om[0])
        return uu, ut, om

    def omega_smooth(self, t):
        """omega from the integral form (full relative accuracy at large t)."""
        t = np.asarray(t, dtype=np.float64)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        i, s = self._locate(t)
        h = self.step
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        om = (
            h00 * self._omega_smooth[i]
            + h10 * h * self.u[i] ** 2
            + h01 * self._omega_smooth[i + 1]
            + h11 * h * self.u[i + 1] ** 2
        )
        return float(om[0]) if scalar else om

    def int_u2_to_inf(self, t: float) -> float:
        """int_t^inf u^2 ds (equals -omega(t))."""
        return self._partial_right(self._int_u2_right, self.u**2,
                                   2 * self.u * self.ut, t) + self._tail_int_u2

    def int_omega_to_inf(self, t: float) -> float:
        """int_t^inf omega ds (equals log F2(t))."""
        return self._partial_right(self._int_om_right, self._omega_smooth,
                                   self.u**2, t) + self._tail_int_om

    def _partial_right(self, cum, vals, derivs, t):
        """int_t^tmax of the Hermite interpolant whose nodal data is (vals, derivs)."""
        i, s = self._locate(float(t))
        i = int(i)
        s = float(s)
        h = self.step
        # exact integral of the cubic on [t, node_{i+1}]
        y0, y1 = vals[i], vals[i + 1]
        d0, d1 = derivs[i] * h, derivs[i + 1] * h
        # Hermite basis antiderivatives evaluated from s to 1, scaled by h
        def anti(x):
            H00 = x - x**3 + x**4 / 2
            H10 = x**2 / 2 - 2 * x**3 / 3 + x**4 / 4
            H01 = x**3 - x**4 / 2
            H11 = x**4 / 4 - x**3 / 3
            return H00 * y0 + H10 * d0 + H01 * y1 + H11 * d1

        piece = h * (anti(1.0) - anti(s))
        return float(piece + cum[i + 1])


def solve_hastings_mcleod(
    t_min: float = -13.0,
    t_max: float = 13.0,
    n: int = 52001,
    tol: float = 1e-11,
    max_iter: int = 50,
) -> Painleve2Solution:
    """Solve the Hastings-McLeod boundary value problem on [t_min, t_max].

    Numerov discretization (O(h^4)) of u'' = t u + 2 u^3 with boundary data
    u(t_max) = Ai(t_max) and u(t_min) from the 6-term t -> -inf series;
    damped Newton with a tridiagonal Jacobian. The initial iterate is a
    logistic blend of the two asymptotic profiles centered at t = -1,
    which keeps Newton inside the Hastings-McLeod basin.

    Grid-quality note: the stored midpoint ODE residual scales like
    u'''' h^2 / 24, so the 1e-8 residual target needs h <= ~5e-4
    (n >= 40001 over a 20-unit window).
    """
    if t_min > -10.0 or t_max < 6.0:
        raise BadInterval("need t_min <= -10 and t_max >= 6")
    if n < 2000:
        raise BadInterval("need n >= 2000")
    t = np.linspace(t_min, t_max, n)
    h = t[1] - t[0]

    ai_all, _ = specfun.airy_grid(np.clip(t, -8.0, t_max))
    w = 1.0 / (1.0 + np.exp((t + 1.0) / 0.8))
    left = np.where(t < 0, np.sqrt(np.maximum(-t, 1e-12) / 2), 0.0)
    u = w * left + (1 - w) * ai_all
    u_series6 = eval_series("u", t_min, 6)
    u[0] = u_series6
    u[-1] = specfun.airy(t_max).ai

    c = h * h / 12.0

    def residual(uv):
        f = t * uv + 2 * uv**3
        return uv[:-2] - 2 * uv[1:-1] + uv[2:] - c * (f[:-2] + 10 * f[1:-1] + f[2:])

    last_update = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        R = residual(u)
        fp = t + 6 * u**2
        ab = np.zeros((3, n - 2))
        ab[1, :] = -2.0 - 10 * c * fp[1:-1]
        ab[0, 1:] = 1.0 - c * fp[2:-1]
        ab[2, :-1] = 1.0 - c * fp[1:-2]
        du = solve_banded((1, 1), ab, -R)
        lam, nrm0 = 1.0, float(np.max(np.abs(R)))
        while lam > 1e-4:
            un = u.copy()
            un[1:-1] += lam * du
            if float(np.max(np.abs(residual(un)))) < nrm0 or np.max(
                np.abs(lam * du)
            ) < 1e-15:
                break
            lam /= 2
        u[1:-1] += lam * du
        last_update = float(np.max(np.abs(lam * du)))
        if last_update < tol:
            break
    else:
        raise NewtonDivergence(
            f"no contraction after {max_iter} iterations (update {last_update:g})"
        )

    ut = np.empty_like(u)
    ut[2:-2] = (u[:-4] - 8 * u[1:-3] + 8 * u[3:-1] - u[4:]) / (12 * h)
    for i in (0, 1):
        ut[i] = (
            -25 * u[i] + 48 * u[i + 1] - 36 * u[i + 2] + 16 * u[i + 3] - 3 * u[i + 4]
        ) / (12 * h)
    for i in (-1, -2):
        ut[i] = (
            25 * u[i] - 48 * u[i - 1] + 36 * u[i - 2] - 16 * u[i - 3] + 3 * u[i - 4]
        ) / (12 * h)
    omega = u**4 + t * u**2 - ut**2

    # cumulative integrals from the right (corrected trapezoid, O(h^4))
    f2 = u**2
    d2 = 2 * u * ut
    seg = h * (f2[:-1] + f2[1:]) / 2 + h * h * (d2[:-1] - d2[1:]) / 12
    int_u2_right = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    av = specfun.airy(t_max)
    tail_u2 = av.ai_prime**2 - t_max * av.ai**2
    omega_smooth = -(int_u2_right + tail_u2)
    seg_om = h * (omega_smooth[:-1] + omega_smooth[1:]) / 2 + h * h * (
        f2[:-1] - f2[1:]
    ) / 12
    int_om_right = np.concatenate([np.cumsum(seg_om[::-1])[::-1], [0.0]])
    tail_om = -specfun.integrate_to_infinity(
        lambda s: (s - t_max) * specfun.airy_grid(np.minimum(s, 30.0))[0] ** 2,
        t_max,
        0.5,
        rel_tol=1e-13,
    )

    return Painleve2Solution(
        grid=t,
        u=u,
        ut=ut,
        omega=omega,
        newton_iterations=it,
        final_update=last_update,
        _omega_smooth=omega_smooth,
        _int_u2_right=int_u2_right,
        _int_om_right=int_om_right,
        _tail_int_u2=float(tail_u2),
        _tail_int_om=float(tail_om),
    )


def eval(solution: Painleve2Solution, t):
    """(u, ut, omega) at t by cubic Hermite interpolation."""
    return solution.eval(t)


def fast_eval(solution: Painleve2Solution):
    """Scalar evaluator closure for tight ODE right-hand-side loops.

    Returns f(t) -> (u, ut, omega_smooth) using plain float arithmetic.
    """
    tg = solution.grid
    ug = solution.u
    utg = solution.ut
    omg = solution._omega_smooth
    t0 = float(tg[0])
    h = float(tg[1] - tg[0])
    nmax = len(tg) - 2

    def f(t):
        t = float(t)
        i = int((t - t0) / h)
        i = 0 if i < 0 else (nmax if i > nmax else i)
        s = (t - tg[i]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        u0 = ug[i]
        u1 = ug[i + 1]
        u = h00 * u0 + h10 * utg[i] * h + h01 * u1 + h11 * utg[i + 1] * h
        d0 = (tg[i] * u0 + 2 * u0**3) * h
        d1 = (tg[i + 1] * u1 + 2 * u1**3) * h
        ut = h00 * utg[i] + h10 * d0 + h01 * utg[i + 1] + h11 * d1
        om = h00 * omg[i] + h10 * u0 * u0 * h + h01 * omg[i + 1] + h11 * u1 * u1 * h
        return u, ut, om

    return f


def export_csv(solution: Painleve2Solution, path) -> None:
    """Write the table as t,u,ut,omega with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["t", "u", "ut", "omega"])
        for i in range(len(solution.grid)):
            wr.writerow(
                [
                    f"{solution.grid[i]:.17g}",
                    f"{solution.u[i]:.17g}",
                    f"{solution.ut[i]:.17g}",
                    f"{solution.omega[i]:.17g}",
                ]
            )
