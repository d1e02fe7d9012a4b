"""Left-tail expansion machinery: closed-form constant, tail model, extraction.

The tail coefficients are handled in exact arithmetic (rationals plus an
explicit sqrt(2) power). The closed-form constant c0 is evaluated exactly
as published; its agreement with the numerically extracted constant is an
exploratory report, not a gate (the beta=2 comparison in the test suite
documents a genuine discrepancy of the published formula).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadInterval, IllConditionedFit, NonConvergence, QuadratureFailure
from .specfun import gauss_legendre, integrate_to_infinity

__all__ = [
    "ZETA_PRIME_MINUS_ONE",
    "EULER_GAMMA",
    "TailModel",
    "eval_c0",
    "eval_tail_logF",
    "tail_logF_derivative",
    "tail_logF_derivative_internal",
    "extract_constant",
    "exact_tail_coefficients",
    "euler_gamma_series",
    "zeta_prime_minus_one_series",
]

# 30-digit reference constants, verified at import time against the
# internal series routines below (to double precision).
ZETA_PRIME_MINUS_ONE = -0.165421143700450929213919065292
EULER_GAMMA = 0.577215664901532860606512090082

SQRT2 = np.sqrt(2.0)


def euler_gamma_series(n: int = 40) -> float:
    """Euler's constant by Euler-Maclaurin on the harmonic sum."""
    k = np.arange(1, n + 1)
    h = float(np.sum(1.0 / k))
    n = float(n)
    corr = (
        -np.log(n)
        - 1.0 / (2 * n)
        + 1.0 / (12 * n**2)
        - 1.0 / (120 * n**4)
        + 1.0 / (252 * n**6)
        - 1.0 / (240 * n**8)
    )
    return h + corr


def zeta_prime_minus_one_series(n: int = 60) -> float:
    """zeta'(-1) by differentiating the Euler-Maclaurin continuation at s=-1.

    The Bernoulli correction terms carry an (s+1) factor there, so only the
    product-rule piece that drops it survives the differentiation.
    """
    k = np.arange(1, n)
    s_part = -float(np.sum(k * np.log(k)))
    n = float(n)
    ln = np.log(n)
    return (
        s_part
        + n * n * (ln / 2.0 - 1.0 / 4.0)
        - n * ln / 2.0
        + (1.0 + ln) / 12.0
        + 1.0 / (720.0 * n * n)
        - 1.0 / (5040.0 * n**4)
    )


def _verify_constants() -> None:
    if abs(euler_gamma_series(60) - EULER_GAMMA) > 1e-12:
        raise AssertionError("Euler-gamma verification series disagrees")
    if abs(zeta_prime_minus_one_series(80) - ZETA_PRIME_MINUS_ONE) > 1e-10:
        raise AssertionError("zeta'(-1) verification series disagrees")


def _c0_integrand(t: float, beta: float, force_series: bool | None = None) -> float:
    """Integrand of the closed-form constant; series branch below t=1e-3
    removes the 0/0 at the origin."""
    b2 = beta / 2.0
    use_series = t < 1e-3 if force_series is None else force_series
    if use_series:
        x = b2 * t
        inv = 1.0 / x - 0.5 + x / 12.0 - x**3 / 720.0 + x**5 / 30240.0
        bracket = -(t**4) / 720.0 + t**6 / 30240.0 - t**8 / 1209600.0
        return inv * bracket
    return (t / np.expm1(t) - 1.0 + t / 2.0 - t * t / 12.0) / np.expm1(b2 * t)


def eval_c0(beta: float, quad_nodes: int = 24) -> float:
    """The closed-form left-tail constant, exactly as published.

    Caution: at beta=2 this evaluates to -0.6565..., while the rigorously
    known constant for that case is zeta'(-1) + log(2)/24 = -0.13654...;
    the comparison against extraction is therefore reported, not asserted.
    """
    if beta <= 0:
        raise BadInterval("eval_c0: beta > 0 required")
    b2 = beta / 2.0
    val = (
        b2 * (1.0 / 12.0 - ZETA_PRIME_MINUS_ONE)
        + EULER_GAMMA / (6.0 * beta)
        - np.log(2.0 * np.pi) / 4.0
        - b2 / 2.0
        + (17.0 / 8.0 - (25.0 / 24.0) * (b2 + 2.0 / beta)) * np.log(2.0)
    )
    # series piece on [0, 1e-3] (the integrand there is ~ -(2/beta) t^3/720)
    rule = gauss_legendre(16, 0.0, 1e-3)
    head = float(
        np.dot(rule.weights, [_c0_integrand(x, beta, True) for x in rule.nodes])
    )
    try:
        tail = integrate_to_infinity(
            lambda s: np.array([_c0_integrand(x, beta) for x in np.atleast_1d(s)]),
            1e-3,
            2.0 / beta + 1.0,
            rel_tol=1e-15,
            nodes_per_panel=quad_nodes,
        )
    except NonConvergence as exc:
        raise QuadratureFailure(str(exc)) from exc
    return float(val + head + tail)


@dataclass(frozen=True)
class TailModel:
    """log F(t) ~ cubic |t|^3 + three_halves |t|^{3/2} + log_coef log|t| + c0."""

    beta: float
    cubic: float
    three_halves: float
    log_coef: float
    c0: float
    t_cut: float = -4.0

    @classmethod
    def for_beta(cls, beta: float, c0: float | None = None) -> "TailModel":
        cub, th_sqrt2, logc = exact_tail_coefficients(Fraction(beta).limit_denominator())
        return cls(
            beta=float(beta),
            cubic=float(cub),
            three_halves=float(th_sqrt2) * SQRT2,
            log_coef=float(logc),
            c0=eval_c0(beta) if c0 is None else float(c0),
        )


def exact_tail_coefficients(beta: Fraction):
    """(cubic, sqrt2-multiplier of |t|^{3/2}, log coefficient) as exact
    rationals: (-beta/24, (beta/2 - 1)/3, (beta/2 + 2/beta - 3)/8)."""
    beta = Fraction(beta)
    cubic = -beta / 24
    three_halves_sqrt2 = (beta / 2 - 1) / 3
    log_coef = (beta / 2 + 2 / beta - 3) / 8
    return cubic, three_halves_sqrt2, log_coef


def eval_tail_logF(model: TailModel, t: float) -> float:
    if t > model.t_cut:
        raise BadInterval(f"tail model valid for t <= {model.t_cut}")
    a = abs(t)
    return (
        model.cubic * a**3
        + model.three_halves * a**1.5
        + model.log_coef * np.log(a)
        + model.c0
    )


def tail_logF_derivative(beta: float, t: float) -> float:
    """d/dt of the tail model (external variable): for beta=6 this is
    (3/4) t^2 - sqrt(2) (-t)^{1/2} + 1/(24 t)."""
    cub, th2, logc = exact_tail_coefficients(Fraction(beta).limit_denominator())
    a = -t
    return (
        -3.0 * float(cub) * t * t
        - 1.5 * float(th2) * SQRT2 * np.sqrt(a)
        + float(logc) / t
    )


def tail_logF_derivative_internal(t: float) -> float:
    """beta=6 tail derivative in the internal variable:
    (1/12) t^2 - (sqrt(2)/3) (-t)^{1/2} + 1/(24 t)."""
    return t * t / 12.0 - (SQRT2 / 3.0) * np.sqrt(-t) + 1.0 / (24.0 * t)


def extract_constant(
    numeric_logF,
    coefficients: tuple[float, float, float],
    window: tuple[float, float],
    n_points: int = 40,
):
    """Least-squares fit of numeric_logF minus the known tail terms against
    const + A |t|^{-3/2} over the window; returns (c0_est, drift A)."""
    t_lo, t_hi = window
    if not (t_lo < t_hi <= -4.0):
        raise BadInterval("extraction window must satisfy t_lo < t_hi <= -4")
    cubic, three_halves, log_coef = coefficients
    tt = np.linspace(t_lo, t_hi, n_points)
    a = np.abs(tt)
    y = np.array([numeric_logF(tv) for tv in tt])
    known = cubic * a**3 + three_halves * a**1.5 + log_coef * np.log(a)
    design = np.vstack([np.ones_like(tt), a**-1.5]).T
    gram = design.T @ design
    if np.linalg.cond(gram) > 1e8:
        raise IllConditionedFit(f"window {window} gives condition {np.linalg.cond(gram):.2e}")
    sol, *_ = np.linalg.lstsq(design, y - known, rcond=None)
    return float(sol[0]), float(sol[1])


_verify_constants()
