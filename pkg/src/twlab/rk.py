"""Embedded adaptive Runge-Kutta integration with dense Hermite output.

A Cash-Karp 5(4) pair, run by default in extended precision
(numpy.longdouble). The auxiliary systems integrated elsewhere in this
package are exponentially ill-conditioned near their degenerate fixed
point; double-precision per-step noise there is amplified by ~1e6, which
is why the state is carried in longdouble and the step endpoints are
forced onto a uniform output grid (the stored nodes plus derivatives then
give cubic Hermite dense evaluation with ~h_out^4 interpolation error).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StepFailure

_LD = np.longdouble

_A = (
    (),
    (_LD(1) / 5,),
    (_LD(3) / 40, _LD(9) / 40),
    (_LD(3) / 10, _LD(-9) / 10, _LD(6) / 5),
    (_LD(-11) / 54, _LD(5) / 2, _LD(-70) / 27, _LD(35) / 27),
    (
        _LD(1631) / 55296,
        _LD(175) / 512,
        _LD(575) / 13824,
        _LD(44275) / 110592,
        _LD(253) / 4096,
    ),
)
_C = (_LD(0), _LD(1) / 5, _LD(3) / 10, _LD(3) / 5, _LD(1), _LD(7) / 8)
_B5 = (
    _LD(37) / 378,
    _LD(0),
    _LD(250) / 621,
    _LD(125) / 594,
    _LD(0),
    _LD(512) / 1771,
)
_B4 = (
    _LD(2825) / 27648,
    _LD(0),
    _LD(18575) / 48384,
    _LD(13525) / 55296,
    _LD(277) / 14336,
    _LD(1) / 4,
)


@dataclass
class RkSolution:
    """Dense solution on forced output nodes (values + derivatives)."""

    t: np.ndarray           # output nodes, in integration order
    y: np.ndarray           # shape (dim, len(t)), float64
    yp: np.ndarray          # RHS at nodes, float64
    scale_log: np.ndarray   # accumulated log of removed scale per node
    events: list = field(default_factory=list)

    def hermite(self):
        return HermiteTable(self.t, self.y, self.yp)


class HermiteTable:
    """Piecewise-cubic Hermite evaluation from (t, y, y') node data."""

    def __init__(self, t: np.ndarray, y: np.ndarray, yp: np.ndarray):
        order = np.argsort(t)
        self.t = np.asarray(t, dtype=np.float64)[order]
        self.y = np.asarray(y, dtype=np.float64)[:, order]
        self.yp = np.asarray(yp, dtype=np.float64)[:, order]

    def __call__(self, tq, component=None):
        tq = np.asarray(tq, dtype=np.float64)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        i = np.clip(np.searchsorted(self.t, tq) - 1, 0, len(self.t) - 2)
        h = self.t[i + 1] - self.t[i]
        s = (tq - self.t[i]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        rows = list(range(self.y.shape[0])) if component is None else [component]
        out = np.empty((len(rows), len(tq)))
        for j, r in enumerate(rows):
            out[j] = (
                h00 * self.y[r, i]
                + h10 * h * self.yp[r, i]
                + h01 * self.y[r, i + 1]
                + h11 * h * self.yp[r, i + 1]
            )
        if component is not None:
            return float(out[0, 0]) if scalar else out[0]
        return out[:, 0] if scalar else out


def solve_rk(
    f,
    t0: float,
    t1: float,
    y0,
    *,
    rtol: float = 1e-14,
    atol: float = 1e-20,
    h_out: float = 0.002,
    h0: float = 1e-3,
    dtype=np.longdouble,
    rescale_threshold: float | None = None,
    rescale_channels: slice | None = None,
    max_steps: int = 20_000_000,
) -> RkSolution:
    """Integrate y' = f(t, y) from t0 to t1 with forced output every h_out.

    When rescale_threshold is set, the designated channels are divided by
    their max magnitude once it exceeds the threshold and the removed log
    scale is accumulated separately (for linear systems whose observables
    are scale-invariant ratios).
    """
    direction = 1.0 if t1 > t0 else -1.0
    n_out = max(1, int(round(abs(t1 - t0) / h_out)))
    nodes = t0 + direction * (abs(t1 - t0) / n_out) * np.arange(n_out + 1)
    nodes[-1] = t1

    y = np.array(y0, dtype=dtype)
    chan = rescale_channels if rescale_channels is not None else slice(None)
    log_scale = 0.0
    t = dtype(t0)
    out_y = [np.asarray(y, dtype=np.float64).copy()]
    out_yp = [np.asarray(f(float(t), y), dtype=np.float64).copy()]
    out_scale = [0.0]

    h = dtype(direction * min(abs(h0), abs(nodes[1] - nodes[0])))
    steps = 0
    for node in nodes[1:]:
        while direction * (node - float(t)) > 1e-13 * max(1.0, abs(node)):
            steps += 1
            if steps > max_steps:
                raise StepFailure("solve_rk: step budget exhausted")
            h = dtype(direction) * min(abs(h), abs(node - float(t)))
            if abs(h) < 1e-14 * max(1.0, abs(float(t))):
                raise StepFailure(f"solve_rk: step underflow near t={float(t)}")
            with np.errstate(invalid="ignore", over="ignore"):
                k = [np.asarray(f(float(t), y), dtype=dtype)]
                for i in range(1, 6):
                    yi = y + h * sum(_A[i][j] * k[j] for j in range(i))
                    k.append(np.asarray(f(float(t + _C[i] * h), yi), dtype=dtype))
                y5 = y + h * sum(_B5[i] * k[i] for i in range(6))
                y4 = y + h * sum(_B4[i] * k[i] for i in range(6))
                sc = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
                diff = np.asarray((y5 - y4) / sc, dtype=np.float64)
                err = float(np.sqrt(np.mean(diff * diff)))
            if not np.isfinite(err):
                err = np.inf
            if err <= 1.0:
                t = t + h
                y = y5
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.2))
            else:
                fac = max(0.2, 0.9 * err**-0.2)
            h = h * dtype(fac)
            if rescale_threshold is not None:
                m = float(np.max(np.abs(np.asarray(y[chan], dtype=np.float64))))
                if m > rescale_threshold:
                    y[chan] = y[chan] / dtype(m)
                    log_scale += np.log(m)
        t = dtype(node)
        out_y.append(np.asarray(y, dtype=np.float64).copy())
        out_yp.append(np.asarray(f(float(t), y), dtype=np.float64).copy())
        out_scale.append(log_scale)

    return RkSolution(
        t=np.asarray(nodes, dtype=np.float64),
        y=np.array(out_y).T,
        yp=np.array(out_yp).T,
        scale_log=np.array(out_scale),
    )
