"""Curvature of a dual implicit web at a point, with a finite-difference cross-check."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .kernels import web_curvature, web_curvature_mp
from .slopes import CLUSTER_TOL, SlopeFan, SlopeSignal, mp_rows, numeric_web, slopes_at

FD_TOL = 1e-6
UNIT = 2.0**-53


@dataclass
class CurvatureSample:
    point: tuple  # (p, q)
    K: complex
    scale: float  # median over triples of |dB/dp| + |dA/dq|
    condition: dict = field(default_factory=dict)
    reliable: bool = True
    K_fd: complex | None = None
    precision: int = 53
    status: str = "ok"  # ok | unreliable | resample | near-discriminant
    per_triple: np.ndarray | None = None

    @property
    def relative(self) -> float:
        if self.scale > 0:
            return abs(self.K) / self.scale
        return 0.0 if self.K == 0 else np.inf

    def to_json(self) -> dict:
        return {
            "p": _cnum(self.point[0]),
            "q": _cnum(self.point[1]),
            "K_re": float(np.real(self.K)),
            "K_im": float(np.imag(self.K)),
            "scale": float(self.scale),
            "reliable": bool(self.reliable),
        }


def _cnum(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _eta_sum(Wn, p, q, rng):
    fan = slopes_at(Wn, (p, q), rng, cluster_tol=0.0)
    _, As, Bs, _, _, _ = web_curvature(fan.rows)
    return As, Bs


def _richardson(Wn, p, q, h, rng):
    """dB/dp - dA/dq of the summed eta by Richardson-extrapolated central differences.

    The sum over all triples is symmetric in the slopes, so roots at nearby
    points need no matching.
    """

    def d(fn, h):
        return (fn(h) - fn(-h)) / (2 * h)

    def along_p(t):
        return _eta_sum(Wn, p + t, q, rng)[1]

    def along_q(t):
        return _eta_sum(Wn, p, q + t, rng)[0]

    Bp = (4 * d(along_p, h / 2) - d(along_p, h)) / 3
    Aq = (4 * d(along_q, h / 2) - d(along_q, h)) / 3
    return Bp - Aq


def error_estimate(fan: SlopeFan, per_scale, bits: int) -> float:
    """Heuristic forward-error bound for K at ``bits`` precision.

    Each triple divides by slope differences up to three times and the slopes
    inherit the root condition number, so errors are amplified roughly by
    cond^3 with cond = max(root condition, 1 / separation).
    """
    cond = max(fan.root_condition, 1.0 / max(fan.min_separation, 1e-300))
    u = 2.0 ** (-bits)
    return 1e2 * u * cond**3 * float(np.sum(per_scale))


def curvature_at(W, P, rng: np.random.Generator | None = None, fd_check: bool = True, precision: int = 53,
                 fd_tol: float = FD_TOL, flat_tol: float = 1e-8, cluster_tol: float = CLUSTER_TOL, fan: SlopeFan | None = None) -> CurvatureSample:
    """K = sum over 3-subsets of dB/dp - dA/dq at P = (p, q).

    Non-fatal failures come back as samples with ``reliable=False`` and a
    status naming the reason; the condition data is recorded either way.
    """
    Wn = numeric_web(W)
    coords = P.coordinates if hasattr(P, "coordinates") else P
    p, q = complex(coords[0]), complex(coords[1])
    if rng is None:
        rng = np.random.default_rng(0)
    try:
        if fan is None:
            fan = slopes_at(Wn, (p, q), rng, cluster_tol=cluster_tol, precision=precision)
    except SlopeSignal as e:
        return CurvatureSample((p, q), complex("nan"), float("nan"), {"reason": str(e)}, False, None, precision, e.kind)
    if fan.k < 3:
        return CurvatureSample((p, q), 0j, 0.0, {"k": fan.k, "separation": fan.min_separation}, True, 0j, precision)
    K, _, _, per_K, per_scale, worst = web_curvature(fan.rows)
    scale = float(np.median(per_scale))
    cond = {
        "separation": float(fan.min_separation),
        "root_condition": float(fan.root_condition),
        "eta_residual": float(worst),
        "error_estimate": error_estimate(fan, per_scale, 53),
    }
    sample = CurvatureSample((p, q), K, scale, cond, True, None, 53, "ok", per_K)
    if precision > 53 and fan.mp_rows is not None:
        # extended path: the error is measured by repeating at 32 more bits
        with mpmath.workprec(precision):
            Km, _, _, _, per_s, worst_m = web_curvature_mp(fan.mp_rows)
        with mpmath.workprec(precision + 32):
            Kx = web_curvature_mp(mp_rows(Wn, fan, precision + 32))[0]
        sample.K = complex(Km)
        sample.scale = float(np.median([float(s) for s in per_s]))
        sample.precision = precision
        err = float(abs(Kx - Km))
        cond["eta_residual"] = float(worst_m)
        cond["precision_discrepancy"] = err
        floor = 1e-3 * max(abs(sample.K), flat_tol * sample.scale)
        sample.reliable = err <= floor
        if not sample.reliable:
            sample.status = "unreliable"
        return sample
    if worst > 1e-9:
        sample.reliable = False
        sample.status = "unreliable"
    if fd_check:
        # rounding in the eta sum dominates truncation for small steps, so the
        # step shrinks only with the square root of the slope separation
        # step.  Poles of the slopes where a leading coefficient vanishes are
        # not seen by the separation, so a quarter step is tried on mismatch.
        h = 0.05 * min(1.0, max(fan.min_separation, 1e-8)) ** 0.5 * max(1.0, abs(p), abs(q))
        tol_abs = fd_tol * max(scale, float(np.sum(per_scale)) / len(per_scale))
        best = (float("inf"), complex("nan"))
        for step in (h, h / 4):
            try:
                Kfd = _richardson(Wn, p, q, step, rng)
            except SlopeSignal:
                continue
            if abs(Kfd - K) < best[0]:
                best = (float(abs(Kfd - K)), Kfd)
            if best[0] <= tol_abs:
                break
        sample.K_fd = best[1]
        if not best[0] <= tol_abs:
            sample.reliable = False
            sample.status = "unreliable"
        cond["fd_discrepancy"] = best[0]
    return sample
