"""Numeric consistency checks: homothety scaling and the product expansion of K."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from ..webleg import WebError, WebSpec, legendre
from .evaluate import curvature_at
from .kernels import web_curvature
from .slopes import SlopeSignal, numeric_web, slopes_at


class PreconditionError(ValueError):
    pass


def _ab_to_pq(a: complex, b: complex):
    # the line a x + b y = 1 is y = -(a/b) x + 1/b
    return -a / b, 1 / b


def kappa_ab(L, a: complex, b: complex, rng=None):
    """Curvature coefficient in the chart of lines {a x + b y = 1}, with its scale.

    dp ^ dq = b^-3 da ^ db, so kappa_ab = kappa_pq / b^3.
    """
    if abs(b) < 1e-8:
        raise SlopeSignal("resample", "b = 0 is outside the (p, q) chart")
    p, q = _ab_to_pq(a, b)
    s = curvature_at(L, (p, q), rng, fd_check=False)
    if not s.reliable:
        raise SlopeSignal(s.status, "curvature evaluation failed")
    return s.K / b**3, s.scale / abs(b) ** 3


def homothety_scaling_check(W: WebSpec, P, lam: complex, L=None, seed: int = 0) -> float:
    """|lam^2 kappa(a, b) - kappa(a/lam, b/lam)| / scale at P = (a, b).

    Needs homogeneous foliations and lines through the origin (or at infinity),
    the setting where the dual web is invariant under the dual homotheties.
    """
    for F in W.foliations:
        if not F.is_homogeneous():
            raise PreconditionError(f"{F.label()} is not homogeneous")
    for ln in W.lines:
        if ln.gamma != 0 and not ln.is_infinity():
            raise PreconditionError(f"line {ln} does not pass through the origin")
    if L is None:
        L = legendre(W, seed)
    if L.transform is not None:
        raise PreconditionError("the dual web needed a change of chart")
    Wn = numeric_web(L)
    coords = P.coordinates if hasattr(P, "coordinates") else P
    a, b = complex(coords[0]), complex(coords[1])
    lam = complex(lam)
    k1, s1 = kappa_ab(Wn, a, b, np.random.default_rng(seed))
    k2, s2 = kappa_ab(Wn, a / lam, b / lam, np.random.default_rng(seed))
    scale = max(abs(lam) ** 2 * s1, s2)
    if scale == 0:
        return float(abs(lam**2 * k1 - k2))
    return float(abs(lam**2 * k1 - k2) / scale)


@dataclass
class ExpansionResult:
    residual: float
    lhs: complex
    rhs: complex
    scale: float
    reliable: bool = True


def _K(rows) -> complex:
    if rows.shape[1] < 3:
        return 0j  # fewer than three directions carry no curvature
    return web_curvature(rows)[0]


def curvature_expansion_check(parts, P, seed: int = 0, perturb: float = 0.0) -> ExpansionResult:
    """Both sides of the product expansion of K for W' = l_1 ... l_k and W''.

    K(W' W'') = K(W') - (k - 2) sum_i K(l_i W'') + sum_{i<j} K(l_i l_j W'')
                + C(k - 1, 2) K(W'')

    Sub-web curvatures are evaluated on the corresponding slopes of the full
    fan.  ``perturb`` shifts the first slope in the left-hand side only and
    serves as a negative control.
    """
    if len(parts) != 2:
        raise PreconditionError("expected [W', W''] with W' made of lines")
    Wl, Wr = parts
    if Wl.foliations:
        raise PreconditionError("W' must consist of lines")
    k = len(Wl.lines)
    full = Wl * Wr
    try:
        L = legendre(full, seed)
    except WebError as e:
        raise PreconditionError(str(e)) from e
    Wn = numeric_web(L)
    rng = np.random.default_rng(seed)
    coords = P.coordinates if hasattr(P, "coordinates") else P
    try:
        fan = slopes_at(Wn, (complex(coords[0]), complex(coords[1])), rng)
    except SlopeSignal:
        return ExpansionResult(float("nan"), complex("nan"), complex("nan"), float("nan"), False)
    rows = fan.rows
    fidx = np.asarray(fan.factor_index)
    line_cols = [np.nonzero(fidx == i)[0] for i in range(k)]
    rest = np.nonzero(fidx >= k)[0]

    def sub(cols):
        return rows[:, np.sort(np.concatenate([np.asarray(c, dtype=int) for c in cols]))] if cols else rows[:, :0]

    lhs_rows = rows.copy()
    if perturb:
        lhs_rows[0, 0] += perturb
    lhs = _K(lhs_rows)
    rhs = _K(sub(line_cols))
    rhs -= (k - 2) * sum(_K(sub([line_cols[i], rest])) for i in range(k))
    rhs += sum(_K(sub([line_cols[i], line_cols[j], rest])) for i, j in combinations(range(k), 2))
    rhs += comb(k - 1, 2) * _K(sub([rest]))
    _, _, _, _, per_scale, _ = web_curvature(rows)
    scale = float(np.median(per_scale)) if len(per_scale) else 0.0
    res = abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs)
    return ExpansionResult(float(res), complex(lhs), complex(rhs), scale, True)


def slope_partials_convergence(W, P, h: float = 1e-2, seed: int = 0) -> dict:
    """Discrepancy between implicit partials and central differences at h and h/2.

    First partials are differenced from slopes, second partials from the
    implicit first partials.  Returns the discrepancies and their ratios
    (about 4 for second-order convergence).  A partial whose difference
    quotient is already exact to rounding has no ratio to measure and counts
    as converged.
    """
    Wn = numeric_web(W)
    rng = np.random.default_rng(seed)
    coords = P.coordinates if hasattr(P, "coordinates") else P
    p, q = complex(coords[0]), complex(coords[1])
    base = slopes_at(Wn, (p, q), rng).rows

    def rows_at(dp, dq):
        r = slopes_at(Wn, (p + dp, q + dq), rng, cluster_tol=0.0).rows
        order = [int(np.argmin(np.abs(r[0] - m))) for m in base[0]]
        return r[:, order]

    errs = []
    for step in (h, h / 2):
        rp, rm = rows_at(step, 0), rows_at(-step, 0)
        sp, sm = rows_at(0, step), rows_at(0, -step)
        fd = {
            "m_p": (rp[0] - rm[0]) / (2 * step),
            "m_q": (sp[0] - sm[0]) / (2 * step),
            "m_pp": (rp[1] - rm[1]) / (2 * step),
            "m_pq": (sp[1] - sm[1]) / (2 * step),
            "m_qq": (sp[2] - sm[2]) / (2 * step),
        }
        an = {"m_p": base[1], "m_q": base[2], "m_pp": base[3], "m_pq": base[4], "m_qq": base[5]}
        errs.append({k: float(np.max(np.abs(fd[k] - an[k]))) for k in fd})
    ratios = {k: errs[0][k] / errs[1][k] if errs[1][k] > 0 else float("inf") for k in errs[0]}
    size = {k: 1.0 + float(np.max(np.abs(v))) for k, v in an.items()}
    converged = {k: ratios[k] >= 3.5 or errs[1][k] <= 1e-9 * size[k] for k in ratios}
    return {"h": h, "errors": errs, "ratios": ratios, "converged": converged, "all_converged": all(converged.values())}
