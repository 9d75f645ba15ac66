"""Slope fans of a dual implicit web and the eta forms of its 3-subwebs."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..polycore import MPoly, dense_coefficients
from ..roots import find_roots, polish_mp
from ..webleg import PQX, ImplicitWeb
from .kernels import _jdiv, _jmul, coeff_jets, slope_derivatives

CLUSTER_TOL = 1e-6
ROOT_TOL = 1e-12
DROP_TOL = 1e-8


class SlopeSignal(Exception):
    """Non-fatal refusal to build a fan: ``kind`` is "resample" or "near-discriminant"."""

    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind


@dataclass
class NumericWeb:
    """Dense coefficient arrays of each x-factor of a dual web, in (p, q, x) order."""

    factors: list  # MPoly in PQX
    arrays: list  # complex ndarray [i_p, i_q, i_x]
    sources: list

    @property
    def k(self) -> int:
        return sum(a.shape[2] - 1 for a in self.arrays)

    def factor_of_slope(self) -> list[int]:
        out = []
        for n, a in enumerate(self.arrays):
            out += [n] * (a.shape[2] - 1)
        return out


def numeric_web(W) -> NumericWeb:
    if isinstance(W, NumericWeb):
        return W
    if isinstance(W, MPoly):
        W = ImplicitWeb(W.with_variables(PQX), [W.with_variables(PQX)], PQX, "x", "dual: dq/dp = -x")
    facs = [f.with_variables(PQX) for f in W.factors]
    facs = [f for f in facs if f.degree("x") > 0]
    srcs = list(W.sources) if W.sources else [str(f) for f in facs]
    return NumericWeb(facs, [dense_coefficients(f, PQX) for f in facs], srcs)


@dataclass
class SlopeFan:
    base_point: tuple  # (p, q)
    slopes: np.ndarray  # m_i = dq/dp = -x_i
    first_partials: np.ndarray  # (k, 2): m_p, m_q
    second_partials: np.ndarray  # (k, 3): m_pp, m_pq, m_qq
    residuals: np.ndarray
    factor_index: list = field(default_factory=list)
    min_separation: float = np.inf  # relative
    root_condition: float = 1.0
    precision: int = 53
    mp_rows: list | None = None  # the same rows as mpmath numbers when precision > 53

    @property
    def k(self) -> int:
        return len(self.slopes)

    @property
    def rows(self) -> np.ndarray:
        return np.vstack([self.slopes, self.first_partials.T, self.second_partials.T])

    def subfan(self, idx) -> "SlopeFan":
        idx = list(idx)
        mp_rows = None if self.mp_rows is None else [[r[i] for i in idx] for r in self.mp_rows]
        return SlopeFan(self.base_point, self.slopes[idx], self.first_partials[idx], self.second_partials[idx],
                        self.residuals[idx], [self.factor_index[i] for i in idx] if self.factor_index else [],
                        self.min_separation, self.root_condition, self.precision, mp_rows)

    def with_rows(self, rows: np.ndarray) -> "SlopeFan":
        return SlopeFan(self.base_point, rows[0].copy(), rows[1:3].T.copy(), rows[3:6].T.copy(), self.residuals,
                        list(self.factor_index), self.min_separation, self.root_condition, self.precision, None)


def _separation(z: np.ndarray) -> float:
    best = np.inf
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            den = max(abs(z[i]) + abs(z[j]), 1.0)
            best = min(best, abs(z[i] - z[j]) / den)
    return float(best)


def slopes_at(W, P, rng: np.random.Generator | None = None, cluster_tol: float = CLUSTER_TOL,
              root_tol: float = ROOT_TOL, precision: int = 53) -> SlopeFan:
    """All slopes m = -x of the dual web at P = (p, q) with their partials up to order two.

    Raises SlopeSignal("resample") on a degree drop and
    SlopeSignal("near-discriminant") on clustered slopes or uncertified roots.
    """
    Wn = numeric_web(W)
    coords = P.coordinates if hasattr(P, "coordinates") else P
    p, q = complex(coords[0]), complex(coords[1])
    if rng is None:
        rng = np.random.default_rng(0)
    rows, resid, fidx, conds = [], [], [], []
    for n, C in enumerate(Wn.arrays):
        J = coeff_jets(C, p, q)
        c = J[0]
        if abs(c[-1]) <= DROP_TOL * np.max(np.abs(c)):
            raise SlopeSignal("resample", f"leading x-coefficient of factor {n} vanishes")
        rs = find_roots(c, rng)
        x = rs.roots
        # root-sum identity, a cheap guard against a lost root
        deg = len(c) - 1
        if abs(x.sum() + c[-2] / c[-1]) > 1e-8 * max(1.0, np.sum(np.abs(x))):
            raise SlopeSignal("near-discriminant", "root-sum identity failed")
        r, G_x = slope_derivatives(J, x)
        mag = np.polyval(np.abs(c[::-1]), np.abs(x))
        conds.append(np.max(mag / np.maximum(np.abs(G_x) * np.maximum(np.abs(x), 1.0), 1e-300)))
        rows.append(np.vstack(r))
        resid.append(rs.residuals)
        fidx += [n] * deg
    rows = np.hstack(rows) if rows else np.zeros((6, 0), dtype=complex)
    resid = np.concatenate(resid) if resid else np.zeros(0)
    if np.any(resid > root_tol):
        raise SlopeSignal("near-discriminant", f"root residual {float(resid.max()):.2e}")
    sep = _separation(rows[0])
    if sep < cluster_tol:
        raise SlopeSignal("near-discriminant", f"slope separation {sep:.2e}")
    fan = SlopeFan((p, q), rows[0], rows[1:3].T.copy(), rows[3:6].T.copy(), resid, fidx, sep,
                   float(max(conds, default=1.0)))
    if precision > 53:
        fan.mp_rows = mp_rows(Wn, fan, precision)
        fan.precision = precision
    return fan


def mp_rows(Wn: NumericWeb, fan: SlopeFan, bits: int):
    """Slope rows of ``fan`` at ``bits`` precision, roots polished from the double values."""
    p, q = fan.base_point
    idx = np.asarray(fan.factor_index)
    roots_all = [-fan.slopes[idx == n] for n in range(len(Wn.arrays))]
    return _mp_rows(Wn, p, q, roots_all, bits)


def _mp_rows(Wn: NumericWeb, p, q, roots_all, bits: int):
    """Slope rows recomputed at ``bits`` precision from the exact coefficients."""
    with mpmath.workprec(bits):
        P = mpmath.mpc(p)
        Q = mpmath.mpc(q)
        cols = [[] for _ in range(6)]
        for f, x0 in zip(Wn.factors, roots_all):
            n = f.degree("x") + 1
            J = [[mpmath.mpc(0)] * n for _ in range(6)]
            for e, cf in f.terms.items():
                i, j, k = e
                c = cf.to_mp()
                pi = [P**i, i * P ** (i - 1) if i >= 1 else 0, i * (i - 1) * P ** (i - 2) if i >= 2 else 0]
                qj = [Q**j, j * Q ** (j - 1) if j >= 1 else 0, j * (j - 1) * Q ** (j - 2) if j >= 2 else 0]
                for row, (a, b) in enumerate(((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))):
                    J[row][k] += c * pi[a] * qj[b]
            for x in x0:
                xm = polish_mp(J[0], complex(x), bits=bits)
                r, _ = slope_derivatives(J, xm)
                for row in range(6):
                    cols[row].append(r[row])
        return cols


# ---------------------------------------------------------------------------
# eta forms


@dataclass
class EtaForm:
    triple: tuple
    A: complex
    B: complex
    consistency_residual: float  # relative to the magnitudes in the third equation


def _rhs(fan_rows, t, r, s):
    m = fan_rows
    d = (m[0][s] - m[0][r], m[1][s] - m[1][r], m[2][s] - m[2][r])
    dp = (m[1][s] - m[1][r], m[3][s] - m[3][r], m[4][s] - m[4][r])
    dq = (m[2][s] - m[2][r], m[4][s] - m[4][r], m[5][s] - m[5][r])
    u = _jmul(m[0][t], m[1][t], m[2][t], *dq)
    v = _jdiv(dp[0] + u[0], dp[1] + u[1], dp[2] + u[2], *d)
    return v[0] + m[2][t], v[1] + m[4][t], v[2] + m[5][t]


def eta_jets(fan: SlopeFan, triple):
    """Jets (value, d/dp, d/dq) of A and B for one triple, plus the relative residual."""
    i, j, k = triple
    rows = fan.rows
    if min(abs(rows[0][i] - rows[0][j]), abs(rows[0][j] - rows[0][k]), abs(rows[0][i] - rows[0][k])) == 0:
        raise SlopeSignal("near-discriminant", "coincident slopes in triple")
    Ri = _rhs(rows, i, j, k)
    Rj = _rhs(rows, j, k, i)
    Rk = _rhs(rows, k, i, j)
    mi = (rows[0][i], rows[1][i], rows[2][i])
    mj = (rows[0][j], rows[1][j], rows[2][j])
    B = _jdiv(Ri[0] - Rj[0], Ri[1] - Rj[1], Ri[2] - Rj[2], mi[0] - mj[0], mi[1] - mj[1], mi[2] - mj[2])
    w = _jmul(*B, *mi)
    A = (Ri[0] - w[0], Ri[1] - w[1], Ri[2] - w[2])
    res = abs(A[0] + B[0] * rows[0][k] - Rk[0])
    den = abs(A[0]) + abs(B[0] * rows[0][k]) + abs(Rk[0])
    return A, B, (res / den if den else 0.0)


def eta_for_triple(fan: SlopeFan, triple) -> EtaForm:
    """eta = A dp + B dq of the 3-subweb ``triple`` at the fan's base point."""
    triple = tuple(int(t) for t in triple)
    if len(set(triple)) != 3:
        raise ValueError("a triple needs three distinct indices")
    A, B, res = eta_jets(fan, triple)
    return EtaForm(triple, complex(A[0]), complex(B[0]), float(res))
