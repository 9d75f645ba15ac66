"""Hot numeric kernels: coefficient jets, implicit slope derivatives and the
per-triple Blaschke curvature.

Slopes are carried as 6-rows (m, m_p, m_q, m_pp, m_pq, m_qq).  For a triple
(i, j, k) the 1-form eta = A dp + B dq solves, for each t with (r, s) the
other two indices,

    A + B m_t = (delta_p + m_t delta_q) / delta + m_{t,q},   delta = m_s - m_r,

and the curvature coefficient is dB/dp - dA/dq.  Derivatives of A and B are
propagated as first-order jets (value, d/dp, d/dq).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .._accel import njit, pick

# ---------------------------------------------------------------------------
# coefficient jets and slope derivatives


def coeff_jets(C: np.ndarray, p: complex, q: complex) -> np.ndarray:
    """Rows c, c_p, c_q, c_pp, c_pq, c_qq of the x-coefficients at (p, q).

    ``C[i, j, k]`` is the coefficient of p^i q^j x^k.
    """
    ni, nj = C.shape[0], C.shape[1]
    i = np.arange(ni)
    j = np.arange(nj)
    P0 = p ** i
    P1 = np.where(i >= 1, i * p ** np.maximum(i - 1, 0), 0)
    P2 = np.where(i >= 2, i * (i - 1) * p ** np.maximum(i - 2, 0), 0)
    Q0 = q ** j
    Q1 = np.where(j >= 1, j * q ** np.maximum(j - 1, 0), 0)
    Q2 = np.where(j >= 2, j * (j - 1) * q ** np.maximum(j - 2, 0), 0)
    out = np.empty((6, C.shape[2]), dtype=np.complex128)
    for row, (a, b) in enumerate(((P0, Q0), (P1, Q0), (P0, Q1), (P2, Q0), (P1, Q1), (P0, Q2))):
        out[row] = np.einsum("ijk,i,j->k", C, a, b)
    return out


def slope_derivatives(J, x):
    """m = -x and its partials up to order two at roots ``x`` of the factor.

    Works elementwise for numpy arrays and for mpmath scalars (J a nested list).
    Returns (rows, G_x) with rows shaped like (6, len(x)).
    """
    n = len(J[0])
    ks = range(n)
    G_x = sum(k * J[0][k] * x ** (k - 1) for k in ks if k >= 1)
    G_xx = sum(k * (k - 1) * J[0][k] * x ** (k - 2) for k in ks if k >= 2)
    G_p = sum(J[1][k] * x**k for k in ks)
    G_q = sum(J[2][k] * x**k for k in ks)
    G_px = sum(k * J[1][k] * x ** (k - 1) for k in ks if k >= 1)
    G_qx = sum(k * J[2][k] * x ** (k - 1) for k in ks if k >= 1)
    G_pp = sum(J[3][k] * x**k for k in ks)
    G_pq = sum(J[4][k] * x**k for k in ks)
    G_qq = sum(J[5][k] * x**k for k in ks)
    if isinstance(G_xx, int):
        G_xx = 0 * G_x
    x_p = -G_p / G_x
    x_q = -G_q / G_x
    x_pp = -(G_pp + 2 * G_px * x_p + G_xx * x_p * x_p) / G_x
    x_pq = -(G_pq + G_px * x_q + G_qx * x_p + G_xx * x_p * x_q) / G_x
    x_qq = -(G_qq + 2 * G_qx * x_q + G_xx * x_q * x_q) / G_x
    return (-x, -x_p, -x_q, -x_pp, -x_pq, -x_qq), G_x


# ---------------------------------------------------------------------------
# triple curvature, scalar-loop form (numba and mpmath)


def _make_triple_kernel(jmul, jdiv):
    def kernel(m, mp, mq, mpp, mpq, mqq, tri, out_K, out_scale):
        # tri: (ntri, 3) index array; returns (K, A_sum, B_sum, max relative residual)
        Ks = 0 * m[0]
        As = 0 * m[0]
        Bs = 0 * m[0]
        worst = 0.0
        for t in range(len(tri)):
            idx = (tri[t][0], tri[t][1], tri[t][2])
            R0 = [0 * m[0], 0 * m[0], 0 * m[0]]
            R1 = [0 * m[0], 0 * m[0], 0 * m[0]]
            R2 = [0 * m[0], 0 * m[0], 0 * m[0]]
            for pos in range(3):
                a = idx[pos]
                r = idx[(pos + 1) % 3]
                s = idx[(pos + 2) % 3]
                d0 = m[s] - m[r]
                d1 = mp[s] - mp[r]
                d2 = mq[s] - mq[r]
                dp0 = mp[s] - mp[r]
                dp1 = mpp[s] - mpp[r]
                dp2 = mpq[s] - mpq[r]
                dq0 = mq[s] - mq[r]
                dq1 = mpq[s] - mpq[r]
                dq2 = mqq[s] - mqq[r]
                # numerator jet: delta_p + m_t * delta_q
                u0, u1, u2 = jmul(m[a], mp[a], mq[a], dq0, dq1, dq2)
                n0 = dp0 + u0
                n1 = dp1 + u1
                n2 = dp2 + u2
                v0, v1, v2 = jdiv(n0, n1, n2, d0, d1, d2)
                R0[pos] = v0 + mq[a]
                R1[pos] = v1 + mpq[a]
                R2[pos] = v2 + mqq[a]
            i, j, k = idx
            # B = (R_i - R_j) / (m_i - m_j), A = R_i - B m_i
            B0, B1, B2 = jdiv(R0[0] - R0[1], R1[0] - R1[1], R2[0] - R2[1], m[i] - m[j], mp[i] - mp[j], mq[i] - mq[j])
            w0, w1, w2 = jmul(B0, B1, B2, m[i], mp[i], mq[i])
            A0 = R0[0] - w0
            A1 = R1[0] - w1
            A2 = R2[0] - w2
            K = B1 - A2
            out_K[t] = K
            out_scale[t] = abs(B1) + abs(A2)
            res = abs(A0 + B0 * m[k] - R0[2])
            den = abs(A0) + abs(B0 * m[k]) + abs(R0[2])
            if den > 0:
                rel = res / den
                if rel > worst:
                    worst = rel
            Ks += K
            As += A0
            Bs += B0
        return Ks, As, Bs, worst

    return kernel


def _jmul(a0, a1, a2, b0, b1, b2):
    return a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a2 * b0


def _jdiv(a0, a1, a2, b0, b1, b2):
    c0 = a0 / b0
    return c0, (a1 - c0 * b1) / b0, (a2 - c0 * b2) / b0


triple_kernel_py = _make_triple_kernel(_jmul, _jdiv)
_triple_kernel_nb = None


def _get_nb_kernel():
    global _triple_kernel_nb
    if _triple_kernel_nb is None:
        jm = njit(_jmul)
        jd = njit(_jdiv)
        _triple_kernel_nb = njit(_make_triple_kernel(jm, jd))
    return _triple_kernel_nb


# ---------------------------------------------------------------------------
# triple curvature, vectorized numpy form


def _triples_numpy(m, mp, mq, mpp, mpq, mqq, tri, out_K, out_scale):
    I, J, Kk = tri[:, 0], tri[:, 1], tri[:, 2]
    rows = np.stack([m, mp, mq, mpp, mpq, mqq])

    def jet(idx):  # slope jet (m, m_p, m_q)
        return rows[0][idx], rows[1][idx], rows[2][idx]

    def jet_p(idx):  # jet of m_p
        return rows[1][idx], rows[3][idx], rows[4][idx]

    def jet_q(idx):  # jet of m_q
        return rows[2][idx], rows[4][idx], rows[5][idx]

    R = []
    for a, r, s in ((I, J, Kk), (J, Kk, I), (Kk, I, J)):
        d = [x - y for x, y in zip(jet(s), jet(r))]
        dp = [x - y for x, y in zip(jet_p(s), jet_p(r))]
        dq = [x - y for x, y in zip(jet_q(s), jet_q(r))]
        u = _jmul(*jet(a), *dq)
        num = [x + y for x, y in zip(dp, u)]
        v = _jdiv(*num, *d)
        R.append([x + y for x, y in zip(v, jet_q(a))])
    mi, mj = jet(I), jet(J)
    B = _jdiv(*[x - y for x, y in zip(R[0], R[1])], *[x - y for x, y in zip(mi, mj)])
    w = _jmul(*B, *mi)
    A = [x - y for x, y in zip(R[0], w)]
    K = B[1] - A[2]
    out_K[:] = K
    out_scale[:] = np.abs(B[1]) + np.abs(A[2])
    res = np.abs(A[0] + B[0] * rows[0][Kk] - R[2][0])
    den = np.abs(A[0]) + np.abs(B[0] * rows[0][Kk]) + np.abs(R[2][0])
    rel = np.where(den > 0, res / np.where(den > 0, den, 1.0), 0.0)
    return K.sum(), A[0].sum(), B[0].sum(), float(rel.max()) if len(rel) else 0.0


_TRI_CACHE: dict[int, np.ndarray] = {}


def triples(k: int) -> np.ndarray:
    t = _TRI_CACHE.get(k)
    if t is None:
        t = np.array(list(combinations(range(k), 3)), dtype=np.int64).reshape(-1, 3)
        _TRI_CACHE[k] = t
    return t


def web_curvature(rows: np.ndarray):
    """Sum over all 3-subsets of the slope fan ``rows`` (6, k).

    Returns (K, A_sum, B_sum, per-triple K, per-triple scale, max residual).
    """
    k = rows.shape[1]
    tri = triples(k)
    out_K = np.zeros(len(tri), dtype=np.complex128)
    out_scale = np.zeros(len(tri))
    if len(tri) == 0:
        return 0j, 0j, 0j, out_K, out_scale, 0.0
    kern = pick(_get_nb_kernel() if _numba_ok() else None, _triples_numpy)
    if kern is None:
        kern = _triples_numpy
    r = np.ascontiguousarray(rows, dtype=np.complex128)
    Ks, As, Bs, worst = kern(r[0], r[1], r[2], r[3], r[4], r[5], tri, out_K, out_scale)
    return complex(Ks), complex(As), complex(Bs), out_K, out_scale, float(worst)


def web_curvature_mp(rows) -> tuple:
    """Same as web_curvature for rows of mpmath numbers (extended precision)."""
    k = len(rows[0])
    tri = [tuple(int(v) for v in t) for t in triples(k)]
    out_K = [None] * len(tri)
    out_scale = [None] * len(tri)
    if not tri:
        return 0, 0, 0, out_K, out_scale, 0.0
    Ks, As, Bs, worst = triple_kernel_py(*rows, tri, out_K, out_scale)
    return Ks, As, Bs, out_K, out_scale, float(worst)


def _numba_ok() -> bool:
    from .._accel import numba_enabled

    return numba_enabled()
