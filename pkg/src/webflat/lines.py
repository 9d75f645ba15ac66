"""Lines, projective points and maps of P^2, and linear-factor extraction.

A line is stored by its coefficient triple (alpha, beta, gamma) of
alpha*x + beta*y + gamma*z, normalized so that the first nonzero entry is 1.
Coefficients are exact GaussRat when known exactly, else complex floats.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .polycore import GaussRat, MPoly, rationalize, yun
from .polycore.gaussrat import format_gauss
from .roots import find_roots, polish_mp

XYZ = ("x", "y", "z")
FLOAT_TOL = 1e-9
RESTRICTION_CANDIDATES = 4


def _normalize(coeffs):
    lead = next(c for c in coeffs if (c != 0 if not isinstance(c, complex) else abs(c) > 0))
    return tuple(c / lead for c in coeffs)


def _fmt_complex(c: complex) -> str:
    re, im = round(c.real, 12) + 0.0, round(c.imag, 12) + 0.0
    if im == 0:
        return f"{re:.12g}"
    if re == 0:
        return f"{im:.12g}*i"
    return f"({re:.12g}{im:+.12g}*i)"


@dataclass(frozen=True)
class LineInPlane:
    """Line alpha*x + beta*y + gamma*z = 0; ``exact`` tells the coefficient kind."""

    alpha: object
    beta: object
    gamma: object
    exact: bool = True

    @classmethod
    def make(cls, alpha, beta, gamma) -> "LineInPlane":
        vals = (alpha, beta, gamma)
        if any(isinstance(v, (complex, float, np.complexfloating, np.floating)) for v in vals):
            vals = tuple(complex(v) for v in vals)
            if max(abs(v) for v in vals) == 0:
                raise ValueError("line coefficients all zero")
            # scale by the largest entry first so the pivot choice is stable
            big = max(vals, key=abs)
            vals = tuple(v / big for v in vals)
            lead = next(v for v in vals if abs(v) > 1e-12)
            vals = tuple(v / lead for v in vals)
            vals = tuple(0j if abs(v) < 1e-14 else v for v in vals)
            exact = [rationalize(v, max_den=1000, tol=1e-11) for v in vals]
            if all(e is not None for e in exact):
                return cls(*exact, exact=True)
            return cls(*vals, exact=False)
        vals = tuple(GaussRat.coerce(v) for v in vals)
        if not any(vals):
            raise ValueError("line coefficients all zero")
        return cls(*_normalize(vals), exact=True)

    @property
    def coeffs(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    @property
    def dual_point(self) -> tuple:
        return self.coeffs

    def complex_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs])

    def poly(self, variables=XYZ) -> MPoly:
        if not self.exact:
            raise ValueError("floating line has no exact polynomial")
        n = len(variables)
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * n
                e[k] = 1
                terms[tuple(e)] = c
        return MPoly(variables, terms)

    def evaluate(self, point) -> complex:
        return complex(np.dot(self.complex_coeffs(), np.asarray(point, dtype=complex)))

    def is_infinity(self) -> bool:
        return self.alpha == 0 and self.beta == 0

    def same_as(self, other: "LineInPlane", tol: float = FLOAT_TOL) -> bool:
        if self.exact and other.exact:
            return self.coeffs == other.coeffs
        return bool(np.max(np.abs(self.complex_coeffs() - other.complex_coeffs())) < tol)

    def text(self, names=XYZ) -> str:
        if self.exact:
            return str(self.poly(names))
        parts = []
        for c, v in zip(self.coeffs, names):
            if abs(c) > 0:
                parts.append(f"{_fmt_complex(c)}*{v}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.text()

    def sort_key(self):
        return tuple((float(complex(c).real), float(complex(c).imag)) for c in self.coeffs)


# ---------------------------------------------------------------------------
# projective points


def normalize_point(pt) -> tuple:
    """Scale a projective point so its last nonzero coordinate is 1."""
    if all(isinstance(c, GaussRat) for c in pt):
        lead = next(c for c in reversed(pt) if c)
        return tuple(c / lead for c in pt)
    v = np.asarray([complex(c) for c in pt])
    big = np.max(np.abs(v))
    k = max(i for i in range(3) if abs(v[i]) > 1e-10 * big)
    v = v / v[k]
    return tuple(0j if abs(c) < 1e-14 else complex(c) for c in v)


def point_text(pt) -> str:
    if all(isinstance(c, GaussRat) for c in pt):
        return "[" + ":".join(format_gauss(c) for c in pt) + "]"
    return "[" + ":".join(_fmt_complex(complex(c)) for c in pt) + "]"


def dual_line_of_point(pt) -> LineInPlane:
    """Lines through [x0:y0:z0] form, in the dual (p,q,r) plane, x0*p + z0*q - y0*r = 0.

    (p, q) is the affine chart of lines y = p*x + q, i.e. dual point [p:-1:q].
    """
    x0, y0, z0 = pt
    return LineInPlane.make(x0, z0, -y0)


# ---------------------------------------------------------------------------
# projective maps


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _adjugate(m):
    def cof(i, j):
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        a, b = rows
        c, d = cols
        v = m[a][c] * m[b][d] - m[a][d] * m[b][c]
        return v if (i + j) % 2 == 0 else -v

    return [[cof(j, i) for j in range(3)] for i in range(3)]


@dataclass(frozen=True)
class ProjectiveMap:
    """X' = M X with an exact invertible matrix."""

    matrix: tuple

    @classmethod
    def random(cls, seed: int, spread: int = 3) -> "ProjectiveMap":
        rnd = random.Random(seed)
        while True:
            m = [[GaussRat(rnd.randint(-spread, spread)) for _ in range(3)] for _ in range(3)]
            if _det3(m):
                return cls(tuple(tuple(r) for r in m))

    @classmethod
    def identity(cls) -> "ProjectiveMap":
        one, zero = GaussRat(1), GaussRat(0)
        return cls(tuple(tuple(one if i == j else zero for j in range(3)) for i in range(3)))

    @property
    def adjugate(self):
        return _adjugate(self.matrix)

    def apply_point(self, pt) -> tuple:
        m = self.matrix
        if all(isinstance(c, GaussRat) for c in pt):
            return tuple(sum((m[i][j] * pt[j] for j in range(3)), GaussRat(0)) for i in range(3))
        mc = np.array([[complex(c) for c in r] for r in m])
        return tuple(mc @ np.asarray(pt, dtype=complex))

    def inverse_point(self, pt) -> tuple:
        n = self.adjugate
        if all(isinstance(c, GaussRat) for c in pt):
            return tuple(sum((n[i][j] * pt[j] for j in range(3)), GaussRat(0)) for i in range(3))
        nc = np.array([[complex(c) for c in r] for r in n])
        return tuple(nc @ np.asarray(pt, dtype=complex))

    def pull_poly(self, f: MPoly) -> MPoly:
        """f'(X') = f(N X') with N the adjugate, so f' vanishes on the image of {f = 0}."""
        n = self.adjugate
        images = {}
        for i, v in enumerate(XYZ):
            terms = {}
            for j in range(3):
                if n[i][j]:
                    e = [0, 0, 0]
                    e[j] = 1
                    terms[tuple(e)] = n[i][j]
            images[v] = MPoly(XYZ, terms)
        return f.with_variables(XYZ).linear_change(images)

    def push_form(self, A: MPoly, B: MPoly, C: MPoly) -> tuple[MPoly, MPoly, MPoly]:
        """Components of the 1-form transported by the map (up to a constant)."""
        n = self.adjugate
        pulled = [self.pull_poly(P) for P in (A, B, C)]
        # A'(X') = N^T A(N X')
        return tuple(sum((pulled[j] * n[j][i] for j in range(3)), MPoly.zero(XYZ)) for i in range(3))

    def push_line(self, line: LineInPlane) -> LineInPlane:
        n = self.adjugate
        c = line.coeffs
        if line.exact:
            return LineInPlane.make(*(sum((n[j][i] * c[j] for j in range(3)), GaussRat(0)) for i in range(3)))
        nc = np.array([[complex(v) for v in r] for r in n])
        return LineInPlane.make(*(nc.T @ line.complex_coeffs()))


# ---------------------------------------------------------------------------
# linear factor extraction


@dataclass
class DivisorFactorization:
    """poly = unit * prod(line^mult) * residual."""

    factors: list = field(default_factory=list)  # (LineInPlane, multiplicity)
    residual: MPoly | None = None
    certification: str = "exact"  # exact | certified-floating | uncertified

    @property
    def fully_split(self) -> bool:
        return self.residual is not None and self.residual.is_constant

    @property
    def reduced(self) -> bool:
        return all(k == 1 for _, k in self.factors)

    def lines(self) -> list[LineInPlane]:
        return [ln for ln, _ in self.factors]

    def degree(self) -> int:
        return sum(k for _, k in self.factors)


def _univariate(H: MPoly, a, d) -> MPoly:
    images = {v: MPoly(("t",), {(0,): a[k], (1,): d[k]}) for k, v in enumerate(XYZ)}
    out = H.with_variables(XYZ).linear_change(images)
    # every x, y, z has been replaced; keep only t
    k = out.variables.index("t")
    return MPoly(("t",), {(e[k],): c for e, c in out.terms.items()})


def _numeric_roots(f: MPoly, rng, bits: int = 106) -> list:
    """Roots of a squarefree univariate f(t) to ``bits`` precision, as mpc."""
    n = f.degree("t")
    coeffs = [f.terms.get((k,), GaussRat(0)) for k in range(n + 1)]
    c = np.array([complex(v) for v in coeffs])
    rs = find_roots(c, rng)
    with mpmath.workprec(bits):
        # coefficients converted at the polishing precision, not at 53 bits
        cmp = [v.to_mp() for v in coeffs]
    out = [polish_mp(cmp, z, bits=bits, steps=40) for z in rs.roots]
    with mpmath.workprec(bits):
        tiny = mpmath.mpf(2) ** (-bits // 2)
        size = max([abs(z) for z in out] + [mpmath.mpf(1)])
        clash = any(abs(u - v) <= tiny * size for i, u in enumerate(out) for v in out[i + 1:])
        if clash:
            # two starts polished onto the same root; f is squarefree, so
            # every root is simple and a full extended-precision solve is safe
            out = list(mpmath.polyroots(cmp[::-1], maxsteps=200, extraprec=bits))
    return out


def restriction_defect(H_terms, q1, q2, norm: float | None = None) -> float:
    """Largest coefficient of H restricted to the line through q1, q2, relative to H.

    The line is parametrized as u + t v with u, v orthonormal, and the
    restriction's coefficients come from an FFT of values on the unit circle,
    so the measure sees the whole line rather than a few points on it.
    """
    u = np.asarray(q1, dtype=complex)
    u = u / np.linalg.norm(u)
    v = np.asarray(q2, dtype=complex)
    v = v - np.vdot(u, v) * u
    v = v / np.linalg.norm(v)
    n = max(sum(e) for e, _ in H_terms)
    N = n + 1
    t = np.exp(2j * np.pi * np.arange(N) / N)
    pts = u[None, :] + t[:, None] * v[None, :]
    vals = np.zeros(N, dtype=complex)
    for e, c in H_terms:
        vals += c * pts[:, 0] ** e[0] * pts[:, 1] ** e[1] * pts[:, 2] ** e[2]
    coeffs = np.fft.fft(vals) / N
    if norm is None:
        norm = sum(abs(c) for _, c in H_terms)
    return float(np.max(np.abs(coeffs)) / norm)


def _vanishes_on(H_terms, line_vec, q1, q2, rng) -> bool:
    return restriction_defect(H_terms, q1, q2) < 1e-9


def _rationalize_poly(coeffs: dict, variables) -> MPoly | None:
    terms = {}
    for e, c in coeffs.items():
        if abs(c) < 1e-11:
            continue
        r = rationalize(c, max_den=10_000, tol=1e-9)
        if r is None:
            return None
        terms[e] = r
    return MPoly(variables, terms)


def _cross(u, v) -> tuple:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _crosses_off(H: MPoly, c1, c2) -> bool:
    meet = _cross(_cross(c1[1], c1[2]), _cross(c2[1], c2[2]))
    return any(meet) and H.evaluate(dict(zip(XYZ, meet))) != GaussRat(0)


def linear_factors(H: MPoly, seed: int = 0) -> DivisorFactorization:
    """Split off every linear factor of a homogeneous H(x, y, z).

    Candidate lines join points where H meets two random exact lines with
    equal multiplicity; a candidate is kept when H vanishes at random points
    on it.  Gaussian-rational lines are confirmed by exact division; the
    remaining (floating) lines are confirmed together by rationalizing their
    product and dividing exactly.
    """
    H = H.with_variables(XYZ)
    if H.is_zero:
        raise ValueError("zero divisor")
    if not H.is_homogeneous():
        raise ValueError("divisor must be homogeneous in x, y, z")
    n = H.total_degree()
    if n == 0:
        return DivisorFactorization([], H, "exact")
    rnd = random.Random(seed)
    rng = np.random.default_rng(seed)
    # A restriction line through a singular point of the curve (two factor
    # lines crossing) merges roots, and the lines through that point can no
    # longer be matched.  Generic lines meet the curve in the largest number
    # of distinct points, so candidates are drawn and two of the best kept;
    # the pair must also cross off the curve, or a factor through the
    # crossing is seen at the same point twice.
    candidates = []
    pair = None
    for _ in range(200):
        a = [GaussRat(rnd.randint(-9, 9)) for _ in range(3)]
        d = [GaussRat(rnd.randint(-9, 9)) for _ in range(3)]
        av, dv = np.array([complex(v) for v in a]), np.array([complex(v) for v in d])
        if np.linalg.norm(np.cross(av, dv)) < 0.5 * np.linalg.norm(av) * np.linalg.norm(dv):
            continue  # nearly parallel a, d crowd the roots and ruin their conditioning
        h = _univariate(H, a, d)
        if h.degree("t") != n:
            continue
        parts = yun(h, "t")
        candidates.append((sum(s.degree("t") for s, _ in parts), a, d, parts))
        if len(candidates) < RESTRICTION_CANDIDATES:
            continue
        best = max(c[0] for c in candidates)
        top = [c for c in candidates if c[0] == best]
        pair = next(((c1, c2) for i, c1 in enumerate(top) for c2 in top[i + 1:] if _crosses_off(H, c1, c2)), None)
        if pair is not None:
            break
    if pair is None:
        raise RuntimeError("no generic pair of restriction lines found")
    restrictions = []
    for _distinct, a, d, parts in pair:
        pts = []
        for s, k in parts:
            for t in _numeric_roots(s, rng):
                with mpmath.workprec(106):
                    pts.append((k, [a[i].to_mp() + t * d[i].to_mp() for i in range(3)]))
        restrictions.append(pts)
    H_terms = H.to_complex_terms()
    found: list[tuple[LineInPlane, int]] = []
    for k1, q1_mp in restrictions[0]:
        for k2, q2_mp in restrictions[1]:
            if k1 != k2:
                continue
            # the join is formed in extended precision: when a factor passes
            # near the crossing of the two restriction lines, q1 and q2 are
            # close and a double-precision cross product loses the direction
            with mpmath.workprec(106):
                u, v = q1_mp, q2_mp
                vm = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
                size = max(abs(c) for c in u) * max(abs(c) for c in v)
                if max(abs(c) for c in vm) < mpmath.mpf(10) ** -25 * size:
                    continue
                big = max(vm, key=abs)
                vec = np.array([complex(c / big) for c in vm])
            q1 = np.array([complex(c) for c in q1_mp])
            q2 = np.array([complex(c) for c in q2_mp])
            if not _vanishes_on(H_terms, vec, q1, q2, rng):
                continue
            line = LineInPlane.make(*vec)
            if not any(line.same_as(ln) for ln, _ in found):
                found.append((line, k1))
    # exact confirmation
    rest = H
    factors: list[tuple[LineInPlane, int]] = []
    floating: list[tuple[LineInPlane, int]] = []
    for line, k in found:
        if line.exact:
            lp = line.poly()
            mult = 0
            while True:
                q, r = rest.divmod_exact(lp)
                if not r.is_zero:
                    break
                rest = q
                mult += 1
            if mult:
                factors.append((line, mult))
            else:
                floating.append((line, k))
        else:
            floating.append((line, k))
    cert = "exact"
    if floating:
        # expand prod(line^k) numerically as a dict of exponent -> complex
        coeffs = {(0, 0, 0): 1 + 0j}
        for line, k in floating:
            lc = line.complex_coeffs()
            for _ in range(k):
                new = {}
                for e, c in coeffs.items():
                    for i in range(3):
                        if lc[i] != 0:
                            ne = list(e)
                            ne[i] += 1
                            ne = tuple(ne)
                            new[ne] = new.get(ne, 0) + c * lc[i]
                coeffs = new
        # scale so the largest coefficient is 1 before rationalizing
        big = max(coeffs.values(), key=abs)
        coeffs = {e: c / big for e, c in coeffs.items()}
        prodpoly = _rationalize_poly(coeffs, XYZ)
        ok = False
        if prodpoly is not None and not prodpoly.is_zero:
            q, r = rest.divmod_exact(prodpoly)
            if r.is_zero:
                rest = q
                ok = True
        cert = "certified-floating" if ok else "uncertified"
        # when not ok the rest still contains the floating lines
        factors.extend(floating)
    factors.sort(key=lambda lk: lk[0].sort_key())
    return DivisorFactorization(factors, rest, cert)
