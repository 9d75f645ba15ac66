"""Foliations of P^2: construction, inflection divisor, invariant lines,
tangency divisors and singular points.

Conventions: the affine form is w = a dx + b dy; a vector field A d/dx + B d/dy
corresponds to w = B dx - A dy.  The homogeneous form Omega = A dx + B dy + C dz
satisfies the Euler relation xA + yB + zC = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

import mpmath
import numpy as np

from .lines import (
    XYZ,
    DivisorFactorization,
    LineInPlane,
    ProjectiveMap,
    dual_line_of_point,
    linear_factors,
    normalize_point,
    point_text,
    restriction_defect,
)
from .polycore import GaussRat, MPoly, gcd, parse_poly, rationalize, resultant, yun
from .roots import find_roots, polish_mp

XY = ("x", "y")


class FoliationError(ValueError):
    pass


def _xyz(f: MPoly) -> MPoly:
    return f.with_variables(XYZ)


def _content3(A: MPoly, B: MPoly, C: MPoly) -> MPoly:
    g = gcd(A, B)
    if not g.is_constant:
        g = gcd(g, C)
    return g


@dataclass(frozen=True, eq=False)
class Foliation:
    a: MPoly
    b: MPoly
    A: MPoly
    B: MPoly
    C: MPoly
    degree: int
    name: str = ""

    def __repr__(self) -> str:
        return f"Foliation({self.name or 'unnamed'}, degree={self.degree})"

    def label(self) -> str:
        return self.name or f"foliation(a={self.a}, b={self.b})"

    @property
    def components(self) -> tuple[MPoly, MPoly, MPoly]:
        return (self.A, self.B, self.C)

    def same_as(self, other: "Foliation") -> bool:
        # proportional homogeneous triples
        A1, B1, C1 = self.components
        A2, B2, C2 = other.components
        return (A1 * B2 - A2 * B1).is_zero and (A1 * C2 - A2 * C1).is_zero and (B1 * C2 - B2 * C1).is_zero

    def is_homogeneous(self) -> bool:
        """True when (a, b) is a homogeneous vector field in the standard chart."""
        a, b = self.a, self.b
        degs = {sum(e) for e in a.terms} | {sum(e) for e in b.terms}
        return len(degs) == 1

    def transformed(self, T: ProjectiveMap) -> "Foliation":
        A, B, C = T.push_form(self.A, self.B, self.C)
        return from_homogeneous(A, B, C, name=self.name)

    def euler_residual(self) -> MPoly:
        x, y, z = (MPoly.var(v, XYZ) for v in XYZ)
        return x * self.A + y * self.B + z * self.C


def new_foliation(a: MPoly, b: MPoly, name: str = "") -> Foliation:
    """Saturate (a, b), homogenize and divide by the content.

    Omega = z*a_h dx + z*b_h dy - (x*a_h + y*b_h) dz with a_h, b_h the
    homogenizations at the common degree; the degree is deg(components) - 1.
    """
    a = a.with_variables(XY)
    b = b.with_variables(XY)
    if a.is_zero and b.is_zero:
        raise FoliationError("zero 1-form")
    g = gcd(a, b)
    if not g.is_constant:
        a, b = a.exact_div(g), b.exact_div(g)
    n = max(a.total_degree(), b.total_degree())
    ah = _xyz(a.homogenize("z", n)) if not a.is_zero else MPoly.zero(XYZ)
    bh = _xyz(b.homogenize("z", n)) if not b.is_zero else MPoly.zero(XYZ)
    x, y, z = (MPoly.var(v, XYZ) for v in XYZ)
    return from_homogeneous(z * ah, z * bh, -(x * ah + y * bh), name=name)


def from_homogeneous(A: MPoly, B: MPoly, C: MPoly, name: str = "") -> Foliation:
    A, B, C = _xyz(A), _xyz(B), _xyz(C)
    g = _content3(A, B, C)
    if not g.is_constant:
        A, B, C = (P.exact_div(g) if not P.is_zero else P for P in (A, B, C))
    degs = {P.total_degree() for P in (A, B, C) if not P.is_zero}
    if len(degs) != 1:
        raise FoliationError("components are not homogeneous of one degree")
    d = degs.pop() - 1
    # normalize the overall constant for reproducible printing
    lead = next(P for P in (A, B, C) if not P.is_zero).leading_coefficient()
    A, B, C = (P.scale(lead.inverse()) for P in (A, B, C))
    a = A.dehomogenize("z").with_variables(XYZ)
    b = B.dehomogenize("z").with_variables(XYZ)
    a = MPoly(XY, {e[:2]: c for e, c in a.terms.items()})
    b = MPoly(XY, {e[:2]: c for e, c in b.terms.items()})
    return Foliation(a, b, A, B, C, d, name)


def from_vector_field(A: MPoly, B: MPoly, name: str = "") -> Foliation:
    """Foliation of A d/dx + B d/dy, i.e. w = B dx - A dy."""
    return new_foliation(B.with_variables(XY), -A.with_variables(XY), name=name)


def parse_foliation(text: str, name: str = "") -> Foliation:
    """Read ``foliation { a = ...; b = ...; }`` or ``vectorfield { A = ...; B = ...; }``."""
    body = text.strip()
    head, _, rest = body.partition("{")
    head = head.strip()
    if not rest.rstrip().endswith("}"):
        raise FoliationError("missing closing brace")
    fields = {}
    for part in rest.rstrip()[:-1].split(";"):
        if not part.strip():
            continue
        key, eq, val = part.partition("=")
        if not eq:
            raise FoliationError(f"expected 'name = polynomial', got {part.strip()!r}")
        fields[key.strip()] = parse_poly(val.strip(), XY)
    if head == "foliation":
        if set(fields) != {"a", "b"}:
            raise FoliationError("foliation block needs exactly a and b")
        return new_foliation(fields["a"], fields["b"], name=name)
    if head == "vectorfield":
        if set(fields) != {"A", "B"}:
            raise FoliationError("vectorfield block needs exactly A and B")
        return from_vector_field(fields["A"], fields["B"], name=name)
    raise FoliationError(f"unknown block {head!r}")


# ---------------------------------------------------------------------------
# inflection divisor


def _apply_field(X, f: MPoly) -> MPoly:
    return sum((X[i] * f.diff(v) for i, v in enumerate(XYZ)), MPoly.zero(XYZ))


def inflection_determinant(F: Foliation, X=None) -> MPoly:
    """det [R; X(R); X^2(R)] for a homogeneous field X inducing F (R = (x, y, z))."""
    if X is None:
        X = (-F.B, F.A, MPoly.zero(XYZ))
    rows = [[MPoly.var(v, XYZ) for v in XYZ]]
    rows.append([_apply_field(X, r) for r in rows[0]])
    rows.append([_apply_field(X, r) for r in rows[1]])
    m = rows
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def inflection_divisor(F: Foliation) -> MPoly:
    """I(F), homogeneous of degree 3d, normalized monic.

    The field X' = -B d/dx + A d/dy induces z*Omega, so its determinant carries
    an extra factor z^3, which is divided out exactly.
    """
    det = inflection_determinant(F)
    z3 = MPoly.var("z", XYZ) ** 3
    I = det.exact_div(z3)
    return I.monic()


# ---------------------------------------------------------------------------
# Gauss map, invariance


def gauss_map(F: Foliation, point) -> tuple:
    """[A:B:C](point): the tangent line at a regular point, as a dual point."""
    exact = all(isinstance(c, (GaussRat, int)) for c in point)
    if exact:
        vals = {v: GaussRat.coerce(c) for v, c in zip(XYZ, point)}
        img = tuple(P.evaluate(vals) for P in F.components)
        if not any(img):
            raise FoliationError("Gauss map undefined at a singular point")
        return normalize_point(img)
    pt = np.asarray(point, dtype=complex)
    img = []
    mag = 0.0
    for P in F.components:
        val = 0j
        for e, c in P.to_complex_terms():
            t = c * pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2]
            val += t
            mag += abs(t)
        img.append(val)
    if max(abs(v) for v in img) <= 1e-12 * max(mag, 1e-300):
        raise FoliationError("Gauss map undefined at a singular point")
    return normalize_point(img)


def invariance_residual(F: Foliation, line: LineInPlane):
    """Components of (A, B, C) x (alpha, beta, gamma) reduced modulo the line.

    Exact lines return a bool (line divides every component); floating lines
    return the largest relative value at random points on the line.
    """
    al = line.coeffs
    A, B, C = F.components
    if line.exact:
        comps = (B * al[2] - C * al[1], C * al[0] - A * al[2], A * al[1] - B * al[0])
        lp = line.poly()
        return all(P.is_zero or lp.divides(P) for P in comps)
    lc = line.complex_coeffs()
    # basis of the line as a projective 2-plane
    _, _, vh = np.linalg.svd(lc.reshape(1, 3))
    u, w = vh[1].conj(), vh[2].conj()
    terms = [dict(P.to_complex_terms()) for P in F.components]
    norm = sum(abs(c) for t in terms for c in t.values()) * float(np.max(np.abs(lc)))
    worst = 0.0
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        comp: dict = {}
        for e, c in terms[j].items():
            comp[e] = comp.get(e, 0) + c * lc[k]
        for e, c in terms[k].items():
            comp[e] = comp.get(e, 0) - c * lc[j]
        items = [(e, c) for e, c in comp.items() if c != 0]
        if items:
            worst = max(worst, restriction_defect(items, u, w, norm))
    return worst


def is_invariant(F: Foliation, line: LineInPlane, tol: float = 1e-10) -> bool:
    r = invariance_residual(F, line)
    return r if isinstance(r, bool) else r < tol


@dataclass
class InvariantLine:
    line: LineInPlane
    multiplicity: int  # multiplicity as a factor of I(F)
    certified: str  # exact | floating

    def to_json(self):
        return {"line": self.line.text(), "multiplicity": self.multiplicity, "certified": self.certified}


class FoliationAnalysis:
    """Cached divisor computations for one foliation."""

    def __init__(self, F: Foliation, seed: int = 0):
        self.F = F
        self.seed = seed

    @cached_property
    def inflection(self) -> MPoly:
        return inflection_divisor(self.F)

    @cached_property
    def inflection_factors(self) -> DivisorFactorization:
        return linear_factors(self.inflection, seed=self.seed)

    @cached_property
    def invariant_lines(self) -> list[InvariantLine]:
        out = []
        for line, k in self.inflection_factors.factors:
            if is_invariant(self.F, line):
                out.append(InvariantLine(line, k, "exact" if line.exact else "floating"))
        return out

    @cached_property
    def convexity(self) -> tuple:
        """(convex, reduced_convex, witness) with None meaning inconclusive."""
        fac = self.inflection_factors
        lines = self.invariant_lines
        if fac.certification == "uncertified":
            return (None, None, None)
        if not fac.fully_split:
            return (False, False, fac.residual)
        if len(lines) != len(fac.factors):
            bad = [ln for ln, _ in fac.factors if not any(ln.same_as(il.line) for il in lines)]
            return (False, False, bad[0].text())
        reduced = fac.reduced
        return (True, reduced, None)

    @cached_property
    def singularities(self) -> list["SingularityRecord"]:
        return singular_points(self.F, seed=self.seed)


def invariant_lines(F: Foliation, seed: int = 0) -> list[InvariantLine]:
    return FoliationAnalysis(F, seed).invariant_lines


def is_convex(F: Foliation, seed: int = 0):
    return FoliationAnalysis(F, seed).convexity[0]


def is_reduced_convex(F: Foliation, seed: int = 0):
    return FoliationAnalysis(F, seed).convexity[1]


# ---------------------------------------------------------------------------
# tangency


def tangency_divisor(F: Foliation, G: Foliation) -> MPoly:
    """Tang(F, G) = (A_F B_G - A_G B_F) / z, homogeneous of degree d_F + d_G + 1."""
    T = F.A * G.B - G.A * F.B
    if T.is_zero:
        # the z-component may vanish while others do not only if F = G
        if F.same_as(G):
            raise FoliationError("identical foliations have no tangency divisor")
        raise FoliationError("degenerate tangency computation")
    return T.exact_div(MPoly.var("z", XYZ)).monic()


def affine_part(H: MPoly) -> MPoly:
    h = H.dehomogenize("z")
    return MPoly(XY, {e[:2]: c for e, c in h.with_variables(XYZ).terms.items()})


# ---------------------------------------------------------------------------
# singular points


@dataclass
class SingularityRecord:
    location: tuple  # projective point, GaussRat entries when exact
    exact: bool
    multiplicity: int  # intersection multiplicity (Milnor number)
    nu: int | None  # algebraic multiplicity
    radial_order: int | None
    special: bool | None
    status: str = "ok"  # ok | inconclusive

    def text(self) -> str:
        return point_text(self.location)

    def to_json(self):
        return {
            "point": self.text(),
            "exact": self.exact,
            "multiplicity": self.multiplicity,
            "nu": self.nu,
            "radial_order": self.radial_order,
            "special": self.special,
            "status": self.status,
        }

    def sort_key(self):
        pt = [complex(c) for c in self.location]
        return tuple((round(c.real, 9), round(c.imag, 9)) for c in pt)


def _roots_exact_or_float(f: MPoly, var: str, rng) -> list:
    """Roots of a univariate squarefree polynomial; GaussRat when verified exactly."""
    n = f.degree(var)
    k = f.variables.index(var)
    coeffs = [GaussRat(0)] * (n + 1)
    for e, c in f.terms.items():
        coeffs[e[k]] = c
    if n == 1:
        return [-coeffs[0] / coeffs[1]]
    c = np.array([complex(v) for v in coeffs])
    rs = find_roots(c, rng)
    with mpmath.workprec(106):
        cmp = [v.to_mp() for v in coeffs]
    out = []
    for z in rs.roots:
        zz = complex(polish_mp(cmp, z))
        r = rationalize(zz, max_den=10_000, tol=1e-10)
        if r is not None and not sum((coeffs[i] * r**i for i in range(n + 1)), GaussRat(0)):
            out.append(r)
        else:
            out.append(zz)
    return out


def _affine_in(f: MPoly, names=XY) -> MPoly:
    return MPoly(names, {e[:2]: c for e, c in f.with_variables(XYZ).dehomogenize("z").terms.items()})


def singular_points(F: Foliation, seed: int = 0, attempts: int = 8) -> list[SingularityRecord]:
    """All singular points with multiplicities, classified.

    A random exact projective change puts every point in the affine chart with
    distinct x-coordinates; Res_y of the affine components, with its exact
    squarefree decomposition, gives the x-coordinates and multiplicities.
    """
    d = F.degree
    expected = d * d + d + 1
    last_err = None
    for attempt in range(attempts):
        T = ProjectiveMap.random(seed * 1000 + 17 + attempt, spread=60)
        G = F.transformed(T)
        a, b = G.a, G.b
        # B vanishes at [0:1:0] (Euler relation), so only a can be monic in y;
        # a constant leading coefficient keeps Res_y free of spurious roots
        if a.degree("y") != d + 1 or not a.coeffs_in("y")[d + 1].is_constant:
            last_err = "a not monic in y"
            continue
        R = resultant(a, b, "y")
        if R.degree("x") != expected:
            last_err = f"resultant degree {R.degree('x')} != {expected}"
            continue
        rng = np.random.default_rng(seed + attempt)
        records = []
        ok = True
        for s, k in yun(R, "x"):
            sx = MPoly(("x",), {(e[0],): c for e, c in s.terms.items()})
            for x0 in _roots_exact_or_float(sx, "x", rng):
                y0 = _solve_y(a, b, x0, rng)
                if y0 is None:
                    ok = False
                    break
                pt = T.inverse_point((x0, y0, GaussRat(1)) if isinstance(x0, GaussRat) and isinstance(y0, GaussRat) else (complex(x0), complex(y0), 1 + 0j))
                records.append(classify_singularity(F, pt, multiplicity=k))
            if not ok:
                break
        if not ok:
            last_err = "two singular points share a projection"
            continue
        records.sort(key=lambda r: r.sort_key())
        return records
    raise FoliationError(f"singular point computation failed: {last_err}")


def _solve_y(a: MPoly, b: MPoly, x0, rng):
    """The unique common y-root of a(x0, y), b(x0, y), or None if not unique."""
    if isinstance(x0, GaussRat):
        ay = a.substitute_values({"x": x0})
        by = b.substitute_values({"x": x0})
        ay = MPoly(("y",), {(e[1],): c for e, c in ay.terms.items()})
        by = MPoly(("y",), {(e[1],): c for e, c in by.terms.items()})
        g = gcd(ay, by)
        if g.degree("y") != 1:
            # several points on one vertical line, or a multiple root
            if g.degree("y") < 1:
                return None
            sq = yun(g, "y")
            if len(sq) != 1 or sq[0][0].degree("y") != 1:
                return None
            g = sq[0][0]
        c = g.coeffs_in("y")
        return -c.get(0, MPoly.zero(("y",))).constant_value() / c[1].constant_value() if 0 in c else GaussRat(0)
    # floating x0: roots of a(x0, y) that nearly annihilate b(x0, y)
    ca = _numeric_coeffs_y(a, x0)
    cb = _numeric_coeffs_y(b, x0)
    ra = find_roots(ca, rng).roots
    vals = [abs(np.polyval(cb[::-1], y)) / max(np.polyval(np.abs(cb[::-1]), abs(y)), 1e-300) for y in ra]
    order = np.argsort(vals)
    best = ra[order[0]]
    # reject when a second, distant root also fits (two points on the vertical line)
    for j in order[1:]:
        if vals[j] < 1e-6 and abs(ra[j] - best) > 1e-4 * max(1, abs(best)):
            return None
    if vals[order[0]] > 1e-6:
        return None
    return complex(best)


def _numeric_coeffs_y(f: MPoly, x0: complex) -> np.ndarray:
    n = f.degree("y")
    c = np.zeros(n + 1, dtype=complex)
    for e, v in f.terms.items():
        c[e[1]] += complex(v) * x0 ** e[0]
    return c


# ---------------------------------------------------------------------------
# classification


JET_TOL = 1e-8


def _local_form(F: Foliation, pt, chart: str | None = None):
    """(chart, u, v components) of the form near pt, as exact or complex polys."""
    coords = list(pt)
    if chart is None:
        if all(isinstance(c, GaussRat) for c in coords):
            chart = next(v for v in ("z", "y", "x") if coords[XYZ.index(v)])
        else:
            chart = XYZ[int(np.argmax([abs(complex(c)) for c in coords]))]
    k = XYZ.index(chart)
    if abs(complex(coords[k])) < 1e-12:
        raise FoliationError(f"point not in chart {chart}=1")
    pt = [c / coords[k] for c in coords]
    # chart z=1: A dx + B dy; y=1: A dx + C dz; x=1: B dy + C dz
    others = [v for v in XYZ if v != chart]
    comp = {"x": F.A, "y": F.B, "z": F.C}
    P, Q = comp[others[0]], comp[others[1]]
    return chart, others, [pt[XYZ.index(v)] for v in others], P.substitute_values({chart: 1}), Q.substitute_values({chart: 1})


def _taylor_parts(f: MPoly, names, center, max_deg: int):
    """Homogeneous parts (in shifted coordinates) of f around center, up to max_deg.

    Exact when center is exact, else complex coefficient dicts.
    """
    exact = all(isinstance(c, GaussRat) for c in center)
    if exact:
        images = {}
        for v, c in zip(names, center):
            images[v] = MPoly.var(v, f.variables) + MPoly.const(c, f.variables)
        g = f.linear_change(images)
        parts = []
        for deg in range(max_deg + 1):
            h = g.homogeneous_part(deg)
            parts.append({tuple(e[f.variables.index(v)] for v in names): complex(c) for e, c in h.terms.items()})
        return parts, g
    # numeric: coefficients via derivatives at the complex center
    idx = [f.variables.index(v) for v in names]
    terms = f.to_complex_terms()
    parts = []
    from math import comb

    for deg in range(max_deg + 1):
        part = {}
        for i in range(deg + 1):
            j = deg - i
            # coefficient of u^i v^j in f(center + (u, v))
            val = 0j
            for e, c in terms:
                ei, ej = e[idx[0]], e[idx[1]]
                if ei < i or ej < j:
                    continue
                val += c * comb(ei, i) * comb(ej, j) * complex(center[0]) ** (ei - i) * complex(center[1]) ** (ej - j)
            if val != 0:
                part[(i, j)] = val
        parts.append(part)
    return parts, None


def classify_singularity(F: Foliation, pt, chart: str | None = None, multiplicity: int = 0) -> SingularityRecord:
    """Algebraic multiplicity nu and radial order at a singular point.

    In the chosen chart, with local form P du + Q dv (vector field (-Q, P)),
    nu is the degree of the first nonzero jet; the point is radial of order nu
    when u*P_nu + v*Q_nu vanishes identically (the jet is a multiple of the
    radial field).
    """
    pt = normalize_point(pt)
    exact = all(isinstance(c, GaussRat) for c in pt)
    chart, names, center, P, Q = _local_form(F, pt, chart)
    maxd = F.degree + 1
    Pp, _ = _taylor_parts(P, names, center, maxd)
    Qp, _ = _taylor_parts(Q, names, center, maxd)
    scale = max([abs(c) for part in Pp + Qp for c in part.values()] + [1e-300])
    tol = 0.0 if exact else JET_TOL * scale
    status = "ok"
    if any(abs(c) > tol for c in list(Pp[0].values()) + list(Qp[0].values())):
        raise FoliationError(f"{point_text(pt)} is not a singular point")
    nu = None
    for deg in range(1, maxd + 1):
        vals = [abs(c) for c in list(Pp[deg].values()) + list(Qp[deg].values())]
        big = max(vals, default=0.0)
        if big > tol:
            if not exact and big < 1e3 * tol:
                status = "inconclusive"
            nu = deg
            break
    if nu is None:
        return SingularityRecord(pt, exact, multiplicity, None, None, None, "inconclusive")
    # tangent cone u*P_nu + v*Q_nu
    cone: dict = {}
    for (i, j), c in Pp[nu].items():
        cone[(i + 1, j)] = cone.get((i + 1, j), 0) + c
    for (i, j), c in Qp[nu].items():
        cone[(i, j + 1)] = cone.get((i, j + 1), 0) + c
    jet_scale = max(abs(c) for c in list(Pp[nu].values()) + list(Qp[nu].values()))
    cone_big = max((abs(c) for c in cone.values()), default=0.0)
    if exact:
        radial = cone_big == 0
    else:
        radial = cone_big < 1e-8 * jet_scale
        if 1e-8 * jet_scale <= cone_big < 1e-5 * jet_scale:
            status = "inconclusive"
    radial_order = nu if radial else None
    special = nu >= 2 or radial
    return SingularityRecord(pt, exact, multiplicity, nu, radial_order, special, status)


@dataclass
class SpecialSet:
    sigma: list  # special singularities
    sigma_rad: list  # radial ones
    dual_lines: list  # (record, dual LineInPlane) for every special point
    inconclusive: list = field(default_factory=list)


def special_singularities(F: Foliation, seed: int = 0, records=None) -> SpecialSet:
    recs = records if records is not None else singular_points(F, seed)
    sig = [r for r in recs if r.special]
    rad = [r for r in recs if r.radial_order is not None]
    inc = [r for r in recs if r.status != "ok"]
    duals = [(r, dual_line_of_point(r.location)) for r in sig]
    return SpecialSet(sig, rad, duals, inc)
