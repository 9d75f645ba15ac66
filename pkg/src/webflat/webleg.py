"""Webs as formal products of lines and foliations, their implicit
presentations, Legendre transforms and dual discriminants.

Dual chart: (p, q) stands for the line y = p*x + q, i.e. the dual point
[p : -1 : q].  The dual web is F_check(p, q; x) = F(x, p*x + q; p) and its
slopes are dq/dp = -x.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .foliation import (
    XY,
    Foliation,
    FoliationAnalysis,
    FoliationError,
    gauss_map,
    is_invariant,
    tangency_divisor,
)
from .lines import XYZ, LineInPlane, ProjectiveMap, dual_line_of_point, linear_factors
from .polycore import GaussRat, MPoly, discriminant_in, gcd, resultant, squarefree_part
from .roots import find_roots

PQX = ("p", "q", "x")
XYP = ("x", "y", "p")
PQR = ("p", "q", "r")  # homogeneous dual coordinates, r = 1 is the (p, q) chart


class WebError(ValueError):
    pass


@dataclass
class WebSpec:
    lines: list = field(default_factory=list)
    foliations: list = field(default_factory=list)

    def __post_init__(self):
        for i, j in combinations(range(len(self.lines)), 2):
            if self.lines[i].same_as(self.lines[j]):
                raise WebError(f"repeated line {self.lines[i]}: identically zero discriminant")
        for i, j in combinations(range(len(self.foliations)), 2):
            if self.foliations[i].same_as(self.foliations[j]):
                raise WebError(f"repeated foliation {self.foliations[i].label()}: identically zero discriminant")
        if self.k < 1:
            raise WebError("empty web")

    @property
    def k(self) -> int:
        return len(self.lines) + sum(F.degree for F in self.foliations)

    def __mul__(self, other: "WebSpec") -> "WebSpec":
        return WebSpec(self.lines + other.lines, self.foliations + other.foliations)

    def labels(self) -> list[str]:
        return [f"line {ln}" for ln in self.lines] + [F.label() for F in self.foliations]

    def transformed(self, T: ProjectiveMap) -> "WebSpec":
        return WebSpec([T.push_line(ln) for ln in self.lines], [F.transformed(T) for F in self.foliations])


def product(*pieces) -> WebSpec:
    """Formal product of LineInPlane, Foliation and WebSpec pieces."""
    lines, fols = [], []
    for p in pieces:
        if isinstance(p, LineInPlane):
            lines.append(p)
        elif isinstance(p, Foliation):
            fols.append(p)
        elif isinstance(p, WebSpec):
            lines.extend(p.lines)
            fols.extend(p.foliations)
        else:
            raise TypeError(f"cannot multiply {type(p).__name__} into a web")
    return WebSpec(lines, fols)


@dataclass
class ImplicitWeb:
    poly: MPoly
    factors: list  # MPoly factors whose product is poly
    variables: tuple
    slope_var: str
    slope_convention: str  # "primal: p = dy/dx" or "dual: dq/dp = -x"
    transform: ProjectiveMap | None = None
    sources: list = field(default_factory=list)  # label per factor

    @property
    def degree_in_s(self) -> int:
        return self.poly.degree(self.slope_var)


def implicit_presentation(F: Foliation) -> ImplicitWeb:
    """F(x, y; p) = a + p*b for w = a dx + b dy, with p = dy/dx."""
    if F.b.is_zero:
        raise WebError("b vanishes identically (vertical pencil): rotate the chart first")
    a = F.a.with_variables(XYP)
    b = F.b.with_variables(XYP)
    poly = a + MPoly.var("p", XYP) * b
    return ImplicitWeb(poly, [poly], XYP, "p", "primal: p = dy/dx", None, [F.label()])


def line_factor(line: LineInPlane) -> MPoly:
    """(alpha + beta*p)*x + beta*q + gamma: tangency point of y = p*x + q with the line."""
    if not line.exact:
        raise WebError("floating line cannot enter an exact Legendre transform")
    al, be, ga = line.coeffs
    p, q, x = (MPoly.var(v, PQX) for v in PQX)
    return (MPoly.const(al, PQX) + p.scale(be)) * x + q.scale(be) + MPoly.const(ga, PQX)


def foliation_factor(F: Foliation) -> MPoly:
    p, q, x = (MPoly.var(v, PQX) for v in PQX)
    a = F.a.with_variables(XY).linear_change({"x": x, "y": p * x + q})
    b = F.b.with_variables(XY).linear_change({"x": x, "y": p * x + q})
    return (a + p * b).with_variables(PQX)


def _factors_ok(W: WebSpec) -> bool:
    if any(ln.is_infinity() for ln in W.lines):
        return False
    return all(foliation_factor(F).degree("x") == F.degree for F in W.foliations)


def _check_reduced(factors, rnd: random.Random) -> bool:
    """Squarefree in x at two random rational (p, q): witnesses a nonzero discriminant."""
    for _ in range(2):
        vals = {"p": GaussRat(rnd.randint(-50, 50), rnd.randint(1, 9)), "q": GaussRat(rnd.randint(-50, 50), rnd.randint(1, 9))}
        prod = MPoly.const(1, ("x",))
        for f in factors:
            u = f.substitute_values(vals)
            prod = prod * MPoly(("x",), {(e[2],): c for e, c in u.terms.items()})
        if prod.degree("x") < 1:
            return True
        g = gcd(prod, prod.diff("x"))
        if g.is_constant:
            return True
    return False


def legendre(W: WebSpec, seed: int = 0) -> ImplicitWeb:
    """Dual web F_check(p, q; x) as a product of per-component factors.

    The line at infinity, or a foliation whose dual factor drops degree in x,
    triggers a seeded random exact projective change of the primal plane.
    """
    T = None
    if not _factors_ok(W):
        for attempt in range(20):
            cand = ProjectiveMap.random(seed * 7919 + 101 + attempt)
            W2 = W.transformed(cand)
            if _factors_ok(W2):
                W, T = W2, cand
                break
        else:
            raise WebError("could not bring the web into general position")
    factors, sources = [], []
    for ln in W.lines:
        factors.append(line_factor(ln))
        sources.append(f"line {ln}")
    for F in W.foliations:
        factors.append(foliation_factor(F))
        sources.append(F.label())
    if not _check_reduced(factors, random.Random(seed)):
        raise WebError("identically zero discriminant (repeated or non-reduced component)")
    poly = MPoly.const(1, PQX)
    for f in factors:
        poly = poly * f
    return ImplicitWeb(poly, factors, PQX, "x", "dual: dq/dp = -x", T, sources)


def legendre_degree_check(W: WebSpec, seed: int = 0) -> dict:
    L = legendre(W, seed)
    pq_degree = max(sum(e[:2]) for e in L.poly.terms)
    return {"directions": L.degree_in_s, "expected": W.k, "pq_degree": pq_degree, "ok": L.degree_in_s == W.k}


# ---------------------------------------------------------------------------
# discriminants


@dataclass
class Component:
    """A piece of the structural discriminant.

    Line components carry a dual line in (p, q, r); curve components are
    Gauss images G_F(C) of a primal curve C = {curve = 0} under foliation F,
    represented by sample points.
    """

    tag: str  # sigma_rad | sigma | sigma_l | O_check | gauss_image
    source: str
    line: LineInPlane | None = None
    foliation: Foliation | None = None
    curve: MPoly | None = None
    samples: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        return "line" if self.line is not None else "curve"

    def text(self) -> str:
        if self.line is not None:
            return self.line.text(PQR)
        return f"G({self.foliation.label()})({self.curve})"

    def to_json(self):
        out = {"kind": self.kind, "tags": sorted(set([self.tag] + self.tags)), "source": self.source, "equation": self.text()}
        if self.kind == "curve":
            out["samples"] = [[round(complex(p).real, 10), round(complex(p).imag, 10), round(complex(q).real, 10), round(complex(q).imag, 10)] for p, q in self.samples[:5]]
        return out


@dataclass
class DiscriminantReport:
    components: list
    resultant_pieces: list  # squarefree MPolys in (p, q) whose product is the radical
    implicit: ImplicitWeb
    flags: list = field(default_factory=list)
    agreement: bool | None = None
    witness: object = None

    def lines(self) -> list[LineInPlane]:
        return [c.line for c in self.components if c.line is not None]

    def to_json(self):
        return {
            "components": [c.to_json() for c in self.components],
            "resultant_factors": [str(p) for p in self.resultant_pieces],
            "agreement": self.agreement,
            "witness": self.witness,
            "flags": list(self.flags),
        }


def _pq(f: MPoly) -> MPoly:
    return MPoly(("p", "q"), {e[:2]: c for e, c in f.with_variables(PQX).terms.items()})


def discriminant_pieces(L: ImplicitWeb) -> list[MPoly]:
    """Squarefree parts of disc_x of each factor and of pairwise resultants."""
    pieces = []
    for f in L.factors:
        if f.degree("x") >= 2:
            pieces.append(_pq(discriminant_in(f, "x")))
    for f, g in combinations(L.factors, 2):
        pieces.append(_pq(resultant(f, g, "x")))
    out = []
    for P in pieces:
        if P.is_zero:
            raise WebError("identically zero discriminant")
        if P.is_constant:
            continue
        s = squarefree_part(P)
        if not any(s.same_up_to_unit(o) for o in out):
            out.append(s)
    return out


def discriminant_resultant(W: WebSpec | ImplicitWeb, seed: int = 0) -> MPoly:
    """disc_x(F_check), content-normalized (monic).

    Uses disc(f g) = disc(f) disc(g) Res(f, g)^2 up to a unit on the factors.
    """
    L = W if isinstance(W, ImplicitWeb) else legendre(W, seed)
    total = MPoly.const(1, ("p", "q"))
    for f in L.factors:
        if f.degree("x") >= 2:
            total = total * _pq(discriminant_in(f, "x"))
    for f, g in combinations(L.factors, 2):
        r = _pq(resultant(f, g, "x"))
        total = total * r * r
    if total.is_zero:
        raise WebError("identically zero discriminant")
    return total.monic()


def _dual_chart(line_or_point):
    """(p, q) of a primal line given by its coefficient triple, None if vertical."""
    al, be, ga = (complex(c) for c in line_or_point)
    if abs(be) < 1e-14 * max(abs(al), abs(ga), 1e-300):
        return None
    return (-al / be, -ga / be)


def sample_curve_points(curve: MPoly, n: int, rng) -> list:
    """Affine points on {curve(x, y, 1) = 0}."""
    c = curve.with_variables(XYZ)
    out = []
    tries = 0
    dy = c.degree("y")
    while len(out) < n and tries < 20 * n:
        tries += 1
        x0 = complex(rng.normal(), rng.normal())
        if dy >= 1:
            coeffs = np.zeros(dy + 1, dtype=complex)
            for e, v in c.terms.items():
                coeffs[e[1]] += complex(v) * x0 ** e[0]
            if abs(coeffs[-1]) < 1e-12:
                continue
            for y0 in find_roots(coeffs, rng).roots:
                out.append((x0, complex(y0)))
        else:
            # vertical lines x = const: solve in x instead
            dx = c.degree("x")
            coeffs = np.zeros(dx + 1, dtype=complex)
            for e, v in c.terms.items():
                coeffs[e[0]] += complex(v)
            y0 = complex(rng.normal(), rng.normal())
            for xr in find_roots(coeffs, rng).roots:
                out.append((complex(xr), y0))
    return out[:n]


def gauss_image_samples(F: Foliation, curve: MPoly, n: int, rng) -> list:
    pts = []
    for x0, y0 in sample_curve_points(curve, 3 * n, rng):
        try:
            img = gauss_map(F, (x0, y0, 1 + 0j))
        except FoliationError:
            continue
        pq = _dual_chart(img)
        if pq is not None and max(abs(pq[0]), abs(pq[1])) < 1e6:
            pts.append(pq)
        if len(pts) >= n:
            break
    return pts


def _fit_line(samples) -> LineInPlane | None:
    if len(samples) < 4:
        return None
    M = np.array([[p, q, 1] for p, q in samples], dtype=complex)
    M = M / np.max(np.abs(M), axis=1, keepdims=True)
    _, s, vh = np.linalg.svd(M)
    if s[-1] > 1e-9 * s[0]:
        return None
    return LineInPlane.make(*vh[-1].conj())


def _gauss_component(F: Foliation, curve: MPoly, tag_source: str, rng) -> Component:
    samples = gauss_image_samples(F, curve, 12, rng)
    comp = Component("gauss_image", tag_source, foliation=F, curve=curve.with_variables(XYZ), samples=samples)
    ln = _fit_line(samples)
    if ln is not None:
        comp.line = ln
    return comp


def _add(components: list, comp: Component) -> None:
    if comp.line is not None:
        for c in components:
            if c.line is not None and c.line.same_as(comp.line):
                c.tags.append(comp.tag)
                c.source += "; " + comp.source
                return
    components.append(comp)


def discriminant_structural(W: WebSpec, seed: int = 0, L: ImplicitWeb | None = None) -> DiscriminantReport:
    """Discriminant of Leg W assembled from the geometry of W.

    Collected: dual lines of special singularities of each foliation, Gauss
    images of the non-line part of each inflection divisor, dual lines of
    singular points on the web's lines, dual lines of pairwise line
    intersections, the dual line of the origin for homogeneous members, and
    Gauss images (under each foliation) of non-invariant tangency components.
    """
    L = L if L is not None else legendre(W, seed)
    if L.transform is not None:
        W = W.transformed(L.transform)
    rng = np.random.default_rng(seed + 99)
    comps: list[Component] = []
    flags: list[str] = []
    analyses = [FoliationAnalysis(F, seed) for F in W.foliations]
    for an in analyses:
        F = an.F
        for rec in an.singularities:
            if rec.status != "ok":
                flags.append(f"{F.label()}: inconclusive singularity {rec.text()}")
            if rec.special:
                tag = "sigma_rad" if rec.radial_order is not None else "sigma"
                _add(comps, Component(tag, f"{F.label()} {rec.text()} nu={rec.nu}", line=dual_line_of_point(rec.location)))
        fac = an.inflection_factors
        if fac.residual is not None and not fac.residual.is_constant:
            _add(comps, _gauss_component(F, fac.residual, f"{F.label()} inflection residual", rng))
        for ln, _k in fac.factors:
            if not is_invariant(F, ln):
                _add(comps, _gauss_component(F, ln.poly() if ln.exact else _float_line_poly(ln), f"{F.label()} inflection line {ln}", rng))
        if F.is_homogeneous():
            _add(comps, Component("O_check", f"{F.label()} homogeneous", line=LineInPlane.make(0, 1, 0)))
    for ln in W.lines:
        for an in analyses:
            F = an.F
            if is_invariant(F, ln):
                for rec in an.singularities:
                    if abs(ln.evaluate([complex(c) for c in rec.location])) < 1e-9:
                        _add(comps, Component("sigma_l", f"{F.label()} singular {rec.text()} on {ln}", line=dual_line_of_point(rec.location)))
            else:
                _add(comps, _gauss_component(F, ln.poly(), f"{F.label()} along non-invariant {ln}", rng))
    for l1, l2 in combinations(W.lines, 2):
        pt = np.cross(l1.complex_coeffs(), l2.complex_coeffs())
        if l1.exact and l2.exact:
            a, b = l1.coeffs, l2.coeffs
            pt = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        _add(comps, Component("sigma_l", f"{l1} meets {l2}", line=dual_line_of_point(pt)))
    for i, j in combinations(range(len(W.foliations)), 2):
        F, G = W.foliations[i], W.foliations[j]
        # every line through a common singular point is tangent to both
        # foliations there: the blown-up Gauss image of the invariant
        # tangency part contains its dual line
        for r1 in analyses[i].singularities:
            p1 = np.array([complex(c) for c in r1.location])
            for r2 in analyses[j].singularities:
                p2 = np.array([complex(c) for c in r2.location])
                if np.max(np.abs(np.cross(p1, p2))) < 1e-9 * np.max(np.abs(p1)) * np.max(np.abs(p2)):
                    _add(comps, Component("gauss_image", f"common singular point {r1.text()} of {F.label()} and {G.label()}", line=dual_line_of_point(r1.location)))
        T = tangency_divisor(F, G)
        fac = linear_factors(T, seed=seed)
        curves = []
        for ln, _k in fac.factors:
            if not (is_invariant(F, ln) and is_invariant(G, ln)):
                curves.append((ln.poly() if ln.exact else _float_line_poly(ln), f"tangency line {ln}"))
        if fac.residual is not None and not fac.residual.is_constant:
            curves.append((fac.residual, f"tangency residual {fac.residual}"))
        for curve, what in curves:
            # both Gauss images agree on the tangency locus; both are reported
            for H in (F, G):
                _add(comps, _gauss_component(H, curve, f"{what} of {F.label()} x {G.label()} via {H.label()}", rng))
    comps.sort(key=lambda c: (c.kind, c.text()))
    return DiscriminantReport(comps, discriminant_pieces(L), L, flags)


def _float_line_poly(ln: LineInPlane) -> MPoly:
    raise WebError(f"floating line {ln} needs an exact equation here")


# ---------------------------------------------------------------------------
# cross-check


def _factor_numeric(f: MPoly):
    """Dense complex coefficients of f(p, q, x) as an array [i_p, i_q, i_x]."""
    from .polycore import dense_coefficients

    return dense_coefficients(f, PQX)


def x_roots(coeffs: np.ndarray, p: complex, q: complex, rng) -> np.ndarray:
    n = coeffs.shape[2]
    pp = p ** np.arange(coeffs.shape[0])
    qq = q ** np.arange(coeffs.shape[1])
    c = np.einsum("ijk,i,j->k", coeffs, pp, qq)
    while len(c) > 1 and abs(c[-1]) < 1e-14 * max(np.max(np.abs(c)), 1e-300):
        c = c[:-1]
    if len(c) < 2:
        return np.zeros(0, dtype=complex)
    return find_roots(c, rng).roots


def on_component(comp: Component, p: complex, q: complex, rng, tol_line=1e-10, tol_curve=1e-6, L: ImplicitWeb | None = None) -> float:
    """Relative residual of (p, q) against the component (small = on it)."""
    if comp.line is not None:
        al, be, ga = comp.line.complex_coeffs()
        return abs(al * p + be * q + ga) / ((abs(al) + abs(be) + abs(ga)) * max(1.0, abs(p), abs(q)))
    coeffs = _factor_numeric(foliation_factor(comp.foliation))
    best = np.inf
    terms = comp.curve.to_complex_terms()
    norm = sum(abs(c) for _, c in terms)
    for x in x_roots(coeffs, p, q, rng):
        y = p * x + q
        pt = np.array([x, y, 1])
        s = np.max(np.abs(pt))
        pt = pt / s
        val = sum(c * pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2] for e, c in terms)
        best = min(best, abs(val) / norm)
    return best


def cross_check_discriminant(report: DiscriminantReport, samples: int = 200, seed: int = 0, tol: float = 1e-10) -> bool:
    """Structural lines divide the resultant radical, and the resultant's zero
    set is covered by structural components at sampled points."""
    rng = np.random.default_rng(seed + 5)
    pieces = report.resultant_pieces
    report.witness = None
    for comp in report.components:
        if comp.line is None or comp.line.is_infinity():
            continue
        if comp.line.exact:
            lp = MPoly(("p", "q"), {(1, 0): comp.line.alpha, (0, 1): comp.line.beta, (0, 0): comp.line.gamma})
            if not any(lp.divides(P) for P in pieces):
                report.agreement = False
                report.witness = {"reason": "structural line does not divide the resultant", "line": comp.text()}
                return False
    for comp in report.components:
        if comp.kind != "curve":
            continue
        for p, q in comp.samples[:5]:
            vals = []
            for P in pieces:
                t = P.to_complex_terms()
                v = abs(sum(c * p ** e[0] * q ** e[1] for e, c in t)) / sum(abs(c) * abs(p) ** e[0] * abs(q) ** e[1] for e, c in t)
                vals.append(v)
            if min(vals, default=np.inf) > 1e-6:
                report.agreement = False
                report.witness = {"reason": "Gauss-image point off the resultant", "point": [str(p), str(q)], "component": comp.text()}
                return False
    if not pieces:
        report.agreement = not any(c.line is not None and not c.line.is_infinity() for c in report.components)
        return report.agreement
    per_piece = max(1, samples // len(pieces))
    for P in pieces:
        dq = P.degree("q")
        n = 0
        tries = 0
        while n < per_piece and tries < 10 * per_piece:
            tries += 1
            if dq >= 1:
                p0 = complex(rng.normal(), rng.normal())
                c = np.zeros(dq + 1, dtype=complex)
                for e, v in P.terms.items():
                    c[e[1]] += complex(v) * p0 ** e[0]
                if abs(c[-1]) < 1e-12 * np.max(np.abs(c)):
                    continue
                pts = [(p0, complex(r)) for r in find_roots(c, rng).roots]
            else:
                q0 = complex(rng.normal(), rng.normal())
                c = np.zeros(P.degree("p") + 1, dtype=complex)
                for e, v in P.terms.items():
                    c[e[0]] += complex(v) * q0 ** e[1]
                pts = [(complex(r), q0) for r in find_roots(c, rng).roots]
            for p0, q0 in pts:
                n += 1
                res = [on_component(comp, p0, q0, rng) for comp in report.components]
                ok = any(
                    (r < tol if comp.kind == "line" and comp.line.exact else r < 1e-6) for r, comp in zip(res, report.components)
                )
                if not ok:
                    report.agreement = False
                    report.witness = {"reason": "resultant zero not covered", "p": str(p0), "q": str(q0), "piece": str(P)}
                    return False
    report.agreement = True
    return True
