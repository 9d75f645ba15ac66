"""Example foliations and webs, and the hypothesis checks of the two product theorems."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .foliation import (
    Foliation,
    FoliationError,
    is_convex,
    is_invariant,
    is_reduced_convex,
    new_foliation,
    tangency_divisor,
)
from .lines import XYZ, LineInPlane, linear_factors
from .polycore import GaussRat, MPoly, parse_poly
from .webleg import WebSpec

XY = ("x", "y")


def _p(text: str) -> MPoly:
    return parse_poly(text, XY)


def fermat(d: int) -> Foliation:
    """The foliation of (x^d - x) d/dx + (y^d - y) d/dy."""
    if d < 2:
        raise ValueError("fermat foliations need d >= 2")
    return new_foliation(_p(f"y^{d} - y"), _p(f"-(x^{d} - x)"), f"fermat:{d}")


def homogeneous(d: int) -> Foliation:
    """The foliation of y^d dx - x^d dy."""
    if d < 2:
        raise ValueError("homogeneous foliations need d >= 2")
    return new_foliation(_p(f"y^{d}"), _p(f"-x^{d}"), f"homog:{d}")


def line(alpha, beta, gamma) -> LineInPlane:
    return LineInPlane.make(alpha, beta, gamma)


def ex3_pair(lam) -> tuple[Foliation, Foliation]:
    lam = GaussRat.coerce(lam)
    if lam == GaussRat(0):
        raise ValueError("lambda must be nonzero")
    x, y = MPoly.var("x", XY), MPoly.var("y", XY)
    F1 = new_foliation(y.scale(lam), x, f"ex3a:{lam}")
    F2 = new_foliation(y * y, x * x, "ex3b")
    return F1, F2


def ex3(lam) -> WebSpec:
    """The 3-web of lam y dx + x dy and y^2 dx + x^2 dy.

    The tangency line T = {lam x - y = 0} must be transversal; values of lam
    that make it invariant are rejected.
    """
    F1, F2 = ex3_pair(lam)
    T = LineInPlane.make(GaussRat.coerce(lam), -1, 0)
    for F in (F1, F2):
        if is_invariant(F, T):
            raise ValueError(f"lambda = {GaussRat.coerce(lam)} makes T = {T} invariant by {F.label()}")
    return WebSpec([], [F1, F2])


def random_foliation(d: int, seed: int) -> Foliation:
    """Degree-d foliation with small Gaussian-rational coefficients drawn from ``seed``."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    rnd = random.Random(seed)
    monos = [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]
    for _ in range(100):
        terms_a, terms_b = {}, {}
        for e in monos:
            terms_a[e] = GaussRat(rnd.randint(-5, 5), rnd.randint(-2, 2))
            terms_b[e] = GaussRat(rnd.randint(-5, 5), rnd.randint(-2, 2))
        a = MPoly(XY, {e: c for e, c in terms_a.items() if c != GaussRat(0)})
        b = MPoly(XY, {e: c for e, c in terms_b.items() if c != GaussRat(0)})
        try:
            F = new_foliation(a, b, f"rand:{d}:{seed}")
        except FoliationError:
            continue
        if F.degree == d:
            return F
    raise RuntimeError("could not draw a foliation of the requested degree")


# ---------------------------------------------------------------------------
# tangency structure


@dataclass
class TangencyReport:
    pair: tuple
    divisor: MPoly
    lines: list  # (LineInPlane, multiplicity)
    fully_split: bool
    reduced: bool
    invariant: bool  # every line invariant by both members
    certification: str
    non_invariant: list = field(default_factory=list)

    @property
    def reduced_and_invariant(self) -> bool:
        return self.fully_split and self.reduced and self.invariant


def tangency_report(F: Foliation, G: Foliation, seed: int = 0) -> TangencyReport:
    H = tangency_divisor(F, G)
    fac = linear_factors(H, seed)
    bad = [ln for ln, _ in fac.factors if not (is_invariant(F, ln) and is_invariant(G, ln))]
    return TangencyReport(
        (F.label(), G.label()),
        H,
        list(fac.factors),
        fac.fully_split,
        fac.fully_split and all(k == 1 for _, k in fac.factors),
        not bad,
        fac.certification,
        bad,
    )


@dataclass
class Hypothesis:
    name: str
    passed: bool | None
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class HypothesisReport:
    theorem: str
    checks: list

    @property
    def all_pass(self) -> bool:
        return all(h.passed is True for h in self.checks)

    def failed(self) -> list:
        return [h for h in self.checks if h.passed is not True]

    def to_json(self):
        return {"theorem": self.theorem, "all_pass": self.all_pass, "checks": [h.to_json() for h in self.checks]}


def _split(pieces):
    lines, fols = [], []
    for p in pieces:
        if isinstance(p, LineInPlane):
            lines.append(p)
        elif isinstance(p, Foliation):
            fols.append(p)
        elif isinstance(p, WebSpec):
            lines += p.lines
            fols += p.foliations
        else:
            raise TypeError(f"unexpected scenario piece {type(p).__name__}")
    return lines, fols


def _scenario(pieces, theorem: str, seed: int):
    lines, fols = _split(pieces)
    W = WebSpec(lines, fols)
    checks = []
    for F in sorted(fols, key=lambda F: F.label()):
        if theorem == "A":
            ok = is_reduced_convex(F, seed)
            checks.append(Hypothesis(f"reduced convex {F.label()}", ok))
        else:
            conv = is_convex(F, seed)
            checks.append(Hypothesis(f"convex {F.label()}", conv))
            checks.append(Hypothesis(f"homogeneous {F.label()}", F.is_homogeneous()))
    ordered = sorted(fols, key=lambda F: F.label())
    for F, G in combinations(ordered, 2):
        rep = tangency_report(F, G, seed)
        if theorem == "A":
            ok = rep.fully_split and rep.invariant
            why = "" if ok else ("not a product of lines" if not rep.fully_split else
                                 "non-invariant lines " + ", ".join(str(ln) for ln in rep.non_invariant))
        else:
            inf = LineInPlane.make(0, 0, 1)
            has_inf = any(ln.same_as(inf) for ln, _ in rep.lines)
            ok = rep.fully_split and rep.invariant and has_inf
            why = "" if ok else ("L_inf not in the tangency" if not has_inf else
                                 "not a product of lines" if not rep.fully_split else
                                 "non-invariant lines " + ", ".join(str(ln) for ln in rep.non_invariant))
        if ok and rep.certification != "exact":
            why = rep.certification
        checks.append(Hypothesis(f"tangency {F.label()} {G.label()} invariant lines", ok, why))
    for ln in sorted(lines, key=lambda ln: ln.sort_key()):
        bad = [F.label() for F in ordered if not is_invariant(F, ln)]
        checks.append(Hypothesis(f"line {ln} invariant by all", not bad, ", ".join(bad)))
    return W, HypothesisReport(theorem, checks)


def theoremA_scenario(pieces, seed: int = 0):
    """Web of lines and reduced convex foliations with the product-theorem hypotheses checked."""
    return _scenario(pieces, "A", seed)


def theoremB_scenario(pieces, seed: int = 0):
    """Web of lines and convex homogeneous foliations with the hypotheses checked."""
    return _scenario(pieces, "B", seed)


# ---------------------------------------------------------------------------
# textual family names


def family(spec: str):
    """Build a member from ``fermat:d``, ``homog:d``, ``ex3:lambda``, ``line:a,b,c`` or ``rand:d:seed``."""
    kind, _, rest = spec.strip().partition(":")
    try:
        if kind == "fermat":
            return fermat(int(rest))
        if kind in ("homog", "homogeneous"):
            return homogeneous(int(rest))
        if kind == "ex3":
            return ex3(_scalar(rest))
        if kind == "line":
            a, b, c = (_scalar(t) for t in rest.split(","))
            return line(a, b, c)
        if kind == "rand":
            d, s = rest.split(":")
            return random_foliation(int(d), int(s))
    except (ValueError, TypeError) as e:
        raise ValueError(f"bad family spec {spec!r}: {e}") from e
    raise ValueError(f"unknown family {kind!r} in {spec!r}")


def _scalar(text: str):
    c = parse_poly(text.strip(), XYZ)
    if not c.is_constant:
        raise ValueError(f"{text!r} is not a constant")
    return c.constant_value()
