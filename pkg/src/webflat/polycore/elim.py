"""Resultants, discriminants, gcds and squarefree parts over Q(i)[vars].

Univariate-in-``var`` work is done on dense coefficient lists whose entries
are MPolys in the remaining variables, so everything stays exact.
"""

from __future__ import annotations

from functools import reduce

from .gaussrat import GaussRat
from .mpoly import MPoly, NotDivisible

Coeffs = list  # dense list of MPoly, index = degree


def _strip(a: Coeffs) -> Coeffs:
    while a and a[-1].is_zero:
        a.pop()
    return a


def _deg(a: Coeffs) -> int:
    return len(a) - 1


def _prem(a: Coeffs, b: Coeffs) -> Coeffs:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = _deg(b)
    lb = b[-1]
    delta = _deg(a) - db + 1
    zero = lb * 0
    steps = 0
    while r and _deg(r) >= db:
        lr = r[-1]
        shift = _deg(r) - db
        r = [c * lb for c in r]
        for k in range(db + 1):
            r[shift + k] = r[shift + k] - lr * b[k]
        r.pop()
        _strip(r)
        steps += 1
    if steps < delta:
        factor = lb ** (delta - steps)
        r = [c * factor for c in r]
    return r if r else []


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Sylvester resultant eliminating ``var``, via the subresultant PRS.

    Res(x-1, x+1) = 2.
    """
    f, g = f._unify(g)
    if var not in f.variables:
        raise ValueError(f"variable {var!r} occurs in neither polynomial")
    if f.is_zero or g.is_zero:
        return MPoly.zero(f.variables)
    if f.degree(var) < 1 and g.degree(var) < 1:
        raise ValueError(f"variable {var!r} occurs in neither polynomial")
    a = f.coeff_list(var)
    b = g.coeff_list(var)
    one = MPoly.const(1, f.variables)
    s = 1
    if _deg(a) < _deg(b):
        a, b = b, a
        if _deg(a) % 2 == 1 and _deg(b) % 2 == 1:
            s = -1
    if _deg(b) == 0:
        return b[0] ** _deg(a) * s
    gg = one
    h = one
    while True:
        delta = _deg(a) - _deg(b)
        if _deg(a) % 2 == 1 and _deg(b) % 2 == 1:
            s = -s
        r = _prem(a, b)
        a = b
        if not r:
            return MPoly.zero(f.variables)
        denom = gg * h ** delta
        b = [c.exact_div(denom) for c in r]
        gg = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = (gg ** delta).exact_div(h ** (delta - 1))
        if _deg(b) <= 0:
            break
    da = _deg(a)
    if da == 1:
        res = b[0]
    else:
        res = (b[0] ** da).exact_div(h ** (da - 1))
    return res * s


def discriminant_in(f: MPoly, var: str) -> MPoly:
    """(-1)^(n(n-1)/2) Res(f, df/dvar) / lc(f); disc_x(x^2-1) = 4."""
    n = f.degree(var)
    if n < 1:
        raise ValueError(f"polynomial is constant in {var!r}")
    r = resultant(f, f.diff(var), var)
    lc = f.coeffs_in(var)[n]
    d = r.exact_div(lc)
    return -d if (n * (n - 1) // 2) % 2 else d


# ---------------------------------------------------------------------------
# gcd


def _monomial_gcd_exp(f: MPoly) -> tuple[int, ...]:
    exps = list(f.terms)
    return tuple(min(col) for col in zip(*exps))


def _univariate_field_gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    # entries are constants; Euclid over the field with monic remainders
    while b:
        inv = b[-1].constant_value().inverse()
        b = [c.scale(inv) for c in b]
        r = list(a)
        db = _deg(b)
        while r and _deg(r) >= db:
            lr = r[-1]
            shift = _deg(r) - db
            for k in range(db + 1):
                r[shift + k] = r[shift + k] - b[k] * lr
            r.pop()
            _strip(r)
        a, b = b, r
    return a


def _content(coeffs: Coeffs) -> MPoly:
    nz = [c for c in coeffs if not c.is_zero]
    g = nz[0]
    for c in nz[1:]:
        if g.is_constant:
            break
        g = gcd(g, c)
    return g.monic() if not g.is_constant else MPoly.const(1, g.variables)


def _prs_gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    """Primitive PRS gcd of primitive univariate polynomials."""
    if _deg(a) < _deg(b):
        a, b = b, a
    while b:
        if _deg(b) == 0:
            return [b[0] * 0 + 1]
        r = _prem(a, b)
        a = b
        if not r:
            break
        cont = _content(r)
        b = [c.exact_div(cont) for c in r] if not cont.is_constant else r
    return a


def gcd(f: MPoly, g: MPoly) -> MPoly:
    """Monic (graded-lex) greatest common divisor."""
    f, g = f._unify(g)
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if f.is_constant or g.is_constant:
        return MPoly.const(1, f.variables)
    variables = f.variables
    # common monomial factor
    mf, mg = _monomial_gcd_exp(f), _monomial_gcd_exp(g)
    mono = tuple(min(x, y) for x, y in zip(mf, mg))
    if any(mf):
        f = f.divmod_exact(MPoly(variables, {mf: 1}))[0]
    if any(mg):
        g = g.divmod_exact(MPoly(variables, {mg: 1}))[0]
    core = _gcd_nomono(f, g)
    if any(mono):
        core = core.mul_monomial(mono)
    return core.monic()


def _gcd_nomono(f: MPoly, g: MPoly) -> MPoly:
    if f.is_constant or g.is_constant:
        return MPoly.const(1, f.variables)
    fv = set(f.free_variables())
    gv = set(g.free_variables())
    if not fv & gv:
        return MPoly.const(1, f.variables)
    # homogeneous inputs in >= 2 variables: dehomogenize the last common variable
    shared = [v for v in f.variables if v in fv | gv]
    if len(shared) >= 2 and f.is_homogeneous() and g.is_homogeneous():
        v = shared[-1]
        fd, gd = f.dehomogenize(v), g.dehomogenize(v)
        h = _gcd_nomono(fd, gd) if not (fd.is_constant or gd.is_constant) else MPoly.const(1, f.variables)
        if h.is_constant:
            return MPoly.const(1, f.variables)
        h = h.homogenize(v, h.total_degree())
        return h
    # choose main variable: one present in both, smallest max degree
    cands = [v for v in f.variables if v in fv and v in gv]
    main = min(cands, key=lambda v: (max(f.degree(v), g.degree(v)), f.variables.index(v)))
    # variables present in only one input must divide out through contents
    a = f.coeff_list(main)
    b = g.coeff_list(main)
    ca, cb = _content(a), _content(b)
    cont = gcd(ca, cb) if not (ca.is_constant or cb.is_constant) else MPoly.const(1, f.variables)
    if not ca.is_constant:
        a = [c.exact_div(ca) for c in a]
    if not cb.is_constant:
        b = [c.exact_div(cb) for c in b]
    if all(c.is_constant for c in a + b):
        h = _univariate_field_gcd(a, b)
    else:
        h = _prs_gcd(a, b)
    hp = MPoly.from_coeff_list(h, main, f.variables)
    hc = _content(h)
    if not hc.is_constant:
        hp = hp.exact_div(hc)
    return (hp * cont).monic()


def lcm(f: MPoly, g: MPoly) -> MPoly:
    return (f * g).exact_div(gcd(f, g)).monic()


def squarefree_part(f: MPoly) -> MPoly:
    """f / gcd(f, all partials), monic; squarefree_part(x^2*y) = x*y."""
    if f.is_zero or f.is_constant:
        return f.monic() if not f.is_zero else f
    g = f
    for v in f.free_variables():
        g = gcd(g, f.diff(v))
        if g.is_constant:
            return f.monic()
    return f.exact_div(g).monic()


def is_squarefree(f: MPoly) -> bool:
    if f.is_constant:
        return True
    g = f
    for v in f.free_variables():
        g = gcd(g, f.diff(v))
        if g.is_constant:
            return True
    return False


def gcd_squarefree(f: MPoly, mode, g: MPoly | None = None) -> MPoly:
    """Dispatcher: ``mode="gcd"`` needs ``g``; ``mode="squarefree"`` (or a variable
    name, for the squarefree part with respect to that variable only)."""
    if mode == "gcd":
        if g is None:
            raise ValueError("gcd mode needs a second polynomial")
        return gcd(f, g)
    if mode in ("squarefree", "total"):
        return squarefree_part(f)
    # squarefree with respect to one variable: f / gcd(f, df/dvar)
    d = f.diff(mode)
    if d.is_zero:
        return f.monic()
    return f.exact_div(gcd(f, d)).monic()


def yun(f: MPoly, var: str) -> list[tuple[MPoly, int]]:
    """Squarefree decomposition f = c * prod s_k^k for f univariate in ``var``.

    Factors independent of ``var`` are not separated from the constant.
    """
    out: list[tuple[MPoly, int]] = []
    if f.degree(var) < 1:
        return out
    fp = f.diff(var)
    a = gcd(f, fp)
    b = f.exact_div(a)
    c = fp.exact_div(a)
    d = c - b.diff(var)
    k = 1
    while b.degree(var) >= 1:
        a = gcd(b, d)
        if a.degree(var) >= 1:
            out.append((a.monic(), k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.diff(var)
        k += 1
    return out


def radical_product(polys) -> MPoly:
    """Squarefree polynomial whose zero set is the union of the inputs'."""
    result = None
    for p in polys:
        if p.is_constant:
            continue
        s = squarefree_part(p)
        result = s if result is None else lcm(result, s)
    if result is None:
        raise ValueError("no nonconstant polynomial given")
    return result


__all__ = [
    "resultant",
    "discriminant_in",
    "gcd",
    "lcm",
    "squarefree_part",
    "is_squarefree",
    "gcd_squarefree",
    "yun",
    "radical_product",
    "NotDivisible",
]
