import sympy as sp
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from conftest import to_sympy
from webflat.polycore import (
    GaussRat,
    MPoly,
    NotDivisible,
    PolySyntaxError,
    UndeclaredVariable,
    discriminant_in,
    eval_complex,
    gcd,
    is_squarefree,
    parse_poly,
    resultant,
    squarefree_part,
    yun,
)

XY = ("x", "y")
PQX = ("p", "q", "x")

small = st.integers(-4, 4)


@st.composite
def polys(draw, variables=XY, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(1, 5))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in variables)
        if sum(e) <= max_deg:
            terms[e] = GaussRat(draw(small), draw(st.integers(-1, 1)))
    return MPoly(variables, {e: c for e, c in terms.items() if c != GaussRat(0)})


def test_parse_and_print_roundtrip():
    f = parse_poly("y^2 - y - p*(x^2 - x)", ("p", "x", "y"))
    assert len(f.terms) == 4
    assert parse_poly(str(f), ("p", "x", "y")) == f


def test_gaussian_coefficients():
    f = parse_poly("(1+2*i)*x - 1/3*i", XY)
    assert f.terms[(1, 0)] == GaussRat(1, 2)
    assert f.terms[(0, 0)] == GaussRat(0, -1) / 3
    assert parse_poly(str(f), XY) == f


def test_parse_errors():
    with pytest.raises(PolySyntaxError):
        parse_poly("x +* y", XY)
    with pytest.raises(UndeclaredVariable):
        parse_poly("x + w", XY)


def test_exact_division():
    f = parse_poly("x^2 - y^2", XY)
    assert f.exact_div(parse_poly("x - y", XY)) == parse_poly("x + y", XY)
    with pytest.raises(NotDivisible):
        f.exact_div(parse_poly("x - 2*y", XY))


def test_discriminant_normalization():
    x = ("x",)
    assert discriminant_in(parse_poly("x^2 - 1", x), "x").constant_value() == GaussRat(4)
    assert resultant(parse_poly("x^2 - 1", x), parse_poly("2*x", x), "x").constant_value() == GaussRat(-4)


def test_fermat_dual_discriminant():
    F = parse_poly("(p^2 - p)*x^2 + 2*p*q*x + q^2 - q", PQX)
    D = discriminant_in(F, "x")
    assert D.same_up_to_unit(parse_poly("p*q*(p + q - 1)", PQX))


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_ring_ops_match_sympy(f, g):
    assert sp.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0
    assert sp.expand(to_sympy(f + g) - to_sympy(f) - to_sympy(g)) == 0


@settings(max_examples=30, deadline=None)
@given(polys(), polys())
def test_resultant_matches_sympy(f, g):
    if f.degree("x") < 1 or g.degree("x") < 1:
        return
    R = resultant(f, g, "x")
    x = sp.Symbol("x")
    # Sylvester determinant: sympy.resultant flips the sign when deg f < deg g
    ref = sylvester(to_sympy(f), to_sympy(g), x, 1).det()
    assert sp.expand(to_sympy(R) - ref) == 0


@settings(max_examples=30, deadline=None)
@given(polys(), polys(), polys())
def test_gcd_contains_common_factor(f, g, h):
    if h.is_zero or h.is_constant or f.is_zero or g.is_zero:
        return
    d = gcd(f * h, g * h)
    assert h.divides(d)
    ref = sp.gcd(to_sympy(f * h), to_sympy(g * h))
    assert sp.simplify(to_sympy(d) / ref).is_constant()


@settings(max_examples=30, deadline=None)
@given(polys(("x",), max_deg=2), polys(("x",), max_deg=2))
def test_yun_reassembles(f, g):
    # univariate: yun keeps factors free of the variable inside the unit
    if f.degree("x") < 1:
        return
    h = f * f * g if not g.is_zero else f * f
    parts = yun(h, "x")
    prod = MPoly.const(1, ("x",))
    for P, k in parts:
        for _ in range(k):
            prod = prod * P
    assert prod.same_up_to_unit(h)
    x = sp.Symbol("x")
    ref = sp.sqf_list(to_sympy(h), x, extension=sp.I)[1]
    assert sorted(k for _, k in parts) == sorted(k for P, k in ref if sp.degree(P, x) > 0)
    assert is_squarefree(squarefree_part(h))


def test_eval_complex_bound():
    f = parse_poly("x^3 - 3*x*y + y^2", XY)
    ev = eval_complex(f, (0.5 + 0.25j, -1.5j))
    exact = (0.5 + 0.25j) ** 3 - 3 * (0.5 + 0.25j) * (-1.5j) + (-1.5j) ** 2
    assert abs(ev.value - exact) <= max(ev.relative_bound * abs(exact), 1e-15)
