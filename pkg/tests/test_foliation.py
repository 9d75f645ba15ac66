import pytest
import sympy as sp

from conftest import to_sympy
from webflat.families import fermat, homogeneous, random_foliation
from webflat.foliation import (
    FoliationAnalysis,
    FoliationError,
    gauss_map,
    inflection_divisor,
    invariant_lines,
    is_convex,
    is_invariant,
    is_reduced_convex,
    parse_foliation,
    tangency_divisor,
)
from webflat.lines import LineInPlane, ProjectiveMap, linear_factors
from webflat.polycore import GaussRat, parse_poly

XYZ = ("x", "y", "z")


@pytest.mark.parametrize("d", [2, 3, 4])
def test_inflection_degree(d):
    for F in (fermat(d), homogeneous(d), random_foliation(d, 3)):
        I = inflection_divisor(F)
        assert I.is_homogeneous() and I.total_degree() == 3 * d


def test_fermat2_inflection_against_sympy_factorization():
    I = to_sympy(inflection_divisor(fermat(2)))
    x, y, z = sp.symbols("x y z")
    expected = x * y * z * (x - z) * (y - z) * (x - y)
    assert sp.simplify(I / expected).is_constant()
    fac = sp.factor_list(I)[1]
    assert all(sp.Poly(f, x, y, z).total_degree() == 1 for f, _ in fac)


def test_fermat2_invariant_lines():
    lines = invariant_lines(fermat(2))
    want = [LineInPlane.make(*c) for c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, -1), (0, 1, -1), (1, -1, 0)]]
    assert len(lines) == 6
    assert all(any(il.line.same_as(w) for il in lines) for w in want)
    assert is_convex(fermat(2)) and is_reduced_convex(fermat(2))


def test_invariance():
    F = fermat(2)
    assert is_invariant(F, LineInPlane.make(1, -1, 0))
    assert not is_invariant(F, LineInPlane.make(1, 1, 1))


def test_fermat2_radial_points():
    recs = FoliationAnalysis(fermat(2)).singularities
    assert sum(r.multiplicity for r in recs) == 2 * 2 + 2 + 1  # d^2 + d + 1
    radial = [r for r in recs if r.radial_order is not None]
    assert len(radial) == 4


def test_homogeneous_origin_special():
    an = FoliationAnalysis(homogeneous(3))
    origin = [r for r in an.singularities if r.text() == "[0:0:1]"]
    assert len(origin) == 1 and origin[0].nu == 3 and origin[0].special
    assert an.convexity[0] is True


def test_random_foliation_not_convex():
    F = random_foliation(2, 42)
    convex, _, witness = FoliationAnalysis(F).convexity
    assert convex is False and witness is not None
    # oracle: sympy finds a factor of degree > 1 over Q(i)
    fac = sp.factor_list(to_sympy(inflection_divisor(F)), extension=sp.I)[1]
    x, y, z = sp.symbols("x y z")
    assert any(sp.Poly(f, x, y, z).total_degree() > 1 for f, _ in fac)


def test_gauss_map_is_tangent_line():
    F = fermat(2)
    pt = (GaussRat(2), GaussRat(3), GaussRat(1))
    img = gauss_map(F, pt)
    # the tangent line passes through the point
    assert sum(GaussRat.coerce(a) * b for a, b in zip(img, pt)) == GaussRat(0)
    with pytest.raises(FoliationError):
        gauss_map(F, (GaussRat(0), GaussRat(0), GaussRat(1)))


def test_tangency_degree_and_parse():
    T = tangency_divisor(fermat(2), fermat(3))
    assert T.total_degree() == 2 + 3 + 1
    G = parse_foliation("foliation { a = y^2 - y; b = -(x^2 - x); }")
    assert G.same_as(fermat(2))
    V = parse_foliation("vectorfield { A = x^2 - x; B = y^2 - y; }")
    assert V.same_as(fermat(2))
    with pytest.raises(FoliationError):
        tangency_divisor(fermat(2), G)


def test_projective_change_preserves_inflection_degree():
    F = fermat(3)
    T = ProjectiveMap.random(5)
    G = F.transformed(T)
    assert inflection_divisor(G).total_degree() == 9
    assert linear_factors(inflection_divisor(G)).fully_split


def test_parse_errors():
    with pytest.raises(FoliationError):
        parse_foliation("foliation { a = y; }")
    with pytest.raises(FoliationError):
        parse_foliation("foliation { a = y; b = x;")
