import pytest

from webflat.families import fermat, homogeneous, line
from webflat.polycore import parse_poly
from webflat.webleg import (
    WebError,
    WebSpec,
    cross_check_discriminant,
    discriminant_resultant,
    discriminant_structural,
    legendre,
    legendre_degree_check,
    product,
)

PQX = ("p", "q", "x")


def test_fermat2_dual():
    L = legendre(WebSpec([], [fermat(2)]))
    assert L.transform is None
    assert L.poly == parse_poly("(p^2 - p)*x^2 + 2*p*q*x + q^2 - q", PQX)


def test_fermat2_discriminants():
    W = WebSpec([], [fermat(2)])
    D = discriminant_resultant(W)
    assert D.same_up_to_unit(parse_poly("p*q*(p + q - 1)", ("p", "q")))
    rep = discriminant_structural(W)
    texts = sorted(c.text() for c in rep.components if c.line is not None)
    assert [t for t in texts if t != "r"] == ["p", "p + q - r", "q"]
    assert cross_check_discriminant(rep)


def test_degree_count():
    W = product(line(1, -1, 0), fermat(2), fermat(3))
    chk = legendre_degree_check(W)
    assert chk["ok"] and chk["directions"] == 6


def test_line_factor_is_linear_in_x():
    L = legendre(WebSpec([line(1, 2, 3)], []))
    assert L.degree_in_s == 1


def test_repeated_component_rejected():
    with pytest.raises(WebError, match="identically zero discriminant"):
        product(fermat(2), fermat(2))
    with pytest.raises(WebError, match="identically zero discriminant"):
        product(line(1, 1, 0), line(2, 2, 0))


def test_line_at_infinity_forces_chart_change():
    W = product(line(0, 0, 1), fermat(2))
    L = legendre(W, seed=3)
    assert L.transform is not None
    assert L.degree_in_s == 3
    assert legendre(W, seed=3).poly == L.poly  # seeded, so repeatable


def test_homogeneous_structural_has_dual_of_origin():
    rep = discriminant_structural(WebSpec([], [homogeneous(3)]))
    # the dual of the origin coincides with the special-point line and is merged into it
    assert any("O_check" in [c.tag] + c.tags and c.text() == "q" for c in rep.components)
    assert cross_check_discriminant(rep)
