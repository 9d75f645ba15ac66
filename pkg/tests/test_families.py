import pytest

from webflat.families import (
    ex3,
    family,
    fermat,
    homogeneous,
    random_foliation,
    tangency_report,
    theoremA_scenario,
    theoremB_scenario,
    line,
)
from webflat.polycore import parse_poly
from webflat.textio import InputError, parse_web, resolve_piece, resolve_web

XYZ = ("x", "y", "z")


@pytest.mark.parametrize("l,d,ok", [(2, 3, True), (3, 5, True), (2, 4, False), (3, 4, False)])
def test_fermat_tangency_rule(l, d, ok):
    assert tangency_report(fermat(l), fermat(d)).reduced_and_invariant is ok


def test_homogeneous_tangency_fixture():
    for l, d, want in [(3, 4, "x^3*y^3*(y - x)"), (3, 5, "x^3*y^3*(y^2 - x^2)"), (4, 5, "x^4*y^4*(y - x)")]:
        rep = tangency_report(homogeneous(l), homogeneous(d))
        # the line at infinity z is always a component for homogeneous pairs
        assert rep.divisor.same_up_to_unit(parse_poly(want, XYZ) * parse_poly("z", XYZ))


def test_ex3_rejects_invariant_T():
    with pytest.raises(ValueError):
        ex3(-1)
    assert ex3(2).k == 3


def test_random_foliation_is_seeded():
    a, b = random_foliation(2, 7), random_foliation(2, 7)
    assert a.same_as(b) and a.degree == 2
    assert not random_foliation(2, 8).same_as(a)


def test_family_names():
    assert family("fermat:3").degree == 3
    assert family("homog:4").label() == "homog:4"
    assert family("line:1,2,3").same_as(line(1, 2, 3))
    assert family("rand:2:7").same_as(random_foliation(2, 7))
    with pytest.raises(ValueError):
        family("nope:1")


def test_scenarios():
    _, rep = theoremA_scenario([line(1, -1, 0), line(1, 0, 0), fermat(2), fermat(3)])
    assert rep.all_pass
    _, rep = theoremB_scenario([line(1, -1, 0), homogeneous(3), homogeneous(4), homogeneous(5)])
    assert rep.all_pass
    _, rep = theoremA_scenario([fermat(2), fermat(4)])
    assert not rep.all_pass and rep.failed()


def test_web_text(tmp_path):
    W = parse_web("web { line: <1,-1,0>; foliation: fermat:2; foliation: foliation { a = y^3 - y; b = -(x^3 - x); }; }")
    assert W.k == 6
    f = tmp_path / "w.txt"
    f.write_text("web { line: <0,1,0>; foliation: homog:3; }")
    assert resolve_web([str(f), "fermat:2"]).k == 6
    with pytest.raises(InputError):
        parse_web("web { circle: <1,2,3>; }")
    with pytest.raises(InputError):
        resolve_piece("web { line: <1,2>; }")
