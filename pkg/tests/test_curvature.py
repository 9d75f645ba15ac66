import os
import subprocess
import sys

import numpy as np
import pytest
import sympy as sp

from webflat.curvature import (
    FlatnessConfig,
    curvature_at,
    curvature_expansion_check,
    eta_for_triple,
    flatness_test,
    homothety_scaling_check,
    numeric_web,
    slopes_at,
    web_curvature,
)
from webflat.curvature import kernels
from webflat.curvature.checks import PreconditionError, slope_partials_convergence
from webflat.families import fermat, homogeneous, line
from webflat.polycore import parse_poly
from webflat.webleg import WebSpec, legendre

PQX = ("p", "q", "x")
P0 = (0.3 + 0.1j, 0.7 - 0.2j)


def _oracle(f_expr, point):
    """Slope rows and reference K for the 3-web with first integrals q, q - p, f(q, q - p)."""
    p, q, X, Y = sp.symbols("p q X Y")
    f = f_expr(X, Y)
    fx, fy = sp.diff(f, X), sp.diff(f, Y)
    ms = [sp.Integer(0), sp.Integer(1), (fy / (fx + fy)).subs({X: q, Y: q - p})]
    Kref = sp.diff(sp.log(fx / fy), X, Y).subs({X: q, Y: q - p})
    pt = {p: point[0], q: point[1]}
    rows = np.array([[complex(sp.N(e.subs(pt))) for e in
                      (m, sp.diff(m, p), sp.diff(m, q), sp.diff(m, p, 2), sp.diff(m, p, q), sp.diff(m, q, 2))]
                     for m in ms]).T
    return rows, complex(sp.N(Kref.subs(pt)))


@pytest.mark.parametrize("f", [lambda X, Y: X**2 + Y**2 + X * Y, lambda X, Y: X**3 + sp.exp(Y)])
def test_kernel_matches_closed_form(f):
    rows, Kref = _oracle(f, (sp.Rational(3, 10), sp.Rational(7, 10)))
    K = web_curvature(rows)[0]
    assert abs(K - Kref) < 1e-12 * max(1, abs(Kref))


def test_oracle_sign_value():
    rows, Kref = _oracle(lambda X, Y: X**2 + Y**2 + X * Y, (sp.Rational(3, 10), sp.Rational(7, 10)))
    assert abs(Kref - 0.2716049382716049) < 1e-12
    assert abs(web_curvature(rows)[0] - Kref) < 1e-12


def test_end_to_end_from_implicit_web():
    # f = X^2 + XY + Y^2 at X = q, Y = q - p: third factor (f_x + f_y) x + f_y
    G = parse_poly("x*(x + 1)*((6*q - 3*p)*x + 3*q - 2*p)", PQX)
    s = curvature_at(numeric_web(G), (0.3, 0.7), np.random.default_rng(0))
    assert s.reliable
    assert abs(s.K - 0.2716049382716049) < 1e-10


def test_backends_agree():
    rng = np.random.default_rng(1)
    rows = rng.normal(size=(6, 7)) + 1j * rng.normal(size=(6, 7))
    tri = kernels.triples(7)
    outs = []
    for kern in (kernels._triples_numpy, kernels.triple_kernel_py, kernels._get_nb_kernel()):
        oK, oS = np.zeros(len(tri), dtype=complex), np.zeros(len(tri))
        outs.append((kern(*rows, tri, oK, oS)[0], oK.copy()))
    for K, per in outs[1:]:
        assert abs(K - outs[0][0]) < 1e-12 * abs(outs[0][0])
        assert np.allclose(per, outs[0][1], rtol=1e-12, atol=0)


def test_numpy_backend_selected_by_env():
    code = "from webflat._accel import backend_name; print(backend_name())"
    env = dict(os.environ, WEBFLAT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_permutation_invariance():
    rng = np.random.default_rng(2)
    rows = rng.normal(size=(6, 5)) + 1j * rng.normal(size=(6, 5))
    K = web_curvature(rows)[0]
    for _ in range(5):
        perm = rng.permutation(5)
        assert abs(web_curvature(rows[:, perm])[0] - K) < 1e-12 * abs(K)


def test_eta_is_symmetric_in_the_triple():
    L = legendre(WebSpec([], [fermat(2), fermat(3)]))
    fan = slopes_at(numeric_web(L), P0, np.random.default_rng(0))
    e1 = eta_for_triple(fan, (0, 1, 2))
    e2 = eta_for_triple(fan, (2, 0, 1))
    assert abs(e1.A - e2.A) < 1e-10 * (1 + abs(e1.A))
    assert abs(e1.B - e2.B) < 1e-10 * (1 + abs(e1.B))
    assert e1.consistency_residual < 1e-9


def test_root_sum_identity():
    L = legendre(WebSpec([line(1, -1, 0)], [fermat(2), fermat(3)]))
    Wn = numeric_web(L)
    fan = slopes_at(Wn, P0, np.random.default_rng(0))
    # sum of slopes is minus the sum of x-roots, read off the top two coefficients of each factor
    assert fan.slopes.shape == (6,)
    assert np.max(np.abs(fan.residuals)) < 1e-10


def test_trivial_web_is_flat():
    G = parse_poly("x^3 - x", PQX)
    s = curvature_at(numeric_web(G), P0, np.random.default_rng(0))
    assert abs(s.K) < 1e-12


def test_homothety_identity():
    W = WebSpec([], [homogeneous(3), homogeneous(4)])
    L = legendre(W)
    assert homothety_scaling_check(W, (0.4 + 0.3j, -0.7 + 0.2j), 2, L=L) < 1e-8
    with pytest.raises(PreconditionError):
        homothety_scaling_check(WebSpec([], [fermat(2)]), (0.4, 0.5), 2)


def test_expansion_identity_and_negative_control():
    parts = [WebSpec([line(1, -1, 0), line(1, 0, 0)], []), WebSpec([], [fermat(2)])]
    ok = curvature_expansion_check(parts, P0)
    bad = curvature_expansion_check(parts, P0, perturb=1e-3)
    assert ok.residual < 1e-8
    assert bad.residual > 1e-6


def test_slope_partials_second_order():
    L = legendre(WebSpec([], [fermat(2), fermat(3)]))
    res = slope_partials_convergence(L, P0)
    assert res["all_converged"], res


def test_small_flatness_verdicts():
    cfg = FlatnessConfig(samples=20, seed=0)
    assert flatness_test(WebSpec([], [fermat(2), fermat(3)]), cfg).status == "flat-consistent"
    v = flatness_test(WebSpec([line(1, 2, 3)], [fermat(2)]), cfg)
    assert v.status == "non-flat" and v.witness is not None
