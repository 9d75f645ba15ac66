"""Floating evaluation of exact polynomials with a running error bound."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .mpoly import CPoint, MPoly

UNIT_ROUNDOFF = 2.0**-53
EXTENDED_BITS = 106


@dataclass(frozen=True)
class Evaluation:
    value: complex
    bound: float  # absolute bound on |computed - exact|
    magnitude: float  # sum of |term| values, the natural scale
    precision: int

    @property
    def relative_bound(self) -> float:
        return self.bound / self.magnitude if self.magnitude else 0.0


def _gamma(n: int, u: float) -> float:
    return n * u / (1 - n * u)


def eval_complex(f: MPoly, point: CPoint | tuple, tol: float = 1e-12, extended: bool | None = None) -> Evaluation:
    """Evaluate ``f`` at a complex point, term by term with a rounding bound.

    The bound follows the gamma_n model: each term costs at most
    ``deg + 2`` roundings and the summation adds ``#terms``.  With
    ``extended=None`` the value is recomputed at 106 bits when the bound
    exceeds ``tol`` relative to the computed value (cancellation);
    ``extended=True`` forces it and ``False`` never extends.
    """
    coords = point.coordinates if isinstance(point, CPoint) else tuple(complex(c) for c in point)
    if len(coords) != len(f.variables):
        raise ValueError(f"point has {len(coords)} coordinates, polynomial has {len(f.variables)} variables")
    if f.is_zero:
        return Evaluation(0j, 0.0, 0.0, 53)
    if extended:
        return _eval_extended(f, coords)
    total = 0j
    mag = 0.0
    for e, c in f.terms.items():
        t = complex(c)
        for x, k in zip(coords, e):
            if k:
                t *= x**k
        total += t
        mag += abs(t)
    steps = f.total_degree() + 2 + len(f.terms)
    # complex roundings cost at most a factor 2 over the real model
    bound = 2.0 * _gamma(steps, UNIT_ROUNDOFF) * mag
    if extended is None and bound > tol * abs(total) and bound > 0:
        return _eval_extended(f, coords)
    return Evaluation(total, bound, mag, 53)


def _eval_extended(f: MPoly, coords) -> Evaluation:
    with mpmath.workprec(EXTENDED_BITS):
        xs = [mpmath.mpc(c) for c in coords]
        total = mpmath.mpc(0)
        mag = mpmath.mpf(0)
        for e, c in f.terms.items():
            t = c.to_mp()
            for x, k in zip(xs, e):
                if k:
                    t *= x**k
            total += t
            mag += abs(t)
        steps = f.total_degree() + 2 + len(f.terms)
        u = mpmath.mpf(2) ** (-EXTENDED_BITS)
        bound = 2 * steps * u * mag
        value = complex(total)
        # rounding the 106-bit result to a double adds half an ulp
        bound = float(bound) + abs(value) * UNIT_ROUNDOFF
        return Evaluation(value, bound, float(mag), EXTENDED_BITS)


def dense_coefficients(f: MPoly, order: tuple[str, ...]) -> np.ndarray:
    """Dense complex array ``C[i, j, ...]`` of coefficients in the given variable order."""
    f = f.with_variables(tuple(order) + tuple(v for v in f.variables if v not in order))
    extra = [k for k, v in enumerate(f.variables) if v not in order]
    shape = [max(f.degree(v), 0) + 1 for v in order]
    arr = np.zeros(shape, dtype=np.complex128)
    for e, c in f.terms.items():
        if any(e[k] for k in extra):
            raise ValueError("polynomial uses variables outside the requested order")
        arr[e[: len(order)]] += complex(c)
    return arr
