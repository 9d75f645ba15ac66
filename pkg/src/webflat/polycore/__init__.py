"""Exact polynomial arithmetic over the Gaussian rationals."""

from .gaussrat import ONE, ZERO, I, GaussRat, Rat, rationalize
from .mpoly import CPoint, MPoly, NotDivisible, PolySyntaxError, UndeclaredVariable, parse_poly
from .elim import (
    discriminant_in,
    gcd,
    gcd_squarefree,
    is_squarefree,
    lcm,
    radical_product,
    resultant,
    squarefree_part,
    yun,
)
from .numeric import Evaluation, dense_coefficients, eval_complex
