import sympy as sp

from webflat.polycore import MPoly


def to_sympy(f: MPoly):
    """sympy expression of an MPoly; ``i`` in printed coefficients is the imaginary unit."""
    syms = {v: sp.Symbol(v) for v in f.variables}
    syms["i"] = sp.I
    return sp.expand(sp.sympify(str(f), locals=syms))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
