"""``webflat`` command line: analyze, legendre, flatness and paper-suite."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from ._accel import backend_name
from .curvature import FLAT, NONFLAT, FlatnessConfig, flatness_test
from .foliation import FoliationAnalysis
from .textio import InputError, resolve_foliation, resolve_web
from .webleg import (
    WebError,
    cross_check_discriminant,
    discriminant_resultant,
    discriminant_structural,
    legendre,
    legendre_degree_check,
)

SCHEMA = "webflat-report/1"

EXIT_FLAT, EXIT_NONFLAT, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE = 64  # bad flags or environment values
EXIT_INPUT = 65  # unreadable or rejected input

VERDICT_EXIT = {FLAT: EXIT_FLAT, NONFLAT: EXIT_NONFLAT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    samples: int = 200
    seed: int = 0
    flat_tol: float = 1e-8
    nonflat_floor: float = 1e-4
    precision: int = 106
    probes: int = 4
    out: str | None = None
    only: list | None = None

    def validate(self):
        if self.samples <= 0 or self.precision <= 0 or self.probes <= 0:
            raise UsageError("samples, precision and probes must be positive")
        if not (self.flat_tol > 0 and self.nonflat_floor > 0):
            raise UsageError("tolerances must be positive")
        if self.flat_tol >= self.nonflat_floor:
            raise UsageError("flat-tol must be below nonflat-floor")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")

    def flatness(self) -> FlatnessConfig:
        return FlatnessConfig(
            samples=self.samples,
            seed=self.seed,
            flat_tol=self.flat_tol,
            nonflat_floor=self.nonflat_floor,
            probe_distances=tuple(10.0 ** -(2 + i) for i in range(self.probes)),
            precision=self.precision,
        )

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "inputs": list(self.inputs),
            "samples": self.samples,
            "seed": self.seed,
            "flat_tol": self.flat_tol,
            "nonflat_floor": self.nonflat_floor,
            "precision_bits": self.precision,
            "probe_decades": self.probes,
            "backend": backend_name(),
        }
        if self.only:
            out["only"] = sorted(self.only)
        return out


# (flag, env suffix, type, default)
_NUMERIC = [
    ("samples", "SAMPLES", int, 200),
    ("seed", "SEED", int, 0),
    ("flat_tol", "FLAT_TOL", float, 1e-8),
    ("nonflat_floor", "NONFLAT_FLOOR", float, 1e-4),
    ("precision", "PRECISION", int, 106),
    ("probes", "PROBES", int, 4),
]


def _env_default(suffix, typ, default, environ):
    raw = environ.get("WEBFLAT_" + suffix)
    if raw is None or raw.strip() == "":
        return default
    try:
        return typ(raw)
    except ValueError:
        raise UsageError(f"WEBFLAT_{suffix}={raw!r} is not a valid {typ.__name__}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, metavar="N", help="generic curvature samples (default 200)")
    common.add_argument("--seed", type=int, metavar="S", help="random seed (default 0)")
    common.add_argument("--flat-tol", type=float, metavar="T", help="relative |K| below which a sample is flat (default 1e-8)")
    common.add_argument("--nonflat-floor", type=float, metavar="T", help="relative |K| above which a sample is a witness (default 1e-4)")
    common.add_argument("--precision", type=int, metavar="BITS", help="working precision at probe points (default 106)")
    common.add_argument("--probes", type=int, metavar="D", help="probe decades toward each discriminant component (default 4)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json"], default="json", help="report format (json only)")

    ap = _Parser(prog="webflat", description="Flatness of dual webs of products of lines and foliations.")
    ap.add_argument("--version", action="version", version=f"webflat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="divisors, invariant lines and singularities of one foliation")
    a.add_argument("inputs", nargs="+", help="family name, inline block or file")
    lg = sub.add_parser("legendre", parents=[common], help="Legendre transform and discriminants of a web")
    lg.add_argument("inputs", nargs="+", help="web pieces: family names, inline blocks or files")
    fl = sub.add_parser("flatness", parents=[common], help="flatness verdict for the dual web (exit 0/1/2)")
    fl.add_argument("inputs", nargs="+", help="web pieces: family names, inline blocks or files")
    ps = sub.add_parser("paper-suite", parents=[common], help="run the reproduction criteria")
    ps.add_argument("--only", type=int, action="append", metavar="N", help="run only criterion N (repeatable)")
    return ap


def config_from_args(ns, environ=None) -> RunConfig:
    """Flags override WEBFLAT_* environment values, which override defaults."""
    environ = os.environ if environ is None else environ
    vals = {}
    for name, suffix, typ, default in _NUMERIC:
        flag = getattr(ns, name, None)
        vals[name] = flag if flag is not None else _env_default(suffix, typ, default, environ)
    out = ns.out if ns.out is not None else (environ.get("WEBFLAT_OUT") or None)
    fmt = environ.get("WEBFLAT_FORMAT", "json")
    if fmt != "json":
        raise UsageError(f"unsupported format {fmt!r}")
    cfg = RunConfig(ns.command, list(getattr(ns, "inputs", []) or []), out=out, only=getattr(ns, "only", None), **vals)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig) -> tuple[dict, int]:
    F = resolve_foliation(cfg.inputs)
    an = FoliationAnalysis(F, cfg.seed)
    fac = an.inflection_factors
    convex, reduced, witness = an.convexity
    sing = sorted(an.singularities, key=lambda r: r.sort_key())
    payload = {
        "foliation": F.label(),
        "degree": F.degree,
        "inflection": {
            "divisor": str(an.inflection),
            "degree": an.inflection.total_degree(),
            "linear_factors": [{"line": ln.text(), "multiplicity": k, "exact": ln.exact} for ln, k in fac.factors],
            "residual": None if fac.residual is None else str(fac.residual),
            "fully_split": fac.fully_split,
            "certification": fac.certification,
        },
        "invariant_lines": [il.to_json() for il in an.invariant_lines],
        "convexity": {
            "convex": convex,
            "reduced_convex": reduced,
            "witness": None if witness is None else str(witness),
        },
        "singularities": [r.to_json() for r in sing],
    }
    return payload, 0


def cmd_legendre(cfg: RunConfig) -> tuple[dict, int]:
    W = resolve_web(cfg.inputs)
    L = legendre(W, cfg.seed)
    report = discriminant_structural(W, cfg.seed, L)
    agreement = cross_check_discriminant(report, seed=cfg.seed)
    disc = discriminant_resultant(L)
    payload = {
        "web": W.labels(),
        "k": W.k,
        "dual": str(L.poly),
        "factors": [{"source": s, "factor": str(f)} for s, f in zip(L.sources, L.factors)],
        "degree": legendre_degree_check(W, cfg.seed),
        "transform": None if L.transform is None else [[str(c) for c in row] for row in L.transform.matrix],
        "discriminant": {
            "resultant": str(disc),
            "structural": report.to_json(),
            "agreement": agreement,
        },
    }
    return payload, 0


def cmd_flatness(cfg: RunConfig) -> tuple[dict, int]:
    W = resolve_web(cfg.inputs)
    verdict = flatness_test(W, cfg.flatness())
    payload = {"web": W.labels(), "k": W.k, "verdict": verdict.to_json()}
    return payload, VERDICT_EXIT.get(verdict.status, EXIT_INCONCLUSIVE)


def cmd_paper_suite(cfg: RunConfig, progress=None) -> tuple[dict, int]:
    from .suite import CRITERIA, SuiteConfig, run_suite

    if cfg.only and any(not 1 <= n <= len(CRITERIA) for n in cfg.only):
        raise UsageError(f"--only takes criterion numbers 1..{len(CRITERIA)}")
    scfg = SuiteConfig(cfg.samples, cfg.seed, cfg.flat_tol, cfg.nonflat_floor, cfg.precision, cfg.probes)
    results = run_suite(scfg, only=cfg.only, progress=progress)
    ok = all(r.passed for r in results)
    payload = {
        "all_pass": ok,
        "criteria": [r.to_json() for r in results],
        "summary": [r.line() for r in results],
    }
    return payload, 0 if ok else 1


COMMANDS = {"analyze": cmd_analyze, "legendre": cmd_legendre, "flatness": cmd_flatness, "paper-suite": cmd_paper_suite}


def render(cfg: RunConfig, payload: dict) -> str:
    doc = {"schema": SCHEMA, "tool": {"name": "webflat", "version": __version__}, "config": cfg.to_json(), "result": payload}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=True) + "\n"


def main(argv=None, environ=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns, environ)
    except UsageError as e:
        print(f"webflat: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "paper-suite":
            payload, code = cmd_paper_suite(cfg, progress=lambda r: print(r.line(), file=sys.stderr, flush=True))
        else:
            payload, code = COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"webflat: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, WebError, ValueError) as e:
        print(f"webflat: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = render(cfg, payload)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
