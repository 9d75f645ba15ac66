"""Sampling-based flatness verdicts for dual webs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..webleg import WebSpec, discriminant_structural, legendre
from .evaluate import CurvatureSample, curvature_at
from .slopes import SlopeSignal, numeric_web, slopes_at

FLAT = "flat-consistent"
NONFLAT = "non-flat"
INCONCLUSIVE = "inconclusive"

PROBE_DISTANCES = (1e-2, 1e-3, 1e-4, 1e-5)


@dataclass
class FlatnessConfig:
    samples: int = 200
    seed: int = 0
    flat_tol: float = 1e-8
    nonflat_floor: float = 1e-4
    probe_distances: tuple = PROBE_DISTANCES
    precision: int = 106  # bits used at probe points
    min_reliable_fraction: float = 0.5
    max_attempts_factor: int = 5


@dataclass
class Probe:
    component: str
    base_point: tuple
    direction: tuple
    distances: list
    K: list  # complex
    scales: list
    reliable: list
    trend: str = "bounded"  # bounded | pole | inconclusive
    growth_per_decade: list = field(default_factory=list)
    line: object = None  # LineInPlane of a line component

    @property
    def magnitudes(self) -> list:
        return [abs(k) for k in self.K]

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "distances": [float(d) for d in self.distances],
            "K_magnitudes": [float(m) for m in self.magnitudes],
            "scales": [float(s) for s in self.scales],
            "trend": self.trend,
            "growth_per_decade": [float(g) for g in self.growth_per_decade],
        }


@dataclass
class FlatnessVerdict:
    status: str
    samples: list  # CurvatureSample
    near_discriminant_probes: list  # Probe
    thresholds: tuple  # (flat_tol, nonflat_floor)
    seed: int
    precision: int
    witness: CurvatureSample | Probe | None = None
    reason: str = ""

    @property
    def reliable_samples(self) -> list:
        return [s for s in self.samples if s.reliable]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "seed": self.seed,
            "precision_bits": self.precision,
            "thresholds": {"flat_tol": self.thresholds[0], "nonflat_floor": self.thresholds[1]},
            "reason": self.reason,
            "samples": [s.to_json() for s in self.samples],
            "probes": [p.to_json() for p in self.near_discriminant_probes],
        }


def _cnormal(rng) -> complex:
    a, b = rng.normal(size=2)
    return complex(a, b)


def generic_points(Wn, n: int, rng, max_attempts: int) -> list:
    """Complex Gaussian points where the fan is well separated and bounded."""
    pts = []
    tries = 0
    while len(pts) < n and tries < max_attempts:
        tries += 1
        P = (_cnormal(rng), _cnormal(rng))
        try:
            fan = slopes_at(Wn, P, rng, cluster_tol=1e-3)
        except SlopeSignal:
            continue
        if np.max(np.abs(fan.slopes), initial=0.0) > 1e6:
            continue
        pts.append((P, fan))
    return pts


def _point_on(comp, rng):
    if comp.line is not None:
        al, be, ga = comp.line.complex_coeffs()
        t = _cnormal(rng)
        if be != 0:
            return t, -(al * t + ga) / be
        return -ga / al, t
    if comp.samples:
        return comp.samples[int(rng.integers(len(comp.samples)))]
    return None


def _classify_probe(pr: Probe, cfg: FlatnessConfig) -> str:
    mags = pr.magnitudes
    floors = [cfg.flat_tol * s for s in pr.scales]
    if not all(pr.reliable):
        return "inconclusive"
    if all(m <= f for m, f in zip(mags, floors)):
        return "bounded"
    growth = []
    for a, b, da, db in zip(mags, mags[1:], pr.distances, pr.distances[1:]):
        decades = math.log10(da / db)
        growth.append((b / a) ** (1.0 / decades) if a > 0 else math.inf)
    pr.growth_per_decade = growth
    above = [m > f for m, f in zip(mags, floors)]
    # a pole shows at least one order of magnitude per decade over the last two
    # decades of the schedule, well above the noise floor
    if above[-1] and len(growth) >= 2 and min(growth[-2:]) >= 10 ** 0.95:
        return "pole"
    lo = max(min(mags), max(floors[0], 1e-300))
    if max(mags) <= 3 * max(mags[0], floors[0]) or max(mags) <= 3 * lo:
        return "bounded"
    return "inconclusive"


def probe_component(Wn, comp, cfg: FlatnessConfig, rng) -> Probe | None:
    base = _point_on(comp, rng)
    if base is None:
        return None
    v = np.array([_cnormal(rng), _cnormal(rng)])
    v /= np.linalg.norm(v)
    scale_pt = max(1.0, abs(base[0]), abs(base[1]))
    pr = Probe(comp.text(), (complex(base[0]), complex(base[1])), (complex(v[0]), complex(v[1])), [], [], [], [],
               line=comp.line)
    for d in cfg.probe_distances:
        P = (base[0] + d * scale_pt * v[0], base[1] + d * scale_pt * v[1])
        s = curvature_at(Wn, P, rng, fd_check=False, precision=cfg.precision, flat_tol=cfg.flat_tol, cluster_tol=0.0)
        pr.distances.append(d)
        pr.K.append(s.K if s.K == s.K else complex("nan"))
        pr.scales.append(s.scale if s.scale == s.scale else 0.0)
        pr.reliable.append(bool(s.reliable) and s.K == s.K)
    pr.trend = _classify_probe(pr, cfg)
    return pr


def flatness_test(W: WebSpec, config: FlatnessConfig | None = None, L=None, report=None) -> FlatnessVerdict:
    """Three-valued flatness verdict for Leg(W) from generic samples and probes."""
    cfg = config or FlatnessConfig()
    rng = np.random.default_rng(cfg.seed)
    if L is None:
        L = legendre(W, cfg.seed)
    Wn = numeric_web(L)
    thresholds = (cfg.flat_tol, cfg.nonflat_floor)
    pts = generic_points(Wn, cfg.samples, rng, cfg.samples * cfg.max_attempts_factor)
    samples = [curvature_at(Wn, P, rng, fan=fan) for P, fan in pts]
    if report is None:
        report = discriminant_structural(W, cfg.seed, L)
    probes = []
    for comp in report.components:
        if comp.line is not None and comp.line.is_infinity():
            continue  # not reachable in the (p, q) chart
        pr = probe_component(Wn, comp, cfg, rng)
        if pr is not None:
            probes.append(pr)
    verdict = FlatnessVerdict(INCONCLUSIVE, samples, probes, thresholds, cfg.seed, cfg.precision)
    reliable = [s for s in samples if s.reliable]
    for s in reliable:
        if s.scale > 0 and abs(s.K) > cfg.nonflat_floor * s.scale:
            verdict.status, verdict.witness = NONFLAT, s
            verdict.reason = f"reliable sample with |K|/scale = {abs(s.K) / s.scale:.3e}"
            return verdict
    for pr in probes:
        if pr.trend == "pole":
            verdict.status, verdict.witness = NONFLAT, pr
            verdict.reason = f"curvature grows toward {pr.component}"
            return verdict
    if len(reliable) < max(1, math.ceil(cfg.min_reliable_fraction * cfg.samples)):
        verdict.reason = f"only {len(reliable)} reliable samples of {cfg.samples}"
        return verdict
    loud = [s for s in reliable if abs(s.K) > cfg.flat_tol * s.scale]
    if loud:
        verdict.witness = max(loud, key=lambda s: s.relative)
        verdict.reason = f"{len(loud)} samples between the flat and non-flat thresholds"
        return verdict
    open_probes = [pr for pr in probes if pr.trend != "bounded"]
    if open_probes:
        verdict.witness = open_probes[0]
        verdict.reason = f"{len(open_probes)} probes without a bounded trend"
        return verdict
    verdict.status = FLAT
    verdict.reason = f"{len(reliable)} reliable samples and {len(probes)} probes consistent with K = 0"
    return verdict
