"""All-roots polynomial solver (Aberth-Ehrlich) with residual certification."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from ._accel import njit, pick

U = 2.0**-53


@njit
def _aberth_loop(c, z, maxiter, tol):
    # c ascending coefficients, z initial guesses (modified in place)
    n = z.shape[0]
    deg = c.shape[0] - 1
    w = np.empty(n, dtype=np.complex128)
    done = False
    it = 0
    while it < maxiter and not done:
        it += 1
        done = True
        for i in range(n):
            zi = z[i]
            p = c[deg]
            dp = 0j
            for k in range(deg - 1, -1, -1):
                dp = dp * zi + p
                p = p * zi + c[k]
            if p == 0:
                w[i] = 0j
                continue
            ratio = p / dp if dp != 0 else p / (1e-300 + 0j)
            s = 0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (zi - z[j])
            w[i] = ratio / (1.0 - ratio * s)
        for i in range(n):
            z[i] -= w[i]
            if abs(w[i]) > tol * max(abs(z[i]), 1e-30):
                done = False
    return it, done


def _aberth_numpy(c, z, maxiter, tol):
    n = z.shape[0]
    deg = c.shape[0] - 1
    off = ~np.eye(n, dtype=bool)
    it = 0
    done = False
    while it < maxiter and not done:
        it += 1
        p = np.full(n, c[deg], dtype=np.complex128)
        dp = np.zeros(n, dtype=np.complex128)
        for k in range(deg - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        dp = np.where(dp == 0, 1e-300, dp)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        inv = np.zeros((n, n), dtype=np.complex128)
        inv[off] = 1.0 / diff[off]
        s = inv.sum(axis=1)
        w = np.where(p == 0, 0j, ratio / (1.0 - ratio * s))
        z -= w
        done = bool(np.all(np.abs(w) <= tol * np.maximum(np.abs(z), 1e-30)))
    return it, done


@dataclass
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray  # |c(z)| / sum |c_k||z|^k
    converged: bool
    iterations: int

    @property
    def min_separation(self) -> float:
        """Smallest relative pairwise distance |zi - zj| / (|zi| + |zj|)."""
        z = self.roots
        best = np.inf
        for i in range(len(z)):
            for j in range(i + 1, len(z)):
                den = abs(z[i]) + abs(z[j])
                sep = abs(z[i] - z[j]) / den if den else 0.0
                best = min(best, sep)
        return float(best)


def initial_ring(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Points on a circle of radius ~ geometric mean root modulus, random phase."""
    deg = len(c) - 1
    r = abs(c[0] / c[deg]) ** (1.0 / deg) if c[0] != 0 else 1.0
    # Fujiwara-style cap keeps the ring inside a sane annulus
    cap = 2 * max(abs(c[k] / c[deg]) ** (1.0 / (deg - k)) for k in range(deg))
    r = min(max(r, 1e-3), cap if cap > 0 else 1.0)
    theta = rng.uniform(0, 2 * np.pi)
    k = np.arange(deg)
    return r * np.exp(1j * (theta + 2 * np.pi * k / deg + 0.4 / deg))


def find_roots(c, rng: np.random.Generator | None = None, maxiter: int = 200, tol: float = 1e-15) -> RootSet:
    """All roots of ``sum c[k] z^k`` (ascending, leading coefficient nonzero)."""
    c = np.asarray(c, dtype=np.complex128)
    if len(c) > 1 and c[-1] == 0:
        raise ValueError("leading coefficient vanishes")
    deg = len(c) - 1
    if deg < 1:
        return RootSet(np.zeros(0, dtype=np.complex128), np.zeros(0), True, 0)
    nz = int(np.argmax(c != 0))
    if nz > 0:
        # exact zero roots are split off; an iterate landing near 0 instead
        # would carry a relative residual of 1
        rest = find_roots(c[nz:], rng, maxiter, tol)
        z = np.concatenate([np.zeros(nz, dtype=np.complex128), rest.roots])
        return RootSet(z, np.concatenate([np.zeros(nz), rest.residuals]), rest.converged, rest.iterations)
    if deg == 1:
        z = np.array([-c[0] / c[1]])
        return RootSet(z, _residuals(c, z), True, 0)
    if rng is None:
        rng = np.random.default_rng(0)
    z = initial_ring(c, rng)
    kernel = pick(_aberth_loop, _aberth_numpy)
    it, done = kernel(c, z, maxiter, tol)
    z = _newton_polish(c, z)
    return RootSet(z, _residuals(c, z), bool(done), int(it))


def _newton_polish(c, z, steps: int = 2):
    for _ in range(steps):
        p = np.polyval(c[::-1], z)
        dp = np.polyval(np.polyder(c[::-1]), z)
        ok = dp != 0
        z = np.where(ok, z - p / np.where(ok, dp, 1), z)
    return z


def _residuals(c, z):
    p = np.abs(np.polyval(c[::-1], z))
    mag = np.polyval(np.abs(c[::-1]), np.abs(z))
    return np.where(mag > 0, p / np.where(mag > 0, mag, 1), 0.0)


def polish_mp(c_mp, z0, bits: int = 106, steps: int = 8):
    """Newton refinement of one root at ``bits`` precision (coefficients as mpc)."""
    with mpmath.workprec(bits):
        z = mpmath.mpc(z0)
        for _ in range(steps):
            p = mpmath.mpc(0)
            dp = mpmath.mpc(0)
            for a in reversed(c_mp):
                dp = dp * z + p
                p = p * z + a
            if dp == 0:
                break
            step = p / dp
            z -= step
            if abs(step) <= abs(z) * mpmath.mpf(2) ** (-bits + 4):
                break
        return z
