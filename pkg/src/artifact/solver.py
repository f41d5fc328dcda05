"""
Centers of hyperbolic components of z^d + c.

A center of period p is a root of g(c) = f_c^p(0).  Newton's method is run
with g'(c) carried along the orbit by the recurrence
    z_{k+1} = z_k^d + c,   z'_{k+1} = d z_k^{d-1} z'_k + 1.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DerivativeVanished, InvalidInput, NoConvergence

TOL = 1e-12


@dataclass(frozen=True)
class PolySpec:
    degree: int
    period: int
    parameter: complex
    sourcePair: tuple = None
    residual: float = 0.0
    iterations: int = 0


def critical_orbit(c, d: int, n: int):
    """Return f_c^n(0) and its c-derivative."""
    z, dz = 0j, 0j
    for _ in range(n):
        dz = d * z ** (d - 1) * dz + 1
        z = z ** d + c
    return z, dz


def center_solve(degree: int, period: int, seed, max_iter: int = 200,
                 tol: float = TOL, history: list = None) -> PolySpec:
    """Newton iteration for a center of period ``period`` from ``seed``.

    >>> round(abs(center_solve(2, 1, 0.1).parameter), 12)
    0.0
    """
    if degree < 2 or period < 1:
        raise InvalidInput("need degree >= 2 and period >= 1")
    c = complex(seed)
    for it in range(1, max_iter + 1):
        g, dg = critical_orbit(c, degree, period)
        if history is not None:
            history.append(abs(g))
        if not (math.isfinite(abs(g)) and math.isfinite(abs(dg))):
            raise NoConvergence(f"orbit escaped from seed {seed}")
        if abs(g) <= tol:
            return PolySpec(degree, period, c, None, abs(g), it - 1)
        if abs(dg) < 1e-300:
            raise DerivativeVanished(f"g'(c) vanished at c = {c}")
        step = g / dg
        c -= step
        if abs(step) < 1e-16 * max(1.0, abs(c)):
            g, _ = critical_orbit(c, degree, period)
            if abs(g) <= max(tol, 1e-10):
                return PolySpec(degree, period, c, None, abs(g), it)
    g, _ = critical_orbit(c, degree, period)
    if abs(g) <= tol:
        return PolySpec(degree, period, c, None, abs(g), max_iter)
    raise NoConvergence(f"no center within {max_iter} Newton steps (|g| = {abs(g):.3g})")


def minimal_period(c, d: int, period: int, tol: float = 1e-8):
    """Smallest k <= period with |f_c^k(0)| <= tol, or None."""
    z = 0j
    for k in range(1, period + 1):
        z = z ** d + c
        if abs(z) <= tol:
            return k
    return None


def verify_parameter(spec: PolySpec) -> float:
    """|f_c^p(0)| at the stored parameter.

    If a proper divisor of the period already returns to 0 the parameter is
    not a center of the stated period and the residual reported is inf.
    """
    z, _ = critical_orbit(complex(spec.parameter), spec.degree, spec.period)
    r = abs(z)
    if spec.period > 1:
        k = minimal_period(spec.parameter, spec.degree, spec.period - 1, tol=1e-10)
        if k is not None and spec.period % k == 0:
            return math.inf
    return r


def escape_grid(d: int, center=0j, width=4.0, n=200, max_iter=100, radius=None):
    """Escape counts of the critical orbit over an n x n parameter grid.

    Cells that never escape get max_iter.
    """
    radius = radius or max(2.0, 2.0 ** (1 / (d - 1)))
    xs = center.real + width * ((np.arange(n) + 0.5) / n - 0.5)
    ys = center.imag - width * ((np.arange(n) + 0.5) / n - 0.5)
    C = xs[None, :] + 1j * ys[:, None]
    Z = np.zeros_like(C)
    count = np.full(C.shape, max_iter, dtype=np.int32)
    alive = np.ones(C.shape, bool)
    for k in range(max_iter):
        Z[alive] = Z[alive] ** d + C[alive]
        out = alive & (np.abs(Z) > radius)
        count[out] = k
        alive &= ~out
    return C, count


def discover_centers(d: int, period: int, n: int = None, width: float = 4.0):
    """All centers of exact period found by Newton from a coarse grid scan.

    Grid cells where |f_c^p(0)| is a local minimum seed Newton; duplicates
    are merged.  Intended for small periods.
    """
    n = n or 40 * d ** period // period + 200
    C, _ = escape_grid(d, 0j, width, n, max_iter=1)
    Z = np.zeros_like(C)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(period):
            Z = np.where(np.abs(Z) < 1e6, Z ** d + C, Z)
    a = np.abs(Z)
    pad = np.pad(a, 1, constant_values=np.inf)
    m = np.ones(a.shape, bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                m &= a <= pad[1 + dy:1 + dy + n, 1 + dx:1 + dx + n]
    out = []
    for s in C[m & (a < 1e6)]:
        try:
            sol = center_solve(d, period, s, max_iter=60)
        except NoConvergence:
            continue
        c = sol.parameter
        if minimal_period(c, d, period, tol=1e-9) != period:
            continue
        if all(abs(c - o) > 1e-8 for o in out):
            out.append(c)
    return sorted(out, key=lambda z: (round(z.real, 9), z.imag))


def parse_complex(text: str) -> complex:
    """Parse '0.21+1.09i' (also accepts j, spaces, and plain reals)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "").replace("i", "j")
    if s.endswith("j") and (s[:-1] == "" or s[:-1] in "+-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        raise InvalidInput(f"cannot parse complex number {text!r}") from None
