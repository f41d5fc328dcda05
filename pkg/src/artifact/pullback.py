"""
Thurston pullback for bicritical matings in the normal form

    F(z) = (A z^d + 1) / (B z^d + 1),    critical points 0 and inf,  F(0) = 1.

A marked configuration holds the two critical orbits.  Each step solves for
(A, B) from the current positions and pulls every marked point back through
z^d = (w - 1) / (A - w B).

Branches are chosen by nearest previous position (``pullback_step``).  Far
from the fixed point that rule alone can follow the wrong sheet, so
``realize_mating`` starts with an exact path-lifting phase: it carries one
path per marked point from a common base point and lifts those paths, which
pins the homotopy class of every point.  Once the configuration has settled
it hands over to ``pullback_step``.
"""

from dataclasses import dataclass, field
import cmath
import math

import numpy as np

from .combinatorics import MatingSpec, levy_check, WHITE
from .errors import (BranchAmbiguity, DegenerateImage, InvalidInput,
                     NoConvergence, Obstructed, SingularSystem)

INF = complex("inf")


def isinf(z) -> bool:
    return z != z or abs(z) == math.inf


@dataclass(frozen=True)
class BicriticalCoefficients:
    A: complex
    B: complex
    degree: int

    def __post_init__(self):
        if abs(self.A - self.B) < 1e-300:
            raise InvalidInput("A == B gives a constant map")

    def __call__(self, z):
        """Evaluate on scalars or arrays; inf maps to A/B."""
        z = np.asarray(z, dtype=complex)
        d = self.degree
        with np.errstate(all="ignore"):
            zd = z ** d
            out = (self.A * zd + 1) / (self.B * zd + 1)
            big = ~np.isfinite(z) | (np.abs(z) > 1e150)
            if big.any():
                u = 1 / np.where(big, z, 1)
                ud = u ** d
                lim = self.A / self.B if self.B != 0 else INF
                alt = np.where(ud == 0, lim, (self.A + ud) / (self.B + ud))
                out = np.where(big, alt, out)
            out = np.where(np.isnan(out), INF, out)
        return out[()] if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        d = self.degree
        return d * z ** (d - 1) * (self.A - self.B) / (self.B * z ** d + 1) ** 2

    def to_dict(self):
        return {"A": [self.A.real, self.A.imag], "B": [self.B.real, self.B.imag],
                "degree": self.degree}

    @classmethod
    def from_dict(cls, obj):
        try:
            return cls(complex(*obj["A"]), complex(*obj["B"]), int(obj.get("degree", 3)))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"malformed coefficients: {e}") from None


@dataclass
class MarkedConfiguration:
    """Labelled sphere points with a label map sigma and local degrees.

    ``pinned`` names the labels held at 0, inf and 1.
    """
    labels: list
    positions: np.ndarray
    sigma: np.ndarray
    local_degree: np.ndarray
    degree: int
    pinned: dict
    history: list = field(default_factory=list)
    angles: list = None

    def index(self, label) -> int:
        return self.labels.index(label)

    def position(self, label) -> complex:
        return complex(self.positions[self.index(label)])

    def copy(self, positions=None):
        pos = self.positions.copy() if positions is None else np.asarray(positions, complex)
        return MarkedConfiguration(list(self.labels), pos, self.sigma.copy(),
                                   self.local_degree.copy(), self.degree,
                                   dict(self.pinned), list(self.history), self.angles)

    def finite(self):
        return np.isfinite(self.positions)

    def separation(self):
        """Smallest distance between two finite marked points, with the pair."""
        idx = np.flatnonzero(self.finite())
        z = self.positions[idx]
        D = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(D, np.inf)
        i, j = np.unravel_index(np.argmin(D), D.shape)
        return D[i, j], (self.labels[idx[i]], self.labels[idx[j]])


@dataclass
class PullbackTrace:
    iterations: int = 0
    maxMove: list = field(default_factory=list)
    converged: bool = False
    collision: tuple = None
    switch_iteration: int = None


# ----------------------------------------------------------- configuration

def _placement_angles(spec: MatingSpec):
    first, second = spec.oriented()
    d, p = spec.degree, spec.period
    tw, tb = first[0].value, second[0].value
    white = [float((tw * d ** ((k - 1) % p)) % 1) for k in range(p)]
    black = [float((-tb * d ** ((k - 1) % p)) % 1) for k in range(p)]
    return white + black


def _labels(spec: MatingSpec):
    p = spec.period
    a, b = ("w", "b") if spec.critical_label == WHITE else ("b", "w")
    return [f"{a}{k}" for k in range(p)] + [f"{b}{k}" for k in range(p)]


def initial_configuration(spec: MatingSpec, r: float = 0.5) -> MarkedConfiguration:
    """Formal-mating placement.

    The first critical orbit sits at radius r (angle t), the second at
    radius 1/r (angle -t), both rotated so the critical value lands on 1;
    critical points go to 0 and inf.
    """
    rep = levy_check(spec)
    if rep.obstructed:
        raise Obstructed("combinatorics is obstructed", rep.witness)
    d, p = spec.degree, spec.period
    al = _placement_angles(spec)
    s = 1 / (r * cmath.exp(2j * math.pi * al[1]))
    pos = np.zeros(2 * p, complex)
    for k in range(1, p):
        pos[k] = s * r * cmath.exp(2j * math.pi * al[k])
        pos[p + k] = s * cmath.exp(2j * math.pi * al[p + k]) / r
    pos[0], pos[p], pos[1] = 0, INF, 1
    sig = np.array([(k + 1) % p for k in range(p)] + [p + (k + 1) % p for k in range(p)])
    deg = np.ones(2 * p, int)
    deg[0] = deg[p] = d
    labels = _labels(spec)
    pinned = {"zero": labels[0], "inf": labels[p], "one": labels[1]}
    return MarkedConfiguration(labels, pos, sig, deg, d, pinned, [pos.copy()], al)


def same_cluster_model(degree: int = 3, v: complex = 2.0) -> MarkedConfiguration:
    """Period-2 cluster cycle with both critical points in one cluster.

    Marked points 0 -> 1 -> 0 and inf -> v -> inf, with the star joining 1 and
    v drawn along the real segment [1, v].  This combinatorics carries a Levy
    cycle, so pulling back drives v into 1.
    """
    pos = np.array([0, 1, INF, v], complex)
    sig = np.array([1, 0, 3, 2])
    deg = np.array([degree, 1, degree, 1])
    pinned = {"zero": "w0", "inf": "b0", "one": "w1"}
    return MarkedConfiguration(["w0", "w1", "b0", "b1"], pos, sig, deg, degree,
                               pinned, [pos.copy()])


# ----------------------------------------------------------- coefficients

def solve_coefficients(config: MarkedConfiguration, labels=None) -> BicriticalCoefficients:
    """Least-squares (A, B) from the mapping conditions z -> w.

    Finite z gives z^d A - w z^d B = w - 1, z = inf gives A - w B = 0, and a
    finite z mapping to inf gives z^d B = -1.  Rows are scaled to unit norm.
    ``labels`` restricts the conditions used.
    """
    d = config.degree
    use = range(len(config.labels)) if labels is None else [config.index(l) for l in labels]
    rows, rhs = [], []
    for i in use:
        z = config.positions[i]
        w = config.positions[config.sigma[i]]
        if isinf(z):
            if isinf(w):
                continue
            row, b = [1, -w], 0
        elif z == 0:
            continue
        elif isinf(w):
            row, b = [0, z ** d], -1
        else:
            zd = z ** d
            row, b = [zd, -w * zd], w - 1
        n = math.hypot(abs(row[0]), abs(row[1]))
        rows.append([row[0] / n, row[1] / n])
        rhs.append(b / n)
    if len(rows) < 2:
        raise SingularSystem("fewer than two usable mapping conditions")
    M = np.array(rows, complex)
    y = np.array(rhs, complex)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise SingularSystem(f"mapping conditions are rank deficient (sv ratio {sv[-1] / sv[0]:.2e})")
    (A, B), *_ = np.linalg.lstsq(M, y, rcond=None)
    return BicriticalCoefficients(complex(A), complex(B), d)


def pinned_conditions(config: MarkedConfiguration):
    """The two conditions that fix (A, B) exactly: f(1) and f(inf)."""
    return [config.pinned["one"], config.pinned["inf"]]


# ---------------------------------------------------------- preimages

def _target(w, A, B):
    """z^d for a preimage of w, computed in the chart 1/w when |w| > 1."""
    if isinf(w):
        return -1 / B
    if abs(w) > 1:
        u = 1 / w
        den = A * u - B
        return INF if den == 0 else (1 - u) / den
    den = A - w * B
    return INF if den == 0 else (w - 1) / den


def preimages(w, coeffs: BicriticalCoefficients):
    """All d preimages of w (a single 0 or inf at the critical values)."""
    tg = _target(w, coeffs.A, coeffs.B)
    if isinf(tg):
        return np.array([INF])
    if tg == 0:
        return np.array([0j])
    d = coeffs.degree
    return abs(tg) ** (1 / d) * np.exp(1j * (cmath.phase(tg) + 2 * np.pi * np.arange(d)) / d)


def pullback_step(config: MarkedConfiguration, coeffs: BicriticalCoefficients,
                  amb_tol: float = 1e-9) -> MarkedConfiguration:
    """Pull every marked point back along its nearest branch.

    Critical labels stay at 0 and inf; the result is rescaled so the pinned
    critical value sits exactly at 1.
    """
    pos = config.positions
    new = pos.copy()
    zero = config.index(config.pinned["zero"])
    inf = config.index(config.pinned["inf"])
    A, B = coeffs.A, coeffs.B
    for i in range(len(pos)):
        if i in (zero, inf):
            continue
        w = pos[config.sigma[i]]
        if not isinf(w) and abs(A - w * B) <= 1e-14 * (abs(A) + abs(w * B)):
            raise DegenerateImage(f"label {config.labels[i]}: A - wB vanishes")
        cand = preimages(w, coeffs)
        if len(cand) == 1:
            new[i] = cand[0]
            continue
        dist = np.abs(cand - pos[i])
        order = np.argsort(dist)
        if dist[order[1]] - dist[order[0]] < amb_tol:
            raise BranchAmbiguity(f"label {config.labels[i]}: two branches equidistant")
        new[i] = cand[order[0]]
    one = config.index(config.pinned["one"])
    fin = np.isfinite(new)
    new[fin] = new[fin] / new[one]
    new[zero], new[inf], new[one] = 0, INF, 1
    out = config.copy(new)
    out.history.append(new.copy())
    return out


# ------------------------------------------------------ path lifting phase

FAC = 0.25


def _branch(tg, z, d):
    # root of x^d = tg closest in argument to z
    if isinf(tg):
        return INF
    if tg == 0:
        return 0j
    m = abs(tg) ** (1 / d)
    a = cmath.phase(tg) / d
    if z == 0:
        return m * cmath.exp(1j * a)
    k = round((cmath.phase(z) - a) / (2 * math.pi / d))
    return m * cmath.exp(1j * (a + 2 * math.pi * k / d))


def lift_path(path, z0, coeffs: BicriticalCoefficients, marks, end=None):
    """Lift a polyline through F starting at z0.

    Steps are capped at FAC times the distance to the nearest marked point
    (images of marked points are the only critical values), which keeps each
    small step inside one sheet.  A final vertex at inf is reached along a
    straight line in the chart u = 1/w.  ``end`` snaps the lift onto a
    critical point when the path runs into a critical value.
    """
    A, B, d = coeffs.A, coeffs.B, coeffs.degree
    out = [z0]
    z = z0
    n = len(path)
    fin = [c for c in marks if not isinf(c)]
    inv = [1 / c for c in fin if c != 0] + [0j]
    for i in range(n - 1):
        a, b = path[i], path[i + 1]
        last = i == n - 2
        if isinf(b):
            ua = 1 / a
            av = [c for c in inv if not (c == ua and i == 0) and not (last and c == 0)]
            t = 0.0
            while t < 1:
                u = ua * (1 - t)
                dist = min(abs(u - c) for c in av) if av else math.inf
                if last and end is not None and abs(u) < 1e-10:
                    out.append(end)
                    return out
                dt = min(1 - t, FAC * dist / abs(ua)) if dist < math.inf else 1 - t
                t = min(1.0, t + dt)
                u = ua * (1 - t)
                z = _branch(_target(INF if u == 0 else 1 / u, A, B), z, d)
                out.append(z)
            continue
        av = [c for c in fin if not ((last and c == b) or (i == 0 and c == a))]
        L = abs(b - a)
        t = 0.0
        while t < 1:
            w = a + (b - a) * t
            dist = min(abs(w - c) for c in av) if av else math.inf
            if last and end is not None and abs(w - b) < 1e-12 * max(1, abs(b)):
                out.append(end)
                return out
            if dist == 0:
                raise NoConvergence("lifted path runs through a marked point")
            dt = min(1 - t, FAC * dist / L) if L > 0 else 1 - t
            if last and end is not None and abs(w - b) > 1e-12:
                dt = min(dt, 0.5 * (1 - t))
            t = t + dt if t + dt < 1 - 1e-15 else 1.0
            w = a + (b - a) * t
            z = _branch(_target(w, A, B), z, d)
            out.append(z)
    if end is not None:
        out[-1] = end
    return out


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def tighten(path, pts):
    """Drop polyline vertices whose triangle (prev, v, next) holds no marked
    point.  This is a homotopy rel the marked points, so lifts are unchanged."""
    arr = np.array(path, dtype=complex)
    q = np.array([p for p in pts if not isinf(p)], dtype=complex)[None, :]
    idle, parity = 0, 0
    while idle < 2 and len(arr) > 2:
        a, b, c = arr[:-2, None], arr[1:-1, None], arr[2:, None]
        with np.errstate(invalid="ignore"):
            d1 = _cross(b - a, q - a)
            d2 = _cross(c - b, q - b)
            d3 = _cross(a - c, q - c)
            inside = ~(((d1 < 0) | (d2 < 0) | (d3 < 0)) & ((d1 > 0) | (d2 > 0) | (d3 > 0)))
            eps = 1e-9 * (abs(a) + abs(b) + abs(c) + 1)
            near = (abs(d1) < eps * abs(b - a)) | (abs(d2) < eps * abs(c - b)) | (abs(d3) < eps * abs(a - c))
            vert = (q == a) | (q == b) | (q == c)
            block = ((inside | near) & ~vert).any(axis=1)
        fin = np.isfinite(arr[1:-1]) & np.isfinite(arr[2:]) & np.isfinite(arr[:-2])
        rem = ~block & fin
        idx = np.arange(1, len(arr) - 1)
        rem &= idx % 2 == parity
        parity ^= 1
        if rem.any():
            keep = np.ones(len(arr), bool)
            keep[1:-1] = ~rem
            arr = arr[keep]
            idle = 0
        else:
            idle += 1
    return list(arr)


class PathLifter:
    """Paths from a base point on the equator to every marked point.

    Path l runs anticlockwise along the equator from angle 0 to the placement
    angle of l and then radially to the point.  Under F the path of l maps to
    the equator loop taken floor(d * angle) times followed by the path of
    sigma(l), which gives the image paths to lift at each step.
    """

    def __init__(self, config: MarkedConfiguration, r: float = 0.5, nseg: int = 48):
        al = config.angles
        d, P = config.degree, len(config.labels)
        self.p = P // 2
        self.d = d
        s = 1 / (r * cmath.exp(2j * math.pi * al[1]))

        def arc(a0, a1, m=0):
            span = (a1 - a0) % 1 + m
            n = max(2, int(math.ceil(span * nseg)) + 1)
            return [s * cmath.exp(2j * math.pi * (a0 + span * j / (n - 1))) for j in range(n)]

        self.paths = [arc(0.0, al[l]) + [config.positions[l]] for l in range(P)]
        self.loop = arc(0.0, 0.0, 1)
        self.sig = list(config.sigma)
        self.m = [int(math.floor(d * al[l] + 1e-12)) for l in range(P)]

    def step(self, config: MarkedConfiguration, coeffs: BicriticalCoefficients):
        pos = list(config.positions)
        p, d = self.p, self.d
        loop, paths = self.loop, self.paths

        def img(l):
            return loop[:-1] * self.m[l] + paths[self.sig[l]]

        base = lift_path(img(1)[::-1], 1 + 0j, coeffs, pos)[-1]
        ends = {0: 0j, p: INF}
        new = [lift_path(img(l), base, coeffs, pos, end=ends.get(l)) for l in range(2 * p)]
        nl = lift_path(loop[:-1] * d + loop[-1:], base, coeffs, pos)
        npos = np.array([q[-1] for q in new], complex)
        npos[1], npos[0], npos[p] = 1, 0, INF
        fin = [q for q in npos if not isinf(q)]
        self.paths = [tighten(q, fin) for q in new]
        self.loop = tighten(nl, fin)
        out = config.copy(npos)
        out.history.append(npos.copy())
        return out


# ---------------------------------------------------------------- driver

def _max_move(a, b):
    m = np.isfinite(a) & np.isfinite(b)
    return float(np.max(np.abs(a[m] - b[m]))) if m.any() else 0.0


def iterate(config: MarkedConfiguration, tol: float = 1e-12, max_iter: int = 500,
            lifter: PathLifter = None, switch: float = 1e-3,
            collide: float = 1e-8, collide_run: int = 5):
    """Alternate coefficient solves and pullbacks until the largest move is
    at most ``tol``.  Returns (final configuration, trace)."""
    trace = PullbackTrace()
    if lifter is None:
        trace.switch_iteration = 0
    run = 0
    for it in range(1, max_iter + 1):
        coeffs = solve_coefficients(config, pinned_conditions(config))
        if lifter is not None:
            new = lifter.step(config, coeffs)
        else:
            new = pullback_step(config, coeffs)
        mv = _max_move(new.positions, config.positions)
        sep, pair = new.separation()
        trace.maxMove.append(mv)
        trace.iterations = it
        config = new
        run = run + 1 if sep < collide else 0
        if run >= collide_run:
            trace.collision = pair
            return config, trace
        if lifter is not None and mv < switch * sep:
            lifter = None
            trace.switch_iteration = it
        if mv <= tol and lifter is None:
            trace.converged = True
            return config, trace
    return config, trace


def realize(spec: MatingSpec, tol: float = 1e-12, max_iter: int = 500,
            warmup: bool = True, switch: float = 1e-3, r: float = 0.5):
    """Realize the mating; returns (coefficients, trace, final configuration).

    The returned coefficients are the least-squares solve over every mapping
    condition of the converged configuration.
    """
    config = initial_configuration(spec, r)
    lifter = PathLifter(config, r) if warmup else None
    config, trace = iterate(config, tol, max_iter, lifter, switch)
    if trace.collision:
        raise Obstructed(f"marked points {trace.collision[0]} and {trace.collision[1]} collide",
                         trace.collision)
    if not trace.converged:
        err = NoConvergence(f"no convergence in {max_iter} iterations "
                            f"(last move {trace.maxMove[-1]:.3g})")
        err.trace = trace
        raise err
    return solve_coefficients(config), trace, config


def realize_mating(spec: MatingSpec, tol: float = 1e-12, max_iter: int = 500, **kw):
    """Numerically realize the mating; returns (coefficients, trace)."""
    coeffs, trace, _ = realize(spec, tol, max_iter, **kw)
    return coeffs, trace
