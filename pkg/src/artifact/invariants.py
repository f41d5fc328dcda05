"""
Conjugacy invariants of rational maps: multipliers at fixed points and at
period-two points.

Maps are handled as numerator/denominator coefficient arrays (highest degree
first, as in ``numpy.roots``).  Before root finding the map is conjugated by a
fixed rotation of the sphere so that no point of period one or two sits at
infinity; multipliers do not change under conjugation.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import RootFindingFailure
from .pullback import BicriticalCoefficients


@dataclass(frozen=True)
class RationalMap:
    num: np.ndarray
    den: np.ndarray

    @property
    def degree(self) -> int:
        return max(len(np.trim_zeros(self.num, "f")), len(np.trim_zeros(self.den, "f"))) - 1

    def __call__(self, z):
        return np.polyval(self.num, z) / np.polyval(self.den, z)

    def derivative(self, z):
        P, Q = np.polyval(self.num, z), np.polyval(self.den, z)
        dP, dQ = np.polyval(np.polyder(self.num), z), np.polyval(np.polyder(self.den), z)
        return (dP * Q - P * dQ) / Q ** 2


@dataclass(frozen=True)
class MultiplierSpectrum:
    fixedPointMultipliers: tuple
    periodTwoMultipliers: tuple

    def to_dict(self):
        f = lambda v: [[float(z.real), float(z.imag)] for z in v]
        return {"fixed": f(self.fixedPointMultipliers),
                "period_two": f(self.periodTwoMultipliers)}


def as_rational(obj) -> RationalMap:
    if isinstance(obj, RationalMap):
        return obj
    if isinstance(obj, BicriticalCoefficients):
        d = obj.degree
        num = np.zeros(d + 1, complex)
        den = np.zeros(d + 1, complex)
        num[0], num[-1] = obj.A, 1
        den[0], den[-1] = obj.B, 1
        return RationalMap(num, den)
    raise TypeError(f"cannot treat {type(obj).__name__} as a rational map")


def _pad(c, n):
    c = np.asarray(c, complex)
    return np.concatenate([np.zeros(n - len(c), complex), c]) if len(c) < n else c


def _homog(coeffs, X, Y, d):
    """sum_k c_k X^k Y^(d-k) for polynomials X, Y (np.poly1d style arrays)."""
    c = _pad(coeffs, d + 1)[::-1]          # c[k] multiplies z^k
    out = np.zeros(1, complex)
    for k in range(d + 1):
        if c[k] == 0:
            continue
        term = np.array([c[k]], complex)
        for _ in range(k):
            term = np.polymul(term, X)
        for _ in range(d - k):
            term = np.polymul(term, Y)
        out = np.polyadd(out, term)
    return out


def conjugate(f, M) -> RationalMap:
    """M o f o M^-1 for a Moebius matrix M = ((a, b), (c, d))."""
    f = as_rational(f)
    d = f.degree
    (a, b), (c, e) = np.asarray(M, complex)
    # M^-1(z) = (e z - b) / (-c z + a)
    X, Y = np.array([e, -b]), np.array([-c, a])
    P, Q = _homog(f.num, X, Y, d), _homog(f.den, X, Y, d)
    n = max(len(P), len(Q))
    P, Q = _pad(P, n), _pad(Q, n)
    return RationalMap(a * P + b * Q, c * P + e * Q)


def scale_conjugate(f, lam) -> RationalMap:
    """Conjugate by z -> lam z."""
    return conjugate(f, [[lam, 0], [0, 1]])


def compose(f, g) -> RationalMap:
    """f o g."""
    f, g = as_rational(f), as_rational(g)
    d = f.degree
    n = max(len(g.num), len(g.den))
    X, Y = _pad(g.num, n), _pad(g.den, n)
    P, Q = _homog(f.num, X, Y, d), _homog(f.den, X, Y, d)
    m = max(len(P), len(Q))
    return RationalMap(_pad(P, m), _pad(Q, m))


def polish_roots(poly, tol=1e-8):
    """Companion-matrix roots, one Newton step each, residual-checked."""
    poly = np.trim_zeros(np.asarray(poly, complex), "f")
    r = np.roots(poly)
    dp = np.polyder(poly)
    with np.errstate(all="ignore"):
        step = np.polyval(poly, r) / np.polyval(dp, r)
    step = np.where(np.isfinite(step), step, 0)
    r2 = r - step
    better = np.abs(np.polyval(poly, r2)) <= np.abs(np.polyval(poly, r))
    r = np.where(better, r2, r)
    scale = np.polyval(np.abs(poly), np.maximum(np.abs(r), 1.0))
    res = np.abs(np.polyval(poly, r)) / scale
    if len(r) and res.max() > tol:
        raise RootFindingFailure(f"root residual {res.max():.2e} exceeds {tol:g}")
    return r


# a fixed, generic rotation of the sphere
_ROT = np.array([[1, 0.3711 + 0.2467j], [-(0.3711 - 0.2467j), 1]])


def spectrum(f) -> MultiplierSpectrum:
    """Multipliers at the fixed points and at the period-two points.

    The fixed list has d + 1 entries; the period-two list has d^2 - d entries
    (each 2-cycle appears once per point, so values come in equal pairs).
    Roots of the expanded polynomials only seed an Aberth iteration that
    evaluates the map itself, which keeps close roots apart.
    """
    g = conjugate(as_rational(f), _ROT)
    d = g.degree
    n = max(len(g.num), len(g.den))
    P, Q = _pad(g.num, n), _pad(g.den, n)
    fix = np.polysub(P, np.polymul([1, 0], Q))
    zf = _aberth(lambda z: _periodic_residual(g, z, 1), np.roots(np.trim_zeros(fix, "f")))
    g2 = compose(g, g)
    per2 = np.polysub(g2.num, np.polymul([1, 0], g2.den))
    z12 = _aberth(lambda z: _periodic_residual(g, z, 2), np.roots(np.trim_zeros(per2, "f")))
    if len(zf) != d + 1 or len(z12) != d * d + 1:
        raise RootFindingFailure("periodic point count mismatch")
    # the fixed points are among the period-two roots; drop the closest ones
    C = np.abs(z12[:, None] - zf[None, :])
    rows, _ = linear_sum_assignment(C)
    z2 = np.delete(z12, rows)
    mf = g.derivative(zf)
    m2 = g.derivative(z2) * g.derivative(g(z2))
    return MultiplierSpectrum(tuple(sorted(mf, key=_key)), tuple(sorted(m2, key=_key)))


def _homog_eval(c, X, Y, d):
    """H(X, Y) = sum c_j X^(d-j) Y^j and its two partial derivatives."""
    c = _pad(c, d + 1)
    H = np.zeros_like(X)
    HX = np.zeros_like(X)
    HY = np.zeros_like(X)
    for j in range(d + 1):
        if c[j] == 0:
            continue
        H = H + c[j] * X ** (d - j) * Y ** j
        if d - j:
            HX = HX + c[j] * (d - j) * X ** (d - j - 1) * Y ** j
        if j:
            HY = HY + c[j] * j * X ** (d - j) * Y ** (j - 1)
    return H, HX, HY


def _periodic_residual(g, z, k):
    """Numerator of g^k(z) - z (a polynomial of degree d^k + 1) and its
    derivative, evaluated by composing homogeneous pairs."""
    d = g.degree
    X, Y = z, np.ones_like(z)
    dX, dY = np.ones_like(z), np.zeros_like(z)
    for _ in range(k):
        Pn, PX, PY = _homog_eval(g.num, X, Y, d)
        Qd, QX, QY = _homog_eval(g.den, X, Y, d)
        X, Y, dX, dY = Pn, Qd, PX * dX + PY * dY, QX * dX + QY * dY
    return X - z * Y, dX - Y - z * dY


def _aberth(func, z0, max_iter=200, tol=1e-14):
    """Simultaneous refinement of all roots (Aberth-Ehrlich)."""
    z = np.asarray(z0, complex).copy()
    if len(z) == 0:
        return z
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            N, dN = func(z)
            w = N / dN
            D = z[:, None] - z[None, :]
            np.fill_diagonal(D, np.inf)
            corr = w / (1 - w * np.sum(1 / D, axis=1))
            corr = np.where(np.isfinite(corr), corr, 0)
            z = z - corr
            if np.all(np.abs(corr) <= tol * np.maximum(1, np.abs(z))):
                break
    if not np.all(np.isfinite(z)):
        raise RootFindingFailure("root iteration diverged")
    return z


def _key(z):
    return (round(z.real, 6), round(z.imag, 6))


def multiset_distance(a, b) -> float:
    """Largest gap under the optimal matching (inf if sizes differ)."""
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    C = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(C)
    return float(C[i, j].max())


def spectrum_distance(s1: MultiplierSpectrum, s2: MultiplierSpectrum) -> float:
    return max(multiset_distance(s1.fixedPointMultipliers, s2.fixedPointMultipliers),
               multiset_distance(s1.periodTwoMultipliers, s2.periodTwoMultipliers))


def swap_critical_labels(c: BicriticalCoefficients) -> BicriticalCoefficients:
    """Normal form of the same map with the roles of 0 and inf exchanged
    (conjugation by z -> (A/B)/z)."""
    lam = c.B / c.A
    return BicriticalCoefficients(lam ** c.degree / c.B, lam ** c.degree / c.A, c.degree)


def symmetry_orbit(c: BicriticalCoefficients, labelled: bool = True):
    """Normal forms conjugate to c.  With labelled critical points and
    f(0) = 1 the residual group is trivial; unlabelled adds the swap."""
    out = [c]
    if not labelled and c.A != 0 and c.B != 0:
        out.append(swap_critical_labels(c))
    return out


def compare(c1, c2, tol: float = 1e-6, labelled: bool = True) -> dict:
    """Spectrum distance, coefficient distance and the equivalence verdict."""
    if c1.degree != c2.degree:
        return {"equivalent": False, "spectrum_distance": float("inf"),
                "coefficient_distance": float("inf")}
    try:
        sd = spectrum_distance(spectrum(c1), spectrum(c2))
    except RootFindingFailure:
        return {"equivalent": False, "spectrum_distance": float("inf"),
                "coefficient_distance": float("inf")}
    cd = min(max(abs(g.A - c2.A), abs(g.B - c2.B)) / max(1.0, abs(c2.A), abs(c2.B))
             for g in symmetry_orbit(c1, labelled))
    return {"equivalent": bool(sd <= tol and cd <= tol),
            "spectrum_distance": sd, "coefficient_distance": cd}


def equivalent(c1, c2, tol: float = 1e-6, labelled: bool = True) -> bool:
    """Moebius conjugacy with labelled critical points, decided by matching
    multiplier spectra and the residual symmetry of the normal form."""
    return compare(c1, c2, tol, labelled)["equivalent"]
