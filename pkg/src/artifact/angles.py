"""
Exact rational angles and their symbolic dynamics under t -> d*t (mod 1).

Angles are stored as reduced fractions in [0, 1).  Everything here is
integer arithmetic; no floats are involved in any decision.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd
import re

import numpy as np

from .errors import DegeneratePartition, InvalidInput, InvalidPair

BOUNDARY = "*"

_ANGLE_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


@total_ordering
class Angle:
    """An external angle p/q taken mod 1, kept in lowest terms.

    >>> Angle(11, 80) * 3
    Angle('33/80')
    >>> -Angle('1/7')
    Angle('6/7')
    """

    __slots__ = ("_f",)

    def __init__(self, numerator=0, denominator=None):
        if isinstance(numerator, Angle):
            self._f = numerator._f
            return
        if isinstance(numerator, str):
            if denominator is not None:
                raise InvalidInput("string angle takes no denominator")
            self._f = _parse(numerator)
            return
        if denominator is None:
            denominator = 1
        if denominator == 0:
            raise InvalidInput("angle denominator must be non-zero")
        self._f = Fraction(numerator, denominator) % 1

    @classmethod
    def parse(cls, text):
        return cls(text)

    @property
    def numerator(self) -> int:
        return self._f.numerator

    @property
    def denominator(self) -> int:
        return self._f.denominator

    @property
    def value(self) -> Fraction:
        return self._f

    def times(self, d: int) -> "Angle":
        return Angle(self._f * d)

    def __mul__(self, d):
        if not isinstance(d, int):
            return NotImplemented
        return self.times(d)

    __rmul__ = __mul__

    def __add__(self, other):
        return Angle(self._f + as_fraction(other))

    def __sub__(self, other):
        return Angle(self._f - as_fraction(other))

    def __neg__(self):
        return Angle(-self._f)

    def __eq__(self, other):
        try:
            return self._f == as_fraction(other)
        except (InvalidInput, TypeError):
            return NotImplemented

    def __lt__(self, other):
        return self._f < as_fraction(other)

    def __hash__(self):
        return hash(self._f)

    def __float__(self):
        return float(self._f)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"Angle('{self}')"


def _parse(text: str) -> Fraction:
    m = _ANGLE_RE.match(text)
    if not m:
        raise InvalidInput(f"cannot parse angle {text!r}; expected 'p/q'")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    return Fraction(p, q) % 1


def as_fraction(x) -> Fraction:
    """Coerce an Angle, Fraction, int or 'p/q' string to a Fraction in [0, 1)."""
    if isinstance(x, Angle):
        return x.value
    if isinstance(x, str):
        return _parse(x)
    if isinstance(x, (Fraction, int)):
        return Fraction(x) % 1
    raise TypeError(f"not an angle: {x!r}")


# ---------------------------------------------------------------- orbits

def _factor(n: int) -> dict:
    out = {}
    k = 2
    while k * k <= n:
        while n % k == 0:
            out[k] = out.get(k, 0) + 1
            n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _order(d: int, q: int) -> int:
    """Multiplicative order of d modulo q (gcd(d, q) = 1)."""
    if q == 1:
        return 1
    lam = 1
    for r, e in _factor(q).items():
        # Carmichael function of a prime power
        if r == 2 and e >= 3:
            ph = 2 ** (e - 2)
        else:
            ph = (r - 1) * r ** (e - 1)
        lam = lam * ph // gcd(lam, ph)
    n = lam
    for r in _factor(lam):
        while n % r == 0 and pow(d, n // r, q) == 1:
            n //= r
    return n


def _powers(d: int, q: int, n: int) -> np.ndarray:
    """d**k mod q for k < n, built by doubling (int64 safe when q < 3e9)."""
    out = np.ones(1, dtype=np.int64)
    while len(out) < n:
        step = pow(d, len(out), q)
        out = np.concatenate([out, (out * step) % q])
    return out[:n]


@dataclass(frozen=True)
class AngleOrbit:
    """Orbit of an angle under multiplication by ``degree``.

    The orbit is kept as integer numerators over the common denominator of
    the starting angle, so long orbits stay cheap.
    """
    angle: Angle
    degree: int
    preperiod: int
    period: int
    numerators: tuple
    denominator: int

    @property
    def orbit(self):
        q = self.denominator
        return [Angle(int(n), q) for n in self.numerators]

    def __len__(self):
        return len(self.numerators)


def angle_orbit(angle, degree: int) -> AngleOrbit:
    """Minimal preperiod and period of ``angle`` under t -> degree*t.

    The returned orbit lists preperiod + period + 1 entries so that
    ``orbit[preperiod + period] == orbit[preperiod]``.
    """
    if degree < 2:
        raise InvalidInput("degree must be at least 2")
    f = as_fraction(angle)
    n, q = f.numerator, f.denominator
    pre, qk = 0, q
    while gcd(qk, degree) > 1:
        qk //= gcd(qk, degree)
        pre += 1
    per = _order(degree, qk)
    total = pre + per + 1
    if q < 3_000_000_000:
        nums = (_powers(degree, q, total) * n) % q
        nums = tuple(nums.tolist())
    else:
        nums, x = [], n
        for _ in range(total):
            nums.append(x)
            x = x * degree % q
        nums = tuple(nums)
    return AngleOrbit(Angle(f), degree, pre, per, nums, q)


def orbit(t, d: int) -> list:
    """Distinct orbit points of t as Fractions (preperiodic part first)."""
    o = angle_orbit(t, d)
    q = o.denominator
    return [Fraction(int(x), q) for x in o.numerators[:-1]]


def is_periodic(t, d: int) -> bool:
    return gcd(as_fraction(t).denominator, d) == 1


def period(t, d: int) -> int:
    return angle_orbit(t, d).period


# ---------------------------------------------------------- pair checks

def _linked(l1, l2) -> bool:
    a, b = l1
    c, e = l2
    if len({a, b, c, e}) < 4:
        return False

    def inside(x, lo, hi):
        return 0 < (x - lo) % 1 < (hi - lo) % 1

    return inside(c, a, b) != inside(e, a, b)


def normalize_pair(pair):
    """Return the pair as Fractions (lo, hi) with the short arc running lo -> hi."""
    lo, hi = (as_fraction(x) for x in pair)
    if lo == hi:
        raise DegeneratePartition(f"pair angles coincide: {lo}")
    if (hi - lo) % 1 > (lo - hi) % 1:
        lo, hi = hi, lo
    return lo, hi


def check_pair(pair, d: int):
    """Validate a characteristic pair; returns (lo, hi) or raises InvalidPair.

    The checks are necessary conditions: both angles periodic with the same
    period, the orbit leaves unlinked with each other and with the major
    leaves, and the characteristic arc shorter than every other orbit arc.
    """
    lo, hi = normalize_pair(pair)
    if not (is_periodic(lo, d) and is_periodic(hi, d)):
        raise InvalidPair(f"pair ({lo}, {hi}) is not periodic under x{d}")
    p = period(lo, d)
    if period(hi, d) != p:
        raise InvalidPair(f"pair ({lo}, {hi}) has unequal periods")
    w = (hi - lo) % 1
    leaves = [((lo * d ** k) % 1, (hi * d ** k) % 1) for k in range(p)]
    majors = [((hi + j) / d % 1, (lo + j + 1) / d % 1) for j in range(d)]
    for i, l in enumerate(leaves):
        for m in leaves[i + 1:] + majors:
            if _linked(l, m):
                raise InvalidPair(f"pair ({lo}, {hi}): leaves cross")
    for k in range(1, p):
        a, b = leaves[k]
        L = (b - a) % 1
        if a != b and min(L, 1 - L) < w:
            raise InvalidPair(f"pair ({lo}, {hi}): a forward leaf is shorter")
        for x in (a, b):
            if 0 < (x - lo) % 1 < w:
                raise InvalidPair(f"pair ({lo}, {hi}): orbit enters the characteristic arc")
    # forward images of the pair must stay in one gap of the critical partition
    gaps = [(lo + j) / d % 1 for j in range(d)]

    def gap_of(x):
        for j, g in enumerate(gaps):
            if 0 < (x - g) % 1 < w / d:
                return j
        return None

    for k in range(1, p):
        ga, gb = gap_of(leaves[k][0]), gap_of(leaves[k][1])
        if ga is not None and gb is not None and ga != gb:
            raise InvalidPair(f"pair ({lo}, {hi}): orbit leaf splits across gaps")
    return lo, hi


# ----------------------------------------------------------- itineraries

def cuts(pair, d: int) -> list:
    """The d preimages of the upper pair angle, sorted; they cut the circle."""
    lo, hi = normalize_pair(pair)
    return sorted(((hi + j) / d) % 1 for j in range(d))


def arc_symbol(x, cut_list, d: int):
    """Index of the arc [cut_k, cut_{k+1}) containing x, or BOUNDARY on a cut."""
    x = as_fraction(x)
    if x in cut_list:
        return BOUNDARY
    k = sum(1 for c in cut_list if c < x) - 1
    return k % d


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple
    partitionAngles: tuple
    preperiod: int = 0

    @property
    def period(self) -> int:
        return len(self.symbols) - self.preperiod

    def resolved(self):
        """Replace boundary markers by the symbol of the arc on their
        counterclockwise side (the arc that starts at the cut)."""
        cl = [a.value for a in self.partitionAngles]
        d = len(cl)
        out = []
        for s, x in zip(self.symbols, self._points):
            out.append(cl.index(x) % d if s == BOUNDARY else s)
        return tuple(out)

    # orbit points, kept for resolved()
    _points: tuple = field(default=(), repr=False, compare=False)


def itinerary(angle, pair, degree: int) -> Itinerary:
    """Symbol word of the orbit of ``angle`` relative to the critical partition.

    >>> itinerary('1/7', ('1/7', '2/7'), 2).symbols
    ('*', 1, 1)
    """
    lo, hi = check_pair(pair, degree)
    cl = cuts((lo, hi), degree)
    o = angle_orbit(angle, degree)
    q = o.denominator
    pts = tuple(Fraction(int(n), q) for n in o.numerators[:-1])
    sym = tuple(arc_symbol(x, cl, degree) for x in pts)
    return Itinerary(sym, tuple(Angle(c) for c in cl), o.preperiod, pts)


def _word(t: Fraction, cl, d: int) -> tuple:
    # itinerary symbols of a periodic angle, without re-validating the pair
    out, x = [], t
    while True:
        out.append(arc_symbol(x, cl, d))
        x = (x * d) % 1
        if x == t:
            return tuple(out)


def root_groups(pair, d: int) -> dict:
    """Map each angle in the orbit of the pair to the set of orbit angles
    landing at the same root point.

    Primitive pairs give d**0-style pairs {d^k lo, d^k hi}; satellite pairs
    (lo in the orbit of hi) give the cycles of rays at the satellite roots.
    """
    lo, hi = normalize_pair(pair)
    ol, oh = orbit(lo, d), orbit(hi, d)
    p = len(oh)
    groups = {}
    if lo in oh:
        q = None
        for cand in sorted((k for k in range(1, p) if p % k == 0), reverse=True):
            if lo in {oh[(cand * i) % p] for i in range(p // cand)}:
                q = cand
                break
        if q is None:
            raise InvalidPair(f"pair ({lo}, {hi}) is not a satellite pair")
        for k in range(q):
            s = frozenset(oh[(k + q * i) % p] for i in range(p // q))
            for a in s:
                groups[a] = s
    else:
        for k in range(p):
            s = frozenset({ol[k], oh[k]})
            for a in s:
                groups[a] = s
    return groups


def _word_equal(ia, ib) -> bool:
    la, lb = len(ia), len(ib)
    n = la * lb // gcd(la, lb)
    return all(ia[i % la] == ib[i % lb] for i in range(n))


def co_lands(a, b, pair, degree: int) -> bool:
    """Do the external rays at a and b land together for the polynomial
    with characteristic ``pair``?

    Rays in the root cycle of the pair are grouped explicitly; for every other
    periodic pair of angles the itineraries are compared.  A periodic angle
    outside the root cycle never hits a cut, so markers only matter there.
    """
    a, b = as_fraction(a), as_fraction(b)
    if not (is_periodic(a, degree) and is_periodic(b, degree)):
        raise InvalidInput("co_lands expects periodic angles")
    lo, hi = normalize_pair(pair)
    g, cl = _prepared(lo, hi, degree)
    if a == b:
        return True
    if a in g or b in g:
        return a in g and b in g and g[a] == g[b]
    return _word_equal(_cached_word(a, cl, degree), _cached_word(b, cl, degree))


@lru_cache(maxsize=256)
def _prepared(lo, hi, d):
    # validated pair -> (root groups, cuts); pure, so safe to memoize
    check_pair((lo, hi), d)
    return root_groups((lo, hi), d), tuple(cuts((lo, hi), d))


@lru_cache(maxsize=65536)
def _cached_word(t, cl, d):
    return _word(t, cl, d)


def periodic_angles(d: int, p: int) -> list:
    """All angles of period dividing p under x d."""
    N = d ** p - 1
    return [Fraction(k, N) for k in range(N)]


def landing_classes(pair, d: int, p: int) -> list:
    """Partition the angles of period dividing p by co-landing."""
    lo, hi = check_pair(pair, d)
    g = root_groups((lo, hi), d)
    cut_list = cuts((lo, hi), d)
    cl = {}
    groups = []
    for t in periodic_angles(d, p):
        if t in g:
            key = ("root", g[t])
        else:
            key = ("it", _canonical(_word(t, cut_list, d)))
        if key not in cl:
            cl[key] = len(groups)
            groups.append([])
        groups[cl[key]].append(t)
    return [tuple(sorted(c)) for c in groups]


def _canonical(word) -> tuple:
    # reduce to the primitive period so words of divisor periods compare equal
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and all(word[i] == word[i % k] for i in range(n)):
            return tuple(word[:k])
    return tuple(word)
