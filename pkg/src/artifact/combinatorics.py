"""
Combinatorial model of a mating of two unicritical polynomials.

Rays of period dividing p are grouped into landing points in each plane;
the formal mating glues white angle t to black angle -t.  Connected
components of the resulting graph are ray classes.  A class that carries
arms (0-internal rays) of both critical cycles is a cluster point, and a
boundary walk around the class gives the circular order of its arms.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
import json

from .angles import (Angle, as_fraction, check_pair, cuts, arc_symbol, orbit,
                     period, root_groups, landing_classes, periodic_angles,
                     _word)
from .errors import InvalidInput, InvalidPair, MalformedConfiguration, NoCluster

WHITE, BLACK = "white", "black"
_TAG = {WHITE: "w", BLACK: "b"}


@dataclass(frozen=True)
class MatingSpec:
    """Degree plus two characteristic pairs.  ``critical_label`` names the
    plane whose critical point is taken as the first one."""
    degree: int
    pair_white: tuple
    pair_black: tuple
    critical_label: str = WHITE

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 2:
            raise InvalidInput("degree must be an integer >= 2")
        if self.critical_label not in (WHITE, BLACK):
            raise InvalidInput("critical_label must be 'white' or 'black'")
        w = check_pair(self.pair_white, self.degree)
        b = check_pair(self.pair_black, self.degree)
        if period(w[0], self.degree) != period(b[0], self.degree):
            raise InvalidPair("the two critical orbits must have equal period")
        object.__setattr__(self, "pair_white", tuple(Angle(x) for x in w))
        object.__setattr__(self, "pair_black", tuple(Angle(x) for x in b))

    @property
    def period(self) -> int:
        return period(self.pair_white[0], self.degree)

    def oriented(self):
        """(first pair, second pair) according to ``critical_label``."""
        if self.critical_label == WHITE:
            return self.pair_white, self.pair_black
        return self.pair_black, self.pair_white

    def swapped(self) -> "MatingSpec":
        other = BLACK if self.critical_label == WHITE else WHITE
        return MatingSpec(self.degree, self.pair_white, self.pair_black, other)

    @classmethod
    def from_dict(cls, obj):
        try:
            d = int(obj["degree"])
            white = tuple(obj["white"])
            black = tuple(obj["black"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInput(f"malformed spec: {e}") from None
        if len(white) != 2 or len(black) != 2:
            raise InvalidInput("each pair needs exactly two angles")
        return cls(d, white, black, obj.get("first_critical", WHITE))

    @classmethod
    def from_json(cls, text: str):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise InvalidInput(f"bad JSON: {e}") from None

    def to_dict(self):
        return {"degree": self.degree,
                "white": [str(a) for a in self.pair_white],
                "black": [str(a) for a in self.pair_black],
                "first_critical": self.critical_label}


@dataclass
class RayClass:
    members: frozenset          # {('white' | 'black', Angle)}
    closesCluster: bool = False
    cyclic: bool = False        # the class graph contains a loop
    arms: list = field(default_factory=list)

    def angles(self, tag):
        return sorted(a for t, a in self.members if t == tag)


@dataclass(frozen=True)
class StarModel:
    clusterPeriod: int
    arms: tuple                 # ((orbit 0|1, component index), ...) anticlockwise
    firstCriticalArm: int = 0
    clusters: tuple = ()        # arm lists of every cluster in the cycle


@dataclass(frozen=True)
class ClusterData:
    period: int
    rho: Fraction
    delta: int

    def to_dict(self):
        return {"period": self.period,
                "rho": f"{self.rho.numerator}/{self.rho.denominator}",
                "delta": self.delta}


@dataclass(frozen=True)
class LevyReport:
    obstructed: bool
    witness: str = ""


# ------------------------------------------------------------ ray graph

def nonprincipal_rays(pair, d: int, j: int) -> list:
    """Rays landing at the point of the critical component boundary with
    internal angle j/(d-1), for 1 <= j <= d-2."""
    lo, hi = check_pair(pair, d)
    oh = orbit(hi, d)
    p = len(oh)
    cl = cuts((lo, hi), d)
    c0 = oh[p - 1]
    word = [arc_symbol((c0 + Fraction(j, d)) % 1, cl, d)]
    word += [arc_symbol((lo * d ** (k - 1)) % 1, cl, d) for k in range(1, p)]
    # the boundary point has a well-defined word: resolve on the ccw side
    word = [cl.index(x) % d if s == "*" else s for s, x in
            zip(word, [(c0 + Fraction(j, d)) % 1] +
                [(lo * d ** (k - 1)) % 1 for k in range(1, p)])]
    g = root_groups((lo, hi), d)
    out = []
    for t in periodic_angles(d, p):
        if t in g:
            continue
        it = _word(t, cl, d)
        if p % len(it) == 0 and all(it[i % len(it)] == word[i] for i in range(p)):
            out.append(t)
    return out


def arm_rays(pair, d: int, j: int = 0) -> dict:
    """Map ray -> component index k for the corner where arm k sits.

    j = 0 uses the principal roots; otherwise the arms point at the boundary
    points of internal angle j/(d-1).
    """
    lo, hi = check_pair(pair, d)
    oh, ol = orbit(hi, d), orbit(lo, d)
    p = len(oh)
    if j == 0:
        return {ol[(k - 1) % p]: k % p for k in range(1, p + 1)}
    ys = nonprincipal_rays((lo, hi), d, j)
    res = {}
    for k in range(p):
        rays = sorted({(t * d ** k) % 1 for t in ys})
        target = oh[(k - 1) % p]
        for i, a in enumerate(rays):
            b = rays[(i + 1) % len(rays)]
            L = (b - a) % 1 or 1
            if 0 < (target - a) % 1 < L:
                res[a] = k
                break
    return res


class _Graph:
    """Landing points of both planes joined by glued rays."""

    def __init__(self, d, pw, pb, p):
        self.d, self.p = d, p
        self.W = landing_classes(pw, d, p)
        self.B = landing_classes(pb, d, p)
        self.wof = {a: i for i, c in enumerate(self.W) for a in c}
        self.bof = {a: i for i, c in enumerate(self.B) for a in c}
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        loops = set()
        for t in periodic_angles(d, p):
            u, v = ("w", self.wof[t]), ("b", self.bof[(-t) % 1])
            ru, rv = find(u), find(v)
            if ru == rv:
                loops.add(u)
            else:
                parent[ru] = rv
        comps = {}
        for i in range(len(self.W)):
            comps.setdefault(find(("w", i)), []).append(("w", i))
        for j in range(len(self.B)):
            comps.setdefault(find(("b", j)), []).append(("b", j))
        self.comps = list(comps.values())
        self.cyclic = {id(c) for c in self.comps
                       if any(find(u) == find(c[0]) for u in loops)}

    def rays(self, v):
        return (self.W if v[0] == "w" else self.B)[v[1]]

    def walk(self, comp, aw, ab):
        """Arms met on a boundary walk around a tree class, anticlockwise."""
        v = comp[0]
        r = self.rays(v)[0]
        total = sum(len(self.rays(u)) for u in comp)
        seq = []
        for _ in range(total):
            a = (aw if v[0] == "w" else ab).get(r)
            if a is not None:
                seq.append((0 if v[0] == "w" else 1, a))
            rs = self.rays(v)
            r2 = rs[(rs.index(r) + 1) % len(rs)]
            s = (-r2) % 1
            if v[0] == "w":
                v, r = ("b", self.bof[s]), s
            else:
                v, r = ("w", self.wof[s]), s
        return seq


def _search(spec: MatingSpec):
    d, p = spec.degree, spec.period
    pw, pb = (tuple(a.value for a in q) for q in spec.oriented())
    g = _Graph(d, pw, pb, p)
    found = None
    if not g.cyclic:
        for jw in range(d - 1):
            for jb in range(d - 1):
                aw, ab = arm_rays(pw, d, jw), arm_rays(pb, d, jb)
                cl = [s for s in (g.walk(c, aw, ab) for c in g.comps)
                      if {x[0] for x in s} == {0, 1}]
                if cl:
                    found = (jw, jb, aw, ab, cl)
                    break
            if found:
                break
    return g, found


def ray_classes(spec: MatingSpec) -> list:
    """Ray classes that carry at least one arm of either critical cycle.

    Members are tagged by plane relative to the first critical point
    ('white' is the plane of the first critical point).
    """
    g, found = _search(spec)
    if found:
        aw, ab = found[2], found[3]
    else:
        pw, pb = (tuple(a.value for a in q) for q in spec.oriented())
        aw, ab = arm_rays(pw, spec.degree), arm_rays(pb, spec.degree)
    out = []
    for comp in g.comps:
        cyc = id(comp) in g.cyclic
        members = set()
        for v in comp:
            tag = WHITE if v[0] == "w" else BLACK
            members.update((tag, Angle(a)) for a in g.rays(v))
        has_w = any(t == WHITE and a.value in aw for t, a in members)
        has_b = any(t == BLACK and a.value in ab for t, a in members)
        if not (has_w or has_b or cyc):
            continue
        arms = [] if cyc else g.walk(comp, aw, ab)
        out.append(RayClass(frozenset(members), has_w and has_b and not cyc, cyc, arms))
    return out


def cluster_data(spec: MatingSpec):
    """Cluster period, rotation number and critical displacement.

    Returns (ClusterData, StarModel).  Arms are labelled anticlockwise from the
    arm of the first critical point.  For a fixed cluster delta is the
    position of the second critical point's arm; for a longer cycle it is the
    position of the first image of the second critical point that returns to
    the first cluster.
    """
    g, found = _search(spec)
    if g.cyclic:
        raise NoCluster("a ray class contains a loop; the mating is obstructed")
    if not found:
        raise NoCluster("no ray class meets both critical cycles")
    cl = found[4]
    per = len(cl)
    p = spec.period
    first = next(c for c in cl if (0, 0) in c)
    i = first.index((0, 0))
    lab = first[i:] + first[:i]
    for k in range(len(lab)):
        if lab[k][0] == lab[(k + 1) % len(lab)][0]:
            raise NoCluster("arms do not alternate between the critical orbits")
    whites = [x[1] for x in lab if x[0] == 0]
    n = len(whites)
    shift = whites.index((whites[0] + per) % p) % n
    rho = Fraction(shift, n)
    if per == 1:
        delta = lab.index((1, 0))
    else:
        m = next((m for m in range(1, p + 1) if (1, m % p) in lab), None)
        if m is None:
            raise NoCluster("second critical orbit never returns to the first cluster")
        delta = lab.index((1, m % p))
    others = tuple(tuple(c) for c in cl)
    return ClusterData(per, rho, delta), StarModel(per, tuple(lab), 0, others)


# -------------------------------------------------------------- obstructions

@dataclass(frozen=True)
class ClusterConfiguration:
    """Explicit cluster cycle: period, arms per cluster and the clusters
    holding the two critical points."""
    period: int
    critical_clusters: tuple
    degree: int = 2
    arms: int = 2

    def __post_init__(self):
        if not (isinstance(self.period, int) and self.period >= 1):
            raise MalformedConfiguration("period must be a positive integer")
        if self.degree < 2:
            raise MalformedConfiguration("degree must be >= 2")
        if self.arms < 2 or self.arms % 2:
            raise MalformedConfiguration("a cluster has an even number >= 2 of arms")
        cc = tuple(self.critical_clusters)
        if len(cc) != 2 or any(not (0 <= c < self.period) for c in cc):
            raise MalformedConfiguration("critical_clusters must be two cluster indices")
        object.__setattr__(self, "critical_clusters", cc)


def levy_check(obj) -> LevyReport:
    """Decision table for Levy cycles in the bicritical cluster setting.

    A period-2 cycle with both critical points in one cluster is obstructed:
    the boundary of a small neighbourhood of that star maps to a curve
    isotopic to itself.  A ray class containing a loop is also reported.
    """
    if isinstance(obj, MatingSpec):
        g, found = _search(obj)
        if g.cyclic:
            comp = next(c for c in g.comps if id(c) in g.cyclic)
            angs = sorted({a for v in comp if v[0] == "w" for a in g.rays(v)})
            return LevyReport(True, "ray class with a loop through white angles "
                              + ", ".join(str(a) for a in angs[:6]))
        if not found:
            return LevyReport(False)
        cl = found[4]
        crit = [next(i for i, c in enumerate(cl) if (o, 0) in c) for o in (0, 1)]
        obj = ClusterConfiguration(len(cl), tuple(crit), obj.degree,
                                   len(cl[crit[0]]))
    elif isinstance(obj, dict):
        try:
            obj = ClusterConfiguration(int(obj["period"]),
                                       tuple(obj["critical_clusters"]),
                                       int(obj.get("degree", 2)),
                                       int(obj.get("arms", 2)))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedConfiguration(f"bad configuration: {e}") from None
    elif not isinstance(obj, ClusterConfiguration):
        raise MalformedConfiguration(f"cannot interpret {type(obj).__name__}")
    a, b = obj.critical_clusters
    if obj.period == 2 and a == b:
        return LevyReport(True, f"boundary of a neighbourhood of the star of "
                          f"cluster {a} (both critical points) maps to an "
                          f"isotopic curve by degree 1")
    return LevyReport(False)


def twist_solvable(degree: int, discrepancy: int):
    """Can m = discrepancy Dehn twists be reconciled?  Twisting k times in the
    domain forces d*k twists in the range, so we need (d-1)*k = m."""
    if degree < 2:
        raise InvalidInput("degree must be >= 2")
    if discrepancy % (degree - 1):
        return False, None
    return True, discrepancy // (degree - 1)
