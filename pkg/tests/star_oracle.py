"""Arm order at a cluster point, read off the picture of a realized map.

Points on a small circle around a periodic point are labelled by the point
of the superattracting cycles their orbit falls into under the first return
of the cycle.  Long runs of equal labels are the Fatou components of the
star, in anticlockwise order.  Only the realized map is used, not the
combinatorial model.
"""
import numpy as np


def _orbit_labels(f, z, cycle_points, period, rounds=60, eps=1e-6):
    z = np.array(z, complex)
    for _ in range(rounds * period):
        with np.errstate(all="ignore"):
            z = f(z)
    lab = np.full(z.shape, -1)
    # the final positions sit on a cycle; snap by chordal distance
    for k, w in enumerate(cycle_points):
        if np.isinf(w):
            hit = ~np.isfinite(z) | (np.abs(z) > 1 / eps)
        else:
            hit = np.abs(z - w) < eps * max(1, abs(w))
        lab[hit] = k
    return lab


def arm_order(f, x, cycle_points, period, r=1e-3, n=20000, min_frac=0.01):
    """Labels of the star components around x, anticlockwise from angle 0.

    Runs shorter than ``min_frac`` of the circle (small far-away components
    and the Julia set) are dropped.
    """
    th = 2 * np.pi * np.arange(n) / n
    lab = _orbit_labels(f, x + r * np.exp(1j * th), cycle_points, period)
    # rotate so the circle starts at a label change
    cut = np.nonzero(lab != np.roll(lab, 1))[0]
    lab = np.roll(lab, -cut[0]) if len(cut) else lab
    runs, start = [], 0
    for i in range(1, n + 1):
        if i == n or lab[i] != lab[start]:
            runs.append((lab[start], i - start))
            start = i
    keep = [k for k, m in runs if m >= min_frac * n and k >= 0]
    out = []
    for k in keep:
        if not out or out[-1] != k:
            out.append(k)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def delta_from_order(order, first, second):
    """Anticlockwise count of arms from ``first`` to ``second``."""
    i = order.index(first)
    lab = order[i:] + order[:i]
    return lab.index(second)


def periodic_points(f, k):
    """Points of period dividing k of a rational map in normal form."""
    # Newton from a grid of seeds on f^k(z) - z; duplicates merged
    xs = np.linspace(-3, 3, 61)
    z = (xs[None, :] + 1j * xs[:, None]).ravel()
    with np.errstate(all="ignore"):
        for _ in range(80):
            w, dw = z, np.ones_like(z)
            for _ in range(k):
                dw = dw * f.derivative(w)
                w = f(w)
            z = z - (w - z) / (dw - 1)
        w = z
        for _ in range(k):
            w = f(w)
    ok = np.isfinite(z) & (np.abs(w - z) < 1e-9)
    out = []
    for x in z[ok]:
        if all(abs(x - o) > 1e-7 for o in out):
            out.append(x)
    return np.array(out)


def cluster_from_map(f, positions, p, per, radii=(1e-2, 3e-3, 1e-3, 3e-4, 1e-4),
                     min_frac=0.03):
    """(rho, delta) read off the realized map.

    ``positions`` lists the white cycle then the black cycle (w0 = 0 is the
    first critical point, b0 = inf the second).  Candidate cluster points are
    the points of period ``per``.  At a candidate, every radius that shows
    each expected arm exactly once casts a vote; the most common reading over
    all candidates wins.
    """
    from collections import Counter
    from fractions import Fraction
    n_arms = 2 * p // per
    votes = Counter()
    for x in periodic_points(f, per):
        if not np.isfinite(x):
            continue
        for r in radii:
            order = [int(k) for k in arm_order(f, x, positions, p, r=r, min_frac=min_frac)]
            if len(order) != n_arms or len(set(order)) != n_arms or 0 not in order:
                continue
            i = order.index(0)
            lab = order[i:] + order[:i]
            whites = [k for k in lab if k < p]
            if per % p not in whites:
                continue
            rho = Fraction(whites.index(per % p), len(whites))
            if per == 1:
                if p not in lab:
                    continue
                delta = lab.index(p)
            else:
                m = next((m for m in range(1, p + 1) if p + m % p in lab), None)
                if m is None:
                    continue
                delta = lab.index(p + m % p)
            votes[(rho, delta)] += 1
    return votes.most_common(1)[0][0] if votes else None
