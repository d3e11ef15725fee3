"""Does 0 lie in the convex hull of finitely many scalars?

Exact scalars are decided with rational orientation predicates (1D for real
sets, monotone-chain hull + point-in-polygon in the plane for complex sets).
Approximate scalars reuse the same exact predicate on their float values
(floats are rationals) and add a tolerance band around the boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ValidationError
from .scalar import (
    APPROX,
    DEFAULT_TOL,
    EXACT,
    Verdict,
    verdict_fails,
    verdict_holds,
    verdict_indeterminate,
)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _convex_hull(pts):
    """Monotone chain; returns hull vertices in counterclockwise order."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _zero_in_hull(pts):
    """Exact containment of the origin in conv(pts); pts are Fraction pairs."""
    pts = list(set(pts))
    origin = (Fraction(0), Fraction(0))
    if origin in pts:
        return True
    if len(pts) == 1:
        return False
    p0 = pts[0]
    d = None
    for p in pts[1:]:
        if p != p0:
            d = (p[0] - p0[0], p[1] - p0[1])
            break
    if d is None:
        return False
    if all(_cross(p0, p, q) == 0 for p in pts for q in pts):
        # collinear set: origin must sit on the line within the parameter range
        if _cross((Fraction(0), Fraction(0)), d, (-p0[0], -p0[1])) != 0:
            return False
        dd = d[0] * d[0] + d[1] * d[1]
        ts = [((p[0] - p0[0]) * d[0] + (p[1] - p0[1]) * d[1]) / dd for p in pts]
        t0 = (-p0[0] * d[0] - p0[1] * d[1]) / dd
        return min(ts) <= t0 <= max(ts)
    hull = _convex_hull(pts)
    n = len(hull)
    for i in range(n):
        a = hull[i]
        b = hull[(i + 1) % n]
        if _cross(a, b, origin) < 0:
            return False
    return True


def _seg_dist(a, b):
    """Euclidean distance from the origin to segment [a, b] (floats)."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return math.hypot(ax, ay)
    t = max(0.0, min(1.0, (-ax * dx - ay * dy) / dd))
    return math.hypot(ax + t * dx, ay + t * dy)


def _boundary_distance(pts, inside):
    """Float distance from the origin to the boundary of conv(pts).

    For collinear sets the hull is a segment of a line; its boundary (in the
    line) is the pair of extreme points, so interior origins measure to those.
    """
    pts = list(set(pts))
    if len(pts) == 1:
        return math.hypot(float(pts[0][0]), float(pts[0][1]))
    hull = _convex_hull(pts)
    if len(hull) == 1:
        return math.hypot(float(hull[0][0]), float(hull[0][1]))
    if len(hull) == 2:
        if inside:
            return min(math.hypot(float(p[0]), float(p[1])) for p in hull)
        return _seg_dist(hull[0], hull[1])
    n = len(hull)
    return min(_seg_dist(hull[i], hull[(i + 1) % n]) for i in range(n))


def contains_zero_conv(points, tol=DEFAULT_TOL):
    """Verdict on 0 in conv(points) for a nonempty collection of scalars."""
    points = list(points)
    if not points:
        raise ValidationError("convex hull test needs at least one point")
    exact = all(p.exact for p in points)
    if exact:
        pts = [(p.re, p.im) for p in points]
        inside = _zero_in_hull(pts)
        margin = _boundary_distance(pts, inside)
        return verdict_holds(margin, EXACT) if inside else verdict_fails(margin, EXACT)
    pts = []
    spread = 1.0
    for p in points:
        re, im = p.as_float_pair()
        pts.append((Fraction(re), Fraction(im)))
        spread = max(spread, math.hypot(re, im))
    inside = _zero_in_hull(pts)
    margin = _boundary_distance(pts, inside)
    band = tol * spread + sum(getattr(p, "tol", 0.0) for p in points)
    if margin <= band:
        return verdict_indeterminate(margin, APPROX)
    return verdict_holds(margin, APPROX) if inside else verdict_fails(margin, APPROX)


def zero_in_hull_brute(points):
    """Caratheodory cross-check: 0 in some sub-simplex of up to 3 points (exact)."""
    pts = [(p.re, p.im) for p in points]
    n = len(pts)
    for i in range(n):
        if pts[i] == (0, 0):
            return True
    for i in range(n):
        for j in range(i + 1, n):
            if _on_segment(pts[i], pts[j]):
                return True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _in_triangle(pts[i], pts[j], pts[k]):
                    return True
    return False


def _on_segment(a, b):
    if _cross(a, b, (Fraction(0), Fraction(0))) != 0:
        return False
    dot = (-a[0]) * (b[0] - a[0]) + (-a[1]) * (b[1] - a[1])
    dd = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    if dd == 0:
        return a == (0, 0)
    return 0 <= dot <= dd


def _in_triangle(a, b, c):
    o = (Fraction(0), Fraction(0))
    d1 = _cross(a, b, o)
    d2 = _cross(b, c, o)
    d3 = _cross(c, a, o)
    if d1 == d2 == d3 == 0:
        return _on_segment(a, b) or _on_segment(b, c) or _on_segment(a, c)
    has_neg = d1 < 0 or d2 < 0 or d3 < 0
    has_pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (has_neg and has_pos)


__all__ = ["contains_zero_conv", "zero_in_hull_brute", "Verdict"]
