"""Birkhoff-James orthogonality predicates, one per sequence space.

Sup-normed spaces reduce to a 0-in-convex-hull test over the products
conj(x_n)*y_n at indices where |x_n| attains the norm, together with limits
of those products along norm-attaining subsequences.  l1 compares a signed
sum against the mass of y over the zero set of x, and lp tests a single
weighted sum for vanishing.  Verdicts are exact on exact single-atom inputs;
multi-atom tails and irrational signs run with explicit uncertainty and may
come back Indeterminate near the decision boundary.

Margins are scale-relative: hull distances divide by ||x||*||y||, the sum
predicates by their natural mass.  Exact verdicts on a zero-measure boundary
(lp's F = 0) report margin inf since exact arithmetic cannot be perturbed.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, InternalInvariantError, PeriodOverflowError, SpaceMembershipError
from .hull import contains_zero_conv
from .scalar import (
    APPROX,
    DEFAULT_TOL,
    EXACT,
    REAL,
    Scalar,
    Verdict,
    as_exponent,
    phi_weight,
    rational_pow,
    sqrt_bounds,
    verdict_fails,
    verdict_holds,
    verdict_indeterminate,
)
from .seqrep import (
    C,
    C0,
    L1,
    LINF,
    PERIOD_CAP,
    aligned,
    lp as lp_space,
    member_of,
    norm_enclosure,
    real_expsum_extrema,
    require_member,
    sup_attaining_indices,
)

_ENUM_TAIL_TERMS = 240


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _per_geo(atoms):
    per = None
    geos = []
    for a in atoms:
        if a.kind == "constant":
            per = (a.value,)
        elif a.kind == "periodic":
            per = a.values
        elif a.kind == "geometric":
            geos.append(a)
    return per, geos


def _geo_envelope(geos, k):
    return sum(g.a.abs_upper() * g.r.abs_upper() ** k for g in geos)


def _class_coeffs(geos, k0, L):
    """(coefficient, base) pairs so the class k = k0 + t*L, t >= 0 reads sum c*b^t', t' >= 1."""
    out = []
    for g in geos:
        base = g.r.pow_int(L)
        coeff = g.a * g.r.pow_int(k0) / base
        out.append((coeff, base))
    return out


def _class_vanishes(geos, k0, L):
    # distinct-base exponential sums with nonzero coefficients never vanish
    # identically, so vanishing means per-base coefficient cancellation
    merged = {}
    for coeff, base in _class_coeffs(geos, k0, L):
        key = (base.mode, base.re, base.im)
        merged[key] = merged.get(key, Scalar.zero()) + coeff
    return all(c.is_zero() for c in merged.values())


def _sup_product_data(x, y):
    """(finite-index products, limit products, uncertainty radius).

    The hull of the union decides sup-norm orthogonality.  uncertainty > 0
    only on the complex transient path, where the unenumerated rest of a
    product spiral is confined to a disk of that radius around its limit.
    """
    att = sup_attaining_indices(x)
    fin = [x.evaluate(n).conj() * y.evaluate(n) for n in att.indices]
    lim = []
    uncertainty = 0.0
    if not att.asymptotic:
        return fin, lim, 0.0
    T, _, _, xa, ya = aligned(x, y)
    px, xg = _per_geo(xa)
    py, yg = _per_geo(ya)
    if px is None:
        raise InternalInvariantError("asymptotic attainment without a periodic part")
    if py is None:
        py = (Scalar.zero(),)
    Px, Py = len(px), len(py)
    L = _lcm(Px, Py)
    if L > PERIOD_CAP:
        raise PeriodOverflowError(f"joint period {L} exceeds cap {PERIOD_CAP}")
    seen = set(att.indices)
    for n in range(x.prefix_len + 1, T + 1):
        if n in seen:
            continue
        if x.evaluate(n).mod_sq().re == att.norm_sq:
            fin.append(x.evaluate(n).conj() * y.evaluate(n))
    for c in range(L):
        k0 = c + 1  # tail offset class beyond the common base T
        u = px[c % Px]
        if u.mod_sq().re != att.norm_sq:
            continue
        w = py[c % Py]
        lim.append(u.conj() * w)
        if xg and not _class_vanishes(xg, k0, L):
            # x attains only in the limit along this class; its finitely many
            # exact-attainment offsets are already in att.indices
            continue
        if not yg or _class_vanishes(yg, k0, L):
            continue
        # x sits exactly at u along the class while y still moves: the class
        # contributes a whole transient product set
        terms = _class_coeffs(yg, k0, L)
        real_case = (
            u.exact and u.im == 0 and w.exact and w.im == 0
            and all(cf.exact and cf.im == 0 and b.exact and b.im == 0 for cf, b in terms)
        )
        if real_case:
            mn, mx = real_expsum_extrema([(cf.re * u.re, b.re) for cf, b in terms])
            base = u.re * w.re
            if mn != 0:
                fin.append(Scalar.rational(base + mn))
            if mx != 0:
                fin.append(Scalar.rational(base + mx))
        else:
            k = k0
            for _ in range(400):
                g = Scalar.zero()
                for atom in yg:
                    g = g + atom.value_at(k)
                fin.append(u.conj() * (w + g))
                k += L
                env = _geo_envelope(yg, k)
                if env * u.abs_upper() < 1e-30:
                    break
            uncertainty = max(uncertainty, _geo_envelope(yg, k) * u.abs_upper())
    return fin, lim, uncertainty


def _pair_scale(x, y, s):
    sx = norm_enclosure(x, s, Fraction(1, 10**6))[1]
    sy = norm_enclosure(y, s, Fraction(1, 10**6))[1]
    return max(float(sx * sy), 5e-324)


def _sup_orth(x, y, s, tol):
    require_member(x, s, "x")
    require_member(y, s, "y")
    if x.is_zero() or y.is_zero():
        return verdict_holds()
    fin, lim, unc = _sup_product_data(x, y)
    pts = fin + lim
    if not pts:
        raise InternalInvariantError("empty attaining product set for a nonzero sequence")
    scale = _pair_scale(x, y, s)
    v = contains_zero_conv(pts, tol)
    margin = v.margin / scale
    if unc > 0.0:
        if v.holds:
            return verdict_holds(margin, v.mode)
        if v.fails and v.margin > unc + tol * scale:
            return verdict_fails((v.margin - unc) / scale, APPROX)
        return verdict_indeterminate(margin)
    return Verdict(v.outcome, margin, v.mode)


def orth_linf(x, y, tol=DEFAULT_TOL):
    return _sup_orth(x, y, LINF, tol)


def orth_c(x, y, tol=DEFAULT_TOL):
    return _sup_orth(x, y, C, tol)


def orth_c0(x, y, tol=DEFAULT_TOL):
    return _sup_orth(x, y, C0, tol)


def orth_linf_real_enum(x, y, tol=DEFAULT_TOL):
    """Real-case cross-check: four enumerated sign conditions on attaining data.

    (i) a norm-attaining limit product is 0; (ii) two attaining limit products
    straddle 0; (iii) an attaining index product and an attaining limit
    product have strictly opposite signs; (iv) two attaining index products
    straddle 0.
    """
    if x.field != REAL or y.field != REAL:
        raise DomainError("the enumerated conditions are for the real field")
    require_member(x, LINF, "x")
    require_member(y, LINF, "y")
    if x.is_zero() or y.is_zero():
        return verdict_holds()
    fin, lim, unc = _sup_product_data(x, y)
    if unc > 0.0:
        raise InternalInvariantError("real enumeration produced an uncertain product set")
    f = [p.re for p in fin]
    g = [p.re for p in lim]
    cond_limit_zero = any(v == 0 for v in g)
    cond_two_limits = bool(g) and min(g) <= 0 <= max(g)
    cond_mixed = any(a * b < 0 for a in f for b in g)
    cond_two_indices = bool(f) and min(f) <= 0 <= max(f)
    ok = cond_limit_zero or cond_two_limits or cond_mixed or cond_two_indices
    return verdict_holds() if ok else verdict_fails()


# -- l1 ------------------------------------------------------------------------------


class _Accum:
    """Scalar accumulator plus an explicit extra uncertainty radius."""

    def __init__(self):
        self.value = Scalar.zero()
        self.extra = 0.0

    def add(self, s):
        self.value = self.value + s

    def add_uncertainty(self, r):
        self.extra += r

    def abs_interval(self):
        m = math.hypot(float(self.value.re), float(self.value.im))
        u = (0.0 if self.value.exact else self.value.tol) + self.extra
        return max(0.0, m - u), m + u

    @property
    def exact(self):
        return self.value.exact and self.extra == 0.0


class _PosAccum:
    """Sum of moduli as a rational interval plus an upper-side uncertainty."""

    def __init__(self):
        self.lo = Fraction(0)
        self.hi = Fraction(0)
        self.extra = 0.0

    def add_abs(self, s):
        if s.exact:
            if s.im == 0:
                q = abs(s.re)
                self.lo += q
                self.hi += q
                return
            msq = s.mod_sq().re
            root = rational_pow(msq, Fraction(1, 2))
            if root is not None:
                self.lo += root
                self.hi += root
                return
            a, b = sqrt_bounds(msq, Fraction(1, 10**20))
            self.lo += a
            self.hi += b
            return
        m = math.hypot(s.re, s.im)
        self.lo += Fraction(max(0.0, m - s.tol))
        self.hi += Fraction(m + s.tol)

    def add_rational(self, q):
        self.lo += q
        self.hi += q

    def add_upper(self, r):
        self.extra += r

    def interval(self):
        return float(self.lo), float(self.hi) + self.extra

    @property
    def exact(self):
        return self.lo == self.hi and self.extra == 0.0


def _geo_abs_closed_form(atom, acc):
    """Accumulate sum over k >= 1 of |a r^k| = |a||r|/(1-|r|)."""
    a_sq = atom.a.mod_sq().re if atom.a.exact else None
    r_sq = atom.r.mod_sq().re if atom.r.exact else None
    if a_sq is not None and r_sq is not None:
        aa = rational_pow(a_sq, Fraction(1, 2))
        rr = rational_pow(r_sq, Fraction(1, 2))
        if aa is not None and rr is not None:
            acc.add_rational(aa * rr / (1 - rr))
            return
        alo, ahi = sqrt_bounds(a_sq, Fraction(1, 10**20))
        rlo, rhi = sqrt_bounds(r_sq, Fraction(1, 10**20))
    else:
        ma = math.hypot(atom.a.re, atom.a.im)
        mr = math.hypot(atom.r.re, atom.r.im)
        alo, ahi = Fraction(max(0.0, ma - atom.a.tol)), Fraction(ma + atom.a.tol)
        rlo, rhi = Fraction(max(0.0, mr - atom.r.tol)), Fraction(min(0.999999, mr + atom.r.tol))
    acc.lo += alo * rlo / (1 - rlo)
    acc.hi += ahi * rhi / (1 - rhi)


def _tail_abs_sum(atoms, acc):
    """Accumulate sum over k >= 1 of |tail(k)| for geometric-only tails."""
    geos = [a for a in atoms if a.kind == "geometric"]
    if not geos:
        return
    if len(geos) == 1:
        _geo_abs_closed_form(geos[0], acc)
        return
    m = max(g.r.abs_upper() for g in geos)
    Cg = sum(g.a.abs_upper() for g in geos)
    for k in range(1, _ENUM_TAIL_TERMS + 1):
        v = Scalar.zero()
        for g in geos:
            v = v + g.value_at(k)
        acc.add_abs(v)
    acc.add_upper(Cg * m ** (_ENUM_TAIL_TERMS + 1) / (1 - m))


def orth_l1(a, b, tol=DEFAULT_TOL):
    """|sum conj(sgn(a_n)) b_n| <= sum of |b_n| over the zero set of a."""
    require_member(a, L1, "a")
    require_member(b, L1, "b")
    if a.is_zero() or b.is_zero():
        return verdict_holds()
    T, av, bv, aa, ba = aligned(a, b)
    lhs = _Accum()
    rhs = _PosAccum()
    for i in range(T):
        if av[i].is_zero():
            rhs.add_abs(bv[i])
        else:
            lhs.add(av[i].sgn(tol).conj() * bv[i])
    ag = [t for t in aa if t.kind == "geometric"]
    bg = [t for t in ba if t.kind == "geometric"]
    if not ag:
        _tail_abs_sum(ba, rhs)  # the whole tail of a vanishes
    elif len(ag) == 1:
        sa = ag[0].a.sgn(tol).conj()
        sr = ag[0].r.sgn(tol).conj()
        for atom in bg:
            q = sr * atom.r
            lhs.add(sa * atom.a * (q / (Scalar.one() - q)))
    else:
        # a_k can vanish by cancellation at scattered offsets
        mB = max((g.r.abs_upper() for g in bg), default=0.0)
        CB = sum(g.a.abs_upper() for g in bg)
        for k in range(1, _ENUM_TAIL_TERMS + 1):
            ak = Scalar.zero()
            for g in ag:
                ak = ak + g.value_at(k)
            bk = Scalar.zero()
            for g in bg:
                bk = bk + g.value_at(k)
            if ak.is_zero():
                rhs.add_abs(bk)
            else:
                lhs.add(ak.sgn(tol).conj() * bk)
        rem = CB * mB ** (_ENUM_TAIL_TERMS + 1) / (1 - mB) if bg else 0.0
        lhs.add_uncertainty(rem)
        rhs.add_upper(rem)
    rlo, rhi = rhs.interval()
    llo, lhi = lhs.abs_interval()
    scale = max(rhi, lhi, 5e-324)
    if lhs.exact and rhs.exact:
        lsq = lhs.value.mod_sq().re
        r = rhs.lo
        margin = abs(float(r) - math.sqrt(float(lsq))) / scale
        if lsq <= r * r:
            return verdict_holds(margin, EXACT)
        return verdict_fails(margin, EXACT)
    if lhi <= rlo:
        return verdict_holds((rlo - lhi) / scale, APPROX)
    if llo > rhi:
        return verdict_fails((llo - rhi) / scale, APPROX)
    return verdict_indeterminate(min(abs(rlo - lhi), abs(llo - rhi)) / scale)


def orth_l1_real_partition(a, b, tol=DEFAULT_TOL):
    """Real cross-check: | sum_{ab>0} |b| - sum_{ab<0} |b| | <= sum_{a=0} |b|."""
    if a.field != REAL or b.field != REAL:
        raise DomainError("the sign-partition form is for the real field")
    require_member(a, L1, "a")
    require_member(b, L1, "b")
    if a.is_zero() or b.is_zero():
        return verdict_holds()
    T, av, bv, aa, ba = aligned(a, b)
    pos = _PosAccum()
    neg = _PosAccum()
    zero = _PosAccum()
    for i in range(T):
        if av[i].is_zero():
            zero.add_abs(bv[i])
        else:
            prod = av[i].re * bv[i].re
            if prod > 0:
                pos.add_abs(bv[i])
            elif prod < 0:
                neg.add_abs(bv[i])
    ag = [t for t in aa if t.kind == "geometric"]
    bg = [t for t in ba if t.kind == "geometric"]
    if not ag:
        _tail_abs_sum(ba, zero)
    elif not bg:
        pass
    elif len(ag) == 1 and len(bg) == 1:
        alpha, rho = ag[0].a.re, ag[0].r.re
        beta, sigma = bg[0].a.re, bg[0].r.re
        babs, sabs = abs(beta), abs(sigma)
        s_const = 1 if alpha * beta > 0 else -1
        step = 1 if rho * sigma > 0 else -1
        if step == 1:
            (pos if s_const == 1 else neg).add_rational(babs * sabs / (1 - sabs))
        else:
            s2 = sabs * sabs
            even_total = babs * s2 / (1 - s2)  # even offsets keep s_const
            odd_total = babs * sabs / (1 - s2)  # odd offsets flip
            (pos if s_const == 1 else neg).add_rational(even_total)
            (neg if s_const == 1 else pos).add_rational(odd_total)
    else:
        mB = max(g.r.abs_upper() for g in bg)
        CB = sum(g.a.abs_upper() for g in bg)
        for k in range(1, _ENUM_TAIL_TERMS + 1):
            ak = sum((g.value_at(k).re for g in ag), Fraction(0))
            bk = sum((g.value_at(k).re for g in bg), Fraction(0))
            if ak == 0:
                zero.add_rational(abs(bk))
            elif ak * bk > 0:
                pos.add_rational(abs(bk))
            elif ak * bk < 0:
                neg.add_rational(abs(bk))
        rem = CB * mB ** (_ENUM_TAIL_TERMS + 1) / (1 - mB)
        pos.add_upper(rem)
        neg.add_upper(rem)
        zero.add_upper(rem)
    if pos.exact and neg.exact and zero.exact:
        lhs = abs(pos.lo - neg.lo)
        scale = max(float(pos.lo + neg.lo + zero.lo), 5e-324)
        margin = abs(float(zero.lo - lhs)) / scale
        if lhs <= zero.lo:
            return verdict_holds(margin, EXACT)
        return verdict_fails(margin, EXACT)
    plo, phi = pos.interval()
    nlo, nhi = neg.interval()
    zlo, zhi = zero.interval()
    lhs_lo = max(0.0, plo - nhi, nlo - phi)
    lhs_hi = max(abs(phi - nlo), abs(nhi - plo))
    scale = max(phi + nhi + zhi, 5e-324)
    if lhs_hi <= zlo:
        return verdict_holds((zlo - lhs_hi) / scale, APPROX)
    if lhs_lo > zhi:
        return verdict_fails((lhs_lo - zhi) / scale, APPROX)
    return verdict_indeterminate(min(abs(zlo - lhs_hi), abs(lhs_lo - zhi)) / scale)


# -- lp --------------------------------------------------------------------------------


def _phi(v, p, tol):
    return phi_weight(v, p, tol)


def orth_lp(x, y, p, tol=DEFAULT_TOL):
    """sum conj(sgn(x_n)) |x_n|^(p-1) y_n = 0, tested against tol * scale."""
    p = as_exponent(p)
    if not p > 1:
        raise DomainError("lp orthogonality needs 1 < p < inf")
    s = lp_space(p)
    require_member(x, s, "x")
    require_member(y, s, "y")
    if x.is_zero() or y.is_zero():
        return verdict_holds()
    T, xv, yv, xa, ya = aligned(x, y)
    F = _Accum()
    scale = 0.0
    for i in range(T):
        F.add(_phi(xv[i], p, tol) * yv[i])
        scale += xv[i].abs_upper() ** float(p - 1) * yv[i].abs_upper()
    xg = [t for t in xa if t.kind == "geometric"]
    yg = [t for t in ya if t.kind == "geometric"]
    if xg and yg:
        if len(xg) == 1:
            pa = _phi(xg[0].a, p, tol)
            pr = _phi(xg[0].r, p, tol)
            for atom in yg:
                q = pr * atom.r
                F.add(pa * atom.a * (q / (Scalar.one() - q)))
                qa = xg[0].r.abs_upper() ** float(p - 1) * atom.r.abs_upper()
                scale += (
                    xg[0].a.abs_upper() ** float(p - 1)
                    * atom.a.abs_upper() * qa / (1 - qa)
                )
        else:
            mX = max(g.r.abs_upper() for g in xg)
            CX = sum(g.a.abs_upper() for g in xg)
            mY = max(g.r.abs_upper() for g in yg)
            CY = sum(g.a.abs_upper() for g in yg)
            for k in range(1, _ENUM_TAIL_TERMS + 1):
                xk = Scalar.zero()
                for g in xg:
                    xk = xk + g.value_at(k)
                yk = Scalar.zero()
                for g in yg:
                    yk = yk + g.value_at(k)
                F.add(_phi(xk, p, tol) * yk)
                scale += xk.abs_upper() ** float(p - 1) * yk.abs_upper()
            qr = mX ** float(p - 1) * mY
            rem = CX ** float(p - 1) * CY * qr ** (_ENUM_TAIL_TERMS + 1) / (1 - qr)
            F.add_uncertainty(rem)
            scale += rem
    scale = max(scale, 5e-324)
    if F.exact:
        if F.value.is_zero():
            return verdict_holds(math.inf, EXACT)
        m = math.hypot(float(F.value.re), float(F.value.im))
        return verdict_fails(m / scale, EXACT)
    flo, fhi = F.abs_interval()
    if fhi <= tol * scale:
        return verdict_holds(max(0.0, tol - fhi / scale), APPROX)
    if flo > tol * scale:
        return verdict_fails(flo / scale, APPROX)
    return verdict_indeterminate(abs(fhi / scale - tol))


def birkhoff_james(s, x, y, tol=DEFAULT_TOL):
    """Per-space dispatch; x = 0 or y = 0 holds trivially."""
    if not member_of(x, s):
        raise SpaceMembershipError(f"x is not a member of {s}")
    if not member_of(y, s):
        raise SpaceMembershipError(f"y is not a member of {s}")
    if x.is_zero() or y.is_zero():
        return verdict_holds()
    if s.kind == "linf":
        return orth_linf(x, y, tol)
    if s.kind == "c":
        return orth_c(x, y, tol)
    if s.kind in ("c0", "c00"):
        return orth_c0(x, y, tol)
    if s.kind == "l1":
        return orth_l1(x, y, tol)
    return orth_lp(x, y, s.p, tol)
