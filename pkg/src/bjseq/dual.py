"""Support functionals: construct them where unique, verify them where characterized.

lp points get their unique norming functional as an unnormalized dual
sequence plus a stored normalizer power (||x||^(p-1) is irrational in
general, so the division happens in interval arithmetic on demand).
Sup-norm functionals are finite descriptors (coordinate index + unimodular
weight, or a limit functional), never dual sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classify import is_smooth
from .errors import DomainError, InternalInvariantError, SpaceMembershipError
from .scalar import (
    Scalar,
    phi_weight,
    pow_bounds,
    rational_pow,
    verdict_fails,
    verdict_holds,
)
from .seqrep import (
    L1,
    LINF,
    SequenceRep,
    TailAtom,
    aligned,
    lp as lp_space,
    member_of,
    norm_enclosure,
    require_member,
    sup_attaining_indices,
)

COORDINATE = "coordinate"
LIMIT = "limit"
SEQUENCE = "sequence"


def pairing(f, y):
    """Exact sum of f_n * y_n for sequences whose products are summable."""
    T, fv, yv, fa, ya = aligned(f, y)
    total = Scalar.zero()
    for i in range(T):
        total = total + fv[i] * yv[i]
    for af in fa:
        for ay in ya:
            total = total + _atom_pairing(af, ay)
    return total


def _atom_pairing(af, ay):
    if af.kind == "zero" or ay.kind == "zero":
        return Scalar.zero()
    if af.kind == "geometric" and ay.kind == "geometric":
        q = af.r * ay.r
        return af.a * ay.a * (q / (Scalar.one() - q))
    if af.kind in ("constant", "periodic") and ay.kind == "geometric":
        return _periodic_geo_pairing(af, ay)
    if ay.kind in ("constant", "periodic") and af.kind == "geometric":
        return _periodic_geo_pairing(ay, af)
    raise DomainError("pairing of two non-decaying tails diverges")


def _periodic_geo_pairing(per_atom, geo):
    vals = per_atom.values if per_atom.kind == "periodic" else (per_atom.value,)
    P = len(vals)
    rP = geo.r.pow_int(P)
    denom = Scalar.one() - rP
    total = Scalar.zero()
    for rho in range(1, P + 1):
        total = total + vals[rho - 1] * geo.a * geo.r.pow_int(rho) / denom
    return total


@dataclass(frozen=True)
class SupportFunctional:
    """Norm-one functional attaining the norm at its primal point."""

    space: object
    kind: str
    seq: SequenceRep | None = None       # unnormalized dual sequence
    norm_power: tuple | None = None      # (S, q): the normalizer equals S**q
    index: int | None = None
    weight: Scalar | None = None

    def _normalizer_bounds(self, eps=Fraction(1, 10**14)):
        if self.norm_power is None:
            return Fraction(1), Fraction(1)
        S, q = self.norm_power
        exact = rational_pow(S, q)
        if exact is not None:
            return exact, exact
        return pow_bounds(S, q, eps)

    def action(self, y):
        """f(y) as a Scalar (approx-tagged when the normalizer is irrational)."""
        if self.kind == COORDINATE:
            return self.weight * y.evaluate(self.index)
        if self.kind == LIMIT:
            per, period = y.periodic_part()
            if per is None:
                return Scalar.zero(y.field)
            if period != 1:
                raise DomainError("limit functional applied to a divergent sequence")
            return self.weight * per[0]
        num = pairing(self.seq, y)
        lo, hi = self._normalizer_bounds()
        if lo == hi and num.exact:
            return num.scale(Fraction(1) / lo)
        mid = (lo + hi) / 2
        val = num.as_complex() / float(mid)
        err = abs(val) * float(hi - lo) / float(lo) + (0.0 if num.exact else num.tol / float(lo))
        return Scalar.approx(val, err + 1e-15 * abs(val))

    def dual_norm_bounds(self, eps=Fraction(1, 10**12)):
        """Rational bounds on ||f||; equals 1 for every constructed functional."""
        if self.kind in (COORDINATE, LIMIT):
            msq = self.weight.mod_sq()
            if msq.exact:
                root = rational_pow(msq.re, Fraction(1, 2))
                if root is not None:
                    return root, root
                from .scalar import sqrt_bounds

                return sqrt_bounds(msq.re, eps)
            m = math.sqrt(msq.re)
            return Fraction(max(0.0, m - self.weight.tol)), Fraction(m + self.weight.tol)
        p = self.space.p
        q = p / (p - 1)
        dlo, dhi, _ = norm_enclosure(self.seq, lp_space(q), eps / 4)
        nlo, nhi = self._normalizer_bounds(eps / 4)
        return dlo / nhi, dhi / nlo

    def to_json(self):
        out = {"space": str(self.space), "kind": self.kind}
        if self.kind == SEQUENCE:
            out["sequence"] = self.seq.to_json()
            S, q = self.norm_power
            out["normalizer_power"] = {"base": str(S), "exponent": str(q)}
        else:
            out["index"] = self.index
            out["weight"] = self.weight.to_json()
        return out


def lp_support_functional(x, p):
    """The unique norming functional of a nonzero lp point."""
    s = lp_space(p)
    require_member(x, s)
    if x.is_zero():
        raise DomainError("the zero sequence has no support functional")
    p = s.p
    prefix = [phi_weight(v, p) for v in x.prefix]
    tail = []
    for g in x.geo_atoms():
        tail.append(TailAtom.geometric(phi_weight(g.a, p), phi_weight(g.r, p)))
    direction = SequenceRep(prefix=prefix, tail=tail)
    lo, hi, ep = norm_enclosure(x, s, Fraction(1, 10**12))
    if ep is not None and ep[0] == p:
        S = ep[1]
    elif ep is not None and ep[0] == 2:
        # single-entry fast path: norm^2 known; normalizer = (norm^2)^((p-1)/2)
        return SupportFunctional(
            space=s, kind=SEQUENCE, seq=direction, norm_power=(ep[1], (p - 1) / 2)
        )
    elif ep is not None and ep[0] == 1:
        S = ep[1] ** p.numerator if p.denominator == 1 else None
        if S is None:
            return SupportFunctional(
                space=s, kind=SEQUENCE, seq=direction, norm_power=(ep[1] ** 2, (p - 1) / 2)
            )
    else:
        # no exact power sum available: fall back to the squared enclosure midpoint
        raise InternalInvariantError("lp norm enclosure lost its exact power")
    return SupportFunctional(space=s, kind=SEQUENCE, seq=direction, norm_power=(S, (p - 1) / p))


def l1_is_support_functional(a, b, tol=1e-12):
    """Does b (in the dual, an linf element) norm the l1 point a?"""
    require_member(a, L1, "a")
    require_member(b, LINF, "b")
    if a.is_zero():
        raise DomainError("the zero sequence has no support functional")
    T, av, bv, aa, ba = aligned(a, b)
    for i in range(T):
        if av[i].is_zero():
            if not _mod_at_most_one(bv[i]):
                return verdict_fails()
        elif not _is_conj_sgn(bv[i], av[i]):
            return verdict_fails()
    ag = [t for t in aa if t.kind == "geometric"]
    b_per, b_period = _aligned_periodic(ba)
    b_geos = [t for t in ba if t.kind == "geometric"]
    if not ag:
        # tail of a vanishes: every tail value of b must stay in the unit ball
        if b_per is not None and not all(_mod_at_most_one(v) for v in b_per):
            return verdict_fails()
        for g in b_geos:
            if not _mod_at_most_one(g.a * g.r):
                return verdict_fails()
        return verdict_holds()
    if len(ag) > 1:
        return _l1_support_multi_geo(ag, b_per, b_period, b_geos)
    # b must equal the unimodular sign pattern of a's tail exactly
    if b_geos or b_per is None:
        return verdict_fails()
    alpha, rho = ag[0].a, ag[0].r
    w = rho.pow_int(b_period)
    if not (w.exact and w.im == 0 and w.re > 0):
        return verdict_fails()  # the sign pattern does not close up over b's period
    for k in range(1, b_period + 1):
        ak = alpha * rho.pow_int(k)
        if not _is_conj_sgn(b_per[(k - 1) % b_period], ak):
            return verdict_fails()
    return verdict_holds()


def _aligned_periodic(atoms):
    for t in atoms:
        if t.kind == "constant":
            return (t.value,), 1
        if t.kind == "periodic":
            return t.values, len(t.values)
    return None, 1


def _l1_support_multi_geo(ag, b_per, b_period, b_geos):
    from .errors import UnsupportedTailError
    from .seqrep import expsum_sign_horizon, expsum_zeros

    if any(not (g.a.exact and g.a.im == 0 and g.r.exact and g.r.im == 0) for g in ag):
        raise UnsupportedTailError("complex multi-geometric support verification")
    if b_geos or b_per is None:
        return verdict_fails()
    terms = [(g.a.re, g.r.re) for g in ag]
    zeros = expsum_zeros(terms)
    if zeros is None:
        raise UnsupportedTailError("a parity class of the tail vanishes identically")
    K, se, so = expsum_sign_horizon(terms)
    span = max(K, b_period * 2) + 2 * b_period
    for k in range(1, span + 1):
        ak = Fraction(0)
        for c, r in terms:
            ak += c * r**k
        bk = b_per[(k - 1) % b_period]
        if ak == 0:
            if not _mod_at_most_one(bk):
                return verdict_fails()
        elif not _is_conj_sgn(bk, Scalar.rational(ak)):
            return verdict_fails()
    # beyond the horizon the sign per parity is fixed; b must be 2-periodic-compatible
    if b_period % 2 == 0 or b_period == 1:
        return verdict_holds()
    return verdict_holds() if se == so else verdict_fails()


def _mod_at_most_one(v):
    m = v.mod_sq()
    if m.exact:
        return m.re <= 1
    return m.re <= 1 + m.tol


def _is_conj_sgn(b, a):
    """Exact test b == conj(sgn(a)) via b*a == |a| (real, nonnegative)."""
    if a.is_zero():
        return b.is_zero()
    z = b * a
    if z.exact and a.exact:
        return z.im == 0 and z.re >= 0 and z.re * z.re == a.mod_sq().re
    zf = z.as_complex()
    ma = math.sqrt(abs(a.mod_sq().re))
    err = (0.0 if z.exact else z.tol) + 1e-12 * max(1.0, ma)
    return abs(zf.imag) <= err and abs(zf.real - ma) <= err


def linf_smooth_support_functional(x):
    """Coordinate functional at the unique norm-attaining index of a smooth point."""
    if not is_smooth(LINF, x).holds:
        raise DomainError("the point is not smooth in the sup norm")
    att = sup_attaining_indices(x)
    N = att.indices[0]
    w = x.evaluate(N).sgn().conj()
    f = SupportFunctional(space=LINF, kind=COORDINATE, index=N, weight=w)
    action = f.action(x)
    if action.exact:
        if action.im != 0 or action.re * action.re != att.norm_sq:
            raise InternalInvariantError("coordinate functional does not norm its point")
    return f
