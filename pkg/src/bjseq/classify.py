"""Smoothness and left/right symmetry classification, with witness construction.

Classifiers decide membership in the characterized sets syntactically on
canonical representations; no sampling.  Witness operations return a partner
sequence whose two predicate evaluations (verified here before returning)
exhibit the asymmetry; closed-form constructions cover the representable
cases and a seeded search backs up the rest.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import DomainError, SearchExhaustedError, UnsupportedTailError
from .orth import birkhoff_james
from .scalar import EXACT, REAL, Scalar, rational_pow, sqrt_bounds, verdict_fails, verdict_holds
from .seqrep import (
    SequenceRep,
    TailAtom,
    add_scaled,
    expsum_zeros,
    member_of,
    norm as seq_norm,
    require_member,
    sup_attaining_indices,
)
from .seqrep import L1 as _L1

WITNESS_BUDGET = 400


def _require_nonzero(x):
    if x.is_zero():
        raise DomainError("classification needs a nonzero sequence")


def _reject_p2(s):
    if s.kind == "lp" and s.p == 2:
        raise DomainError("symmetry classification is undefined at p = 2")


def is_smooth(s, x):
    """Unique support functional?  Exact verdict per space."""
    require_member(x, s)
    _require_nonzero(x)
    if s.kind == "lp":
        return verdict_holds()
    if s.kind in ("linf", "c", "c0", "c00"):
        att = sup_attaining_indices(x)
        if s.kind == "linf":
            ok = len(att.indices) == 1 and not att.asymptotic
        elif s.kind == "c":
            ok = (len(att.indices) == 1 and not att.asymptotic) or len(att.indices) == 0
        else:
            ok = len(att.indices) == 1
        return verdict_holds() if ok else verdict_fails()
    # l1: smooth iff no term vanishes
    if any(v.is_zero() for v in x.prefix):
        return verdict_fails()
    geos = x.geo_atoms()
    if not geos:
        return verdict_fails()  # a zero tail means zero terms
    if len(geos) == 1:
        return verdict_holds()
    if all(g.a.exact and g.a.im == 0 and g.r.exact and g.r.im == 0 for g in geos):
        zeros = expsum_zeros([(g.a.re, g.r.re) for g in geos])
        return verdict_fails() if (zeros is None or zeros) else verdict_holds()
    raise UnsupportedTailError("zero detection for complex multi-geometric tails")


def is_left_symmetric(s, x):
    """Does x orthogonal to y force y orthogonal to x, for every y?"""
    require_member(x, s)
    _reject_p2(s)
    if x.is_zero():
        return verdict_holds()
    support = x.support_if_finite()
    if s.kind in ("linf", "c", "c0", "c00"):
        return verdict_holds() if support is not None and len(support) == 1 else verdict_fails()
    if s.kind == "l1":
        return verdict_fails()
    if support is None or len(support) > 2:
        return verdict_fails()
    if len(support) == 1:
        return verdict_holds()
    a, b = (x.evaluate(n) for n in support)
    return verdict_holds() if a.mod_sq().re == b.mod_sq().re else verdict_fails()


def is_right_symmetric(s, x):
    """Does y orthogonal to x force x orthogonal to y, for every y?"""
    require_member(x, s)
    _reject_p2(s)
    if x.is_zero():
        return verdict_holds()
    if s.kind in ("c0", "c00"):
        return verdict_fails()
    if s.kind == "l1":
        support = x.support_if_finite()
        return verdict_holds() if support is not None and len(support) == 1 else verdict_fails()
    if s.kind == "lp":
        return is_left_symmetric(s, x)
    # linf / c: every |x_n| equals the norm
    if x.geo_atoms() or not x.atoms:
        return verdict_fails()
    att = sup_attaining_indices(x)
    if any(v.mod_sq().re != att.norm_sq for v in x.prefix):
        return verdict_fails()
    per, _ = x.periodic_part()
    if any(v.mod_sq().re != att.norm_sq for v in per):
        return verdict_fails()
    return verdict_holds()


# -- witness machinery ---------------------------------------------------------------


def _first_nonzero_index(x, limit=64):
    for n in range(1, max(x.prefix_len, 1) + limit):
        if not x.evaluate(n).is_zero():
            return n
    raise DomainError("no nonzero index found")


def _exact_sgn(v):
    s = v.sgn()
    return s if s.exact else None


def _forward_verified(s, x, y, tol=1e-12):
    """(x orth y) holds and (y orth x) fails, each exact or fat-margined."""
    if not member_of(y, s) or y.is_zero():
        return False
    v1 = birkhoff_james(s, x, y, tol)
    v2 = birkhoff_james(s, y, x, tol)
    return (
        v1.holds
        and (v1.mode == EXACT or v1.margin > 10 * tol)
        and v2.fails
        and (v2.mode == EXACT or v2.margin > 10 * tol)
    )


def _reverse_verified(s, x, y, tol=1e-12):
    """(y orth x) holds and (x orth y) fails, each exact or fat-margined."""
    if not member_of(y, s) or y.is_zero():
        return False
    v1 = birkhoff_james(s, y, x, tol)
    v2 = birkhoff_james(s, x, y, tol)
    return (
        v1.holds
        and (v1.mode == EXACT or v1.margin > 10 * tol)
        and v2.fails
        and (v2.mode == EXACT or v2.margin > 10 * tol)
    )


def _random_search(s, x, rng, budget, verify, tol):
    top = x.prefix_len + 4
    for _ in range(budget):
        vals = [Fraction(0)] * rng.randint(1, top + 2)
        for i in range(len(vals)):
            if rng.random() < 0.6:
                vals[i] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        y = SequenceRep(prefix=vals)
        if not y.is_zero() and verify(s, x, y, tol):
            return y
    return None


def _basis_candidates(x):
    try:
        att = sup_attaining_indices(x)
    except (DomainError, UnsupportedTailError):
        return []
    out = []
    if att.asymptotic:
        out.append(_first_nonzero_index(x))
    else:
        attaining = set(att.indices)
        for n in range(1, x.prefix_len + 8):
            if n not in attaining and not x.evaluate(n).is_zero():
                out.append(n)
                break
        out.extend(att.indices)
    return list(dict.fromkeys(out))


def _lp_left_construction(s, x):
    p = s.p
    idx = []
    n = 1
    while len(idx) < 3 and n <= x.prefix_len + 4:
        if not x.evaluate(n).is_zero():
            idx.append(n)
        n += 1
    if len(idx) < 2:
        return None
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            N, M = idx[i], idx[j]
            vN, vM = x.evaluate(N), x.evaluate(M)
            if vN.mod_sq().re == vM.mod_sq().re:
                continue
            sN, sM = _exact_sgn(vN), _exact_sgn(vM)
            aN = rational_pow(vN.mod_sq().re, (p - 1) / 2)  # |x_N|^(p-1)
            aM = rational_pow(vM.mod_sq().re, (p - 1) / 2)
            if None in (sN, sM, aN, aM):
                continue
            vals = [Scalar.zero()] * max(N, M)
            vals[N - 1] = sN.scale(aM)
            vals[M - 1] = -sM.scale(aN)
            return SequenceRep(prefix=vals)
    if len(idx) >= 3:
        N, M, K = idx[:3]
        signs = [_exact_sgn(x.evaluate(n)) for n in (N, M, K)]
        if None in signs:
            return None
        vals = [Scalar.zero()] * K
        vals[N - 1] = signs[0]
        vals[M - 1] = -signs[1].scale(Fraction(1, 2))
        vals[K - 1] = -signs[2].scale(Fraction(1, 2))
        return SequenceRep(prefix=vals)
    return None


def _l1_left_construction(x):
    if x.field != REAL:
        return None
    L = x.prefix_len
    geos = x.geo_atoms()
    if len(geos) > 1:
        return None
    zero_idx = None
    for n in range(1, L + 1):
        if x.evaluate(n).is_zero():
            zero_idx = n
            break
    if zero_idx is None and not geos:
        zero_idx = L + 1
    if zero_idx is not None:
        # b_n = sgn(a_n)/2^n, then load the zero coordinate with twice its mass
        base = max(L, zero_idx)
        prefix = [x.evaluate(n).sgn().scale(Fraction(1, 2**n)) for n in range(1, base + 1)]
        tail = ()
        if geos:
            sa, sr = _exact_sgn(geos[0].a), _exact_sgn(geos[0].r)
            if sa is None or sr is None or sa.im != 0 or sr.im != 0:
                return None
            coeff = Fraction(sa.re * sr.re ** (base - L), 2**base)
            tail = (TailAtom.geometric(coeff, sr.re * Fraction(1, 2)),)
        b = SequenceRep(prefix=prefix, tail=tail)
        nb = seq_norm(b, _L1).lo
        return add_scaled(b, Scalar.rational(2 * nb), SequenceRep.basis(zero_idx))
    # no zero term: sign the head against a damped tail where the masses differ
    sa, sr = _exact_sgn(geos[0].a), _exact_sgn(geos[0].r)
    if sa is None or sr is None or sa.im != 0 or sr.im != 0:
        return None
    total = seq_norm(x, _L1).lo
    M = L
    while True:
        M += 1
        head = sum(abs(x.evaluate(n).re) for n in range(1, M + 1))
        if head != total - head:
            break
        if M > L + 64:
            return None
    prefix = [x.evaluate(n).sgn() for n in range(1, M + 1)]
    coeff = -M * sa.re * sr.re ** (M - L)
    tail = (TailAtom.geometric(coeff, sr.re * Fraction(1, 2)),)
    return SequenceRep(prefix=prefix, tail=tail)


def left_asymmetry_witness(s, x, rng=None, budget=WITNESS_BUDGET, tol=1e-12):
    """y with x orthogonal to y but not conversely; verified before returning."""
    if is_left_symmetric(s, x).holds:
        raise DomainError("the point is left-symmetric; no witness exists")
    rng = rng or random.Random(0)
    if s.kind in ("linf", "c", "c0", "c00"):
        candidates = [SequenceRep.basis(n) for n in _basis_candidates(x)]
    elif s.kind == "lp":
        c = _lp_left_construction(s, x)
        candidates = [c] if c is not None else []
    else:
        c = _l1_left_construction(x)
        candidates = [c] if c is not None else []
    for y in candidates:
        if _forward_verified(s, x, y, tol):
            return y
    y = _random_search(s, x, rng, budget, _forward_verified, tol)
    if y is not None:
        return y
    raise SearchExhaustedError("no verified left-asymmetry witness within budget")


def _sgn_pattern_tail(x, base):
    """Tail atom equal to sgn(x_n) beyond `base`, or None when unrepresentable."""
    per, period = x.periodic_part()
    geos = x.geo_atoms()
    if geos and per is not None:
        return None
    if geos:
        if len(geos) > 1:
            return None
        sa, sr = _exact_sgn(geos[0].a), _exact_sgn(geos[0].r)
        if sa is None or sr is None or sa.im != 0 or sr.im != 0:
            return None
        shift = base - x.prefix_len
        vals = [Scalar.rational(sa.re * sr.re ** (shift + j)) for j in (1, 2)]
        if vals[0] == vals[1]:
            return TailAtom.constant(vals[0])
        return TailAtom.periodic(vals)
    if per is not None:
        shift = base - x.prefix_len
        vals = []
        for j in range(1, period + 1):
            sv = _exact_sgn(per[(shift + j - 1) % period])
            if sv is None:
                return None
            vals.append(sv)
        if all(v == vals[0] for v in vals):
            return TailAtom.constant(vals[0])
        return TailAtom.periodic(vals)
    return TailAtom.zero()


def _sup_right_construction(s, x):
    att = sup_attaining_indices(x)
    N = None
    for n in range(1, x.prefix_len + 4):
        if x.evaluate(n).mod_sq().re != att.norm_sq:
            N = n
            break
    if N is None:
        return None
    if s.kind in ("c0", "c00"):
        top = max([N] + list(att.indices))
        vals = [Scalar.zero()] * top
        for n in att.indices:
            sv = _exact_sgn(x.evaluate(n))
            if sv is None:
                return None
            vals[n - 1] = sv
        vN = x.evaluate(N)
        vals[N - 1] = Scalar.one() if vN.is_zero() else -_exact_sgn(vN)
        return SequenceRep(prefix=vals)
    base = max([x.prefix_len, N] + list(att.indices))
    if x.geo_atoms():
        base = max(base, x.prefix_len + 1)
    tail = _sgn_pattern_tail(x, base)
    if tail is not None and s.kind == "c" and tail.kind == "periodic":
        # the alternating sign pattern leaves c; x converges to 0 there, so any
        # unimodular constant keeps y orthogonal through the limit term
        tail = TailAtom.constant(1)
    if tail is None:
        if s.kind == "c" and x.periodic_part()[0] is None:
            tail = TailAtom.constant(1)
        else:
            return None
    vals = []
    for n in range(1, base + 1):
        sv = _exact_sgn(x.evaluate(n))
        if sv is None:
            return None
        vals.append(sv)
    vN = x.evaluate(N)
    sN = _exact_sgn(vN)
    if sN is None:
        return None
    vals[N - 1] = Scalar.one() if vN.is_zero() else -sN
    return SequenceRep(prefix=vals, tail=() if tail.kind == "zero" else (tail,))


def _abs_bound_fractions(v):
    msq = v.mod_sq().re
    root = rational_pow(msq, Fraction(1, 2))
    if root is not None:
        return root, root
    return sqrt_bounds(msq, Fraction(1, 10**20))


def _l1_right_construction(x):
    # e_r for an r with |a_r| <= sum of the other moduli
    L = x.prefix_len
    candidates = [n for n in range(1, L + 1) if not x.evaluate(n).is_zero()]
    if x.geo_atoms():
        candidates += [L + 1, L + 2, L + 3]
    nv = seq_norm(x, _L1)
    for r in sorted(candidates, key=lambda n: float(x.evaluate(n).mod_sq().re)):
        lo, hi = _abs_bound_fractions(x.evaluate(r))
        if hi <= nv.lo - hi:
            return SequenceRep.basis(r)
    return None


def _lp_right_construction(s, x, rng, budget):
    p = s.p
    idx = []
    n = 1
    while len(idx) < 6 and n <= x.prefix_len + 4:
        if not x.evaluate(n).is_zero():
            idx.append(n)
        n += 1
    for i in range(len(idx)):
        for j in range(len(idx)):
            if i == j:
                continue
            N, M = idx[i], idx[j]
            vN, vM = x.evaluate(N), x.evaluate(M)
            if vN.mod_sq().re == vM.mod_sq().re:
                continue
            # need rational t with t^(p-1) = |x_M|/|x_N|
            t_sq = rational_pow(vM.mod_sq().re / vN.mod_sq().re, 1 / (p - 1))
            t = rational_pow(t_sq, Fraction(1, 2)) if t_sq is not None else None
            sN, sM = _exact_sgn(vN), _exact_sgn(vM)
            if t is None or sN is None or sM is None:
                continue
            vals = [Scalar.zero()] * max(N, M)
            vals[N - 1] = sN.scale(t)
            vals[M - 1] = -sM
            return SequenceRep(prefix=vals)
    # balanced integer combinations: u^(p-1)|x_N| = v^(p-1)|x_M| + w^(p-1)|x_K|
    supp = idx[:4]
    if len(supp) >= 3:
        mods = {}
        for n in supp:
            t = rational_pow(x.evaluate(n).mod_sq().re, Fraction(1, 2))
            if t is not None:
                mods[n] = t
        nodes = [n for n in supp if n in mods]
        for N in nodes:
            for M in nodes:
                for K in nodes:
                    if len({N, M, K}) != 3:
                        continue
                    sN = _exact_sgn(x.evaluate(N))
                    sM = _exact_sgn(x.evaluate(M))
                    sK = _exact_sgn(x.evaluate(K))
                    if None in (sN, sM, sK):
                        continue
                    for v in range(1, 25):
                        vp = rational_pow(Fraction(v), p - 1)
                        if vp is None:
                            continue
                        for w in range(1, 25):
                            wp = rational_pow(Fraction(w), p - 1)
                            if wp is None:
                                continue
                            target = (vp * mods[M] + wp * mods[K]) / mods[N]
                            u = rational_pow(target, 1 / (p - 1))
                            if u is None:
                                continue
                            vals = [Scalar.zero()] * max(N, M, K)
                            vals[N - 1] = sN.scale(u)
                            vals[M - 1] = -sM.scale(v)
                            vals[K - 1] = -sK.scale(w)
                            y = SequenceRep(prefix=vals)
                            if _reverse_verified(s, x, y):
                                return y
    return None


def right_asymmetry_witness(s, x, rng=None, budget=WITNESS_BUDGET, tol=1e-12):
    """y with y orthogonal to x but not conversely; verified before returning."""
    if x.is_zero():
        raise DomainError("the zero sequence is right-symmetric")
    if is_right_symmetric(s, x).holds:
        raise DomainError("the point is right-symmetric; no witness exists")
    rng = rng or random.Random(0)
    if s.kind in ("linf", "c", "c0", "c00"):
        c = _sup_right_construction(s, x)
    elif s.kind == "l1":
        c = _l1_right_construction(x)
    else:
        c = _lp_right_construction(s, x, rng, budget // 2)
    if c is not None and _reverse_verified(s, x, c, tol):
        return c
    y = _random_search(s, x, rng, budget, _reverse_verified, tol)
    if y is not None:
        return y
    raise SearchExhaustedError("no verified right-asymmetry witness within budget")
