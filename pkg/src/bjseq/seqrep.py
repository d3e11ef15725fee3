"""Exact infinite sequences: finite prefix + structured tail.

A SequenceRep stores x_1..x_N explicitly and defines x_n for n > N as the sum
of tail atoms evaluated at offset k = n - N:

    Zero        -> 0
    Constant c  -> c
    Periodic v  -> v[(k-1) mod len(v)]
    Geometric a,r -> a * r^k          (0 < |r| < 1, a != 0)

Canonical form: constants/periodics merged into at most one periodic atom,
geometrics merged per ratio, zero atoms dropped, prefix as short as possible.
Everything downstream (membership, norms, attainment, limits) works on the
canonical form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    InternalInvariantError,
    PeriodOverflowError,
    SpaceMembershipError,
    UnsupportedTailError,
    ValidationError,
)
from .scalar import (
    COMPLEX,
    LESS,
    REAL,
    Scalar,
    as_exponent,
    ceil_to_quantum,
    compare_mod,
    floor_to_quantum,
    pow_bounds,
    rational_pow,
    sqrt_bounds,
)

ZERO = "zero"
CONSTANT = "constant"
PERIODIC = "periodic"
GEOMETRIC = "geometric"

#: combined-period cap for lcm enumeration (joint limits, periodic merges)
PERIOD_CAP = 10**6


def _coerce(v):
    if isinstance(v, Scalar):
        return v
    return Scalar.rational(v)


@dataclass(frozen=True)
class TailAtom:
    kind: str
    value: Scalar | None = None          # constant
    values: tuple | None = None          # periodic
    a: Scalar | None = None              # geometric coefficient
    r: Scalar | None = None              # geometric ratio

    @staticmethod
    def zero():
        return TailAtom(ZERO)

    @staticmethod
    def constant(c):
        return TailAtom(CONSTANT, value=_coerce(c))

    @staticmethod
    def periodic(values):
        vals = tuple(_coerce(v) for v in values)
        if not vals:
            raise ValidationError("periodic atom needs at least one value")
        return TailAtom(PERIODIC, values=vals)

    @staticmethod
    def geometric(a, r):
        a = _coerce(a)
        r = _coerce(r)
        if a.is_zero():
            raise ValidationError("geometric atom needs a != 0")
        c = compare_mod(r, Scalar.one())
        if c != LESS:
            raise ValidationError("geometric ratio needs |r| < 1")
        if r.is_zero():
            raise ValidationError("geometric ratio needs r != 0")
        return TailAtom(GEOMETRIC, a=a, r=r)

    def value_at(self, k):
        """Value at tail offset k >= 1."""
        if self.kind == ZERO:
            return Scalar.zero()
        if self.kind == CONSTANT:
            return self.value
        if self.kind == PERIODIC:
            return self.values[(k - 1) % len(self.values)]
        return self.a * self.r.pow_int(k)

    def shifted(self, s):
        """Atom producing the same absolute values when the tail base moves right by s >= 0."""
        if s == 0 or self.kind in (ZERO, CONSTANT):
            return self
        if self.kind == PERIODIC:
            m = len(self.values)
            return TailAtom(PERIODIC, values=tuple(self.values[(i + s) % m] for i in range(m)))
        return TailAtom(GEOMETRIC, a=self.a * self.r.pow_int(s), r=self.r)

    def unshifted(self):
        """Atom for a tail base one step to the left (used by prefix absorption)."""
        if self.kind in (ZERO, CONSTANT):
            return self
        if self.kind == PERIODIC:
            m = len(self.values)
            return TailAtom(PERIODIC, values=tuple(self.values[(i - 1) % m] for i in range(m)))
        return TailAtom(GEOMETRIC, a=self.a / self.r, r=self.r)

    def scaled(self, lam):
        if self.kind == ZERO or lam.is_zero():
            return TailAtom(ZERO)
        if self.kind == CONSTANT:
            return TailAtom(CONSTANT, value=lam * self.value)
        if self.kind == PERIODIC:
            return TailAtom(PERIODIC, values=tuple(lam * v for v in self.values))
        return TailAtom(GEOMETRIC, a=lam * self.a, r=self.r)

    def is_exact(self):
        parts = []
        if self.kind == CONSTANT:
            parts = [self.value]
        elif self.kind == PERIODIC:
            parts = list(self.values)
        elif self.kind == GEOMETRIC:
            parts = [self.a, self.r]
        return all(p.exact for p in parts)

    def to_json(self):
        if self.kind == ZERO:
            return {"type": "zero"}
        if self.kind == CONSTANT:
            return {"type": "constant", "value": self.value.to_json()}
        if self.kind == PERIODIC:
            return {"type": "periodic", "values": [v.to_json() for v in self.values]}
        return {"type": "geometric", "a": self.a.to_json(), "r": self.r.to_json()}

    @staticmethod
    def from_json(obj):
        kind = obj.get("type")
        if kind == ZERO:
            return TailAtom.zero()
        if kind == CONSTANT:
            return TailAtom.constant(Scalar.from_json(obj["value"]))
        if kind == PERIODIC:
            return TailAtom.periodic([Scalar.from_json(v) for v in obj["values"]])
        if kind == GEOMETRIC:
            return TailAtom.geometric(Scalar.from_json(obj["a"]), Scalar.from_json(obj["r"]))
        raise ValidationError(f"unknown tail atom type {kind!r}")


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _minimal_period(values):
    m = len(values)
    for d in range(1, m + 1):
        if m % d == 0 and all(values[i] == values[i % d] for i in range(m)):
            return values[:d]
    return values


def _merge_atoms(atoms):
    """Combine constants/periodics into one atom and geometrics per ratio."""
    periodic_family = []
    geo_by_ratio = []
    for atom in atoms:
        if atom.kind == ZERO:
            continue
        if atom.kind == CONSTANT:
            periodic_family.append((atom.value,))
        elif atom.kind == PERIODIC:
            periodic_family.append(atom.values)
        else:
            for i, (r, a) in enumerate(geo_by_ratio):
                if r == atom.r:
                    geo_by_ratio[i] = (r, a + atom.a)
                    break
            else:
                geo_by_ratio.append((atom.r, atom.a))
    out = []
    if periodic_family:
        period = 1
        for vals in periodic_family:
            period = _lcm(period, len(vals))
            if period > PERIOD_CAP:
                raise PeriodOverflowError(f"combined period exceeds cap {PERIOD_CAP}")
        summed = []
        for i in range(period):
            s = Scalar.zero()
            for vals in periodic_family:
                s = s + vals[i % len(vals)]
            summed.append(s)
        summed = _minimal_period(tuple(summed))
        if len(summed) == 1:
            if not summed[0].is_zero():
                out.append(TailAtom(CONSTANT, value=summed[0]))
        else:
            out.append(TailAtom(PERIODIC, values=summed))
    geos = [(r, a) for r, a in geo_by_ratio if not a.is_zero()]
    geos.sort(key=lambda ra: (-float(ra[0].mod_sq().re), ra[0].sort_key(), ra[1].sort_key()))
    out.extend(TailAtom(GEOMETRIC, a=a, r=r) for r, a in geos)
    return tuple(out)


def _tail_value(atoms, k):
    s = Scalar.zero()
    for atom in atoms:
        s = s + atom.value_at(k)
    return s


class SequenceRep:
    """Canonical exact representation of an infinite sequence."""

    __slots__ = ("field", "prefix", "atoms")

    def __init__(self, prefix=(), tail=(), field=None):
        prefix = tuple(_coerce(v) for v in prefix)
        atoms = tuple(tail)
        for atom in atoms:
            if not isinstance(atom, TailAtom):
                raise ValidationError("tail must contain TailAtom values")
        atoms = _merge_atoms(atoms)
        # shortest-prefix normal form: absorb prefix entries the tail reproduces
        while prefix:
            shifted = tuple(a.unshifted() for a in atoms)
            if _tail_value(shifted, 1) == prefix[-1]:
                prefix = prefix[:-1]
                atoms = shifted
            else:
                break
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "atoms", atoms)
        if field is None:
            field = REAL
            for s in self._all_scalars():
                if s.field == COMPLEX or (s.exact and s.im != 0):
                    field = COMPLEX
                    break
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("SequenceRep is immutable")

    def _all_scalars(self):
        for v in self.prefix:
            yield v
        for atom in self.atoms:
            if atom.kind == CONSTANT:
                yield atom.value
            elif atom.kind == PERIODIC:
                yield from atom.values
            elif atom.kind == GEOMETRIC:
                yield atom.a
                yield atom.r

    # -- factories ------------------------------------------------------------

    @staticmethod
    def from_values(values, field=None):
        return SequenceRep(prefix=[_coerce(v) for v in values], tail=(), field=field)

    @staticmethod
    def basis(n):
        if n < 1:
            raise ValidationError("basis index must be >= 1")
        vals = [Scalar.zero()] * n
        vals[n - 1] = Scalar.one()
        return SequenceRep(prefix=vals)

    @staticmethod
    def constant(c, prefix=()):
        return SequenceRep(prefix=prefix, tail=(TailAtom.constant(c),))

    @staticmethod
    def periodic(values, prefix=()):
        return SequenceRep(prefix=prefix, tail=(TailAtom.periodic(values),))

    @staticmethod
    def geometric(a, r, prefix=()):
        return SequenceRep(prefix=prefix, tail=(TailAtom.geometric(a, r),))

    @staticmethod
    def zero_seq():
        return SequenceRep()

    # -- basic structure --------------------------------------------------------

    @property
    def prefix_len(self):
        return len(self.prefix)

    def is_zero(self):
        return not self.prefix and not self.atoms

    def is_exact(self):
        return all(s.exact for s in self._all_scalars())

    def evaluate(self, n):
        """Exact value x_n (1-based)."""
        if n < 1:
            raise ValidationError("indices are 1-based")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return _tail_value(self.atoms, n - len(self.prefix))

    def periodic_part(self):
        """(values tuple, period) of the merged periodic/constant atom, or (None, 1)."""
        for atom in self.atoms:
            if atom.kind == CONSTANT:
                return (atom.value,), 1
            if atom.kind == PERIODIC:
                return atom.values, len(atom.values)
        return None, 1

    def geo_atoms(self):
        return [a for a in self.atoms if a.kind == GEOMETRIC]

    def support_if_finite(self):
        """1-based nonzero indices when the sequence is eventually zero, else None."""
        if self.atoms:
            return None
        return [i + 1 for i, v in enumerate(self.prefix) if not v.is_zero()]

    def __eq__(self, other):
        if not isinstance(other, SequenceRep):
            return NotImplemented
        return self.prefix == other.prefix and self.atoms == other.atoms

    def __hash__(self):
        return hash((self.prefix, self.atoms))

    def __repr__(self):
        return f"SequenceRep(prefix={list(self.prefix)}, tail={list(self.atoms)})"

    # -- serialization -----------------------------------------------------------

    def to_json(self):
        return {
            "field": self.field,
            "prefix": [v.to_json() for v in self.prefix],
            "tail": [a.to_json() for a in self.atoms],
        }

    @staticmethod
    def from_json(obj):
        if not isinstance(obj, dict):
            raise ValidationError("sequence JSON must be an object")
        prefix = [Scalar.from_json(v) for v in obj.get("prefix", [])]
        tail = [TailAtom.from_json(a) for a in obj.get("tail", [])]
        field = obj.get("field")
        if field not in (None, REAL, COMPLEX):
            raise ValidationError(f"unknown field {field!r}")
        return SequenceRep(prefix=prefix, tail=tail, field=field)


def canonicalize(raw):
    """Re-canonicalize (idempotent); accepts (prefix, tail) pairs or SequenceRep."""
    if isinstance(raw, SequenceRep):
        return SequenceRep(prefix=raw.prefix, tail=raw.atoms, field=raw.field)
    prefix, tail = raw
    return SequenceRep(prefix=prefix, tail=tail)


# -- spaces --------------------------------------------------------------------


@dataclass(frozen=True)
class Space:
    kind: str
    p: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("linf", "c", "c0", "c00", "l1", "lp"):
            raise ValidationError(f"unknown space {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or not (1 < self.p):
                raise DomainError("lp requires an exponent p with 1 < p < inf")

    @property
    def sup_normed(self):
        return self.kind in ("linf", "c", "c0", "c00")

    def label(self):
        return self.kind if self.p is None else f"{self.kind}:{self.p}"

    def __str__(self):
        return self.label()


LINF = Space("linf")
C = Space("c")
C0 = Space("c0")
C00 = Space("c00")
L1 = Space("l1")


def lp(p):
    return Space("lp", as_exponent(p))


def space_from_args(name, p=None):
    name = name.lower()
    if name == "lp":
        if p is None:
            raise ValidationError("space lp requires --p")
        return lp(p)
    if p is not None:
        raise ValidationError(f"space {name!r} takes no exponent")
    return Space(name)


_ALLOWED_TAILS = {
    "linf": {CONSTANT, PERIODIC, GEOMETRIC},
    "c": {CONSTANT, GEOMETRIC},
    "c0": {GEOMETRIC},
    "c00": set(),
    "l1": {GEOMETRIC},
    "lp": {GEOMETRIC},
}


def member_of(x, s):
    """Exact membership of a canonical representation in a space."""
    kinds = {a.kind for a in x.atoms}
    return kinds <= _ALLOWED_TAILS[s.kind]


def require_member(x, s, name="sequence"):
    if not member_of(x, s):
        raise SpaceMembershipError(f"{name} is not a member of {s}")


def truncate(x, n):
    """Exact values x_1..x_n."""
    if n < 1:
        raise ValidationError("truncate needs n >= 1")
    return [x.evaluate(i) for i in range(1, n + 1)]


def add_scaled(x, lam, y):
    """Exact pointwise x + lam*y."""
    if x.field != y.field:
        raise ValidationError("add_scaled requires matching fields")
    lam = _coerce(lam)
    T = max(x.prefix_len, y.prefix_len)
    prefix = [x.evaluate(i) + lam * y.evaluate(i) for i in range(1, T + 1)]
    atoms = [a.shifted(T - x.prefix_len) for a in x.atoms]
    atoms += [a.shifted(T - y.prefix_len).scaled(lam) for a in y.atoms]
    return SequenceRep(prefix=prefix, tail=atoms)


def scale(x, lam):
    lam = _coerce(lam)
    return SequenceRep(
        prefix=[lam * v for v in x.prefix],
        tail=[a.scaled(lam) for a in x.atoms],
    )


# -- limits ----------------------------------------------------------------------


def limit_set(x):
    """All subsequential limits (a finite set of scalars)."""
    per, _ = x.periodic_part()
    if per is None:
        return {Scalar.zero(x.field)}
    out = []
    for v in per:
        if v not in out:
            out.append(v)
    return set(out)


def joint_limit_pairs(x, y):
    """All pairs (x*, y*) attainable as limits along a common subsequence."""
    T = max(x.prefix_len, y.prefix_len)
    xa = [a.shifted(T - x.prefix_len) for a in x.atoms]
    ya = [a.shifted(T - y.prefix_len) for a in y.atoms]

    def per_of(atoms):
        for a in atoms:
            if a.kind == CONSTANT:
                return (a.value,)
            if a.kind == PERIODIC:
                return a.values
        return (Scalar.zero(),)

    px, py = per_of(xa), per_of(ya)
    L = _lcm(len(px), len(py))
    if L > PERIOD_CAP:
        raise PeriodOverflowError(f"joint period {L} exceeds cap {PERIOD_CAP}")
    pairs = []
    for k in range(L):
        pair = (px[k % len(px)], py[k % len(py)])
        if pair not in pairs:
            pairs.append(pair)
    return set(pairs)


# -- real exponential-sum analysis ------------------------------------------------
#
# f(k) = sum_i c_i * b_i^k with rational c_i != 0 and 0 < |b_i| < 1.  Beyond a
# computable horizon the dominant base fixes the sign on each parity class, so
# sign patterns, zeros and attained extrema are all decidable by finite
# enumeration.


def _merge_terms(terms):
    d = {}
    for c, b in terms:
        d[b] = d.get(b, Fraction(0)) + c
    return [(c, b) for b, c in d.items() if c != 0]


def _analyze_positive(d):
    """d: base -> coeff with positive distinct bases; returns (sign, threshold t)."""
    if not d:
        return 0, 0
    bmax = max(d)
    cdom = d[bmax]
    t = 1
    while True:
        dom = abs(cdom) * bmax**t
        rest = sum(abs(c) * b**t for b, c in d.items() if b != bmax)
        if dom > rest:
            return (1 if cdom > 0 else -1), t
        t += 1
        if t > 10**6:
            raise InternalInvariantError("exponential-sum dominance did not stabilize")


def expsum_sign_horizon(terms):
    """(K, sign_even, sign_odd): for k >= K the sum has the fixed sign of its parity class.

    A sign of 0 means the sum vanishes identically on that class.
    """
    terms = _merge_terms(terms)
    even = {}
    odd = {}
    for c, b in terms:
        b2 = b * b
        even[b2] = even.get(b2, Fraction(0)) + c
        odd[b2] = odd.get(b2, Fraction(0)) + c * b
    even = {b: c for b, c in even.items() if c != 0}
    odd = {b: c for b, c in odd.items() if c != 0}
    se, te = _analyze_positive(even)
    so, to = _analyze_positive(odd)
    return max(2 * te, 2 * to + 1) + 2, se, so


def expsum_value(terms, k):
    return sum(c * b**k for c, b in terms) if terms else Fraction(0)


def real_expsum_extrema(terms):
    """Exact (min, max) of {f(k): k >= 1} united with the limit value 0.

    Both extremes of that closed set are attained (at a finite k or at the
    limit 0), so the enumeration below terminates: past the sign horizon each
    parity class keeps a fixed sign, and the envelope C*m^k caps all later
    values.
    """
    terms = _merge_terms(terms)
    if not terms:
        return Fraction(0), Fraction(0)
    K, se, so = expsum_sign_horizon(terms)
    C = sum(abs(c) for c, _ in terms)
    m = max(abs(b) for _, b in terms)
    mn = mx = Fraction(0)
    k = 1
    while True:
        v = expsum_value(terms, k)
        if v > mx:
            mx = v
        if v < mn:
            mn = v
        k += 1
        if k > 10**6:
            raise InternalInvariantError("exponential-sum extrema enumeration overran")
        if k <= K:
            continue
        envelope = C * m**k
        max_done = (se <= 0 and so <= 0) or envelope <= mx
        min_done = (se >= 0 and so >= 0) or envelope <= -mn
        if max_done and min_done:
            return mn, mx


def expsum_zeros(terms):
    """All k >= 1 with f(k) = 0; None when a whole parity class vanishes."""
    terms = _merge_terms(terms)
    if not terms:
        return None
    K, se, so = expsum_sign_horizon(terms)
    if se == 0 or so == 0:
        return None
    return [k for k in range(1, K + 1) if expsum_value(terms, k) == 0]


# -- sup-norm attainment ------------------------------------------------------------


@dataclass(frozen=True)
class SupAttainment:
    """Where |x_n| reaches the sup norm.

    indices: finite attaining indices (1-based).  asymptotic: some subsequence
    of |x_n| converges to the norm.  residues: 0-based tail offsets mod period
    whose limit values attain the norm (empty unless asymptotic via the
    periodic part).
    """

    norm_sq: Fraction
    indices: tuple
    asymptotic: bool
    residues: tuple
    period: int


def _real_fraction(s):
    if not s.exact or s.im != 0:
        raise UnsupportedTailError("this analysis needs exact real scalars")
    return s.re


def _tail_sup_data(x):
    """(candidates, per_sq, residues_by_sq) for the tail of x.

    candidates: list of (tail offset k, |value|^2 Fraction) that can attain the
    sup; per_sq: sup of squared moduli of the limit values; residues_by_sq:
    0-based residues attaining per_sq.
    """
    per, period = x.periodic_part()
    geos = x.geo_atoms()
    if per is None and not geos:
        return [], Fraction(0), [], 1
    if not geos:
        sqs = [v.mod_sq().re for v in per]
        per_sq = max(sqs)
        residues = [i for i, q in enumerate(sqs) if q == per_sq]
        return [], per_sq, residues, period
    if per is None and len(geos) == 1:
        g = geos[0]
        # |a r^k| is strictly decreasing, so only the first offset can attain
        return [(1, (g.a * g.r).mod_sq().re)], Fraction(0), [], 1
    # mixed or multi-geometric tails: exact analysis needs real scalars
    per_vals = [Fraction(0)] if per is None else [_real_fraction(v) for v in per]
    P = len(per_vals)
    gs = [(_real_fraction(g.a), _real_fraction(g.r)) for g in geos]
    sqs = [v * v for v in per_vals]
    per_sq = max(sqs)
    residues = [i for i, q in enumerate(sqs) if q == per_sq]

    Cg = sum(abs(a) for a, _ in gs)
    mg = max(abs(r) for _, r in gs)
    maxv = max(abs(v) for v in per_vals)

    # horizon beyond which |x_k|^2 keeps a fixed sign pattern relative to per_sq
    horizon = 1
    for rho in range(P):
        v = per_vals[rho]
        k0 = rho + 1
        # terms of |t_k|^2 - v^2 = 2 v g(k) + g(k)^2 restricted to k = k0 + t*P
        terms = []
        if v != 0:
            terms += [(2 * v * a * r**k0, r**P) for a, r in gs]
        for i, (ai, ri) in enumerate(gs):
            for j, (aj, rj) in enumerate(gs):
                terms.append((ai * aj * (ri * rj) ** k0, (ri * rj) ** P))
        gap = per_sq - v * v
        if gap == 0:
            K, _, _ = expsum_sign_horizon(terms)
            horizon = max(horizon, k0 + K * P)
        else:
            # below-norm residues: find where the excess envelope drops under the gap
            t = 0
            while 2 * maxv * Cg * mg ** (k0 + t * P) + (Cg * mg ** (k0 + t * P)) ** 2 >= gap:
                t += 1
                if t > 10**6:
                    raise InternalInvariantError("attainment horizon did not stabilize")
            horizon = max(horizon, k0 + t * P)

    def value(k):
        v = per_vals[(k - 1) % P]
        return v + sum(a * r**k for a, r in gs)

    best = per_sq
    cands = []
    k = 1
    while True:
        t = value(k)
        sq = t * t
        if sq > best:
            best = sq
            cands = [(k, sq)]
        elif sq == best:
            cands.append((k, sq))
        k += 1
        if k > 10**6:
            raise InternalInvariantError("attainment enumeration overran")
        if k <= horizon:
            continue
        if best == per_sq:
            # past every per-residue horizon the excess signs are fixed, so a
            # class that could exceed or tie the asymptotic level already did
            break
        U = (maxv + Cg * mg**k) ** 2
        if U < best:
            break
    return [(kk, q) for kk, q in cands if q == best], per_sq, residues, period


def sup_attaining_indices(x):
    """Attainment data for the sup norm of a nonzero canonical sequence."""
    if x.is_zero():
        raise DomainError("the zero sequence has no attaining set")
    if not x.is_exact():
        raise UnsupportedTailError("attainment analysis needs exact entries")
    prefix_sqs = [v.mod_sq().re for v in x.prefix]
    tail_cands, per_sq, residues, period = _tail_sup_data(x)
    norm_sq = max(prefix_sqs + [q for _, q in tail_cands] + [per_sq])
    indices = [i + 1 for i, q in enumerate(prefix_sqs) if q == norm_sq]
    indices += [x.prefix_len + k for k, q in tail_cands if q == norm_sq]
    asymptotic = per_sq == norm_sq and per_sq > 0
    res = tuple(residues) if asymptotic else ()
    if norm_sq == 0:
        raise InternalInvariantError("nonzero sequence with zero sup norm")
    return SupAttainment(
        norm_sq=norm_sq,
        indices=tuple(sorted(indices)),
        asymptotic=asymptotic,
        residues=res,
        period=period,
    )


# -- norms -------------------------------------------------------------------------


@dataclass(frozen=True)
class NormValue:
    """Rigorous norm enclosure; exact_power = (q, v) when norm**q == v exactly."""

    lo: Fraction
    hi: Fraction
    exact_power: tuple | None = None

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def midpoint(self):
        return float((self.lo + self.hi) / 2)

    def contains(self, v):
        return self.lo <= v <= self.hi

    def to_json(self):
        out = {"lo": str(self.lo), "hi": str(self.hi), "value": self.midpoint()}
        if self.exact_power is not None:
            q, v = self.exact_power
            out["exact_power"] = {"exponent": str(q), "value": str(v)}
        return out


def _abs_bounds(s, eps):
    """Rational bounds on |s| for an exact scalar."""
    msq = s.mod_sq().re
    if s.im == 0:
        return abs(s.re), abs(s.re)
    return sqrt_bounds(msq, eps)


def _require_exact(x):
    if not x.is_exact():
        raise UnsupportedTailError("rigorous norms need exact entries")


def _sup_norm_enclosure(x, eps):
    try:
        att = sup_attaining_indices(x) if not x.is_zero() else None
    except UnsupportedTailError:
        att = None
    if att is not None:
        lo, hi = sqrt_bounds(att.norm_sq, eps)
        return lo, hi, (Fraction(2), att.norm_sq)
    if x.is_zero():
        return Fraction(0), Fraction(0), (Fraction(1), Fraction(0))
    # fallback interval engine (complex mixed tails)
    lo = Fraction(0)
    his = []
    q = eps / 8
    for v in x.prefix:
        a, b = _abs_bounds(v, q)
        lo = max(lo, a)
        his.append(b)
    per, _ = x.periodic_part()
    geos = x.geo_atoms()
    per_hi = Fraction(0)
    if per is not None:
        for v in per:
            a, b = _abs_bounds(v, q)
            lo = max(lo, a)
            per_hi = max(per_hi, b)
    if not geos:
        return lo, max(his + [per_hi]) if (his or per is not None) else Fraction(0), None
    Cg = Fraction(0)
    mg = Fraction(0)
    for g in geos:
        _, ahi = _abs_bounds(g.a, q)
        _, rhi = _abs_bounds(g.r, q)
        Cg += ahi
        mg = max(mg, rhi)
    K = 1
    while Cg * mg**K > eps / 4:
        K += 1
        if K > 10**6:
            raise InternalInvariantError("sup enclosure tail did not decay")
    tail_his = []
    for k in range(1, K + 1):
        a, b = _abs_bounds(_tail_value(x.atoms, k), q)
        lo = max(lo, a)
        tail_his.append(b)
    hi = max(his + tail_his + [per_hi + Cg * mg ** (K + 1)])
    return lo, max(lo, hi), None


def _l1_norm_enclosure(x, eps):
    q = eps / (4 * (x.prefix_len + 4))
    lo = Fraction(0)
    hi = Fraction(0)
    exact = True
    for v in x.prefix:
        a, b = _abs_bounds(v, q)
        lo += a
        hi += b
        exact = exact and a == b
    geos = x.geo_atoms()
    if len(geos) == 1:
        g = geos[0]
        alo, ahi = _abs_bounds(g.a, q)
        rlo, rhi = _abs_bounds(g.r, q)
        lo += alo * rlo / (1 - rlo)
        hi += ahi * rhi / (1 - rhi)
        exact = exact and alo == ahi and rlo == rhi
    elif geos:
        exact = False
        Cg = Fraction(0)
        mg = Fraction(0)
        for g in geos:
            _, ahi = _abs_bounds(g.a, q)
            _, rhi = _abs_bounds(g.r, q)
            Cg += ahi
            mg = max(mg, rhi)
        K = 1
        while Cg * mg ** (K + 1) / (1 - mg) > eps / 4:
            K += 1
            if K > 10**6:
                raise InternalInvariantError("l1 enclosure tail did not decay")
        for k in range(1, K + 1):
            a, b = _abs_bounds(_tail_value(x.atoms, k), q)
            lo += a
            hi += b
        hi += Cg * mg ** (K + 1) / (1 - mg)
    if exact and lo == hi:
        return lo, hi, (Fraction(1), lo)
    return lo, hi, None


def _lp_power_sum_enclosure(x, p, eps):
    """Bounds on sum |x_n|^p; exact Fraction pair when representable."""
    q = eps / (8 * (x.prefix_len + 4))
    lo = Fraction(0)
    hi = Fraction(0)
    exact = True

    def add_power(msq):
        # |v|^p = (|v|^2)^(p/2)
        nonlocal lo, hi, exact
        ex = rational_pow(msq, p / 2)
        if ex is not None:
            lo += ex
            hi += ex
        else:
            a, b = pow_bounds(msq, p / 2, q)
            lo += a
            hi += b
            exact = False

    for v in x.prefix:
        add_power(v.mod_sq().re)
    geos = x.geo_atoms()
    if len(geos) == 1:
        g = geos[0]
        ap = rational_pow(g.a.mod_sq().re, p / 2)
        rp = rational_pow(g.r.mod_sq().re, p / 2)
        if ap is not None and rp is not None:
            lo += ap * rp / (1 - rp)
            hi += ap * rp / (1 - rp)
        else:
            exact = False
            alo, ahi = pow_bounds(g.a.mod_sq().re, p / 2, q)
            rlo, rhi = pow_bounds(g.r.mod_sq().re, p / 2, q)
            lo += alo * rlo / (1 - rlo)
            hi += ahi * rhi / (1 - rhi)
    elif geos:
        exact = False
        Cg = Fraction(0)
        mg = Fraction(0)
        for g in geos:
            _, ahi = _abs_bounds(g.a, q)
            _, rhi = _abs_bounds(g.r, q)
            Cg += ahi
            mg = max(mg, rhi)
        # remainder: sum_{k>K} (sum |a_i| m^k)^p <= C^p m^(p(K+1)) / (1 - m^p)
        Cp_lo, Cp_hi = pow_bounds(Cg, p, q)
        mp_lo, mp_hi = pow_bounds(mg, p, q)
        K = 1
        while Cp_hi * mp_hi ** (K + 1) / (1 - mp_hi) > eps / 4:
            K += 1
            if K > 10**6:
                raise InternalInvariantError("lp enclosure tail did not decay")
        for k in range(1, K + 1):
            add_power(_tail_value(x.atoms, k).mod_sq().re)
        hi += Cp_hi * mp_hi ** (K + 1) / (1 - mp_hi)
    return lo, hi, exact


def norm_enclosure(x, s, eps):
    """(lo, hi, exact_power) with hi - lo <= eps, rigorous."""
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    if eps <= 0:
        raise ValidationError("enclosure width must be positive")
    _require_exact(x)
    if x.is_zero():
        return Fraction(0), Fraction(0), (Fraction(1), Fraction(0))
    support = x.support_if_finite()
    if support is not None and len(support) == 1:
        # a single nonzero entry has the same norm |x_N| in every space
        v = x.evaluate(support[0])
        lo, hi = _abs_bounds(v, eps)
        return lo, hi, (Fraction(2), v.mod_sq().re)
    if s.sup_normed:
        lo, hi, ep = _sup_norm_enclosure(x, eps)
    elif s.kind == "l1":
        lo, hi, ep = _l1_norm_enclosure(x, eps)
    else:
        p = s.p
        attempt = eps
        for _ in range(80):
            slo, shi, exact_sum = _lp_power_sum_enclosure(x, p, attempt)
            if exact_sum and slo == shi:
                root = rational_pow(slo, 1 / p)
                if root is not None:
                    return root, root, (p, slo)
                lo, hi = pow_bounds(slo, 1 / p, eps)
                return lo, hi, (p, slo)
            lo = pow_bounds(slo, 1 / p, attempt / 4)[0]
            hi = pow_bounds(shi, 1 / p, attempt / 4)[1]
            if hi - lo <= eps:
                return floor_to_quantum(lo), ceil_to_quantum(hi), None
            attempt /= 16
        raise InternalInvariantError("lp norm enclosure failed to reach requested width")
    if hi - lo > eps and ep is None:
        raise InternalInvariantError("norm enclosure width contract violated")
    if ep is not None and lo != hi:
        lo2, hi2 = lo, hi
        if ep[0] == 2:
            lo2, hi2 = sqrt_bounds(ep[1], eps)
        return lo2, hi2, ep
    return lo, hi, ep


def norm(x, s, width=Fraction(1, 10**12)):
    """Norm of x in s as a NormValue (exact where the representation allows)."""
    if isinstance(width, float):
        width = Fraction(width)
    if width <= 0:
        raise ValidationError("norm width must be positive")
    require_member(x, s)
    lo, hi, ep = norm_enclosure(x, s, width)
    return NormValue(lo=lo, hi=hi, exact_power=ep)


def aligned(x, y):
    """(base, x values 1..base, y values, x atoms, y atoms) with both tails rebased."""
    T = max(x.prefix_len, y.prefix_len)
    xv = [x.evaluate(i) for i in range(1, T + 1)]
    yv = [y.evaluate(i) for i in range(1, T + 1)]
    xa = tuple(a.shifted(T - x.prefix_len) for a in x.atoms)
    ya = tuple(a.shifted(T - y.prefix_len) for a in y.atoms)
    return T, xv, yv, xa, ya
