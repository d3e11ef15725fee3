"""Field-generic scalars: exact rationals / rational pairs, or tolerance-tagged floats.

Exact real scalars are Fractions, exact complex scalars are pairs of Fractions
(Gaussian rationals).  Approximate scalars carry an absolute tolerance that is
propagated (first order, with the cross term kept) through arithmetic.  The
modulus is never taken directly in exact mode; comparisons go through mod_sq,
which stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ValidationError

REAL = "real"
COMPLEX = "complex"
EXACT = "exact"
APPROX = "approx"

HOLDS = "holds"
FAILS = "fails"
INDETERMINATE = "indeterminate"

LESS = "less"
EQUAL = "equal"
GREATER = "greater"

#: default absolute tolerance used when exact arithmetic degrades (e.g. complex
#: sgn with irrational modulus); overridable per call and via the CLI.
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class Verdict:
    """Three-valued predicate result.

    margin is a nonnegative distance (in the tested quantity's own units,
    usually scale-relative) from the decision boundary; exact verdicts that sit
    on a zero-measure boundary report math.inf since there is no uncertainty.
    """

    outcome: str
    margin: float
    mode: str

    def __post_init__(self):
        if self.mode == EXACT and self.outcome == INDETERMINATE:
            raise ValidationError("exact-mode verdicts cannot be indeterminate")

    @property
    def holds(self):
        return self.outcome == HOLDS

    @property
    def fails(self):
        return self.outcome == FAILS

    @property
    def indeterminate(self):
        return self.outcome == INDETERMINATE

    def to_json(self):
        return {"outcome": self.outcome, "margin": self.margin, "mode": self.mode}


def verdict_holds(margin=math.inf, mode=EXACT):
    return Verdict(HOLDS, margin, mode)


def verdict_fails(margin=math.inf, mode=EXACT):
    return Verdict(FAILS, margin, mode)


def verdict_indeterminate(margin, mode=APPROX):
    return Verdict(INDETERMINATE, margin, mode)


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ValidationError(f"not an exact rational: {v!r}")


class Scalar:
    """Immutable field- and mode-tagged scalar."""

    __slots__ = ("field", "mode", "re", "im", "tol")

    def __init__(self, field, mode, re, im, tol=0.0):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "tol", tol)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def rational(v):
        return Scalar(REAL, EXACT, _as_fraction(v), Fraction(0))

    @staticmethod
    def gaussian(re, im):
        return Scalar(COMPLEX, EXACT, _as_fraction(re), _as_fraction(im))

    @staticmethod
    def approx(value, tol=0.0, field=None):
        if isinstance(value, complex):
            f = field or COMPLEX
            return Scalar(f, APPROX, float(value.real), float(value.imag), float(tol))
        f = field or REAL
        return Scalar(f, APPROX, float(value), 0.0, float(tol))

    @staticmethod
    def zero(field=REAL):
        return Scalar(field, EXACT, Fraction(0), Fraction(0))

    @staticmethod
    def one(field=REAL):
        return Scalar(field, EXACT, Fraction(1), Fraction(0))

    # -- predicates ----------------------------------------------------------

    @property
    def exact(self):
        return self.mode == EXACT

    def is_zero(self):
        if self.exact:
            return self.re == 0 and self.im == 0
        return self.re == 0.0 and self.im == 0.0 and self.tol == 0.0

    # -- conversions ---------------------------------------------------------

    def as_float_pair(self):
        return float(self.re), float(self.im)

    def as_complex(self):
        return complex(float(self.re), float(self.im))

    def _to_approx(self):
        if self.exact:
            return Scalar(self.field, APPROX, float(self.re), float(self.im), 0.0)
        return self

    def _promote(self, other):
        field = COMPLEX if COMPLEX in (self.field, other.field) else REAL
        if self.exact and other.exact:
            return field, self, other
        return field, self._to_approx(), other._to_approx()

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        field, a, b = self._promote(other)
        if a.exact:
            return Scalar(field, EXACT, a.re + b.re, a.im + b.im)
        return Scalar(field, APPROX, a.re + b.re, a.im + b.im, a.tol + b.tol)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        if self.exact:
            return Scalar(self.field, EXACT, -self.re, -self.im)
        return Scalar(self.field, APPROX, -self.re, -self.im, self.tol)

    def __mul__(self, other):
        field, a, b = self._promote(other)
        re = a.re * b.re - a.im * b.im
        im = a.re * b.im + a.im * b.re
        if a.exact:
            return Scalar(field, EXACT, re, im)
        ma = math.hypot(a.re, a.im)
        mb = math.hypot(b.re, b.im)
        tol = ma * b.tol + mb * a.tol + a.tol * b.tol
        return Scalar(field, APPROX, re, im, tol)

    def conj(self):
        if self.exact:
            return Scalar(self.field, EXACT, self.re, -self.im)
        return Scalar(self.field, APPROX, self.re, -self.im, self.tol)

    def inv(self):
        if self.is_zero():
            raise DomainError("inverse of zero")
        if self.exact:
            msq = self.re * self.re + self.im * self.im
            return Scalar(self.field, EXACT, self.re / msq, -self.im / msq)
        z = 1.0 / complex(self.re, self.im)
        msq = self.re * self.re + self.im * self.im
        return Scalar(self.field, APPROX, z.real, z.imag, self.tol / msq)

    def __truediv__(self, other):
        return self * other.inv()

    def pow_int(self, k):
        """Integer power (k may be negative for nonzero scalars)."""
        if k == 0:
            return Scalar.one(self.field)
        base = self if k > 0 else self.inv()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def scale(self, q):
        """Multiply by an exact rational without field promotion."""
        q = _as_fraction(q)
        if self.exact:
            return Scalar(self.field, EXACT, self.re * q, self.im * q)
        qf = float(q)
        return Scalar(self.field, APPROX, self.re * qf, self.im * qf, self.tol * abs(qf))

    # -- modulus and sign ----------------------------------------------------

    def mod_sq(self):
        """|z|^2 as a real Scalar; exact in exact mode."""
        if self.exact:
            return Scalar(REAL, EXACT, self.re * self.re + self.im * self.im, Fraction(0))
        m2 = self.re * self.re + self.im * self.im
        m = math.sqrt(m2)
        return Scalar(REAL, APPROX, m2, 0.0, 2.0 * m * self.tol + self.tol * self.tol)

    def abs_upper(self):
        """Float upper bound on |z| (conservative in approx mode)."""
        if self.exact:
            msq = self.re * self.re + self.im * self.im
            return math.nextafter(math.sqrt(float(msq)), math.inf)
        return math.hypot(self.re, self.im) + self.tol

    def sgn(self, tol=DEFAULT_TOL):
        """z/|z| for z != 0, else 0.

        Exact in real mode and in complex mode when |z| is rational; otherwise
        degrades to an approx scalar tagged with tol.
        """
        if self.is_zero():
            return Scalar(self.field, EXACT, Fraction(0), Fraction(0)) if self.exact else self
        if not self.exact:
            m = math.hypot(self.re, self.im)
            t = (self.tol / m + tol) if m > 0 else tol
            return Scalar(self.field, APPROX, self.re / m, self.im / m, t)
        if self.im == 0:
            s = Fraction(1) if self.re > 0 else Fraction(-1)
            return Scalar(self.field, EXACT, s, Fraction(0))
        msq = self.re * self.re + self.im * self.im
        root = rational_sqrt(msq)
        if root is not None:
            return Scalar(COMPLEX, EXACT, self.re / root, self.im / root)
        m = math.hypot(float(self.re), float(self.im))
        return Scalar(COMPLEX, APPROX, float(self.re) / m, float(self.im) / m, tol)

    # -- equality / ordering helpers ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.mode != other.mode:
            return False
        return self.re == other.re and self.im == other.im and self.tol == other.tol

    def __hash__(self):
        return hash((self.mode, self.re, self.im, self.tol))

    def sort_key(self):
        return (float(self.re), float(self.im))

    def __repr__(self):
        if self.exact:
            if self.im == 0:
                return f"Scalar({self.re})"
            return f"Scalar({self.re}+{self.im}i)"
        return f"Scalar(~{self.re}{self.im:+}i, tol={self.tol:g})"

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        if self.exact:
            if self.field == REAL and self.im == 0:
                return str(self.re)
            return {"re": str(self.re), "im": str(self.im)}
        if self.field == REAL:
            return {"value": self.re, "tol": self.tol}
        return {"value": {"re": self.re, "im": self.im}, "tol": self.tol}

    @staticmethod
    def from_json(obj):
        if isinstance(obj, (str, int)):
            return Scalar.rational(obj)
        if isinstance(obj, float):
            raise ValidationError(
                "bare floats are ambiguous; use a rational string or {'value':..., 'tol':...}"
            )
        if not isinstance(obj, dict):
            raise ValidationError(f"cannot parse scalar from {obj!r}")
        if "value" in obj:
            tol = float(obj.get("tol", 0.0))
            v = obj["value"]
            if isinstance(v, dict):
                return Scalar(COMPLEX, APPROX, float(v["re"]), float(v["im"]), tol)
            return Scalar(REAL, APPROX, float(v), 0.0, tol)
        if "re" in obj:
            return Scalar.gaussian(obj["re"], obj.get("im", 0))
        raise ValidationError(f"cannot parse scalar from {obj!r}")


def sgn(z, tol=DEFAULT_TOL):
    return z.sgn(tol)


def mod_sq(z):
    return z.mod_sq()


def compare_mod(z, w, tol=DEFAULT_TOL):
    """Compare |z| and |w| via mod_sq: LESS/EQUAL/GREATER, or INDETERMINATE in approx mode."""
    a = z.mod_sq()
    b = w.mod_sq()
    if a.exact and b.exact:
        if a.re < b.re:
            return LESS
        if a.re > b.re:
            return GREATER
        return EQUAL
    av, bv = float(a.re), float(b.re)
    band = a.tol + b.tol + tol * max(1.0, av, bv)
    if abs(av - bv) <= band:
        return INDETERMINATE
    return LESS if av < bv else GREATER


# -- exact roots and rigorous rational power bounds ---------------------------


def int_nth_root(n, k):
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise DomainError("int_nth_root requires n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def rational_sqrt(x):
    """Exact square root of a nonnegative Fraction, or None if irrational."""
    x = _as_fraction(x)
    if x < 0:
        raise DomainError("rational_sqrt of a negative value")
    pn = math.isqrt(x.numerator)
    pd = math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def rational_nth_root(x, k):
    """Exact k-th root of a nonnegative Fraction, or None."""
    x = _as_fraction(x)
    if x < 0:
        raise DomainError("rational_nth_root of a negative value")
    rn = int_nth_root(x.numerator, k)
    rd = int_nth_root(x.denominator, k)
    if rn**k == x.numerator and rd**k == x.denominator:
        return Fraction(rn, rd)
    return None


def nth_root_bounds(x, k, eps):
    """Rational lo <= x**(1/k) <= hi with hi - lo <= eps (x >= 0 Fraction)."""
    x = _as_fraction(x)
    eps = _as_fraction(eps)
    if x < 0 or eps <= 0:
        raise DomainError("nth_root_bounds requires x >= 0, eps > 0")
    if x == 0:
        return Fraction(0), Fraction(0)
    exact = rational_nth_root(x, k)
    if exact is not None:
        return exact, exact
    # scale so the integer root has resolution 1/S <= eps
    s = max(1, (1 / eps).__ceil__().bit_length())
    S = 1 << s
    t = (x.numerator * S**k) // x.denominator
    r = int_nth_root(t, k)
    return Fraction(r, S), Fraction(r + 1, S)


def sqrt_bounds(x, eps):
    return nth_root_bounds(x, 2, eps)


def pow_bounds(x, p, eps):
    """Rational bounds on x**p for x >= 0 and positive rational p, width <= eps."""
    x = _as_fraction(x)
    p = _as_fraction(p)
    if p <= 0:
        raise DomainError("pow_bounds requires p > 0")
    if x == 0:
        return Fraction(0), Fraction(0)
    y = x**p.numerator
    return nth_root_bounds(y, p.denominator, eps)


def rational_pow(x, p):
    """x**p exactly as a Fraction when representable, else None (x >= 0)."""
    x = _as_fraction(x)
    p = _as_fraction(p)
    if x == 0:
        return Fraction(0)
    y = x**p.numerator
    if p.denominator == 1:
        return y
    return rational_nth_root(y, p.denominator)


def phi_weight(v, p, tol=DEFAULT_TOL):
    """conj(sgn(v)) * |v|^(p-1): exact when the power is rational and sgn exact."""
    if v.is_zero():
        return Scalar.zero()
    if v.exact:
        w = rational_pow(v.mod_sq().re, (p - 1) / 2)
        s = v.sgn(tol).conj()
        if w is not None and s.exact:
            return s.scale(w)
        m = math.sqrt(float(v.mod_sq().re))
        wf = m ** float(p - 1)
        if s.exact:
            s = Scalar.approx(complex(float(s.re), float(s.im)), 0.0, s.field)
        return s * Scalar.approx(wf, 1e-14 * wf)
    m = math.hypot(v.re, v.im)
    wf = m ** float(p - 1)
    dw = float(p - 1) * m ** (float(p) - 2.0) * v.tol if m > 0 else 0.0
    return v.sgn(tol).conj() * Scalar.approx(wf, dw + 1e-14 * wf)


def as_exponent(p):
    """Normalize a user-supplied exponent to an exact Fraction.

    Floats are accepted only when a denominator <= 10^6 rational reproduces the
    same float; this keeps exact-power arithmetic away from 2^52-sized dyadic
    denominators.
    """
    if isinstance(p, (int, Fraction)):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p)
    if isinstance(p, float):
        q = Fraction(p).limit_denominator(10**6)
        if float(q) == p:
            return q
        raise ValidationError(
            f"float exponent {p!r} is not a small rational; pass it exactly, e.g. '3/2'"
        )
    raise ValidationError(f"cannot interpret exponent {p!r}")


def floor_to_quantum(x, bits=80):
    """Round a Fraction down to denominator 2**bits (keeps intervals rigorous and small)."""
    S = 1 << bits
    return Fraction((x.numerator * S) // x.denominator, S)


def ceil_to_quantum(x, bits=80):
    S = 1 << bits
    return Fraction(-((-x.numerator * S) // x.denominator), S)
