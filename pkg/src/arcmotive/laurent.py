"""Exact arithmetic over Z[L, L^-1].

L is the distinguished invertible class every coefficient in this package is
built from; ring elements are finite sums ``sum_k c_k * L^k`` with integer
coefficients and integer exponents of either sign.  Everything here is exact:
coefficients are Python big integers, specialisations are ``Fraction``s, and
nothing in the package ever touches floating point.

The module also provides :class:`LaurentFraction`, reduced quotients of
Laurent polynomials.  Fractions appear only transiently: diagonal steps of
the recurrence systems divide by ``1 - L^(1-i)``, and limits of convergent
geometric series such as ``sum_{j>=1} L^-j = 1/(L-1)`` need a denominator
before cancellation brings the value back into the ring.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction


class NotAUnit(ArithmeticError):
    """Inversion was requested for an element that is not +-L^k."""


class ZeroBase(ZeroDivisionError):
    """L=0 was substituted into an element with negative exponents."""


def _as_terms(obj):
    if isinstance(obj, LaurentPoly):
        return obj._terms
    if isinstance(obj, int):
        return {0: obj} if obj else {}
    return None


class LaurentPoly:
    """Sparse Laurent polynomial in L, always in canonical form.

    The term map never stores a zero coefficient, so structural equality is
    ring equality and instances hash consistently.  Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exp, coeff in items:
                if not isinstance(exp, int) or not isinstance(coeff, int):
                    raise TypeError("exponents and coefficients must be int")
                if coeff:
                    c = clean.get(exp, 0) + coeff
                    if c:
                        clean[exp] = c
                    elif exp in clean:
                        del clean[exp]
        self._terms = clean

    # -- construction helpers -------------------------------------------------

    @classmethod
    def const(cls, n: int) -> "LaurentPoly":
        return cls({0: n})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls({exp: coeff})

    # -- basic queries ---------------------------------------------------------

    def terms(self):
        """Terms as a tuple of (exponent, coefficient), descending exponent."""
        return tuple(sorted(self._terms.items(), reverse=True))

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self):
        return min(self._terms) if self._terms else None

    def max_exp(self):
        return max(self._terms) if self._terms else None

    def is_unit_monomial(self) -> bool:
        """True when the element is exactly +-L^k."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        o = _as_terms(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o.items():
            n = out.get(e, 0) + c
            if n:
                out[e] = n
            elif e in out:
                del out[e]
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = {e: -c for e, c in self._terms.items()}
        return r

    def __sub__(self, other):
        o = _as_terms(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o.items():
            n = out.get(e, 0) - c
            if n:
                out[e] = n
            elif e in out:
                del out[e]
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = out
        return r

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _as_terms(other)
        if o is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o.items():
                e = e1 + e2
                n = out.get(e, 0) + c1 * c2
                if n:
                    out[e] = n
                elif e in out:
                    del out[e]
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by L^k."""
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = {e + k: c for e, c in self._terms.items()}
        return r

    def invert_unit(self) -> "LaurentPoly":
        """Inverse of +-L^k; raises NotAUnit otherwise."""
        if not self.is_unit_monomial():
            raise NotAUnit(f"not a unit monomial: {self}")
        ((e, c),) = self._terms.items()
        return LaurentPoly({-e: c})

    # -- specialisation ----------------------------------------------------------

    def specialize(self, value) -> Fraction:
        """Evaluate at L = value with exact rational arithmetic."""
        v = Fraction(value)
        if v == 0:
            if self._terms and min(self._terms) < 0:
                raise ZeroBase("L=0 with negative exponents present")
            return Fraction(self._terms.get(0, 0))
        total = Fraction(0)
        for e, c in self._terms.items():
            total += c * v ** e
        return total

    # -- comparisons ---------------------------------------------------------------

    def __eq__(self, other):
        o = _as_terms(other)
        if o is None:
            return NotImplemented
        return self._terms == o

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- text and JSON forms --------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                lpart = "L" if e == 1 else f"L^{e}"
                body = lpart if mag == 1 else f"{mag}*{lpart}"
            if not pieces:
                pieces.append(body if c > 0 else "-" + body)
            else:
                pieces.append((" + " if c > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self):
        """JSON form: list of [exponent, decimal-string coefficient] pairs."""
        return [[e, str(c)] for e, c in sorted(self._terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data})


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
L = LaurentPoly({1: 1})
LM1 = L - 1  # the class of the punctured line


def Lpow(k: int) -> LaurentPoly:
    return LaurentPoly({k: 1})


_TERM_RE = re.compile(
    r"^(?P<sign>[+-]?)(?:(?P<num>\d+)\*?)?(?:(?P<L>L)(?:\^(?P<exp>-?\d+))?)?$"
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the canonical textual form, e.g. "L^2 - 2*L + 1" or "-L^-3"."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Laurent polynomial")
    if s == "0":
        return ZERO
    # split into signed terms
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise ValueError(f"cannot parse {text!r}")
    terms = {}
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or (m.group("num") is None and m.group("L") is None):
            raise ValueError(f"bad term {chunk!r} in {text!r}")
        coeff = int(m.group("num")) if m.group("num") else 1
        if m.group("sign") == "-":
            coeff = -coeff
        if m.group("L"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, 0) + coeff
    return LaurentPoly(terms)


# --------------------------------------------------------------------------
# integer polynomial helpers for fraction reduction
# --------------------------------------------------------------------------


def _lp_split(lp: LaurentPoly):
    """Write lp = L^shift * p with p an ordinary poly, p[0] != 0.

    Returns (shift, coefficient list ascending).  lp must be nonzero.
    """
    lo = lp.min_exp()
    hi = lp.max_exp()
    coeffs = [lp.coeff(e) for e in range(lo, hi + 1)]
    return lo, coeffs


def _poly_normalize(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_normalize(out)


def _poly_content(p):
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return g or 1


def _poly_primitive(p):
    g = _poly_content(p)
    return [c // g for c in p]


def _poly_pseudo_rem(a, b):
    """Pseudo-remainder of a by b (b nonzero), over Z."""
    a = _poly_normalize(list(a))
    db, lb = len(b) - 1, b[-1]
    while a and len(a) - 1 >= db:
        la = a[-1]
        a = [c * lb for c in a]
        shift = len(a) - 1 - db
        for i in range(len(b)):
            a[shift + i] -= la * b[i]
        a = _poly_normalize(a)
    return a


def _poly_gcd(a, b):
    """Gcd in Z[x] up to sign, via the primitive Euclidean algorithm."""
    a = _poly_normalize(list(a))
    b = _poly_normalize(list(b))
    a = _poly_primitive(a) if a else []
    b = _poly_primitive(b) if b else []
    while b:
        r = _poly_pseudo_rem(a, b)
        a, b = b, (_poly_primitive(r) if r else [])
    if not a:
        return [1]
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def _poly_div_exact(a, b):
    """Exact division a // b in Z[x]; raises ArithmeticError if not exact."""
    a = _poly_normalize(list(a))
    b = _poly_normalize(list(b))
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        raise ArithmeticError("not divisible")
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        num = a[i + len(b) - 1]
        if num % b[-1]:
            raise ArithmeticError("not divisible")
        q = num // b[-1]
        out[i] = q
        if q:
            for j, y in enumerate(b):
                a[i + j] -= q * y
    if any(a[: len(b) - 1]):
        raise ArithmeticError("not divisible")
    return out


def _poly_to_lp(shift, coeffs) -> LaurentPoly:
    return LaurentPoly({shift + i: c for i, c in enumerate(coeffs) if c})


class LaurentFraction:
    """A reduced quotient num/den of Laurent polynomials, den != 0.

    Canonical form after reduction: den is an ordinary polynomial with
    nonzero constant term and positive leading coefficient; any unit factor
    L^k and the sign live in the numerator.  Equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        if isinstance(num, int):
            num = LaurentPoly.const(num)
        if isinstance(den, int):
            den = LaurentPoly.const(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num, self.den = ZERO, ONE
            return
        ns, np = _lp_split(num)
        ds, dp = _lp_split(den)
        g = _poly_gcd(np, dp)
        if len(g) > 1 or g[0] != 1:
            np = _poly_div_exact(np, g)
            dp = _poly_div_exact(dp, g)
        cn, cd = _poly_content(np), _poly_content(dp)
        cg = math.gcd(cn, cd)
        if cg > 1:
            np = [c // cg for c in np]
            dp = [c // cg for c in dp]
        if dp[-1] < 0:
            np = [-c for c in np]
            dp = [-c for c in dp]
        self.num = _poly_to_lp(ns - ds, np)
        self.den = _poly_to_lp(0, dp)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_laurent(self) -> bool:
        """True when the reduced denominator is a unit monomial."""
        return self.den.is_unit_monomial()

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise NotAUnit(f"denominator {self.den} is not a unit")
        return self.num * self.den.invert_unit()

    def __add__(self, other):
        other = _coerce_fraction(other)
        if other is None:
            return NotImplemented
        return LaurentFraction(self.num * other.den + other.num * self.den,
                               self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        f = LaurentFraction.__new__(LaurentFraction)
        f.num, f.den = -self.num, self.den
        return f

    def __sub__(self, other):
        other = _coerce_fraction(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_fraction(other)
        if other is None:
            return NotImplemented
        return LaurentFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_fraction(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero fraction")
        return LaurentFraction(self.num * other.den, self.den * other.num)

    def inverse(self) -> "LaurentFraction":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero")
        return LaurentFraction(self.den, self.num)

    def __eq__(self, other):
        other = _coerce_fraction(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"LaurentFraction({self})"


def _coerce_fraction(obj):
    if isinstance(obj, LaurentFraction):
        return obj
    if isinstance(obj, (LaurentPoly, int)):
        return LaurentFraction(obj if isinstance(obj, LaurentPoly) else LaurentPoly.const(obj))
    return None


def geometric_tail(first_exp: int) -> LaurentFraction:
    """Exact value of sum_{j >= first_exp} L^-j, a convergent filtration limit.

    Equals L^(1-first_exp) / (L-1).
    """
    return LaurentFraction(Lpow(1 - first_exp), LM1)
