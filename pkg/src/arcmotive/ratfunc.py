"""Rational functions in t over Z[L, L^-1].

These hold the closed forms of the stratified Milnor series: quotients of
t-polynomials whose coefficients are Laurent polynomials.  They are never
auto-simplified; equality is decided by cross-multiplication.  Two exits
matter: expansion into a :class:`~arcmotive.tseries.TSeries` (denominator
constant term must be a unit) and exact evaluation at t=1 (the filtration
limit), which lands in :class:`~arcmotive.laurent.LaurentFraction`.
"""

from __future__ import annotations

from .laurent import LaurentFraction, LaurentPoly, NotAUnit, ONE, ZERO
from .tseries import NonUnitConstantTerm, TSeries


class NonUnitDenominator(ArithmeticError):
    """The denominator's t-constant coefficient is not +-L^k."""


class PoleAtOne(ZeroDivisionError):
    """The denominator vanishes identically at t=1."""


def _clean_tpoly(terms):
    out = {}
    if terms:
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            if k < 0:
                raise ValueError("negative t-exponent in polynomial")
            if c:
                s = out.get(k, ZERO) + c
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
    return out


def _tpoly_mul(a, b):
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = k1 + k2
            p = c1 * c2
            s = out.get(k, ZERO) + p
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


class RationalFunc:
    """num/den with num, den in (Z[L,L^-1])[t], den != 0."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = _clean_tpoly(num)
        self.den = _clean_tpoly(den if den is not None else {0: ONE})
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def zero(cls) -> "RationalFunc":
        return cls({}, {0: ONE})

    @property
    def is_zero(self) -> bool:
        return not self.num

    def num_terms(self):
        return sorted(self.num.items())

    def den_terms(self):
        return sorted(self.den.items())

    # -- arithmetic (no simplification) ---------------------------------------

    def __mul__(self, other):
        if not isinstance(other, RationalFunc):
            return NotImplemented
        r = RationalFunc.__new__(RationalFunc)
        r.num = _tpoly_mul(self.num, other.num)
        r.den = _tpoly_mul(self.den, other.den)
        return r

    def __add__(self, other):
        if not isinstance(other, RationalFunc):
            return NotImplemented
        num = _clean_tpoly(
            list(_tpoly_mul(self.num, other.den).items())
            + list(_tpoly_mul(other.num, self.den).items())
        )
        r = RationalFunc.__new__(RationalFunc)
        r.num = num
        r.den = _tpoly_mul(self.den, other.den)
        return r

    def __sub__(self, other):
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return self + other.scale_monomial(LaurentPoly.const(-1), 0)

    def scale_monomial(self, coeff, texp: int) -> "RationalFunc":
        """Multiply by coeff * t^texp."""
        if isinstance(coeff, int):
            coeff = LaurentPoly.const(coeff)
        r = RationalFunc.__new__(RationalFunc)
        r.num = _clean_tpoly({k + texp: c * coeff for k, c in self.num.items()})
        r.den = dict(self.den)
        return r

    def __eq__(self, other):
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return _tpoly_mul(self.num, other.den) == _tpoly_mul(other.num, self.den)

    def __hash__(self):
        raise TypeError("RationalFunc is unhashable (equality is cross-multiplicative)")

    # -- exits ------------------------------------------------------------------

    def expand(self, order: int) -> TSeries:
        """Series expansion: result * den == num through t^order."""
        d0 = self.den.get(0, ZERO)
        if not d0.is_unit_monomial():
            raise NonUnitDenominator(f"constant denominator term {d0} is not a unit")
        num = TSeries(order, self.num)
        den = TSeries(order, self.den)
        try:
            return num * den.invert()
        except NonUnitConstantTerm as exc:  # pragma: no cover - guarded above
            raise NonUnitDenominator(str(exc)) from None

    def eval_t1(self) -> LaurentFraction:
        """Exact value at t=1, reduced; raises PoleAtOne if den(1) = 0."""
        den1 = ZERO
        for c in self.den.values():
            den1 = den1 + c
        if den1.is_zero:
            raise PoleAtOne("denominator vanishes at t=1")
        num1 = ZERO
        for c in self.num.values():
            num1 = num1 + c
        return LaurentFraction(num1, den1)

    def __str__(self):
        def fmt(poly):
            if not poly:
                return "0"
            pieces = []
            for k, c in sorted(poly.items()):
                neg = False
                if len(c.terms()) == 1:
                    cs = str(c)
                    if cs.startswith("-"):
                        neg, cs = True, cs[1:]
                else:
                    cs = f"({c})"
                if k == 0:
                    body = cs
                else:
                    t = "t" if k == 1 else f"t^{k}"
                    body = t if cs == "1" else f"{cs}*{t}"
                if not pieces:
                    pieces.append(("-" if neg else "") + body)
                else:
                    pieces.append((" - " if neg else " + ") + body)
            return "".join(pieces)

        if self.den == {0: ONE} or self.den == _clean_tpoly({0: ONE}):
            return fmt(self.num)
        return f"({fmt(self.num)}) / ({fmt(self.den)})"

    def __repr__(self):
        return f"RationalFunc({self})"
