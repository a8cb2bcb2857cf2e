"""Truncated formal power series in t with Laurent-polynomial coefficients.

A :class:`TSeries` is exact through ``t^order`` and silent about everything
above.  Binary operations truncate to the smaller window so verification
pipelines compose without bookkeeping.
"""

from __future__ import annotations

from .laurent import LaurentPoly, NotAUnit, ONE, ZERO


class NonUnitConstantTerm(ArithmeticError):
    """Inversion (or exponentiation base) needs a unit constant term."""


def _as_lp(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


class TSeries:
    """Sparse window [0..order] of a power series in t over Z[L, L^-1]."""

    __slots__ = ("order", "_coeffs")

    def __init__(self, order: int, coeffs=None):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        clean = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, c in items:
                c = _as_lp(c)
                if k < 0:
                    raise ValueError("negative t-exponent")
                if k <= order and c:
                    prev = clean.get(k)
                    c = prev + c if prev is not None else c
                    if c:
                        clean[k] = c
                    elif k in clean:
                        del clean[k]
        self._coeffs = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "TSeries":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "TSeries":
        return cls(order, {0: ONE})

    @classmethod
    def monomial(cls, coeff, k: int, order: int) -> "TSeries":
        return cls(order, {k: _as_lp(coeff)})

    # -- queries ----------------------------------------------------------------

    def coeff(self, k: int) -> LaurentPoly:
        if k > self.order:
            raise IndexError(f"t^{k} beyond truncation order {self.order}")
        return self._coeffs.get(k, ZERO)

    def items(self):
        return sorted(self._coeffs.items())

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def low_term(self):
        """(exponent, coefficient) of the lowest nonzero term, or None."""
        if not self._coeffs:
            return None
        k = min(self._coeffs)
        return k, self._coeffs[k]

    def eval_t1_partial(self) -> LaurentPoly:
        """Sum of the stored coefficients: the partial sum at t=1."""
        total = ZERO
        for c in self._coeffs.values():
            total = total + c
        return total

    # -- arithmetic ------------------------------------------------------------

    def _binary_order(self, other):
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        n = self._binary_order(other)
        out = {k: c for k, c in self._coeffs.items() if k <= n}
        for k, c in other._coeffs.items():
            if k <= n:
                s = out.get(k, ZERO) + c
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        r = TSeries.__new__(TSeries)
        r.order, r._coeffs = n, out
        return r

    def __sub__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        r = TSeries.__new__(TSeries)
        r.order = self.order
        r._coeffs = {k: -c for k, c in self._coeffs.items()}
        return r

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        n = self._binary_order(other)
        out = {}
        for k1, c1 in self._coeffs.items():
            if k1 > n:
                continue
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                if k > n:
                    continue
                p = c1 * c2
                s = out.get(k, ZERO) + p
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        r = TSeries.__new__(TSeries)
        r.order, r._coeffs = n, out
        return r

    def scale(self, lp) -> "TSeries":
        lp = _as_lp(lp)
        out = {}
        for k, c in self._coeffs.items():
            p = c * lp
            if p:
                out[k] = p
        r = TSeries.__new__(TSeries)
        r.order, r._coeffs = self.order, out
        return r

    def shift_t(self, s: int, order=None) -> "TSeries":
        """Multiply by t^s (s >= 0); window grows to order+s unless capped."""
        if s < 0:
            raise ValueError("negative t-shift")
        n = self.order + s if order is None else order
        out = {k + s: c for k, c in self._coeffs.items() if k + s <= n}
        r = TSeries.__new__(TSeries)
        r.order, r._coeffs = n, out
        return r

    def subst_t_power(self, k: int) -> "TSeries":
        """Substitute t -> t^k (k >= 1); exact through t^(order*k + k - 1)."""
        if k < 1:
            raise ValueError("power must be >= 1")
        n = self.order * k + k - 1
        r = TSeries.__new__(TSeries)
        r.order = n
        r._coeffs = {m * k: c for m, c in self._coeffs.items()}
        return r

    def truncate(self, order: int) -> "TSeries":
        if order >= self.order:
            if order == self.order:
                return self
            raise ValueError("cannot extend a truncated series")
        r = TSeries.__new__(TSeries)
        r.order = order
        r._coeffs = {k: c for k, c in self._coeffs.items() if k <= order}
        return r

    def invert(self) -> "TSeries":
        """Multiplicative inverse; constant term must be +-L^k."""
        c0 = self._coeffs.get(0, ZERO)
        try:
            i0 = c0.invert_unit()
        except NotAUnit as exc:
            raise NonUnitConstantTerm(str(exc)) from None
        n = self.order
        inv = {0: i0}
        for m in range(1, n + 1):
            acc = ZERO
            for k, c in self._coeffs.items():
                if 1 <= k <= m:
                    prev = inv.get(m - k)
                    if prev is not None:
                        acc = acc + c * prev
            if acc:
                inv[m] = -(i0 * acc)
        r = TSeries.__new__(TSeries)
        r.order, r._coeffs = n, {k: c for k, c in inv.items() if c}
        return r

    def pow_int(self, n: int) -> "TSeries":
        if n < 0:
            raise ValueError("negative power; use invert first")
        result = TSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons and rendering ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self._coeffs.items())))

    def __str__(self):
        return format_tseries(self)

    def __repr__(self):
        return f"TSeries(order={self.order}, {self})"

    def to_json(self):
        return [[k, c.to_json()] for k, c in sorted(self._coeffs.items())]

    @classmethod
    def from_json(cls, data, order: int) -> "TSeries":
        return cls(order, {int(k): LaurentPoly.from_json(c) for k, c in data})


def format_tseries(ts: TSeries) -> str:
    """Canonical text: each t-term as "(P)*t^k*L^e" with P normalised to
    have constant term, e.g. "(L^2 - 2*L + 1)*t^2*L^-5"."""
    if ts.is_zero:
        return "0"
    pieces = []
    for k, c in ts.items():
        e = c.min_exp()
        p = c.shift(-e)
        body = str(p) if len(p.terms()) == 1 else f"({p})"
        factors = [body]
        if k == 1:
            factors.append("t")
        elif k > 1:
            factors.append(f"t^{k}")
        if e:
            factors.append(f"L^{e}")
        pieces.append("*".join(factors))
    return " + ".join(pieces)


def geometric(coeff, texp: int, ratio_coeff, ratio_texp: int, order: int) -> TSeries:
    """coeff * t^texp * sum_{k>=0} (ratio_coeff * t^ratio_texp)^k, truncated.

    ratio_texp must be positive so the sum is t-adically convergent.
    """
    if ratio_texp <= 0:
        raise ValueError("ratio must increase t-degree")
    coeff = _as_lp(coeff)
    ratio_coeff = _as_lp(ratio_coeff)
    out = {}
    k = 0
    cur = coeff
    while texp + k * ratio_texp <= order and cur:
        out[texp + k * ratio_texp] = cur
        cur = cur * ratio_coeff
        k += 1
    return TSeries(order, out)
