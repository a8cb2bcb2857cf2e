"""The two-index recurrence system and the order-pair series f(a,b).

The system solved here is

    f_{ij} = eps_j * f_{i-j,j}          for i > j,
    f_{ii} = C * eps_i * sum_{j>=1} f_{ij},

with f symmetric and f_{i0} = 0.  The diagonal equation's infinite sum
telescopes against the off-diagonal relation, leaving the finite step

    f_{ii} = (C eps_i / (1 - eps_i - C eps_i)) * sum_{0<j<i} f_{ij},

so every entry is a finite ring expression in the seed f_{11}, and the whole
solution is linear in the seed.  The solver is generic over any commutative
ring that supports +, -, * and an invert hook (truncated series, Laurent
fractions, exact rationals).

f(a,b) is the order-pair series with coefficients f_{ij} = (L-1)^2 L^(-i-j)
for i,j >= 1.  Its functional equation

    f(a,b) = f(ab/L, a) + f(ab/L, b) + (L-1) f(ab/L, 1)

is verified coefficient-wise; the diagonal needs the row sums
sum_j f_{ij} = (L-1) L^-i, which are exact geometric limits.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LM1, LaurentFraction, LaurentPoly, Lpow, ZERO
from .multiseries import MultiSeries, SeriesBounds


class SingularDiagonal(ArithmeticError):
    """1 - eps_i - C*eps_i is not invertible for some diagonal index i >= 2."""


class System6Instance:
    """A concrete instance of the recurrence system.

    eps maps an index i >= 1 to a ring element; C and seed are ring elements;
    one is the ring unit and invert the partial inversion hook (expected to
    raise on non-invertible input).
    """

    def __init__(self, eps, C, seed, *, one, invert):
        self.eps = eps
        self.C = C
        self.seed = seed
        self.one = one
        self.invert = invert


def solve_system6(inst: System6Instance, imax: int, jmax: int) -> dict:
    """Solve for 1 <= i <= imax, 1 <= j <= jmax; symmetric fill.

    Entries are computed for the square of side max(imax, jmax) and the
    requested rectangle is returned.
    """
    side = max(imax, jmax)
    memo = {}

    def entry(i, j):
        if j > i:
            i, j = j, i
        key = (i, j)
        val = memo.get(key)
        if val is not None:
            return val
        if i == 1 and j == 1:
            val = inst.seed
        elif j < i:
            val = inst.eps(j) * entry(i - j, j)
        else:  # i == j >= 2
            e = inst.eps(i)
            d = inst.one - e - inst.C * e
            try:
                inv = inst.invert(d)
            except (ArithmeticError, ZeroDivisionError) as exc:
                raise SingularDiagonal(
                    f"1 - eps_{i} - C*eps_{i} is not invertible: {exc}"
                ) from None
            total = None
            for jp in range(1, i):
                s = entry(i, jp)
                total = s if total is None else total + s
            val = inst.C * e * inv * total
        memo[key] = val
        return val

    for i in range(1, side + 1):
        for j in range(1, i + 1):
            entry(i, j)
    return {(i, j): entry(i, j) for i in range(1, imax + 1) for j in range(1, jmax + 1)}


# ---------------------------------------------------------------------------
# the order-pair series f(a,b)
# ---------------------------------------------------------------------------

FAB_VARS = ("a", "b")


def fab_coefficient(i: int, j: int) -> LaurentPoly:
    """Coefficient of a^i b^j: (L-1)^2 L^(-i-j) for i,j >= 1, else 0."""
    if i < 1 or j < 1:
        return ZERO
    return LM1 ** 2 * Lpow(-i - j)


def fab_expand(imax: int, jmax: int) -> MultiSeries:
    """Window of f(a,b) on 1 <= i <= imax, 1 <= j <= jmax."""
    bounds = SeriesBounds(FAB_VARS, imax + jmax, weights={"a": 1, "b": 1},
                          caps={"a": imax, "b": jmax})
    terms = {}
    for i in range(1, imax + 1):
        for j in range(1, jmax + 1):
            terms[(i, j)] = fab_coefficient(i, j)
    return MultiSeries(bounds, terms)


def fab_row_tail(i: int, jmin: int = 1) -> LaurentPoly:
    """Exact value of sum_{j >= jmin} f_{ij} = (L-1) L^(-i-jmin+1).

    The geometric tail sum_{j>=jmin} L^-j = L^(1-jmin)/(L-1) cancels one
    factor of (L-1), so the limit is already a Laurent polynomial.
    """
    if i < 1:
        return ZERO
    return LM1 * Lpow(-i - jmin + 1)


class FabEquationReport:
    """Residual summary for the f(a,b) functional equation."""

    def __init__(self, max_sum):
        self.max_sum = max_sum
        self.checked = 0
        self.offenders = []  # [(i, j, residual LaurentPoly)]

    @property
    def ok(self) -> bool:
        return not self.offenders

    @property
    def first_offender(self):
        return self.offenders[0] if self.offenders else None

    def summary(self) -> str:
        if self.ok:
            return f"checked {self.checked} coefficients (i+j <= {self.max_sum}), all exact"
        i, j, r = self.first_offender
        return (f"checked {self.checked} coefficients, {len(self.offenders)} residuals; "
                f"first at a^{i} b^{j}: {r}")


def verify_fab_equation(max_sum: int) -> FabEquationReport:
    """Check f = f(ab/L, a) + f(ab/L, b) + (L-1) f(ab/L, 1) on i+j <= max_sum.

    Off-diagonal coefficients receive a single preimage; the diagonal
    receives the exact row tail, so the whole window is determined.
    """
    report = FabEquationReport(max_sum)
    for i in range(1, max_sum):
        for j in range(1, max_sum - i + 1):
            lhs = fab_coefficient(i, j)
            if i > j:
                rhs = Lpow(-j) * fab_coefficient(j, i - j)
            elif j > i:
                rhs = Lpow(-i) * fab_coefficient(i, j - i)
            else:
                rhs = LM1 * Lpow(-i) * fab_row_tail(i)
            resid = lhs - rhs
            report.checked += 1
            if resid:
                report.offenders.append((i, j, resid))
    return report


def solve_system5(imax: int, jmax: int) -> dict:
    """The f(a,b) instance (eps_i = L^-i, C = L-1) solved exactly.

    The diagonal step divides by 1 - L^(1-i), which is not a unit of
    Z[L, L^-1]; the solve therefore runs over Laurent fractions and converts
    back, which always succeeds (cancellation is exact).
    """
    inst = System6Instance(
        eps=lambda i: LaurentFraction(Lpow(-i)),
        C=LaurentFraction(LM1),
        seed=LaurentFraction(LM1 ** 2 * Lpow(-2)),
        one=LaurentFraction(1),
        invert=lambda x: x.inverse(),
    )
    table = solve_system6(inst, imax, jmax)
    return {key: val.to_laurent() for key, val in table.items()}


def rational_instance(eps_base: Fraction, C: Fraction, seed: Fraction) -> System6Instance:
    """Instance over exact rationals with eps_i = eps_base^i (test fodder)."""
    return System6Instance(
        eps=lambda i: eps_base ** i,
        C=C,
        seed=seed,
        one=Fraction(1),
        invert=lambda x: 1 / x,
    )
