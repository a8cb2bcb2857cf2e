"""The power structure on 1 + t R[[t]] for R = Z[L, L^-1].

Everything reduces to the defining family ``(1-t)^(-m)``: for m = sum c_j L^j
it is the product of geometric factors ``(1-t L^j)^(-c_j)``, which makes
``m -> (1-t)^(-m)`` a homomorphism from (R,+) to (1+tR[[t]], *).  A general
series A with A(0)=1 is exponentiated through its unique normal form
``A = prod_k (1-t^k)^(-b_k)``: the multiplicities b_k are peeled off the t^k
coefficients one degree at a time, and then
``A^m = prod_k ((1-u)^(-m*b_k))|_{u=t^k}``.

``sym_powers(m, k)`` lists the coefficients of ``(1-t)^(-m)``, which are the
classes of the symmetric powers when m is effective; ``motivic_exp`` is the
finite-product exponential over a stratum list, with the tuple-counting
variable u supplied here so callers never forget the marking.
"""

from __future__ import annotations

from .laurent import LaurentPoly, Lpow, ONE
from .multiseries import MultiSeries, SeriesBounds
from .tseries import NonUnitConstantTerm, TSeries, geometric


def _as_lp(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


def one_minus_t_pow(m, order: int) -> TSeries:
    """(1-t)^(-m) through t^order, for any m in Z[L, L^-1].

    Additivity (1-t)^(-m-n) = (1-t)^(-m) (1-t)^(-n) holds exactly because
    the factors multiply per L-term; negative coefficients contribute plain
    polynomial factors (1 - t L^j)^|c|.
    """
    m = _as_lp(m)
    result = TSeries.one(order)
    for j, c in m.terms():
        if c > 0:
            factor = geometric(ONE, 0, Lpow(j), 1, order).pow_int(c)
        else:
            base = TSeries(order, {0: ONE, 1: -Lpow(j)})
            factor = base.pow_int(-c)
        result = result * factor
    return result


def sym_powers(m, kmax: int) -> list:
    """Coefficients [S^0], [S^1], ..., [S^kmax] of (1-t)^(-m)."""
    s = one_minus_t_pow(m, kmax)
    return [s.coeff(k) for k in range(kmax + 1)]


def product_decomposition(A: TSeries) -> dict:
    """Multiplicities {k: b_k} of the normal form A = prod (1-t^k)^(-b_k)."""
    if A.coeff(0) != ONE:
        raise NonUnitConstantTerm("series must have constant term 1")
    order = A.order
    rest = A
    mult = {}
    for k in range(1, order + 1):
        b = rest.coeff(k)
        if b:
            mult[k] = b
            # divide by (1-t^k)^(-b): multiply by (1-t^k)^(b)
            clear = one_minus_t_pow(-b, order // k).subst_t_power(k).truncate(order)
            rest = rest * clear
    if not all(c.is_zero for k, c in rest.items() if k >= 1):
        raise AssertionError("normal-form peeling failed to terminate")
    return mult


def series_pow(A: TSeries, m) -> TSeries:
    """A(t)^m for A(0)=1 and m in Z[L, L^-1], exact through A's order."""
    m = _as_lp(m)
    order = A.order
    result = TSeries.one(order)
    for k, b in sorted(product_decomposition(A).items()):
        factor = one_minus_t_pow(m * b, order // k).subst_t_power(k).truncate(order)
        result = result * factor
    return result


def random_laurent(rng, exp_lo=-3, exp_hi=3, coeff_bound=5, max_terms=3) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        c = rng.randint(-coeff_bound, coeff_bound)
        terms[rng.randint(exp_lo, exp_hi)] = c
    return LaurentPoly(terms)


def random_unit_series(rng, order: int) -> TSeries:
    coeffs = {0: ONE}
    for k in range(1, order + 1):
        if rng.random() < 0.7:
            c = random_laurent(rng)
            if c:
                coeffs[k] = c
    return TSeries(order, coeffs)


class PowerAxiomReport:
    def __init__(self, trials, order, seed):
        self.trials = trials
        self.order = order
        self.seed = seed
        self.checked = 0
        self.failures = []  # [(axiom number, trial index)]

    @property
    def ok(self):
        return not self.failures

    def summary(self) -> str:
        if self.ok:
            return (f"all 7 exponentiation laws hold on {self.trials} randomized "
                    f"instances at order {self.order} ({self.checked} identities)")
        return f"failures: {self.failures[:5]}{'...' if len(self.failures) > 5 else ''}"


def axiom_report(trials: int, order: int, seed: int = 0) -> PowerAxiomReport:
    """Exercise the seven exponentiation laws on random inputs, exactly.

    1: A^0=1   2: A^1=A   3: (AB)^m=A^m B^m   4: A^(m+n)=A^m A^n
    5: (A^n)^m=A^(mn)     6: (1+t)^m = 1 + m t + higher
    7: (A(t^k))^m = (A^m)(t^k) for k in {2, 3}
    """
    import random

    rng = random.Random(seed)
    report = PowerAxiomReport(trials, order, seed)
    one = TSeries.one(order)
    one_plus_t = TSeries(order, {0: ONE, 1: ONE})
    for trial in range(trials):
        A = random_unit_series(rng, order)
        B = random_unit_series(rng, order)
        m = random_laurent(rng)
        n = random_laurent(rng)
        checks = []
        checks.append((1, series_pow(A, LaurentPoly()) == one))
        checks.append((2, series_pow(A, LaurentPoly.const(1)) == A))
        checks.append((3, series_pow(A * B, m) == series_pow(A, m) * series_pow(B, m)))
        checks.append((4, series_pow(A, m + n) == series_pow(A, m) * series_pow(A, n)))
        checks.append((5, series_pow(series_pow(A, n), m) == series_pow(A, m * n)))
        checks.append((6, series_pow(one_plus_t, m).coeff(1) == m))
        for k in (2, 3):
            lhs = series_pow(A.subst_t_power(k).truncate(order), m)
            rhs = series_pow(A, m).subst_t_power(k).truncate(order)
            checks.append((7, lhs == rhs))
        for axiom, okay in checks:
            report.checked += 1
            if not okay:
                report.failures.append((axiom, trial))
    return report


def validate_strata(strata) -> list:
    """Normalise a stratum list [(value exponent map, measure)] and check the
    invariants: value monomials pairwise distinct, measures nonzero."""
    seen = set()
    out = []
    for value, measure in strata:
        measure = _as_lp(measure)
        if measure.is_zero:
            raise ValueError("stratum with zero measure")
        key = tuple(sorted((v, e) for v, e in value.items() if e))
        if key in seen:
            raise ValueError(f"duplicate stratum value monomial {dict(key)}")
        seen.add(key)
        out.append((dict(value), measure))
    return out


def motivic_exp(strata, u_order: int, aux_vars, aux_caps=None) -> MultiSeries:
    """Exponential over a finite stratum list: prod_j (1 - u f_j)^(-mu_j).

    Variables are ("u",) + aux_vars; the u^k slice collects the measure of
    unordered k-tuples weighted by the product of their values.  The u-marking
    is applied here, so pass plain value monomials.
    """
    strata = validate_strata(strata)
    vars_ = ("u",) + tuple(aux_vars)
    caps = {"u": u_order}
    if aux_caps:
        caps.update(aux_caps)
    bounds = SeriesBounds(vars_, u_order, weights={"u": 1}, caps=caps)
    result = MultiSeries.monomial(bounds, ONE)
    for value, measure in strata:
        kmax = u_order
        for v, e in value.items():
            cap = bounds.caps.get(v)
            if cap is not None and e > 0:
                kmax = min(kmax, cap // e)
        coeffs = sym_powers(measure, kmax)
        terms = {}
        for k in range(kmax + 1):
            if coeffs[k]:
                exps = {"u": k}
                for v, e in value.items():
                    if e:
                        exps[v] = k * e
                terms[bounds.exps_tuple(exps)] = coeffs[k]
        result = result * MultiSeries(bounds, terms)
    return result
