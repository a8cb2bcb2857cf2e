"""The arc-vs-unordered-tuple intersection series and its equation.

The series lives over (t, a, b, c, d, p, q, r, s, u): u counts the tuple
size, t the total intersection number with the distinguished arc, and the
other eight variables are as in the pair series.  Its functional equation
expresses the series through three families of substitution images of
itself, weighted by two product-expansion tables:

* the eps table: coefficients of prod_{k>=l>=1} (1 - x^k y^l u)^(-(L-1)^2),
* the alpha table: a three-variable product with factors
  (xy)^k z^l over k<l, y^k (xz)^l over k>l, and the exactly aggregated
  diagonal family (xyz)^k with exponent -(L-2)(L-1) (the free geometric
  tail summed in closed form; a `paper_printed` mode keeps the literal
  truncated L^-l family for documentation tests).

The u^0 slice is boundary data: the empty tuple contributes measure one, so
that slice is the known order-pair series f(p,q) and is seeded, never
iterated.  Every equation term is an image of the series itself, and each
image raises t-degree by at least 1 on u>=1 monomials, so the solver walks
u-slices outward, solving a small t-triangular fixed point inside each.

Wherever a substitution collapses the q-slot on the u^0 boundary, the row
sums sum_j f_{ij} = (L-1) L^-i are supplied analytically (exact geometric
tails); collapses on iterated u>=1 slices are capped-window partial sums
with the same cap policy as the pair solver, which is what makes the u^1
slice match the pair solution bit for bit.
"""

from __future__ import annotations

from .laurent import L, LM1, LaurentPoly, Lpow, ONE
from .multiseries import DropCounter, MonomialMap, MultiSeries, SeriesBounds
from .pairs import NoStabilization, P_VARS
from .powerstruct import sym_powers
from .recurrences import fab_coefficient, fab_row_tail

T_VARS = ("t", "a", "b", "c", "d", "p", "q", "r", "s", "u")


def tuple_bounds(t_order: int, u_order: int, cap: int) -> SeriesBounds:
    caps = {v: cap for v in ("p", "q", "r", "s")}
    caps.update({v: cap * cap for v in ("a", "b", "c", "d")})
    caps["t"] = t_order
    caps["u"] = u_order
    return SeriesBounds(T_VARS, t_order + u_order,
                        weights={"t": 1, "u": 1}, caps=caps)


# ---------------------------------------------------------------------------
# the two expansion tables
# ---------------------------------------------------------------------------


class ExpansionTable:
    """Coefficients of a truncated product expansion, keyed by the exponent
    tuple of the base variables; each value is a u-polynomial {m: coeff}."""

    def __init__(self, entries: dict, meta: dict):
        self.entries = entries
        self.meta = meta

    def items(self):
        return sorted(self.entries.items())

    def u_poly(self, key) -> dict:
        return self.entries.get(tuple(key), {})


def _product_table(vars_, caps, u_order, factors) -> ExpansionTable:
    """Expand prod of (1 - monomial * u)^(-exponent) factors, truncated.

    factors: iterable of (exps mapping over vars_, u-coefficient list),
    where the list entry m is the coefficient of u^m for that factor.
    """
    bounds = SeriesBounds(tuple(vars_) + ("u",), u_order,
                          weights={"u": 1}, caps={**caps, "u": u_order})
    prod = MultiSeries.monomial(bounds, ONE)
    for exps, coeffs in factors:
        terms = {}
        for m, c in enumerate(coeffs):
            if c:
                e = {v: m * k for v, k in exps.items()}
                e["u"] = m
                terms[bounds.exps_tuple(e)] = c
        prod = prod * MultiSeries(bounds, terms)
    entries = {}
    for e, c in prod.terms():
        key, m = e[:-1], e[-1]
        entries.setdefault(key, {})[m] = c
    return ExpansionTable(entries, {"u_order": u_order, "caps": dict(caps)})


def _factor_u_coeffs(exponent: LaurentPoly, u_order: int, base_exps, caps) -> list:
    """sym-power coefficients of one factor, cut where base exponents leave
    the table window."""
    mmax = u_order
    for v, k in base_exps.items():
        cap = caps.get(v)
        if cap is not None and k > 0:
            mmax = min(mmax, cap // k)
    if mmax < 0:
        return []
    return sym_powers(exponent, mmax)


def eps_table(k1max: int, k2max: int, u_order: int,
              orientation: str = "first_larger") -> ExpansionTable:
    """Expansion of prod (1 - x^k y^l u)^(-(L-1)^2) over k >= l >= 1 (the
    default orientation: x carries the larger exponent) or k <= l."""
    caps = {"x": k1max, "y": k2max}
    exponent = LM1 ** 2
    factors = []
    if orientation == "first_larger":
        pairs = [(k, l) for k in range(1, k1max + 1)
                 for l in range(1, min(k, k2max) + 1)]
    elif orientation == "second_larger":
        pairs = [(k, l) for l in range(1, k2max + 1)
                 for k in range(1, min(l, k1max) + 1)]
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    for k, l in pairs:
        exps = {"x": k, "y": l}
        factors.append((exps, _factor_u_coeffs(exponent, u_order, exps, caps)))
    table = _product_table(("x", "y"), caps, u_order, factors)
    table.meta["orientation"] = orientation
    return table


def alpha_table(k1max: int, k2max: int, k3max: int, u_order: int,
                paper_printed: bool = False, l_bound: int | None = None) -> ExpansionTable:
    """Expansion of the three-variable product used by the tuple equation.

    Default factors: (xy)^k z^l over k<l, y^k (xz)^l over k>l, and the
    aggregated diagonal (xyz)^k with exponent -(L-2)(L-1).  With
    paper_printed=True the literal displayed product is expanded instead:
    x^k (yz)^l over k>l and (xyz)^k L^-l over k<l<=l_bound, the L^-l
    absorbed into coefficients.
    """
    caps = {"x": k1max, "y": k2max, "z": k3max}
    sq = LM1 ** 2
    factors = []
    for k in range(1, min(k1max, k2max) + 1):
        for l_ in range(k + 1, k3max + 1):
            exps = {"x": k, "y": k, "z": l_}
            factors.append((exps, _factor_u_coeffs(sq, u_order, exps, caps)))
    if paper_printed:
        for k in range(1, k1max + 1):
            for l_ in range(1, min(k - 1, k2max, k3max) + 1):
                exps = {"x": k, "y": l_, "z": l_}
                factors.append((exps, _factor_u_coeffs(sq, u_order, exps, caps)))
        if l_bound is None:
            raise ValueError("paper_printed mode needs an l_bound")
        cubed = sq * (L - 2)
        kmax = min(k1max, k2max, k3max)
        for k in range(1, kmax + 1):
            for l_ in range(k + 1, l_bound + 1):
                exps = {"x": k, "y": k, "z": k}
                base = _factor_u_coeffs(cubed, u_order, exps, caps)
                coeffs = [c * Lpow(-l_ * m) for m, c in enumerate(base)]
                factors.append((exps, coeffs))
    else:
        for k in range(1, k2max + 1):
            for l_ in range(1, min(k - 1, k1max, k3max) + 1):
                exps = {"x": l_, "y": k, "z": l_}
                factors.append((exps, _factor_u_coeffs(sq, u_order, exps, caps)))
        diag = LM1 * (L - 2)
        kmax = min(k1max, k2max, k3max)
        for k in range(1, kmax + 1):
            exps = {"x": k, "y": k, "z": k}
            factors.append((exps, _factor_u_coeffs(diag, u_order, exps, caps)))
    table = _product_table(("x", "y", "z"), caps, u_order, factors)
    table.meta["paper_printed"] = paper_printed
    return table


# ---------------------------------------------------------------------------
# the three substitution families
# ---------------------------------------------------------------------------

_TABCD = {"t": 1, "a": 1, "b": 1, "c": 1, "d": 1}


def map_first(k1: int, k2: int) -> MonomialMap:
    return MonomialMap(T_VARS, T_VARS, {
        "a": (ONE, dict(_TABCD)),
        "b": (ONE, {"b": 1, "d": 1}),
        "c": (ONE, {"c": 1, "d": 1}),
        "p": (Lpow(-1), {"a": k1, "c": k1, "b": k2, "d": k2, "t": k2,
                         "p": 1, "q": 1}),
        "q": (ONE, {"c": k1, "d": k2, "q": 1}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
    })


def map_second(k1: int, k2: int) -> MonomialMap:
    return MonomialMap(T_VARS, T_VARS, {
        "a": (ONE, dict(_TABCD)),
        "b": (ONE, {"a": 1, "c": 1}),
        "c": (ONE, {"a": 1, "b": 1}),
        "d": (ONE, {"a": 1}),
        "p": (Lpow(-1), {"b": k1, "d": k1, "a": k2, "c": k2, "t": k2,
                         "p": 1, "q": 1}),
        "q": (ONE, {"b": k1, "a": k2, "p": 1}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
        "s": (ONE, {"r": 1}),
    })


def map_third(k1: int, k2: int, k3: int) -> MonomialMap:
    return MonomialMap(T_VARS, T_VARS, {
        "a": (ONE, dict(_TABCD)),
        "b": (ONE, {}),
        "c": (ONE, {}),
        "d": (ONE, {}),
        "p": (Lpow(-1), {"t": k1, "a": k2, "c": k2, "b": k3, "d": k3,
                         "p": 1, "q": 1}),
        "q": (ONE, {}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
        "s": (ONE, {}),
    })


def boundary_collapse_image(bounds: SeriesBounds, k1: int, k2: int, k3: int,
                            row_tail=fab_row_tail) -> MultiSeries:
    """Image of the u^0 boundary under map_third with the q-collapse summed
    exactly: sum_j f_{ij} q^j |-> row_tail(i), so row i contributes
    row_tail(i) L^-i times the i-th power of the p-image monomial."""
    cap_p = bounds.caps.get("p")
    terms = {}
    i = 1
    while cap_p is None or i <= cap_p:
        exps = bounds.exps_tuple({
            "t": i * k1, "a": i * k2, "c": i * k2, "b": i * k3, "d": i * k3,
            "p": i, "q": i,
        })
        if not bounds.admits(exps):
            if bounds.weight(exps) > bounds.max_weight:
                break
            i += 1
            continue
        c = row_tail(i) * Lpow(-i)
        if c:
            terms[exps] = c
        i += 1
        if cap_p is None and i > bounds.max_weight + 1:
            break
    return MultiSeries(bounds, terms)


def seed_series(bounds: SeriesBounds) -> MultiSeries:
    """The u^0 boundary: the order-pair series window f(p,q)."""
    cap_p = bounds.caps.get("p", bounds.max_weight)
    cap_q = bounds.caps.get("q", bounds.max_weight)
    terms = {}
    for i in range(1, cap_p + 1):
        for j in range(1, cap_q + 1):
            terms[bounds.exps_tuple({"p": i, "q": j})] = fab_coefficient(i, j)
    return MultiSeries(bounds, terms)


def tuple_rhs(I: MultiSeries, eps: ExpansionTable, alpha: ExpansionTable,
              exact_boundary: bool = False,
              drops: DropCounter | None = None) -> MultiSeries:
    """One full application of the equation's right-hand side.

    With exact_boundary=True the third family's action on the u^0 slice is
    replaced by the analytic row-tail collapse (the solver's mode); the
    caller is then asserting that the u^0 slice is the f(p,q) window.
    With the default False everything is plain windowed substitution, so
    rhs(0) = 0.
    """
    bounds = I.bounds
    acc = {}
    uidx = bounds.index("u")
    for (k1, k2), upoly in eps.items():
        sub1 = I.substitute(map_first(k1, k2), drops=drops)
        sub2 = I.substitute(map_second(k1, k2), drops=drops)
        for m, c in sorted(upoly.items()):
            pref = c * Lpow(-k1 - k2)
            sub1.mul_monomial(pref, drops, r=k1, s=k2, u=m).add_into(acc)
            sub2.mul_monomial(pref, drops, s=k1, r=k2, u=m).add_into(acc)
    if exact_boundary:
        I3 = I.filter_terms(lambda e, _c: e[uidx] >= 1)
    else:
        I3 = I
    for (k1, k2, k3), upoly in alpha.items():
        sub3 = I3.substitute(map_third(k1, k2, k3), drops=drops)
        if exact_boundary:
            sub3 = sub3 + boundary_collapse_image(bounds, k1, k2, k3)
        for m, c in sorted(upoly.items()):
            pref = LM1 * c * Lpow(-k2 - k3)
            sub3.mul_monomial(pref, drops, r=k2, s=k3, u=m).add_into(acc)
    return MultiSeries.from_raw(bounds, acc)


class TupleSolution:
    def __init__(self, series, seed, eps, alpha, bounds, inner_iterations, dropped):
        self.series = series
        self.seed = seed
        self.eps = eps
        self.alpha = alpha
        self.bounds = bounds
        self.inner_iterations = inner_iterations
        self.dropped = dropped

    def u_slice(self, k: int) -> MultiSeries:
        """The u^k slice as a series over the pair variables."""
        return self.series.slice_var("u", k)

    def summary(self) -> str:
        inner = ", ".join(f"u^{m}: {n}" for m, n in sorted(self.inner_iterations.items()))
        return (f"{len(self.series)} monomials, inner iterations {{{inner}}}, "
                f"{self.dropped} terms dropped by caps")


def solve_tuple_equation(t_order: int, u_order: int, cap: int) -> TupleSolution:
    """Solve outward in u, with a t-triangular fixed point inside each slice.

    The u^0 slice is seeded with the order-pair window.  For the slice u=m,
    the images of lower slices are assembled once (they are final), and the
    three index-(0,0) maps are iterated on the evolving slice; each raises
    t-degree, so at most t_order+1 rounds are needed.
    """
    bounds = tuple_bounds(t_order, u_order, cap)
    eps = eps_table(cap, cap, u_order)
    alpha = alpha_table(t_order, cap, cap, u_order)
    drops = DropCounter()
    uidx = bounds.index("u")

    seed = seed_series(bounds)
    I = seed
    inner_counts = {}
    m1_0, m2_0, m3_0 = map_first(0, 0), map_second(0, 0), map_third(0, 0, 0)
    for m in range(1, u_order + 1):
        const_acc = {}
        for (k1, k2), upoly in eps.items():
            maps = None
            for me, c in sorted(upoly.items()):
                if me < 1 or me > m:
                    continue
                src = I.filter_terms(lambda e, _c, mm=m - me: e[uidx] == mm)
                if src.is_zero:
                    continue
                if maps is None:
                    maps = (map_first(k1, k2), map_second(k1, k2))
                pref = c * Lpow(-k1 - k2)
                src.substitute(maps[0], drops=drops) \
                    .mul_monomial(pref, drops, r=k1, s=k2, u=me).add_into(const_acc)
                src.substitute(maps[1], drops=drops) \
                    .mul_monomial(pref, drops, s=k1, r=k2, u=me).add_into(const_acc)
        for (k1, k2, k3), upoly in alpha.items():
            mp = None
            for me, c in sorted(upoly.items()):
                if me < 1 or me > m:
                    continue
                pref = LM1 * c * Lpow(-k2 - k3)
                if me == m:
                    img = boundary_collapse_image(bounds, k1, k2, k3)
                else:
                    src = I.filter_terms(lambda e, _c, mm=m - me: e[uidx] == mm)
                    if src.is_zero:
                        continue
                    if mp is None:
                        mp = map_third(k1, k2, k3)
                    img = src.substitute(mp, drops=drops)
                img.mul_monomial(pref, drops, r=k2, s=k3, u=me).add_into(const_acc)
        const = MultiSeries.from_raw(bounds, const_acc)
        slice_m = MultiSeries.zero(bounds)
        stabilized = None
        for rounds in range(1, t_order + 3):
            nxt = const \
                + slice_m.substitute(m1_0, drops=drops) \
                + slice_m.substitute(m2_0, drops=drops) \
                + slice_m.substitute(m3_0, drops=drops).scale(LM1)
            if nxt == slice_m:
                stabilized = rounds - 1
                break
            slice_m = nxt
        if stabilized is None:
            raise NoStabilization(f"u^{m} slice did not settle")
        inner_counts[m] = stabilized
        I = I + slice_m
    return TupleSolution(I, seed, eps, alpha, bounds, inner_counts, drops.count)
