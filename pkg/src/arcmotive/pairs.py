"""The two-arc intersection series J and its blow-up functional equation.

J lives over (t, a, b, c, d, p, q, r, s): t marks the intersection number of
the two arcs, p,q,r,s the four coordinate orders, and a,b,c,d their pairwise
products.  Splitting the pair space by the order comparisons on each arc
gives nine strata: two map back to J through blow-up substitutions, one
collapses to a diagonal image weighted by L-1, and the remaining seven are
explicit double/triple sums (phi and psi below).  The equation is solved by
iterating the right-hand side from 0: each substitution image raises
t-degree by at least one on the support, so the t^k slice is final after k
rounds.

Truncation has two components.  The t-order window is exact.  Per-variable
caps on p,q,r,s are needed because a t-slice has infinite support
(arbitrarily deep tangency at fixed intersection number); the diagonal
image sums a capped window where the true value sums the whole slice, so
diagonal-pattern coefficients are filtration-convergent partial sums
relative to the cap.  Everything a cap drops is counted, never silent.
The seven explicit strata have finitely many contributions per retained
monomial except the double-diagonal one, whose free geometric tails are
summed exactly in closed form (they stay Laurent).
"""

from __future__ import annotations

from .laurent import L, LM1, LaurentPoly, Lpow, ONE
from .multiseries import DropCounter, MonomialMap, MultiSeries, SeriesBounds

P_VARS = ("t", "a", "b", "c", "d", "p", "q", "r", "s")

ARC_SWAP = {"b": "c", "c": "b", "p": "r", "r": "p", "q": "s", "s": "q"}
COORD_SWAP = {"a": "d", "d": "a", "b": "c", "c": "b",
              "p": "q", "q": "p", "r": "s", "s": "r"}


class NoStabilization(RuntimeError):
    """The iteration kept changing past its guaranteed horizon (a bug)."""


def pair_bounds(t_order: int, cap: int) -> SeriesBounds:
    caps = {v: cap for v in ("p", "q", "r", "s")}
    caps.update({v: cap * cap for v in ("a", "b", "c", "d")})
    return SeriesBounds(P_VARS, t_order, weights={"t": 1}, caps=caps)


def slot(bounds: SeriesBounds, coeff, **exps):
    """A substitution-slot monomial: (coefficient, exponent tuple)."""
    if isinstance(coeff, int):
        coeff = LaurentPoly.const(coeff)
    return coeff, bounds.exps_tuple(exps)


class _PowCache:
    __slots__ = ("base", "cache")

    def __init__(self, base: LaurentPoly):
        self.base = base
        self.cache = {0: ONE, 1: base}

    def __call__(self, n: int) -> LaurentPoly:
        p = self.cache.get(n)
        if p is None:
            p = self.base ** n
            self.cache[n] = p
        return p


def _accumulate(out, exps, coeff):
    s = out.get(exps)
    s = coeff if s is None else s + coeff
    if s:
        out[exps] = s
    elif exps in out:
        del out[exps]


def phi(args, bounds: SeriesBounds, index_bound: int) -> MultiSeries:
    """Sum over 1 <= i < j, 1 <= k < l (all <= index_bound) of
    alpha^(ik) beta^(il) gamma^(jk) delta^(jl) pi^i kappa^j rho^k sigma^l,
    for eight slot monomials, truncated by the bounds."""
    if len(args) != 8:
        raise ValueError("phi takes 8 slot monomials")
    coeffs = [_PowCache(c) for c, _ in args]
    vecs = [e for _, e in args]
    nv = len(bounds.vars)
    out = {}
    B = index_bound
    for i in range(1, B):
        for j in range(i + 1, B + 1):
            for k in range(1, B):
                for l in range(k + 1, B + 1):
                    powers = (i * k, i * l, j * k, j * l, i, j, k, l)
                    exps = tuple(
                        sum(vecs[a][v] * powers[a] for a in range(8))
                        for v in range(nv)
                    )
                    if not bounds.admits(exps):
                        continue
                    c = ONE
                    for a in range(8):
                        c = c * coeffs[a](powers[a])
                    _accumulate(out, exps, c)
    return MultiSeries(bounds, out)


def psi(args, bounds: SeriesBounds, index_bound: int) -> MultiSeries:
    """Sum over 1 <= i < j <= index_bound, 1 <= k <= index_bound of
    alpha^(ik) beta^(jk) pi^i kappa^j rho^k for five slot monomials."""
    if len(args) != 5:
        raise ValueError("psi takes 5 slot monomials")
    coeffs = [_PowCache(c) for c, _ in args]
    vecs = [e for _, e in args]
    nv = len(bounds.vars)
    out = {}
    B = index_bound
    for i in range(1, B):
        for j in range(i + 1, B + 1):
            for k in range(1, B + 1):
                powers = (i * k, j * k, i, j, k)
                exps = tuple(
                    sum(vecs[a][v] * powers[a] for a in range(5))
                    for v in range(nv)
                )
                if not bounds.admits(exps):
                    continue
                c = ONE
                for a in range(5):
                    c = c * coeffs[a](powers[a])
                _accumulate(out, exps, c)
    return MultiSeries(bounds, out)


def stratum_contribution(which, bounds: SeriesBounds, index_bound: int,
                         nine_a: str = "closed") -> MultiSeries:
    """One of the seven explicit strata of the pair decomposition.

    which is one of 2, 3, 4, 6, 7, 8, "9a".  For "9a" the default mode sums
    the two free geometric tails exactly (coefficient (L-1)^3 (L-2) L^(-2i-2k)
    on (t abcd)^(ik) (pq)^i (rs)^k); mode "truncated" keeps the literal
    phi-sum with its L^-j, L^-l tails cut at the index bound.
    """
    c4 = LM1 ** 4
    inv = Lpow(-1)
    if which == 2:
        s = phi([slot(bounds, 1, b=1, t=1), slot(bounds, 1, a=1),
                 slot(bounds, 1, d=1), slot(bounds, 1, c=1),
                 slot(bounds, inv, p=1), slot(bounds, inv, q=1),
                 slot(bounds, inv, s=1), slot(bounds, inv, r=1)],
                bounds, index_bound)
        return s.scale(c4)
    if which == 3:
        s = psi([slot(bounds, 1, t=1, a=1, b=1), slot(bounds, 1, c=1, d=1),
                 slot(bounds, inv, p=1), slot(bounds, inv, q=1),
                 slot(bounds, Lpow(-2), r=1, s=1)], bounds, index_bound)
        return s.scale(c4)
    if which == 4:
        s = phi([slot(bounds, 1, c=1, t=1), slot(bounds, 1, d=1),
                 slot(bounds, 1, a=1), slot(bounds, 1, b=1),
                 slot(bounds, inv, q=1), slot(bounds, inv, p=1),
                 slot(bounds, inv, r=1), slot(bounds, inv, s=1)],
                bounds, index_bound)
        return s.scale(c4)
    if which == 6:
        s = psi([slot(bounds, 1, t=1, c=1, d=1), slot(bounds, 1, a=1, b=1),
                 slot(bounds, inv, q=1), slot(bounds, inv, p=1),
                 slot(bounds, Lpow(-2), r=1, s=1)], bounds, index_bound)
        return s.scale(c4)
    if which == 7:
        s = psi([slot(bounds, 1, t=1, a=1, c=1), slot(bounds, 1, b=1, d=1),
                 slot(bounds, inv, r=1), slot(bounds, inv, s=1),
                 slot(bounds, Lpow(-2), p=1, q=1)], bounds, index_bound)
        return s.scale(c4)
    if which == 8:
        s = psi([slot(bounds, 1, t=1, b=1, d=1), slot(bounds, 1, a=1, c=1),
                 slot(bounds, inv, s=1), slot(bounds, inv, r=1),
                 slot(bounds, Lpow(-2), p=1, q=1)], bounds, index_bound)
        return s.scale(c4)
    if which == "9a":
        if nine_a == "closed":
            coeff = LM1 ** 3 * (L - 2)
            out = {}
            B = index_bound
            for i in range(1, B + 1):
                for k in range(1, B + 1):
                    exps = bounds.exps_tuple({
                        "t": i * k, "a": i * k, "b": i * k, "c": i * k,
                        "d": i * k, "p": i, "q": i, "r": k, "s": k,
                    })
                    if not bounds.admits(exps):
                        continue
                    out[exps] = coeff * Lpow(-2 * i - 2 * k)
            return MultiSeries(bounds, out)
        if nine_a == "truncated":
            s = phi([slot(bounds, 1, t=1, a=1, b=1, c=1, d=1),
                     slot(bounds, 1), slot(bounds, 1), slot(bounds, 1),
                     slot(bounds, inv, p=1, q=1), slot(bounds, inv),
                     slot(bounds, inv, r=1, s=1), slot(bounds, inv)],
                    bounds, index_bound)
            return s.scale(LM1 ** 5 * (L - 2))
        raise ValueError(f"unknown 9a mode {nine_a!r}")
    raise ValueError(f"unknown stratum {which!r}")


def stratum_direct(which, bounds: SeriesBounds, index_bound: int) -> MultiSeries:
    """The same strata summed straight from the arc-order parametrisation
    (independent of the phi/psi slot wiring); 9a in its truncated form."""
    c4 = LM1 ** 4
    out = {}
    B = index_bound

    def put(coeff, **exps):
        e = bounds.exps_tuple(exps)
        if bounds.admits(e):
            _accumulate(out, e, coeff)

    if which == 2:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B):
                    for l in range(k + 1, B + 1):
                        put(c4 * Lpow(-i - j - k - l), a=i * l, b=i * k,
                            t=i * k, c=j * l, d=j * k, p=i, q=j, r=l, s=k)
    elif which == 3:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B + 1):
                    put(c4 * Lpow(-i - j - 2 * k), t=i * k, a=i * k, b=i * k,
                        c=j * k, d=j * k, p=i, q=j, r=k, s=k)
    elif which == 4:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B):
                    for l in range(k + 1, B + 1):
                        put(c4 * Lpow(-i - j - k - l), a=j * k, b=j * l,
                            c=i * k, t=i * k, d=i * l, p=j, q=i, r=k, s=l)
    elif which == 6:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B + 1):
                    put(c4 * Lpow(-i - j - 2 * k), t=i * k, c=i * k, d=i * k,
                        a=j * k, b=j * k, p=j, q=i, r=k, s=k)
    elif which == 7:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B + 1):
                    put(c4 * Lpow(-i - j - 2 * k), t=i * k, a=i * k, c=i * k,
                        b=j * k, d=j * k, r=i, s=j, p=k, q=k)
    elif which == 8:
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B + 1):
                    put(c4 * Lpow(-i - j - 2 * k), t=i * k, b=i * k, d=i * k,
                        a=j * k, c=j * k, s=i, r=j, p=k, q=k)
    elif which == "9a":
        c = LM1 ** 5 * (L - 2)
        for i in range(1, B):
            for j in range(i + 1, B + 1):
                for k in range(1, B):
                    for l in range(k + 1, B + 1):
                        put(c * Lpow(-i - j - k - l), t=i * k, a=i * k,
                            b=i * k, c=i * k, d=i * k, p=i, q=i, r=k, s=k)
    else:
        raise ValueError(f"unknown stratum {which!r}")
    return MultiSeries(bounds, out)


STRATA = (2, 3, 4, 6, 7, 8, "9a")


def strata_sum(bounds: SeriesBounds, index_bound: int,
               nine_a: str = "closed") -> MultiSeries:
    total = MultiSeries.zero(bounds)
    for which in STRATA:
        total = total + stratum_contribution(which, bounds, index_bound, nine_a)
    return total


def blowup_map_first() -> MonomialMap:
    """a -> t a b c d, b -> b d, c -> c d, p -> p q / L, r -> r s / L."""
    return MonomialMap(P_VARS, P_VARS, {
        "a": (ONE, {"t": 1, "a": 1, "b": 1, "c": 1, "d": 1}),
        "b": (ONE, {"b": 1, "d": 1}),
        "c": (ONE, {"c": 1, "d": 1}),
        "p": (Lpow(-1), {"p": 1, "q": 1}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
    })


def blowup_map_second() -> MonomialMap:
    """The coordinate-swapped image of the first blow-up map."""
    return MonomialMap(P_VARS, P_VARS, {
        "a": (ONE, {"t": 1, "a": 1, "b": 1, "c": 1, "d": 1}),
        "b": (ONE, {"a": 1, "c": 1}),
        "c": (ONE, {"a": 1, "b": 1}),
        "d": (ONE, {"a": 1}),
        "p": (Lpow(-1), {"p": 1, "q": 1}),
        "q": (ONE, {"p": 1}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
        "s": (ONE, {"r": 1}),
    })


def blowup_map_collapsed() -> MonomialMap:
    """The double-diagonal image (carries an extra weight L-1 in the
    equation): b, c, d, q, s collapse to 1."""
    return MonomialMap(P_VARS, P_VARS, {
        "a": (ONE, {"t": 1, "a": 1, "b": 1, "c": 1, "d": 1}),
        "b": (ONE, {}),
        "c": (ONE, {}),
        "d": (ONE, {}),
        "p": (Lpow(-1), {"p": 1, "q": 1}),
        "q": (ONE, {}),
        "r": (Lpow(-1), {"r": 1, "s": 1}),
        "s": (ONE, {}),
    })


def pair_rhs(J: MultiSeries, strata: MultiSeries,
             drops: DropCounter | None = None) -> MultiSeries:
    """Right-hand side of the pair functional equation for a candidate J."""
    m1, m2, m3 = blowup_map_first(), blowup_map_second(), blowup_map_collapsed()
    out = strata
    out = out + J.substitute(m1, drops=drops)
    out = out + J.substitute(m2, drops=drops)
    out = out + J.substitute(m3, drops=drops).scale(LM1)
    return out


class PairSolution:
    def __init__(self, series, iterations, stabilized_after, dropped, bounds,
                 index_bound, nine_a):
        self.series = series
        self.iterations = iterations
        self.stabilized_after = stabilized_after
        self.dropped = dropped
        self.bounds = bounds
        self.index_bound = index_bound
        self.nine_a = nine_a

    def summary(self) -> str:
        return (f"{len(self.series)} monomials, stabilized after "
                f"{self.stabilized_after} of {self.iterations} applications, "
                f"{self.dropped} terms dropped by caps")


def solve_pair_equation(t_order: int, cap: int, index_bound: int | None = None,
                        nine_a: str = "closed") -> PairSolution:
    """Iterate J <- rhs(J) from 0 until the window stabilizes.

    The t^k slice is final after k applications, so more than t_order + 1
    changing applications means a bug; that is surfaced as NoStabilization.
    """
    bounds = pair_bounds(t_order, cap)
    if index_bound is None:
        index_bound = cap
    strata = strata_sum(bounds, index_bound, nine_a)
    drops = DropCounter()
    J = MultiSeries.zero(bounds)
    stabilized_after = None
    applications = 0
    for _ in range(t_order + 2):
        nxt = pair_rhs(J, strata, drops)
        applications += 1
        if nxt == J:
            stabilized_after = applications - 1
            break
        J = nxt
    if stabilized_after is None:
        raise NoStabilization(
            f"pair iteration still changing after {applications} applications"
        )
    return PairSolution(J, applications, stabilized_after, drops.count,
                        bounds, index_bound, nine_a)


def arc_swap(ms: MultiSeries) -> MultiSeries:
    """Relabel under exchanging the two arcs: b<->c, p<->r, q<->s."""
    return ms.relabel(ARC_SWAP)


def coord_swap(ms: MultiSeries) -> MultiSeries:
    """Relabel under exchanging the two coordinates: a<->d, b<->c, p<->q, r<->s."""
    return ms.relabel(COORD_SWAP)
