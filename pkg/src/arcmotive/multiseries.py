"""Sparse truncated series in several variables over Z[L, L^-1].

Truncation policy
-----------------
A :class:`SeriesBounds` fixes the variable tuple, a weighted total degree
(weight 1 on t and 0 elsewhere unless overridden), a maximum weight, and
optional per-variable exponent caps.  Every operation stores only monomials
the policy admits.  Per-variable caps exist because some series have t-slices
of infinite support (arbitrarily deep tangency in one variable at fixed
intersection number); any term a cap silently would have discarded is instead
counted through an optional :class:`DropCounter` so truncation is never
silent.

Monomial substitution
---------------------
A :class:`MonomialMap` sends each source variable to ``scale * monomial``
where scale is a Laurent polynomial and the monomial may involve a t-offset.
Negative t-exponents are legal only transiently: the map is admissible on a
support when every image stays at t-degree >= 0 and the grading weight does
not decrease.  Violations raise :class:`InadmissibleMap`.
"""

from __future__ import annotations

from .laurent import LaurentPoly, ONE, ZERO


class InadmissibleMap(ValueError):
    """A support monomial's image fell below t-degree 0 or lost weight."""


class DropCounter:
    """Mutable counter for monomials discarded by a truncation policy."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def __repr__(self):
        return f"DropCounter({self.count})"


def _as_lp(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


class SeriesBounds:
    """Truncation policy for a MultiSeries."""

    __slots__ = ("vars", "weights", "max_weight", "caps", "_wvec", "_capvec")

    def __init__(self, vars, max_weight, weights=None, caps=None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        if weights is None:
            weights = {"t": 1} if "t" in self.vars else {}
        self.weights = dict(weights)
        self.max_weight = max_weight
        self.caps = dict(caps) if caps else {}
        for name in list(self.weights) + list(self.caps):
            if name not in self.vars:
                raise ValueError(f"unknown variable {name!r}")
        self._wvec = tuple(self.weights.get(v, 0) for v in self.vars)
        self._capvec = tuple(self.caps.get(v) for v in self.vars)

    def index(self, var: str) -> int:
        return self.vars.index(var)

    def weight(self, exps) -> int:
        return sum(w * e for w, e in zip(self._wvec, exps) if w)

    def admits(self, exps) -> bool:
        if self.weight(exps) > self.max_weight:
            return False
        for cap, e in zip(self._capvec, exps):
            if cap is not None and e > cap:
                return False
        return True

    def exps_tuple(self, mapping) -> tuple:
        out = [0] * len(self.vars)
        for name, e in mapping.items():
            out[self.index(name)] = e
        return tuple(out)

    def same_vars(self, other) -> bool:
        return self.vars == other.vars

    def __repr__(self):
        return (f"SeriesBounds(vars={self.vars}, max_weight={self.max_weight}, "
                f"weights={self.weights}, caps={self.caps})")


class MultiSeries:
    """Sparse mapping exponent-tuple -> LaurentPoly under a SeriesBounds."""

    __slots__ = ("bounds", "_terms")

    def __init__(self, bounds: SeriesBounds, terms=None, drops: DropCounter | None = None):
        self.bounds = bounds
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exps, coeff in items:
                coeff = _as_lp(coeff)
                if not coeff:
                    continue
                exps = tuple(exps)
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent in stored monomial")
                if not bounds.admits(exps):
                    if drops is not None:
                        drops.count += 1
                    continue
                s = clean.get(exps, ZERO) + coeff
                if s:
                    clean[exps] = s
                elif exps in clean:
                    del clean[exps]
        self._terms = clean

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, bounds: SeriesBounds) -> "MultiSeries":
        return cls(bounds)

    @classmethod
    def monomial(cls, bounds: SeriesBounds, coeff, **exps) -> "MultiSeries":
        return cls(bounds, {bounds.exps_tuple(exps): _as_lp(coeff)})

    # -- queries -------------------------------------------------------------------

    @property
    def vars(self):
        return self.bounds.vars

    def terms(self):
        """Terms as (exponent tuple, coefficient), lexicographically sorted."""
        return sorted(self._terms.items())

    def coefficient(self, **exps) -> LaurentPoly:
        return self._terms.get(self.bounds.exps_tuple(exps), ZERO)

    def coeff_at(self, exps: tuple) -> LaurentPoly:
        return self._terms.get(tuple(exps), ZERO)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    # -- ring operations -------------------------------------------------------------

    def _require_same_vars(self, other):
        if not self.bounds.same_vars(other.bounds):
            raise ValueError("variable tuples differ")

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._require_same_vars(other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            if not self.bounds.admits(exps):
                continue
            s = out.get(exps, ZERO) + c
            if s:
                out[exps] = s
            elif exps in out:
                del out[exps]
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    def __sub__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        r = MultiSeries.__new__(MultiSeries)
        r.bounds = self.bounds
        r._terms = {e: -c for e, c in self._terms.items()}
        return r

    def scale(self, coeff) -> "MultiSeries":
        coeff = _as_lp(coeff)
        out = {}
        for exps, c in self._terms.items():
            p = c * coeff
            if p:
                out[exps] = p
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    def mul_monomial(self, coeff, drops: DropCounter | None = None, **exps) -> "MultiSeries":
        """Multiply by coeff * (monomial given by exps), honouring bounds."""
        coeff = _as_lp(coeff)
        shift = self.bounds.exps_tuple(exps)
        out = {}
        for e, c in self._terms.items():
            ne = tuple(a + b for a, b in zip(e, shift))
            if not self.bounds.admits(ne):
                if drops is not None:
                    drops.count += 1
                continue
            p = c * coeff
            if p:
                out[ne] = p
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._require_same_vars(other)
        admits = self.bounds.admits
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not admits(e):
                    continue
                p = c1 * c2
                s = out.get(e, ZERO) + p
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    def add_into(self, acc: dict):
        """Accumulate this series' terms into a plain dict (builder helper;
        the caller owns bounds discipline)."""
        for e, c in self._terms.items():
            s = acc.get(e)
            s = c if s is None else s + c
            if s:
                acc[e] = s
            elif e in acc:
                del acc[e]

    @classmethod
    def from_raw(cls, bounds: SeriesBounds, acc: dict) -> "MultiSeries":
        """Wrap an already-filtered term dict without copying."""
        r = cls.__new__(cls)
        r.bounds, r._terms = bounds, acc
        return r

    # -- slicing and relabeling ----------------------------------------------------

    def slice_var(self, var: str, value: int, keep: bool = False) -> "MultiSeries":
        """Terms with the given exponent of var; drop the variable unless keep."""
        i = self.bounds.index(var)
        if keep:
            out = {e: c for e, c in self._terms.items() if e[i] == value}
            r = MultiSeries.__new__(MultiSeries)
            r.bounds, r._terms = self.bounds, out
            return r
        new_vars = self.vars[:i] + self.vars[i + 1:]
        nb = SeriesBounds(
            new_vars,
            self.bounds.max_weight,
            {v: w for v, w in self.bounds.weights.items() if v != var},
            {v: c for v, c in self.bounds.caps.items() if v != var},
        )
        out = {}
        for e, c in self._terms.items():
            if e[i] == value:
                out[e[:i] + e[i + 1:]] = c
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = nb, out
        return r

    def relabel(self, mapping: dict) -> "MultiSeries":
        """Permute variables: mapping old-name -> new-name (within vars)."""
        perm = []
        for v in self.vars:
            target = mapping.get(v, v)
            perm.append(self.bounds.index(target))
        out = {}
        for e, c in self._terms.items():
            ne = tuple(e[perm[i]] for i in range(len(e)))
            out[ne] = c
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    def filter_terms(self, predicate) -> "MultiSeries":
        out = {e: c for e, c in self._terms.items() if predicate(e, c)}
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = self.bounds, out
        return r

    # -- substitution -----------------------------------------------------------------

    def substitute(self, mmap: "MonomialMap", drops: DropCounter | None = None) -> "MultiSeries":
        return mmap.apply(self, drops=drops)

    # -- comparisons and formats ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self):
        raise TypeError("MultiSeries is unhashable")

    def format_monomial(self, exps) -> str:
        parts = []
        for v, e in zip(self.vars, exps):
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def __str__(self):
        if not self._terms:
            return "0"
        lines = []
        for exps, c in self.terms():
            lines.append(f"{self.format_monomial(exps)} : {c}")
        return "\n".join(lines)

    def __repr__(self):
        return f"MultiSeries({len(self._terms)} terms over {self.vars})"

    def to_json(self):
        return {
            "vars": list(self.vars),
            "bound": {
                "max_weight": self.bounds.max_weight,
                "weights": dict(self.bounds.weights),
                "caps": dict(self.bounds.caps),
            },
            "terms": [[list(e), c.to_json()] for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data) -> "MultiSeries":
        b = data["bound"]
        bounds = SeriesBounds(data["vars"], b["max_weight"], b.get("weights"), b.get("caps"))
        return cls(bounds, {tuple(e): LaurentPoly.from_json(c) for e, c in data["terms"]})


class MonomialMap:
    """Substitution variable -> scale * monomial between variable tuples."""

    __slots__ = ("source_vars", "target_vars", "scales", "images")

    def __init__(self, source_vars, target_vars, images: dict):
        """images: var -> (scale, {target var: exponent}).  Missing source
        variables map to themselves (they must then exist in the target)."""
        self.source_vars = tuple(source_vars)
        self.target_vars = tuple(target_vars)
        tindex = {v: i for i, v in enumerate(self.target_vars)}
        n = len(self.target_vars)
        self.scales = []
        self.images = []
        for v in self.source_vars:
            if v in images:
                scale, mono = images[v]
                scale = _as_lp(scale)
                vec = [0] * n
                for name, e in mono.items():
                    vec[tindex[name]] += e
            else:
                if v not in tindex:
                    raise ValueError(f"variable {v!r} has no image")
                scale = ONE
                vec = [0] * n
                vec[tindex[v]] = 1
            self.scales.append(scale)
            self.images.append(tuple(vec))

    @classmethod
    def identity(cls, vars) -> "MonomialMap":
        return cls(vars, vars, {})

    def image_exps(self, exps):
        """Image exponent tuple, or InadmissibleMap if any component < 0."""
        n = len(self.target_vars)
        acc = [0] * n
        for e, vec in zip(exps, self.images):
            if e:
                for i in range(n):
                    if vec[i]:
                        acc[i] += e * vec[i]
        for a in acc:
            if a < 0:
                raise InadmissibleMap(
                    f"image of {exps} has a negative exponent: {tuple(acc)}"
                )
        return tuple(acc)

    def certify(self, support, source_bounds: SeriesBounds, target_bounds: SeriesBounds):
        """Check the grading certificate on the given support monomials."""
        for exps in support:
            img = self.image_exps(exps)
            if target_bounds.weight(img) < source_bounds.weight(exps):
                raise InadmissibleMap(
                    f"grading weight decreases on {exps}: "
                    f"{source_bounds.weight(exps)} -> {target_bounds.weight(img)}"
                )

    def apply(self, series: MultiSeries, target_bounds: SeriesBounds | None = None,
              drops: DropCounter | None = None) -> MultiSeries:
        if series.vars != self.source_vars:
            raise ValueError("series variables do not match the map's source")
        bounds = target_bounds if target_bounds is not None else series.bounds
        if bounds.vars != self.target_vars:
            raise ValueError("target bounds do not match the map's target")
        src_weight = series.bounds.weight
        # per-variable caches of scale powers
        pow_caches = [{0: ONE, 1: s} for s in self.scales]
        nontrivial = [not (s == ONE) for s in self.scales]

        out = {}
        for exps, coeff in series._terms.items():
            img = self.image_exps(exps)
            if bounds.weight(img) < src_weight(exps):
                raise InadmissibleMap(
                    f"grading weight decreases on {exps}"
                )
            if not bounds.admits(img):
                if drops is not None:
                    drops.count += 1
                continue
            c = coeff
            for i, e in enumerate(exps):
                if e and nontrivial[i]:
                    cache = pow_caches[i]
                    p = cache.get(e)
                    if p is None:
                        p = cache[1] ** e
                        cache[e] = p
                    c = c * p
            if not c:
                continue
            s = out.get(img, ZERO) + c
            if s:
                out[img] = s
            elif img in out:
                del out[img]
        r = MultiSeries.__new__(MultiSeries)
        r.bounds, r._terms = bounds, out
        return r
