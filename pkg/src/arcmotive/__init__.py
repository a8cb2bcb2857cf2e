"""Exact generating series of arc invariants on the plane.

The package computes, with exact integer arithmetic throughout:

* the Milnor-number series of the stratified arc space, as the table
  G_{i,j}(t) of Laurent-coefficient power series, its closed forms, and the
  six-variable series I with its blow-up functional equation (`gtable`);
* the generic two-index recurrence system behind that table and the
  order-pair series f(a,b) with its own equation (`recurrences`);
* the power structure on 1 + t R[[t]] over R = Z[L, L^-1]: (1-t)^(-m),
  general A(t)^m, symmetric-power coefficients, and the finite motivic
  exponential (`powerstruct`);
* the two-arc intersection series J and its fixed-point solver (`pairs`);
* the arc-vs-tuple intersection series over symmetric powers (`tuples`).

Coefficients live in Z[L, L^-1] (`laurent`); series are truncated exactly
(`tseries`, `multiseries`); closed forms are rational functions in (t, L)
(`ratfunc`).  No floating point is used anywhere.
"""

__version__ = "0.1.0"

from .laurent import (
    L,
    LM1,
    LaurentFraction,
    LaurentPoly,
    Lpow,
    NotAUnit,
    ONE,
    ZERO,
    ZeroBase,
    geometric_tail,
    parse_laurent,
)
from .multiseries import (
    DropCounter,
    InadmissibleMap,
    MonomialMap,
    MultiSeries,
    SeriesBounds,
)
from .ratfunc import NonUnitDenominator, PoleAtOne, RationalFunc
from .tseries import NonUnitConstantTerm, TSeries, format_tseries, geometric

__all__ = [
    "L", "LM1", "LaurentFraction", "LaurentPoly", "Lpow", "NotAUnit", "ONE",
    "ZERO", "ZeroBase", "geometric_tail", "parse_laurent",
    "DropCounter", "InadmissibleMap", "MonomialMap", "MultiSeries",
    "SeriesBounds",
    "NonUnitDenominator", "PoleAtOne", "RationalFunc",
    "NonUnitConstantTerm", "TSeries", "format_tseries", "geometric",
    "__version__",
]
