"""Command line front end.

Subcommands: gtable, gij, gaa, assemble-i, verify <name>, power, phi, psi,
solve-pairs, solve-tuples, specialize, export, import.  Exit codes: 0 on
success, 1 on verification failure, 2 on usage or parse errors.  All output
numerals are exact integers or rationals rendered as num/den; JSON and CSV
output is byte-stable across runs for identical configuration.

A cache directory can be supplied with --cache-dir or the environment
variable ARCMOTIVE_CACHE_DIR; an optional key=value config file supplies
flag defaults (--config).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import cache as diskcache
from .gtable import (
    GTable,
    UnsupportedGcd,
    assemble_from_table,
    compute_G,
    gaa_closed_form,
    gij_closed_form,
    leading_term,
    mass_check,
    verify_milnor_equation,
    verify_symmetry_and_support,
    WindowTooSmall,
)
from .laurent import LM1, Lpow, ONE, parse_laurent
from .multiseries import MultiSeries
from .pairs import (
    arc_swap,
    coord_swap,
    pair_bounds,
    pair_rhs,
    phi,
    psi,
    slot,
    solve_pair_equation,
    stratum_contribution,
    stratum_direct,
    strata_sum,
    STRATA,
)
from .powerstruct import axiom_report, one_minus_t_pow, sym_powers
from .ratfunc import RationalFunc
from .recurrences import verify_fab_equation
from .tseries import format_tseries
from .tuples import seed_series, solve_tuple_equation, tuple_rhs

VERIFY_NAMES = ("eq1", "eq2-support", "eq4", "lemma3", "table", "leading",
                "mass", "power-axioms", "phi-psi", "lemma4", "thm4")


def _fail_usage(msg: str) -> int:
    print(msg, file=sys.stderr)
    return 2


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def read_config(path: str | None) -> dict:
    conf = {}
    if not path:
        return conf
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            conf[key.strip()] = value.strip()
    return conf


def _opt(args, config: dict, name: str, builtin, cast=int):
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return builtin


def parse_monomial(text: str, vars_: tuple) -> tuple:
    """Parse "L^-1*p*q" style monomials into (LaurentPoly coeff, exps dict)."""
    coeff = ONE
    exps = {}
    s = text.replace(" ", "")
    if s in ("1", ""):
        return coeff, exps
    for token in s.split("*"):
        if not token:
            raise ValueError(f"empty factor in {text!r}")
        name, _, power = token.partition("^")
        if name == "L" or (name.lstrip("+-").isdigit() and not power):
            coeff = coeff * parse_laurent(token)
        elif name in vars_:
            e = int(power) if power else 1
            if e < 0:
                raise ValueError(f"negative exponent on {name} in {text!r}")
            exps[name] = exps.get(name, 0) + e
        else:
            raise ValueError(f"unknown factor {token!r} in {text!r}")
    return coeff, exps


# ---------------------------------------------------------------------------
# shared builders
# ---------------------------------------------------------------------------


def load_gtable(cache_dir: str | None, imax: int, jmax: int, order: int) -> GTable:
    key = diskcache.cache_key("solver", "gtable",
                              {"imax": imax, "jmax": jmax, "order": order})
    payload = diskcache.load(cache_dir, key)
    if payload is not None:
        try:
            return GTable.from_json(payload)
        except (KeyError, ValueError, TypeError):
            pass  # corrupt entry: recompute below
    table = GTable.build(imax, jmax, order)
    diskcache.store(cache_dir, key, table.to_json())
    return table


def render_gtable_text(table: GTable) -> str:
    lines = [f"G[{i},{j}] = {format_tseries(table.get(i, j))}"
             for (i, j) in table.pairs()]
    return "\n".join(lines) + "\n"


def render_ratfunc(rf: RationalFunc) -> str:
    return str(rf)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gtable(args, config) -> int:
    imax = _opt(args, config, "imax", 12)
    jmax = _opt(args, config, "jmax", 12)
    order = _opt(args, config, "order", 30)
    fmt = _opt(args, config, "format", "text", str)
    if imax < 1 or jmax < 1 or order < 0:
        return _fail_usage("gtable: bounds must be positive")
    table = load_gtable(args.cache_dir, imax, jmax, order)
    if fmt == "text":
        _emit(render_gtable_text(table), args.out)
    elif fmt == "csv":
        _emit(table.to_csv(), args.out)
    elif fmt == "json":
        _emit(_json_text(table.to_json()), args.out)
    else:
        return _fail_usage(f"gtable: unknown format {fmt!r}")
    return 0


def cmd_gij(args, config) -> int:
    if args.i < 1 or args.j < 1:
        return _fail_usage("gij: indices must be >= 1")
    if args.closed:
        try:
            rf = gij_closed_form(args.i, args.j)
        except UnsupportedGcd as exc:
            return _fail_usage(f"gij: {exc}")
        _emit(f"G[{args.i},{args.j}] = {render_ratfunc(rf)}\n", args.out)
        return 0
    order = _opt(args, config, "order", 30)
    if order < 0:
        return _fail_usage("gij: order must be non-negative")
    s = compute_G(args.i, args.j, order)
    _emit(f"G[{args.i},{args.j}] = {format_tseries(s)}\n", args.out)
    return 0


def cmd_gaa(args, config) -> int:
    try:
        rf = gaa_closed_form(args.a)
    except UnsupportedGcd as exc:
        return _fail_usage(f"gaa: {exc}")
    _emit(f"G[{args.a},{args.a}] = {render_ratfunc(rf)}\n", args.out)
    return 0


def cmd_assemble_i(args, config) -> int:
    imax = _opt(args, config, "imax", 6)
    jmax = _opt(args, config, "jmax", 6)
    order = _opt(args, config, "order", 30)
    if imax < 1 or jmax < 1 or order < 0:
        return _fail_usage("assemble-i: bounds must be positive")
    table = load_gtable(args.cache_dir, imax, jmax, order)
    series = assemble_from_table(table, imax, jmax)
    fmt = _opt(args, config, "format", "json", str)
    if fmt == "json":
        _emit(_json_text(series.to_json()), args.out)
    elif fmt == "text":
        _emit(str(series) + "\n", args.out)
    else:
        return _fail_usage(f"assemble-i: unknown format {fmt!r}")
    return 0


def cmd_power(args, config) -> int:
    order = _opt(args, config, "order", 12)
    if order < 0:
        return _fail_usage("power: order must be non-negative")
    try:
        m = parse_laurent(args.m)
    except ValueError as exc:
        return _fail_usage(f"power: {exc}")
    series = one_minus_t_pow(m, order)
    lines = [f"(1-t)^-({m}) = {format_tseries(series)}"]
    kmax = args.kmax if args.kmax is not None else min(order, 8)
    for k, c in enumerate(sym_powers(m, kmax)):
        lines.append(f"S^{k} = {c}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _phi_psi_common(args, config, nargs: int):
    t_order = _opt(args, config, "torder", 12)
    cap = _opt(args, config, "cap", 8)
    bound = _opt(args, config, "bound", 6)
    if t_order < 0 or cap < 1 or bound < 1:
        raise ValueError("bounds must be positive")
    bounds = pair_bounds(t_order, cap)
    slots = []
    for text in args.slots:
        coeff, exps = parse_monomial(text, bounds.vars)
        slots.append(slot(bounds, coeff, **exps))
    if len(slots) != nargs:
        raise ValueError(f"expected {nargs} slot monomials, got {len(slots)}")
    return bounds, slots, bound


def cmd_phi(args, config) -> int:
    try:
        bounds, slots, bound = _phi_psi_common(args, config, 8)
    except ValueError as exc:
        return _fail_usage(f"phi: {exc}")
    series = phi(slots, bounds, bound)
    _emit(_json_text(series.to_json()) if args.format == "json"
          else str(series) + "\n", args.out)
    return 0


def cmd_psi(args, config) -> int:
    try:
        bounds, slots, bound = _phi_psi_common(args, config, 5)
    except ValueError as exc:
        return _fail_usage(f"psi: {exc}")
    series = psi(slots, bounds, bound)
    _emit(_json_text(series.to_json()) if args.format == "json"
          else str(series) + "\n", args.out)
    return 0


def cmd_solve_pairs(args, config) -> int:
    t_order = _opt(args, config, "torder", 8)
    cap = _opt(args, config, "cap", 8)
    if t_order < 1 or cap < 1:
        return _fail_usage("solve-pairs: bounds must be positive")
    sol = solve_pair_equation(t_order, cap, nine_a=args.nine_a)
    if args.format == "json":
        _emit(_json_text(sol.series.to_json()), args.out)
    else:
        _emit(str(sol.series) + "\n", args.out)
    print(f"solve-pairs: {sol.summary()}", file=sys.stderr)
    return 0


def cmd_solve_tuples(args, config) -> int:
    t_order = _opt(args, config, "torder", 5)
    u_order = _opt(args, config, "uorder", 2)
    cap = _opt(args, config, "cap", 5)
    if t_order < 1 or u_order < 1 or cap < 1:
        return _fail_usage("solve-tuples: bounds must be positive")
    sol = solve_tuple_equation(t_order, u_order, cap)
    if args.format == "json":
        _emit(_json_text(sol.series.to_json()), args.out)
    else:
        _emit(str(sol.series) + "\n", args.out)
    print(f"solve-tuples: {sol.summary()}", file=sys.stderr)
    return 0


def cmd_specialize(args, config) -> int:
    try:
        value = Fraction(args.value)
    except (ValueError, ZeroDivisionError):
        return _fail_usage(f"specialize: cannot parse value {args.value!r}")
    if value == 0:
        return _fail_usage("specialize: value must be nonzero")
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        return _fail_usage(f"specialize: cannot read input: {exc}")
    lines = []
    try:
        if isinstance(data, dict) and "entries" in data:
            order = int(data["order"])
            table = GTable.from_json(data)
            for (i, j) in table.pairs():
                for texp, c in table.get(i, j).items():
                    lines.append(f"G[{i},{j}] t^{texp} = {c.specialize(value)}")
        elif isinstance(data, dict) and "vars" in data:
            series = MultiSeries.from_json(data)
            for exps, c in series.terms():
                mono = series.format_monomial(exps)
                lines.append(f"{mono} = {c.specialize(value)}")
        else:
            return _fail_usage("specialize: unrecognized schema")
    except (KeyError, ValueError, TypeError) as exc:
        return _fail_usage(f"specialize: malformed input: {exc}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_export(args, config) -> int:
    what = args.what
    if what == "gtable":
        return cmd_gtable(_with(args, format="json"), config)
    if what == "assemble-i":
        return cmd_assemble_i(_with(args, format="json"), config)
    if what == "pairs":
        return cmd_solve_pairs(_with(args, format="json"), config)
    if what == "tuples":
        return cmd_solve_tuples(_with(args, format="json"), config)
    return _fail_usage(f"export: unknown artifact {what!r}")


def _with(args, **overrides):
    ns = argparse.Namespace(**vars(args))
    for k, v in overrides.items():
        setattr(ns, k, v)
    return ns


def cmd_import(args, config) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        return _fail_usage(f"import: cannot read input: {exc}")
    try:
        if isinstance(data, dict) and "entries" in data:
            obj = GTable.from_json(data)
            canonical = obj.to_json()
        elif isinstance(data, dict) and "vars" in data:
            canonical = MultiSeries.from_json(data).to_json()
        else:
            return _fail_usage("import: unrecognized schema")
    except (KeyError, ValueError, TypeError) as exc:
        return _fail_usage(f"import: malformed input: {exc}")
    _emit(_json_text(canonical), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_eq1(args, config) -> int:
    imax = _opt(args, config, "imax", 6)
    jmax = _opt(args, config, "jmax", 6)
    order = _opt(args, config, "order", 30)
    table = load_gtable(args.cache_dir, imax, jmax, order)
    series = assemble_from_table(table, imax, jmax)
    try:
        report = verify_milnor_equation(series)
    except WindowTooSmall as exc:
        return _fail_usage(f"verify eq1: {exc}")
    print(report.summary())
    if report.smooth_diagonal_ok:
        print("smooth-diagonal tail identity: exact")
    return 0 if report.ok else 1


def _verify_eq2(args, config) -> int:
    imax = _opt(args, config, "imax", 6)
    jmax = _opt(args, config, "jmax", 6)
    order = _opt(args, config, "order", 30)
    table = load_gtable(args.cache_dir, imax, jmax, order)
    report = verify_symmetry_and_support(assemble_from_table(table, imax, jmax))
    print(report.summary())
    return 0 if report.ok else 1


def _verify_eq4(args, config) -> int:
    max_sum = _opt(args, config, "max", 20)
    report = verify_fab_equation(max_sum)
    print(report.summary())
    return 0 if report.ok else 1


def _verify_lemma3(args, config) -> int:
    maxb = _opt(args, config, "max", 12)
    order = _opt(args, config, "order", 30)
    checked = 0
    for i in range(1, maxb + 1):
        for j in range(i, maxb + 1):
            a = math.gcd(i, j)
            lhs = compute_G(i, j, order)
            texp = (i - 1) * (j - 1) - (a - 1) ** 2
            rhs = compute_G(a, a, order).scale(Lpow(2 * a - i - j)).shift_t(texp, order)
            if lhs != rhs:
                print(f"gcd reduction fails at ({i},{j})")
                return 1
            checked += 1
    print(f"checked {checked} pairs, all exact")
    return 0


def _verify_table(args, config) -> int:
    order = _opt(args, config, "order", 40)
    maxb = _opt(args, config, "max", 12)
    checked = 0
    for a in (1, 2, 3, 4):
        if compute_G(a, a, order) != gaa_closed_form(a).expand(order):
            print(f"diagonal closed form fails at a={a}")
            return 1
        checked += 1
    for i in range(1, maxb + 1):
        for j in range(i, maxb + 1):
            if math.gcd(i, j) > 4:
                continue
            if compute_G(i, j, order) != gij_closed_form(i, j).expand(order):
                print(f"closed form fails at ({i},{j})")
                return 1
            checked += 1
    print(f"checked {checked} closed forms to order {order}, all exact")
    return 0


def _verify_leading(args, config) -> int:
    maxb = _opt(args, config, "max", 12)
    checked = 0
    for i in range(1, maxb + 1):
        for j in range(i, maxb + 1):
            a = math.gcd(i, j)
            exp, coeff = leading_term(i, j)
            if a == 1:
                want = ((i - 1) * (j - 1), LM1 ** 2 * Lpow(-i - j))
            else:
                want = ((i - 1) * (j - 1) + a - 1, LM1 ** 3 * Lpow(-i - j - 1))
            if (exp, coeff) != want:
                print(f"leading term fails at ({i},{j}): got t^{exp} {coeff}")
                return 1
            checked += 1
    print(f"checked {checked} leading terms, all exact")
    return 0


def _verify_mass(args, config) -> int:
    maxb = _opt(args, config, "max", 12)
    checked = 0
    for i in range(1, maxb + 1):
        for j in range(i, maxb + 1):
            if math.gcd(i, j) > 4:
                continue
            if not mass_check(i, j):
                print(f"mass check fails at ({i},{j})")
                return 1
            checked += 1
    print(f"checked {checked} strata masses, all exact")
    return 0


def _verify_power(args, config) -> int:
    trials = _opt(args, config, "trials", 100)
    order = _opt(args, config, "order", 10)
    seed = _opt(args, config, "seed", 0)
    report = axiom_report(trials, order, seed)
    print(report.summary())
    return 0 if report.ok else 1


def _verify_phi_psi(args, config) -> int:
    bound = _opt(args, config, "bound", 6)
    t_order = bound * bound + 1
    bounds = pair_bounds(t_order, bound * bound)
    checked = 0
    for which in STRATA:
        mode = "truncated" if which == "9a" else "closed"
        built = stratum_contribution(which, bounds, bound, nine_a=mode)
        direct = stratum_direct(which, bounds, bound)
        if built != direct:
            print(f"stratum {which} disagrees with its direct summation")
            return 1
        checked += len(built)
    print(f"checked 7 strata at index bound {bound} ({checked} monomials), all exact")
    return 0


def _verify_lemma4(args, config) -> int:
    t_order = _opt(args, config, "torder", 8)
    cap = _opt(args, config, "cap", 8)
    sol = solve_pair_equation(t_order, cap)
    J = sol.series
    problems = []
    if sol.stabilized_after > t_order:
        problems.append(f"stabilized only after {sol.stabilized_after}")
    if arc_swap(J) != J:
        problems.append("arc-swap symmetry broken")
    if coord_swap(J) != J:
        problems.append("coordinate-swap symmetry broken")
    strata = strata_sum(sol.bounds, sol.index_bound, sol.nine_a)
    if pair_rhs(J, strata) != J:
        problems.append("not a fixed point")
    print(f"pair solve: {sol.summary()}")
    if problems:
        print("; ".join(problems))
        return 1
    print("stabilization, both swap symmetries, and idempotence all hold")
    return 0


def _verify_thm4(args, config) -> int:
    t_order = _opt(args, config, "torder", 5)
    u_order = _opt(args, config, "uorder", 2)
    cap = _opt(args, config, "cap", 5)
    sol = solve_tuple_equation(t_order, u_order, cap)
    problems = []
    if sol.u_slice(0) != seed_series(sol.bounds).slice_var("u", 0):
        problems.append("u^0 slice differs from the order-pair window")
    pair_sol = solve_pair_equation(t_order, cap)
    if sol.u_slice(1) != pair_sol.series:
        problems.append("u^1 slice differs from the pair solution")
    rhs = tuple_rhs(sol.series, sol.eps, sol.alpha, exact_boundary=True)
    uidx = sol.bounds.index("u")
    rebuilt = sol.seed + rhs.filter_terms(lambda e, _c: e[uidx] >= 1)
    if rebuilt != sol.series:
        problems.append("not a fixed point")
    print(f"tuple solve: {sol.summary()}")
    if problems:
        print("; ".join(problems))
        return 1
    print("u^0 boundary, u^1 pair match, and idempotence all hold")
    return 0


VERIFY_DISPATCH = {
    "eq1": _verify_eq1,
    "eq2-support": _verify_eq2,
    "eq4": _verify_eq4,
    "lemma3": _verify_lemma3,
    "table": _verify_table,
    "leading": _verify_leading,
    "mass": _verify_mass,
    "power-axioms": _verify_power,
    "phi-psi": _verify_phi_psi,
    "lemma4": _verify_lemma4,
    "thm4": _verify_thm4,
}


def cmd_verify(args, config) -> int:
    which = args.which
    if which not in VERIFY_DISPATCH:
        return _fail_usage(f"verify: unknown check {which!r}; "
                           f"choose from {', '.join(VERIFY_NAMES)}")
    for name in ("imax", "jmax", "order", "max", "trials", "torder",
                 "uorder", "cap", "bound"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            return _fail_usage(f"verify: {name} must be non-negative")
    return VERIFY_DISPATCH[which](args, config)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcmotive",
        description="Exact generating series of arc invariants on the plane.",
    )
    parser.add_argument("--cache-dir", default=os.environ.get("ARCMOTIVE_CACHE_DIR"),
                        help="directory for cached tables")
    parser.add_argument("--config", help="key=value file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("gtable", help="compute the stratified measure table")
    p.add_argument("--imax", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--format", choices=("text", "csv", "json"))
    add_out(p)
    p.set_defaults(func=cmd_gtable)

    p = sub.add_parser("gij", help="one table entry, as series or closed form")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--closed", action="store_true")
    add_out(p)
    p.set_defaults(func=cmd_gij)

    p = sub.add_parser("gaa", help="diagonal closed form")
    p.add_argument("--a", type=int, required=True)
    add_out(p)
    p.set_defaults(func=cmd_gaa)

    p = sub.add_parser("assemble-i", help="the six-variable series on its support")
    p.add_argument("--imax", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--format", choices=("text", "json"))
    add_out(p)
    p.set_defaults(func=cmd_assemble_i)

    p = sub.add_parser("verify", help="run a named verification")
    p.add_argument("which", choices=VERIFY_NAMES)
    p.add_argument("--imax", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--max", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--torder", type=int)
    p.add_argument("--uorder", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("power", help="(1-t)^-m expansion and symmetric powers")
    p.add_argument("--m", required=True, help="a Laurent polynomial, e.g. 'L^2-1'")
    p.add_argument("--order", type=int)
    p.add_argument("--kmax", type=int)
    add_out(p)
    p.set_defaults(func=cmd_power)

    for name, nslots in (("phi", 8), ("psi", 5)):
        p = sub.add_parser(name, help=f"truncated {name} sum for {nslots} slot monomials")
        p.add_argument("slots", nargs=nslots,
                       help="slot monomials like 'b*t' or 'L^-1*p'")
        p.add_argument("--bound", type=int)
        p.add_argument("--torder", type=int)
        p.add_argument("--cap", type=int)
        p.add_argument("--format", choices=("text", "json"), default="text")
        add_out(p)
        p.set_defaults(func=cmd_phi if name == "phi" else cmd_psi)

    p = sub.add_parser("solve-pairs", help="solve the pair intersection equation")
    p.add_argument("--torder", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--nine-a", choices=("closed", "truncated"), default="closed")
    p.add_argument("--format", choices=("text", "json"), default="json")
    add_out(p)
    p.set_defaults(func=cmd_solve_pairs)

    p = sub.add_parser("solve-tuples", help="solve the tuple intersection equation")
    p.add_argument("--torder", type=int)
    p.add_argument("--uorder", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--format", choices=("text", "json"), default="json")
    add_out(p)
    p.set_defaults(func=cmd_solve_tuples)

    p = sub.add_parser("specialize", help="evaluate coefficients at an exact L value")
    p.add_argument("--input", required=True)
    p.add_argument("--value", required=True, help="exact rational, e.g. 4 or 1/2")
    add_out(p)
    p.set_defaults(func=cmd_specialize)

    p = sub.add_parser("export", help="write an artifact as canonical JSON")
    p.add_argument("--what", required=True,
                   choices=("gtable", "assemble-i", "pairs", "tuples"))
    p.add_argument("--imax", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--torder", type=int)
    p.add_argument("--uorder", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--nine-a", choices=("closed", "truncated"), default="closed")
    add_out(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", help="read an exported file and re-emit canonically")
    p.add_argument("--input", required=True)
    add_out(p)
    p.set_defaults(func=cmd_import)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = read_config(args.config)
    except OSError as exc:
        return _fail_usage(f"cannot read config: {exc}")
    return args.func(args, config)


if __name__ == "__main__":
    sys.exit(main())
