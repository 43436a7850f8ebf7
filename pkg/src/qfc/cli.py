"""Command-line front end: ``qfc <subcommand> [flags]``.

Exit status: 0 on success, 2 when a verification fails, 1 on usage errors and
exceeded budgets.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import curvezeta, localorbit
from .cache import LCache, default_path
from .density import (average_table, density_table, filtering_coefficients, mean_value_table,
                      parse_n_range)
from .gf import FieldError, field_of_order
from .places import LOCAL_TYPES, LocalType, Place, parse_place
from .polyring import parse_poly
from .quadext import enumerate_extensions, normalize
from .series import euler_product_E, zeta_rational, zeta_truncated, zeta_value

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Config:
    q: int = 3
    n_range: list[int] = field(default_factory=lambda: [1])
    conditions: dict[Place, LocalType] = field(default_factory=dict)
    trunc: int = 12
    budget: int = curvezeta.DEFAULT_BUDGET
    cache: str | None = None
    fmt: str = "table"
    jobs: int = 1
    places: list[Place] = field(default_factory=list)


def parse_places(text: str | None, q: int) -> list[Place]:
    """``"t,inf"`` -> places, in the given order without repeats."""
    out: list[Place] = []
    F = field_of_order(q)
    for item in (text or "").split(","):
        if item.strip():
            try:
                v = parse_place(item, F)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            if v not in out:
                out.append(v)
    return out


def parse_conditions(text: str | None, q: int) -> dict[Place, LocalType]:
    """``"t:ramA,inf:split"`` -> {Place: LocalType}."""
    out: dict[Place, LocalType] = {}
    if not text:
        return out
    F = field_of_order(q)
    for item in text.split(","):
        if not item.strip():
            continue
        if ":" not in item:
            raise UsageError(f"condition {item!r} is not of the form place:type")
        place, kind = item.rsplit(":", 1)
        try:
            v = parse_place(place, F)
            t = LocalType.parse(kind)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if v in out and out[v] != t:
            raise UsageError(f"conflicting conditions at {v}")
        out[v] = t
    return out


def make_config(args) -> Config:
    try:
        field_of_order(args.q)
    except (FieldError, ValueError) as exc:
        raise UsageError(f"--q {args.q}: {exc}") from exc
    if args.q % 2 == 0:
        raise UsageError("--q must be odd")
    try:
        n_range = parse_n_range(args.n) if getattr(args, "n", None) else [1]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cache = args.cache if args.cache is not None else default_path()
    return Config(
        q=args.q, n_range=n_range, conditions=parse_conditions(getattr(args, "cond", None), args.q),
        trunc=args.trunc, budget=args.budget, cache=str(cache) if cache else None,
        fmt=args.format, jobs=max(1, args.jobs), places=parse_places(getattr(args, "places", None), args.q),
    )


# --- rendering of simple records -----------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(record: dict, fmt: str, rows_key: str | None = None):
    """Print a flat record (or its list of rows) in the requested format."""
    if fmt == "json":
        print(json.dumps(_jsonable(record), indent=2, sort_keys=True))
        return
    rows = record[rows_key] if rows_key else [record]
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _jsonable(v) for k, v in r.items()})
        print(buf.getvalue(), end="")
        return
    for k, v in record.items():
        if k != rows_key:
            print(f"{k}: {_jsonable(v)}")
    if rows_key:
        for r in rows:
            print("  " + "  ".join(f"{k}={_jsonable(v)}" for k, v in r.items()))


# --- subcommands ---------------------------------------------------------------------

def cmd_zeta(cfg: Config, args) -> int:
    Z = zeta_rational(cfg.q)
    T = cfg.places
    order = args.max_order
    series = zeta_truncated(cfg.q, T, order) if T else Z.series(cfg.q, order)
    emit({"q": cfg.q, "removed_places": [str(v) for v in T], "zeta_2": zeta_value(cfg.q, 2),
          "numerator": list(Z.num), "denominator": list(Z.den),
          "coefficients": list(series.coeffs)}, cfg.fmt)
    return EXIT_OK


def cmd_euler(cfg: Config, args) -> int:
    S = cfg.places or list(cfg.conditions)
    value, tail = euler_product_E(cfg.q, S, cfg.trunc)
    emit({"q": cfg.q, "S": [str(v) for v in S], "B": cfg.trunc,
          "value": str(value), "tail": str(tail)}, cfg.fmt)
    return EXIT_OK


def cmd_enumerate(cfg: Config, args) -> int:
    F = field_of_order(cfg.q)
    rows = []
    for n in cfg.n_range:
        for E in enumerate_extensions(F, n, cfg.conditions):
            rows.append({"n": n, "D": str(E.D), "d0": ",".join(map(str, E.d0.coeffs)), "bit": E.lc_class,
                         "genus": E.genus})
    counts = {n: sum(1 for r in rows if r["n"] == n) for n in cfg.n_range}
    if cfg.fmt == "table":
        for n in cfg.n_range:
            print(f"n={n} count={counts[n]}")
        for r in rows:
            print(f"  n={r['n']} D={r['D']}")
        return EXIT_OK
    emit({"q": cfg.q, "counts": counts, "extensions": rows}, cfg.fmt, rows_key="extensions")
    return EXIT_OK


def cmd_classnum(cfg: Config, args) -> int:
    if not args.d:
        raise UsageError("classnum needs --d")
    F = field_of_order(cfg.q)
    try:
        E = normalize(parse_poly(args.d, F))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cache = LCache(cfg.cache) if cfg.cache else None
    L = cache.get(E) if cache else None
    if L is None:
        L = curvezeta.l_polynomial(E, cfg.budget)
        if cache:
            cache.add([(E, L)])
    emit({"q": cfg.q, "D": str(E.D), "genus": L.genus, "L": list(L.coeffs), "h": L.class_number}, cfg.fmt)
    return EXIT_OK


def cmd_local_verify(cfg: Config, args) -> int:
    q, M = cfg.q, args.max_order
    rows = []
    ok = True
    for t in LOCAL_TYPES:
        rep = localorbit.standard_rep(q, t)
        s = localorbit.orbital_series(rep, M, budget=cfg.budget)
        gen = localorbit.check_generating_identity(s)
        par = localorbit.parity_support_ok(s)
        ok &= gen and par
        rows.append({"type": str(t), "epsilon": localorbit.epsilon(t, q), "v": [str(c) for c in s.coeffs],
                     "generating_identity": gen, "parity": par})
    E = localorbit.E_sum(q)
    x = Fraction(1, q)
    e_ok = E == 1 - x ** 2 - x ** 3 + x ** 4
    ok &= e_ok
    record = {"q": q, "max_order": M, "E": E, "E_identity": e_ok, "types": rows}
    if q ** 8 <= cfg.budget:
        st = localorbit.stabilizer_order_mod_p2(localorbit.standard_rep(q, LocalType.RAMIFIED_A), cfg.budget)
        st_ok = (st.stabilizer_order == 2 * (q - 1) * q ** 4
                 and st.group_order == q ** 6 * (q - 1) ** 2 * (q ** 2 - 1)
                 and st.orbit_volume == localorbit.epsilon(LocalType.RAMIFIED_A, q))
        ok &= st_ok
        record.update(stabilizer=st.stabilizer_order, group_order=st.group_order, stabilizer_ok=st_ok)
    record["ok"] = ok
    emit(record, cfg.fmt, rows_key="types")
    return EXIT_OK if ok else EXIT_FAILED


def _table_command(builder):
    def run(cfg: Config, args) -> int:
        cache = LCache(cfg.cache) if cfg.cache else None
        kw = {"index": args.index} if builder is average_table else {}
        if builder is density_table:
            rep = builder(cfg.q, cfg.conditions, cfg.n_range, cfg.trunc)
        else:
            rep = builder(cfg.q, cfg.conditions, cfg.n_range, trunc=cfg.trunc, cache=cache,
                          budget=cfg.budget, jobs=cfg.jobs, **kw)
        print(rep.render(cfg.fmt))
        return EXIT_OK
    return run


def cmd_cache(cfg: Config, args) -> int:
    if not cfg.cache:
        raise UsageError("no cache path: pass --cache or set QFC_CACHE")
    cache = LCache(cfg.cache)
    if args.action == "stats":
        emit({"path": cfg.cache, "records": len(cache)}, cfg.fmt)
        return EXIT_OK
    rep = cache.verify(args.sample, seed=args.seed, budget=cfg.budget)
    emit({"path": cfg.cache, "records": rep.records, "checked": rep.checked,
          "mismatches": len(rep.mismatches), "mismatched": rep.mismatches, "corrupt_lines": rep.corrupt,
          "ok": rep.ok}, cfg.fmt)
    return EXIT_OK if rep.ok else EXIT_FAILED


COMMANDS = {
    "zeta": cmd_zeta,
    "euler": cmd_euler,
    "enumerate": cmd_enumerate,
    "classnum": cmd_classnum,
    "local-verify": cmd_local_verify,
    "mean-value": _table_command(mean_value_table),
    "density": _table_command(density_table),
    "average": _table_command(average_table),
    "filtering": _table_command(filtering_coefficients),
    "cache": cmd_cache,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=3, help="odd prime power (default 3)")
    common.add_argument("--n", help="norm exponents, e.g. 2, 1..4 or 1,3")
    common.add_argument("--d", help="polynomial D in t, e.g. 't^3+2t'")
    common.add_argument("--cond", help="local conditions, e.g. 't:ramA,inf:split'")
    common.add_argument("--places", help="places removed from Euler products, e.g. 't,inf'")
    common.add_argument("--trunc", type=int, default=12, help="Euler product truncation degree B")
    common.add_argument("--budget", type=int, default=curvezeta.DEFAULT_BUDGET, help="work cap per counting step")
    common.add_argument("--cache", help="L-polynomial cache file (default $QFC_CACHE)")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for point counting")
    common.add_argument("--max-order", type=int, default=4, help="series order (zeta, local-verify)")

    parser = _Parser(prog="qfc", description="Class numbers of quadratic extensions of F_q(t).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "average":
            p.add_argument("--index", choices=("norm", "genus"), default="norm")
        if name == "cache":
            p.add_argument("action", choices=("stats", "verify"))
            p.add_argument("--sample", type=float, default=0.01, help="fraction of records to recompute")
            p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"qfc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (curvezeta.BudgetExceeded, localorbit.BudgetExceeded) as exc:
        print(f"qfc {args.command}: budget exceeded (--budget {args.budget}): {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv: list[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
