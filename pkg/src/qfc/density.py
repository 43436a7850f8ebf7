"""Census sums over quadratic extensions and their comparison with predicted limits."""

from __future__ import annotations

import csv
import io
import json
import time
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .cache import LCache, lookup_or_compute
from .curvezeta import DEFAULT_BUDGET, LPolynomial, l_polynomials
from .gf import field_of_order
from .places import LocalType, Place
from .quadext import QuadExt, enumerate_extensions
from .series import BaseFieldInfo, predicted_constant

Conditions = Mapping[Place, LocalType]


# --- census -----------------------------------------------------------------------

def _lpoly_chunk(records, budget):
    exts = [QuadExt.deserialize(*r) for r in records]
    return [L.coeffs for L in l_polynomials(exts, budget)]


def compute_lpolys(exts: Sequence[QuadExt], budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list[LPolynomial]:
    """Batch L-polynomials; with jobs > 1 the work is split into ordered chunks."""
    exts = list(exts)
    if jobs <= 1 or len(exts) < 2 * jobs:
        return l_polynomials(exts, budget)
    size = -(-len(exts) // jobs)
    chunks = [[E.serialize() for E in exts[i:i + size]] for i in range(0, len(exts), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_lpoly_chunk, chunks, [budget] * len(chunks)))
    flat = [c for part in results for c in part]
    return [LPolynomial(E.q, E.genus, c) for E, c in zip(exts, flat)]


@dataclass(frozen=True)
class CensusRow:
    n: int
    count: int
    sum_h: int


def census(q: int, n: int, conditions: Conditions | None = None, cache: LCache | None = None,
           budget: int = DEFAULT_BUDGET, jobs: int = 1) -> CensusRow:
    F = field_of_order(q)
    exts = enumerate_extensions(F, n, conditions)
    Ls = lookup_or_compute(exts, cache, lambda es: compute_lpolys(es, budget, jobs))
    return CensusRow(n, len(exts), sum(L.class_number for L in Ls))


# --- reports ----------------------------------------------------------------------

@dataclass
class ReportRow:
    index: int
    n: int
    count: int
    sum_h: int
    sum_c: Fraction
    A: Fraction
    B: Fraction
    statistic: Fraction
    predicted: float
    tail: float
    ratio: float | None


@dataclass
class DensityReport:
    kind: str
    q: int
    conditions: list[tuple[str, str]]
    constant: str
    index_name: str
    rows: list[ReportRow]
    trunc: int
    cache_hits: int = 0
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def row(self, n: int) -> ReportRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_dict(self, run_metadata: bool = True) -> dict:
        """Plain dict; ``run_metadata=False`` drops wall time and cache hits."""
        d = asdict(self)
        for r in d["rows"]:
            for k in ("sum_c", "A", "B", "statistic"):
                r[k] = str(r[k])
        d["conditions"] = [list(c) for c in self.conditions]
        if not run_metadata:
            d.pop("wall_time")
            d.pop("cache_hits")
        return d

    def to_json(self, run_metadata: bool = True) -> str:
        return json.dumps(self.to_dict(run_metadata), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["index", "n", "count", "sum_h", "sum_c", "A", "B", "statistic", "predicted", "tail", "ratio"]
        w.writerow(cols)
        for r in self.rows:
            w.writerow([getattr(r, c) for c in cols])
        return buf.getvalue()

    def to_table(self) -> str:
        conds = ",".join(f"{v}:{t}" for v, t in self.conditions) or "none"
        lines = [f"{self.kind}  q={self.q}  conditions={conds}  constant={self.constant}  B={self.trunc}"]
        lines.append(f"{self.index_name:>3} {'count':>8} {'sum h':>10} {'statistic':>14} {'predicted':>14} {'ratio':>10}")
        for r in self.rows:
            ratio = "-" if r.ratio is None else f"{r.ratio:.6f}"
            lines.append(f"{r.index:>3} {r.count:>8} {r.sum_h:>10} {float(r.statistic):>14.8f} "
                         f"{r.predicted:>14.8f} {ratio:>10}")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_table()


def _conditions_list(conditions: Conditions | None) -> list[tuple[str, str]]:
    items = sorted((conditions or {}).items(), key=lambda kv: kv[0].sort_key())
    return [(str(v), str(t)) for v, t in items]


def _statistic(kind: str, q: int, n: int, row: CensusRow) -> Fraction | None:
    if kind == "mean_value":
        return Fraction(row.sum_h, q ** (3 * n))
    if kind == "density":
        return Fraction(row.count, q ** (2 * n))
    if kind == "filtering":
        return Fraction(row.sum_h, (q - 1) * q ** (3 * n))
    if row.count == 0:
        return None
    if kind == "average":
        return Fraction(row.sum_h, row.count * q ** n)
    if kind == "genus_average":
        return Fraction(row.sum_h, row.count * q ** (n - 1))
    raise ValueError(kind)


def _table(kind: str, q: int, conditions: Conditions | None, n_range: Sequence[int], trunc: int,
           cache: LCache | None, budget: int, jobs: int) -> DensityReport:
    start = time.perf_counter()
    hits0 = cache.hits if cache is not None else 0
    const = predicted_constant(BaseFieldInfo(q), kind, conditions, trunc)
    pv, pt = float(const.value), float(const.tail)
    rows = []
    for n in n_range:
        c = census(q, n, conditions, cache, budget, jobs)
        stat = _statistic(kind, q, n, c)
        rows.append(ReportRow(
            index=n - 1 if kind == "genus_average" else n,
            n=n, count=c.count, sum_h=c.sum_h,
            sum_c=Fraction(c.sum_h, q - 1),
            A=Fraction(c.sum_h, q ** (3 * n)),
            B=Fraction(c.count, q ** (2 * n)),
            statistic=stat if stat is not None else Fraction(0),
            predicted=pv, tail=pt,
            ratio=None if stat is None or pv == 0 else float(stat) / pv,
        ))
    hits = (cache.hits - hits0) if cache is not None else 0
    exact = None if const.exact is None else str(const.exact)
    return DensityReport(
        kind=kind, q=q, conditions=_conditions_list(conditions), constant=kind,
        index_name="g" if kind == "genus_average" else "n", rows=rows, trunc=trunc,
        cache_hits=hits, wall_time=time.perf_counter() - start,
        extra={"prefactor": str(const.prefactor), "exact_constant": exact},
    )


def mean_value_table(q: int, conditions: Conditions | None, n_range: Sequence[int], trunc: int = 12,
                     cache: LCache | None = None, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> DensityReport:
    """A_n = q^(-3n) sum h_L against 2 c_k h_k zeta_k(2) b * E; also carries the a_n normalization."""
    rep = _table("mean_value", q, conditions, n_range, trunc, cache, budget, jobs)
    filt = predicted_constant(BaseFieldInfo(q), "filtering", conditions, trunc)
    rep.extra["filtering_prefactor"] = str(filt.prefactor)
    rep.extra["filtering_predicted"] = float(filt.value)
    rep.extra["filtering_ratio"] = [
        None if filt.value == 0 else float(r.sum_c / q ** (3 * r.n)) / float(filt.value) for r in rep.rows
    ]
    return rep


def density_table(q: int, conditions: Conditions | None, n_range: Sequence[int], trunc: int = 12,
                  cache: LCache | None = None, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> DensityReport:
    """B_n = q^(-2n) #{L}; no class numbers are needed."""
    start = time.perf_counter()
    const = predicted_constant(BaseFieldInfo(q), "density", conditions, trunc)
    F = field_of_order(q)
    rows = []
    for n in n_range:
        count = len(enumerate_extensions(F, n, conditions))
        B = Fraction(count, q ** (2 * n))
        rows.append(ReportRow(n, n, count, 0, Fraction(0), Fraction(0), B, B,
                              float(const.value), 0.0, float(B / const.exact) if const.exact else None))
    return DensityReport("density", q, _conditions_list(conditions), "density", "n", rows, trunc,
                         wall_time=time.perf_counter() - start,
                         extra={"prefactor": str(const.prefactor), "exact_constant": str(const.exact),
                                "exact_ratio": [str(r.B / const.exact) if const.exact else None for r in rows]})


def average_table(q: int, conditions: Conditions | None, n_range: Sequence[int], index: str = "norm",
                  trunc: int = 12, cache: LCache | None = None, budget: int = DEFAULT_BUDGET,
                  jobs: int = 1) -> DensityReport:
    """q^(-n) sum h / #L indexed by n, or q^(-g) sum h / #L indexed by the genus g = n - 1."""
    if index not in ("norm", "genus"):
        raise ValueError("index must be 'norm' or 'genus'")
    kind = "average" if index == "norm" else "genus_average"
    return _table(kind, q, conditions, n_range, trunc, cache, budget, jobs)


def filtering_coefficients(q: int, conditions: Conditions | None, n_range: Sequence[int], trunc: int = 12,
                           cache: LCache | None = None, budget: int = DEFAULT_BUDGET,
                           jobs: int = 1) -> DensityReport:
    """a_n = sum h_L / (q - 1) exactly (the ``sum_c`` column), compared via a_n / q^(3n)."""
    return _table("filtering", q, conditions, n_range, trunc, cache, budget, jobs)


def parse_n_range(text: str) -> list[int]:
    """'3', '1..4' or '1,3,4'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ValueError(f"bad n range {text!r}")
    return out
