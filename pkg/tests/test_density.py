import csv
import io
import json
from fractions import Fraction

import pytest

from qfc.cache import LCache
from qfc.curvezeta import l_polynomials
from qfc.density import (average_table, census, density_table, filtering_coefficients, mean_value_table,
                         parse_n_range)
from qfc.gf import field_of_order
from qfc.places import LOCAL_TYPES, parse_place
from qfc.quadext import enumerate_extensions

F3 = field_of_order(3)
T = parse_place("t", F3)

# class number sums over the q=3 census, cross-checked against the oracle route below
SUM_H = {1: 18, 2: 576, 3: 16800}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_sums_against_oracle(n):
    exts = enumerate_extensions(F3, n)
    oracle = sum(L.class_number for L in l_polynomials(exts, oracle=True))
    assert oracle == SUM_H[n] == census(3, n).sum_h


def test_mean_value_rows():
    rep = mean_value_table(3, None, [1, 2, 3])
    assert [r.count for r in rep.rows] == [18, 144, 1296]
    assert rep.row(1).A == Fraction(2, 3)
    assert rep.row(2).A == Fraction(576, 729)
    assert rep.row(3).A == Fraction(16800, 19683)
    for r in rep.rows:
        assert r.sum_c * 2 == r.sum_h
        assert r.ratio == pytest.approx(float(r.A) / r.predicted)
    assert rep.extra["filtering_prefactor"] == "27/32"


def test_partition_additivity_small():
    full = mean_value_table(3, None, [1, 2])
    parts = [mean_value_table(3, {T: t}, [1, 2]) for t in LOCAL_TYPES]
    for i, r in enumerate(full.rows):
        assert sum(p.rows[i].count for p in parts) == r.count
        assert sum(p.rows[i].sum_h for p in parts) == r.sum_h
        assert sum(p.rows[i].A for p in parts) == r.A


def test_density_exact():
    rep = density_table(3, None, [1, 2, 3])
    assert rep.row(1).B == 2
    assert rep.row(2).B == rep.row(3).B == Fraction(16, 9)
    assert rep.extra["exact_ratio"] == ["9/8", "1", "1"]
    assert density_table(5, None, [2]).row(2).B == Fraction(48, 25)


def test_conditioned_density_counts():
    rep = density_table(3, {T: LOCAL_TYPES[2]}, [2])
    assert rep.row(2).count == 18


def test_average_indexings_agree():
    a = average_table(3, None, [2, 3], index="norm")
    g = average_table(3, None, [2, 3], index="genus")
    assert [r.index for r in g.rows] == [1, 2]
    assert [r.ratio for r in a.rows] == pytest.approx([r.ratio for r in g.rows], rel=1e-12)
    assert a.row(2).statistic == Fraction(576, 144 * 9)
    with pytest.raises(ValueError):
        average_table(3, None, [2], index="volume")


def test_filtering_coefficients():
    rep = filtering_coefficients(3, {T: LOCAL_TYPES[2]}, [1, 2, 3])
    assert [r.sum_h for r in rep.rows] == [3, 72, 1992]
    assert [r.sum_c for r in rep.rows] == [Fraction(3, 2), 36, 996]
    for E in enumerate_extensions(F3, 2, {T: LOCAL_TYPES[2]}):
        assert (E.D % T.poly).is_zero()


def test_serialization():
    rep = mean_value_table(3, {T: LOCAL_TYPES[0]}, [1, 2])
    d = json.loads(rep.to_json())
    assert d["conditions"] == [["t", "split"]]
    assert d["rows"][1]["A"] == str(rep.row(2).A)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert [int(r["sum_h"]) for r in rows] == [r.sum_h for r in rep.rows]
    assert "ratio" in rep.to_table()


def test_jobs_and_cache_do_not_change_reports(tmp_path):
    base = mean_value_table(3, None, [2, 3]).to_json(run_metadata=False)
    assert mean_value_table(3, None, [2, 3], jobs=3).to_json(run_metadata=False) == base
    cache = LCache(tmp_path / "l.txt")
    cold = mean_value_table(3, None, [2, 3], cache=cache)
    warm = mean_value_table(3, None, [2, 3], cache=LCache(tmp_path / "l.txt"))
    assert cold.cache_hits == 0 and warm.cache_hits == 144 + 1296
    assert warm.to_json(run_metadata=False) == base


def test_parse_n_range():
    assert parse_n_range("1..4") == [1, 2, 3, 4]
    assert parse_n_range("2") == [2]
    assert parse_n_range("1,3") == [1, 3]
    for bad in ("", "0..2", "a"):
        with pytest.raises(ValueError):
            parse_n_range(bad)
