"""Class numbers of quadratic extensions via L-polynomials of y^2 = D(t).

Point counts over F_{q^m} are computed by evaluating D at every element of
F_{q^m} at once (numpy, coefficient-vector representation over F_p) and
summing the quadratic character.  The L-polynomial follows from the power
sums of its reciprocal roots through Newton's identities.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .gf import GF, embedding_table, make_field
from .quadext import QuadExt

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class InconsistentCounts(ArithmeticError):
    """Point counts that cannot come from a curve; points to an arithmetic bug."""


@dataclass(frozen=True)
class LPolynomial:
    q: int
    genus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.genus + 1 or self.coeffs[0] != 1:
            raise ValueError(f"malformed L-polynomial {self.coeffs} for genus {self.genus}")

    @property
    def class_number(self) -> int:
        return sum(self.coeffs)

    def __call__(self, u):
        return sum(c * u ** i for i, c in enumerate(self.coeffs))

    def satisfies_functional_equation(self) -> bool:
        g, q, a = self.genus, self.q, self.coeffs
        return all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def power_sums(self, M: int) -> list[int]:
        """s_1..s_M, sums of m-th powers of the reciprocal roots."""
        e = [(-1) ** k * c for k, c in enumerate(self.coeffs)]
        s: list[int] = []
        for k in range(1, M + 1):
            ek = e[k] if k < len(e) else 0
            acc = k * ek
            for i in range(1, k):
                ei = e[k - i] if k - i < len(e) else 0
                acc -= (-1) ** (i - 1) * ei * s[i - 1]
            s.append((-1) ** (k - 1) * acc)
        return s

    def point_count(self, m: int) -> int:
        return self.q ** m + 1 - self.power_sums(m)[-1]

    def reciprocal_roots(self) -> np.ndarray:
        if self.genus == 0:
            return np.zeros(0, dtype=complex)
        return np.roots(np.array(self.coeffs, dtype=float))

    def satisfies_riemann_hypothesis(self, tol: float = 1e-6) -> bool:
        roots = self.reciprocal_roots()
        return bool(np.all(np.abs(np.abs(roots) - np.sqrt(self.q)) <= tol * np.sqrt(self.q)))


# --- point counting --------------------------------------------------------

class _CountingField:
    """F_{q^m} with tables for evaluating polynomials over F_q at all its elements."""

    def __init__(self, base: GF, m: int):
        self.base = base
        self.m = m
        self.K = make_field(base.p, base.e * m)
        self.Q = self.K.q
        self.emb = np.array(embedding_table(base, self.K), dtype=np.int64)
        self.chi = self.K.chi_table.astype(np.int64)
        self._xpow = [np.zeros((self.Q, self.K.e), dtype=np.int64)]
        self._xpow[0][:, 0] = 1
        self._terms: list[np.ndarray] = []

    def _extend(self, d: int):
        K = self.K
        xs = K.vdigits(np.arange(self.Q, dtype=np.int64))
        while len(self._xpow) <= d:
            self._xpow.append(K.vmul_digits(self._xpow[-1], xs))
        cdig = K.vdigits(self.emb)  # (q, E)
        while len(self._terms) <= d:
            i = len(self._terms)
            # term[c, x] = digits of emb(c) * x^i
            self._terms.append(K.vmul_digits(cdig[:, None, :], self._xpow[i][None, :, :]))

    def counts(self, coeff_codes: np.ndarray) -> np.ndarray:
        """Projective point counts of y^2 = D for rows of base-field coefficient codes."""
        n, width = coeff_codes.shape
        d = width - 1
        self._extend(d)
        K = self.K
        out = np.empty(n, dtype=np.int64)
        chunk = max(1, (1 << 22) // (self.Q * K.e))
        for s in range(0, n, chunk):
            block = coeff_codes[s:s + chunk]
            acc = np.zeros((block.shape[0], self.Q, K.e), dtype=np.int64)
            for i in range(width):
                acc += self._terms[i][block[:, i]]
            vals = (acc % K.p) @ K._pw
            out[s:s + chunk] = self.Q + self.chi[vals].sum(axis=1)
        lead = coeff_codes[:, -1]
        if d % 2:
            out += 1
        else:
            out += 1 + self.chi[self.emb[lead]]
        return out


@functools.cache
def _counting_field(base: GF, m: int) -> _CountingField:
    return _CountingField(base, m)


def _check_budget(q: int, m: int, budget: int):
    if q ** m > budget:
        raise BudgetExceeded(f"point count over F_{q}^{m} needs {q ** m} evaluations, budget is {budget}")


def _coeff_row(E: QuadExt) -> list[int]:
    return list(E.D.coeffs)


def point_count(E: QuadExt, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of F_{q^m}-points on the smooth projective model of y^2 = D(t)."""
    if m < 1:
        raise ValueError("m must be positive")
    _check_budget(E.q, m, budget)
    rows = np.array([_coeff_row(E)], dtype=np.int64)
    return int(_counting_field(E.field, m).counts(rows)[0])


def point_counts(exts: Sequence[QuadExt], ms: Sequence[int], budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Matrix of N_m, one row per extension, one column per m in ``ms``."""
    out = np.zeros((len(exts), len(ms)), dtype=np.int64)
    groups: dict[tuple[GF, int], list[int]] = defaultdict(list)
    for idx, E in enumerate(exts):
        groups[(E.field, E.D.degree)].append(idx)
    for (F, _), idxs in groups.items():
        rows = np.array([_coeff_row(exts[i]) for i in idxs], dtype=np.int64)
        for j, m in enumerate(ms):
            _check_budget(F.q, m, budget)
            out[idxs, j] = _counting_field(F, m).counts(rows)
    return out


# --- Newton's identities ---------------------------------------------------

def _elementary_from_power_sums(s: Sequence[int]) -> list[int]:
    """e_0..e_M from s_1..s_M over the integers; non-integral steps raise."""
    e = [1]
    for k in range(1, len(s) + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        if acc % k:
            raise InconsistentCounts(f"Newton step {k} is not integral ({acc}/{k})")
        e.append(acc // k)
    return e


def lpoly_from_counts(q: int, genus: int, counts: Sequence[int]) -> LPolynomial:
    """Primary route: N_1..N_g plus the functional equation."""
    if genus == 0:
        return LPolynomial(q, 0, (1,))
    s = [q ** (m + 1) + 1 - counts[m] for m in range(genus)]
    e = _elementary_from_power_sums(s)
    a = [(-1) ** k * e[k] for k in range(genus + 1)]
    full = a + [q ** (genus - i) * a[i] for i in range(genus - 1, -1, -1)]
    return LPolynomial(q, genus, tuple(full))


def lpoly_oracle_from_counts(q: int, genus: int, counts: Sequence[int]) -> LPolynomial:
    """Oracle route: all 2g power sums, no functional equation assumed; symmetry is then checked."""
    if genus == 0:
        return LPolynomial(q, 0, (1,))
    s = [q ** (m + 1) + 1 - counts[m] for m in range(2 * genus)]
    e = _elementary_from_power_sums(s)
    L = LPolynomial(q, genus, tuple((-1) ** k * e[k] for k in range(2 * genus + 1)))
    if not L.satisfies_functional_equation():
        raise InconsistentCounts(f"counts {list(counts)} violate the functional equation")
    return L


def l_polynomial(E: QuadExt, budget: int = DEFAULT_BUDGET) -> LPolynomial:
    g = E.genus
    counts = [point_count(E, m, budget) for m in range(1, g + 1)]
    return lpoly_from_counts(E.q, g, counts)


def l_polynomial_oracle(E: QuadExt, budget: int = DEFAULT_BUDGET) -> LPolynomial:
    g = E.genus
    counts = [point_count(E, m, budget) for m in range(1, 2 * g + 1)]
    return lpoly_oracle_from_counts(E.q, g, counts)


def l_polynomials(exts: Sequence[QuadExt], budget: int = DEFAULT_BUDGET, oracle: bool = False) -> list[LPolynomial]:
    """Batch version of :func:`l_polynomial` (or of the oracle)."""
    out: list[LPolynomial | None] = [None] * len(exts)
    by_genus: dict[int, list[int]] = defaultdict(list)
    for i, E in enumerate(exts):
        by_genus[E.genus].append(i)
    for g, idxs in by_genus.items():
        if g == 0:
            for i in idxs:
                out[i] = LPolynomial(exts[i].q, 0, (1,))
            continue
        M = 2 * g if oracle else g
        N = point_counts([exts[i] for i in idxs], range(1, M + 1), budget)
        build = lpoly_oracle_from_counts if oracle else lpoly_from_counts
        for row, i in zip(N, idxs):
            out[i] = build(exts[i].q, g, [int(x) for x in row])
    return out  # type: ignore[return-value]


def class_number(E: QuadExt, budget: int = DEFAULT_BUDGET) -> int:
    return l_polynomial(E, budget).class_number
