"""Local orbital volumes of binary quadratic forms at a place with residue field F_{q_v}.

Volumes are computed by counting in the residue rings O/pi^N = F_{q_v}[pi]/(pi^N),
with O normalized to volume 1.  A form y is in the orbit of a standard
representative w iff P(y)/P(w) is a nonzero square, which in odd residue
characteristic depends only on the parity of ord P(y) and on the square class
of the leading pi-adic digit of P(y).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf import GF, FieldError, field_of_order
from .places import LOCAL_TYPES, LocalType
from .polyring import enumerate_monic
from .series import RationalFnU

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class ResidueRing:
    """F[pi]/(pi^N); elements are arrays of shape (..., N, e) of F_p digits."""

    def __init__(self, F: GF, N: int):
        if N < 1:
            raise ValueError("precision must be positive")
        self.F = F
        self.N = N
        self.size = F.q ** N
        self._pw = np.array([F.p ** i for i in range(N * F.e)], dtype=np.int64)

    def digits(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        flat = (codes[..., None] // self._pw) % self.F.p
        return flat.reshape(codes.shape + (self.N, self.F.e))

    def codes(self, digits: np.ndarray) -> np.ndarray:
        flat = digits.reshape(digits.shape[:-2] + (self.N * self.F.e,))
        return (flat % self.F.p) @ self._pw

    def all(self) -> np.ndarray:
        return self.digits(np.arange(self.size, dtype=np.int64))

    def element(self, field_codes) -> np.ndarray:
        """Ring element from field codes of its pi-adic digits (low first)."""
        fc = list(field_codes)[:self.N] + [0] * max(0, self.N - len(field_codes))
        return self.F.vdigits(np.array(fc, dtype=np.int64))

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        shape = np.broadcast_shapes(A.shape, B.shape)
        out = np.zeros(shape, dtype=np.int64)
        for i in range(self.N):
            for j in range(self.N - i):
                out[..., i + j, :] += self.F.vmul_digits(A[..., i, :], B[..., j, :])
        return out % self.F.p

    def scalar(self, c: int) -> np.ndarray:
        return self.element([c % self.F.p])

    def valuation_and_residue(self, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """ord_pi (N for zero) and the field code of the leading digit (0 for zero)."""
        fcodes = (np.asarray(codes, dtype=np.int64)[..., None] // self.F.q ** np.arange(self.N)) % self.F.q
        nz = fcodes != 0
        ordv = np.where(nz.any(axis=-1), nz.argmax(axis=-1), self.N)
        lead = np.take_along_axis(fcodes, np.minimum(ordv, self.N - 1)[..., None], axis=-1)[..., 0]
        lead = np.where(ordv < self.N, lead, 0)
        return ordv, lead

    def units_mask(self) -> np.ndarray:
        return (np.arange(self.size) % self.F.q) != 0


@dataclass(frozen=True)
class StdRep:
    """Standard orbital representative; ``x`` holds pi-adic digits (field codes) of x0, x1, x2."""

    type: LocalType
    qv: int
    x: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    P_abs: Fraction

    @property
    def field(self) -> GF:
        return field_of_order(self.qv)

    @property
    def parity(self) -> int:
        return 1 if self.type.ramified else 0

    @property
    def unit_is_square(self) -> bool:
        return self.type in (LocalType.SPLIT, LocalType.RAMIFIED_A)

    def P_digits(self, N: int = 3) -> list[int]:
        R = ResidueRing(self.field, N)
        x0, x1, x2 = (R.element(c) for c in self.x)
        four = R.scalar(4)
        val = (R.mul(x1, x1) - R.mul(four, R.mul(x0, x2))) % self.field.p
        code = int(R.codes(val))
        return [(code // self.qv ** k) % self.qv for k in range(N)]


def standard_rep(qv: int, t: LocalType) -> StdRep:
    try:
        F = field_of_order(qv)
    except FieldError as exc:
        raise ValueError(f"unsupported residue cardinality {qv}") from exc
    if F.p == 2:
        raise ValueError("residue characteristic 2 is not supported")
    if t is LocalType.SPLIT:
        return StdRep(t, qv, ((0,), (1,), (0,)), Fraction(1))
    if t is LocalType.INERT:
        # theta a root of the least monic irreducible X^2 + aX + b: x = (1, -a, b)
        a, b = _least_irreducible_quadratic(F)
        return StdRep(t, qv, ((1,), (F.neg(a),), (b,)), Fraction(1))
    u = 1 if t is LocalType.RAMIFIED_A else F.nonsquare
    # theta^2 = pi*u: F = z1^2 - pi*u z2^2
    return StdRep(t, qv, ((1,), (0,), (0, F.neg(u))), Fraction(1, qv))


def _least_irreducible_quadratic(F: GF) -> tuple[int, int]:
    P = enumerate_monic(F, 2, "irreducible")[0]
    b, a = P.coeffs[0], P.coeffs[1]
    return a, b


def local_zeta_closed(t: LocalType, qv: int) -> RationalFnU:
    """Z_{w_v}(Phi_{v,0}, s) as a rational function of u_v = q_v^(-s)."""
    if t is LocalType.SPLIT:
        return RationalFnU.from_factors(den_factors=[(1, -qv)])
    if t is LocalType.INERT:
        return RationalFnU.from_factors(num_factors=[(1, 1)], den_factors=[(1, -1), (1, -qv)])
    return RationalFnU.from_factors(den_factors=[(1, -1), (1, -qv)])


def epsilon(t: LocalType, qv: int) -> Fraction:
    """|P(w_v)|^{3/2} / b_{w_v}: volume of the K_v-orbit of the standard representative."""
    x = Fraction(1, qv)
    if t is LocalType.SPLIT:
        return (1 - x ** 2) / 2
    if t is LocalType.INERT:
        return (1 - x) ** 2 / 2
    return x * (1 - x) * (1 - x ** 2) / 2


def E_sum(qv: int) -> Fraction:
    return sum((epsilon(t, qv) for t in LOCAL_TYPES), Fraction(0))


@dataclass(frozen=True)
class OrbitalSeries:
    qv: int
    type: LocalType
    coeffs: tuple[Fraction, ...]
    precision: int

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1


def _P_value_distribution(R: ResidueRing) -> np.ndarray:
    """dist[w] = #{(x0,x1,x2) in R^3 : x1^2 - 4 x0 x2 = w}."""
    elems = R.all()
    sq = np.bincount(R.codes(R.mul(elems, elems)), minlength=R.size)
    four = R.scalar(4)
    four_x = R.mul(four, elems)
    prod = np.zeros(R.size, dtype=np.int64)
    chunk = max(1, (1 << 21) // R.size)
    for s in range(0, R.size, chunk):
        block = R.mul(four_x[s:s + chunk, None], elems[None, :])
        prod += np.bincount(R.codes(block).ravel(), minlength=R.size)
    dist = np.zeros(R.size, dtype=np.int64)
    support = np.nonzero(sq)[0]
    sq_digits = R.digits(support)
    for s in range(0, len(support), chunk):
        diff = R.codes((sq_digits[s:s + chunk, None] - elems[None, :]) % R.F.p)
        weights = sq[support[s:s + chunk], None] * prod[None, :]
        dist += np.bincount(diff.ravel(), weights=weights.ravel(), minlength=R.size).astype(np.int64)
    return dist


def _orbit_counts(rep: StdRep, R: ResidueRing, dist: np.ndarray, M: int) -> list[int]:
    ordv, lead = R.valuation_and_residue(np.arange(R.size))
    sqflags = R.F.square_flags()
    want_square = rep.unit_is_square
    counts = []
    for m in range(M + 1):
        if m % 2 != rep.parity:
            counts.append(0)
            continue
        sel = (ordv == m) & (sqflags[lead] == want_square)
        counts.append(int(dist[sel].sum()))
    return counts


def orbital_series(rep: StdRep, M: int, precision: int | None = None,
                   budget: int = DEFAULT_BUDGET) -> OrbitalSeries:
    """v_0..v_M, v_m the volume of {y in V_O in the orbit of rep with ord P(y) = m}.

    Counting is done once modulo pi^N with N = precision (default M + 2),
    through the value distribution of P over (O/pi^N)^3.
    """
    N = M + 2 if precision is None else precision
    if N < M + 1:
        raise ValueError("precision must exceed the largest order by at least one")
    F = rep.field
    if F.q ** (2 * N) > budget:
        raise BudgetExceeded(f"counting modulo pi^{N} at q_v={rep.qv} needs {F.q ** (2 * N)} steps, budget {budget}")
    R = ResidueRing(F, N)
    dist = _P_value_distribution(R)
    counts = _orbit_counts(rep, R, dist, M)
    total = F.q ** (3 * N)
    return OrbitalSeries(rep.qv, rep.type, tuple(Fraction(c, total) for c in counts), N)


def orbital_series_bruteforce(rep: StdRep, M: int, precision: int | None = None,
                              budget: int = DEFAULT_BUDGET) -> OrbitalSeries:
    """Same volumes from a direct sweep over all triples; only for small cases."""
    N = M + 2 if precision is None else precision
    F = rep.field
    total = F.q ** (3 * N)
    if total > budget:
        raise BudgetExceeded(f"{total} triples exceed budget {budget}")
    R = ResidueRing(F, N)
    elems = R.all()
    four = R.scalar(4)
    sq = R.codes(R.mul(elems, elems))
    counts = [0] * (M + 1)
    sqflags = F.square_flags()
    for i0 in range(R.size):
        x0 = elems[i0]
        prod = R.mul(R.mul(four, x0)[None, None], elems[None, :])[0]  # 4 x0 x2 for all x2
        Pd = (R.digits(sq)[:, None] - prod[None, :]) % F.p
        ordv, lead = R.valuation_and_residue(R.codes(Pd))
        for m in range(rep.parity, M + 1, 2):
            counts[m] += int(((ordv == m) & (sqflags[lead] == rep.unit_is_square)).sum())
    return OrbitalSeries(rep.qv, rep.type, tuple(Fraction(c, total) for c in counts), N)


def generating_identity(series: OrbitalSeries) -> tuple[list[Fraction], list[Fraction]]:
    """Both sides of  sum_m v_m q_v^{m(3-s)/2} = eps |P(w)|^{(s-3)/2} Z(s)  as series in u_v.

    After dividing out q_v^{3/2} u_v^{1/2} in the ramified case, the left side is
    sum_j v_{2j+d} q_v^{3j} u_v^j with d the parity of ord P(w).
    """
    qv, t = series.qv, series.type
    d = 1 if t.ramified else 0
    J = (series.M - d) // 2
    lhs = [series.coeffs[2 * j + d] * Fraction(qv) ** (3 * j) for j in range(J + 1)]
    rhs_series = local_zeta_closed(t, qv).series(qv, J)
    eps = epsilon(t, qv)
    rhs = [eps * c for c in rhs_series.coeffs]
    return lhs, rhs


def check_generating_identity(series: OrbitalSeries) -> bool:
    lhs, rhs = generating_identity(series)
    return lhs == rhs


def parity_support_ok(series: OrbitalSeries) -> bool:
    d = 1 if series.type.ramified else 0
    return all(c == 0 for m, c in enumerate(series.coeffs) if m % 2 != d)


# --- the group G(O/pi^2) ------------------------------------------------------

@dataclass(frozen=True)
class StabilizerCount:
    qv: int
    group_order: int
    stabilizer_order: int
    orbit_size: int

    @property
    def orbit_volume(self) -> Fraction:
        """vol(K_v x) = vol(D) * #orbit with vol(D) = q_v^-6."""
        return Fraction(self.orbit_size, self.qv ** 6)


def _act(R: ResidueRing, x, a, b, c, d):
    """Coefficients of F_x(a z1 + c z2, b z1 + d z2) (before scaling by t)."""
    x0, x1, x2 = x
    two = R.scalar(2)
    y0 = R.mul(x0, R.mul(a, a)) + R.mul(x1, R.mul(a, b)) + R.mul(x2, R.mul(b, b))
    y1 = (R.mul(two, R.mul(x0, R.mul(a, c))) + R.mul(x1, R.mul(a, d) + R.mul(b, c))
          + R.mul(two, R.mul(x2, R.mul(b, d))))
    y2 = R.mul(x0, R.mul(c, c)) + R.mul(x1, R.mul(c, d)) + R.mul(x2, R.mul(d, d))
    return [y % R.F.p for y in (y0, y1, y2)]


def stabilizer_order_mod_p2(rep: StdRep, budget: int = DEFAULT_BUDGET) -> StabilizerCount:
    """Brute-force #G(O/pi^2), #Stab(x mod pi^2) and the orbit size, G = GL(1) x GL(2)."""
    F = rep.field
    R = ResidueRing(F, 2)
    n = R.size
    if n ** 4 > budget:
        raise BudgetExceeded(f"{n ** 4} matrices over O/pi^2 exceed budget {budget}")
    unit = R.units_mask()
    idx = np.arange(n)
    A, B, C, D = (m.ravel() for m in np.meshgrid(idx, idx, idx, idx, indexing="ij"))
    el = R.all()
    a, b, c, d = el[A], el[B], el[C], el[D]
    det = R.codes((R.mul(a, d) - R.mul(b, c)) % F.p)
    inv = unit[det]
    a, b, c, d = a[inv], b[inv], c[inv], d[inv]
    units = np.nonzero(unit)[0]
    x = [R.element(cs) for cs in rep.x]
    x_codes = [int(R.codes(xi)) for xi in x]
    y = _act(R, x, a, b, c, d)
    stab = 0
    images = set()
    for tc in units:
        tv = el[tc]
        ty = [R.codes(R.mul(tv, yi)) for yi in y]
        stab += int(((ty[0] == x_codes[0]) & (ty[1] == x_codes[1]) & (ty[2] == x_codes[2])).sum())
        images.update(zip(ty[0].tolist(), ty[1].tolist(), ty[2].tolist()))
    group = int(inv.sum()) * len(units)
    return StabilizerCount(rep.qv, group, stab, len(images))
