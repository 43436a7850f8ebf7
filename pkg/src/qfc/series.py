"""Exact power series and rational functions in u = q^(-s), zeta and eta series,
Euler products with certified tails, and the predicted limit constants.

Shifts in s are coefficient reweightings: s -> s-1 is u -> q*u, s -> 2s is u -> u^2.
Only the final infinite Euler products are floating point; they carry a
rigorous bound on the neglected tail.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .gf import GF, field_of_order
from .places import LOCAL_TYPES, LocalType, Place, all_places_up_to
from .polyring import irreducible_count

mpmath.mp.dps = 40


# --- polynomials over Q in u -------------------------------------------------

def _strip(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _padd(a, b):
    n = max(len(a), len(b))
    return _strip((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(r) >= len(b) and any(r):
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            r[k + j] -= c * bj
        r.pop()
        r = list(_strip(r))
    return _strip(q), _strip(r)


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return ()
    return tuple(Fraction(x) / a[-1] for x in a)


def _peval(a, u):
    acc = 0
    for c in reversed(a):
        acc = acc * u + c
    return acc


# --- power series ------------------------------------------------------------

class PowerSeriesU:
    """sum c_n u^n known exactly for n <= order."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs: Iterable):
        self.q = q
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, q: int, order: int) -> PowerSeriesU:
        return cls(q, [1] + [0] * order)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PowerSeriesU) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"PowerSeriesU(q={self.q}, {[str(c) for c in self.coeffs]})"

    def truncate(self, order: int) -> PowerSeriesU:
        return PowerSeriesU(self.q, self.coeffs[:order + 1])

    def __add__(self, other: PowerSeriesU) -> PowerSeriesU:
        n = min(len(self), len(other))
        return PowerSeriesU(self.q, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __mul__(self, other):
        if not isinstance(other, PowerSeriesU):
            return PowerSeriesU(self.q, [c * other for c in self.coeffs])
        n = min(len(self), len(other))
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(n):
            if a[i]:
                ai = a[i]
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return PowerSeriesU(self.q, out)

    __rmul__ = __mul__

    def inverse(self) -> PowerSeriesU:
        a = self.coeffs
        if not a or a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, len(a)):
            s = sum(a[k] * out[n - k] for k in range(1, n + 1))
            out.append(-s * inv0)
        return PowerSeriesU(self.q, out)

    def __truediv__(self, other: PowerSeriesU) -> PowerSeriesU:
        return self * other.inverse()

    def __pow__(self, k: int) -> PowerSeriesU:
        if k < 0:
            return self.inverse() ** (-k)
        result = PowerSeriesU.one(self.q, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_s_minus_one(self) -> PowerSeriesU:
        """Series of f(s-1): c_n -> q^n c_n."""
        return PowerSeriesU(self.q, [c * self.q ** n for n, c in enumerate(self.coeffs)])

    def double_s(self) -> PowerSeriesU:
        """Series of f(2s): u -> u^2, known to the same order."""
        out = [Fraction(0)] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            if 2 * n < len(out):
                out[2 * n] = c
        return PowerSeriesU(self.q, out)

    def partial_sum(self, u) -> Fraction:
        return sum(c * Fraction(u) ** n for n, c in enumerate(self.coeffs))

    def dominated_by(self, other: PowerSeriesU) -> bool:
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))


# --- rational functions -------------------------------------------------------

class RationalFnU:
    """num(u)/den(u), reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence, den: Sequence = (1,)):
        n = _strip(Fraction(c) for c in num)
        d = _strip(Fraction(c) for c in den)
        if not d:
            raise ZeroDivisionError("zero denominator")
        g = _pgcd(n, d) if n else (Fraction(1),)
        if len(g) > 1:
            n = _pdivmod(n, g)[0]
            d = _pdivmod(d, g)[0]
        lead = d[-1]
        self.num = tuple(c / lead for c in n)
        self.den = tuple(c / lead for c in d)

    @classmethod
    def from_factors(cls, num_factors=(), den_factors=()) -> RationalFnU:
        num: tuple = (Fraction(1),)
        den: tuple = (Fraction(1),)
        for f in num_factors:
            num = _pmul(num, tuple(Fraction(c) for c in f))
        for f in den_factors:
            den = _pmul(den, tuple(Fraction(c) for c in f))
        return cls(num, den)

    def __eq__(self, other):
        return isinstance(other, RationalFnU) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFnU(num={[str(c) for c in self.num]}, den={[str(c) for c in self.den]})"

    def __mul__(self, other: RationalFnU) -> RationalFnU:
        return RationalFnU(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __truediv__(self, other: RationalFnU) -> RationalFnU:
        return RationalFnU(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __call__(self, u) -> Fraction:
        d = _peval(self.den, Fraction(u))
        if d == 0:
            raise ZeroDivisionError(f"pole at u = {u}")
        return _peval(self.num, Fraction(u)) / d

    def substitute_power(self, d: int) -> RationalFnU:
        """u -> u^d."""
        def spread(cs):
            out = [Fraction(0)] * ((len(cs) - 1) * d + 1)
            for i, c in enumerate(cs):
                out[i * d] = c
            return out
        return RationalFnU(spread(self.num), spread(self.den))

    def scale_variable(self, c) -> RationalFnU:
        """u -> c*u."""
        c = Fraction(c)
        return RationalFnU([x * c ** i for i, x in enumerate(self.num)],
                           [x * c ** i for i, x in enumerate(self.den)])

    def series(self, q: int, order: int) -> PowerSeriesU:
        d = self.den
        if d[0] == 0:
            raise ValueError("denominator vanishes at u = 0")
        num = PowerSeriesU(q, [self.num[i] if i < len(self.num) else 0 for i in range(order + 1)])
        den = PowerSeriesU(q, [d[i] if i < len(d) else 0 for i in range(order + 1)])
        return num / den

    def limit_times(self, factor: Sequence, u0) -> Fraction:
        """lim_{u -> u0} factor(u) * f(u), with ``factor`` a polynomial vanishing at u0."""
        num = _pmul(self.num, tuple(Fraction(c) for c in factor))
        g = RationalFnU(num, self.den)
        return g(u0)


def tail_coefficient_growth(f: RationalFnU, pole, order: int = 1) -> Fraction:
    """C with c_n ~ C * n^(order-1) * pole^(-n), for a pole of exactly the given order.

    Uses the principal part at ``pole``; the caller is responsible for ``pole``
    being the pole of least modulus.
    """
    u0 = Fraction(pole)
    if u0 == 0:
        raise ValueError("pole at 0 has no coefficient asymptotics")
    root = (-u0, Fraction(1))
    rest = f.den
    for _ in range(order):
        rest, rem = _pdivmod(rest, root)
        if rem:
            raise ValueError(f"u = {u0} is not a pole of order {order}")
    if _peval(rest, u0) == 0:
        raise ValueError(f"pole at u = {u0} has order greater than {order}")
    residue = _peval(f.num, u0) / _peval(rest, u0)
    if residue == 0:
        raise ValueError(f"u = {u0} is not a pole")
    return residue * (-u0) ** (-order) / math.factorial(order - 1)


# --- zeta functions -----------------------------------------------------------

def zeta_rational(q: int) -> RationalFnU:
    """Zeta function of F_q(t): 1/((1-u)(1-q u))."""
    return RationalFnU.from_factors(den_factors=[(1, -1), (1, -q)])


def zeta_value(q: int, s: int) -> Fraction:
    return zeta_rational(q)(Fraction(1, q ** s))


def _places_by_degree(F: GF, T: Iterable[Place], B: int) -> dict[int, int]:
    """Number of places of each degree <= B outside T (infinity counted in degree 1)."""
    counts = {d: irreducible_count(F.q, d) for d in range(1, B + 1)}
    counts[1] += 1
    for v in set(T):
        if v.degree <= B:
            counts[v.degree] -= 1
    return counts


def _field(q_or_field) -> GF:
    return q_or_field if isinstance(q_or_field, GF) else field_of_order(q_or_field)


def zeta_truncated(q_or_field, T: Iterable[Place], B: int) -> PowerSeriesU:
    """prod_{v not in T} (1 - u^{deg v})^{-1}, exact through u^B."""
    if B < 1:
        raise ValueError("truncation order must be positive")
    F = _field(q_or_field)
    result = PowerSeriesU.one(F.q, B)
    for d, count in _places_by_degree(F, T, B).items():
        if count:
            geo = PowerSeriesU(F.q, [1 if n % d == 0 else 0 for n in range(B + 1)])
            result = result * geo ** count
    return result


# --- eta series ----------------------------------------------------------------

def eta_local_factor(t: LocalType, q: int, d: int) -> RationalFnU:
    """Place factor of zeta_k(s-1) zeta_k(s)^2 / zeta_L(s) at a degree-d place of type t."""
    qv = q ** d

    def one_minus(c, k):
        return [1] + [0] * (k - 1) + [-c]

    zeta_shift = RationalFnU.from_factors(den_factors=[one_minus(qv, d)])
    zeta_sq = RationalFnU.from_factors(den_factors=[one_minus(1, d), one_minus(1, d)])
    if t is LocalType.SPLIT:
        zeta_L = RationalFnU.from_factors(den_factors=[one_minus(1, d), one_minus(1, d)])
    elif t is LocalType.INERT:
        zeta_L = RationalFnU.from_factors(den_factors=[one_minus(1, 2 * d)])
    else:
        zeta_L = RationalFnU.from_factors(den_factors=[one_minus(1, d)])
    return zeta_shift * zeta_sq / zeta_L


@functools.cache
def _eta_factor_series(t: LocalType, q: int, d: int, B: int) -> PowerSeriesU:
    return eta_local_factor(t, q, d).series(q, B)


def place_types(E, places: Iterable[Place]) -> dict[Place, LocalType]:
    return {v: E.local_type(v) for v in places}


def eta_series(E, T: Iterable[Place], B: int, places: Sequence[Place] | None = None) -> PowerSeriesU:
    """eta_{L,T}: Euler product over places of degree <= B outside T of the type-indexed factor."""
    F = E.field
    Tset = set(T)
    if places is None:
        places = all_places_up_to(F, B)
    tally: dict[tuple[LocalType, int], int] = {}
    for v in places:
        if v in Tset or v.degree > B:
            continue
        key = (E.local_type(v), v.degree)
        tally[key] = tally.get(key, 0) + 1
    return eta_from_tally(F.q, tally, B)


def eta_from_tally(q: int, tally: Mapping[tuple[LocalType, int], int], B: int) -> PowerSeriesU:
    result = PowerSeriesU.one(q, B)
    for (t, d), count in sorted(tally.items(), key=lambda kv: (kv[0][1], kv[0][0].value)):
        result = result * _eta_factor_series(t, q, d, B) ** count
    return result


def eta_dominating(q_or_field, T: Iterable[Place], B: int) -> PowerSeriesU:
    """eta_T = zeta_T(s-1) zeta_T(s)^2 / zeta_T(2s)."""
    T = list(T)
    z = zeta_truncated(q_or_field, T, B)
    return z.shift_s_minus_one() * z * z / z.double_s()


def eta_dominating_value(q_or_field, T: Iterable[Place], s: int = 3) -> Fraction:
    """Exact value of the full (untruncated) eta_T at integer s > 2.

    The full zeta quotient is a rational function of u; removing the finitely
    many factors at T leaves the value exact.
    """
    if s <= 2:
        raise ValueError("eta_T converges only for Re(s) > 2")
    F = _field(q_or_field)
    q = F.q
    full = zeta_value(q, s - 1) * zeta_value(q, s) ** 2 / zeta_value(q, 2 * s)
    u = Fraction(1, q ** s)
    # the place factor of eta_T has the same shape as an inert eta factor
    for v in set(T):
        full /= eta_local_factor(LocalType.INERT, q, v.degree)(u)
    return full


# --- Euler products --------------------------------------------------------------

def E_local(qv: int) -> Fraction:
    x = Fraction(1, qv)
    return 1 - x ** 2 - x ** 3 + x ** 4


def _avg_local(qv: int) -> Fraction:
    x = Fraction(1, qv)
    return (1 + x - x ** 3) / (1 + x)


def _density_local(qv: int) -> Fraction:
    return 1 - Fraction(1, qv) ** 2


@dataclass(frozen=True)
class EulerProduct:
    """prod over places v outside S of factor(q_v), with |true - value| <= tail."""

    kind: str
    q: int
    S: frozenset
    B: int
    value: mpmath.mpf
    tail: mpmath.mpf


# local factor, and C, k with |log factor(q_v)| <= C q_v^(-k) for q_v >= 3
_FACTORS = {
    "E": (E_local, 2, 2),
    "average": (_avg_local, 2, 3),
    "density": (_density_local, 2, 2),
}


def euler_product(kind: str, q: int, S: Iterable[Place] = (), B: int = 12) -> EulerProduct:
    if B < 2:
        raise ValueError("truncation degree must be at least 2")
    local, C, k = _FACTORS[kind]
    F = field_of_order(q)
    S = frozenset(S)
    val = mpmath.mpf(1)
    for d, count in _places_by_degree(F, S, B).items():
        f = local(q ** d)
        val *= mpmath.power(mpmath.mpf(f.numerator) / f.denominator, count)
    # places of degree d number at most q^d/d, each |log factor| <= C q^(-k d)
    qm = mpmath.mpf(q)
    ratio = qm ** (1 - k)
    tau = C * ratio ** (B + 1) / ((B + 1) * (1 - ratio))
    tail = val * (mpmath.exp(tau) - 1)
    return EulerProduct(kind, q, S, B, val, tail)


def euler_product_E(q: int, S: Iterable[Place] = (), B: int = 12) -> tuple[mpmath.mpf, mpmath.mpf]:
    ep = euler_product("E", q, S, B)
    return ep.value, ep.tail


# --- predicted constants ---------------------------------------------------------

@dataclass(frozen=True)
class BaseFieldInfo:
    q: int
    genus: int = 0
    h: int = 1

    @property
    def c(self) -> Fraction:
        return Fraction(self.h, self.q - 1)

    @property
    def zeta2(self) -> Fraction:
        return zeta_value(self.q, 2)

    @property
    def R2_times_log_q(self) -> Fraction:
        """log q * R_2 = 2 zeta_k(2) c_k^2."""
        return 2 * self.zeta2 * self.c ** 2


def b_local(t: LocalType, qv: int) -> Fraction:
    x = Fraction(1, qv)
    if t is LocalType.SPLIT:
        return (1 - x ** 2) / 2
    if t is LocalType.INERT:
        return (1 - x) ** 2 / 2
    return x * (1 - x) * (1 - x ** 2) / 2


def c_local(t: LocalType, qv: int) -> Fraction:
    x = Fraction(1, qv)
    if t.ramified:
        return x * (1 - x) / 2
    return (1 - x) / 2


def d_local(t: LocalType, qv: int) -> Fraction:
    x = Fraction(1, qv)
    if t is LocalType.SPLIT:
        return 1 + x
    if t is LocalType.INERT:
        return 1 - x
    return 1 - x ** 2


@dataclass(frozen=True)
class PredictedConstant:
    """prefactor * product; ``exact`` is set when the product has a closed form."""

    kind: str
    prefactor: Fraction
    product: EulerProduct
    exact: Fraction | None = field(default=None)

    @property
    def value(self) -> mpmath.mpf:
        if self.exact is not None:
            return mpmath.mpf(self.exact.numerator) / self.exact.denominator
        return self.prefactor.numerator * self.product.value / self.prefactor.denominator

    @property
    def tail(self) -> mpmath.mpf:
        if self.exact is not None:
            return mpmath.mpf(0)
        return abs(self.prefactor) * self.product.tail


KINDS = ("mean_value", "filtering", "density", "average", "genus_average")


def _check_conditions(q: int, conditions: Mapping[Place, LocalType]):
    for v, t in conditions.items():
        if not isinstance(v, Place) or not isinstance(t, LocalType) or v.q != q:
            raise ValueError(f"malformed local condition {v!r} -> {t!r}")


def predicted_constant(info: BaseFieldInfo, kind: str, conditions: Mapping[Place, LocalType] | None = None,
                       B: int = 12) -> PredictedConstant:
    if info.genus != 0 or info.h != 1:
        raise NotImplementedError("only the rational function field is supported")
    conditions = dict(conditions or {})
    q = info.q
    _check_conditions(q, conditions)
    S = frozenset(conditions)

    def prod(local):
        out = Fraction(1)
        for v, t in conditions.items():
            out *= local(t, v.norm)
        return out

    if kind == "mean_value":
        pre = 2 * info.c * info.h * info.zeta2 * prod(b_local)
        return PredictedConstant(kind, pre, euler_product("E", q, S, B))
    if kind == "filtering":
        pre = info.R2_times_log_q * prod(b_local)
        return PredictedConstant(kind, pre, euler_product("E", q, S, B))
    if kind == "density":
        pre = 2 * Fraction(q) ** (1 - info.genus) * info.c * prod(c_local)
        ep = euler_product("density", q, S, B)
        # prod over all v of (1 - q_v^-2) is 1/zeta_k(2)
        closed = 1 / info.zeta2
        for v in S:
            closed /= _density_local(v.norm)
        return PredictedConstant(kind, pre, ep, exact=pre * closed)
    if kind == "average":
        pre = Fraction(q) ** (info.genus - 1) * info.h * info.zeta2 * prod(d_local)
        return PredictedConstant(kind, pre, euler_product("average", q, S, B))
    if kind == "genus_average":
        pre = info.h * info.zeta2 / Fraction(q) ** info.genus * prod(d_local)
        return PredictedConstant(kind, pre, euler_product("average", q, S, B))
    raise ValueError(f"unknown constant kind {kind!r}; expected one of {KINDS}")


def predicted_constants(info: BaseFieldInfo, kind: str, conditions=None, B: int = 12) -> tuple[mpmath.mpf, mpmath.mpf]:
    c = predicted_constant(info, kind, conditions, B)
    return c.value, c.tail


def all_local_types() -> tuple[LocalType, ...]:
    return LOCAL_TYPES
