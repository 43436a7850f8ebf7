"""Dense univariate polynomials over a finite field.

A :class:`Poly` keeps its coefficients as a tuple of integer field codes,
low degree first, with no trailing zeros.  The variable is printed as ``t``.
"""

from __future__ import annotations

import functools
import re
from collections.abc import Iterator

from .gf import GF, FieldElement, FieldError, embedding_table, make_field, prime_factors


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs=()):
        cs = [c.code if isinstance(c, FieldElement) else int(c) for c in coeffs]
        if field.e == 1:
            cs = [c % field.p for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.field, self.coeffs))

    @classmethod
    def _raw(cls, field, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def constant(cls, field: GF, c: int) -> Poly:
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: GF, d: int, c: int = 1) -> Poly:
        return cls(field, [0] * d + [c])

    # --- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 stands in for minus infinity on the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        F = self.field
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = repr(FieldElement(F, c))
            if F.e > 1 and "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}{mono}")
        return "+".join(terms)

    # --- ring operations --------------------------------------------------

    def _check(self, other: Poly):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError("polynomials over different fields")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        F, a, b = self.field, self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly._raw(F, _strip(out))

    def __neg__(self) -> Poly:
        F = self.field
        return Poly._raw(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        F = self.field
        if isinstance(other, (int, FieldElement)):
            c = other.code if isinstance(other, FieldElement) else other % F.p
            return self.scale(c)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(F, ())
        out = [0] * (len(a) + len(b) - 1)
        mul, add = F.mul, F.add
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return Poly._raw(F, _strip(out))

    __rmul__ = __mul__

    def scale(self, c: int) -> Poly:
        F = self.field
        if c == 0:
            return Poly._raw(F, ())
        return Poly._raw(F, tuple(F.mul(c, x) for x in self.coeffs))

    def __pow__(self, n: int) -> Poly:
        result = Poly.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lead = F.inv(b[-1])
        if len(r) - 1 < db:
            return Poly._raw(F, ()), self
        quo = [0] * (len(r) - db)
        mul, sub = F.mul, F.sub
        for k in range(len(r) - 1 - db, -1, -1):
            c = mul(r[k + db], inv_lead)
            quo[k] = c
            if c:
                for j, bj in enumerate(b):
                    if bj:
                        r[k + j] = sub(r[k + j], mul(c, bj))
        return Poly._raw(F, _strip(quo)), Poly._raw(F, _strip(r[:db]))

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lead))

    def derivative(self) -> Poly:
        F = self.field
        return Poly._raw(F, _strip([F.mul(i % F.p, c) for i, c in enumerate(self.coeffs)][1:]))

    def __call__(self, a):
        return self.eval(a)

    def eval(self, a):
        """Value at ``a``; an element of an extension field is handled by embedding."""
        if isinstance(a, int):
            a = FieldElement(self.field, a % self.field.p)
        K = a.field
        if K == self.field:
            cs = self.coeffs
        else:
            table = embedding_table(self.field, K)
            cs = tuple(table[c] for c in self.coeffs)
        acc = 0
        for c in reversed(cs):
            acc = K.add(K.mul(acc, a.code), c)
        return FieldElement(K, acc)

    def powmod(self, n: int, m: Poly) -> Poly:
        result = Poly.constant(self.field, 1) % m
        base = self % m
        while n:
            if n & 1:
                result = (result * base) % m
            base = (base * base) % m
            n >>= 1
        return result


def _strip(cs) -> tuple:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def poly_arith(f: Poly, g, op: str):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "eval":
        return f.eval(g)
    if op == "derivative":
        return f.derivative()
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = f, g
    while b:
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree <= 0:
        return True
    df = f.derivative()
    if df.is_zero():
        # f is a p-th power of a nonconstant polynomial
        return False
    return poly_gcd(f, df).degree == 0


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: t^(q^d) = t mod f and gcd(f, t^(q^(d/r)) - t) = 1."""
    d = f.degree
    if d < 1:
        raise ValueError("irreducibility of a constant is undefined")
    if d == 1:
        return True
    F = f.field
    f = f.monic()
    t = Poly(F, [0, 1])
    frob = _frobenius_powers(t, f, d)
    if frob[d] != t % f:
        return False
    for r in prime_factors(d):
        if poly_gcd(f, frob[d // r] - t).degree != 0:
            return False
    return True


def _frobenius_powers(t: Poly, f: Poly, d: int) -> list[Poly]:
    """[t^(q^0), t^(q^1), ..., t^(q^d)] modulo f."""
    q = f.field.q
    out = [t % f]
    for _ in range(d):
        out.append(out[-1].powmod(q, f))
    return out


def _mobius(n: int) -> int:
    ps = prime_factors(n)
    m = n
    for p in ps:
        m //= p
        if m % p == 0:
            return 0
    return -1 if len(ps) % 2 else 1


def irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q (necklace formula)."""
    if d < 1:
        raise ValueError("degree must be positive")
    total = sum(_mobius(d // m) * q ** m for m in range(1, d + 1) if d % m == 0)
    return total // d


def _iter_monic(F: GF, d: int) -> Iterator[Poly]:
    q = F.q
    for code in range(q ** d):
        cs = []
        c = code
        for _ in range(d):
            cs.append(c % q)
            c //= q
        cs.append(1)
        yield Poly._raw(F, tuple(cs))


def enumerate_monic(F: GF, d: int, filter: str = "all") -> list[Poly]:
    """Monic polynomials of degree d in lexicographic order.

    The order is by the integer ``sum(c_i q**i)`` over the non-leading
    coefficients, i.e. lexicographic on ``(c_{d-1}, ..., c_0)``.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if filter == "all":
        return list(_iter_monic(F, d))
    if filter == "squarefree":
        return list(_squarefree_monic(F, d))
    if filter == "irreducible":
        return list(_irreducible_monic(F, d))
    raise ValueError(f"unknown filter {filter!r}")


@functools.cache
def _squarefree_monic(F: GF, d: int) -> tuple[Poly, ...]:
    return tuple(f for f in _iter_monic(F, d) if is_squarefree(f))


@functools.cache
def _irreducible_monic(F: GF, d: int) -> tuple[Poly, ...]:
    if d == 0:
        return ()
    if d == 1:
        return tuple(_iter_monic(F, 1))
    return tuple(f for f in _iter_monic(F, d) if f.coeffs[0] and is_irreducible(f))


_TERM = re.compile(r"^(?:(\d*)\*?)?(t(?:\^(\d+))?)?$")


def parse_poly(text: str, F: GF) -> Poly:
    """Parse ``"t^3+2t"``-style input over a prime field (or F_q with integer codes)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for raw in s.split("+"):
        if not raw:
            continue
        sign = 1
        while raw.startswith("-"):
            sign, raw = -sign, raw[1:]
        m = _TERM.match(raw)
        if not m or not (m.group(1) or m.group(2)):
            raise ValueError(f"cannot parse term {raw!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        if m.group(2):
            e = int(m.group(3)) if m.group(3) else 1
        else:
            e = 0
        if F.e == 1:
            val = sign * c % F.p
        else:
            if c >= F.q:
                raise ValueError(f"coefficient code {c} out of range for {F}")
            val = c if sign == 1 else F.neg(c)
        coeffs[e] = F.add(coeffs.get(e, 0), val)
    top = max(coeffs)
    return Poly(F, [coeffs.get(i, 0) for i in range(top + 1)])


def t_poly(F: GF) -> Poly:
    return Poly(F, [0, 1])


def prime_field_poly(p: int, coeffs) -> Poly:
    return Poly(make_field(p), coeffs)
