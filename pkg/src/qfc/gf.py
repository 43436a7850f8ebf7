"""Finite fields F_{p^e} of odd characteristic.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_0 + c_1 x + ...``
is the reduced representative modulo the defining polynomial.  Scalar
arithmetic works on these integer codes; :class:`FieldElement` is a thin
immutable wrapper for user-facing code.  Vectorized helpers (``vmul``,
``square_flags`` ...) operate on numpy arrays of codes and are what the
point-counting kernels use.
"""

from __future__ import annotations

import functools

import numpy as np


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# --- dense polynomials over F_p as lists of ints, low-to-high -------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(_trim(a)) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppow_x(k, m, p):
    """x**(p**k) mod m."""
    r = [0, 1]
    r = _pmod(r, m, p)
    for _ in range(k):
        # raise to the p-th power by square-and-multiply
        base, acc, n = r, [1], p
        while n:
            if n & 1:
                acc = _pmulmod(acc, base, m, p)
            base = _pmulmod(base, base, m, p)
            n >>= 1
        r = acc
    return r


def _is_irreducible_fp(f, p) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _trim(_pmod([(c1 - c2) % p for c1, c2 in _zip_pad(_ppow_x(d, f, p), x)], f, p)):
        return False
    for r in prime_factors(d):
        h = _ppow_x(d // r, f, p)
        diff = _trim([(c1 - c2) % p for c1, c2 in _zip_pad(h, x)])
        g = _pgcd(f, diff, p)
        if len(g) - 1 != 0:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Least monic irreducible of degree e over F_p.

    Candidates are ordered by the integer ``sum(c_i p**i)`` of their lower
    coefficients, i.e. lexicographically on ``(c_{e-1}, ..., c_0)``.
    """
    for code in range(p ** e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if f[0] == 0 and e > 1:
            continue
        if _is_irreducible_fp(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


class GF:
    """Parameters of the field F_{p^e}; instances come from :func:`make_field`."""

    def __init__(self, p: int, e: int):
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if e < 1:
            raise FieldError("extension degree must be positive")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus: tuple[int, ...] = () if e == 1 else least_irreducible(p, e)
        self._pw = np.array([p ** i for i in range(e)], dtype=np.int64)

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    # --- code <-> digits ---------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds) -> int:
        a = 0
        for c in reversed(list(ds)):
            a = a * self.p + c % self.p
        return a

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_digits(value))
        return FieldElement(self, int(value) % self.p)

    def elements(self):
        return [FieldElement(self, a) for a in range(self.q)]

    # --- scalar arithmetic on integer codes ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._add_table[a][b] if self._add_table is not None else self._add_digits(a, b)

    def _add_digits(self, a, b):
        p = self.p
        out, scale = 0, 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self._neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        lg = self._log
        return self._exp[(lg[a] + lg[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if self.e == 1:
            return pow(a, n, self.p)
        if a == 0:
            return 1 if n == 0 else 0
        return self._exp[self._log[a] * n % (self.q - 1)]

    def is_square_code(self, a: int) -> bool:
        """Euler criterion; 0 counts as a square."""
        if a == 0:
            return True
        return self.power(a, (self.q - 1) // 2) == 1

    @functools.cached_property
    def nonsquare(self) -> int:
        """Least code of a nonsquare element."""
        for a in range(1, self.q):
            if not self.is_square_code(a):
                return a
        raise FieldError("no nonsquare")  # pragma: no cover

    # --- tables -----------------------------------------------------------

    @functools.cached_property
    def _add_table(self):
        if self.q > 4096:
            return None
        codes = np.arange(self.q, dtype=np.int64)
        d = self.vdigits(codes)
        tab = self.vfrom_digits((d[:, None, :] + d[None, :, :]) % self.p)
        return tab.tolist()

    @functools.cached_property
    def _neg_table(self):
        codes = np.arange(self.q, dtype=np.int64)
        return self.vfrom_digits(-self.vdigits(codes) % self.p).tolist()

    @functools.cached_property
    def _exp_log(self):
        q = self.q
        g = self.primitive_element
        exp = np.ones(q - 1, dtype=np.int64)
        filled, step = 1, g
        while filled < q - 1:
            n = min(filled, q - 1 - filled)
            exp[filled:filled + n] = self.vmul(exp[:n], np.full(n, step, dtype=np.int64))
            filled += n
            step = int(self.vmul(np.array([step]), np.array([step]))[0])
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        return exp.tolist(), log.tolist()

    @property
    def _exp(self):
        return self._exp_log[0]

    @property
    def _log(self):
        return self._exp_log[1]

    @functools.cached_property
    def primitive_element(self) -> int:
        order = self.q - 1
        factors = prime_factors(order)
        for g in range(2 if self.q > 2 else 1, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, n: int) -> int:
        result = np.array([1], dtype=np.int64)
        base = np.array([a], dtype=np.int64)
        while n:
            if n & 1:
                result = self.vmul(result, base)
            base = self.vmul(base, base)
            n >>= 1
        return int(result[0])

    # --- vectorized arithmetic on code arrays -----------------------------

    def vdigits(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._pw) % self.p

    def vfrom_digits(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._pw

    def vadd(self, a, b):
        return self.vfrom_digits(self.vdigits(a) + self.vdigits(b))

    def vsub(self, a, b):
        return self.vfrom_digits(self.vdigits(a) - self.vdigits(b))

    def vmul_digits(self, da: np.ndarray, db: np.ndarray) -> np.ndarray:
        """Product of digit arrays (..., e), returned as reduced digits."""
        p, e = self.p, self.e
        if e == 1:
            return (da * db) % p
        shape = np.broadcast_shapes(da.shape[:-1], db.shape[:-1])
        prod = np.zeros(shape + (2 * e - 1,), dtype=np.int64)
        for i in range(e):
            prod[..., i:i + e] += da[..., i:i + 1] * db
        prod %= p
        mod = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[..., k]
            for j in range(e):
                if mod[j]:
                    prod[..., k - e + j] -= c * mod[j]
            prod[..., k - e:k] %= p
        return prod[..., :e] % p

    def vmul(self, a, b):
        return self.vfrom_digits(self.vmul_digits(self.vdigits(a), self.vdigits(b)))

    def square_flags(self) -> np.ndarray:
        """Boolean array: flag[a] is True iff a is a square (0 included)."""
        return self._square_flags.copy()

    @functools.cached_property
    def _square_flags(self):
        codes = np.arange(self.q, dtype=np.int64)
        flags = np.zeros(self.q, dtype=bool)
        flags[self.vmul(codes, codes)] = True
        return flags

    @functools.cached_property
    def chi_table(self) -> np.ndarray:
        """Quadratic character as an int8 array indexed by code, chi(0) = 0."""
        chi = np.where(self._square_flags, 1, -1).astype(np.int8)
        chi[0] = 0
        return chi

    def roots_of(self, coeffs_fp: tuple[int, ...]) -> int:
        """Least code in this field that is a root of a polynomial over F_p."""
        chunk = 1 << 15
        for start in range(0, self.q, chunk):
            xs = np.arange(start, min(self.q, start + chunk), dtype=np.int64)
            dx = self.vdigits(xs)
            acc = np.zeros_like(dx)
            for c in reversed(coeffs_fp):
                acc = self.vmul_digits(acc, dx)
                acc[..., 0] = (acc[..., 0] + c) % self.p
            hit = np.nonzero(~acc.any(axis=-1))[0]
            if hit.size:
                return int(xs[hit[0]])
        raise FieldError("polynomial has no root in this field")


@functools.cache
def make_field(p: int, e: int = 1) -> GF:
    """Return the (cached) field F_{p^e} with the least irreducible modulus."""
    return GF(p, e)


def field_of_order(q: int) -> GF:
    p, e = prime_power(q)
    return make_field(p, e)


@functools.total_ordering
class FieldElement:
    """Immutable element of a :class:`GF`."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.field, self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, code):
        return FieldElement(self.field, code)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.code))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.code))

    def __pow__(self, n: int):
        return self._wrap(self.field.power(self.code, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p
        return NotImplemented

    def __lt__(self, other):
        return self.code < self._coerce(other)

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.code}"
        ds = self.field.digits(self.code)
        terms = [
            (f"{c}" if i == 0 else (("" if c == 1 else f"{c}") + ("x" if i == 1 else f"x^{i}")))
            for i, c in enumerate(ds) if c
        ]
        return "+".join(reversed(terms)) or "0"

    def is_square(self) -> bool:
        return self.field.is_square_code(self.code)


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def is_square(a: FieldElement) -> bool:
    return a.is_square()


@functools.cache
def embedding_table(src: GF, dst: GF) -> tuple[int, ...]:
    """Codes in ``dst`` of the images of all codes of ``src``."""
    if src.p != dst.p or dst.e % src.e:
        raise FieldError(f"cannot embed {src} into {dst}")
    if src.e == 1:
        return tuple(range(src.q))
    gamma = dst.roots_of(src.modulus)
    # powers of gamma as codes, then linear combination per source element
    pw = [1]
    for _ in range(src.e - 1):
        pw.append(dst.mul(pw[-1], gamma) if dst.q <= 10 ** 5 else int(dst.vmul([pw[-1]], [gamma])[0]))
    dpw = dst.vdigits(np.array(pw, dtype=np.int64))  # (e_src, e_dst)
    src_digits = src.vdigits(np.arange(src.q, dtype=np.int64))  # (q_src, e_src)
    img = dst.vfrom_digits(src_digits @ dpw)
    return tuple(int(c) for c in img)


def embed(a: FieldElement, target: GF) -> FieldElement:
    return FieldElement(target, embedding_table(a.field, target)[a.code])
