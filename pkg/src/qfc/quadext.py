"""Quadratic extensions L = k(sqrt D) of k = F_q(t), indexed by discriminant norm."""

from __future__ import annotations

import functools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

from .gf import GF, field_of_order
from .places import LocalType, Place, _local_type_unchecked
from .polyring import Poly, enumerate_monic, poly_gcd


def _pth_root(f: Poly) -> Poly:
    """g with g**p == f, for f whose derivative vanishes."""
    F = f.field
    p = F.p
    root_exp = F.q // p  # c -> c^(q/p) inverts Frobenius on F_q
    cs = [F.power(f.coeffs[i], root_exp) for i in range(0, len(f.coeffs), p)]
    return Poly(F, cs)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree factors with multiplicities, ``f = lc * prod g**m``."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return []
    F = f.field
    one = Poly.constant(F, 1)
    out: list[tuple[Poly, int]] = []
    df = f.derivative()
    if df.is_zero():
        return [(g, m * F.p) for g, m in squarefree_decomposition(_pth_root(f))]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while w != one:
        y = poly_gcd(w, c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, m * F.p) for g, m in squarefree_decomposition(_pth_root(c.monic())))
    return out


@functools.cache
def _trial_divisors(F: GF, d: int) -> tuple[Poly, ...]:
    return tuple(enumerate_monic(F, d, "irreducible"))


def ramified_finite(D0: Poly) -> list[Poly]:
    """Irreducible factors of squarefree monic D0 by trial division."""
    out = []
    rest = D0
    d = 1
    while rest.degree >= 2 * d:
        for P in _trial_divisors(D0.field, d):
            quo, rem = divmod(rest, P)
            if rem.is_zero():
                out.append(P)
                rest = quo
        d += 1
    if rest.degree >= 1:
        out.append(rest.monic())
    return sorted(out)


@dataclass(frozen=True)
class QuadExt:
    """k(sqrt(c^bit * d0)) with d0 monic squarefree and c the least nonsquare of F_q."""

    d0: Poly
    lc_class: int = 0

    @property
    def field(self) -> GF:
        return self.d0.field

    @property
    def q(self) -> int:
        return self.d0.field.q

    @property
    def D(self) -> Poly:
        if self.lc_class:
            return self.d0.scale(self.field.nonsquare)
        return self.d0

    @property
    def n(self) -> int:
        """Norm exponent: the discriminant norm is q^(2n)."""
        return (self.d0.degree + 1) // 2

    @property
    def genus(self) -> int:
        return self.n - 1

    @functools.cached_property
    def discriminant(self) -> tuple[Place, ...]:
        places = [Place.finite(P) for P in ramified_finite(self.d0)]
        if self.d0.degree % 2:
            places.insert(0, Place.infinite(self.q))
        return tuple(places)

    def local_type(self, v: Place) -> LocalType:
        return _local_type_unchecked(self.D, v)

    def serialize(self) -> tuple[int, tuple[int, ...], int]:
        return (self.q, self.d0.coeffs, self.lc_class)

    @classmethod
    def deserialize(cls, q: int, coeffs: Iterable[int], bit: int) -> QuadExt:
        return cls(Poly(field_of_order(q), list(coeffs)), int(bit))

    def __str__(self):
        return f"{self.D}" if not self.lc_class else f"{self.field.nonsquare}*({self.d0})"


def normalize(D: Poly) -> QuadExt:
    """Normal form of k(sqrt D): strip squares, keep the square class of the leading coefficient."""
    if D.is_zero():
        raise ValueError("D must be nonzero")
    F = D.field
    kernel = Poly.constant(F, 1)
    for g, m in squarefree_decomposition(D):
        if m % 2:
            kernel = kernel * g
    if kernel.degree < 1:
        raise ValueError(f"{D} is a constant times a square: not a geometric quadratic extension")
    bit = 0 if F.is_square_code(D.lead) else 1
    return QuadExt(kernel, bit)


def disc_data(E: QuadExt) -> tuple[tuple[Place, ...], int, int]:
    div = E.discriminant
    deg = sum(v.degree for v in div)
    return div, deg // 2, deg // 2 - 1


def iter_extensions(F: GF, n: int, conditions: Mapping[Place, LocalType] | None = None) -> Iterator[QuadExt]:
    if n < 1:
        raise ValueError("norm exponent must be at least 1")
    conds = list((conditions or {}).items())
    for d in (2 * n - 1, 2 * n):
        for D0 in enumerate_monic(F, d, "squarefree"):
            for bit in (0, 1):
                E = QuadExt(D0, bit)
                if all(E.local_type(v) == t for v, t in conds):
                    yield E


def enumerate_extensions(F: GF, n: int, conditions: Mapping[Place, LocalType] | None = None) -> list[QuadExt]:
    """All L with discriminant norm q^(2n) meeting the local conditions, in a fixed order."""
    return list(iter_extensions(F, n, conditions))


def class_count_formula(q: int, n: int) -> int:
    if n < 1:
        raise ValueError("norm exponent must be at least 1")
    if n == 1:
        return 2 * q * q
    return 2 * (q ** (2 * n) - q ** (2 * n - 2))
