"""Places of F_q(t) and the local behaviour of a quadratic extension k(sqrt D)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .gf import GF
from .polyring import Poly, enumerate_monic, is_irreducible, is_squarefree, parse_poly


class LocalType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED_A = "ramA"
    RAMIFIED_B = "ramB"

    @property
    def ramified(self) -> bool:
        return self in (LocalType.RAMIFIED_A, LocalType.RAMIFIED_B)

    @classmethod
    def parse(cls, text: str) -> LocalType:
        aliases = {
            "split": cls.SPLIT, "sp": cls.SPLIT,
            "inert": cls.INERT, "ur": cls.INERT, "unramified": cls.INERT,
            "rama": cls.RAMIFIED_A, "ramifieda": cls.RAMIFIED_A,
            "ramb": cls.RAMIFIED_B, "ramifiedb": cls.RAMIFIED_B,
        }
        key = text.strip().lower().replace("_", "").replace("-", "")
        if key not in aliases:
            raise ValueError(f"unknown local type {text!r}")
        return aliases[key]

    def __str__(self):
        return self.value


LOCAL_TYPES = (LocalType.SPLIT, LocalType.INERT, LocalType.RAMIFIED_A, LocalType.RAMIFIED_B)


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible ``poly``, or infinity when ``poly`` is None."""

    q: int
    poly: Poly | None = field(default=None, compare=False)
    key: tuple = field(default=(), repr=False)

    @classmethod
    def finite(cls, P: Poly) -> Place:
        if not P.is_monic() or P.degree < 1:
            raise ValueError(f"{P} is not a monic nonconstant polynomial")
        return cls(P.field.q, P, P.coeffs)

    @classmethod
    def infinite(cls, q: int) -> Place:
        return cls(q, None, ())

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @property
    def norm(self) -> int:
        return self.q ** self.degree

    def sort_key(self):
        if self.poly is None:
            return (0, ())
        return (self.degree, tuple(reversed(self.poly.coeffs)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.poly is None else str(self.poly)


def all_places_up_to(F: GF, B: int) -> list[Place]:
    """Infinity first, then finite places by degree, each degree in lex order."""
    if B < 1:
        raise ValueError("degree bound must be at least 1")
    out = [Place.infinite(F.q)]
    for d in range(1, B + 1):
        out.extend(Place.finite(P) for P in enumerate_monic(F, d, "irreducible"))
    return out


def parse_place(text: str, F: GF) -> Place:
    s = text.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return Place.infinite(F.q)
    P = parse_poly(s, F)
    if P.degree < 1 or not P.is_monic() or not is_irreducible(P):
        raise ValueError(f"{s!r} is not a monic irreducible polynomial")
    return Place.finite(P)


def euler_symbol(a: Poly, P: Poly) -> int:
    """Legendre symbol of a (prime to P) in F_q[t]/P via the Euler criterion."""
    n = (P.field.q ** P.degree - 1) // 2
    r = a.powmod(n, P)
    if r.degree == 0 and r.coeffs[0] == 1:
        return 1
    return -1


def jacobi_symbol(a: Poly, b: Poly) -> int:
    """Jacobi symbol (a/b) for monic b, by quadratic reciprocity in F_q[t].

    For monic coprime A, B: (A/B)(B/A) = (-1)^((q-1)/2 deg A deg B), and a
    constant c contributes chi(c)^deg B.
    """
    if not b.is_monic():
        raise ValueError("the modulus must be monic")
    F = a.field
    odd_half = (F.q - 1) // 2 % 2
    result = 1
    while b.degree > 0:
        a = a % b
        if a.is_zero():
            return 0
        c = a.lead
        if b.degree % 2 and not F.is_square_code(c):
            result = -result
        a = a.monic()
        if odd_half and a.degree % 2 and b.degree % 2:
            result = -result
        a, b = b, a
    return result


_residue_symbol = jacobi_symbol


def quadratic_symbol(D: Poly, v: Place) -> int:
    if v.is_infinite:
        raise ValueError("quadratic_symbol is defined at finite places")
    r = D % v.poly
    if r.is_zero():
        return 0
    return _residue_symbol(r, v.poly)


def local_type(D: Poly, v: Place) -> LocalType:
    """Behaviour of k(sqrt D)/k at v for squarefree nonconstant D.

    Ramified subtype A means the residue of the unit part of D (with respect
    to the uniformizer P, or 1/t at infinity) is a square; B otherwise.
    """
    if D.degree < 1:
        raise ValueError("D must be nonconstant")
    if not is_squarefree(D):
        raise ValueError(f"{D} is not squarefree")
    return _local_type_unchecked(D, v)


def _local_type_unchecked(D: Poly, v: Place) -> LocalType:
    F = D.field
    if v.is_infinite:
        sq = F.is_square_code(D.lead)
        if D.degree % 2 == 0:
            return LocalType.SPLIT if sq else LocalType.INERT
        return LocalType.RAMIFIED_A if sq else LocalType.RAMIFIED_B
    quo, rem = divmod(D, v.poly)
    if rem.is_zero():
        s = _residue_symbol(quo % v.poly, v.poly)
        return LocalType.RAMIFIED_A if s == 1 else LocalType.RAMIFIED_B
    return LocalType.SPLIT if _residue_symbol(rem, v.poly) == 1 else LocalType.INERT
