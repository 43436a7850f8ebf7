"""Append-only plain-text cache of L-polynomials.

One record per line::

    q d0_coeffs bit genus L_coeffs

with coefficient lists written low-to-high as comma-separated decimals.
Files can be merged by concatenation; later duplicates must agree.
"""

from __future__ import annotations

import fcntl
import os
import random
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .curvezeta import LPolynomial, l_polynomial_oracle
from .quadext import QuadExt

ENV_VAR = "QFC_CACHE"

Key = tuple[int, tuple[int, ...], int]


def default_path() -> Path | None:
    p = os.environ.get(ENV_VAR)
    return Path(p) if p else None


def format_record(E: QuadExt, L: LPolynomial) -> str:
    q, coeffs, bit = E.serialize()
    return f"{q} {','.join(map(str, coeffs))} {bit} {L.genus} {','.join(map(str, L.coeffs))}"


def parse_record(line: str) -> tuple[Key, LPolynomial]:
    parts = line.split()
    if len(parts) != 5:
        raise ValueError(f"expected 5 fields, got {len(parts)}")
    q = int(parts[0])
    coeffs = tuple(int(c) for c in parts[1].split(","))
    bit = int(parts[2])
    genus = int(parts[3])
    L = LPolynomial(q, genus, tuple(int(c) for c in parts[4].split(",")))
    if bit not in (0, 1) or not coeffs or coeffs[-1] != 1 or any(not 0 <= c < q for c in coeffs):
        raise ValueError("bad discriminant field")
    if genus != len(coeffs) // 2 - 1:  # ceil(deg D0 / 2) - 1
        raise ValueError("genus does not match the degree of D")
    return (q, coeffs, bit), L


@dataclass
class VerifyReport:
    records: int
    checked: int
    mismatches: list[str] = field(default_factory=list)
    corrupt: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.corrupt


class LCache:
    """In-memory view of a cache file; ``add`` appends through a single-writer lock."""

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path is not None else None
        self.data: dict[Key, LPolynomial] = {}
        self.hits = 0
        self.misses = 0
        self.load()

    def load(self):
        self.data.clear()
        if self.path is None or not self.path.exists():
            return
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    key, L = parse_record(line)
                except ValueError as exc:
                    warnings.warn(f"{self.path}:{lineno}: skipping corrupt cache record ({exc})")
                    continue
                self.data[key] = L

    def __len__(self):
        return len(self.data)

    def get(self, E: QuadExt) -> LPolynomial | None:
        L = self.data.get(E.serialize())
        if L is None:
            self.misses += 1
        else:
            self.hits += 1
        return L

    def add(self, items: Iterable[tuple[QuadExt, LPolynomial]]):
        new = [(E, L) for E, L in items if E.serialize() not in self.data]
        for E, L in new:
            self.data[E.serialize()] = L
        if self.path is None or not new:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write("".join(format_record(E, L) + "\n" for E, L in new))
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def verify(self, fraction: float = 0.01, seed: int = 0, budget: int | None = None) -> VerifyReport:
        """Recompute a random sample with the oracle route; corrupt lines are failures here."""
        if self.path is None or not self.path.exists():
            return VerifyReport(0, 0)
        records: list[tuple[Key, LPolynomial]] = []
        corrupt = []
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    records.append(parse_record(line))
                except ValueError:
                    corrupt.append(lineno)
        k = min(len(records), max(1, round(fraction * len(records)))) if records else 0
        sample = random.Random(seed).sample(records, k)
        mismatches = []
        kw = {} if budget is None else {"budget": budget}
        for (q, coeffs, bit), L in sample:
            E = QuadExt.deserialize(q, coeffs, bit)
            if l_polynomial_oracle(E, **kw) != L:
                mismatches.append(f"{q} {','.join(map(str, coeffs))} {bit}")
        return VerifyReport(len(records), k, mismatches, corrupt)


def lookup_or_compute(exts: Sequence[QuadExt], cache: LCache | None, compute) -> list[LPolynomial]:
    """L-polynomials for ``exts``, computing (in one batch) only the cache misses."""
    if cache is None:
        return compute(list(exts))
    out: list[LPolynomial | None] = [cache.get(E) for E in exts]
    todo = [i for i, L in enumerate(out) if L is None]
    if todo:
        fresh = compute([exts[i] for i in todo])
        for i, L in zip(todo, fresh):
            out[i] = L
        cache.add((exts[i], out[i]) for i in todo)
    return out  # type: ignore[return-value]
