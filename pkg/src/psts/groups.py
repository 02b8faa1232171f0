"""Finite abelian groups written as direct products of cyclic groups.

Elements are plain tuples of ints, one coordinate per cyclic factor. A group
with a single factor renders its elements as bare integers, otherwise as
``(c1,...,ck)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterator

GroupElem = tuple[int, ...]


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise GroupError(f"bad moduli {self.moduli!r}")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def cyclic(cls, m: int) -> "AbelianGroup":
        return cls((m,))

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse ``c3``, ``c4``, ``c3^2`` or ``c3xc4`` (case-insensitive)."""
        moduli: list[int] = []
        for part in text.strip().lower().split("x"):
            hit = re.fullmatch(r"c(\d+)(?:\^(\d+))?", part.strip())
            if hit is None:
                raise GroupError(f"cannot parse group {text!r}")
            moduli.extend([int(hit.group(1))] * int(hit.group(2) or 1))
        return cls(tuple(moduli))

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def is_cyclic_factor(self) -> bool:
        return len(self.moduli) == 1

    def __str__(self):
        return "x".join(f"c{m}" for m in self.moduli)

    def __contains__(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.moduli)
            and all(isinstance(c, int) and 0 <= c < m for c, m in zip(a, self.moduli))
        )

    def _check(self, *elems):
        for a in elems:
            if a not in self:
                raise GroupError(f"{a!r} is not an element of {self}")

    def elem(self, value) -> GroupElem:
        """Coerce an int (single factor only) or a sequence into a reduced element."""
        if isinstance(value, int):
            if not self.is_cyclic_factor:
                raise GroupError(f"integer {value} needs a cyclic group, got {self}")
            return (value % self.moduli[0],)
        coords = tuple(value)
        if len(coords) != len(self.moduli):
            raise GroupError(f"{value!r} has wrong arity for {self}")
        return tuple(int(c) % m for c, m in zip(coords, self.moduli))

    def zero(self) -> GroupElem:
        return (0,) * len(self.moduli)

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        self._check(a, b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: GroupElem) -> GroupElem:
        self._check(a)
        return tuple(-x % m for x, m in zip(a, self.moduli))

    def sub(self, a: GroupElem, b: GroupElem) -> GroupElem:
        return self.add(a, self.neg(b))

    def scalar_mul(self, n: int, a: GroupElem) -> GroupElem:
        self._check(a)
        return tuple(n * x % m for x, m in zip(a, self.moduli))

    def element_order(self, a: GroupElem) -> int:
        self._check(a)
        return reduce(math.lcm, (m // math.gcd(x, m) for x, m in zip(a, self.moduli)), 1)

    def elements(self) -> Iterator[GroupElem]:
        """All elements in lexicographic order."""
        return product(*(range(m) for m in self.moduli))

    def render(self, a: GroupElem) -> str:
        self._check(a)
        if self.is_cyclic_factor:
            return str(a[0])
        return "(" + ",".join(map(str, a)) + ")"

    def parse_elem(self, text: str) -> GroupElem:
        text = text.strip()
        if text.startswith("("):
            if not text.endswith(")"):
                raise GroupError(f"bad element {text!r}")
            coords = [int(c) for c in text[1:-1].split(",")]
            a = tuple(coords)
        else:
            a = (int(text),)
        self._check(a)
        return a


def cyclic_automorphisms(m: int) -> list[int]:
    """Unit multipliers u of Z_m; each gives the automorphism x -> u*x.

    The trivial group has only the identity, represented as ``[0]``.
    """
    if m < 1:
        raise GroupError(f"m must be >= 1, got {m}")
    if m == 1:
        return [0]
    return [u for u in range(1, m) if math.gcd(u, m) == 1]
