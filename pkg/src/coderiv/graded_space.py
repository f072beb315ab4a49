"""Z2-graded spaces with ordered, 1-based bases and tensor words over them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

Word = tuple[int, ...]


class SpaceError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpace:
    """A p|q-dimensional space; v_1..v_p are even and v_{p+1}..v_{p+q} odd."""

    even: int
    odd: int

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise SpaceError("dimensions must be non-negative")

    @property
    def dim(self) -> int:
        return self.even + self.odd

    def parity(self, i: int) -> int:
        if not 1 <= i <= self.dim:
            raise SpaceError(f"basis index {i} out of range 1..{self.dim}")
        return 0 if i <= self.even else 1

    def indices(self) -> range:
        return range(1, self.dim + 1)

    def to_json(self) -> dict:
        return {"even": self.even, "odd": self.odd}

    @classmethod
    def from_json(cls, obj) -> "GradedSpace":
        return cls(int(obj["even"]), int(obj["odd"]))

    def __str__(self):
        return f"{self.even}|{self.odd}"


# the 2|1 space <v1, v2 | v3> of the moduli problem
V21 = GradedSpace(2, 1)


def word_parity(w: Word, s: GradedSpace) -> int:
    return sum(s.parity(i) for i in w) & 1


def check_word(w: Word, s: GradedSpace) -> Word:
    w = tuple(int(i) for i in w)
    for i in w:
        s.parity(i)
    return w


def enumerate_words(n: int, s: GradedSpace) -> list[Word]:
    """All words of length n in lexicographic order; n=0 gives the empty word."""
    if n < 0:
        raise SpaceError("word length must be non-negative")
    return list(product(s.indices(), repeat=n))


def cochain_dims(n: int, s: GradedSpace) -> tuple[int, int]:
    """(even, odd) dimensions of Hom(W^n, W).

    A word of length n has even parity in ((p+q)^n + (p-q)^n)/2 cases, so the
    counts follow from the parity generating function without enumeration.
    """
    if n < 0:
        raise SpaceError("arity must be non-negative")
    p, q = s.even, s.odd
    even_words = ((p + q) ** n + (p - q) ** n) // 2
    odd_words = (p + q) ** n - even_words
    return even_words * p + odd_words * q, even_words * q + odd_words * p
