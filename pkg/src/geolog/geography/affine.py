"""Affine functions of the boundary coordinates and affine parametrizations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactgeom.cone import Halfspace
from ..exactgeom.linalg import qvec, to_q


@dataclass(frozen=True)
class Affine:
    """f(t) = a.t + c."""

    a: tuple[Fraction, ...]
    c: Fraction

    @classmethod
    def const(cls, n: int, c) -> "Affine":
        return cls(tuple(Fraction(0) for _ in range(n)), to_q(c))

    @classmethod
    def coord(cls, n: int, i: int, scale=1, c=0) -> "Affine":
        return cls(tuple(to_q(scale) if j == i else Fraction(0) for j in range(n)), to_q(c))

    def __call__(self, t: Sequence) -> Fraction:
        return sum((x * y for x, y in zip(self.a, t)), self.c)

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(tuple(x + y for x, y in zip(self.a, other.a)), self.c + other.c)

    def __sub__(self, other: "Affine") -> "Affine":
        return Affine(tuple(x - y for x, y in zip(self.a, other.a)), self.c - other.c)

    def __neg__(self) -> "Affine":
        return Affine(tuple(-x for x in self.a), -self.c)

    def scale(self, k) -> "Affine":
        k = to_q(k)
        return Affine(tuple(k * x for x in self.a), k * self.c)

    __mul__ = scale
    __rmul__ = scale

    @property
    def is_const(self) -> bool:
        return all(x == 0 for x in self.a)

    def wall(self) -> Halfspace | None:
        """The hyperplane f = 0, or None for a constant function."""
        if self.is_const:
            return None
        return Halfspace(self.a, -self.c, "closed")

    def halfspace(self) -> Halfspace | None:
        """The closed half space f >= 0 (None when constant)."""
        return self.wall()


def affine_sum(terms: Sequence[tuple], n: int) -> Affine:
    """sum k_i f_i for (k_i, f_i) pairs."""
    out = Affine.const(n, 0)
    for k, f in terms:
        if k:
            out = out + f.scale(k)
    return out


@dataclass(frozen=True)
class Param:
    """The affine map t -> b = b0 + sum t_k cols[k] from a slice to the cube."""

    b0: tuple[Fraction, ...]
    cols: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def identity(cls, m: int) -> "Param":
        return cls(
            tuple(Fraction(0) for _ in range(m)),
            tuple(tuple(Fraction(1 if i == j else 0) for i in range(m)) for j in range(m)),
        )

    @classmethod
    def make(cls, b0: Sequence, cols: Sequence[Sequence]) -> "Param":
        return cls(qvec(b0), tuple(qvec(c) for c in cols))

    @property
    def k(self) -> int:
        return len(self.cols)

    @property
    def m(self) -> int:
        return len(self.b0)

    def b(self, t: Sequence) -> tuple[Fraction, ...]:
        out = list(self.b0)
        for tk, col in zip(t, self.cols):
            if tk:
                for i, x in enumerate(col):
                    out[i] += tk * x
        return tuple(out)

    def pull(self, f: Affine) -> Affine:
        """f(b(t)) as an affine function of t."""
        a = tuple(sum((x * y for x, y in zip(f.a, col)), Fraction(0)) for col in self.cols)
        return Affine(a, f(self.b0))
