"""Boundary components and the cube of boundaries they span."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactgeom.linalg import qvec
from ..exactgeom.polyhedron import Polyhedron


class UnsupportedCategory(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    """A prime component S_i of S.

    Exactly one description is set: ``ray`` (toric invariant prime divisor,
    possibly exceptional on X), ``divisor`` (toric general member of a
    basepoint free system, given by invariant coefficients on the rays of X),
    ``cls`` (surface: general member of a class) or ``curve`` (surface: a
    listed curve label).
    """

    name: str
    ray: tuple[int, ...] | None = None
    divisor: tuple[Fraction, ...] | None = None
    cls: tuple[Fraction, ...] | None = None
    curve: str | None = None

    def __post_init__(self):
        if self.divisor is not None:
            object.__setattr__(self, "divisor", qvec(self.divisor))
        if self.cls is not None:
            object.__setattr__(self, "cls", qvec(self.cls))
        if self.ray is not None:
            object.__setattr__(self, "ray", tuple(int(x) for x in self.ray))
        if sum(x is not None for x in (self.ray, self.divisor, self.cls, self.curve)) != 1:
            raise ValueError("a component needs exactly one description")


@dataclass(frozen=True)
class BoundaryCube:
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ValueError("component names must be distinct")
        keys = [(c.ray, c.divisor, c.cls, c.curve) for c in self.components]
        if len(set(keys)) != len(keys):
            raise ValueError("components must be distinct")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.components]

    def region(self) -> Polyhedron:
        return Polyhedron.cube(self.m)

    def index(self, name: str) -> int:
        return self.names.index(name)


def check_boundary(b: Sequence, m: int) -> tuple[Fraction, ...]:
    b = qvec(b)
    if len(b) != m:
        raise ValueError(f"boundary has {len(b)} coefficients, expected {m}")
    if any(x < 0 or x > 1 for x in b):
        raise ValueError("boundary coefficients must lie in [0, 1]")
    return b
