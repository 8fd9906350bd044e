"""Chain-level data types shared by the model, homology and surgery layers.

A :class:`PlusComplex` is a finite collection of U-towers.  Tower ``x`` with
bottom ``b`` contributes basis elements ``(x, i)`` for every ``i >= b``; the
U-action is ``(x, i) -> (x, i - 1)`` (zero below the bottom) and the
differential is given by U-equivariant arrows ``(x, i) -> c * (y, i - shift)``,
again dropped when they land below the bottom of ``y``.  This covers
upward-closed subquotients of CFK-infinity as well as mapping cones built
from them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field

from .fields import Field
from .linalg import axpy


@dataclass(frozen=True)
class Tower:
    name: object
    bottom: int
    grading: int | None  # grading of (name, 0); None for ungraded complexes


@dataclass(frozen=True)
class TowerArrow:
    src: object
    dst: object
    shift: int
    coeff: object


class ChainLawError(ValueError):
    """A map fails to commute with the differentials."""


@dataclass(frozen=True, eq=False)
class PlusComplex:
    field: Field
    towers: tuple[Tower, ...]
    arrows: tuple[TowerArrow, ...]
    label: str = ""
    base: str | None = None
    delta_hint: int | None = None  # known bound on the nilpotency of the finite part
    _out: dict = dc_field(default=None, repr=False, compare=False)
    _tower: dict = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        out = defaultdict(list)
        for a in self.arrows:
            out[a.src].append(a)
        object.__setattr__(self, "_out", dict(out))
        object.__setattr__(self, "_tower", {t.name: t for t in self.towers})

    @property
    def graded(self) -> bool:
        return all(t.grading is not None for t in self.towers)

    def tower(self, name) -> Tower:
        return self._tower[name]

    def bottom(self, name) -> int:
        return self._tower[name].bottom

    def contains(self, key) -> bool:
        name, i = key
        t = self._tower.get(name)
        return t is not None and i >= t.bottom

    def grading(self, key) -> int | None:
        name, i = key
        g = self._tower[name].grading
        return None if g is None else g + 2 * i

    def boundary(self, key) -> dict:
        F = self.field
        name, i = key
        out: dict = {}
        for a in self._out.get(name, ()):
            j = i - a.shift
            if j >= self._tower[a.dst].bottom:
                axpy(F, a.coeff, {(a.dst, j): F.one}, out)
        return out

    def boundary_vec(self, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            axpy(self.field, c, self.boundary(k), out)
        return out

    def u(self, key, power: int = 1):
        name, i = key
        j = i - power
        return (name, j) if j >= self._tower[name].bottom else None

    def u_vec(self, vec: dict, power: int = 1) -> dict:
        out = {}
        for k, c in vec.items():
            t = self.u(k, power)
            if t is not None:
                out[t] = c
        return out

    def elements_at(self, n: int) -> list:
        """Basis elements of grading ``n`` (graded complexes only)."""
        out = []
        for t in self.towers:
            d = n - t.grading
            if d % 2 == 0 and d // 2 >= t.bottom:
                out.append((t.name, d // 2))
        return sorted(out)

    def start_gradings(self) -> list[int]:
        return [t.grading + 2 * t.bottom for t in self.towers]

    def is_homogeneous(self) -> bool:
        if not self.graded:
            return False
        return all(
            self._tower[a.src].grading - self._tower[a.dst].grading == 1 - 2 * a.shift
            for a in self.arrows
        )


@dataclass(frozen=True, eq=False)
class ChainMap:
    """U-equivariant map ``(x, i) -> sum c * (y, i - shift)`` between plus-complexes."""

    source: PlusComplex
    target: PlusComplex
    entries: tuple[TowerArrow, ...]
    label: str = ""
    _out: dict = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        out = defaultdict(list)
        for a in self.entries:
            out[a.src].append(a)
        object.__setattr__(self, "_out", dict(out))

    def apply(self, key) -> dict:
        F = self.source.field
        name, i = key
        out: dict = {}
        for a in self._out.get(name, ()):
            j = i - a.shift
            if j >= self.target.bottom(a.dst):
                axpy(F, a.coeff, {(a.dst, j): F.one}, out)
        return out

    def apply_vec(self, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            axpy(self.source.field, c, self.apply(k), out)
        return out

    def degree(self) -> int | None:
        """Constant grading shift, or None if the map is not homogeneous."""
        if not (self.source.graded and self.target.graded):
            return None
        shifts = {
            self.target.tower(a.dst).grading - 2 * a.shift - self.source.tower(a.src).grading
            for a in self.entries
        }
        if len(shifts) > 1:
            return None
        return shifts.pop() if shifts else 0

    def check_chain_law(self, delta: int) -> None:
        """Verify ``d m = m d`` on every source element within ``delta`` of its bottom."""
        F = self.source.field
        for t in self.source.towers:
            for i in range(t.bottom, t.bottom + delta + 1):
                key = (t.name, i)
                lhs = self.target.boundary_vec(self.apply(key))
                rhs = self.apply_vec(self.source.boundary(key))
                diff = dict(lhs)
                axpy(F, F.neg(F.one), rhs, diff)
                if diff:
                    raise ChainLawError(
                        f"{self.label or 'map'} is not a chain map at {key}: "
                        f"d(m x) - m(d x) = {sorted(diff)}"
                    )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, self.entries + other.entries,
                        label=f"{self.label}+{other.label}")

    def scaled(self, c, label: str | None = None) -> "ChainMap":
        F = self.source.field
        return ChainMap(
            self.source, self.target,
            tuple(TowerArrow(a.src, a.dst, a.shift, F.mul(c, a.coeff)) for a in self.entries),
            label=label or self.label,
        )

    def over(self, F: Field, source: PlusComplex, target: PlusComplex, coerce) -> "ChainMap":
        return ChainMap(source, target,
                        tuple(TowerArrow(a.src, a.dst, a.shift, coerce(a.coeff)) for a in self.entries),
                        label=self.label)


@dataclass(frozen=True, eq=False)
class FiniteComplex:
    """Finite-dimensional chain complex with an explicit sorted basis."""

    field: Field
    basis: tuple
    grading: dict  # key -> relative grading (int or None)
    differential: dict  # key -> sparse vector
    label: str = ""

    def boundary(self, key) -> dict:
        return self.differential.get(key, {})

    def check_square_zero(self) -> list:
        F = self.field
        bad = []
        for k in self.basis:
            out: dict = {}
            for y, c in self.boundary(k).items():
                axpy(F, c, self.boundary(y), out)
            if out:
                bad.append(k)
        return bad

    def nonzero_entries(self) -> int:
        return sum(len(v) for v in self.differential.values())
