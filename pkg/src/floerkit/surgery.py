"""Surgery complexes A+_k, B+, the maps v and h, and their mapping cones."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complexes import ChainMap, PlusComplex, Tower, TowerArrow
from .fields import Field, rational_functions
from .homology import HomologyWindow, MapAnalysis, UModule, u_module_structure
from .model import CFKComplex, HalfPlaneI, Union, flip_signs, require_valid, subquotient


class AmbiguousSpinc(ValueError):
    """Two representatives of the residue class are equally close to zero."""


def _field(c: CFKComplex, field: Field | None) -> Field:
    return field if field is not None else c.coefficients


def build_A(c: CFKComplex, k: int, field: Field | None = None) -> PlusComplex:
    """A+_k: generators with ``i >= 0`` or ``j >= k``."""
    return subquotient(c, Union(0, k), _field(c, field))


def build_B(c: CFKComplex, field: Field | None = None) -> PlusComplex:
    """B+: generators with ``i >= 0``."""
    return subquotient(c, HalfPlaneI(0), _field(c, field))


def map_v(c: CFKComplex, k: int, field: Field | None = None, A=None, B=None) -> ChainMap:
    """Projection A+_k -> B+ (forget the part with ``i < 0``)."""
    A = A or build_A(c, k, field)
    B = B or build_B(c, field)
    F = A.field
    entries = tuple(TowerArrow(g.name, g.name, 0, F.one) for g in c.generators)
    return ChainMap(A, B, entries, label=f"v{k}")


def _h_entries(c: CFKComplex, k: int, F: Field, sign: int):
    signs = flip_signs(c)
    fl = c.flip_map
    return tuple(
        TowerArrow(g.name, fl[g.name], k - g.alexander, F.coerce(sign * signs[g.name]))
        for g in c.generators
    )


@lru_cache(maxsize=None)
def h_orientation(c: CFKComplex) -> int:
    """Global sign making h_0 agree with v_0 on the top tower of H(B+).

    The flip signs are only determined up to an overall sign; this fixes it.
    Irrelevant in characteristic two.
    """
    F = c.coefficients
    if F.is_zero(F.add(F.one, F.one)):
        return 1
    A, B = build_A(c, 0), build_B(c)
    v = map_v(c, 0, A=A, B=B)
    h = ChainMap(A, B, _h_entries(c, 0, F, 1))
    wa, wb = HomologyWindow(A), HomologyWindow(B)
    av, ah = MapAnalysis(v, wa, wb), MapAnalysis(h, wa, wb)
    n = max(wa.zone, wb.zone)
    for key in wa.keys(n) + wa.keys(n + 1):
        iv, ih = av.image(key), ah.image(key)
        if iv and iv == ih:
            return 1
        if iv and iv == {x: F.neg(y) for x, y in ih.items()}:
            return -1
    return 1


def map_h(c: CFKComplex, k: int, field: Field | None = None, A=None, B=None) -> ChainMap:
    """Projection to ``j >= k``, shift by ``U^k``, then the flip.

    ``[x, i] -> eps(x) [flip x, i + A(x) - k]``, zero when that lands outside B+.
    """
    require_valid(c)
    A = A or build_A(c, k, field)
    B = B or build_B(c, field)
    return ChainMap(A, B, _h_entries(c, k, A.field, h_orientation(c)), label=f"h{k}")


def _hint(*parts: PlusComplex) -> int:
    total = 0
    for p in parts:
        if p.is_homogeneous():
            total += HomologyWindow(p).nb
        else:
            total += p.delta_hint or len(p.towers)
    return total


def mapping_cone(f: ChainMap, label: str | None = None) -> PlusComplex:
    """Cone of ``f: A -> B``: ``A + B`` with differential ``[[-dA, 0], [f, dB]]``.

    The sign is what makes the differential square to zero away from
    characteristic two.

    The B-part is shifted so a homogeneous map of degree ``s`` yields a
    homogeneous cone; an inhomogeneous map yields an ungraded cone.
    """
    A, B = f.source, f.target
    deg = f.degree()
    graded = deg is not None
    towers = [Tower(("A", t.name), t.bottom, t.grading if graded else None) for t in A.towers]
    towers += [Tower(("B", t.name), t.bottom, t.grading - deg - 1 if graded else None) for t in B.towers]
    F = A.field
    arrows = [TowerArrow(("A", a.src), ("A", a.dst), a.shift, F.neg(a.coeff)) for a in A.arrows]
    arrows += [TowerArrow(("B", a.src), ("B", a.dst), a.shift, a.coeff) for a in B.arrows]
    arrows += [TowerArrow(("A", a.src), ("B", a.dst), a.shift, a.coeff) for a in f.entries]
    shifts = [abs(a.shift) for a in f.entries] or [0]
    hint = 2 * _hint(A, B) + 2 * max(shifts) + 2
    return PlusComplex(A.field, tuple(towers), tuple(arrows),
                       label=label or f"cone({f.label})", base=A.base, delta_hint=hint)


def vh_sum(c: CFKComplex, k: int, field: Field | None = None) -> ChainMap:
    """The zero-surgery map ``v - h`` (the same as ``v + h`` in characteristic two)."""
    A = build_A(c, k, field)
    B = build_B(c, field)
    F = A.field
    return map_v(c, k, A=A, B=B) + map_h(c, k, A=A, B=B).scaled(F.neg(F.one), label=f"-h{k}")


def large_surgery_k(n: int, t: int, k: int | None = None) -> int:
    """The representative of ``t mod n`` of smallest absolute value."""
    if n <= 0:
        raise ValueError("surgery coefficient n must be positive")
    if k is not None:
        if (k - t) % n:
            raise ValueError(f"k={k} is not congruent to t={t} mod {n}")
        if 2 * abs(k) > n:
            raise ValueError(f"|k|={abs(k)} exceeds n/2")
        return k
    r = t % n
    candidates = [x for x in (r, r - n) if 2 * abs(x) <= n]
    if len(candidates) != 1:
        raise AmbiguousSpinc(f"t={t} mod {n} has two representatives {candidates}; pass k explicitly")
    return candidates[0]


def large_surgery_bound_ok(c: CFKComplex, n: int) -> bool:
    """Whether ``n >= 2g``, with the top Alexander grading standing in for g."""
    from .analyzer import top_alexander

    return n >= 2 * top_alexander(c)


def large_surgery_homology(c: CFKComplex, n: int, t: int = 0, k: int | None = None,
                           force: bool = False, field: Field | None = None) -> UModule:
    """H(A+_k), the Floer homology of ``n``-surgery in the class of ``t``.

    Only valid for ``n >= 2g``; ``force`` skips that check (callers should
    then flag the result as unverified).
    """
    require_valid(c)
    if not force and not large_surgery_bound_ok(c, n):
        raise ValueError(f"n={n} is below the large-surgery genus bound n >= 2g; use force to override")
    kk = large_surgery_k(n, t, k)
    return u_module_structure(build_A(c, kk, field))


def zero_surgery_homology(c: CFKComplex, k: int, field: Field | None = None) -> UModule:
    """Homology of the cone of ``v_k - h_k`` (untwisted coefficients)."""
    f = vh_sum(c, k, field)
    return u_module_structure(mapping_cone(f))


@dataclass(frozen=True)
class TwistedModule:
    """Homology of the twisted cone over the field of rational functions in T."""

    generic_rank: int  # dimension of the finite part over F(T)
    corank: int  # number of towers; nonzero means infinite rank
    per_grading: tuple | None  # ((grading, dim), ...) when the cone is graded
    field: str

    def to_dict(self) -> dict:
        return {
            "generic_rank": self.generic_rank,
            "corank": self.corank,
            "per_grading": None if self.per_grading is None else [list(x) for x in self.per_grading],
            "field": self.field,
        }


def twisted_map(c: CFKComplex, k: int, base: Field | None = None) -> ChainMap:
    """``v_k - T h_k`` over ``base(T)``."""
    K = rational_functions(_field(c, base))
    A = build_A(c, k, K)
    B = build_B(c, K)
    return map_v(c, k, A=A, B=B) + map_h(c, k, A=A, B=B).scaled(K.neg(K.T), label=f"-T*h{k}")


def zero_surgery_twisted(c: CFKComplex, k: int, base: Field | None = None) -> TwistedModule:
    f = twisted_map(c, k, base)
    mod = u_module_structure(mapping_cone(f))
    per = mod.finite_parts if f.degree() is not None else None
    return TwistedModule(mod.finite_rank, mod.corank, per, f.source.field.name)
