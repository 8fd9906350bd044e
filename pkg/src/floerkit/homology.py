"""Exact homology of plus-complexes.

Two independent routes are used and cross-checked:

* **Truncation.**  ``P^delta = ker U^(delta+1)`` is a finite subcomplex.  If
  ``H(P) = T^c + F`` then ``dim H(P^delta) = c (delta + 1) + 2 dim F`` as soon
  as ``U^(delta+1)`` kills ``F`` (long exact sequence of
  ``0 -> P^delta -> P -> P -> 0``).  Three consecutive levels certify the
  tower count ``c``.
* **Grading windows.**  For Z-graded complexes every graded piece of ``P`` is
  finite, so ``H_n(P)`` is computed exactly, grading by grading, together
  with the U-action.  Above the *zone* (all towers present) the complex is
  periodic and ``U`` is an isomorphism, which bounds every search.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .complexes import ChainLawError, ChainMap, FiniteComplex, PlusComplex
from .linalg import Echelon, axpy, kernel, quotient_rank, rank, span


class StabilizationError(RuntimeError):
    """Truncated homology failed to stabilise; never answered silently."""

    def __init__(self, message: str, dims: tuple = ()):
        self.dims = tuple(dims)
        super().__init__(f"unstabilized: {message} (dims={list(self.dims)})")


# -- truncation route -------------------------------------------------------------

def truncate(p: PlusComplex, delta: int) -> FiniteComplex:
    """The subcomplex of elements within ``delta`` steps of their tower bottom."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    keys = []
    for t in p.towers:
        keys.extend((t.name, i) for i in range(t.bottom, t.bottom + delta + 1))
    keys.sort()
    keyset = set(keys)
    diff = {}
    for k in keys:
        b = p.boundary(k)
        if b:
            assert keyset.issuperset(b), "kernel of U^(delta+1) must be a subcomplex"
            diff[k] = b
    grading = {k: p.grading(k) for k in keys}
    return FiniteComplex(p.field, tuple(keys), grading, diff, label=f"{p.label}^{delta}")


def truncated_homology(f: FiniteComplex) -> dict:
    """Homology dimension at each grading (key ``None`` for ungraded complexes)."""
    F = f.field
    by_grade: dict = {}
    for k in f.basis:
        by_grade.setdefault(f.grading[k], []).append(k)
    graded = None not in by_grade
    if not graded:
        by_grade = {None: list(f.basis)}
    ranks = {}
    for g, keys in by_grade.items():
        ranks[g] = rank(F, [f.boundary(k) for k in keys])
    out = {}
    for g, keys in by_grade.items():
        incoming = ranks.get(g + 1, 0) if graded else ranks[g]
        d = len(keys) - ranks[g] - incoming
        if d:
            out[g] = d
    return dict(sorted(out.items(), key=lambda kv: (kv[0] is None, kv[0])))


def total_truncated_dim(p: PlusComplex, delta: int) -> int:
    return sum(truncated_homology(truncate(p, delta)).values())


# -- grading windows ----------------------------------------------------------------

class _Level:
    __slots__ = ("chains", "cycles", "bounds", "echelon", "reps")

    def __init__(self, chains, cycles, bounds, echelon, reps):
        self.chains = chains
        self.cycles = cycles
        self.bounds = bounds
        self.echelon = echelon
        self.reps = reps

    def echelon_bounds(self) -> Echelon:
        return span(self.echelon.F, self.bounds)


class HomologyWindow:
    """Lazily computed graded homology of a homogeneous plus-complex.

    Homology classes are addressed by coordinate keys ``(n, j)``: the
    ``j``-th chosen representative in grading ``n``.
    """

    def __init__(self, p: PlusComplex):
        if not p.is_homogeneous():
            raise ValueError(f"{p.label}: grading windows need a homogeneous complex")
        self.p = p
        self.F = p.field
        starts = p.start_gradings()
        self.lo = min(starts)
        self.zone = max(starts) + 1
        # finite summands live in [lo, zone), so U^nb kills them
        self.nb = (self.zone - self.lo) // 2 + 2
        self._levels: dict[int, _Level] = {}

    def level(self, n: int) -> _Level:
        lv = self._levels.get(n)
        if lv is not None:
            return lv
        p, F = self.p, self.F
        chains = p.elements_at(n) if n >= self.lo else []
        cycles = kernel(F, {k: p.boundary(k) for k in chains})
        above = p.elements_at(n + 1) if n + 1 >= self.lo else []
        bounds = [p.boundary(k) for k in above]
        ech = Echelon(F)
        for b in bounds:
            ech.insert(b, {})
        reps = []
        for z in cycles:
            new, _ = ech.insert(z, {len(reps): F.one})
            if new:
                reps.append(z)
        lv = _Level(chains, cycles, bounds, ech, reps)
        self._levels[n] = lv
        return lv

    def dim(self, n: int) -> int:
        return len(self.level(n).reps) if n >= self.lo else 0

    def keys(self, n: int) -> list:
        return [(n, j) for j in range(self.dim(n))]

    def rep(self, key) -> dict:
        n, j = key
        return self.level(n).reps[j]

    def coords(self, n: int, cycle: dict) -> dict:
        """Coordinates of a cycle of grading ``n`` in the chosen basis of H_n."""
        if not cycle:
            return {}
        F = self.F
        residual, combo = self.level(n).echelon.reduce(cycle, {})
        if residual:
            raise ChainLawError(f"{self.p.label}: vector in grading {n} is not a cycle")
        return {(n, j): F.neg(c) for j, c in combo.items() if not F.is_zero(c)}

    def coords_mixed(self, vec: dict) -> dict:
        """Coordinates of a cycle whose terms may span several gradings."""
        parts: dict = {}
        for k, c in vec.items():
            parts.setdefault(self.p.grading(k), {})[k] = c
        out: dict = {}
        for n, part in parts.items():
            out.update(self.coords(n, part))
        return out

    def u_coords(self, key, power: int = 1) -> dict:
        n, _ = key
        if n - 2 * power < self.lo:
            return {}
        return self.coords(n - 2 * power, self.p.u_vec(self.rep(key), power))

    def tower_count(self) -> int:
        return self.dim(self.zone) + self.dim(self.zone + 1)

    def towers_at(self, n: int) -> int:
        """Number of towers whose bottom grading is at most ``n`` (same parity)."""
        if n >= self.zone:
            return self.dim(n)
        m = self.nb + max(0, (self.zone - n + 1) // 2)
        src = self.level(n + 2 * m)
        images = [self.p.u_vec(z, m) for z in src.cycles]
        return quotient_rank(self.F, images, self.level(n).echelon_bounds())

    # image of U^mm; for mm >= nb this is the divisible part
    @cached_property
    def divisible(self) -> Echelon:
        e = Echelon(self.F)
        for n in range(self.lo, self.zone):
            for key in self.keys(n + 2 * self.nb):
                e.insert(self.u_coords(key, self.nb))
        return e

    def mod_divisible(self, vec: dict) -> dict:
        low = {k: c for k, c in vec.items() if k[0] < self.zone}
        return self.divisible.reduce(low)[0]

    def finite_rank(self) -> int:
        return sum(self.dim(n) for n in range(self.lo, self.zone)) - self.divisible.rank

    def kernel_of_u(self, m: int) -> list[dict]:
        """Basis (in coordinates) of the classes killed by U^m."""
        out = []
        for n in range(self.lo, self.zone + 2 * m + 2):
            imgs = {key: self.u_coords(key, m) for key in self.keys(n)}
            out.extend(kernel(self.F, imgs))
        return out


# -- U-module structure ---------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    delta0: int
    dims: tuple[int, int, int]

    @property
    def step(self) -> int:
        return self.dims[1] - self.dims[0]

    @property
    def residual(self) -> int:
        return self.dims[0] - self.step * (self.delta0 + 1)


@dataclass(frozen=True)
class UModule:
    """Homology of a plus-complex: U-towers plus a finite part.

    ``towers`` holds the relative grading of each tower's bottom element and
    ``finite_parts`` pairs ``(relative grading, dimension)``.  Gradings are
    ``None`` when the underlying complex is not Z-graded.
    """

    towers: tuple = ()
    finite_parts: tuple = ()
    base: str | None = None
    certificate: Certificate | None = dc_field(default=None, compare=False)

    @property
    def corank(self) -> int:
        return len(self.towers)

    @property
    def finite_rank(self) -> int:
        return sum(d for _, d in self.finite_parts)

    @property
    def rank_pair(self) -> tuple[int, int]:
        return (self.corank, self.finite_rank)

    @property
    def is_zero(self) -> bool:
        return self.rank_pair == (0, 0)

    def to_dict(self) -> dict:
        return {
            "corank": self.corank,
            "towers": list(self.towers),
            "finite_parts": [list(fp) for fp in self.finite_parts],
            "base": self.base,
        }


def default_delta0(p: PlusComplex) -> int:
    """Starting truncation level.  Any value works: the certificate decides."""
    bottoms = [t.bottom for t in p.towers]
    spread = max(bottoms) - min(bottoms)
    if p.delta_hint is not None:
        return p.delta_hint + spread + 2
    if p.is_homogeneous():
        starts = p.start_gradings()
        width = (max(starts) - min(starts) + 1) // 2
    else:
        width = 2 * max((abs(a.shift) for a in p.arrows), default=0) * len(p.towers)
    return width + spread + 2


def certify(p: PlusComplex, delta0: int) -> Certificate:
    dims = tuple(total_truncated_dim(p, delta0 + s) for s in range(3))
    if dims[1] - dims[0] != dims[2] - dims[1]:
        raise StabilizationError(f"{p.label}: truncated dimensions are not in arithmetic progression", dims)
    cert = Certificate(delta0, dims)
    if cert.residual < 0 or cert.residual % 2:
        raise StabilizationError(f"{p.label}: residual {cert.residual} is not a doubled finite dimension", dims)
    return cert


def u_module_structure(p: PlusComplex, delta0: int | None = None) -> UModule:
    """Tower/finite decomposition of H(p), certified by truncation."""
    if delta0 is None:
        delta0 = default_delta0(p)
    cert = certify(p, delta0)
    if not p.is_homogeneous():
        fin = cert.residual // 2
        return UModule((None,) * cert.step, ((None, fin),) if fin else (), p.base, cert)

    w = HomologyWindow(p)
    towers = []
    finite = []
    prev = {0: 0, 1: 0}
    for n in range(w.lo, w.zone + 2):
        t = w.towers_at(n)
        towers.extend([n] * (t - prev[n % 2]))
        prev[n % 2] = t
        extra = w.dim(n) - t
        if extra:
            finite.append((n, extra))
    mod = UModule(tuple(sorted(towers)), tuple(finite), p.base, cert)
    if mod.corank != cert.step or 2 * mod.finite_rank != cert.residual or mod.finite_rank != w.finite_rank():
        raise StabilizationError(
            f"{p.label}: truncation (corank {cert.step}, residual {cert.residual}) disagrees with "
            f"graded computation (corank {mod.corank}, finite {mod.finite_rank})", cert.dims)
    return mod


# -- induced maps -------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyMap:
    """Map induced on homology by a U-equivariant chain map."""

    label: str
    source: UModule
    target: UModule
    degree: int | None
    matrix: dict  # source coordinate key -> target coordinates (window of low gradings)
    rank_pair: tuple[int, int]  # image
    kernel_pair: tuple[int, int]
    cokernel_pair: tuple[int, int]

    @property
    def injective(self) -> bool:
        return self.kernel_pair == (0, 0)

    @property
    def surjective(self) -> bool:
        return self.cokernel_pair == (0, 0)

    @property
    def zero(self) -> bool:
        return self.rank_pair == (0, 0)

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


class MapAnalysis:
    """Linear algebra for an induced map between graded homology windows.

    The map itself may be inhomogeneous (a sum of homogeneous pieces, as for
    ``v + h`` away from k = 0); only source and target must be Z-graded.
    """

    def __init__(self, m: ChainMap, src: HomologyWindow | None = None, tgt: HomologyWindow | None = None):
        self.m = m
        self.src = src or HomologyWindow(m.source)
        self.tgt = tgt or HomologyWindow(m.target)
        self.F = m.source.field
        self._cache: dict = {}
        degs = set()
        for a in m.entries:
            degs.add(m.target.tower(a.dst).grading - 2 * a.shift - m.source.tower(a.src).grading)
        self.degrees = degs or {0}

    def image(self, key) -> dict:
        v = self._cache.get(key)
        if v is None:
            v = self.tgt.coords_mixed(self.m.apply_vec(self.src.rep(key)))
            self._cache[key] = v
        return v

    def image_vec(self, coords: dict) -> dict:
        out: dict = {}
        for k, c in coords.items():
            axpy(self.F, c, self.image(k), out)
        return out

    def _m0(self) -> int:
        spread = max(abs(d) for d in self.degrees) // 2
        return self.src.nb + self.tgt.nb + spread + 1

    def kernel_pair(self) -> tuple[int, int]:
        m0 = self._m0()
        dims = []
        for m in (m0, m0 + 1, m0 + 2):
            basis = self.src.kernel_of_u(m)
            dims.append(len(basis) - rank(self.F, [self.image_vec(x) for x in basis]))
        if dims[1] - dims[0] != dims[2] - dims[1]:
            raise StabilizationError(f"{self.m.label}: kernel did not stabilise", dims)
        r = dims[1] - dims[0]
        self._kernel_top = (m0 + 2, r)
        return (r, dims[0] - r * m0)

    def _kernel_basis(self) -> list[dict]:
        m = self._m0() + 2
        basis = self.src.kernel_of_u(m)
        rel = kernel(self.F, {i: self.image_vec(x) for i, x in enumerate(basis)})
        out = []
        for combo in rel:
            v: dict = {}
            for i, c in combo.items():
                axpy(self.F, c, basis[i], v)
            out.append(v)
        return out

    def pairs(self) -> tuple[tuple, tuple, tuple]:
        kt, kf = self.kernel_pair()
        cs = self.src.tower_count()
        ct = self.tgt.tower_count()
        img_t = cs - kt
        ker_in_fin = rank(self.F, [self.src.mod_divisible(v) for v in self._kernel_basis()])
        img_f = self.src.finite_rank() - ker_in_fin
        fbar = []
        for n in range(self.src.lo, self.src.zone):
            for key in self.src.keys(n):
                fbar.append(self.tgt.mod_divisible(self.image(key)))
        cok_f = self.tgt.finite_rank() - rank(self.F, fbar)
        return (img_t, img_f), (kt, kf), (ct - img_t, cok_f)

    def graded_image(self, n: int) -> Echelon:
        """Image inside H_n of the target (homogeneous maps only)."""
        (d,) = self.degrees
        return span(self.F, [self.image(k) for k in self.src.keys(n - d)])

    def check_range(self) -> range:
        lo = self.tgt.lo
        hi = max([self.tgt.zone] + [self.src.zone + d for d in self.degrees]) + 4
        return range(lo, hi)


def induced_map(m: ChainMap, delta0: int | None = None) -> HomologyMap:
    """Induced map on homology with rank pairs of image, kernel and cokernel."""
    src_mod = u_module_structure(m.source, delta0)
    tgt_mod = u_module_structure(m.target, delta0)
    m.check_chain_law(src_mod.certificate.delta0 + 2)
    an = MapAnalysis(m)
    img, ker, cok = an.pairs()
    matrix = {}
    for n in range(an.src.lo, an.src.zone + 2):
        for key in an.src.keys(n):
            matrix[key] = an.image(key)
    return HomologyMap(m.label, src_mod, tgt_mod, m.degree(), matrix, img, ker, cok)


def image_contained(f: ChainMap, g: ChainMap) -> bool:
    """Whether im f_* is contained in im g_* (both homogeneous, same target)."""
    if f.target is not g.target:
        raise ValueError("maps must share a target")
    tgt = HomologyWindow(f.target)
    af = MapAnalysis(f, tgt=tgt)
    ag = MapAnalysis(g, tgt=tgt)
    for n in sorted(set(af.check_range()) | set(ag.check_range())):
        eg = ag.graded_image(n)
        for k in af.src.keys(n - next(iter(af.degrees))):
            if not eg.contains(af.image(k)):
                return False
    return True


def maps_equal(f: ChainMap, g: ChainMap) -> bool:
    """Whether f_* = g_* on homology."""
    if f.source is not g.source or f.target is not g.target:
        raise ValueError("maps must share source and target")
    src = HomologyWindow(f.source)
    tgt = HomologyWindow(f.target)
    af, ag = MapAnalysis(f, src, tgt), MapAnalysis(g, src, tgt)
    hi = max(af.check_range().stop, ag.check_range().stop)
    for n in range(src.lo, hi):
        for k in src.keys(n):
            if af.image(k) != ag.image(k):
                return False
    return True
