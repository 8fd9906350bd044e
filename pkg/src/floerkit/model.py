"""Input data model for finitely generated CFK-infinity complexes.

A generator ``x`` stands for its whole U-orbit ``[x, i, i + A(x)]``, which
has Maslov grading ``M(x) + 2i``.  An arrow ``x -> y`` with basepoint counts
``(nw, nz)`` contributes ``[y, i - nw, j - nz]`` to the differential of
``[x, i, j]``.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .complexes import FiniteComplex, PlusComplex, Tower, TowerArrow
from .fields import F2, Field, field_by_name


class ParseError(ValueError):
    """The document is not well-formed or does not match the input schema."""


class SchemaError(ParseError):
    """The document is well-formed but violates a schema-level constraint."""


class ValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(v.message for v in report.violations[:5])
        super().__init__(f"complex {report.name!r} is invalid: {lines}")


class FlipRequiredError(ValueError):
    pass


class RegionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    name: str
    alexander: int
    maslov: Fraction


@dataclass(frozen=True, order=True)
class Arrow:
    src: str
    dst: str
    nw: int
    nz: int
    coeff: int = 1


@dataclass(frozen=True)
class CFKComplex:
    name: str
    generators: tuple[Generator, ...]
    arrows: tuple[Arrow, ...]
    field: str = "F2"
    spinc: str | None = None
    flip: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(sorted(self.generators)))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))
        if self.flip is not None:
            object.__setattr__(self, "flip", tuple(sorted(self.flip)))

    @property
    def coefficients(self) -> Field:
        return field_by_name(self.field)

    @property
    def gen(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    @property
    def flip_map(self) -> dict[str, str] | None:
        return None if self.flip is None else dict(self.flip)

    @property
    def base(self) -> Generator:
        """Reference generator for relative gradings: highest Maslov grading, then name."""
        return min(self.generators, key=lambda g: (-g.maslov, g.name))

    def rel_maslov(self, name: str) -> int:
        d = self.gen[name].maslov - self.base.maslov
        if d.denominator != 1:
            raise ValidationError(validate_complex(self))
        return int(d)

    def coeff(self, a: Arrow):
        return self.coefficients.coerce(a.coeff)

    def with_field(self, name: str) -> "CFKComplex":
        field_by_name(name)
        return CFKComplex(self.name, self.generators, self.arrows, name.upper(), self.spinc, self.flip)

    def alexander_range(self) -> tuple[int, int]:
        a = [g.alexander for g in self.generators]
        return min(a), max(a)


# -- parsing / serialisation -------------------------------------------------

def _need(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    v = obj[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ParseError(f"{where}.{key}: expected integer, got {v!r}")
    if kind is str and not isinstance(v, str):
        raise ParseError(f"{where}.{key}: expected string, got {v!r}")
    if kind is list and not isinstance(v, list):
        raise ParseError(f"{where}.{key}: expected array, got {type(v).__name__}")
    return v


def parse_complex(document: str) -> CFKComplex:
    """Parse a JSON complex document (not yet validated)."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("top level: expected an object")
    name = _need(data, "name", str, "top level")
    fld = data.get("field", "F2")
    if fld not in ("F2", "Q"):
        raise ParseError(f"top level.field: expected 'F2' or 'Q', got {fld!r}")
    spinc = data.get("spinc")
    if spinc is not None and not isinstance(spinc, str):
        raise ParseError("top level.spinc: expected string")

    gens = []
    seen = set()
    for n, g in enumerate(_need(data, "generators", list, "top level")):
        where = f"generators[{n}]"
        if not isinstance(g, dict):
            raise ParseError(f"{where}: expected an object")
        gname = _need(g, "name", str, where)
        if gname in seen:
            raise SchemaError(f"{where}: duplicate generator name {gname!r}")
        seen.add(gname)
        alex = _need(g, "alexander", int, where)
        m = _need(g, "maslov", list, where)
        if len(m) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in m):
            raise ParseError(f"{where}.maslov: expected [numerator, denominator] integers")
        if m[1] == 0:
            raise ParseError(f"{where}.maslov: zero denominator")
        gens.append(Generator(gname, alex, Fraction(m[0], m[1])))
    if not gens:
        raise SchemaError("top level.generators: at least one generator is required")

    arrows = []
    for n, a in enumerate(data.get("arrows", [])):
        where = f"arrows[{n}]"
        if not isinstance(a, dict):
            raise ParseError(f"{where}: expected an object")
        src = _need(a, "from", str, where)
        dst = _need(a, "to", str, where)
        for endpoint in (src, dst):
            if endpoint not in seen:
                raise SchemaError(f"{where}: unknown generator {endpoint!r}")
        nw = _need(a, "nw", int, where)
        nz = _need(a, "nz", int, where)
        coeff = a.get("coeff", 1)
        if isinstance(coeff, bool) or not isinstance(coeff, int):
            raise ParseError(f"{where}.coeff: expected integer")
        arrows.append(Arrow(src, dst, nw, nz, coeff))

    flip = data.get("flip")
    if flip is not None:
        if not isinstance(flip, dict):
            raise ParseError("top level.flip: expected an object")
        for k, v in flip.items():
            if not isinstance(v, str):
                raise ParseError(f"flip.{k}: expected string")
            for endpoint in (k, v):
                if endpoint not in seen:
                    raise SchemaError(f"flip: unknown generator {endpoint!r}")
        flip = tuple(flip.items())
    return CFKComplex(name, tuple(gens), tuple(arrows), fld, spinc, flip)


def complex_to_dict(c: CFKComplex) -> dict:
    out: dict = {"name": c.name, "field": c.field}
    if c.spinc is not None:
        out["spinc"] = c.spinc
    out["generators"] = [
        {"name": g.name, "alexander": g.alexander, "maslov": [g.maslov.numerator, g.maslov.denominator]}
        for g in c.generators
    ]
    out["arrows"] = [
        {"from": a.src, "to": a.dst, "nw": a.nw, "nz": a.nz, "coeff": a.coeff} for a in c.arrows
    ]
    if c.flip is not None:
        out["flip"] = dict(c.flip)
    return out


def serialize_complex(c: CFKComplex) -> str:
    return json.dumps(complex_to_dict(c), indent=2) + "\n"


def load_complex(path) -> CFKComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    items: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    name: str
    violations: tuple[Violation, ...] = ()
    flip_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


def _flip_signs(c: CFKComplex, mirror: dict) -> tuple[dict | None, list[Violation]]:
    """Solve for generator signs making the flip a chain map over Q.

    ``mirror`` maps each arrow to its flipped partner.  Over F2 all signs
    are 1.  Over Q we need ``c(x->y) e(y) = e(x) c'(ix->iy)``.
    """
    F = c.coefficients
    if F is F2:
        return {g.name: 1 for g in c.generators}, []
    adj = defaultdict(list)
    bad = []
    for a, b in mirror.items():
        ratio = Fraction(b.coeff, a.coeff)
        if ratio not in (1, -1):
            bad.append(Violation("flip-coefficient",
                                 f"flipped arrow {b.src}->{b.dst} has coefficient {b.coeff}, "
                                 f"not +-{a.coeff} as on {a.src}->{a.dst}", (a, b)))
            continue
        adj[a.src].append((a.dst, int(ratio)))
        adj[a.dst].append((a.src, int(ratio)))
    if bad:
        return None, bad
    signs: dict[str, int] = {}
    for g in c.generators:
        if g.name in signs:
            continue
        signs[g.name] = 1
        queue = deque([g.name])
        while queue:
            x = queue.popleft()
            for y, r in adj[x]:
                want = signs[x] * r
                if y not in signs:
                    signs[y] = want
                    queue.append(y)
                elif signs[y] != want:
                    return None, [Violation("flip-sign",
                                            f"no sign assignment makes the flip a chain map (conflict at {y!r})",
                                            (x, y))]
    return signs, []


@lru_cache(maxsize=512)
def validate_complex(c: CFKComplex) -> ValidationReport:
    """Check gradings, the filtration, d^2 = 0 and the flip laws."""
    F = c.coefficients
    v: list[Violation] = []
    names = [g.name for g in c.generators]
    for name, n in Counter(names).items():
        if n > 1:
            v.append(Violation("duplicate-generator", f"generator {name!r} appears {n} times", (name,)))
    gen = c.gen
    base = c.base
    for g in c.generators:
        if (g.maslov - base.maslov).denominator != 1:
            v.append(Violation("maslov-fraction",
                               f"M({g.name}) - M({base.name}) = {g.maslov - base.maslov} is not an integer",
                               (g.name,)))
    for a, n in Counter(c.arrows).items():
        if n > 1:
            v.append(Violation("duplicate-arrow", f"arrow {a.src}->{a.dst} ({a.nw},{a.nz}) repeated", (a,)))

    good_arrows = []
    for a in c.arrows:
        if a.src not in gen or a.dst not in gen:
            missing = a.src if a.src not in gen else a.dst
            v.append(Violation("unknown-generator", f"arrow refers to unknown generator {missing!r}", (a,)))
            continue
        ok = True
        if a.nw < 0 or a.nz < 0:
            v.append(Violation("negative-count", f"arrow {a.src}->{a.dst} has negative basepoint count", (a,)))
            ok = False
        if F.is_zero(F.coerce(a.coeff)):
            v.append(Violation("zero-coefficient",
                               f"arrow {a.src}->{a.dst} has coefficient {a.coeff} = 0 in {F.name}", (a,)))
            ok = False
        x, y = gen[a.src], gen[a.dst]
        if x.alexander - y.alexander != a.nz - a.nw:
            v.append(Violation("alexander",
                               f"arrow {a.src}->{a.dst}: A({a.src}) - A({a.dst}) = {x.alexander - y.alexander}"
                               f" but nz - nw = {a.nz - a.nw}", (a,)))
            ok = False
        if x.maslov - y.maslov != 1 - 2 * a.nw:
            v.append(Violation("maslov",
                               f"arrow {a.src}->{a.dst}: M({a.src}) - M({a.dst}) = {x.maslov - y.maslov}"
                               f" but 1 - 2nw = {1 - 2 * a.nw}", (a,)))
            ok = False
        if ok:
            good_arrows.append(a)

    # d^2 = 0, bidegree by bidegree
    out = defaultdict(list)
    for a in good_arrows:
        out[a.src].append(a)
    for x in names:
        acc: dict = {}
        for a in out[x]:
            for b in out[a.dst]:
                key = (b.dst, a.nw + b.nw, a.nz + b.nz)
                val = F.add(acc.get(key, F.zero), F.mul(F.coerce(a.coeff), F.coerce(b.coeff)))
                acc[key] = val
        for (z, nw, nz), val in sorted(acc.items()):
            if not F.is_zero(val):
                v.append(Violation("d-squared",
                                   f"d^2 != 0 from {x!r} to {z!r} at bidegree ({nw},{nz})", (x, z, nw, nz)))

    flip = c.flip_map
    if flip is not None:
        v.extend(_check_flip(c, flip, good_arrows))
    return ValidationReport(c.name, tuple(v), flip_checked=flip is not None)


def _check_flip(c: CFKComplex, flip: dict, arrows: list[Arrow]) -> list[Violation]:
    gen = c.gen
    v = []
    missing = sorted(set(gen) - set(flip))
    if missing:
        v.append(Violation("flip-domain", f"flip is undefined on {missing}", tuple(missing)))
        return v
    for x, y in sorted(flip.items()):
        if y not in gen:
            v.append(Violation("flip-domain", f"flip sends {x!r} to unknown {y!r}", (x, y)))
            return v
    for x, y in sorted(flip.items()):
        if flip[y] != x:
            v.append(Violation("flip-involution", f"flip(flip({x!r})) = {flip[y]!r}", (x,)))
        gx, gy = gen[x], gen[y]
        if gy.alexander != -gx.alexander:
            v.append(Violation("flip-alexander", f"A(flip({x})) = {gy.alexander}, expected {-gx.alexander}", (x,)))
        if gy.maslov != gx.maslov - 2 * gx.alexander:
            v.append(Violation("flip-maslov",
                               f"M(flip({x})) = {gy.maslov}, expected {gx.maslov - 2 * gx.alexander}", (x,)))
    pool = defaultdict(list)
    for a in arrows:
        pool[(a.src, a.dst, a.nw, a.nz)].append(a)
    mirror = {}
    for a in arrows:
        partners = pool.get((flip[a.src], flip[a.dst], a.nz, a.nw), [])
        if not partners:
            v.append(Violation("flip-arrow",
                               f"arrow {a.src}->{a.dst} ({a.nw},{a.nz}) has no flipped partner "
                               f"{flip[a.src]}->{flip[a.dst]} ({a.nz},{a.nw})", (a,)))
            continue
        b = partners[0]
        mirror[a] = b
        if c.coefficients is F2 and (a.coeff - b.coeff) % 2:
            v.append(Violation("flip-coefficient", f"flipped arrow of {a.src}->{a.dst} changes coefficient", (a, b)))
    if not v:
        _, sv = _flip_signs(c, mirror)
        v.extend(sv)
    return v


def require_valid(c: CFKComplex) -> None:
    rep = validate_complex(c)
    if not rep.ok:
        raise ValidationError(rep)


def flip_signs(c: CFKComplex) -> dict[str, int]:
    """Signs ``e(x)`` so that ``[x,i,j] -> e(x) [flip(x), j, i]`` is a chain map."""
    if c.flip is None:
        raise FlipRequiredError(f"flip involution required (complex {c.name!r} has none)")
    require_valid(c)
    flip = c.flip_map
    pool = {(a.src, a.dst, a.nw, a.nz): a for a in c.arrows}
    mirror = {a: pool[(flip[a.src], flip[a.dst], a.nz, a.nw)] for a in c.arrows}
    signs, _ = _flip_signs(c, mirror)
    return signs


def apply_flip(c: CFKComplex, arrows) -> list[Arrow]:
    """Image of arrows under the flip (endpoints flipped, basepoint counts swapped)."""
    flip = c.flip_map
    return [Arrow(flip[a.src], flip[a.dst], a.nz, a.nw, a.coeff) for a in arrows]


# -- regions -------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """A region in the (i, j) plane.

    ``half-i``: i >= a; ``half-j``: j >= b; ``union``: i >= a or j >= b;
    ``intersection``: i >= a and j >= b; ``point``: i = a, j = b;
    ``band``: a <= i <= b.
    """

    kind: str
    a: int | None = None
    b: int | None = None

    def contains(self, i: int, j: int) -> bool:
        k, a, b = self.kind, self.a, self.b
        if k == "half-i":
            return i >= a
        if k == "half-j":
            return j >= b
        if k == "union":
            return i >= a or j >= b
        if k == "intersection":
            return i >= a and j >= b
        if k == "point":
            return i == a and j == b
        if k == "band":
            return a <= i <= b
        raise RegionError(f"unknown region kind {k!r}")

    @property
    def upward_closed(self) -> bool:
        return self.kind in ("half-i", "half-j", "union", "intersection")

    def bottom(self, alexander: int) -> int:
        """Lowest tower index of a generator with this Alexander grading (upward-closed kinds)."""
        k, a, b = self.kind, self.a, self.b
        if k == "half-i":
            return a
        if k == "half-j":
            return b - alexander
        if k == "union":
            return min(a, b - alexander)
        if k == "intersection":
            return max(a, b - alexander)
        raise RegionError(f"region {self} has no tower bottoms")

    def __str__(self):
        k, a, b = self.kind, self.a, self.b
        return {
            "half-i": f"{{i>={a}}}", "half-j": f"{{j>={b}}}", "union": f"{{i>={a} or j>={b}}}",
            "intersection": f"{{i>={a}, j>={b}}}", "point": f"{{({a},{b})}}", "band": f"{{{a}<=i<={b}}}",
        }.get(k, k)


def HalfPlaneI(a: int) -> Region:
    return Region("half-i", a=a)


def HalfPlaneJ(b: int) -> Region:
    return Region("half-j", b=b)


def Union(a: int, b: int) -> Region:
    return Region("union", a, b)


def Intersection(a: int, b: int) -> Region:
    return Region("intersection", a, b)


def Point(a: int, b: int) -> Region:
    return Region("point", a, b)


def Band(a: int, b: int) -> Region:
    return Region("band", a, b)


def _check_region(r: Region) -> None:
    params = {"half-i": ("a",), "half-j": ("b",)}.get(r.kind, ("a", "b"))
    if r.kind not in ("half-i", "half-j", "union", "intersection", "point", "band"):
        raise RegionError(f"region kind {r.kind!r} is not admissible")
    for p in params:
        if not isinstance(getattr(r, p), int):
            raise RegionError(f"region {r.kind}: parameter {p} must be an integer")
    if r.kind == "band" and r.a > r.b:
        raise RegionError(f"band {r.a} <= i <= {r.b} is empty")


def subquotient(c: CFKComplex, r: Region, field: Field | None = None):
    """Subquotient complex of CFK-infinity supported in region ``r``.

    Upward-closed regions give a :class:`PlusComplex` of U-towers (one per
    generator).  Point and band regions give a :class:`FiniteComplex`.
    """
    _check_region(r)
    require_valid(c)
    F = field or c.coefficients
    gen = c.gen
    if r.upward_closed:
        towers = tuple(Tower(g.name, r.bottom(g.alexander), c.rel_maslov(g.name)) for g in c.generators)
        arrows = tuple(TowerArrow(a.src, a.dst, a.nw, F.coerce(a.coeff)) for a in c.arrows)
        return PlusComplex(F, towers, arrows, label=f"{c.name}{r}", base=c.base.name)

    if r.kind == "point":
        keys = [(g.name, r.a) for g in c.generators if r.a + g.alexander == r.b]
    else:
        keys = [(g.name, i) for g in c.generators for i in range(r.a, r.b + 1)]
    keyset = set(keys)
    diff = {}
    for x, i in keys:
        vec: dict = {}
        for a in c.arrows:
            if a.src != x:
                continue
            tgt = (a.dst, i - a.nw)
            if tgt in keyset and r.contains(tgt[1], tgt[1] + gen[a.dst].alexander):
                val = F.add(vec.get(tgt, F.zero), F.coerce(a.coeff))
                if F.is_zero(val):
                    vec.pop(tgt, None)
                else:
                    vec[tgt] = val
        if vec:
            diff[(x, i)] = vec
    grading = {(x, i): c.rel_maslov(x) + 2 * i for x, i in keys}
    return FiniteComplex(F, tuple(sorted(keys)), grading, diff, label=f"{c.name}{r}")
