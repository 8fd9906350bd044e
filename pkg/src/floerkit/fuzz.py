"""Seeded random flip-valid complexes and the invariant suite run on them.

Complexes are direct sums of one *main* piece (a symmetric staircase, its
dual, or a single dot) with acyclic decorations (boxes and paired arrows).
Every piece is built with its flip, so the sum always satisfies the model
laws; the suite then re-checks everything from scratch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .analyzer import check_monotonicity, check_rank_identities, check_symmetry
from .homology import truncate, u_module_structure
from .model import Arrow, CFKComplex, Generator, parse_complex, serialize_complex, validate_complex
from .surgery import build_A, build_B, mapping_cone, vh_sum

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class FuzzSpec:
    seed: int
    count: int
    max_generators: int = 8
    width: int = 3

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("count must be positive")
        if self.max_generators < 1 or self.width < 0:
            raise ValueError("max_generators must be >= 1 and width >= 0")


class _Builder:
    def __init__(self):
        self.gens: list[Generator] = []
        self.arrows: list[Arrow] = []
        self.flip: dict[str, str] = {}
        self._n = 0

    def gen(self, a: int, m: int) -> str:
        name = f"g{self._n}"
        self._n += 1
        self.gens.append(Generator(name, a, Fraction(m)))
        return name

    def arrow(self, x, y, nw, nz, coeff=1):
        self.arrows.append(Arrow(x, y, nw, nz, coeff))

    def pair(self, x, y):
        self.flip[x] = y
        self.flip[y] = x


def _steps(rng: random.Random, budget: int, width: int) -> list[int]:
    """Palindromic step sizes: at most ``budget`` steps, each half summing to at most ``width``."""
    for _ in range(20):
        half = rng.randint(1, max(1, budget // 2))
        steps = [rng.randint(1, max(1, width)) for _ in range(half)]
        full = steps + steps[::-1]
        if sum(full) <= 2 * width and len(full) <= budget:
            return full
    return []


def _staircase(b: _Builder, steps: list[int], dual: bool):
    """Alternating staircase; ``steps`` lists horizontal then vertical lengths."""
    p = len(steps) // 2
    hs, vs = steps[0::2], steps[1::2]
    s = sum(hs)
    sign = -1 if dual else 1
    xs, ys = [], []
    a, m = s, 0
    xs.append(b.gen(sign * a, sign * m))
    for l in range(p):
        ya, ym = a - hs[l], m + 1 - 2 * hs[l]
        ys.append(b.gen(sign * ya, sign * ym))
        a, m = a - hs[l] - vs[l], m - 2 * hs[l]
        xs.append(b.gen(sign * a, sign * m))
    for l in range(p):
        if dual:
            b.arrow(xs[l], ys[l], hs[l], 0)
            b.arrow(xs[l + 1], ys[l], 0, vs[l])
        else:
            b.arrow(ys[l], xs[l], hs[l], 0)
            b.arrow(ys[l], xs[l + 1], 0, vs[l])
    for l in range(p + 1):
        b.flip[xs[l]] = xs[p - l]
    for l in range(p):
        b.flip[ys[l]] = ys[p - 1 - l]


def _box(b: _Builder, a: int, m: int):
    x = b.gen(0, m)
    y = b.gen(a, m - 1 + 2 * a)
    z = b.gen(-a, m - 1)
    w = b.gen(0, m - 2 + 2 * a)
    b.arrow(x, y, a, 0)
    b.arrow(x, z, 0, a)
    b.arrow(y, w, 0, a)
    b.arrow(z, w, a, 0, -1)
    b.flip[x] = x
    b.flip[w] = w
    b.pair(y, z)


def _paired(b: _Builder, a: int, m: int):
    x1, x2 = b.gen(0, m), b.gen(0, m)
    y1, y2 = b.gen(a, m - 1 + 2 * a), b.gen(-a, m - 1)
    b.arrow(x1, y1, a, 0)
    b.arrow(x2, y2, 0, a)
    b.pair(x1, x2)
    b.pair(y1, y2)


def generate_complex(seed: int, max_generators: int = 8, width: int = 3) -> CFKComplex:
    rng = random.Random(seed & SEED_MASK)
    b = _Builder()
    room = max_generators
    kind = rng.choice(["dot", "staircase", "dual"]) if room >= 3 and width > 0 else "dot"
    steps = _steps(rng, room - 1, width) if kind != "dot" else []
    if steps and len(steps) + 1 <= room:
        _staircase(b, steps, kind == "dual")
    else:
        x = b.gen(0, 0)
        b.flip[x] = x
    room = max_generators - len(b.gens)
    while room >= 4 and width > 0 and rng.random() < 0.6:
        a = rng.randint(1, width)
        m = rng.randint(-2, 2)
        (_box if rng.random() < 0.6 else _paired)(b, a, m)
        room = max_generators - len(b.gens)
    return CFKComplex(f"fuzz-{seed & SEED_MASK}", tuple(b.gens), tuple(b.arrows),
                      "F2", None, tuple(b.flip.items()))


@dataclass
class CaseResult:
    seed: int
    generators: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def invariant_suite(c: CFKComplex, ks=range(-4, 5)) -> list[str]:
    """Every model, homology and identity check; returns failure messages."""
    rep = validate_complex(c)
    if not rep.ok:
        return [f"validate: {sorted(rep.codes())}"]
    out = []
    if parse_complex(serialize_complex(c)) != c:
        out.append("serialization does not round-trip")
    out.extend(check_symmetry(c))
    for r in check_rank_identities(c):
        if not r.passed:
            out.append(f"{r.name}: {r.left} != {r.right}")
    out.extend(check_monotonicity(c, ks))
    for p in (build_A(c, 0), build_B(c)):
        base = u_module_structure(p)
        later = u_module_structure(p, base.certificate.delta0 + 5)
        if base != later:
            out.append(f"{p.label}: structure changes under a deeper truncation")
    cone = mapping_cone(vh_sum(c, 0))
    for delta in range(3):
        if truncate(cone, delta).check_square_zero():
            out.append(f"cone differential does not square to zero at level {delta}")
    return out


def run_fuzz(spec: FuzzSpec, field: str = "F2") -> list[CaseResult]:
    results = []
    for i in range(spec.count):
        s = (spec.seed + i) & SEED_MASK
        c = generate_complex(s, spec.max_generators, spec.width).with_field(field)
        try:
            fails = invariant_suite(c)
        except Exception as e:  # findings, not crashes
            fails = [f"{type(e).__name__}: {e}"]
        results.append(CaseResult(s, len(c.generators), fails))
    return results
