"""Acceptance criteria as runnable checks with a deterministic transcript."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .analyzer import (
    check_monotonicity,
    check_rank_identities,
    detect_fibered,
    hfk_table,
    top_alexander,
)
from .fields import rational_functions
from .fuzz import generate_complex
from .homology import StabilizationError, induced_map, u_module_structure
from .model import CFKComplex, parse_complex, validate_complex
from .surgery import (
    build_A,
    build_B,
    map_h,
    map_v,
    mapping_cone,
    twisted_map,
    vh_sum,
    zero_surgery_homology,
    zero_surgery_twisted,
)

VALID_FIXTURES = ("unknot", "trefoil", "figure-eight")
ALL_FIXTURES = VALID_FIXTURES + ("finite-base",)
FUZZ_SEED = 1
FUZZ_COUNT = 100


def fixture_text(name: str) -> str:
    return resources.files("floerkit").joinpath("fixtures", f"{name}.json").read_text()


@lru_cache(maxsize=None)
def fixture(name: str) -> CFKComplex:
    return parse_complex(fixture_text(name))


@lru_cache(maxsize=None)
def fuzzed() -> tuple[CFKComplex, ...]:
    return tuple(generate_complex(FUZZ_SEED + i) for i in range(FUZZ_COUNT))


@dataclass(frozen=True)
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.number} [{'PASS' if self.passed else 'FAIL'}] {self.title}: {self.detail}"


def _set_gen(doc, name, key, value):
    for g in doc["generators"]:
        if g["name"] == name:
            g[key] = value


def _set_arrow(doc, src, dst, key, value):
    for a in doc["arrows"]:
        if a["from"] == src and a["to"] == dst:
            a[key] = value


def _mutations():
    """(fixture, description, mutation, targeted violation code)."""

    def flip_entry(k, v):
        return lambda d: d["flip"].__setitem__(k, v)

    return [
        ("trefoil", "alexander of c raised", lambda d: _set_gen(d, "c", "alexander", 2), "alexander"),
        ("trefoil", "maslov of b raised", lambda d: _set_gen(d, "b", "maslov", [0, 1]), "maslov"),
        ("trefoil", "nw of b->c doubled", lambda d: _set_arrow(d, "b", "c", "nw", 2), "maslov"),
        ("trefoil", "nz of b->a doubled", lambda d: _set_arrow(d, "b", "a", "nz", 2), "alexander"),
        ("trefoil", "nw of b->c negative", lambda d: _set_arrow(d, "b", "c", "nw", -1), "negative-count"),
        ("trefoil", "flip of c sent to b", flip_entry("c", "b"), "flip-involution"),
        ("trefoil", "flip of b removed", lambda d: d["flip"].pop("b"), "flip-domain"),
        ("figure-eight", "flip fixes y and z", lambda d: d["flip"].update(y="y", z="z"), "flip-alexander"),
        ("figure-eight", "coefficient of x->y zero", lambda d: _set_arrow(d, "x", "y", "coeff", 0),
         "zero-coefficient"),
        ("figure-eight", "sign of z->w flipped over Q",
         lambda d: (d.__setitem__("field", "Q"), _set_arrow(d, "z", "w", "coeff", 1)), "d-squared"),
    ]


def criterion_1() -> tuple[bool, str]:
    ok = all(validate_complex(fixture(n)).ok for n in VALID_FIXTURES)
    hits = 0
    missed = []
    for name, desc, mutate, code in _mutations():
        doc = json.loads(fixture_text(name))
        mutate(doc)
        rep = validate_complex(parse_complex(json.dumps(doc)))
        if code in rep.codes():
            hits += 1
        else:
            missed.append(desc)
    detail = f"{len(VALID_FIXTURES)} fixtures valid={ok}; mutations caught {hits}/{len(_mutations())}"
    if missed:
        detail += f"; missed {missed}"
    return ok and not missed, detail


def criterion_2() -> tuple[bool, str]:
    u = fixture("unknot")
    z = zero_surgery_homology(u, 0)
    tw = zero_surgery_twisted(u, 0)
    ok = z.corank == 2 and not z.finite_parts and tw.generic_rank == 0 and tw.corank == 0
    return ok, f"untwisted rank pair {z.rank_pair}; twisted generic rank {tw.generic_rank}"


def _recompute_stable(p) -> bool:
    a = u_module_structure(p)
    b = u_module_structure(p, a.certificate.delta0 + 5)
    return a == b


def criterion_3() -> tuple[bool, str]:
    t = fixture("trefoil")
    dims = tuple(sum(v.values()) for v in hfk_table(t).values())
    d = top_alexander(t)
    fib = detect_fibered(t)
    zeros = all(zero_surgery_homology(t, k).is_zero for k in (1, -1))
    checks = {r.name: r for r in check_rank_identities(t)}
    eq41 = checks["ker-coker-v"]
    tri = checks["triangle"].passed
    complexes = [build_A(t, 0), build_B(t)] + [mapping_cone(vh_sum(t, k)) for k in (-1, 0, 1)]
    complexes.append(mapping_cone(map_v(t, d - 1)))
    stable = all(_recompute_stable(p) for p in complexes)
    ok = (dims == (1, 1, 1) and d == 1 and fib and zeros and eq41.passed
          and eq41.left == (0, 1) and tri and stable)
    return ok, (f"hfk {dims}; d={d}; fibered={fib}; cones at +-1 zero={zeros}; "
                f"ker-coker-v {eq41.left}={eq41.right}; triangle={tri}; oracle stable={stable}")


def criterion_4() -> tuple[bool, str]:
    f = fixture("figure-eight")
    dims = tuple(sum(v.values()) for v in hfk_table(f).values())
    fib = detect_fibered(f)
    checks = {r.name: r for r in check_rank_identities(f)}
    a, b = checks["ker-coker-v"], checks["ker-coker-v+h"]
    ok = dims == (1, 3, 1) and fib and a.passed and b.passed
    return ok, (f"hfk {dims}; fibered={fib}; ker-coker-v {a.left}={a.right}; "
                f"ker-coker-v+h {b.left}={b.right}")


def _suite():
    return [fixture(n) for n in ALL_FIXTURES] + list(fuzzed())


def criterion_5() -> tuple[bool, str]:
    bad = []
    for c in _suite():
        for v in check_monotonicity(c, range(-4, 5)):
            bad.append(f"{c.name}: {v}")
    detail = f"{len(_suite())} complexes, k in [-4, 4], violations {len(bad)}"
    if bad:
        detail += f"; first {bad[0]}"
    return not bad, detail


def criterion_6() -> tuple[bool, str]:
    bad = []
    for c in _suite():
        A, B = build_A(c, 0), build_B(c)
        v = induced_map(map_v(c, 0, A=A, B=B)).rank_pair
        h = induced_map(map_h(c, 0, A=A, B=B)).rank_pair
        if v != h:
            bad.append(f"{c.name}: {v} vs {h}")
    detail = f"{len(_suite())} complexes, violations {len(bad)}"
    if bad:
        detail += f"; first {bad[0]}"
    return not bad, detail


def criterion_7() -> tuple[bool, str]:
    count = 0
    bad = []
    for name in ALL_FIXTURES:
        c = fixture(name)
        d = top_alexander(c)
        plus = [build_A(c, k) for k in range(-4, 5)] + [build_B(c)]
        plus += [mapping_cone(vh_sum(c, k)) for k in (-1, 0, 1)]
        plus += [mapping_cone(twisted_map(c, k)) for k in (-1, 0, 1)]
        plus.append(mapping_cone(map_v(c, d - 1)))
        for p in plus:
            count += 1
            try:
                if not _recompute_stable(p):
                    bad.append(f"{name}/{p.label}: changes at delta0+5")
            except StabilizationError as e:
                bad.append(f"{name}/{p.label}: {e}")
    detail = f"{count} plus-complexes certified, failures {len(bad)}"
    if bad:
        detail += f"; first {bad[0]}"
    return not bad, detail


def criterion_8() -> tuple[bool, str]:
    parts = []
    ok = True
    for name in ALL_FIXTURES:
        c = fixture(name)
        d = top_alexander(c)
        zero_surgery_twisted(c, d - 1)  # generic rank is computed for every fixture
        K = rational_functions(c.coefficients)
        B = build_B(c, K)
        hb = u_module_structure(B)
        if hb.rank_pair != (0, 1):
            parts.append(f"{name} not-applicable (H(B+) pair {hb.rank_pair})")
            continue
        v = induced_map(map_v(c, d - 1, K, B=B))
        holds = v.surjective or v.zero
        ok = ok and holds
        parts.append(f"{name} {'pass' if holds else 'fail'} (image {v.rank_pair})")
    return ok, "; ".join(parts)


def criterion_9() -> tuple[bool, str]:
    first = transcript(CRITERIA_FOR_DETERMINISM)
    second = transcript(CRITERIA_FOR_DETERMINISM)
    fz = [str(generate_complex(FUZZ_SEED + i)) for i in range(FUZZ_COUNT)]
    fz2 = [str(generate_complex(FUZZ_SEED + i)) for i in range(FUZZ_COUNT)]
    ok = first == second and fz == fz2
    return ok, f"transcripts of criteria {list(CRITERIA_FOR_DETERMINISM)} identical={first == second}; fuzz corpus identical={fz == fz2}"


CRITERIA = {
    1: ("validation suite", criterion_1),
    2: ("unknot zero surgery", criterion_2),
    3: ("trefoil battery", criterion_3),
    4: ("figure-eight battery", criterion_4),
    5: ("monotonicity sweep", criterion_5),
    6: ("symmetry rank law", criterion_6),
    7: ("stabilization certificate", criterion_7),
    8: ("dichotomy check", criterion_8),
    9: ("determinism", criterion_9),
}

CRITERIA_FOR_DETERMINISM = (1, 2, 3, 4, 8)


def run_criterion(n: int) -> Outcome:
    title, fn = CRITERIA[n]
    try:
        passed, detail = fn()
    except Exception as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    return Outcome(n, title, passed, detail)


def transcript(numbers=tuple(CRITERIA)) -> str:
    return "".join(run_criterion(n).line() + "\n" for n in numbers)
