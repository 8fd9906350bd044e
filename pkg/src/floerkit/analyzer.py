"""Knot-detection checks built on the surgery cones.

Everything here is Floer-theoretic bookkeeping.  Topological hypotheses
(tautness, irreducibility, torsion of the Spin^c class) cannot be read off a
complex, so they enter as user assertions and every verdict lists the ones
it depends on.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .homology import image_contained, induced_map, maps_equal, truncated_homology, u_module_structure
from .model import CFKComplex, Point, require_valid, subquotient
from .surgery import build_A, build_B, map_h, map_v, mapping_cone, vh_sum, zero_surgery_homology, zero_surgery_twisted


def hfk_hat(c: CFKComplex, k: int) -> dict:
    """Graded dimensions of the knot Floer homology in Alexander grading ``k``."""
    require_valid(c)
    return truncated_homology(subquotient(c, Point(0, k)))


def hfk_table(c: CFKComplex) -> dict:
    """``{k: {grading: dim}}`` over the Alexander range, top grading first."""
    lo, hi = c.alexander_range()
    return {k: hfk_hat(c, k) for k in range(hi, lo - 1, -1)}


def top_alexander(c: CFKComplex) -> int:
    for k, dims in hfk_table(c).items():
        if dims:
            return k
    raise ValueError(f"{c.name}: knot Floer homology vanishes identically; not a knot complex")


def bottom_alexander(c: CFKComplex) -> int:
    nonzero = [k for k, dims in hfk_table(c).items() if dims]
    if not nonzero:
        raise ValueError(f"{c.name}: knot Floer homology vanishes identically; not a knot complex")
    return min(nonzero)


def hfk_top_dim(c: CFKComplex) -> int:
    return sum(hfk_hat(c, top_alexander(c)).values())


def detect_fibered(c: CFKComplex) -> bool:
    """Top knot Floer group one-dimensional (fibered when the complement is irreducible)."""
    return hfk_top_dim(c) == 1


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    left: object
    right: object
    passed: bool
    note: str = ""


def check_rank_identities(c: CFKComplex, d: int | None = None) -> list[IdentityCheck]:
    """Both sides of the kernel/cokernel rank identities and the exact triangle at ``d - 1``."""
    require_valid(c)
    if d is None:
        d = top_alexander(c)
    k = d - 1
    top = (0, sum(hfk_hat(c, d).values()))

    A, B = build_A(c, k), build_B(c)
    v = induced_map(map_v(c, k, A=A, B=B))
    right = _add(v.kernel_pair, v.cokernel_pair)
    out = [IdentityCheck("ker-coker-v", top, right, top == right,
                         "knot Floer rank at d versus ker + coker of v at d-1")]

    cone = zero_surgery_homology(c, k).rank_pair
    s = induced_map(vh_sum(c, k))
    right = _add(s.kernel_pair, s.cokernel_pair)
    note = "zero-surgery cone at d-1 versus ker + coker of v+h"
    if cone != right and cone[0] == right[0] and cone[1] < right[1]:
        note += "; finite parts glue in the extension"
    out.append(IdentityCheck("ker-coker-v+h", cone, right, cone == right, note))

    tri = u_module_structure(mapping_cone(map_v(c, k, A=A, B=B)))
    left = {} if tri.towers else dict(tri.finite_parts)
    corner = truncated_homology(subquotient(c, Point(-1, k)))
    out.append(IdentityCheck("triangle", left, corner, not tri.towers and left == corner,
                             "cone of v at d-1 versus the corner subquotient (i, j) = (-1, d-1)"))

    iso = v.isomorphism
    out.append(IdentityCheck("model-consistency", v.kernel_pair, v.cokernel_pair, not iso,
                             "v at d-1 is an isomorphism: inconsistent with nonzero top knot Floer homology"
                             if iso else "v at d-1 is not an isomorphism"))
    return out


@dataclass(frozen=True)
class Assumptions:
    irreducible: bool = False
    taut: bool = False
    torsion_spinc: bool = False
    nontorsion_spinc: bool = False

    def __post_init__(self):
        if self.torsion_spinc and self.nontorsion_spinc:
            raise ValueError("Spin^c class cannot be asserted both torsion and nontorsion")

    def asserted(self) -> list[str]:
        return [k for k, v in asdict(self).items() if v]


@dataclass(frozen=True)
class Condition:
    name: str
    status: str  # holds, fails, not-applicable
    detail: str = ""
    conditional_on: tuple = ()


def _status(b: bool) -> str:
    return "holds" if b else "fails"


def check_vh_conditions(c: CFKComplex, k: int) -> list[Condition]:
    require_valid(c)
    A, B = build_A(c, k), build_B(c)
    v, h = map_v(c, k, A=A, B=B), map_h(c, k, A=A, B=B)
    vs, hs = induced_map(v), induced_map(h)
    contained = image_contained(h, v)
    if k == 0:
        equal = maps_equal(v, h)
    else:
        equal = vs.zero and hs.zero  # different degrees
    if vs.surjective:
        kind = "surjective"
    elif vs.zero:
        kind = "zero"
    else:
        kind = "neither"
    return [
        Condition(f"im h{k} in im v{k}", _status(contained)),
        Condition(f"v{k} = h{k}", _status(equal)),
        Condition(f"v{k} type", "holds", kind),
        Condition(f"v{k} surjective or zero", _status(kind != "neither")),
    ]


def _compare(left, right) -> tuple[bool, str]:
    pairwise = left[0] >= right[0] and left[1] >= right[1]
    if left[0] > 0:
        return True, "" if pairwise else "incomparable-scalar: infinite left side, pairwise check fails"
    return left[1] >= right[1], ""


def check_rank_bound(c: CFKComplex, assumptions: Assumptions = Assumptions()) -> list[Condition]:
    """Hypothesis, case labels and rank inequality at ``d - 1``."""
    require_valid(c)
    d = top_alexander(c)
    k = d - 1
    A, B = build_A(c, k), build_B(c)
    hyp = image_contained(map_h(c, k, A=A, B=B), map_v(c, k, A=A, B=B))
    cases = {
        "case nontorsion, d >= 1": assumptions.nontorsion_spinc and d >= 1,
        "case HF+(Y) = 0": u_module_structure(B).is_zero,
        "case d > 1": d > 1,
    }
    left = zero_surgery_homology(c, k).rank_pair
    right = (0, sum(hfk_hat(c, d).values()))
    ok, note = _compare(left, right)
    out = [Condition(f"im h{k} in im v{k}", _status(hyp))]
    for name, applies in cases.items():
        out.append(Condition(name, "holds" if applies else "not-applicable",
                             conditional_on=("nontorsion_spinc",) if "nontorsion" in name else ()))
    detail = f"cone {left} vs knot Floer top {right}" + (f"; {note}" if note else "")
    out.append(Condition("rank inequality", _status(ok), detail))
    if hyp and any(cases.values()):
        concl = _status(ok)
    else:
        concl = "not-applicable"
    out.append(Condition("rank bound conclusion", concl, detail))
    return out


def check_monotonicity(c: CFKComplex, ks) -> list[str]:
    """Violations of the nesting of images of v_k and h_k as k increases."""
    require_valid(c)
    B = build_B(c)
    vs, hs = {}, {}
    for k in list(ks) + [max(ks) + 1]:
        A = build_A(c, k)
        vs[k], hs[k] = map_v(c, k, A=A, B=B), map_h(c, k, A=A, B=B)
    bad = []
    for k in ks:
        if not image_contained(vs[k], vs[k + 1]):
            bad.append(f"im v{k} not in im v{k + 1}")
        if not image_contained(hs[k + 1], hs[k]):
            bad.append(f"im h{k + 1} not in im h{k}")
        if image_contained(hs[k], vs[k]) and not image_contained(hs[k + 1], vs[k + 1]):
            bad.append(f"im h in im v at {k} but not at {k + 1}")
    return bad


def check_symmetry(c: CFKComplex) -> list[str]:
    """Equal rank pairs for v_0 and h_0, and flip symmetry of knot Floer homology."""
    require_valid(c)
    bad = []
    A, B = build_A(c, 0), build_B(c)
    v, h = induced_map(map_v(c, 0, A=A, B=B)), induced_map(map_h(c, 0, A=A, B=B))
    if v.rank_pair != h.rank_pair:
        bad.append(f"rank v0 {v.rank_pair} != rank h0 {h.rank_pair}")
    table = hfk_table(c)
    for k, dims in table.items():
        mirrored = {g - 2 * k: n for g, n in dims.items()}
        if table.get(-k, {}) != mirrored:
            bad.append(f"knot Floer homology at {k} and {-k} not flip-symmetric")
    if any(table.values()) and top_alexander(c) != -bottom_alexander(c):
        bad.append("top Alexander grading is not minus the bottom one")
    return bad


@dataclass(frozen=True)
class AnalysisReport:
    name: str
    top_alexander: int
    norm_value: int
    hfk_top_dim: int
    fibered_candidate: bool
    degenerate: bool
    zero_surgery: tuple  # rank pair of the cone at d - 1
    rank_checks: list = field(default_factory=list)
    propg_conditions: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "top_alexander": self.top_alexander,
            "norm_value": self.norm_value,
            "hfk_top_dim": self.hfk_top_dim,
            "fibered_candidate": self.fibered_candidate,
            "degenerate": self.degenerate,
            "zero_surgery": list(self.zero_surgery),
            "rank_checks": [_check_dict(r) for r in self.rank_checks],
            "propg_conditions": [
                {"name": p.name, "status": p.status, "detail": p.detail,
                 "conditional_on": list(p.conditional_on)}
                for p in self.propg_conditions
            ],
            "assumptions": list(self.assumptions),
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    if isinstance(x, dict):
        return [[g, n] for g, n in x.items()]
    return x


def _check_dict(r: IdentityCheck) -> dict:
    return {"name": r.name, "left": _jsonable(r.left), "right": _jsonable(r.right),
            "passed": r.passed, "note": r.note}


def property_g_report(c: CFKComplex, assumptions: Assumptions = Assumptions()) -> AnalysisReport:
    require_valid(c)
    d = top_alexander(c)
    top = hfk_top_dim(c)
    fibered = top == 1
    cone = zero_surgery_homology(c, d - 1)
    conds = [Condition("cone at d-1 nonzero", _status(not cone.is_zero),
                       f"rank pair {cone.rank_pair}", ("taut",))]
    fib_assume = ("irreducible", "taut")
    conds.append(Condition("fibered candidate", _status(fibered), f"top dimension {top}", ("irreducible",)))

    # fibredness transfer: a minimal cone at d-1 forces a one-dimensional top group
    if d == 1:
        tw = zero_surgery_twisted(c, d - 1)
        minimal = tw.corank == 0 and tw.generic_rank == 1
        detail = f"twisted cone at 0: generic rank {tw.generic_rank}, corank {tw.corank}"
    elif d > 1:
        minimal = cone.rank_pair == (0, 1)
        detail = f"untwisted cone at {d - 1}: rank pair {cone.rank_pair}"
    else:
        minimal, detail = False, "degenerate: top Alexander grading 0"
    conds.append(Condition("fiberedness transfer",
                           _status(top == 1) if minimal else "not-applicable", detail, fib_assume))

    conds.extend(check_vh_conditions(c, d - 1))
    if d - 1 != 0:
        conds.extend(check_vh_conditions(c, 0))
    conds.extend(check_rank_bound(c, assumptions))
    return AnalysisReport(
        name=c.name,
        top_alexander=d,
        norm_value=2 * d + 1,
        hfk_top_dim=top,
        fibered_candidate=fibered,
        degenerate=d == 0,
        zero_surgery=cone.rank_pair,
        rank_checks=check_rank_identities(c, d),
        propg_conditions=conds,
        assumptions=assumptions.asserted(),
    )
