import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import doc
from floerkit.analyzer import (
    Assumptions,
    bottom_alexander,
    check_monotonicity,
    check_rank_bound,
    check_rank_identities,
    check_symmetry,
    check_vh_conditions,
    detect_fibered,
    hfk_hat,
    property_g_report,
    top_alexander,
)
from floerkit.fuzz import generate_complex
from floerkit.model import CFKComplex, Generator, parse_complex, serialize_complex
from oracles import hfk_oracle

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def by_name(checks):
    return {c.name: c for c in checks}


def test_hfk_unknot(unknot):
    assert hfk_hat(unknot, 0) == {0: 1}
    assert hfk_hat(unknot, 1) == {} and hfk_hat(unknot, -2) == {}


def test_hfk_trefoil(trefoil):
    assert [hfk_hat(trefoil, k) for k in (1, 0, -1)] == [{0: 1}, {-1: 1}, {-2: 1}]
    assert hfk_hat(trefoil, 2) == {}


def test_hfk_figure_eight(fig8):
    assert [sum(hfk_hat(fig8, k).values()) for k in (1, 0, -1)] == [1, 3, 1]


@given(seeds, st.integers(-4, 4))
@settings(max_examples=60)
def test_hfk_matches_dense_oracle(seed, k):
    c = generate_complex(seed)
    assert hfk_hat(c, k) == hfk_oracle(json.loads(serialize_complex(c)), k)


def test_top_alexander(unknot, trefoil, fig8):
    assert (top_alexander(unknot), top_alexander(trefoil), top_alexander(fig8)) == (0, 1, 1)


def test_top_alexander_rejects_acyclic_model():
    d = {"name": "acyclic", "generators": [
        {"name": "x", "alexander": 0, "maslov": [0, 1]}, {"name": "y", "alexander": 0, "maslov": [-1, 1]}],
        "arrows": [{"from": "x", "to": "y", "nw": 0, "nz": 0}], "flip": {"x": "x", "y": "y"}}
    with pytest.raises(ValueError, match="vanishes"):
        top_alexander(parse_complex(json.dumps(d)))


def test_detect_fibered(unknot, trefoil, fig8):
    assert detect_fibered(trefoil) and detect_fibered(fig8)
    assert detect_fibered(unknot) and property_g_report(unknot).degenerate


def test_detect_fibered_top_dim_two():
    gens = (Generator("p", 1, Fraction(0)), Generator("q", 1, Fraction(0)),
            Generator("r", -1, Fraction(-2)), Generator("s", -1, Fraction(-2)))
    c = CFKComplex("double", gens, (), flip=(("p", "r"), ("q", "s"), ("r", "p"), ("s", "q")))
    assert not detect_fibered(c)


@pytest.mark.parametrize("name", ["unknot", "trefoil", "figure-eight", "finite-base"])
def test_rank_identities_on_fixtures(name):
    c = parse_complex(json.dumps(doc(name)))
    for field in ("F2", "Q"):
        checks = check_rank_identities(c.with_field(field))
        assert all(r.passed for r in checks), checks


def test_trefoil_identity_values(trefoil):
    checks = by_name(check_rank_identities(trefoil))
    assert checks["ker-coker-v"].left == checks["ker-coker-v"].right == (0, 1)
    assert checks["ker-coker-v+h"].left == (2, 0)
    assert checks["triangle"].passed


def test_unknot_identities_at_zero(unknot):
    # evaluated at k = 0 (d = 1 override) the cone is the corank-2 module,
    # and ker + coker of v + h = 0 is (1,0) + (1,0)
    checks = by_name(check_rank_identities(unknot, d=1))
    assert checks["ker-coker-v+h"].left == checks["ker-coker-v+h"].right == (2, 0)


def test_model_inconsistency_flag(unknot):
    # with d = 1 the map v_0 is the identity, which the triangle forbids
    checks = by_name(check_rank_identities(unknot, d=1))
    assert not checks["model-consistency"].passed
    assert checks["ker-coker-v"].left == checks["ker-coker-v"].right == (0, 0)


def test_vh_conditions(unknot, trefoil):
    u = by_name(check_vh_conditions(unknot, 0))
    assert u["v0 = h0"].status == "holds" and u["v0 type"].detail == "surjective"
    t1 = by_name(check_vh_conditions(trefoil, 1))
    assert t1["v1 type"].detail == "surjective" and t1["im h1 in im v1"].status == "holds"
    t0 = by_name(check_vh_conditions(trefoil, 0))
    assert t0["v0 type"].detail == "surjective" and t0["v0 = h0"].status == "holds"


def test_rank_bound_trefoil(trefoil):
    p = by_name(check_rank_bound(trefoil))
    assert p["case nontorsion, d >= 1"].status == "not-applicable"
    assert p["case d > 1"].status == "not-applicable"
    assert p["rank inequality"].status == "holds"
    assert p["rank bound conclusion"].status == "not-applicable"
    p = by_name(check_rank_bound(trefoil, Assumptions(nontorsion_spinc=True)))
    assert p["rank bound conclusion"].status == "holds"


def test_rank_bound_unknot_scalar_comparison(unknot):
    p = by_name(check_rank_bound(unknot))
    assert p["im h-1 in im v-1"].status == "holds"


def test_rank_bound_hypothesis_failure_gates_conclusion():
    # im h_0 is not inside im v_0 = 0 when v_0 vanishes but h_0 does not
    c = parse_complex(json.dumps(doc("finite-base")))
    p = by_name(check_rank_bound(c, Assumptions(nontorsion_spinc=True)))
    assert p["im h0 in im v0"].status == "holds"  # both zero here
    hyp_fail = by_name(check_vh_conditions(c, -1))
    assert hyp_fail["im h-1 in im v-1"].status == "fails"


def test_assumptions_conflict():
    with pytest.raises(ValueError):
        Assumptions(torsion_spinc=True, nontorsion_spinc=True)


@pytest.mark.parametrize("name", ["unknot", "trefoil", "figure-eight", "finite-base"])
def test_monotonicity_and_symmetry_on_fixtures(name):
    c = parse_complex(json.dumps(doc(name)))
    assert check_monotonicity(c, range(-4, 5)) == []
    assert check_symmetry(c) == []


@given(seeds)
@settings(max_examples=40)
def test_fuzzed_symmetry(seed):
    c = generate_complex(seed)
    assert check_symmetry(c) == []
    assert top_alexander(c) == -bottom_alexander(c)


def test_property_g_reports(unknot, trefoil, fig8):
    t = property_g_report(trefoil)
    assert (t.top_alexander, t.hfk_top_dim, t.fibered_candidate) == (1, 1, True)
    assert t.zero_surgery != (0, 0) and all(r.passed for r in t.rank_checks)
    assert t.norm_value == 3
    f = property_g_report(fig8)
    assert (f.top_alexander, f.hfk_top_dim, f.fibered_candidate) == (1, 1, True)
    u = property_g_report(unknot, Assumptions(irreducible=True))
    assert u.degenerate and all(r.passed for r in u.rank_checks)
    assert u.assumptions == ["irreducible"]
    conds = {c.name: c for c in t.propg_conditions}
    assert conds["fiberedness transfer"].status == "holds"
    assert "irreducible" in conds["fiberedness transfer"].conditional_on
