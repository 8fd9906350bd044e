import json

import pytest
from hypothesis import given, strategies as st

from conftest import doc
from floerkit.fuzz import generate_complex
from floerkit.model import (
    Band,
    FlipRequiredError,
    HalfPlaneI,
    HalfPlaneJ,
    Intersection,
    ParseError,
    Point,
    RegionError,
    SchemaError,
    Union,
    apply_flip,
    flip_signs,
    parse_complex,
    serialize_complex,
    subquotient,
    validate_complex,
)
from floerkit.complexes import FiniteComplex, PlusComplex
from floerkit.homology import truncated_homology
from oracles import brute_flip_signs

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_parse_unknot_and_trefoil(unknot, trefoil):
    assert len(unknot.generators) == 1 and not unknot.arrows
    assert len(trefoil.generators) == 3 and len(trefoil.arrows) == 2


def test_parse_error_reports_position():
    with pytest.raises(ParseError, match="line 2 column"):
        parse_complex('{"name": "x",\n  "generators": [}')


def test_parse_error_names_field():
    d = doc("trefoil")
    d["generators"][1]["maslov"] = "-1"
    with pytest.raises(ParseError, match=r"generators\[1\]\.maslov"):
        parse_complex(json.dumps(d))


def test_unknown_generator_is_named():
    d = doc("trefoil")
    d["arrows"][0]["to"] = "q"
    with pytest.raises(SchemaError, match="'q'"):
        parse_complex(json.dumps(d))


def test_duplicate_generator_is_schema_error():
    d = doc("trefoil")
    d["generators"].append(dict(d["generators"][0]))
    with pytest.raises(SchemaError, match="duplicate"):
        parse_complex(json.dumps(d))


@pytest.mark.parametrize("name", ["unknot", "trefoil", "figure-eight", "finite-base"])
def test_bundled_fixtures_are_valid(name):
    rep = validate_complex(parse_complex(json.dumps(doc(name))))
    assert rep.ok and rep.flip_checked


def test_broken_fixture_is_rejected():
    rep = validate_complex(parse_complex(json.dumps(doc("broken"))))
    assert not rep.ok
    assert {"alexander", "maslov", "flip-alexander"} <= rep.codes()


def test_maslov_mutation_names_arrow():
    d = doc("trefoil")
    d["generators"][0]["maslov"] = [-3, 1]  # a
    rep = validate_complex(parse_complex(json.dumps(d)))
    bad = [v for v in rep.violations if v.code == "maslov"]
    assert len(bad) == 1 and "b->a" in bad[0].message


def test_d_squared_violation():
    d = {"name": "path", "generators": [
        {"name": "x", "alexander": 0, "maslov": [0, 1]},
        {"name": "y", "alexander": 0, "maslov": [-1, 1]},
        {"name": "z", "alexander": 0, "maslov": [-2, 1]}],
        "arrows": [{"from": "x", "to": "y", "nw": 0, "nz": 0}, {"from": "y", "to": "z", "nw": 0, "nz": 0}]}
    assert "d-squared" in validate_complex(parse_complex(json.dumps(d))).codes()


def test_figure_eight_over_q_needs_the_sign():
    d = doc("figure-eight")
    d["field"] = "Q"
    assert validate_complex(parse_complex(json.dumps(d))).ok
    d["arrows"][3]["coeff"] = 1
    assert "d-squared" in validate_complex(parse_complex(json.dumps(d))).codes()


def test_missing_flip_refuses_h(trefoil):
    d = doc("trefoil")
    del d["flip"]
    c = parse_complex(json.dumps(d))
    assert validate_complex(c).ok
    with pytest.raises(FlipRequiredError, match="flip involution required"):
        flip_signs(c)


@pytest.mark.parametrize("name, components", [("trefoil", 1), ("figure-eight", 2)])
def test_flip_signs_match_exhaustive_search(name, components):
    d = doc(name)
    d["field"] = "Q"
    c = parse_complex(json.dumps(d))
    found = flip_signs(c)
    solutions = brute_flip_signs(d)
    assert found in solutions
    assert len(solutions) == 2 ** components  # unique up to a sign per component


def test_serializer_key_order_and_sorting(trefoil):
    text = serialize_complex(trefoil)
    data = json.loads(text)
    assert list(data) == ["name", "field", "generators", "arrows", "flip"]
    assert [g["name"] for g in data["generators"]] == ["a", "b", "c"]
    assert text.endswith("\n")


@given(seeds)
def test_round_trip(seed):
    c = generate_complex(seed)
    assert parse_complex(serialize_complex(c)) == c


@given(seeds)
def test_validation_is_pure(seed):
    c = generate_complex(seed)
    assert validate_complex(c) == validate_complex(c)
    assert validate_complex(c).ok


@given(seeds)
def test_flip_twice_restores_arrows(seed):
    c = generate_complex(seed)
    assert sorted(apply_flip(c, apply_flip(c, c.arrows))) == sorted(c.arrows)


@given(seeds, st.integers(-5, 5))
def test_union_bottoms(seed, k):
    c = generate_complex(seed)
    p = subquotient(c, Union(0, k))
    assert isinstance(p, PlusComplex)
    assert len(p.towers) == len(c.generators)
    for g in c.generators:
        assert p.bottom(g.name) == min(0, k - g.alexander)


def test_trefoil_union_example(trefoil):
    p = subquotient(trefoil, Union(0, 0))
    assert {t.name: t.bottom for t in p.towers} == {"a": 0, "b": 0, "c": -1}


def test_unknot_half_plane(unknot):
    p = subquotient(unknot, HalfPlaneI(0))
    assert [(t.bottom, p.grading((t.name, t.bottom))) for t in p.towers] == [(0, 0)]


def test_point_subquotient(trefoil):
    f = subquotient(trefoil, Point(0, 1))
    assert isinstance(f, FiniteComplex)
    assert f.basis == (("c", 0),)
    assert truncated_homology(f) == {0: 1}


def test_band_and_region_checks(trefoil):
    f = subquotient(trefoil, Band(0, 1))
    assert len(f.basis) == 6 and not f.check_square_zero()
    with pytest.raises(RegionError):
        subquotient(trefoil, Band(2, 1))
    r = Intersection(0, 1)
    assert r.contains(0, 1) and not r.contains(-1, 5) and r.upward_closed
    assert HalfPlaneJ(2).contains(-4, 2) and not HalfPlaneJ(2).contains(0, 1)
