import pytest
from hypothesis import given, settings, strategies as st

from floerkit.fuzz import FuzzSpec, generate_complex, invariant_suite, run_fuzz
from floerkit.model import Arrow, serialize_complex, validate_complex

seeds = st.integers(min_value=0, max_value=2**64 - 1)


@given(seeds, st.integers(1, 12), st.integers(0, 4))
@settings(max_examples=80)
def test_generated_complexes_are_valid(seed, n, width):
    c = generate_complex(seed, n, width)
    assert len(c.generators) <= n
    assert all(abs(g.alexander) <= width for g in c.generators)
    assert validate_complex(c).ok


@given(seeds)
def test_generation_is_deterministic(seed):
    assert serialize_complex(generate_complex(seed)) == serialize_complex(generate_complex(seed))


@given(seeds)
def test_single_generator_budget_gives_a_dot(seed):
    c = generate_complex(seed, max_generators=1)
    assert len(c.generators) == 1 and not c.arrows
    assert c.generators[0].alexander == 0


def test_seeds_vary_the_output():
    outs = {serialize_complex(generate_complex(s)) for s in range(30)}
    assert len(outs) > 10


def test_seed_offsets_match_single_case_runs():
    batch = run_fuzz(FuzzSpec(40, 3))
    singles = [run_fuzz(FuzzSpec(40 + i, 1))[0] for i in range(3)]
    assert batch == singles
    assert [r.seed for r in batch] == [40, 41, 42]


def test_seed_wraps_at_64_bits():
    results = run_fuzz(FuzzSpec(2**64 - 1, 2))
    assert [r.seed for r in results] == [2**64 - 1, 0]


@pytest.mark.parametrize("field", ["F2", "Q"])
def test_small_run_passes(field):
    results = run_fuzz(FuzzSpec(7, 12), field)
    assert all(r.ok for r in results), [r for r in results if not r.ok]


def test_suite_reports_broken_complex():
    c = generate_complex(3)
    broken = c.__class__(c.name, c.generators, c.arrows + (Arrow(c.generators[0].name, c.generators[0].name, 0, 0, 1),),
                         c.field, c.spinc, c.flip)
    fails = invariant_suite(broken)
    assert fails and fails[0].startswith("validate")


@pytest.mark.parametrize("kw", [{"count": 0}, {"count": 1, "max_generators": 0}, {"count": 1, "width": -1}])
def test_spec_rejects_bad_parameters(kw):
    with pytest.raises(ValueError):
        FuzzSpec(0, **kw)
