from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrr.cycles import (
    CompleteIntersection,
    CycleComponent,
    CycleError,
    CycleEvaluationError,
    Hypersurface,
    LagrangianCycle,
    cc_of_constant_on_smooth,
    chi_via_cc,
    combine,
    parse_cycle,
    verify_cor_1_5,
)
from gaussrr.gauss import Point, ZeroSection
from gaussrr.laurent import parse

LINE = {"hypersurface": "1+x+y"}
CONIC = {"hypersurface": "1+x+y+3*x*y"}
GDEG = {"point": 1, "zero_section": 0, "line": 1, "conic": 2}


def doc(*components, n=2):
    return {"n": n, "components": list(components)}


def test_parse_examples():
    c = parse_cycle(doc({"point": [2, 3], "mult": 1}))
    assert c.components == (CycleComponent(Point((2, 3)), 1),)
    c = parse_cycle(doc({"zero_section": True, "mult": 1}))
    assert c.components[0].descriptor == ZeroSection(2)
    c = parse_cycle(doc({"hypersurface": "1+x+y", "mult": 2}, {"point": [1, 1], "mult": 3}))
    assert [comp.kind for comp in c.components] == ["point", "hypersurface"]


def test_parse_accepts_text_and_complex_points():
    c = parse_cycle('{"n": 1, "components": [{"point": [[1, 2]], "mult": -2}]}')
    assert c.components[0].descriptor == Point((1 + 2j,))
    c = parse_cycle("n: 2\ncomponents:\n  - hypersurface: 1+x+y\n    mult: 1\n")
    assert c.components[0].descriptor == Hypersurface(parse("1+x+y", 2))


@pytest.mark.parametrize(
    "bad",
    [
        doc({"point": [1, 1], "mult": 0}),
        doc({"point": [1, 1, 1], "mult": 1}),
        doc({"point": [1, 1], "zero_section": True, "mult": 1}),
        doc({"point": [0, 1], "mult": 1}),
        doc({"hypersurface": "1+x+q", "mult": 1}),
        doc({"hypersurface": "1+x", "mult": 1.5}),
        doc({"zero_section": False, "mult": 1}),
        doc({"point": [1, 1], "mult": 1}, {"point": [1, 1], "mult": 2}),
        doc({"complete_intersection": ["x-1", "y-1", "x-y"], "mult": 1}),
        {"n": 0, "components": []},
        {"n": 2, "components": [], "extra": 1},
        "[1, 2]",
        "{n: 2, components: [",
    ],
)
def test_schema_violations(bad):
    with pytest.raises(CycleError):
        parse_cycle(bad)


def test_canonical_serialization_is_order_free():
    a = parse_cycle(doc({"hypersurface": "y+x+1", "mult": 2}, {"point": [1, 1], "mult": 3}, {"zero_section": True, "mult": -1}))
    b = parse_cycle(doc({"zero_section": True, "mult": -1}, {"point": [1, 1], "mult": 3}, {"hypersurface": "1+x+y", "mult": 2}))
    assert a.dumps() == b.dumps()
    assert json.loads(a.dumps())["components"][0] == {"zero_section": True, "mult": -1}
    assert parse_cycle(a.dumps()) == a


def test_cycle_algebra():
    p = parse_cycle(doc({"point": [1, 1], "mult": 2}))
    q = parse_cycle(doc({"point": [1, 1], "mult": -2}, LINE | {"mult": 1}))
    s = p + q
    assert [c.kind for c in s.components] == ["hypersurface"]
    assert p.scaled(-3).components[0].multiplicity == -6
    assert combine([(2, p), (1, q)]).components[0].multiplicity == 2


def test_constant_sheaf_cycles():
    c = cc_of_constant_on_smooth(Hypersurface(parse("1+x+y", 2)))
    assert c.components == (CycleComponent(Hypersurface(parse("1+x+y", 2)), 1),)
    assert cc_of_constant_on_smooth(Point((3,))).components[0].multiplicity == 1
    assert cc_of_constant_on_smooth(ZeroSection(2)).components[0].descriptor == ZeroSection(2)


def test_chi_via_cc_examples():
    assert chi_via_cc(parse_cycle(doc({"zero_section": True, "mult": 1}))).chi == 0
    assert chi_via_cc(parse_cycle(doc({"point": [1, 1], "mult": 2}, {"point": [2, 3], "mult": 3}))).chi == 5
    assert chi_via_cc(parse_cycle(doc(LINE | {"mult": 1}))).chi == 1
    rep = chi_via_cc(parse_cycle(doc(LINE | {"mult": 2}, {"point": [1, 1], "mult": -1})))
    assert rep.chi == 1
    assert [(c.kind, c.gdeg, c.multiplicity) for c in rep.components] == [("point", 1, -1), ("hypersurface", 1, 2)]


def test_chi_via_cc_complete_intersection_and_one_dimensional():
    c = LagrangianCycle(2, (CycleComponent(CompleteIntersection((parse("x-2", 2), parse("y-3", 2))), 1),))
    assert chi_via_cc(c).chi == 1
    c = parse_cycle(doc({"hypersurface": "z^2-3z+2", "mult": 1}, n=1))
    assert chi_via_cc(c).chi == 2


def test_chi_via_cc_refuses_unagreed(monkeypatch):
    import gaussrr.cycles as cycles

    monkeypatch.setattr(cycles, "component_gdeg", lambda d, cfg, samples=3: (4, False, None))
    with pytest.raises(CycleEvaluationError) as err:
        chi_via_cc(parse_cycle(doc(LINE | {"mult": 1})))
    assert err.value.partial.chi == 4


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.sampled_from(["point", "zero_section", "line", "conic"]), min_size=1, max_size=4, unique=True),
    st.lists(st.integers(-3, 3).filter(bool), min_size=4, max_size=4),
)
def test_linearity(kinds, mults):
    table = {"point": {"point": [2, 5]}, "zero_section": {"zero_section": True}, "line": LINE, "conic": CONIC}
    cyc = parse_cycle(doc(*[table[k] | {"mult": m} for k, m in zip(kinds, mults)]))
    cache = {}
    expected = sum(GDEG[k] * m for k, m in zip(kinds, mults))
    assert chi_via_cc(cyc, cache=cache).chi == expected
    if all(m > 0 for m in mults[: len(kinds)]):
        assert expected >= 0


def test_cor_1_5_examples():
    for text, n, value in (("1+x+y", 2, 1), ("1+x+y+3*x*y", 2, 2), ("1+x+y+z", 3, 1), ("z^2-3z+2", 1, 2)):
        v = verify_cor_1_5(parse(text, n))
        assert v.status == "equal"
        assert v.gdeg == v.signed_chi == value
    v = verify_cor_1_5(parse("1+x+y+3*x*y", 2))
    assert v.pick_chi == v.chi == -2


def test_cor_1_5_not_applicable_for_degenerate():
    v = verify_cor_1_5(parse("(1+x)*(1+y)", 2))
    assert v.status == "not applicable"
    assert v.gdeg is None
