from __future__ import annotations

import pytest

from geokit.errors import ParameterOutOfRange, RecipeSyntaxError, StepError, UnknownStep
from geokit.recipes import builtin_recipes, normalise_model, parse_recipe, render_recipe, run_recipe
from geokit.report import render_json, render_text

REGISTRY = builtin_recipes()


def test_registry_contents():
    assert {"Yn", "Y1pq", "X1", "Xn", "spinX", "cs-verify", "mumford-check", "Zn"} <= set(REGISTRY)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_round_trip(name):
    r = REGISTRY[name]
    text = render_recipe(r)
    assert parse_recipe(text) == r
    assert render_recipe(parse_recipe(text)) == text


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_every_assertion_is_cited(name):
    for e in REGISTRY[name].expectations:
        assert e.cite, f"{name}: {e.key} lacks a citation"


def test_fiber_sum_missing_surface_is_located():
    text = "recipe t\nstep product A 3 1\nstep block M mumford\nstep fiber_sum X A Sigma3xpt M psi\n"
    with pytest.raises(RecipeSyntaxError) as info:
        parse_recipe(text)
    assert info.value.line == 4 and info.value.column > 0
    assert "fiber_sum" in str(info.value)


def test_parameter_ranges():
    with pytest.raises(ParameterOutOfRange):
        parse_recipe("recipe Yn\nparam n = 1\n")
    with pytest.raises(ParameterOutOfRange):
        parse_recipe("recipe any\nparam p = 0\n")
    with pytest.raises(ParameterOutOfRange):
        run_recipe(REGISTRY["Yn"], {"n": 1})
    with pytest.raises(ParameterOutOfRange):
        run_recipe(REGISTRY["X1"], {"q": 0})


def test_unknown_step_and_directive():
    with pytest.raises(UnknownStep) as info:
        parse_recipe("recipe t\nstep frobnicate A\n")
    assert (info.value.line, info.value.column) == (2, 6)
    with pytest.raises(RecipeSyntaxError):
        parse_recipe("recipe t\nwibble\n")
    with pytest.raises(RecipeSyntaxError):
        parse_recipe("param n = 2\n")
    with pytest.raises(RecipeSyntaxError):
        parse_recipe('recipe t\nclaim e = 3\n')


def test_step_errors_carry_index():
    r = parse_recipe("recipe t\nstep product A 2 1\nstep blow_up A nosuch 1\n")
    with pytest.raises(StepError) as info:
        run_recipe(r)
    assert info.value.index == 2 and info.value.op == "blow_up"


def test_yn_n4():
    rep = run_recipe(REGISTRY["Yn"], {"n": 4, "m": 1})
    assert rep.ok
    assert rep.h1.group.is_trivial()
    assert (rep.final.euler, rep.final.signature) == (12, 0)
    assert rep.profile.model == "5(S2xS2)"


def test_yn_m_two_is_not_symplectic():
    rep = run_recipe(REGISTRY["Yn"], {"n": 3, "m": 2})
    assert rep.ok and not rep.final.symplectic


def test_x1_defaults():
    rep = run_recipe(REGISTRY["X1"])
    assert rep.ok
    assert (rep.final.euler, rep.final.signature, rep.final.b1) == (12, 0, 0)
    assert rep.profile.model == "5CP2#5CP2bar"
    assert rep.final.parity.value == "odd"


def test_x1_p7_torsion_lower_bound():
    rep = run_recipe(REGISTRY["X1"], {"p": 7})
    assert rep.ok
    assert rep.h1.lower_bound and rep.h1.group.contains_cyclic(7)


def test_spin_x():
    rep = run_recipe(REGISTRY["spinX"])
    assert rep.ok
    assert (rep.final.euler, rep.final.signature) == (8, 0)
    assert rep.profile.model == "3(S2xS2)"
    assert rep.final.parity.value == "even"
    assert any("spin" in a for a, _ in rep.annotations)


def test_xn_reports_all_three_euler_values():
    rep = run_recipe(REGISTRY["Xn"], {"n": 2})
    assert rep.ok
    text = render_text(rep)
    assert "16" in text and "24" in text and "8" in text
    stated = {d.stated for d in rep.flags if d.key == "e"}
    assert stated == {16, 8}
    assert all(d.cite for d in rep.flags)


def test_xn_n1_agrees_with_x1():
    rep = run_recipe(REGISTRY["Xn"], {"n": 1})
    assert rep.final.euler == 12
    assert not [d for d in rep.flags if d.key == "e" and d.stated == 12]


def test_zn_is_flagged_as_analogy():
    rep = run_recipe(REGISTRY["Zn"])
    assert any("analogy" in str(d.stated) for d in rep.flags)
    assert "analogy" in render_text(rep)


def test_mumford_check():
    rep = run_recipe(REGISTRY["mumford-check"])
    assert rep.ok, [e for e in rep.expectations if not e.passed]


def test_reports_are_deterministic():
    for name in ("X1", "Xn", "spinX"):
        a, b = run_recipe(REGISTRY[name]), run_recipe(REGISTRY[name])
        assert render_text(a) == render_text(b)
        assert render_json(a) == render_json(b)


def test_not_verified_annotations_present():
    text = render_text(run_recipe(REGISTRY["X1"]))
    for phrase in ("Seiberg-Witten", "Usher", "simple connectivity"):
        assert phrase in text


def test_failed_expectation_is_reported():
    r = parse_recipe('recipe t\nstep product A 2 1\nexpect e = 5 cite "made up"\n')
    rep = run_recipe(r)
    assert not rep.ok
    assert "FAIL e" in render_text(rep)


def test_loops_and_interpolation():
    r = parse_recipe(
        "recipe t\nparam n = 3 min 1\n"
        "step block M{i} mumford for i = 1..n\n"
        'expect M3.e = 3 cite "x"\n'
    )
    rep = run_recipe(r)
    assert rep.ok and len(rep.steps) == 3


def test_surface_step_validates_adjunction():
    bad = parse_recipe("recipe t\nstep product A 2 0\nstep surface A S genus=2 square=0 k=4\n")
    with pytest.raises(StepError):
        run_recipe(bad)


def test_model_normalisation():
    assert normalise_model("1(S2xS2)") == "S2xS2"
    assert normalise_model("1CP2#1CP2bar") == "CP2#CP2bar"
