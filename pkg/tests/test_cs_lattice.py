from __future__ import annotations

from geokit.cs_lattice import (
    FORM_A,
    GENERATORS,
    STATED_RELATIONS,
    cs_relation_report,
    dump_generators,
    evaluate,
    projective_order,
    relation_matrix,
    short_scalar_relations,
)
from geokit.cyclotomic import ZETA, CycMatrix, CyclotomicElement, scalar_equivalent
from geokit.lattice import AbelianGroup, rank_mod_p, snf

REPORT = cs_relation_report()


def test_form_entries_numeric():
    a = FORM_A.to_complex()
    assert abs(a[0][0] - (-1 - 3**0.5)) < 1e-12
    assert abs(a[1][1] - (1 - 3**0.5)) < 1e-12
    assert a[0][1] == a[1][0] == 1 and a[2][2] == 1


def test_generators_preserve_form_and_are_invertible():
    assert REPORT.form_hermitian and REPORT.forms_ok
    for m in GENERATORS.values():
        assert m.det().is_unit()


def test_determinants_and_orders():
    assert REPORT.determinants["j"] == ZETA**2
    assert REPORT.determinants["u"] == ZETA**3
    assert REPORT.orders == {"u": 4, "v": 8, "j": 12, "b": 3}
    assert projective_order(CycMatrix.identity()) == 1


def test_relations_that_do_hold():
    # j is central modulo scalars in <u, v, j>, and v^2 agrees with j^3
    j, u, v = GENERATORS["j"], GENERATORS["u"], GENERATORS["v"]
    assert scalar_equivalent(j @ u, u @ j) is not None
    assert scalar_equivalent(j @ v, v @ j) is not None
    assert scalar_equivalent(v @ v, j @ j @ j) is not None
    assert (GENERATORS["b"] ** 3).scalar_value() is not None


def test_short_scalar_word_search():
    found = short_scalar_relations(4)
    assert "JUju" in found and "JVjv" in found


def test_stated_relations_as_transcribed():
    # exact arithmetic: lhs * rhs^-1 is not a scalar matrix for any of the three
    for check in REPORT.relations:
        assert check.quotient == evaluate(check.lhs) @ evaluate(check.rhs).inverse()
        assert check.quotient.scalar_value() is None
        assert not check.holds
    assert [c.label for c in REPORT.relations] == [label for label, _, _ in STATED_RELATIONS]


def test_abelianisation_of_listed_relations():
    assert REPORT.abelianization == AbelianGroup(1, (3,))
    assert REPORT.abelianization_factors == (1, 1, 3)
    assert not REPORT.abelianization_matches_claim
    m = relation_matrix()
    for p in (2, 5, 7):
        assert rank_mod_p(m, p) == sum(1 for f in snf(m).invariant_factors if f % p)
    assert rank_mod_p(m, 3) == 2


def test_dump_generators_round_trip():
    rows = {}
    for line in dump_generators().splitlines():
        if line.startswith("#"):
            continue
        name, i, k, *c = line.split()
        rows.setdefault(name, [[None] * 3 for _ in range(3)])[int(i)][int(k)] = CyclotomicElement(*map(int, c))
    assert CycMatrix.from_rows(rows["A"]) == FORM_A
    for name, m in GENERATORS.items():
        assert CycMatrix.from_rows(rows[name]) == m
