from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geokit.complements import (
    stated_presentation,
    stated_relations_y1pq,
    stated_relations_yn,
    y1pq_complement,
    yn_complement,
)
from geokit.errors import UnknownGenerator, WordSyntaxError
from geokit.geography import product_block
from geokit.groups import (
    IDENTITY,
    Presentation,
    SurgeryDatum,
    Word,
    abelianized_matrix,
    add_relators,
    apply_surgery,
    attach_rationally_trivial_side,
    b1,
    commutator,
    free_product,
    free_reduce,
    h1,
    h1_result,
    identify_generators,
    parse_presentation,
    parse_word,
    surface_group,
)
from geokit.lattice import AbelianGroup

x, y = Word.gen("x"), Word.gen("y")

letters = st.lists(
    st.tuples(st.sampled_from(["a", "b", "c"]), st.integers(-3, 3).filter(bool)), max_size=12
)
words = letters.map(Word)


def naive_reduce(seq: list[tuple[str, int]]) -> list[tuple[str, int]]:
    """Stack-based free reduction over unit letters (independent oracle)."""
    stack: list[tuple[str, int]] = []
    for g, e in seq:
        for _ in range(abs(e)):
            s = 1 if e > 0 else -1
            if stack and stack[-1] == (g, -s):
                stack.pop()
            else:
                stack.append((g, s))
    return stack


# --- words -----------------------------------------------------------------


def test_free_reduction_and_commutator_examples():
    assert free_reduce(x * x.inverse()) == IDENTITY
    assert commutator(x, x) == IDENTITY
    assert commutator(x, y) == parse_word("x^-1*y^-1*x*y")
    w = commutator(parse_word("b1^-1"), parse_word("d1^-1")) * parse_word("a1^-1")
    row = abelianized_matrix(Presentation(("a1", "b1", "d1"), (w,))).tolist()
    assert row == [[-1, 0, 0]]


def test_word_syntax():
    assert str(parse_word("a1^-1*d1^-1*a1*d1*a1^-1")) == "a1^-1*d1^-1*a1*d1*a1^-1"
    assert parse_word("[a,b]^2") == commutator(Word.gen("a"), Word.gen("b")) ** 2
    assert parse_word("(a*b)^-1") == parse_word("b^-1*a^-1")
    assert parse_word("1") == IDENTITY and str(IDENTITY) == "1"
    assert parse_word("M.alpha1*a1'") == Word.gen("M.alpha1") * Word.gen("a1'")
    for bad in ("", "a*", "[a,b", "a^", "a b", "a^x", "@"):
        with pytest.raises(WordSyntaxError):
            parse_word(bad)


@settings(max_examples=300, deadline=None)
@given(letters)
def test_reduction_matches_stack_oracle(seq):
    w = Word(seq)
    assert w.syllables() == naive_reduce(seq)
    assert free_reduce(w) == w
    assert len(w) <= sum(abs(e) for _, e in seq)


@settings(max_examples=300, deadline=None)
@given(words, words)
def test_word_group_laws(u, v):
    assert u * u.inverse() == IDENTITY
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert parse_word(str(u)) == u
    for g in "abc":
        assert commutator(u, v).exponent_sum(g) == 0


@settings(max_examples=200, deadline=None)
@given(words, st.integers(0, 20))
def test_cyclic_conjugates_recognised(u, r):
    s = u.cyclically_reduced().syllables()
    if s:
        k = r % len(s)
        rot = Word(s[k:] + s[:k])
        assert rot.is_cyclic_conjugate(u)
        assert rot.inverse().is_cyclic_conjugate(u)


# --- presentations ---------------------------------------------------------


def test_presentation_text_round_trip():
    p = Presentation(("a", "b", "M.alpha1"), (parse_word("[a,b]*a^3"), parse_word("M.alpha1^2")), {"b"})
    text = p.to_text()
    assert parse_presentation(text) == p
    assert parse_presentation(text).to_text() == text


def test_unknown_generators_rejected():
    with pytest.raises(UnknownGenerator):
        Presentation(("a",), (parse_word("b"),))
    with pytest.raises(UnknownGenerator):
        add_relators(Presentation(("a",)), [parse_word("z")])
    with pytest.raises(UnknownGenerator):
        attach_rationally_trivial_side(Presentation(("a",)), ["q"])


def test_basic_quotients():
    assert h1(free_product(Presentation(("x",)), Presentation(("y",)))) == AbelianGroup(2)
    assert h1(add_relators(Presentation(("x",)), [x**5])) == AbelianGroup(0, (5,))
    assert h1(identify_generators(Presentation(("x", "y")), [(x, y)])) == AbelianGroup(1)
    assert h1(identify_generators(Presentation(("x", "y")), [(x, x)])) == AbelianGroup(2)
    p = Presentation(("x",), (x**4,))
    assert h1(add_relators(p, [IDENTITY])) == h1(p)


def test_free_product_renames_clashes():
    p = Presentation(("a",), (Word.gen("a", 2),))
    fp = free_product(p, p)
    assert len(fp.generators) == 2 and len(set(fp.generators)) == 2
    assert h1(fp) == AbelianGroup(0, (2, 2))
    assert h1(free_product(p, Presentation(()))) == h1(p)


def test_surface_groups():
    for g in range(5):
        assert h1(surface_group(g)) == AbelianGroup(2 * g)


def test_attach_rationally_trivial_side():
    free = Presentation(("a", "b", "c"))
    assert b1(attach_rationally_trivial_side(free, ["a", "b", "c"])) == 0
    same = attach_rationally_trivial_side(free, [])
    assert h1_result(same).group == AbelianGroup(3) and not h1_result(same).lower_bound
    res = h1_result(attach_rationally_trivial_side(Presentation(("a", "c"), (Word.gen("c", 5),)), ["a"]))
    assert res.group == AbelianGroup(0, (5,)) and res.lower_bound


def test_surgery_relator_forms():
    mu, lam = parse_word("[b1^-1,d1^-1]"), Word.gen("a1")
    assert SurgeryDatum(mu, lam, 1, 3, -1).relator() == mu * lam**-3
    assert SurgeryDatum(mu, lam, 1, 0).relator() == mu
    assert SurgeryDatum(mu, lam, 2, 1).relator() == mu**2 * lam
    assert SurgeryDatum(mu, lam, 1, 1).is_luttinger
    assert not SurgeryDatum(mu, lam, 2, 1).is_luttinger
    with pytest.raises(ValueError):
        SurgeryDatum(mu, lam, 1, -1)


# --- homology oracles for the built-in surgeries ---------------------------

YN_SURGERIES = [
    ("[b1^-1,d1^-1]", "a1", 1, -1), ("[a1^-1,d1]", "b1", 1, -1),
    ("[b2^-1,d2^-1]", "a2", 1, -1), ("[a2^-1,d2]", "b2", 1, -1),
    ("[b2^-1,d1^-1]", "c1", 1, 1), ("[b2,c1^-1]", "d1", 1, 1),
    ("[b1^-1,d2^-1]", "c2", 1, 1), ("[b1,c2^-1]", "d2", "m", 1),
]


def surgered_yn(n: int, m: int) -> Presentation:
    p = yn_complement(n)
    for mer, push, num, sign in YN_SURGERIES:
        p = apply_surgery(p, SurgeryDatum(parse_word(mer), Word.gen(push), m if num == "m" else num, 1, sign))
    for j in range(3, n + 1):
        p = apply_surgery(p, SurgeryDatum(parse_word(f"[a1^-1,d{j}^-1]"), Word.gen(f"c{j}"), 1, 1, -1))
        p = apply_surgery(p, SurgeryDatum(parse_word(f"[a2^-1,c{j}^-1]"), Word.gen(f"d{j}"), 1, 1, -1))
    return p


def surgered_y1pq(p_: int, q: int, m: int) -> Presentation:
    p = y1pq_complement()
    for mer, push, num, den, sign in [
        ("[b1^-1,d^-1]", "a1", 1, 1, -1), ("[a1^-1,d]", "b1", 1, 1, -1),
        ("[b2^-1,d^-1]", "a2", 1, 1, -1), ("[a2^-1,d]", "b2", 1, 1, -1),
        ("[b3^-1,d^-1]", "c", 1, p_, 1), ("[c^-1,b3]", "d", m, q, 1),
    ]:
        p = apply_surgery(p, SurgeryDatum(parse_word(mer), Word.gen(push), num, den, sign))
    return p


def rows_up_to_sign(p: Presentation) -> list[tuple[int, ...]]:
    out = []
    for r in abelianized_matrix(p).tolist():
        lead = next((v for v in r if v), 0)
        out.append(tuple(-v for v in r) if lead < 0 else tuple(r))
    return sorted(out)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_yn_homology_is_trivial(n, m):
    # every generator equals a commutator word, so H1 = 0 by hand
    assert h1(surgered_yn(n, m)).is_trivial()


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("m", [1, 3])
def test_yn_surgery_matrix_matches_stated_relations(n, m):
    ours = surgered_yn(n, m)
    stated = stated_presentation(stated_relations_yn(n, m), ours.generators)
    assert rows_up_to_sign(ours) == rows_up_to_sign(stated)
    assert h1(ours) == h1(stated)


@pytest.mark.parametrize("p_", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_y1pq_homology_oracle(p_, q, m):
    # hand abelianization: a1..b2 die, p c = 0, q d = 0, a3 and b3 free
    g = h1(surgered_y1pq(p_, q, m))
    assert g == AbelianGroup.from_cyclic(2, [p_, q])
    assert g.rank == 2
    assert g.torsion_order == p_ * q
    assert g.exponent == p_ * q // gcd(p_, q)
    stated = stated_presentation(stated_relations_y1pq(p_, q, m), surgered_y1pq(p_, q, m).generators)
    assert rows_up_to_sign(surgered_y1pq(p_, q, m)) == rows_up_to_sign(stated)


def test_y1pq_unit_coefficients_leave_a3_b3():
    assert h1(surgered_y1pq(1, 1, 1)) == AbelianGroup(2)


# --- invariance properties -------------------------------------------------

presentations = st.builds(
    lambda rels: Presentation(("a", "b", "c"), tuple(rels)),
    st.lists(words, max_size=5),
)


@settings(max_examples=200, deadline=None)
@given(presentations, st.randoms(use_true_random=False))
def test_h1_invariances(p, rnd):
    base = h1(p)
    rels = list(p.relators)
    rnd.shuffle(rels)
    assert h1(Presentation(p.generators, tuple(rels))) == base
    inv = tuple(r.inverse() if rnd.random() < 0.5 else r for r in rels)
    assert h1(Presentation(p.generators, inv)) == base
    renamed = p.rename({"a": "z1", "b": "z2", "c": "z3"})
    assert h1(renamed) == base


@settings(max_examples=200, deadline=None)
@given(presentations, words, words)
def test_adding_abelian_trivial_relators(p, u, v):
    assert h1(add_relators(p, [commutator(u, v)])) == h1(p)


@settings(max_examples=100, deadline=None)
@given(presentations, presentations)
def test_b1_additive_under_free_product(p, q):
    assert b1(free_product(p, q)) == b1(p) + b1(q)
    assert h1(free_product(p, q)) == h1(p) + h1(q)


def test_product_block_presentation_matches_b1():
    for g, h in [(0, 0), (1, 1), (2, 0), (3, 1), (2, 3)]:
        blk = product_block(g, h)
        assert b1(blk.presentation) == blk.b1 == 2 * g + 2 * h
