"""Complement presentations for the Lagrangian tori of the built-in recipes.

These are input data: the relations of the surgered product that are not
surgery relations. Each surgery step of a recipe then adds one relator.
The ``stated_*`` functions transcribe the full relation lists as equations
``lhs = rhs`` for cross-checking what the surgery steps produce.
"""

from __future__ import annotations

from .groups import Presentation, parse_word


def _pres(gens: list[str], rels: list[str]) -> Presentation:
    return Presentation(tuple(gens), tuple(parse_word(r) for r in rels))


def _gens_sigma(g: int, second: int) -> list[str]:
    gens = [x for i in range(1, g + 1) for x in (f"a{i}", f"b{i}")]
    if second == 1:
        return gens + ["c", "d"]
    return gens + [x for j in range(1, second + 1) for x in (f"c{j}", f"d{j}")]


def yn_complement(n: int) -> Presentation:
    """Sigma_2 x Sigma_n minus the 2n+4 tori of Y_n(m)."""
    rels = [
        "[a1,c1]", "[a1,c2]", "[a1,d2]", "[b1,c1]",
        "[a2,c1]", "[a2,c2]", "[a2,d1]", "[b2,c2]",
        "[a1,b1]*[a2,b2]",
        "*".join(f"[c{j},d{j}]" for j in range(1, n + 1)),
    ]
    for j in range(3, n + 1):
        rels += [f"[b1,c{j}]", f"[b2,d{j}]"]
    return _pres(_gens_sigma(2, n), rels)


def stated_relations_yn(n: int, m: int) -> list[tuple[str, str]]:
    rels = [
        ("[b1^-1,d1^-1]", "a1"), ("[a1^-1,d1]", "b1"), ("[b2^-1,d2^-1]", "a2"), ("[a2^-1,d2]", "b2"),
        ("[d1^-1,b2^-1]", "c1"), ("[c1^-1,b2]", "d1"), ("[d2^-1,b1^-1]", "c2"), (f"[c2^-1,b1]^{m}", "d2"),
        ("[a1,c1]", "1"), ("[a1,c2]", "1"), ("[a1,d2]", "1"), ("[b1,c1]", "1"),
        ("[a2,c1]", "1"), ("[a2,c2]", "1"), ("[a2,d1]", "1"), ("[b2,c2]", "1"),
        ("[a1,b1]*[a2,b2]", "1"),
        ("*".join(f"[c{j},d{j}]" for j in range(1, n + 1)), "1"),
    ]
    for j in range(3, n + 1):
        rels += [(f"[a1^-1,d{j}^-1]", f"c{j}"), (f"[a2^-1,c{j}^-1]", f"d{j}")]
    for j in range(3, n + 1):
        rels += [(f"[b1,c{j}]", "1"), (f"[b2,d{j}]", "1")]
    return rels


def y1pq_complement() -> Presentation:
    """Sigma_3 x T^2 minus the six tori of Y_1(1/p, m/q).

    The surface relation is [a1,b1][a2,b2][a3,b3]. A literal reading of the
    source list gives "[a_1,b_1][a_2,b_2][a_2,b_2]=1", which cannot be the
    relation of a genus 3 surface.
    """
    rels = [
        "[a1,c]", "[b1,c]", "[a2,c]", "[b2,c]", "[a3,c]", "[a3,d]",
        "[a1,b1]*[a2,b2]*[a3,b3]",
        "[c,d]",
    ]
    return _pres(_gens_sigma(3, 1), rels)


def stated_relations_y1pq(p: int, q: int, m: int) -> list[tuple[str, str]]:
    return [
        ("[b1^-1,d^-1]", "a1"), ("[a1^-1,d]", "b1"), ("[b2^-1,d^-1]", "a2"), ("[a2^-1,d]", "b2"),
        ("[d^-1,b3^-1]", f"c^{p}"), (f"[c^-1,b3]^{-m}", f"d^{q}"),
        ("[a1,c]", "1"), ("[b1,c]", "1"), ("[a2,c]", "1"), ("[b2,c]", "1"),
        ("[a3,c]", "1"), ("[a3,d]", "1"),
        ("[a1,b1]*[a2,b2]*[a3,b3]", "1"), ("[c,d]", "1"),
    ]


def zn_complement(n: int) -> Presentation:
    """Sigma_3 x Sigma_n analogue of yn_complement (no explicit list is published)."""
    rels = [
        "[a1,c1]", "[a1,c2]", "[a1,d2]", "[b1,c1]",
        "[a2,c1]", "[a2,c2]", "[a2,d1]", "[b2,c2]",
        "[a3,c2]", "[b3,c2]",
        "[a1,b1]*[a2,b2]*[a3,b3]",
        "*".join(f"[c{j},d{j}]" for j in range(1, n + 1)),
    ]
    for j in range(3, n + 1):
        rels += [f"[b1,c{j}]", f"[b2,d{j}]"]
    return _pres(_gens_sigma(3, n), rels)


def stated_presentation(pairs: list[tuple[str, str]], generators: tuple[str, ...]) -> Presentation:
    """Presentation with relators lhs * rhs^-1."""
    rels = [parse_word(l) * parse_word(r).inverse() for l, r in pairs]
    return Presentation(generators, tuple(rels))


COMPLEMENTS = {
    "Yn": lambda params: yn_complement(params["n"]),
    "Y1pq": lambda params: y1pq_complement(),
    "Zn": lambda params: zn_complement(params["n"]),
}
