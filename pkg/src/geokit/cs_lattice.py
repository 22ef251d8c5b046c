"""The Cartwright-Steger lattice: Hermitian form, generators and their relations.

Every matrix entry is written as a coefficient tuple (c0, c1, c2, c3) meaning
c0 + c1*z + c2*z^2 + c3*z^3 with z = exp(2*pi*i/12).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .cyclotomic import SQRT3, CycMatrix, CyclotomicElement, ScalarWitness, scalar_equivalent, verify_form_preservation
from .groups import Presentation, Word, abelianized_matrix, h1
from .lattice import AbelianGroup, IntMatrix, snf

# fmt: off
FORM_A = CycMatrix.from_rows([
    [(-1, -2, 0, 1),   # -1 - sqrt3
     (1, 0, 0, 0),     # 1
     (0, 0, 0, 0)],    # 0
    [(1, 0, 0, 0),     # 1
     (1, -2, 0, 1),    # 1 - sqrt3
     (0, 0, 0, 0)],    # 0
    [(0, 0, 0, 0),     # 0
     (0, 0, 0, 0),     # 0
     (1, 0, 0, 0)],    # 1
])

GEN_U = CycMatrix.from_rows([
    [(1, 0, 0, 0),     # 1
     (0, 0, 0, 0),     # 0
     (0, 0, 0, 0)],    # 0
    [(1, 1, -1, -1),   # -z^3 - z^2 + z + 1
     (0, 0, 0, 1),     # z^3
     (0, 0, 0, 0)],    # 0
    [(0, 0, 0, 0),     # 0
     (0, 0, 0, 0),     # 0
     (1, 0, 0, 0)],    # 1
])

GEN_V = CycMatrix.from_rows([
    [(1, 0, 0, 1),     # z^3 + 1
     (1, -1, -1, 1),   # z^3 - z^2 - z + 1
     (0, 0, 0, 0)],    # 0
    [(0, 1, 1, 0),     # z^2 + z
     (-1, 0, 0, -1),   # -z^3 - 1
     (0, 0, 0, 0)],    # 0
    [(0, 0, 0, 0),     # 0
     (0, 0, 0, 0),     # 0
     (1, 0, 0, 0)],    # 1
])

GEN_J = CycMatrix.from_rows([
    [(0, 1, 0, 0),     # z
     (0, 0, 0, 0),     # 0
     (0, 0, 0, 0)],    # 0
    [(0, 0, 0, 0),     # 0
     (0, 1, 0, 0),     # z
     (0, 0, 0, 0)],    # 0
    [(0, 0, 0, 0),     # 0
     (0, 0, 0, 0),     # 0
     (1, 0, 0, 0)],    # 1
])

GEN_B = CycMatrix.from_rows([
    [(0, 0, 1, 1),     # z^3 + z^2
     (0, 0, -1, 0),    # -z^2
     (-1, 0, 1, 0)],   # z^2 - 1
    [(0, 1, 2, 1),     # z^3 + 2z^2 + z
     (0, -1, 0, 0),    # -z
     (0, 0, 1, 1)],    # z^3 + z^2
    [(1, 1, -1, -1),   # -z^3 - z^2 + z + 1
     (0, 0, 0, 1),     # z^3
     (1, 1, 0, -1)],   # -z^3 + z + 1
])
# fmt: on

GENERATORS: dict[str, CycMatrix] = {"u": GEN_U, "v": GEN_V, "j": GEN_J, "b": GEN_B}

# (label, left word, right word); words are strings over u, v, j, b
STATED_RELATIONS: tuple[tuple[str, str, str], ...] = (
    ("vubj = u", "vubj", "u"),
    ("bj^2 = ju", "bjj", "ju"),
    ("u^2vbu = j^2", "uuvbu", "jj"),
)


def evaluate(word: str, gens: dict[str, CycMatrix] | None = None) -> CycMatrix:
    """Product of generator matrices, left to right; upper case means inverse."""
    gens = gens or GENERATORS
    out = CycMatrix.identity()
    for ch in word:
        m = gens[ch.lower()]
        out = out @ (m if ch.islower() else m.inverse())
    return out


def projective_order(m: CycMatrix, bound: int = 48) -> int | None:
    """Least k with m^k scalar, searched up to bound."""
    p = CycMatrix.identity()
    for k in range(1, bound + 1):
        p = p @ m
        if p.scalar_value() is not None:
            return k
    return None


def relation_presentation() -> Presentation:
    rels = []
    for _, lhs, rhs in STATED_RELATIONS:
        rels.append(Word((c, 1) for c in lhs) * Word((c, 1) for c in rhs).inverse())
    return Presentation(("u", "v", "j", "b"), tuple(rels))


def short_scalar_relations(max_length: int) -> list[str]:
    """Freely reduced words in u, v, j, b (and inverses) that act as scalars.

    Words using a single generator are omitted (they are covered by
    projective_order), as are cyclic rotations and inverses of a reported word.
    """
    letters = {"u": GEN_U, "v": GEN_V, "j": GEN_J, "b": GEN_B}
    letters.update({k.upper(): m.inverse() for k, m in list(letters.items())})
    found: list[str] = []
    seen: set[str] = set()

    def canon(w: str) -> str:
        rots = [w[i:] + w[:i] for i in range(len(w))]
        inv = w[::-1].swapcase()
        rots += [inv[i:] + inv[:i] for i in range(len(inv))]
        return min(rots)

    def rec(w: str, m: CycMatrix) -> None:
        if w and len(set(w.lower())) > 1 and m.scalar_value() is not None:
            key = canon(w)
            if key not in seen:
                seen.add(key)
                found.append(key)
            return
        if len(w) == max_length:
            return
        for c, x in letters.items():
            if w and c == w[-1].swapcase():
                continue
            rec(w + c, m @ x)

    rec("", CycMatrix.identity())
    return sorted(found, key=lambda s: (len(s), s))


@dataclass
class RelationCheck:
    label: str
    lhs: str
    rhs: str
    witness: ScalarWitness | None
    quotient: CycMatrix  # lhs * rhs^-1

    @property
    def holds(self) -> bool:
        return self.witness is not None


@dataclass
class RelationReport:
    sqrt3_squared: CyclotomicElement
    form_hermitian: bool
    form_preserved: dict[str, bool]
    determinants: dict[str, CyclotomicElement]
    orders: dict[str, int | None]
    relations: list[RelationCheck]
    abelianization: AbelianGroup
    abelianization_factors: tuple[int, ...]
    short_relations: list[str] = field(default_factory=list)

    @property
    def forms_ok(self) -> bool:
        return all(self.form_preserved.values())

    @property
    def relations_ok(self) -> bool:
        return all(r.holds for r in self.relations)

    @property
    def abelianization_matches_claim(self) -> bool:
        # the lattice is said to have abelianisation Z^2
        return self.abelianization == AbelianGroup(2)

    @property
    def ok(self) -> bool:
        return self.sqrt3_squared == 3 and self.form_hermitian and self.forms_ok and self.relations_ok


def cs_relation_report(search_length: int = 0) -> RelationReport:
    relations = []
    for label, lhs, rhs in STATED_RELATIONS:
        left, right = evaluate(lhs), evaluate(rhs)
        relations.append(RelationCheck(label, lhs, rhs, scalar_equivalent(left, right, label), left @ right.inverse()))
    pres = relation_presentation()
    factors = snf(abelianized_matrix(pres)).invariant_factors
    return RelationReport(
        sqrt3_squared=SQRT3 * SQRT3,
        form_hermitian=FORM_A.H == FORM_A,
        form_preserved={k: verify_form_preservation(m, FORM_A) for k, m in GENERATORS.items()},
        determinants={k: m.det() for k, m in GENERATORS.items()},
        orders={k: projective_order(m) for k, m in GENERATORS.items()},
        relations=relations,
        abelianization=h1(pres),
        abelianization_factors=factors,
        short_relations=short_scalar_relations(search_length) if search_length else [],
    )


def dump_generators() -> str:
    """Canonical text table of the form and generator entries."""
    lines = ["# matrix row col c0 c1 c2 c3  (entry = c0 + c1 z + c2 z^2 + c3 z^3, z = exp(2 pi i/12))"]
    for name, m in (("A", FORM_A), *GENERATORS.items()):
        for i, k in product(range(3), range(3)):
            c = m[i, k].coefficients
            lines.append(f"{name} {i} {k} " + " ".join(str(x) for x in c))
    return "\n".join(lines) + "\n"


def relation_matrix() -> IntMatrix:
    return abelianized_matrix(relation_presentation())
