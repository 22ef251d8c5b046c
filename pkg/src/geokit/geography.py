"""Invariant bookkeeping for 4-manifold building blocks.

A Block carries Euler characteristic and signature, optional b1 and a
presentation of pi1, the embedded surfaces the constructions need, and
annotation fields (parity, minimality) whose values come from stated rules,
not from computing an intersection form.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .errors import (
    GenusMismatch,
    HalfIntegerB2,
    InvariantViolation,
    MissingPresentation,
    NegativeGenus,
    NonIntegralGenus,
    SquareMismatch,
    UnknownB1,
    UnknownSurface,
    UnsupportedIntersectionPattern,
)
from .groups import (
    IDENTITY,
    Presentation,
    SurgeryDatum,
    Word,
    add_relators,
    apply_surgery,
    attach_rationally_trivial_side,
    commutator,
    free_product,
    h1_result,
    identify_generators,
)


class Parity(str, enum.Enum):
    ODD = "odd"
    EVEN = "even"
    UNKNOWN = "unknown"


def adjunction_genus(self_intersection: int, k_pairing: int) -> int:
    """Genus of an embedded symplectic surface: 1 + (S.S + K.S)/2."""
    total = self_intersection + k_pairing
    if total % 2:
        raise NonIntegralGenus(f"S.S + K.S = {total} is odd")
    if total < -2:
        raise NegativeGenus(f"S.S + K.S = {total} gives negative genus")
    return 1 + total // 2


@dataclass(frozen=True)
class TrackedSurface:
    label: str
    genus: int
    self_intersection: int
    k_pairing: int | None = None
    symplectic: bool = True
    adjunction_exact: bool = False
    # pi1 data inside the owning block's presentation
    generators: tuple[Word, ...] | None = None
    meridian: Word | None = None
    meridian_trivial: bool = False
    # labels of other tracked surfaces met transversely, with point counts
    meets: tuple[tuple[str, int], ...] = ()
    # square-zero class with disjoint parallel copies (a fibre)
    fiber: bool = False

    def __post_init__(self):
        if self.genus < 0:
            raise NegativeGenus(f"surface {self.label} has genus {self.genus}")
        if self.adjunction_exact and self.k_pairing is not None:
            expected = adjunction_genus(self.self_intersection, self.k_pairing)
            if expected != self.genus:
                raise InvariantViolation(
                    f"surface {self.label}: genus {self.genus} but adjunction gives {expected}"
                )

    def intersections_with(self, label: str) -> int:
        return sum(c for lab, c in self.meets if lab == label)

    def describe(self) -> str:
        k = "" if self.k_pairing is None else f" K.S={self.k_pairing}"
        return f"{self.label}: genus {self.genus}, square {self.self_intersection}{k}"


@dataclass(frozen=True)
class CharNumbers:
    chi_h: Fraction
    c1sq: int
    on_bmy_line: bool


@dataclass(frozen=True)
class Block:
    name: str
    euler: int
    signature: int
    b1: int | None = None
    symplectic: bool = False
    minimal: bool | None = None
    parity: Parity = Parity.UNKNOWN
    parity_note: str = ""
    surfaces: tuple[TrackedSurface, ...] = ()
    presentation: Presentation | None = None
    # placeholder generators standing for unknown words from a glued side,
    # mapped to the b1 of the side they came from
    open_sides: tuple[tuple[str, tuple[str, ...], int | None], ...] = ()
    betti: tuple[int, ...] | None = None
    provenance: tuple[str, ...] = ()
    annotations: tuple[str, ...] = ()

    def __post_init__(self):
        if self.symplectic and (self.euler + self.signature) % 4:
            raise InvariantViolation(
                f"{self.name}: e + sigma = {self.euler + self.signature} not divisible by 4 "
                "for an almost-complex block"
            )
        if self.betti is not None:
            alt = sum((-1) ** i * x for i, x in enumerate(self.betti))
            if alt != self.euler:
                raise InvariantViolation(f"{self.name}: Betti numbers {self.betti} give e = {alt}, not {self.euler}")
            if self.b1 is not None and self.betti[1] != self.b1:
                raise InvariantViolation(f"{self.name}: b1 = {self.b1} disagrees with Betti numbers")
        labels = [s.label for s in self.surfaces]
        if len(set(labels)) != len(labels):
            raise InvariantViolation(f"{self.name}: duplicate surface labels {labels}")

    @property
    def chi_h(self) -> Fraction:
        return Fraction(self.euler + self.signature, 4)

    @property
    def c1sq(self) -> int:
        return 2 * self.euler + 3 * self.signature

    def char_numbers(self) -> CharNumbers:
        return CharNumbers(self.chi_h, self.c1sq, self.c1sq == 9 * self.chi_h)

    @property
    def open_generators(self) -> frozenset[str]:
        return frozenset(g for _, gens, _ in self.open_sides for g in gens)

    def surface(self, label: str) -> TrackedSurface:
        for s in self.surfaces:
            if s.label == label:
                return s
        raise UnknownSurface(f"{self.name} has no tracked surface {label!r} (have {[s.label for s in self.surfaces]})")

    def with_surface(self, surface: TrackedSurface) -> Block:
        others = tuple(s for s in self.surfaces if s.label != surface.label)
        return replace(self, surfaces=others + (surface,))

    def annotate(self, note: str) -> Block:
        return replace(self, annotations=self.annotations + (note,))


def _ident(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", name)


def _b1_from(pres: Presentation | None, open_sides) -> int | None:
    if pres is None or open_sides:
        return None
    return h1_result(pres).b1


def _parity_from_surfaces(surfaces: Sequence[TrackedSurface]) -> tuple[Parity, str] | None:
    for s in surfaces:
        if s.self_intersection % 2:
            return Parity.ODD, f"tracked class {s.label} has odd square {s.self_intersection}"
    return None


# --- catalogue -------------------------------------------------------------


def _factor_names(genus: int, first: bool) -> list[tuple[str, str]]:
    if first:
        return [(f"a{i}", f"b{i}") for i in range(1, genus + 1)]
    if genus == 1:
        return [("c", "d")]
    return [(f"c{i}", f"d{i}") for i in range(1, genus + 1)]


def _surface_relator(pairs: list[tuple[str, str]]) -> Word:
    w = IDENTITY
    for x, y in pairs:
        w = w * commutator(Word.gen(x), Word.gen(y))
    return w


def product_block(g: int, h: int) -> Block:
    """Sigma_g x Sigma_h with its two fibre classes."""
    if g < 0 or h < 0:
        raise NegativeGenus("genera must be non-negative")
    left, right = _factor_names(g, True), _factor_names(h, False)
    lg = [x for p in left for x in p]
    rg = [x for p in right for x in p]
    rels: list[Word] = []
    rel_l, rel_r = _surface_relator(left), _surface_relator(right)
    if g:
        rels.append(rel_l)
    if h:
        rels.append(rel_r)
    rels += [commutator(Word.gen(x), Word.gen(y)) for x in lg for y in rg]
    pres = Presentation(tuple(lg + rg), tuple(rels))
    horiz = f"Sigma{g}xpt"
    vert = f"ptxSigma{h}"
    surfaces = (
        TrackedSurface(
            horiz, g, 0, 2 * g - 2, True, True,
            generators=tuple(Word.gen(x) for x in lg),
            meridian=rel_r if h else None,
            meridian_trivial=h == 0,
            meets=((vert, 1),),
            fiber=True,
        ),
        TrackedSurface(
            vert, h, 0, 2 * h - 2, True, True,
            generators=tuple(Word.gen(x) for x in rg),
            meridian=rel_l if g else None,
            meridian_trivial=g == 0,
            meets=((horiz, 1),),
            fiber=True,
        ),
    )
    return Block(
        name=f"Sigma{g}xSigma{h}",
        euler=(2 - 2 * g) * (2 - 2 * h),
        signature=0,
        b1=2 * g + 2 * h,
        symplectic=True,
        minimal=None,
        parity=Parity.EVEN,
        parity_note="product of surfaces is spin",
        surfaces=surfaces,
        presentation=pres,
        provenance=(f"product({g},{h})",),
    )


def mumford_m() -> Block:
    # K = 3L and L is carried by a symplectic surface H with H.H = 1
    h = TrackedSurface("H", 3, 1, 3, True, True)
    return Block(
        name="M",
        euler=3,
        signature=1,
        b1=0,
        symplectic=True,
        minimal=True,
        parity=Parity.ODD,
        parity_note="intersection form (1)",
        surfaces=(h,),
        betti=(1, 0, 1, 0, 1),
        provenance=("mumford",),
        annotations=("minimal surface of general type (stated)",),
    )


def cs_surface(n: int = 1) -> Block:
    """Cartwright-Steger surface M_n, an n-fold cover of M_1 (e = 3n, sigma = n)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return Block(
            name="M_1",
            euler=3,
            signature=1,
            b1=2,
            symplectic=True,
            minimal=True,
            parity=Parity.ODD,
            parity_note="intersection form 3(1) + 2(-1)",
            betti=(1, 2, 5, 2, 1),
            provenance=("cs_surface(1)",),
            annotations=("intersection form 3(1) + 2(-1) (stated)",),
        )
    return Block(
        name=f"M_{n}",
        euler=3 * n,
        signature=n,
        b1=None,
        symplectic=True,
        minimal=True,
        parity=Parity.UNKNOWN,
        parity_note="form of M_n not recorded for n > 1",
        provenance=(f"cs_surface({n})",),
    )


def builtin_blocks() -> dict[str, Block]:
    m_blown = blow_up(mumford_m(), "H", 1)
    return {
        "M": mumford_m(),
        "M#CP2bar": m_blown,
        "M_1": cs_surface(1),
        "M_2": cs_surface(2),
        "M_3": cs_surface(3),
        "Sigma3xT2": product_block(3, 1),
        "Sigma2xS2": product_block(2, 0),
        "Sigma2xSigma2": product_block(2, 2),
        "Sigma2xSigma3": product_block(2, 3),
    }


CATALOG = {
    "mumford": mumford_m,
    "cs_surface": cs_surface,
    "product": product_block,
}


# --- operations ------------------------------------------------------------


def blow_up(b: Block, surface: str | None = None, multiplicity: int = 1, exceptional: str = "E") -> Block:
    """Blow up a point, lying on `surface` with the given multiplicity if named."""
    if multiplicity < 0:
        raise ValueError("multiplicity must be non-negative")
    label = exceptional
    taken = {s.label for s in b.surfaces}
    k = 2
    while label in taken:
        label = f"{exceptional}{k}"
        k += 1
    surfaces = []
    ex_meets: tuple[tuple[str, int], ...] = ()
    for s in b.surfaces:
        if surface is not None and s.label == surface:
            s = replace(
                s,
                self_intersection=s.self_intersection - multiplicity**2,
                k_pairing=None if s.k_pairing is None else s.k_pairing + multiplicity,
                # the exceptional sphere caps off a meridian it meets once
                meridian_trivial=s.meridian_trivial or multiplicity == 1,
                meets=s.meets + ((label, multiplicity),) if multiplicity else s.meets,
                fiber=False,
            )
            if multiplicity:
                ex_meets = ((s.label, multiplicity),)
        surfaces.append(s)
    if surface is not None and not any(s.label == surface for s in b.surfaces):
        raise UnknownSurface(f"{b.name} has no tracked surface {surface!r}")
    surfaces.append(TrackedSurface(label, 0, -1, -1, True, True, meets=ex_meets))
    return replace(
        b,
        name=f"{b.name}#CP2bar",
        euler=b.euler + 1,
        signature=b.signature - 1,
        minimal=False,
        parity=Parity.ODD,
        parity_note=f"exceptional sphere {label} has square -1",
        surfaces=tuple(surfaces),
        betti=None if b.betti is None else (b.betti[0], b.betti[1], b.betti[2] + 1, b.betti[3], b.betti[4]),
        provenance=b.provenance + (f"blow_up({surface or '-'},{multiplicity})",),
    )


def sew_surfaces(s1: TrackedSurface, s2: TrackedSurface, intersections_with_gluing_surface: int = 1,
                 label: str | None = None) -> TrackedSurface:
    """Join two surfaces, each punctured once by the gluing surface, across the neck."""
    if intersections_with_gluing_surface != 1:
        raise UnsupportedIntersectionPattern(
            f"sewing needs one intersection with the gluing surface, got {intersections_with_gluing_surface}"
        )
    return TrackedSurface(
        label or s1.label,
        s1.genus + s2.genus,
        s1.self_intersection + s2.self_intersection,
        None,
        s1.symplectic and s2.symplectic,
        False,
        meets=s1.meets,
    )


@dataclass(frozen=True)
class GluingSpec:
    """How surface generators are identified across a fibre sum.

    pairing[i] = k pairs the i-th generator of the first surface with the
    k-th of the second; None pairs them in order.
    """

    name: str = "id"
    pairing: tuple[int, ...] | None = None


def _side(block: Block, surf: TrackedSurface, prefix: str):
    """Complement presentation of one side plus its surface words and meridian."""
    g2 = 2 * surf.genus
    if block.presentation is not None and surf.generators is not None:
        pres = block.presentation
        meridian = surf.meridian
        if meridian is not None:
            pres = pres.without_relator(meridian)
        opened = ()
        gens = surf.generators
        if surf.meridian_trivial:
            meridian = IDENTITY
        elif meridian is None:
            mu = f"{prefix}mu"
            pres = Presentation(pres.generators + (mu,), pres.relators, pres.rationally_trivial)
            meridian = Word.gen(mu)
        return pres, gens, meridian, opened, block.open_sides
    # words of the surface generators are unknown on this side
    names = tuple(f"{prefix}alpha{i}" for i in range(1, g2 + 1))
    gens_l = list(names)
    meridian = IDENTITY
    if not surf.meridian_trivial:
        gens_l.append(f"{prefix}mu")
        meridian = Word.gen(f"{prefix}mu")
    pres = Presentation(tuple(gens_l))
    opened = ((prefix.rstrip("."), names, block.b1),)
    return pres, tuple(Word.gen(x) for x in names), meridian, opened, ()


def fiber_sum(
    a: Block,
    surface_a: str,
    b: Block,
    surface_b: str,
    gluing: GluingSpec = GluingSpec(),
    sew: Sequence[tuple[str, str]] = (),
    name: str | None = None,
    prefix_a: str | None = None,
    prefix_b: str | None = None,
) -> Block:
    """Normal connected sum along surfaces of equal genus and opposite square."""
    sa, sb = a.surface(surface_a), b.surface(surface_b)
    if sa.genus != sb.genus:
        raise GenusMismatch(f"genus {sa.genus} vs {sb.genus}")
    if sa.self_intersection + sb.self_intersection != 0:
        raise SquareMismatch(f"squares {sa.self_intersection} and {sb.self_intersection} do not cancel")
    g = sa.genus
    prefix_a = (prefix_a if prefix_a is not None else _ident(a.name)) + "."
    prefix_b = (prefix_b if prefix_b is not None else _ident(b.name)) + "."

    pres = None
    open_sides = ()
    pa = _side(a, sa, prefix_a)
    pb = _side(b, sb, prefix_b)
    pres_a, gens_a, mu_a, opened_a, open_a = pa
    pres_b, gens_b, mu_b, opened_b, open_b = pb
    mapping = {gname: prefix_b + gname for gname in pres_b.generators} if set(pres_a.generators) & set(pres_b.generators) else {}
    if mapping:
        pres_b = pres_b.rename(mapping)
        gens_b = tuple(w.rename(mapping) for w in gens_b)
        mu_b = mu_b.rename(mapping)
    order = gluing.pairing or tuple(range(len(gens_b)))
    if len(gens_a) != len(gens_b) or sorted(order) != list(range(len(gens_b))):
        raise GenusMismatch("surface generator lists do not match for the gluing")
    pres = free_product(pres_a, pres_b)
    pres = identify_generators(pres, [(gens_a[i], gens_b[order[i]]) for i in range(len(gens_a))])
    # meridians are glued with opposite orientation
    pres = add_relators(pres, [mu_a * mu_b])
    open_sides = open_a + opened_a + open_b + opened_b

    # surfaces
    keep_a_copy = sa.fiber
    sewn_a = {x for x, _ in sew}
    sewn_b = {y for _, y in sew}
    survivors: list[TrackedSurface] = []
    for s in a.surfaces:
        if s.label == surface_a:
            if keep_a_copy:
                survivors.append(replace(s, meets=tuple(m for m in s.meets if m[0] != surface_a)))
            continue
        if s.intersections_with(surface_a) and s.label not in sewn_a:
            continue
        if s.label in sewn_a:
            continue
        survivors.append(s)
    b_labels = {s.label for s in survivors}
    for s in b.surfaces:
        if s.label == surface_b or s.label in sewn_b or s.intersections_with(surface_b):
            continue
        lab = s.label if s.label not in b_labels else prefix_b + s.label
        survivors.append(replace(s, label=lab, generators=None, meridian=None))
    for x, y in sew:
        s1, s2 = a.surface(x), b.surface(y)
        n1, n2 = s1.intersections_with(surface_a), s2.intersections_with(surface_b)
        if n1 != 1 or n2 != 1:
            raise UnsupportedIntersectionPattern(
                f"{x} meets {surface_a} {n1} time(s) and {y} meets {surface_b} {n2} time(s); sewing needs exactly one each"
            )
        joined = sew_surfaces(s1, s2, 1)
        if not keep_a_copy:
            joined = replace(joined, meets=tuple(m for m in joined.meets if m[0] != surface_a))
        survivors.append(joined)

    parity = _parity_from_surfaces(survivors)
    par, note = parity if parity else (Parity.UNKNOWN, "no odd class tracked; form not computed")
    symplectic = a.symplectic and b.symplectic and sa.symplectic and sb.symplectic
    return Block(
        name=name or f"{a.name}#_{gluing.name}{b.name}",
        euler=a.euler + b.euler - 2 * (2 - 2 * g),
        signature=a.signature + b.signature,
        b1=_b1_from(pres, open_sides),
        symplectic=symplectic,
        minimal=None,
        parity=par,
        parity_note=note,
        surfaces=tuple(survivors),
        presentation=pres,
        open_sides=open_sides,
        provenance=a.provenance + b.provenance + (f"fiber_sum({surface_a},{surface_b},{gluing.name})",),
        annotations=a.annotations + b.annotations,
    )


def torus_surgery(b: Block, datum: SurgeryDatum, torus_label: str = "") -> Block:
    """Surgery on a Lagrangian torus: (e, sigma) fixed, one relator added."""
    if b.presentation is None:
        raise MissingPresentation(f"{b.name} has no presentation to operate on")
    pres = apply_surgery(b.presentation, datum)
    symplectic = b.symplectic and datum.is_luttinger
    label = torus_label or datum.label
    return replace(
        b,
        presentation=pres,
        b1=_b1_from(pres, b.open_sides),
        symplectic=symplectic,
        minimal=None,
        parity=Parity.UNKNOWN,
        parity_note="torus surgery may change the form; parity not tracked",
        betti=None,
        provenance=b.provenance + (f"surgery({label},{datum.coefficient()})",),
    )


def attach_unknown_side(b: Block, names: Sequence[str]) -> Block:
    """Declare placeholder generators of finite order (group-level attach on a block)."""
    if b.presentation is None:
        raise MissingPresentation(f"{b.name} has no presentation")
    pres = attach_rationally_trivial_side(b.presentation, names)
    chosen = set(names)
    remaining = []
    notes = []
    for side, gens, side_b1 in b.open_sides:
        left = tuple(g for g in gens if g not in chosen)
        if len(left) < len(gens):
            why = "b1 = 0 there" if side_b1 == 0 else f"b1 = {side_b1} there, not justified"
            notes.append(f"{side}: surface words treated as finite order ({why})")
        if left:
            remaining.append((side, left, side_b1))
    remaining_t = tuple(remaining)
    return replace(
        b,
        presentation=pres,
        open_sides=remaining_t,
        b1=_b1_from(pres, remaining_t),
        annotations=b.annotations + tuple(notes),
        provenance=b.provenance + (f"attach({len(chosen)} generators)",),
    )


@dataclass(frozen=True)
class Profile:
    euler: int
    signature: int
    b1: int
    b2: int
    b2_plus: int
    b2_minus: int
    chi_h: Fraction
    c1sq: int
    bmy: bool
    parity: Parity
    model: str | None

    def as_dict(self) -> dict:
        return {
            "e": self.euler,
            "sigma": self.signature,
            "b1": self.b1,
            "b2": self.b2,
            "b2_plus": self.b2_plus,
            "b2_minus": self.b2_minus,
            "chi_h": str(self.chi_h),
            "c1sq": self.c1sq,
            "bmy": self.bmy,
            "parity": self.parity.value,
            "model": self.model,
        }


def rational_model(b2_plus: int, b2_minus: int, b1: int, parity: Parity) -> str | None:
    if parity is Parity.ODD:
        parts = []
        for k, sym in ((b2_plus, "CP2"), (b2_minus, "CP2bar")):
            if k == 1:
                parts.append(sym)
            elif k > 1:
                parts.append(f"{k}{sym}")
        core = "#".join(parts) or "S4"
    elif parity is Parity.EVEN and b2_plus == b2_minus:
        core = f"{b2_plus}(S2xS2)" if b2_plus else "S4"
        if b2_plus == 1:
            core = "S2xS2"
    else:
        return None
    if b1:
        core += f"#{b1}(S1xS3)" if b1 > 1 else "#S1xS3"
    return core


def homology_profile(b: Block) -> Profile:
    if b.b1 is None:
        raise UnknownB1(f"b1 of {b.name} is unknown")
    b2 = b.euler - 2 + 2 * b.b1
    if b2 < 0 or (b2 + b.signature) % 2 or abs(b.signature) > b2:
        raise HalfIntegerB2(f"e = {b.euler}, sigma = {b.signature}, b1 = {b.b1} give inconsistent b2 = {b2}")
    bp, bm = (b2 + b.signature) // 2, (b2 - b.signature) // 2
    cn = b.char_numbers()
    return Profile(
        b.euler, b.signature, b.b1, b2, bp, bm, cn.chi_h, cn.c1sq, cn.on_bmy_line, b.parity,
        rational_model(bp, bm, b.b1, b.parity),
    )
