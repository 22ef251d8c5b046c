"""Finitely presented groups at the level needed for first homology.

Words are run-length encoded tuples of ``(generator, exponent)`` pairs and are
freely reduced on construction. The commutator convention is fixed
project-wide as ``[a, b] = a^-1 b^-1 a b``; only exponent sums reach H1, so the
bracket order never affects a computed invariant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import UnknownGenerator, WordSyntaxError
from .lattice import AbelianGroup, IntMatrix, cokernel

Letter = tuple[str, int]

_IDENT = r"[A-Za-z_][A-Za-z0-9_.']*"


def _normalise(pairs: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[list] = []
    for g, e in pairs:
        if not e:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True, slots=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _normalise(letters))

    @classmethod
    def gen(cls, name: str, exp: int = 1) -> Word:
        return cls(((name, exp),))

    @classmethod
    def parse(cls, text: str) -> Word:
        return parse_word(text)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: str) -> int:
        return sum(e for h, e in self.letters if h == g)

    def rename(self, mapping: dict[str, str]) -> Word:
        return Word((mapping.get(g, g), e) for g, e in self.letters)

    def substitute(self, images: dict[str, Word]) -> Word:
        out = Word()
        for g, e in self.letters:
            out = out * (images[g] ** e if g in images else Word.gen(g, e))
        return out

    def syllables(self) -> list[Letter]:
        """Expanded into unit letters (g, +-1)."""
        return [(g, 1 if e > 0 else -1) for g, e in self.letters for _ in range(abs(e))]

    def cyclically_reduced(self) -> Word:
        s = self.syllables()
        while len(s) >= 2 and s[0][0] == s[-1][0] and s[0][1] == -s[-1][1]:
            s = s[1:-1]
        return Word(s)

    def is_cyclic_conjugate(self, other: Word) -> bool:
        """True if other is a cyclic permutation of this word or of its inverse."""
        a = self.cyclically_reduced().syllables()
        for cand in (other.cyclically_reduced(), other.cyclically_reduced().inverse()):
            b = cand.syllables()
            if len(a) != len(b):
                continue
            if not a:
                return True
            for r in range(len(b)):
                if b[r:] + b[:r] == a:
                    return True
        return False

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


IDENTITY = Word()


def free_reduce(w: Word) -> Word:
    return Word(w.letters)


def commutator(a: Word, b: Word) -> Word:
    return a.inverse() * b.inverse() * a * b


# --- word syntax -----------------------------------------------------------
# atom    := IDENT | '1' | '[' word ',' word ']' | '(' word ')'
# factor  := atom ('^' INT)?
# word    := factor ('*' factor)*

_TOKEN = re.compile(rf"\s*(?:(?P<id>{_IDENT})|(?P<int>-?\d+)|(?P<op>[\^*\[\](),]))")


class _WordParser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise WordSyntaxError(f"unexpected character {text[pos]!r} at column {pos + 1} in {text!r}")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            raise WordSyntaxError(f"expected {want!r} at column {tok[2] + 1} in {self.text!r}")
        self.i += 1
        return tok

    def word(self) -> Word:
        w = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            w = w * self.factor()
        return w

    def factor(self) -> Word:
        w = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            w = w ** int(self.take(kind="int")[1])
        return w

    def atom(self) -> Word:
        kind, val, col = self.peek()
        if kind == "id":
            self.take()
            return Word.gen(val)
        if kind == "int" and val == "1":
            self.take()
            return IDENTITY
        if val == "[":
            self.take("[")
            a = self.word()
            self.take(",")
            b = self.word()
            self.take("]")
            return commutator(a, b)
        if val == "(":
            self.take("(")
            w = self.word()
            self.take(")")
            return w
        raise WordSyntaxError(f"unexpected {val or 'end of input'!r} at column {col + 1} in {self.text!r}")


def parse_word(text: str) -> Word:
    p = _WordParser(text)
    if not p.toks:
        raise WordSyntaxError("empty word text (use '1' for the identity)")
    w = p.word()
    if p.i != len(p.toks):
        tok = p.peek()
        raise WordSyntaxError(f"trailing input at column {tok[2] + 1} in {text!r}")
    return w


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


# --- presentations ---------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    # generators declared to have finite order; see attach_rationally_trivial_side
    rationally_trivial: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "rationally_trivial", frozenset(self.rationally_trivial))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generator names in {self.generators}")
        known = set(self.generators)
        for w in self.relators:
            self._check(w, known)
        self._check_names(self.rationally_trivial, known)

    @staticmethod
    def _check(w: Word, known: set[str]) -> None:
        missing = w.generators() - known
        if missing:
            raise UnknownGenerator(f"unknown generator(s) {sorted(missing)} in {w}")

    @staticmethod
    def _check_names(names: Iterable[str], known: set[str]) -> None:
        missing = set(names) - known
        if missing:
            raise UnknownGenerator(f"unknown generator(s) {sorted(missing)}")

    def check_word(self, w: Word) -> None:
        self._check(w, set(self.generators))

    @classmethod
    def free(cls, *names: str) -> Presentation:
        return cls(names)

    def rename(self, mapping: dict[str, str]) -> Presentation:
        return Presentation(
            tuple(mapping.get(g, g) for g in self.generators),
            tuple(w.rename(mapping) for w in self.relators),
            frozenset(mapping.get(g, g) for g in self.rationally_trivial),
        )

    def without_relator(self, w: Word) -> Presentation:
        """Drop every relator that is a cyclic conjugate of w or its inverse."""
        kept = tuple(r for r in self.relators if not r.is_cyclic_conjugate(w))
        return Presentation(self.generators, kept, self.rationally_trivial)

    def to_text(self) -> str:
        lines = ["gen " + " ".join(self.generators) if self.generators else "gen"]
        lines += [f"rel {w}" for w in self.relators]
        if self.rationally_trivial:
            lines.append("qtriv " + " ".join(g for g in self.generators if g in self.rationally_trivial))
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        rels = ", ".join(str(w) for w in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


def parse_presentation(text: str) -> Presentation:
    """Line format: ``gen a b ...``, ``rel <word>`` lines, optional ``qtriv`` line."""
    gens: list[str] = []
    rels: list[Word] = []
    qtriv: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "gen":
                gens.extend(rest.split())
            elif head == "rel":
                rels.append(parse_word(rest))
            elif head == "qtriv":
                qtriv.extend(rest.split())
            else:
                raise WordSyntaxError(f"unknown directive {head!r}")
        except WordSyntaxError as exc:
            raise WordSyntaxError(f"line {lineno}: {exc}") from None
    return Presentation(tuple(gens), tuple(rels), frozenset(qtriv))


def disjoint_renaming(p: Presentation, q: Presentation, prefix: str = "r.") -> dict[str, str]:
    """Map Q's generators to names clashing with nothing in P (identity if already disjoint)."""
    taken = set(p.generators)
    if not taken & set(q.generators):
        return {}
    pre = prefix
    while taken & {pre + g for g in q.generators}:
        pre = prefix + pre
    return {g: pre + g for g in q.generators}


def free_product(p: Presentation, q: Presentation, prefix: str = "r.") -> Presentation:
    """P * Q; on a name clash every generator of Q is renamed with prefix."""
    mapping = disjoint_renaming(p, q, prefix)
    q = q.rename(mapping)
    return Presentation(
        p.generators + q.generators,
        p.relators + q.relators,
        p.rationally_trivial | q.rationally_trivial,
    )


def add_relators(p: Presentation, words: Sequence[Word]) -> Presentation:
    for w in words:
        p.check_word(w)
    return Presentation(p.generators, p.relators + tuple(words), p.rationally_trivial)


def identify_generators(p: Presentation, pairs: Sequence[tuple[Word, Word]]) -> Presentation:
    return add_relators(p, [w1 * w2.inverse() for w1, w2 in pairs])


def attach_rationally_trivial_side(p: Presentation, gens: Iterable[str]) -> Presentation:
    """Declare generators to be of finite order in the ambient group.

    Used when the other side of a gluing has vanishing rational H1 but its
    words are unknown. Rational b1 is then exact; integral torsion becomes a
    lower bound.
    """
    gens = set(gens)
    Presentation._check_names(gens, set(p.generators))
    return Presentation(p.generators, p.relators, p.rationally_trivial | gens)


@dataclass(frozen=True, slots=True)
class SurgeryDatum:
    """Torus surgery data; the added relator is meridian^numerator * push_off^(sign*denominator).

    A 1/k Luttinger surgery is numerator 1, denominator |k|, sign of k; the
    relator is then the familiar mu * lambda'^k.
    """

    meridian: Word
    push_off: Word
    numerator: int = 1
    denominator: int = 1
    sign: int = 1
    label: str = ""

    def __post_init__(self):
        if self.denominator < 0:
            raise ValueError("denominator must be non-negative")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def is_luttinger(self) -> bool:
        return self.numerator == 1

    def relator(self) -> Word:
        return self.meridian ** self.numerator * self.push_off ** (self.sign * self.denominator)

    def coefficient(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.numerator == 1 and self.denominator == 1:
            return f"{s}1"
        if self.denominator == 1:
            return f"{s}{self.numerator}"
        return f"{s}{self.numerator}/{self.denominator}"


def apply_surgery(p: Presentation, s: SurgeryDatum) -> Presentation:
    return add_relators(p, [s.relator()])


def abelianized_matrix(p: Presentation) -> IntMatrix:
    index = {g: k for k, g in enumerate(p.generators)}
    rows = []
    for w in p.relators:
        row = [0] * len(index)
        for g, e in w.letters:
            row[index[g]] += e
        rows.append(row)
    return IntMatrix.from_rows(rows, len(index))


@dataclass(frozen=True, slots=True)
class H1Result:
    group: AbelianGroup
    lower_bound: bool = False
    assumed_finite: tuple[str, ...] = ()

    @property
    def b1(self) -> int:
        return self.group.rank

    def __str__(self) -> str:
        s = str(self.group)
        if self.lower_bound:
            s += " (torsion is a lower bound)"
        return s


def h1_result(p: Presentation) -> H1Result:
    """H1 with rationally trivial generators quotiented out."""
    mat = abelianized_matrix(p)
    marked = [k for k, g in enumerate(p.generators) if g in p.rationally_trivial]
    group = cokernel(mat.delete_columns(marked))
    return H1Result(group, bool(marked), tuple(g for g in p.generators if g in p.rationally_trivial))


def h1(p: Presentation) -> AbelianGroup:
    return h1_result(p).group


def b1(p: Presentation) -> int:
    return h1(p).rank


def surface_group(genus: int, a: str = "a", b: str = "b") -> Presentation:
    gens: list[str] = []
    rel = IDENTITY
    for i in range(1, genus + 1):
        gens += [f"{a}{i}", f"{b}{i}"]
        rel = rel * commutator(Word.gen(f"{a}{i}"), Word.gen(f"{b}{i}"))
    return Presentation(tuple(gens), (rel,) if genus else ())
