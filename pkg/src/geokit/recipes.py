"""Recipe grammar, built-in recipes and the execution pipeline.

A recipe is line oriented::

    recipe <name>
    note "<text>"
    param <k> = <int> [min <int>]
    step <op> <args...> [for <var> = <lo>..<hi>]
    expect <key> = <value> [cite "<ref>"]
    claim <key> = <value> cite "<ref>"
    flag "<text>" cite "<ref>"

``expect`` lines fail the run when violated; ``claim`` lines only raise a
discrepancy flag. Arguments may contain ``{expr}`` interpolations over the
parameters and the loop variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from . import expr
from .complements import COMPLEMENTS
from .cs_lattice import RelationReport, cs_relation_report
from .errors import (
    GeokitError,
    MissingPresentation,
    ParameterOutOfRange,
    RecipeSyntaxError,
    StepError,
    UnknownB1,
    UnknownGenerator,
    UnknownStep,
)
from .geography import (
    CATALOG,
    Block,
    GluingSpec,
    Parity,
    Profile,
    TrackedSurface,
    attach_unknown_side,
    blow_up,
    fiber_sum,
    homology_profile,
    product_block,
    torus_surgery,
)
from .groups import H1Result, SurgeryDatum, h1_result, parse_word, split_top_level

# op -> (minimum positional args, maximum positional args or None, required named args)
STEP_SIGNATURES: dict[str, tuple[int, int | None, tuple[str, ...]]] = {
    "product": (3, 3, ()),
    "block": (2, 4, ()),
    "complement": (2, 2, ()),
    "surface": (2, 2, ("genus", "square")),
    "blow_up": (3, 3, ()),
    "surgery": (2, 2, ("meridian", "push", "coeff")),
    "fiber_sum": (6, 6, ()),
    "attach_rationally_trivial_side": (2, None, ()),
    "annotate": (3, 4, ()),
    "cs_verify": (0, 0, ()),
}
STEP_USAGE = {
    "product": "product <block> <g> <h>",
    "block": "block <block> <catalog-name> [args]",
    "complement": "complement <block> <complement-name>",
    "surface": "surface <block> <label> genus=<g> square=<s> [k=<K.S>] [gens=w,...] [meets=l:n,...]",
    "blow_up": "blow_up <block> <surface|-> <multiplicity>",
    "surgery": "surgery <block> <torus> meridian=<word> push=<word> coeff=<[+-]num[/den]>",
    "fiber_sum": "fiber_sum <result> <A> <surfaceA> <B> <surfaceB> <gluing> [sew=<a>+<b>]",
    "attach_rationally_trivial_side": "attach_rationally_trivial_side <block> <generator|prefix*>...",
    "annotate": "annotate <block> <parity|minimal|note> <value> [\"<note>\"]",
    "cs_verify": "cs_verify [search=<length>]",
}

DEFAULT_MINIMA = {"m": 1, "p": 1, "q": 1}
FAMILY_MINIMA = {"Yn": {"n": 2}, "Zn": {"n": 2}, "Xn": {"n": 1}}

INT_KEYS = {"e", "sigma", "b1", "b2", "b2_plus", "b2_minus", "c1sq", "h1_rank", "torsion_order",
            "torsion_contains", "cs.sqrt3_squared"}
BOOL_KEYS = {"bmy", "symplectic", "minimal", "cs.forms_preserved", "cs.relations_verified"}
STR_KEYS = {"profile", "parity", "h1"}


@dataclass(frozen=True)
class Param:
    name: str
    value: int
    minimum: int | None = None


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple[str, ...] = ()
    loop: tuple[str, str, str] | None = None
    line: int = field(default=0, compare=False)

    def positional(self) -> list[str]:
        return [a for a in self.args if not _is_named(a)]

    def named(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for a in self.args:
            if _is_named(a):
                k, _, v = a.partition("=")
                out.setdefault(k, []).append(v)
        return out

    def render(self) -> str:
        parts = ["step", self.op, *self.args]
        if self.loop:
            v, lo, hi = self.loop
            parts += ["for", v, "=", f"{lo}..{hi}"]
        return " ".join(parts)


@dataclass(frozen=True)
class Expectation:
    kind: str  # expect | claim | flag
    key: str
    value: str
    cite: str | None = None
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        if self.kind == "flag":
            s = f"flag {_quote(self.value)}"
        else:
            s = f"{self.kind} {self.key} = {self.value}"
        if self.cite is not None:
            s += f" cite {_quote(self.cite)}"
        return s


@dataclass(frozen=True)
class Recipe:
    name: str
    params: tuple[Param, ...] = ()
    steps: tuple[Step, ...] = ()
    expectations: tuple[Expectation, ...] = ()
    notes: tuple[str, ...] = ()

    def param_values(self) -> dict[str, int]:
        return {p.name: p.value for p in self.params}

    def with_params(self, overrides: Mapping[str, int]) -> Recipe:
        known = {p.name for p in self.params}
        for k in overrides:
            if k not in known:
                raise ParameterOutOfRange(f"recipe {self.name} has no parameter {k!r}")
        params = tuple(replace(p, value=int(overrides.get(p.name, p.value))) for p in self.params)
        for p in params:
            _check_range(p, 0, 0)
        return replace(self, params=params)

    def render(self) -> str:
        lines = [f"recipe {self.name}"]
        lines += [f"note {_quote(n)}" for n in self.notes]
        for p in self.params:
            lines.append(f"param {p.name} = {p.value}" + (f" min {p.minimum}" if p.minimum is not None else ""))
        lines += [s.render() for s in self.steps]
        lines += [e.render() for e in self.expectations]
        return "\n".join(lines) + "\n"


def render_recipe(r: Recipe) -> str:
    return r.render()


def _is_named(arg: str) -> bool:
    return bool(re.match(r"^[A-Za-z_]+=", arg))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unquote(s: str) -> str:
    if len(s) >= 2 and s[0] == s[-1] == '"':
        return re.sub(r"\\(.)", r"\1", s[1:-1])
    return s


_TOK = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in _TOK.finditer(line)]


def _check_range(p: Param, line: int, col: int) -> None:
    if p.minimum is not None and p.value < p.minimum:
        raise ParameterOutOfRange(f"parameter {p.name} = {p.value} is below its minimum {p.minimum}", line, col)


def parse_recipe(text: str) -> Recipe:
    name = None
    params: list[Param] = []
    steps: list[Step] = []
    expectations: list[Expectation] = []
    notes: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = _tokens(raw)
        head, col = toks[0]
        if name is None and head != "recipe":
            raise RecipeSyntaxError("recipe must start with 'recipe <name>'", lineno, col)
        if head == "recipe":
            if name is not None:
                raise RecipeSyntaxError("duplicate 'recipe' line", lineno, col)
            if len(toks) != 2:
                raise RecipeSyntaxError("expected 'recipe <name>'", lineno, col)
            name = toks[1][0]
        elif head == "note":
            if len(toks) != 2 or not toks[1][0].startswith('"'):
                raise RecipeSyntaxError('expected note "<text>"', lineno, col)
            notes.append(_unquote(toks[1][0]))
        elif head == "param":
            params.append(_parse_param(name, toks, lineno, {p.name for p in params}))
        elif head == "step":
            steps.append(_parse_step(toks, lineno, raw))
        elif head in ("expect", "claim"):
            expectations.append(_parse_expect(head, toks, lineno, raw))
        elif head == "flag":
            if len(toks) != 4 or toks[2][0] != "cite" or not toks[1][0].startswith('"'):
                raise RecipeSyntaxError('expected flag "<text>" cite "<ref>"', lineno, col)
            expectations.append(Expectation("flag", "flag", _unquote(toks[1][0]), _unquote(toks[3][0]), lineno))
        else:
            raise RecipeSyntaxError(f"unknown directive {head!r}", lineno, col)
    if name is None:
        raise RecipeSyntaxError("empty recipe")
    return Recipe(name, tuple(params), tuple(steps), tuple(expectations), tuple(notes))


def _parse_param(recipe: str, toks, lineno: int, seen: set[str]) -> Param:
    words = [t for t, _ in toks]
    col = toks[0][1]
    if len(words) not in (4, 6) or words[2] != "=" or (len(words) == 6 and words[4] != "min"):
        raise RecipeSyntaxError("expected 'param <name> = <int> [min <int>]'", lineno, col)
    pname = words[1]
    if pname in seen:
        raise RecipeSyntaxError(f"duplicate parameter {pname!r}", lineno, toks[1][1])
    try:
        value = int(words[3])
        minimum = int(words[5]) if len(words) == 6 else None
    except ValueError:
        raise RecipeSyntaxError("parameter values must be integers", lineno, toks[3][1]) from None
    if minimum is None:
        minimum = FAMILY_MINIMA.get(recipe, {}).get(pname, DEFAULT_MINIMA.get(pname))
    p = Param(pname, value, minimum)
    _check_range(p, lineno, toks[3][1])
    return p


def _parse_step(toks, lineno: int, raw: str) -> Step:
    if len(toks) < 2:
        raise RecipeSyntaxError("step needs an operation", lineno, toks[0][1])
    op, opcol = toks[1]
    if op not in STEP_SIGNATURES:
        raise UnknownStep(f"unknown step {op!r}", lineno, opcol)
    body = toks[2:]
    loop = None
    if len(body) >= 4 and body[-4][0] == "for":
        var, eq, rng = body[-3][0], body[-2][0], body[-1][0]
        if eq != "=" or ".." not in rng:
            raise RecipeSyntaxError("expected 'for <var> = <lo>..<hi>'", lineno, body[-4][1])
        lo, _, hi = rng.partition("..")
        loop = (var, lo, hi)
        body = body[:-4]
    args = tuple(t for t, _ in body)
    lo_n, hi_n, required = STEP_SIGNATURES[op]
    npos = sum(1 for a in args if not _is_named(a))
    end_col = len(raw.rstrip()) + 1
    if npos < lo_n or (hi_n is not None and npos > hi_n):
        raise RecipeSyntaxError(
            f"{op} takes {lo_n}{'' if hi_n == lo_n else '+' if hi_n is None else f'-{hi_n}'} positional "
            f"argument(s), got {npos}; usage: {STEP_USAGE[op]}",
            lineno,
            end_col if npos < lo_n else body[0][1],
        )
    named = {a.partition("=")[0] for a in args if _is_named(a)}
    for key in required:
        if key not in named:
            raise RecipeSyntaxError(f"{op} requires {key}=...; usage: {STEP_USAGE[op]}", lineno, end_col)
    return Step(op, args, loop, lineno)


def _parse_expect(kind: str, toks, lineno: int, raw: str) -> Expectation:
    words = [t for t, _ in toks]
    col = toks[0][1]
    if len(words) < 4 or words[2] != "=":
        raise RecipeSyntaxError(f"expected '{kind} <key> = <value>'", lineno, col)
    cite = None
    rest = words[3:]
    if "cite" in rest:
        k = rest.index("cite")
        if k != len(rest) - 2 or not rest[-1].startswith('"'):
            raise RecipeSyntaxError('cite must be followed by one quoted string', lineno, col)
        cite = _unquote(rest[-1])
        rest = rest[:k]
    if not rest:
        raise RecipeSyntaxError("missing value", lineno, len(raw.rstrip()) + 1)
    if kind == "claim" and cite is None:
        raise RecipeSyntaxError("claims must carry a citation", lineno, col)
    return Expectation(kind, words[1], " ".join(rest), cite, lineno)


# --- reports ---------------------------------------------------------------


@dataclass
class StepSnapshot:
    index: int
    op: str
    target: str | None
    detail: str
    euler: int | None = None
    signature: int | None = None
    b1: int | None = None
    symplectic: bool | None = None


@dataclass
class ExpectationResult:
    key: str
    expected: object
    actual: object
    passed: bool
    cite: str | None


@dataclass
class Discrepancy:
    key: str
    stated: object
    computed: object
    cite: str


@dataclass
class Report:
    recipe: str
    params: dict[str, int]
    notes: list[str]
    steps: list[StepSnapshot]
    final_name: str | None
    final: Block | None
    profile: Profile | None
    profile_error: str | None
    h1: H1Result | None
    cs: RelationReport | None
    expectations: list[ExpectationResult]
    flags: list[Discrepancy]
    annotations: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.expectations)


NOT_VERIFIED = (
    ("Seiberg-Witten distinctness of the infinite families is not computed", "infinite-family distinctness argument"),
    ("symplectic minimality rests on Usher's criterion and is not checked", "minimality via Usher's theorem"),
    ("simple connectivity of any construction is not decided", "simply-connected prospects"),
)


# --- execution -------------------------------------------------------------


class _Run:
    def __init__(self, recipe: Recipe):
        self.recipe = recipe
        self.params = recipe.param_values()
        self.ws: dict[str, Block] = {}
        self.cs: RelationReport | None = None
        self.snapshots: list[StepSnapshot] = []
        self.last: str | None = None

    def env_iterations(self, step: Step) -> list[dict]:
        if step.loop is None:
            return [dict(self.params)]
        var, lo, hi = step.loop
        a, b = expr.evaluate(lo, self.params), expr.evaluate(hi, self.params)
        return [{**self.params, var: k} for k in range(a, b + 1)]

    def block(self, name: str) -> Block:
        if name not in self.ws:
            raise KeyError(f"no block named {name!r} in the workspace")
        return self.ws[name]

    def run(self) -> None:
        for idx, step in enumerate(self.recipe.steps, 1):
            for env in self.env_iterations(step):
                try:
                    target, detail = self.execute(step, env)
                except (GeokitError, ValueError, KeyError, ZeroDivisionError) as exc:
                    raise StepError(idx, step.op, exc) from exc
                b = self.ws.get(target) if target else None
                self.snapshots.append(
                    StepSnapshot(idx, step.op, target, detail,
                                 b.euler if b else None, b.signature if b else None,
                                 b.b1 if b else None, b.symplectic if b else None)
                )
                if target:
                    self.last = target

    def execute(self, step: Step, env: dict) -> tuple[str | None, str]:
        pos = [expr.interpolate(a, env) for a in step.positional()]
        named = {k: [expr.interpolate(v, env) for v in vs] for k, vs in step.named().items()}
        op = step.op
        ev = lambda s: expr.evaluate(s, env)  # noqa: E731

        if op == "product":
            t, g, h = pos[0], ev(pos[1]), ev(pos[2])
            self.ws[t] = product_block(g, h)
            return t, f"Sigma{g} x Sigma{h}"

        if op == "block":
            t, kind, args = pos[0], pos[1], [ev(x) for x in pos[2:]]
            if kind not in CATALOG:
                raise KeyError(f"unknown catalog block {kind!r} (have {sorted(CATALOG)})")
            self.ws[t] = CATALOG[kind](*args)
            return t, kind + (f"({', '.join(map(str, args))})" if args else "")

        if op == "complement":
            t, cname = pos
            b = self.block(t)
            if cname not in COMPLEMENTS:
                raise KeyError(f"unknown complement {cname!r} (have {sorted(COMPLEMENTS)})")
            pres = COMPLEMENTS[cname](env)
            if b.presentation is not None and b.presentation.generators != pres.generators:
                raise UnknownGenerator(f"complement {cname} generators {pres.generators} do not match {t}")
            self.ws[t] = replace(
                b, presentation=pres, b1=h1_result(pres).b1 if not b.open_sides else None,
                provenance=b.provenance + (f"complement({cname})",),
            )
            return t, f"torus complement presentation {cname}"

        if op == "surface":
            t, label = pos
            b = self.block(t)
            one = lambda k, d=None: named[k][0] if k in named else d  # noqa: E731
            k_pair = one("k")
            gens = one("gens")
            meets = []
            for item in split_top_level(one("meets", "") or ""):
                if item:
                    lab, _, cnt = item.partition(":")
                    b.surface(lab)
                    meets.append((lab, int(cnt or 1)))
            surf = TrackedSurface(
                label,
                ev(one("genus")),
                ev(one("square")),
                None if k_pair is None else ev(k_pair),
                symplectic=ev(one("symplectic", "true")),
                adjunction_exact=k_pair is not None,
                generators=None if gens is None else tuple(parse_word(w) for w in split_top_level(gens)),
                meridian=None if one("meridian") is None else parse_word(one("meridian")),
                meridian_trivial=bool(ev(one("meridian_trivial", "false"))),
                meets=tuple(meets),
            )
            if surf.generators is not None and b.presentation is not None:
                for w in surf.generators:
                    b.presentation.check_word(w)
            others = []
            for s in b.surfaces:
                cnt = dict(meets).get(s.label)
                others.append(replace(s, meets=s.meets + ((label, cnt),)) if cnt else s)
            self.ws[t] = replace(b, surfaces=tuple(others)).with_surface(surf)
            return t, surf.describe()

        if op == "blow_up":
            t, surf, mult = pos[0], pos[1], ev(pos[2])
            self.ws[t] = blow_up(self.block(t), None if surf == "-" else surf, mult)
            return t, f"blow up on {surf} with multiplicity {mult}"

        if op == "surgery":
            t, torus = pos
            datum = _surgery_datum(named, ev, torus)
            b = self.block(t)
            new = torus_surgery(b, datum, torus)
            assert (new.euler, new.signature) == (b.euler, b.signature)
            self.ws[t] = new
            return t, f"({torus}, {named['push'][0]}, {datum.coefficient()})"

        if op == "fiber_sum":
            res, a, sa, bname, sb, gl = pos
            sew = []
            for spec in named.get("sew", []):
                for item in spec.split(","):
                    x, plus, y = item.partition("+")
                    if not plus or not x or not y:
                        raise ValueError(f"sew expects <surfaceA>+<surfaceB>, got {item!r}")
                    sew.append((x, y))
            pairing = None
            if "pairing" in named:
                pairing = tuple(int(x) for x in named["pairing"][0].split(","))
            self.ws[res] = fiber_sum(
                self.block(a), sa, self.block(bname), sb, GluingSpec(gl, pairing), sew,
                name=res, prefix_a=a, prefix_b=bname,
            )
            return res, f"{a}[{sa}] #_{gl} {bname}[{sb}]" + (" sew " + ",".join(f"{x}+{y}" for x, y in sew) if sew else "")

        if op == "attach_rationally_trivial_side":
            t, patterns = pos[0], pos[1:]
            b = self.block(t)
            if b.presentation is None:
                raise MissingPresentation(f"{t} has no presentation")
            chosen: list[str] = []
            for pat in patterns:
                if pat.endswith("*"):
                    hits = [g for g in b.presentation.generators if g.startswith(pat[:-1])]
                    if not hits:
                        raise UnknownGenerator(f"no generator matches {pat!r}")
                    chosen += hits
                else:
                    chosen.append(pat)
            self.ws[t] = attach_unknown_side(b, chosen)
            return t, f"{len(chosen)} generator(s) of finite order"

        if op == "annotate":
            t, key, value = pos[0], pos[1], pos[2]
            note = _unquote(pos[3]) if len(pos) > 3 else ""
            b = self.block(t)
            if key == "parity":
                b = replace(b, parity=Parity(value), parity_note=note or "annotated")
            elif key == "minimal":
                b = replace(b, minimal=bool(ev(value)))
            elif key != "note":
                raise ValueError(f"cannot annotate {key!r}")
            self.ws[t] = b.annotate(f"{key} = {value}" + (f": {note}" if note else ""))
            return t, f"{key} = {value}"

        if op == "cs_verify":
            self.cs = cs_relation_report(int(named.get("search", ["0"])[0]))
            return None, "exact verification of the lattice generators"

        raise UnknownStep(f"unknown step {op!r}")


def _surgery_datum(named, ev, torus: str) -> SurgeryDatum:
    coeff = named["coeff"][0].strip()
    sign = -1 if coeff.startswith("-") else 1
    body = coeff.lstrip("+-")
    num_s, slash, den_s = body.partition("/")
    num = ev(num_s)
    den = ev(den_s) if slash else 1
    return SurgeryDatum(parse_word(named["meridian"][0]), parse_word(named["push"][0]), num, den, sign, torus)


def _lookup(key: str, run: _Run, final: Block | None, profile: Profile | None, h1: H1Result | None):
    if key.startswith("cs."):
        if run.cs is None:
            raise KeyError("no cs_verify step was run")
        return {
            "cs.forms_preserved": run.cs.forms_ok,
            "cs.relations_verified": run.cs.relations_ok,
            "cs.sqrt3_squared": run.cs.sqrt3_squared.c0 if run.cs.sqrt3_squared.is_integer() else None,
        }[key]
    head, _, rest = key.partition(".")
    if rest and head in run.ws and head != "surface":
        block = run.ws[head]
        key = rest
        prof = _try_profile(block)[0]
        hres = h1_result(block.presentation) if block.presentation is not None and not block.open_sides else None
        return _lookup(key, run, block, prof, hres)
    if final is None:
        raise KeyError("no block was built")
    if key.startswith("surface."):
        _, label, attr = key.split(".", 2)
        s = final.surface(label)
        return {"genus": s.genus, "square": s.self_intersection, "k": s.k_pairing}[attr]
    simple = {
        "e": final.euler,
        "sigma": final.signature,
        "b1": final.b1,
        "c1sq": final.c1sq,
        "chi_h": final.chi_h,
        "bmy": final.char_numbers().on_bmy_line,
        "symplectic": final.symplectic,
        "minimal": final.minimal,
        "parity": final.parity.value,
    }
    if key in simple:
        return simple[key]
    if key in ("b2", "b2_plus", "b2_minus", "profile"):
        if profile is None:
            return None
        return {"b2": profile.b2, "b2_plus": profile.b2_plus, "b2_minus": profile.b2_minus,
                "profile": profile.model}[key]
    if key in ("h1_rank", "torsion_order", "torsion_contains", "h1"):
        if h1 is None:
            return None
        return {"h1_rank": h1.group.rank, "torsion_order": h1.group.torsion_order,
                "torsion_contains": h1.group, "h1": str(h1.group)}[key]
    raise KeyError(f"unknown expectation key {key!r}")


def _base_key(key: str, run: _Run) -> str:
    head, _, rest = key.partition(".")
    if rest and head in run.ws and head != "surface":
        return rest
    return key


def _expected_value(key: str, raw: str, env: dict):
    text = expr.interpolate(raw, env)
    if key in STR_KEYS:
        return _unquote(text)
    if key.startswith("surface.") or key in INT_KEYS or key == "chi_h":
        return expr.evaluate(text, env)
    if key in BOOL_KEYS:
        return bool(expr.evaluate(text, env))
    return _unquote(text)


def normalise_model(text: str) -> str:
    """Canonical spelling of a model string: '1(S2xS2)' -> 'S2xS2', '1CP2' -> 'CP2'."""
    parts = []
    for part in text.replace(" ", "").split("#"):
        m = re.fullmatch(r"(\d*)\(?([^()]*)\)?", part)
        count, core = (m.group(1), m.group(2)) if m else ("", part)
        if count in ("", "1"):
            parts.append(core)
        elif "x" in core:
            parts.append(f"{count}({core})")
        else:
            parts.append(f"{count}{core}")
    return "#".join(parts)


def _compare(key: str, expected, actual) -> bool:
    if key == "profile":
        return isinstance(actual, str) and normalise_model(str(expected)) == normalise_model(actual)
    if key == "torsion_contains":
        return actual is not None and actual.contains_cyclic(int(expected))
    if isinstance(expected, Fraction) or isinstance(actual, Fraction):
        return actual is not None and Fraction(actual) == Fraction(expected)
    return expected == actual


def _try_profile(b: Block) -> tuple[Profile | None, str | None]:
    try:
        return homology_profile(b), None
    except (UnknownB1, GeokitError) as exc:
        return None, str(exc)


def run_recipe(recipe: Recipe, overrides: Mapping[str, int] | None = None) -> Report:
    if overrides:
        recipe = recipe.with_params(overrides)
    run = _Run(recipe)
    run.run()
    final = run.ws.get(run.last) if run.last else None
    profile, perr = _try_profile(final) if final else (None, None)
    h1 = None
    if final is not None and final.presentation is not None and not final.open_sides:
        h1 = h1_result(final.presentation)

    env = dict(run.params)
    results: list[ExpectationResult] = []
    flags: list[Discrepancy] = []
    for e in recipe.expectations:
        if e.kind == "flag":
            flags.append(Discrepancy("transcription", e.value, None, e.cite or ""))
            continue
        base = _base_key(e.key, run)
        expected = _expected_value(base, e.value, env)
        try:
            actual = _lookup(e.key, run, final, profile, h1)
            passed = _compare(base, expected, actual)
        except KeyError as exc:
            actual, passed = f"<unavailable: {exc.args[0]}>", False
        shown = str(actual) if base == "torsion_contains" and actual is not None else actual
        if e.kind == "expect":
            results.append(ExpectationResult(e.key, expected, shown, passed, e.cite))
        elif not passed:
            flags.append(Discrepancy(e.key, expected, shown, e.cite or ""))

    if run.cs is not None and not run.cs.abelianization_matches_claim:
        flags.append(Discrepancy(
            "cs.abelianization", "Z^2", str(run.cs.abelianization),
            "lattice subgroup said to have abelianization Z^2; the three listed relations alone give this group",
        ))

    annotations: list[tuple[str, str]] = []
    if final is not None:
        annotations += [(a, "recorded on block") for a in final.annotations]
        annotations += [(f"parity {final.parity.value}: {final.parity_note}", "parity rule")]
        annotations += list(NOT_VERIFIED)

    return Report(
        recipe=recipe.name,
        params=env,
        notes=list(recipe.notes),
        steps=run.snapshots,
        final_name=run.last,
        final=final,
        profile=profile,
        profile_error=perr,
        h1=h1,
        cs=run.cs,
        expectations=results,
        flags=flags,
        annotations=annotations,
    )


# --- built-in recipes ------------------------------------------------------

_Y1PQ_BODY = """\
step product Y 3 1
step complement Y Y1pq
step surgery Y a1'xc' meridian=[b1^-1,d^-1] push=a1 coeff=-1
step surgery Y b1'xc'' meridian=[a1^-1,d] push=b1 coeff=-1
step surgery Y a2'xc' meridian=[b2^-1,d^-1] push=a2 coeff=-1
step surgery Y b2'xc'' meridian=[a2^-1,d] push=b2 coeff=-1
step surgery Y a3'xc' meridian=[b3^-1,d^-1] push=c coeff=+1/p
step surgery Y a3''xd' meridian=[c^-1,b3] push=d coeff=+m/q
"""

_Y1PQ_FLAG = (
    'flag "surface relation read as [a1,b1][a2,b2][a3,b3]; a literal reading repeats [a2,b2]" '
    'cite "relation list of Y_1(1/p,m/q)"\n'
)

_YN_SURGERIES = """\
step surgery Y a1'xc1' meridian=[b1^-1,d1^-1] push=a1 coeff=-1
step surgery Y b1'xc1'' meridian=[a1^-1,d1] push=b1 coeff=-1
step surgery Y a2'xc2' meridian=[b2^-1,d2^-1] push=a2 coeff=-1
step surgery Y b2'xc2'' meridian=[a2^-1,d2] push=b2 coeff=-1
step surgery Y a2'xc1' meridian=[b2^-1,d1^-1] push=c1 coeff=+1
step surgery Y a2''xd1' meridian=[b2,c1^-1] push=d1 coeff=+1
step surgery Y a1'xc2' meridian=[b1^-1,d2^-1] push=c2 coeff=+1
step surgery Y a1''xd2' meridian=[b1,c2^-1] push=d2 coeff=+m
step surgery Y b1'xc{j}' meridian=[a1^-1,d{j}^-1] push=c{j} coeff=-1 for j = 3..n
step surgery Y b2'xd{j}' meridian=[a2^-1,c{j}^-1] push=d{j} coeff=-1 for j = 3..n
"""

BUILTIN_TEXTS: dict[str, str] = {
    "Yn": (
        "recipe Yn\n"
        'note "Y_n(m): 2n+3 Luttinger surgeries and one m-torus surgery on Sigma2 x Sigma_n"\n'
        "param n = 2 min 2\nparam m = 1 min 1\n"
        "step product Y 2 n\nstep complement Y Yn\n"
        + _YN_SURGERIES
        + 'step annotate Y parity even "integer cohomology ring of (2n-3)(S2xS2) (stated)"\n'
        'expect e = 4*n-4 cite "Euler characteristic of Y_n(m)"\n'
        'expect sigma = 0 cite "signature of Y_n(m)"\n'
        'expect h1_rank = 0 cite "cohomology of (2n-3)(S2xS2)"\n'
        'expect torsion_order = 1 cite "cohomology of (2n-3)(S2xS2)"\n'
        'expect symplectic = m == 1 cite "m-torus surgery is non-symplectic for m >= 2"\n'
        'expect profile = {2*n-3}(S2xS2) cite "cohomology of (2n-3)(S2xS2)"\n'
    ),
    "Zn": (
        "recipe Zn\n"
        'note "Z_n(m) on Sigma3 x Sigma_n: transcribed by analogy with Y_n(m); no explicit relation list is published"\n'
        "param n = 2 min 2\nparam m = 1 min 1\n"
        "step product Y 3 n\nstep complement Y Zn\n"
        + _YN_SURGERIES
        + "step surgery Y a3'xc1' meridian=[b3^-1,d1^-1] push=a3 coeff=-1\n"
        "step surgery Y b3'xc1'' meridian=[a3^-1,d1] push=b3 coeff=-1\n"
        'expect e = 8*n-8 cite "Euler characteristic of Sigma3 x Sigma_n"\n'
        'expect sigma = 0 cite "torus surgery preserves signature"\n'
        'flag "Z_n(m) surgeries are an analogy transcription, not a published list" cite "Z_n(m) generalisation to Sigma3 x Sigma_n"\n'
    ),
    "Y1pq": (
        "recipe Y1pq\n"
        'note "Y_1(1/p,m/q): six torus surgeries on Sigma3 x T2"\n'
        "param m = 1 min 1\nparam p = 1 min 1\nparam q = 1 min 1\n"
        + _Y1PQ_BODY
        + 'expect e = 0 cite "e(Sigma3 x T2) = 0"\n'
        'expect sigma = 0 cite "torus surgery preserves signature"\n'
        'expect h1_rank = 2 cite "abelianised relations of Y_1(1/p,m/q)"\n'
        'expect torsion_order = p*q cite "abelianised relations of Y_1(1/p,m/q)"\n'
        'expect symplectic = m == 1 cite "all six are Luttinger surgeries when m = 1"\n'
        + _Y1PQ_FLAG
    ),
    "X1": (
        "recipe X1\n"
        'note "X_1(m,p,q,psi) = Y_1(1/p,m/q) fibre-summed with M#CP2bar along genus 3 surfaces"\n'
        "param m = 1 min 1\nparam p = 1 min 1\nparam q = 1 min 1\n"
        + _Y1PQ_BODY
        + "step block M mumford\n"
        "step blow_up M H 1\n"
        "step fiber_sum X Y Sigma3xpt M H psi sew=ptxSigma1+E\n"
        "step attach_rationally_trivial_side X M.*\n"
        'expect e = 12 cite "e(X_1) = 0 + 4 + 8 = 12"\n'
        'expect sigma = 0 cite "sigma(X_1) = 0 + 0 = 0"\n'
        'expect b1 = 0 cite "b1(X_1) = 0"\n'
        'expect profile = 5CP2#5CP2bar cite "fake rational homology 5CP2#5CP2bar"\n'
        'expect parity = odd cite "-1 sphere and square-zero torus give a -1 torus"\n'
        'expect torsion_contains = p cite "varying p introduces p torsion in H1 (q = 1)"\n'
        'expect symplectic = m == 1 cite "X_1(1,p,q,psi) is symplectic"\n'
        + _Y1PQ_FLAG
    ),
    "Xn": (
        "recipe Xn\n"
        'note "X_n: Y_1(1/p,m/q) fibre-summed with n copies of M#CP2bar, evaluated pairwise left to right"\n'
        "param n = 2 min 1\nparam m = 1 min 1\nparam p = 1 min 1\nparam q = 1 min 1\n"
        + _Y1PQ_BODY
        + "step block M{i} mumford for i = 1..n\n"
        "step blow_up M{i} H 1 for i = 1..n\n"
        "step fiber_sum X Y Sigma3xpt M1 H psi sew=ptxSigma1+E\n"
        "step fiber_sum X X Sigma3xpt M{i} H id sew=ptxSigma1+E for i = 2..n\n"
        "step attach_rationally_trivial_side X M{i}.* for i = 1..n\n"
        'expect sigma = 0 cite "sigma(X_n) = 0 + 0 = 0"\n'
        'expect e = 12*n cite "pairwise fibre-sum formula e(A) + e(B) + 8 per genus 3 gluing"\n'
        'expect b1 = 0 cite "b1 vanishes as for X_1"\n'
        'claim e = 4*n+8 cite "stated e(X_n) = 0 + 4n + 8"\n'
        'claim e = 4*n cite "e of the target model (2n-1)CP2#(2n-1)CP2bar"\n'
        + _Y1PQ_FLAG
    ),
    "spinX": (
        "recipe spinX\n"
        'note "X = (Sigma2 x S2) fibre-summed with M#CP2bar along a genus 3 surface in the class 2[Sigma2 x pt]"\n'
        "step product A 2 0\n"
        # genus 3 double cover of Sigma2 for a1 -> 1 in Z/2; generator words are one admissible choice
        "step surface A Sigma3tilde genus=3 square=0 k=4 gens=a1^2,b1,a2,b2,a1*a2*a1^-1,a1*b2*a1^-1 meets=ptxSigma0:2\n"
        "step block M mumford\n"
        "step blow_up M H 1\n"
        "step fiber_sum X A Sigma3tilde M H psi\n"
        "step attach_rationally_trivial_side X M.*\n"
        'step annotate X parity even "spin by the canonical class formula (stated, not computed)"\n'
        'expect e = 8 cite "e(X) = -4 + 4 + 8 = 8"\n'
        'expect sigma = 0 cite "sigma(X) = 0 + 0 = 0"\n'
        'expect b1 = 0 cite "rational homology of 3(S2xS2)"\n'
        'expect profile = 3(S2xS2) cite "rational homology of 3(S2xS2)"\n'
        'expect parity = even cite "X is spin"\n'
    ),
    "mumford-check": (
        "recipe mumford-check\n"
        'note "Mumford fake projective plane and its blow-up along H"\n'
        "step block M mumford\n"
        "step block MB mumford\n"
        "step blow_up MB H 1\n"
        'expect M.e = 3 cite "e(M) = 3"\n'
        'expect M.sigma = 1 cite "sigma(M) = 1"\n'
        'expect M.b1 = 0 cite "b1(M) = 0"\n'
        'expect M.c1sq = 9 cite "c1^2 = 3e = 9"\n'
        'expect M.chi_h = 1 cite "chi_h = 1"\n'
        'expect M.bmy = true cite "M lies on the BMY line"\n'
        'expect M.surface.H.genus = 3 cite "g(H) = 1 + (H.H + 3H.H)/2 = 3"\n'
        'expect M.profile = CP2 cite "Betti numbers of CP2"\n'
        'expect e = 4 cite "e(M#CP2bar) = 4"\n'
        'expect sigma = 0 cite "sigma(M#CP2bar) = 0"\n'
        'expect surface.H.genus = 3 cite "blown-up H keeps genus 3"\n'
        'expect surface.H.square = 0 cite "blown-up H has self-intersection 0"\n'
    ),
    "cs-verify": (
        "recipe cs-verify\n"
        'note "Exact verification of the Cartwright-Steger generators over Z[zeta12]"\n'
        "step cs_verify\n"
        'expect cs.sqrt3_squared = 3 cite "2z - z^3 = sqrt3"\n'
        'expect cs.forms_preserved = true cite "Gamma-bar preserves the Hermitian form A"\n'
        'expect cs.relations_verified = true cite "relations vubj = u, bj^2 = ju, u^2vbu = j^2"\n'
    ),
}


def builtin_recipes() -> dict[str, Recipe]:
    return {name: parse_recipe(text) for name, text in BUILTIN_TEXTS.items()}


def load_recipe(name_or_text: str) -> Recipe:
    registry = builtin_recipes()
    if name_or_text in registry:
        return registry[name_or_text]
    return parse_recipe(name_or_text)
