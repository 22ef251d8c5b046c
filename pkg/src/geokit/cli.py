"""Command-line entry point: ``geokit run|blocks|cs-verify|h1|snf``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cs_lattice import cs_relation_report, dump_generators
from .errors import GeokitError, RecipeSyntaxError, StepError, WordSyntaxError
from .geography import Block, builtin_blocks, homology_profile
from .groups import h1_result, parse_presentation
from .lattice import parse_matrix, snf
from .recipes import builtin_recipes, parse_recipe, run_recipe
from .report import render_json, render_text

EXIT_OK, EXIT_ASSERT, EXIT_PARSE, EXIT_STEP = 0, 1, 2, 3


def _err(msg: str) -> None:
    print(f"geokit: {msg}", file=sys.stderr)


def _parse_params(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items:
        key, eq, value = item.partition("=")
        if not eq or not key:
            raise RecipeSyntaxError(f"--param expects k=v, got {item!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise RecipeSyntaxError(f"--param {key} must be an integer, got {value!r}") from None
    return out


def cmd_run(args) -> int:
    registry = builtin_recipes()
    try:
        if args.recipe in registry:
            recipe = registry[args.recipe]
        else:
            path = Path(args.recipe)
            if not path.is_file():
                _err(f"no built-in recipe or file named {args.recipe!r} (built-ins: {', '.join(sorted(registry))})")
                return EXIT_PARSE
            recipe = parse_recipe(path.read_text())
        params = _parse_params(args.param)
        report = run_recipe(recipe, params)
    except RecipeSyntaxError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except StepError as exc:
        _err(str(exc))
        return EXIT_STEP
    out = render_text(report) if args.format == "text" else render_json(report)
    sys.stdout.write(out)
    return EXIT_OK if report.ok else EXIT_ASSERT


BLOCK_COLUMNS = ("name", "e", "sigma", "b1", "b2+", "b2-", "chi_h", "c1^2", "bmy", "symplectic", "minimal", "parity")


def block_row(name: str, b: Block) -> list[str]:
    try:
        prof = homology_profile(b)
        bp, bm = str(prof.b2_plus), str(prof.b2_minus)
    except GeokitError:
        bp = bm = "?"
    cn = b.char_numbers()
    return [
        name, str(b.euler), str(b.signature), "?" if b.b1 is None else str(b.b1), bp, bm, str(cn.chi_h),
        str(cn.c1sq), "yes" if cn.on_bmy_line else "no", "yes" if b.symplectic else "no",
        "?" if b.minimal is None else ("yes" if b.minimal else "no"), b.parity.value,
    ]


def cmd_blocks(args) -> int:
    rows = [list(BLOCK_COLUMNS)] + [block_row(n, b) for n, b in builtin_blocks().items()]
    widths = [max(len(r[i]) for r in rows) for i in range(len(BLOCK_COLUMNS))]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return EXIT_OK


def cmd_cs_verify(args) -> int:
    if args.dump_generators:
        sys.stdout.write(dump_generators())
        return EXIT_OK
    rep = cs_relation_report(args.search_depth)
    print(f"(2z - z^3)^2 = {rep.sqrt3_squared}")
    print(f"A Hermitian: {'yes' if rep.form_hermitian else 'no'}")
    for k, ok in rep.form_preserved.items():
        print(f"{k}: {k}*A{k} = A {'yes' if ok else 'NO'}; det {rep.determinants[k]}; projective order {rep.orders[k]}")
    for c in rep.relations:
        if c.holds:
            print(f"{c.label}: holds with scalar {c.witness.lam}")
        else:
            print(f"{c.label}: FAILS (lhs * rhs^-1 is not scalar)")
    print(f"abelianisation of the listed relations: {rep.abelianization} (invariant factors {list(rep.abelianization_factors)})")
    if not rep.abelianization_matches_claim:
        print("FLAG abelianisation differs from the stated Z^2")
    if rep.short_relations:
        print("scalar words up to length", args.search_depth, ":", ", ".join(rep.short_relations))
    ok = rep.ok
    print("OK" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_h1(args) -> int:
    try:
        pres = parse_presentation(Path(args.file).read_text())
    except (OSError, WordSyntaxError, GeokitError) as exc:
        _err(str(exc))
        return EXIT_PARSE
    res = h1_result(pres)
    note = " (torsion is a lower bound; some generators only rationally trivial)" if res.lower_bound else ""
    print(f"H1 = {res.group}{note}")
    print(f"rank = {res.group.rank}")
    print(f"torsion = {list(res.group.torsion)}")
    return EXIT_OK


def cmd_snf(args) -> int:
    try:
        a = parse_matrix(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_PARSE
    res = snf(a)
    for label, m in (("S", res.S), ("U", res.U), ("V", res.V)):
        print(f"{label} =")
        print(m)
    print(f"invariant factors = {list(res.invariant_factors)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geokit", description="Invariant bookkeeping for symplectic 4-manifold constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a built-in recipe or a recipe file")
    r.add_argument("recipe", help="built-in recipe name or path to a recipe file")
    r.add_argument("--param", action="append", default=[], metavar="K=V", help="override a recipe parameter")
    r.add_argument("--format", choices=("text", "json-like", "json"), default="text")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("blocks", help="show the built-in block catalogue")
    b.add_argument("--list", action="store_true", help="print one block per line (default)")
    b.set_defaults(func=cmd_blocks)

    c = sub.add_parser("cs-verify", help="exact check of the lattice generators and relations")
    c.add_argument("--dump-generators", action="store_true", help="print the canonical generator table and exit")
    c.add_argument("--search-depth", type=int, default=0, metavar="N", help="also list scalar words up to length N")
    c.set_defaults(func=cmd_cs_verify)

    h = sub.add_parser("h1", help="first homology of a presentation file")
    h.add_argument("file")
    h.set_defaults(func=cmd_h1)

    s = sub.add_parser("snf", help="Smith normal form of an integer matrix file")
    s.add_argument("file")
    s.set_defaults(func=cmd_snf)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
