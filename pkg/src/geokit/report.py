"""Text and JSON renderings of a recipe report."""

from __future__ import annotations

import json
from fractions import Fraction

from .recipes import Report


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def report_dict(r: Report) -> dict:
    out: dict = {
        "recipe": r.recipe,
        "params": dict(sorted(r.params.items())),
        "ok": r.ok,
        "notes": r.notes,
        "steps": [
            {
                "index": s.index,
                "op": s.op,
                "target": s.target,
                "detail": s.detail,
                "e": s.euler,
                "sigma": s.signature,
                "b1": s.b1,
                "symplectic": s.symplectic,
            }
            for s in r.steps
        ],
    }
    if r.final is not None:
        f = r.final
        out["final"] = {
            "block": r.final_name,
            "e": f.euler,
            "sigma": f.signature,
            "b1": f.b1,
            "symplectic": f.symplectic,
            "minimal": f.minimal,
            "parity": f.parity.value,
            "surfaces": [s.describe() for s in f.surfaces],
            "open_sides": [side for side, _, _ in f.open_sides],
        }
        out["profile"] = r.profile.as_dict() if r.profile else None
        if r.profile_error:
            out["profile_error"] = r.profile_error
        out["h1"] = (
            None if r.h1 is None
            else {"group": str(r.h1.group), "rank": r.h1.group.rank, "torsion": list(r.h1.group.torsion),
                  "lower_bound": r.h1.lower_bound}
        )
        if r.final.presentation is not None:
            p = r.final.presentation
            out["presentation"] = {"generators": len(p.generators), "relators": len(p.relators)}
    if r.cs is not None:
        cs = r.cs
        out["cs"] = {
            "sqrt3_squared": str(cs.sqrt3_squared),
            "form_hermitian": cs.form_hermitian,
            "forms_preserved": dict(cs.form_preserved),
            "determinants": {k: str(v) for k, v in cs.determinants.items()},
            "projective_orders": dict(cs.orders),
            "relations": [
                {"relation": c.label, "holds": c.holds, "scalar": None if c.witness is None else str(c.witness.lam)}
                for c in cs.relations
            ],
            "abelianization": str(cs.abelianization),
            "short_relations": cs.short_relations,
        }
    out["expectations"] = [
        {"key": e.key, "expected": _plain(e.expected), "actual": _plain(e.actual), "passed": e.passed, "cite": e.cite}
        for e in r.expectations
    ]
    out["flags"] = [
        {"key": d.key, "stated": _plain(d.stated), "computed": _plain(d.computed), "cite": d.cite} for d in r.flags
    ]
    out["annotations"] = [{"text": t, "source": src} for t, src in r.annotations]
    return out


def render_json(r: Report) -> str:
    return json.dumps(report_dict(r), indent=2) + "\n"


def render_text(r: Report) -> str:
    lines = [f"recipe {r.recipe}" + (" " + " ".join(f"{k}={v}" for k, v in sorted(r.params.items())) if r.params else "")]
    lines += [f"  note: {n}" for n in r.notes]
    lines.append("steps:")
    for s in r.steps:
        inv = "" if s.euler is None else f"  [e={s.euler} sigma={s.signature} b1={'?' if s.b1 is None else s.b1}]"
        lines.append(f"  {s.index:>2}. {s.op} {s.target or ''}: {s.detail}{inv}")
    if r.final is not None:
        f = r.final
        lines.append(f"result {r.final_name}:")
        lines.append(f"  e = {f.euler}, sigma = {f.signature}, b1 = {'unknown' if f.b1 is None else f.b1}")
        lines.append(f"  symplectic = {f.symplectic}, minimal = {'unknown' if f.minimal is None else f.minimal}")
        lines.append(f"  parity = {f.parity.value} ({f.parity_note})")
        if r.profile is not None:
            p = r.profile
            lines.append(
                f"  b2 = {p.b2} (b2+ = {p.b2_plus}, b2- = {p.b2_minus}), chi_h = {p.chi_h}, c1^2 = {p.c1sq}, "
                f"BMY line: {'yes' if p.bmy else 'no'}"
            )
            lines.append(f"  rational homology model: {p.model or 'undetermined'}")
        elif r.profile_error:
            lines.append(f"  profile unavailable: {r.profile_error}")
        if r.h1 is not None:
            qual = " (lower bound on torsion)" if r.h1.lower_bound else ""
            lines.append(f"  H1 = {r.h1.group}{qual}")
        for s in f.surfaces:
            lines.append(f"  surface {s.describe()}")
    if r.cs is not None:
        cs = r.cs
        lines.append("lattice check:")
        lines.append(f"  (2z - z^3)^2 = {cs.sqrt3_squared}")
        lines.append(f"  A Hermitian: {cs.form_hermitian}")
        for k, ok in cs.form_preserved.items():
            lines.append(f"  {k}* A {k} = A: {ok}  det = {cs.determinants[k]}  projective order {cs.orders[k]}")
        for c in cs.relations:
            lines.append(f"  {c.label}: {'holds' if c.holds else 'FAILS'} up to scalars")
        lines.append(f"  abelianisation of the listed relations: {cs.abelianization}")
        if cs.short_relations:
            lines.append(f"  short scalar words: {', '.join(cs.short_relations)}")
    if r.expectations:
        lines.append("expectations:")
        for e in r.expectations:
            mark = "PASS" if e.passed else "FAIL"
            cite = f"  [{e.cite}]" if e.cite else ""
            lines.append(f"  {mark} {e.key}: expected {_plain(e.expected)}, got {_plain(e.actual)}{cite}")
    if r.flags:
        lines.append("discrepancies:")
        for d in r.flags:
            if d.computed is None:
                lines.append(f"  FLAG {d.stated}  [{d.cite}]")
            else:
                lines.append(f"  FLAG {d.key}: stated {_plain(d.stated)}, computed {_plain(d.computed)}  [{d.cite}]")
    if r.annotations:
        lines.append("not verified / annotations:")
        lines += [f"  - {t}" for t, _ in r.annotations]
    lines.append("OK" if r.ok else "FAILED")
    return "\n".join(lines) + "\n"
