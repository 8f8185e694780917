"""Machine-readable (JSON) and text renderings of a pipeline report.

Exact numbers are never written as floats: rationals are "num/den" strings and
E0 elements are {"a": ..., "b": ...} in the basis (1, sqrt(m)).
"""
from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from math import comb

from . import __version__
from .qfield import E0Element, TotallyRealField
from .vhs import PipelineReport

FORMAT_NAME = "weilvhs-report"
FORMAT_VERSION = 1


def rational_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


def e0_json(x) -> dict:
    if not isinstance(x, E0Element):
        x = E0Element(x)
    return {"a": rational_str(x.a), "b": rational_str(x.b)}


def parse_e0(obj: dict, base: TotallyRealField) -> E0Element:
    return base.element(parse_rational(obj["a"]), parse_rational(obj["b"]))


def _hodge_json(hv) -> dict:
    return {"weight": hv.weight, "level": hv.level, "numbers": list(hv.numbers)}


def machine_report(rep: PipelineReport, config: dict) -> dict:
    base = rep.tower.base
    out = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "package_version": __version__,
        "input": config,
        "field": {
            "E0": {"kind": base.kind, "m": base.m, "degree": base.degree,
                   "basis": ["1", "sqrt_m"]},
            "E": {"e": e0_json(rep.tower.e), "basis": ["1", "sqrt_neg_e"]},
        },
        "signature_pairs": [list(pq) for pq in rep.pairs],
        "violations": list(rep.violations),
        "form": None,
        "star": None,
        "real_form": None,
        "kernel": None,
        "abelian_layer": None,
        "hodge": None,
        "endomorphism_degree": rep.endomorphism_degree,
        "seed": rep.seed,
        "samples": rep.samples,
        "flags": dict(sorted(rep.flags.items())),
        "errors": list(rep.errors),
        "ok": rep.ok,
    }
    if rep.entries:
        out["form"] = {
            "diagonal": [e0_json(x) for x in rep.entries],
            "signatures": {f"sigma_{i}": list(sig) for i, sig in sorted(rep.signatures.items())},
            "discriminant": e0_json(rep.discriminant),
            "rationality": {"holds": rep.witness is not None,
                            "witness": e0_json(rep.witness) if rep.witness is not None else None},
        }
    if rep.quaternion is not None:
        q = rep.quaternion
        out["star"] = {
            "square": e0_json(rep.star_square),
            "square_identity": rep.flags.get("star_square"),
            "quaternion": {"i_square": e0_json(q.i_square), "j_square": e0_json(q.j_square),
                           "anticommute": q.anticommute, "verdict": q.verdict,
                           "witness": e0_json(q.witness) if q.witness is not None else None},
        }
    if rep.real_form_dim is not None:
        out["real_form"] = {"dim_E0": rep.real_form_dim, "expected": comb(2 * rep.n, rep.n)}
    if rep.kernel is not None:
        out["kernel"] = {"kernel_dim": rep.kernel.kernel_dim, "image_rank": rep.kernel.image_rank,
                         "image_equals_kernel": rep.kernel.image_equals_kernel}
    if rep.abelian is not None:
        ab = rep.abelian
        out["abelian_layer"] = {
            "dim_Q": ab.dim_q, "h10": ab.h10, "h01": ab.h01,
            "eigenspace_dims": list(ab.eigenspace_dims),
            "summands": [{"embedding": s.embedding, "highest_weight": s.highest_weight,
                          "dimension": s.dimension} for s in ab.summands],
            "abelian_type_pieces": list(ab.abelian_type_pieces),
        }
    if rep.combined is not None:
        out["hodge"] = {
            "pieces": [dict(_hodge_json(pc), embedding=i) for i, pc in enumerate(rep.pieces, start=1)],
            "combined": _hodge_json(rep.combined),
            "h_n0": rep.combined[rep.n],
            "total": rep.combined.total,
        }
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


# --- text ---------------------------------------------------------------------------

def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def verdict(ok: bool, stream=sys.stdout) -> str:
    word = "PASS" if ok else "FAIL"
    if _use_color(stream):
        return f"\033[{32 if ok else 31}m{word}\033[0m"
    return word


def e0_text(x: E0Element) -> str:
    s = str(x)
    if isinstance(x, E0Element) and x.b:
        s += f" (≈ {x.approx():.6g})"
    return s


def text_report(rep: PipelineReport, stream=sys.stdout) -> str:
    n = rep.n
    lines = [f"weilvhs {__version__}: n = {n}, E0 = {rep.tower.base}, E = E0(sqrt(-{rep.tower.e})), d = {rep.d}",
             f"signature pairs: {', '.join(str(tuple(pq)) for pq in rep.pairs)}"]
    for v in rep.violations:
        lines.append(f"violation: {v}")
    if rep.entries:
        lines.append("h = diag(" + ", ".join(str(x) for x in rep.entries) + ")")
        for i, sig in sorted(rep.signatures.items()):
            lines.append(f"  signature at sigma_{i}: {sig}")
        lines.append(f"disc(h) = {e0_text(rep.discriminant)}")
        w = e0_text(rep.witness) if rep.witness is not None else "none"
        lines.append(f"(-1)^n disc(h) square in E0: {rep.witness is not None} (root {w})")
    if rep.quaternion is not None:
        q = rep.quaternion
        lines.append(f"star^2 = {e0_text(rep.star_square)} * Id")
        lines.append(f"quaternion algebra ({q.i_square}, {q.j_square}): {q.verdict}")
    if rep.real_form_dim is not None:
        lines.append(f"dim_E0 W_0 = {rep.real_form_dim} (C(2n, n) = {comb(2 * n, n)})")
    if rep.kernel is not None:
        lines.append(f"ker(phi_n - C(n,2) phi^2): dim {rep.kernel.kernel_dim}, "
                     f"equals image of i: {rep.kernel.image_equals_kernel}")
    if rep.abelian is not None:
        ab = rep.abelian
        lines.append(f"abelian layer: dim_Q U' = {ab.dim_q}, h^(1,0) = h^(0,1) = {ab.h10}, "
                     f"{len(ab.summands)} summands")
    if rep.combined is not None:
        for i, pc in enumerate(rep.pieces, start=1):
            lines.append(f"  piece sigma_{i}: level {pc.level}, {pc}")
        lines.append(f"combined weight-{n} Hodge numbers: {rep.combined} (total {rep.combined.total})")
        lines.append(f"CY check h^{{n,0}} = 1: {verdict(rep.combined[n] == 1, stream)} "
                     f"(h^{{{n},0}} = {rep.combined[n]})")
        lines.append(f"generic endomorphism degree d = {rep.endomorphism_degree}")
    lines.append(f"checks (seed {rep.seed}, {rep.samples} Lie samples):")
    width = max((len(k) for k in rep.flags), default=0)
    for name, ok in sorted(rep.flags.items()):
        lines.append(f"  {name.ljust(width)}  {verdict(ok, stream)}")
    for err in rep.errors:
        lines.append(f"error: {err}")
    lines.append(f"overall: {verdict(rep.ok, stream)}")
    return "\n".join(lines) + "\n"
