"""Command line: construct | hodge | verify | report.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from . import hermform, report, rootweights, starform, wedge
from .errors import InvalidInput, WeilVHSError
from .qfield import CMField, TotallyRealField
from .vhs import ConstructionParams, hodge_pieces, run_pipeline

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2
CONFIG_KEYS = {"n", "m", "e", "p", "seed", "override_weil", "samples"}


class ConfigError(InvalidInput):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    m: Optional[int]
    e: Fraction
    p_list: tuple
    seed: int = 1
    override_weil: bool = False
    output_format: str = "text"
    samples: int = 25

    def echo(self) -> dict:
        return {"n": self.n, "m": self.m, "e": report.rational_str(self.e), "p": list(self.p_list),
                "seed": self.seed, "override_weil": self.override_weil, "samples": self.samples}

    def tower(self) -> CMField:
        return CMField.over(TotallyRealField(self.m), self.e)

    def params(self) -> ConstructionParams:
        return ConstructionParams.build(self.n, self.tower(), list(self.p_list), self.seed,
                                        self.override_weil, self.samples)


def _int(value, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    try:
        if isinstance(value, str):
            return int(value.strip())
        if isinstance(value, int):
            return value
    except ValueError:
        pass
    raise ConfigError(f"{name} must be an integer, got {value!r}")


def _rational(value, name: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(f"{name} must be an exact rational (e.g. 3 or \"1/2\"), got {value!r}")
    try:
        return Fraction(value) if isinstance(value, int) else Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name} must be a rational number, got {value!r}") from None


def _p_list(value) -> tuple:
    if isinstance(value, str):
        parts = [x for x in value.split(",") if x.strip()]
    elif isinstance(value, int) and not isinstance(value, bool):
        parts = [value]
    elif isinstance(value, list):
        parts = value
    else:
        raise ConfigError(f"p must be a comma separated list of integers, got {value!r}")
    if not parts:
        raise ConfigError("p must not be empty")
    return tuple(_int(x, "p") for x in parts)


def _bool(value, name: str) -> bool:
    if isinstance(value, bool):
        return value
    raise ConfigError(f"{name} must be true or false, got {value!r}")


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge the config file (if any) with flags; flags win."""
    raw = load_config_file(args.config) if args.config else {}
    for key in ("n", "m", "e", "p", "seed", "samples"):
        val = getattr(args, key)
        if val is not None:
            raw[key] = val
    if args.override_weil:
        raw["override_weil"] = True
    if "n" not in raw:
        raise ConfigError("n is required (--n or config key 'n')")
    if "p" not in raw:
        raise ConfigError("p is required (--p or config key 'p')")
    n = _int(raw["n"], "n")
    if n < 1:
        raise ConfigError(f"n must be positive, got {n}")
    m = raw.get("m")
    m = None if m is None else _int(m, "m")
    e = _rational(raw.get("e", 1), "e")
    if e <= 0:
        raise ConfigError(f"e must be a positive rational, got {e}")
    seed = _int(raw.get("seed", 1), "seed")
    samples = _int(raw.get("samples", 25), "samples")
    if samples < 1:
        raise ConfigError("samples must be at least 1")
    config = RunConfig(n, m, e, _p_list(raw["p"]), seed,
                       _bool(raw.get("override_weil", False), "override_weil"), args.format, samples)
    config.tower()      # rejects a non-square-free m even where the field is unused
    return config


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------------

def cmd_construct(config: RunConfig, args) -> int:
    params = config.params()
    form = hermform.build_form(params.spec, params.tower)
    lines = [f"E0 = {params.tower.base}, e = {config.e}, n = {config.n}",
             "h = diag(" + ", ".join(str(x) for x in form.entries) + ")"]
    sig_ok = True
    for emb in params.tower.base.embeddings():
        got = hermform.signature_at(form, emb)
        want = params.spec.pair_for(emb.index)
        sig_ok &= got == want
        lines.append(f"signature at {emb.label}: {got}  {report.verdict(got == want)}")
    disc = hermform.discriminant(form)
    holds, root = hermform.rationality_criterion(form, config.n)
    lines.append(f"disc(h) = {report.e0_text(disc)}")
    lines.append(f"(-1)^n disc(h) is a square in E0: {holds}"
                 + (f" (root {report.e0_text(root)})" if holds else ""))
    for v in hermform.weil_violations(config.n, params.spec.original_pairs()):
        lines.append(f"violation: {v}")
    _emit("\n".join(lines) + "\n", args)
    return EXIT_OK if sig_ok and holds else EXIT_FAILED


def cmd_hodge(config: RunConfig, args) -> int:
    n = config.n
    pairs = [(p, 2 * n - p) for p in config.p_list]
    problems = hermform.weil_violations(n, pairs)
    if problems and not config.override_weil:
        raise InvalidInput("; ".join(problems))
    pieces, combined = hodge_pieces(n, config.p_list)
    lines = []
    for i, (p, pc) in enumerate(zip(config.p_list, pieces), start=1):
        label = rootweights.DomainLabel(n, p)
        own = rootweights.hodge_numbers(label)
        lines.append(f"sigma_{i}: (A_{2 * n - 1}, alpha_{p}), level {rootweights.vhs_level(label)}, "
                     f"h^(s,p-s) = {own}, in weight {n}: {pc}")
    lines.append(f"combined: {combined}, sum = {combined.total} = {len(pieces)} * C({2 * n},{n})"
                 if combined.total == len(pieces) * comb(2 * n, n) else f"combined: {combined}")
    lines.append(f"h^{{n,0}} = {combined[n]}")
    _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_verify(config: RunConfig, args) -> int:
    params = config.params()
    n, tower = config.n, params.tower
    form = hermform.build_form(params.spec, tower)
    rows = []
    phi_square = -tower.e
    scalar = wedge.ScalarAction(2 * n, phi_square.a if phi_square.is_rational else phi_square)
    kc = wedge.kernel_characterization_check(2 * n, n, scalar)
    rows.append(("kernel = image of i", f"dim {kc.kernel_dim}",
                 kc.image_equals_kernel and kc.kernel_dim == 2 * comb(2 * n, n)))
    star = starform.build_star(n, form)
    sq = starform.star_square_scalar(n, form)
    rows.append(("star^2 = (-1)^n disc(h)", f"star^2 = {sq} * Id", starform.verify_star_square(star, n, form)))
    try:
        real = starform.construct_real_form(star, n, form)
        rows.append(("dim W_0 = C(2n, n), W_0 + sqrt(-e) W_0 = all", f"dim {real.dim}",
                     real.dim == comb(2 * n, n) and real.spans))
        rows.append(("W_0 invariant under su(U, h)", f"seed {config.seed}",
                     starform.real_form_invariance_check(star, real, form, config.samples, config.seed)))
    except WeilVHSError as exc:
        rows.append(("real form W_0", str(exc), False))
    rows.append(("phi_n commutes with su(U, h)", f"{config.samples} samples, seed {config.seed}",
                 wedge.lie_equivariance_check(2 * n, n, form, config.samples, config.seed)))
    rows.append(("star commutes with su(U, h)", f"{config.samples} samples, seed {config.seed}",
                 starform.star_equivariance_check(star, form, config.samples, config.seed)))
    w1 = max(len(r[0]) for r in rows)
    w2 = max(len(r[1]) for r in rows)
    text = "".join(f"{a.ljust(w1)}  {b.ljust(w2)}  {report.verdict(ok)}\n" for a, b, ok in rows)
    failed = [a for a, _, ok in rows if not ok]
    if failed:
        text += "failed: " + "; ".join(failed) + "\n"
    _emit(text, args)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_report(config: RunConfig, args) -> int:
    rep = run_pipeline(config.params())
    if config.output_format == "machine":
        text = report.dumps(report.machine_report(rep, config.echo()))
    else:
        text = report.text_report(rep)
    _emit(text, args)
    return EXIT_OK if rep.ok else EXIT_FAILED


COMMANDS = {"construct": cmd_construct, "hodge": cmd_hodge, "verify": cmd_verify, "report": cmd_report}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weilvhs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__name__.replace("cmd_", ""))
        sp.add_argument("--n", type=str)
        sp.add_argument("--m", type=str, help="square-free m >= 2 for E0 = Q(sqrt m); omit for E0 = Q")
        sp.add_argument("--e", type=str, help="positive rational e, E = E0(sqrt(-e)); default 1")
        sp.add_argument("--p", type=str, help="comma separated p_1,...,p_d (q_i = 2n - p_i)")
        sp.add_argument("--seed", type=str)
        sp.add_argument("--samples", type=str, help="Lie algebra samples per check (default 25)")
        sp.add_argument("--override-weil", action="store_true", dest="override_weil")
        sp.add_argument("--format", choices=("text", "machine"), default="text")
        sp.add_argument("--config", help="JSON file with keys n, m, e, p, seed, override_weil")
        sp.add_argument("--out", help="write output here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](config, args)
    except (InvalidInput, ValueError) as exc:
        sys.stderr.write(f"weilvhs: invalid input: {exc}\n")
        return EXIT_INVALID
    except WeilVHSError as exc:
        sys.stderr.write(f"weilvhs: check failed: {exc}\n")
        return EXIT_FAILED
    except OSError as exc:
        sys.stderr.write(f"weilvhs: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
