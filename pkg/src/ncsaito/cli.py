"""Command-line front end.

Every command prints one JSON document (or a plain-text rendering of it)
on stdout.  Errors are reported as a structured object on stdout plus a
one-line diagnostic on stderr; the exit status encodes the error class:
0 success, 2 parse/config, 3 violated hypothesis, 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .cyclic import Superpotential, canonicalize, cyclic_derivative, order
from .derive import Derivation, jordan_chevalley
from .errors import ConfigError, LevelTooLarge, NCSaitoError, ParseError
from .expr import format_series, format_word, parse, valid_name
from .jacobi import DEFAULT_NMAX, DEFAULT_SIZE_GUARD, class_in_HH0, finite_dim_certificate, is_quasi_homogeneous
from .ncseries import DEFAULT_TRUNC, Series, count_words
from .saito import abelianize, normalize, weights

COMMANDS = ("canon", "order", "cyc-diff", "jacobi", "class", "quasi", "weights", "normalize", "jc", "abelianize")


@dataclass(frozen=True)
class JobConfig:
    variables: tuple[str, ...]
    trunc: int = DEFAULT_TRUNC
    nmax: int = DEFAULT_NMAX
    size_guard: int = DEFAULT_SIZE_GUARD
    output: str = "json"
    threads: int | None = None

    def validate(self) -> None:
        if not self.variables:
            raise ConfigError("at least one variable is required")
        for v in self.variables:
            if not valid_name(v):
                raise ConfigError(f"invalid variable name {v!r}")
        if len(set(self.variables)) != len(self.variables):
            raise ConfigError("variable names must be distinct")
        if self.trunc < 2:
            raise ConfigError("--trunc must be at least 2")
        if self.nmax < 1:
            raise ConfigError("--nmax must be at least 1")
        if self.size_guard <= 0:
            raise ConfigError("--size-guard must be positive")
        if self.output not in ("json", "text"):
            raise ConfigError("--output must be json or text")

    def echo(self) -> dict:
        return {
            "vars": list(self.variables),
            "trunc": self.trunc,
            "nmax": self.nmax,
            "size_guard": self.size_guard,
            "output": self.output,
            "threads": self.threads,
        }


def rat(c) -> str:
    """'p/q' in lowest terms, sign on the numerator (integers as 'p/1')."""
    return f"{c.numerator}/{c.denominator}"


def series_doc(f: Series, names: Sequence[str]) -> dict:
    return {
        "expr": format_series(f, names),
        "terms": [{"word": format_word(w, names, powers=False), "coeff": rat(c)} for w, c in f.sorted_terms()],
    }


def images_doc(images: Sequence[Series], names: Sequence[str]) -> dict:
    return {v: series_doc(g, names) for v, g in zip(names, images)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors through the structured path
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--vars", required=True, help="ordered, comma-separated variable names (fixes x1 < x2 < ...)")
    common.add_argument("--trunc", type=int, default=DEFAULT_TRUNC, help="truncation level N (work modulo m^(N+1))")
    common.add_argument("--nmax", type=int, default=DEFAULT_NMAX, help="finiteness certificate search bound")
    common.add_argument("--size-guard", type=int, default=DEFAULT_SIZE_GUARD, help="largest monomial basis allowed")
    common.add_argument("--output", default="json", help="json (default) or text")

    parser = _Parser(prog="ncsaito", description="Noncommutative Saito normalization and friends.")
    parser.add_argument("--version", action="version", version=f"ncsaito {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, expr=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if expr:
            p.add_argument("expr", help="superpotential, e.g. 'x^3 + 2*x*y*x'")
        return p

    cmd("canon", "canonical representative of the cyclic class")
    cmd("order", "order of the superpotential")
    cmd("cyc-diff", "cyclic derivative D_v").add_argument("--var", required=True)
    cmd("jacobi", "finite-dimensionality certificate for the Jacobi algebra")
    cmd("class", "class of THETA in HH_0 of the Jacobi algebra").add_argument("--theta", required=True)
    cmd("quasi", "quasi-homogeneity test")
    cmd("weights", "weighted-homogeneous type")
    cmd("normalize", "weighted-homogeneous normal form with its automorphism")
    cmd("jc", "Jordan-Chevalley decomposition of a derivation", expr=False).add_argument(
        "--derivation", required=True, help="images, e.g. 'x=x;y=2*y+x^2'"
    )
    cmd("abelianize", "commutative image")
    return parser


def _threads() -> int | None:
    raw = os.environ.get("NCSAITO_THREADS")
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"NCSAITO_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"NCSAITO_THREADS must be a positive integer, got {raw!r}")
    return value


def parse_derivation(src: str, names: Sequence[str], trunc: int) -> Derivation:
    """'x=EXPR;y=EXPR': one image per variable, every variable exactly once."""
    images: dict[str, Series] = {}
    offset = 0
    for part in src.split(";"):
        if "=" not in part:
            raise ParseError("expected 'var=EXPR'", len(src[:offset].encode()), ("'='",))
        lhs, rhs = part.split("=", 1)
        var = lhs.strip()
        if var not in names:
            raise ConfigError(f"unknown variable {var!r} in --derivation")
        if var in images:
            raise ConfigError(f"variable {var!r} assigned twice in --derivation")
        start = offset + len(lhs) + 1
        try:
            images[var] = parse(rhs, names, trunc)
        except ParseError as e:
            e.offset += len(src[:start].encode())
            raise
        offset += len(part) + 1
    missing = [v for v in names if v not in images]
    if missing:
        raise ConfigError(f"--derivation lacks images for {', '.join(missing)}")
    return Derivation([images[v] for v in names])


def _guard_dense(cfg: JobConfig) -> None:
    size = count_words(len(cfg.variables), cfg.trunc)
    if size > cfg.size_guard:
        raise LevelTooLarge(f"{size} monomials at truncation {cfg.trunc} exceed the size guard {cfg.size_guard}")


def run(command: str, cfg: JobConfig, expr: str | None, extra: dict) -> dict:
    """Execute one command; returns the command-specific part of the document."""
    names = list(cfg.variables)
    N = cfg.trunc
    if command == "jc":
        _guard_dense(cfg)
        xi = parse_derivation(extra["derivation"], names, N)
        jc = jordan_chevalley(xi)
        return {
            "certified_mod_degree": N + 1,
            "eigenvalues": [rat(a) for a in jc.eigenvalues],
            "semisimple": images_doc(jc.semisimple.images, names),
            "nilpotent": images_doc(jc.nilpotent.images, names),
            "conjugator": images_doc(jc.conjugator.images, names),
        }

    phi: Superpotential = canonicalize(parse(expr, names, N))
    if command == "canon":
        return {"certified_mod_degree": N + 1, "canonical": series_doc(phi.rep, names)}
    if command == "order":
        return {"certified_mod_degree": N + 1, "order": order(phi)}
    if command == "cyc-diff":
        var = extra["var"]
        if var not in names:
            raise ConfigError(f"--var {var!r} is not among --vars")
        d = cyclic_derivative(phi, names.index(var))
        return {"certified_mod_degree": N, "var": var, "derivative": series_doc(d.truncate(N - 1), names)}
    if command == "abelianize":
        ab = abelianize(phi)
        terms = [{"exponents": list(e), "coeff": rat(c)} for e, c in ab.sorted_terms()]
        return {"certified_mod_degree": N + 1, "abelianization": {"expr": ab.to_str(names), "terms": terms}}

    report = finite_dim_certificate(phi, cfg.nmax, cfg.size_guard)
    if command == "jacobi":
        doc = {"finite": report.finite, "searched_to": report.searched_to}
        if report.finite:
            doc.update(
                nil_degree=report.nil_degree,
                dimension=report.dimension,
                normal_words=[format_word(w, names, powers=False) for w in report.normal_words],
            )
        doc["certified_mod_degree"] = report.searched_to + 1
        return doc
    if command == "class":
        theta = canonicalize(parse(extra["theta"], names, N))
        res = class_in_HH0(theta, phi, report, cfg.nmax, cfg.size_guard)
        return {"certified_mod_degree": report.nil_degree, "zero": res.is_zero(), "residue": series_doc(res, names)}
    if command == "quasi":
        flag = is_quasi_homogeneous(phi, report, cfg.nmax, cfg.size_guard)
        return {"certified_mod_degree": report.nil_degree, "quasi_homogeneous": flag}
    if command == "weights":
        _guard_dense(cfg)
        wt = weights(phi, report, cfg.nmax, cfg.size_guard)
        return {
            "certified_mod_degree": N + 1,
            "weights": [rat(r) for r in wt],
            "canonical_type": [rat(r) for r in wt.canonical],
        }
    if command == "normalize":
        _guard_dense(cfg)
        res = normalize(phi, report, cfg.nmax, cfg.size_guard)
        return {
            "certified_mod_degree": N + 1,
            "weights": [rat(r) for r in res.type],
            "canonical_type": [rat(r) for r in res.type.canonical],
            "transform": images_doc(res.transform.images, names),
            "normal_form": series_doc(res.normal_form.rep, names),
            "euler": images_doc(res.euler.images, names),
        }
    raise ConfigError(f"unknown command {command!r}")


def _error_doc(err: NCSaitoError) -> dict:
    body = {"code": err.code, "message": str(err), "exit_status": err.exit_status}
    if isinstance(err, ParseError):
        body["offset"] = err.offset
        body["expected"] = list(err.expected)
    return body


def _render_text(doc: dict, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key, val in doc.items():
        if isinstance(val, dict):
            if set(val) >= {"expr", "terms"}:
                lines.append(f"{pad}{key}: {val['expr']}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: " + ", ".join(str(v) for v in val))
        elif isinstance(val, bool):
            lines.append(f"{pad}{key}: {'true' if val else 'false'}")
        else:
            lines.append(f"{pad}{key}: {'null' if val is None else val}")
    return lines


def emit(doc: dict, output: str, stream=None) -> None:
    stream = stream or sys.stdout
    if output == "text":
        stream.write("\n".join(_render_text(doc)) + "\n")
    else:
        stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    output = "json"  # until a valid config says otherwise
    doc: dict = {"version": __version__}
    try:
        args = build_parser().parse_args(argv)
        cfg = JobConfig(
            variables=tuple(v.strip() for v in args.vars.split(",")),
            trunc=args.trunc,
            nmax=args.nmax,
            size_guard=args.size_guard,
            output=args.output,
            threads=_threads(),
        )
        cfg.validate()
        output = cfg.output
        doc.update(command=args.command, config=cfg.echo(), truncation=cfg.trunc)
        if getattr(args, "expr", None) is not None:
            doc["input"] = args.expr
        elif getattr(args, "derivation", None) is not None:
            doc["input"] = args.derivation
        extra = {k: getattr(args, k) for k in ("var", "theta", "derivation") if hasattr(args, k)}
        doc.update(run(args.command, cfg, getattr(args, "expr", None), extra))
    except NCSaitoError as err:
        doc["error"] = _error_doc(err)
        doc.setdefault("certified_mod_degree", None)
        emit(doc, output)
        print(f"ncsaito: {err.code}: {err}", file=sys.stderr)
        return err.exit_status
    emit(doc, output)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
