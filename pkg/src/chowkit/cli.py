"""Command-line front end. Every command prints one JSON object on stdout."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import moduli
from .errors import IntegrityError, PreconditionError
from .exact_ring import ChowClass, format_scalar
from .lattices import CONVENTIONS

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INTEGRITY = 0, 2, 3, 4


@dataclass
class CommandResult:
    command: str
    inputs: dict[str, Any]
    outputs: Any
    axioms: list[str] = field(default_factory=list)
    references: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "axioms": self.axioms,
            "references": self.references,
        }


def _exact(value: Any) -> Any:
    """Replace Fractions by ints or ``"num/den"`` strings, recursively."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else format_scalar(value)
    if isinstance(value, dict):
        return {k: _exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_exact(v) for v in value]
    if isinstance(value, float):
        raise IntegrityError("floating point value in output")
    return value


def dumps(result: CommandResult) -> str:
    return json.dumps(_exact(result.to_json()), sort_keys=True, indent=2) + "\n"


def render_human(result: CommandResult) -> str:
    lines = [f"command: {result.command}"]
    if result.inputs:
        lines.append("inputs: " + ", ".join(f"{k}={v}" for k, v in sorted(result.inputs.items())))

    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        else:
            rows.append((prefix, json.dumps(_exact(value)) if not isinstance(value, str) else value))

    rows: list[tuple[str, str]] = []
    walk("", result.outputs)
    width = max((len(k) for k, _ in rows), default=0)
    lines += [f"  {k.ljust(width)}  {v}" for k, v in rows]
    lines += [f"axiom: {a}" for a in result.axioms]
    lines += [f"ref: {r}" for r in result.references]
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------------------------


def cmd_discriminant_equidegree(args) -> CommandResult:
    deg = moduli.equidegree_discriminant_degree(args.d, args.m, args.n)
    return CommandResult(
        "discriminant equidegree",
        {"d": args.d, "m": args.m, "n": args.n},
        {"degree": deg},
        references=["discriminant of m-dimensional spaces of degree-d forms on P^n"],
    )


def cmd_discriminant_bidegree(args) -> CommandResult:
    disc = moduli.bidegree_discriminant_class(args.a, args.b, args.n)
    return CommandResult(
        "discriminant bidegree",
        {"a": args.a, "b": args.b, "n": args.n},
        disc.to_json(),
        references=["singular (a,b) complete intersections in P(V_{a,b})"],
    )


def cmd_picard_gg(args) -> CommandResult:
    inputs = {"d": args.d, "m": args.m, "n": args.n, "smooth": args.smooth}
    if args.smooth:
        pres = moduli.smooth_locus_picard(args.d, args.m, args.n)
    else:
        pres = moduli.gg_picard(args.d, args.m, args.n)
    return CommandResult("picard gg", inputs, pres.to_json(), references=["Picard group of GG(d,m,n)"])


def cmd_picard_ff(args) -> CommandResult:
    pres = moduli.ff_picard(args.a, args.b, args.n, args.convention)
    smooth = moduli.ff_smooth_locus_picard(args.a, args.b, args.n, args.convention)
    report = moduli.ff_convention_report(args.a, args.b, args.n)
    out = pres.to_json()
    out["smooth_locus_invariant_factors"] = smooth.invariant_factors
    out["conventions"] = report
    out["conventions_agree"] = report["agree"]
    return CommandResult(
        "picard ff",
        {"a": args.a, "b": args.b, "n": args.n, "convention": args.convention},
        out,
        references=["Picard group of FF(a,b,n)"],
    )


def _classes(cs: Sequence[ChowClass], prefix: str, factored: bool) -> dict[str, str]:
    out = {}
    for i, c in enumerate(cs):
        out[f"{prefix}{i}"] = c.factored_str() if factored else str(c)
    return out


def cmd_lines_divisor(args) -> CommandResult:
    comp = moduli.lines_in_surfaces(args.d)
    out: dict[str, Any] = {
        "integral": comp.integral,
        "rank": comp.rank,
        "divisor_class": str(comp.divisor_class),
    }
    if args.show_chern:
        chern = [comp.chern_formal.c(i) for i in range(1, 5)]
        for i, c in enumerate(chern, start=1):
            out[f"c{i}"] = c.factored_str()
        out["expanded"] = {f"c{i}": str(c) for i, c in enumerate(chern, start=1)}
        out["ch"] = _classes([comp.ch_formal.ch_part(i) for i in range(5)], "ch", factored=False)
    return CommandResult(
        "lines-divisor",
        {"d": args.d, "show_chern": args.show_chern},
        out,
        axioms=[
            "a general surface containing a line contains exactly one (pushforward has multiplicity 1)",
            "higher direct images of the twisted incidence sheaf vanish",
        ],
        references=["surfaces of degree d in P^3 containing a line"],
    )


def cmd_k3_table(args) -> CommandResult:
    pres = moduli.k3_picard_table(args.degree)
    return CommandResult(
        "k3 table",
        {"degree": args.degree},
        pres.to_json(),
        axioms=list(pres.axioms),
        references=[f"Picard group of the stack of quasi-polarized K3 surfaces of degree {args.degree}"],
    )


def cmd_k3_chi(args) -> CommandResult:
    chi = moduli.k3_euler_characteristic(args.l, args.p)
    return CommandResult("k3 chi", {"l": args.l, "p": args.p}, {"chi": chi})


def cmd_chow_demo(args) -> CommandResult:
    comp = moduli.lines_in_surfaces(4, with_divisor=False)
    out: dict[str, Any] = {
        "incidence_class": str(comp.incidence_class),
        "ch": _classes([comp.ch_formal.ch_part(i) for i in range(5)], "ch", factored=False),
        "chern": {f"c{i}": comp.chern_formal.c(i).factored_str() for i in range(1, 5)},
        "chern_expanded": {f"c{i}": str(comp.chern_formal.c(i)) for i in range(1, 5)},
        "integral": comp.integral,
    }
    if args.dump_ring:
        out["ring"] = comp.chern.ring.to_json()
    return CommandResult(
        "chow demo",
        {"dump_ring": args.dump_ring},
        out,
        references=["ch and Chern classes of Q_4 before imposing the relations of Gr(2,4)"],
    )


# -- argument parsing ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 2 with a one-line diagnostic
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser
    common.add_argument("--human", action="store_true", default=argparse.SUPPRESS, help="aligned text instead of JSON")
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS, help="also write the JSON to PATH")

    p = _Parser(prog="chowkit", description="Exact Chow ring and Picard group computations.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(parent, name: str, fn: Callable, **ints: str):
        q = parent.add_parser(name, parents=[common])
        for opt, help_ in ints.items():
            q.add_argument(f"--{opt}", type=int, required=True, help=help_)
        q.set_defaults(func=fn)
        return q

    disc = sub.add_parser("discriminant").add_subparsers(dest="kind", required=True, parser_class=_Parser)
    leaf(disc, "equidegree", cmd_discriminant_equidegree, d="degree", m="number of forms", n="dimension")
    leaf(disc, "bidegree", cmd_discriminant_bidegree, a="first degree", b="second degree", n="dimension")

    pic = sub.add_parser("picard").add_subparsers(dest="kind", required=True, parser_class=_Parser)
    gg = leaf(pic, "gg", cmd_picard_gg, d="degree", m="number of forms", n="dimension")
    gg.add_argument("--smooth", action="store_true", help="Picard group of the smooth locus")
    ff = leaf(pic, "ff", cmd_picard_ff, a="first degree", b="second degree", n="dimension")
    ff.add_argument("--convention", choices=CONVENTIONS, default="proof")

    lines = leaf(sub, "lines-divisor", cmd_lines_divisor, d="surface degree")
    lines.add_argument("--show-chern", action="store_true")

    k3 = sub.add_parser("k3").add_subparsers(dest="kind", required=True, parser_class=_Parser)
    table = k3.add_parser("table", parents=[common])
    table.add_argument("--degree", type=int, choices=(4, 6, 8), required=True)
    table.set_defaults(func=cmd_k3_table)
    leaf(k3, "chi", cmd_k3_chi, l="half the degree", p="power")

    chow = sub.add_parser("chow").add_subparsers(dest="kind", required=True, parser_class=_Parser)
    demo = chow.add_parser("demo", parents=[common])
    demo.add_argument("--dump-ring", action="store_true")
    demo.set_defaults(func=cmd_chow_demo)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[CommandResult | None, int]:
    """Parse and execute; returns the result (None on failure) and the exit code."""
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return None, EXIT_INTEGRITY
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return None, EXIT_PRECONDITION
    text = dumps(result)
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(render_human(result) if getattr(args, "human", False) else text)
    return result, EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        _, code = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return code


if __name__ == "__main__":
    sys.exit(main())
