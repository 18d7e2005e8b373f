"""Command line entry point: ``eatrees <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

from eatrees.canonical import symmetry_coefficient
from eatrees.duality import pairing, pairing_matrix
from eatrees.elementary import elementary_differential, parse_symbolic, symbolic_form
from eatrees.enumeration import (
    MissingOrderBound,
    OddParity,
    check_parity,
    enumerate_by_composition,
    enumerate_by_nodes,
    enumerate_by_order,
    enumerate_up_to_order,
)
from eatrees.equivariance import PROPERTIES, Disagreement, classification_matrix, summary_table
from eatrees.gradrewrite import NoExoticRepresentative, NonUniqueRepresentative, all_classes, exotic_normal_form
from eatrees.polyfield import DimensionMismatch, IndexOutOfRange, PolyVectorField, as_fraction
from eatrees.render import render_table, render_trees, to_dot, tree_from_json
from eatrees.tree import Composition, ExoticAromaticTree, InvalidTree

FORMATS = ("json", "dot", "table", "latex")
FILTERS = ("aromatic", "exotic", "connected", "butcher")


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    seed: int = 0
    format: str | None = None
    exact_only: bool = False


class UsageError(Exception):
    pass


def read_tree(spec: str) -> ExoticAromaticTree:
    """A tree from a JSON file, inline JSON, or index notation."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = spec
    text = text.strip()
    if text.startswith("{"):
        return tree_from_json(json.loads(text))
    return parse_symbolic(text)


def read_field(spec: str, dimension: int | None = None) -> PolyVectorField:
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            spec = fh.read()
    return PolyVectorField.parse(spec, dimension)


def read_point(spec: str) -> tuple[Fraction, ...]:
    return tuple(as_fraction(Fraction(p.strip())) for p in spec.split(",") if p.strip())


def _passes(t: ExoticAromaticTree, name: str) -> bool:
    fl = t.classify()
    return {
        "aromatic": fl.is_aromatic,
        "exotic": fl.is_exotic_tree,
        "connected": fl.is_connected,
        "butcher": fl.is_butcher_tree,
    }[name]


def _describe(t: ExoticAromaticTree) -> dict:
    return {
        **t.to_json(),
        "sigma_cycles": t.sigma_string(),
        "symbolic": str(symbolic_form(t)),
        "order": t.order,
        "composition": list(t.composition.counts),
        "symmetry": symmetry_coefficient(t),
    }


def _cmd_enumerate(cfg: RunConfig, out: TextIO) -> int:
    o = cfg.options
    if o.get("composition"):
        kappa = Composition.parse(o["composition"])
        check_parity(kappa)
        trees = enumerate_by_composition(kappa)
    elif o.get("nodes") is not None:
        trees = enumerate_by_nodes(o["nodes"], o.get("max_order"))
    elif o.get("order") is not None:
        trees = enumerate_up_to_order(o["order"]) if o.get("up_to") else enumerate_by_order(o["order"])
    else:
        raise UsageError("enumerate needs --order, --composition or --nodes")
    for name in o.get("filter") or ():
        trees = [t for t in trees if _passes(t, name)]
    out.write(render_trees(trees, cfg.format or "table"))
    return 0


def _cmd_render(cfg: RunConfig, out: TextIO) -> int:
    t = read_tree(cfg.options["tree"])
    fmt = cfg.format or "dot"
    if fmt == "dot":
        out.write(to_dot(t) + "\n")
    else:
        out.write(render_trees([t], fmt))
    return 0


def _cmd_eval(cfg: RunConfig, out: TextIO) -> int:
    o = cfg.options
    t = read_tree(o["tree"])
    x = read_point(o["point"])
    f = read_field(o["field"], len(x))
    value = elementary_differential(t, f, x)
    text = ",".join(str(v) for v in value) if t.rooted else str(value)
    if cfg.format == "json":
        obj = {"value": text.split(",") if t.rooted else text}
        if o.get("symbolic"):
            obj["symbolic"] = str(symbolic_form(t))
            obj["expression"] = symbolic_form(t).to_json()
        out.write(json.dumps(obj, ensure_ascii=False) + "\n")
        return 0
    if o.get("symbolic"):
        out.write(str(symbolic_form(t)) + "\n")
    out.write(text + "\n")
    return 0


def _cmd_pair(cfg: RunConfig, out: TextIO) -> int:
    o = cfg.options
    if o.get("matrix"):
        if o.get("order") is None:
            raise UsageError("pair --matrix needs --order")
        trees = enumerate_up_to_order(o["order"])
        m = pairing_matrix(trees, o.get("workers"))
        obj = {
            "trees": [t.sigma_string() + " tau=" + (t.tau_string() or "()") for t in trees],
            "symbolic": [str(symbolic_form(t)) for t in trees],
            "matrix": [[str(v) for v in row] for row in m],
        }
        out.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")
        return 0
    specs = o.get("tree") or []
    if len(specs) != 2:
        raise UsageError("pair needs exactly two --tree arguments (or --matrix)")
    a, b = (read_tree(s) for s in specs)
    out.write(str(pairing(a, b, theta=not o.get("theta_free"))) + "\n")
    return 0


def _cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    o = cfg.options
    props = PROPERTIES if o.get("property") in (None, "all") else (o["property"],)
    try:
        m = classification_matrix(o["order"], props, seed=cfg.seed, exact_only=cfg.exact_only)
    except Disagreement as exc:
        sys.stderr.write(f"disagreement: {exc}\n")
        if cfg.format != "table":
            out.write(json.dumps({"agree": False, "failure": exc.report.to_json()}, indent=1, ensure_ascii=False) + "\n")
        return 1
    if cfg.format == "table":
        out.write(m.render() + "\n\n" + summary_table(m) + "\n")
    else:
        obj = {"order": o["order"], "seed": cfg.seed, "properties": list(props), "agree": True, "trees": m.to_json()}
        out.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")
    return 0


def _cmd_normalize(cfg: RunConfig, out: TextIO) -> int:
    t = read_tree(cfg.options["tree"])
    nf = exotic_normal_form(t)
    if cfg.format == "json":
        out.write(json.dumps(_describe(nf), ensure_ascii=False) + "\n")
    else:
        out.write(render_table([nf]) if cfg.format == "table" else f"{nf.sigma_string()} tau={nf.tau_string() or '()'}  {symbolic_form(nf)}\n")
    return 0


def _cmd_classes(cfg: RunConfig, out: TextIO) -> int:
    classes = all_classes(cfg.options["order"])
    if cfg.format == "json":
        obj = [
            {
                "connected": cls[0].num_components == 1,
                "members": [_describe(t) for t in cls],
                "exotic": [str(symbolic_form(t)) for t in cls if t.classify().is_exotic_tree],
            }
            for cls in classes
        ]
        out.write(json.dumps(obj, indent=1, ensure_ascii=False) + "\n")
        return 0
    for k, cls in enumerate(classes, 1):
        out.write(f"class {k}: " + " ~ ".join(str(symbolic_form(t)) for t in cls) + "\n")
    return 0


COMMANDS = {
    "enumerate": _cmd_enumerate,
    "render": _cmd_render,
    "eval": _cmd_eval,
    "pair": _cmd_pair,
    "verify": _cmd_verify,
    "normalize": _cmd_normalize,
    "classes": _cmd_classes,
}


def run(cfg: RunConfig, out: TextIO | None = None) -> int:
    """Dispatch one command; returns the exit status."""
    out = out or sys.stdout
    try:
        return COMMANDS[cfg.command](cfg, out)
    except (UsageError, MissingOrderBound, OddParity, InvalidTree, DimensionMismatch, IndexOutOfRange, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (NoExoticRepresentative, NonUniqueRepresentative) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=d if suppress else 0, help="seed for randomized trials")
    p.add_argument("--format", choices=FORMATS, default=d if suppress else None)
    p.add_argument("--exact-only", action="store_true", default=d if suppress else False,
                   help="skip advisory floating-point trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eatrees", description="Exotic aromatic trees and their elementary differentials.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list trees by order, composition or node count")
    p.add_argument("--order", type=int)
    p.add_argument("--up-to", action="store_true", help="with --order: include all lower orders")
    p.add_argument("--composition", help='comma separated counts, e.g. "0,1,1"')
    p.add_argument("--nodes", type=int)
    p.add_argument("--max-order", type=int)
    p.add_argument("--filter", choices=FILTERS, action="append")

    p = sub.add_parser("render", parents=[common], help="draw or tabulate one tree")
    p.add_argument("--tree", required=True, help="JSON file, inline JSON or index notation")

    p = sub.add_parser("eval", parents=[common], help="evaluate an elementary differential exactly")
    p.add_argument("--tree", required=True)
    p.add_argument("--field", required=True, help='file or text such as "f1 = x2^2; f2 = 0"')
    p.add_argument("--point", required=True, help='comma separated rationals, e.g. "0,1/2"')
    p.add_argument("--symbolic", action="store_true")

    p = sub.add_parser("pair", parents=[common], help="duality pairing of two trees, or the pairing matrix")
    p.add_argument("--tree", action="append")
    p.add_argument("--matrix", action="store_true")
    p.add_argument("--order", type=int)
    p.add_argument("--theta-free", action="store_true", help="set every theta to 1 instead of extracting the coefficient")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", parents=[common], help="check equivariance verdicts against the tree classes")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--property", choices=PROPERTIES + ("all",), default="all")

    p = sub.add_parser("normalize", parents=[common], help="exotic normal form under gradient rewriting")
    p.add_argument("--tree", required=True)

    p = sub.add_parser("classes", parents=[common], help="gradient equivalence classes of one order")
    p.add_argument("--order", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items() if k not in ("command", "seed", "format", "exact_only")}
    cfg = RunConfig(ns.command, opts, ns.seed, ns.format, ns.exact_only)
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
