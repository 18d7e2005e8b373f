"""Output formats: JSON, Graphviz DOT, plain-text and LaTeX tables."""

from __future__ import annotations

import json
from typing import Sequence

from eatrees.elementary import render_symbolic
from eatrees.tree import ExoticAromaticTree, validate

COLUMNS = ("|γ|", "|κ|", "κ", "κ'", "τ", "σ", "F(γ)(f)")


def tree_to_json(t: ExoticAromaticTree) -> dict:
    return t.to_json()


def tree_from_json(obj) -> ExoticAromaticTree:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return validate(obj)


def load_tree(path: str) -> ExoticAromaticTree:
    with open(path, encoding="utf-8") as fh:
        return tree_from_json(json.load(fh))


def to_dot(t: ExoticAromaticTree, name: str = "tree") -> str:
    """Graphviz drawing.

    Standard arrows are solid edges from source to target vertex, lianas are
    dashed undirected edges between the two targets, stolons are doubled
    undirected edges, and the root carries an edge to a free point.
    """
    lines = [f"digraph {name} {{", "  node [shape=circle, width=0.25, label=\"\"];"]
    for v in t.vertex_elements:
        lines.append(f"  v{t.element_vertex(v)} [xlabel=\"{t.element_vertex(v)}\"];")
    if t.rooted:
        lines.append("  root [shape=point, width=0.05];")
    for x, y in t.sigma_pairs:
        if x == 0:
            if t.is_vertex(y):
                lines.append(f"  v{t.element_vertex(y)} -> root [arrowhead=none];")
            else:
                lines.append(f"  v{t.element_vertex(t.target(y))} -> root [style=dashed, arrowhead=none];")
        elif t.is_vertex(x):
            a, b = t.element_vertex(x), t.element_vertex(y)
            lines.append(f"  v{a} -> v{b} [dir=none, color=\"black:invis:black\"];")
        elif t.is_vertex(y):
            lines.append(f"  v{t.element_vertex(y)} -> v{t.element_vertex(t.target(x))};")
        else:
            a, b = t.element_vertex(t.target(x)), t.element_vertex(t.target(y))
            lines.append(f"  v{a} -> v{b} [dir=none, style=dashed];")
    lines.append("}")
    return "\n".join(lines)


def _tuple(xs: Sequence[int]) -> str:
    return "(" + ",".join(map(str, xs)) + ")"


def table_row(t: ExoticAromaticTree) -> tuple[str, ...]:
    kappa = t.composition
    return (
        str(t.order),
        str(kappa.size),
        _tuple(kappa.counts),
        _tuple(kappa.derived),
        t.tau_string(),
        t.sigma_string(),
        render_symbolic(t),
    )


def render_table(trees: Sequence[ExoticAromaticTree]) -> str:
    rows = [COLUMNS] + [table_row(t) for t in trees]
    widths = [max(len(r[i]) for r in rows) for i in range(len(COLUMNS))]
    out = []
    for k, r in enumerate(rows):
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if k == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def _latex_sigma(t: ExoticAromaticTree) -> str:
    def lab(x):
        return f"\\Circled{{{x[1:]}}}" if isinstance(x, str) else str(x)

    return "".join(f"({lab(a)},{lab(b)})" for a, b in t.sigma_labels())


def render_latex(trees: Sequence[ExoticAromaticTree]) -> str:
    head = " & ".join(["$\\abs{\\gamma}$", "$\\abs{\\kappa}$", "$\\kappa$", "$\\kappa'$", "$\\tau$", "$\\sigma$", "$F(\\gamma)(f)$"])
    lines = ["\\begin{tabular}{|c|c|c|c|c|c|c|}", "\\hline", head + " \\\\", "\\hline"]
    for t in trees:
        kappa = t.composition
        cells = [
            str(t.order),
            str(kappa.size),
            f"${_tuple(kappa.counts)}$",
            f"${_tuple(kappa.derived)}$",
            f"${t.tau_string()}$" if t.tau else "",
            f"${_latex_sigma(t)}$",
            f"${render_symbolic(t, 'latex')}$",
        ]
        lines.append(" & ".join(cells) + " \\\\")
        lines.append("\\hline")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"


def render_json(trees: Sequence[ExoticAromaticTree]) -> str:
    out = []
    for t in trees:
        obj = tree_to_json(t)
        obj["symbolic"] = render_symbolic(t)
        out.append(obj)
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def render_trees(trees: Sequence[ExoticAromaticTree], fmt: str) -> str:
    if fmt == "json":
        return render_json(trees)
    if fmt == "table":
        return render_table(trees)
    if fmt == "latex":
        return render_latex(trees)
    if fmt == "dot":
        return "\n".join(to_dot(t, f"tree{k}") for k, t in enumerate(trees)) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
