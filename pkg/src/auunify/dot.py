"""Graphviz rendering of derivation trees."""

from __future__ import annotations

from .engine import DerivationTree, Status
from .syntax import format_substitution


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def tree_to_dot(tree: DerivationTree, name: str = "derivation") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box, fontname=monospace];"]
    for node in tree.nodes:
        p = node.problem
        sigma = format_substitution(p.sigma)
        if p.status is Status.SOLVED:
            label, attrs = f"{sigma}\nsolved", ", color=blue"
        elif p.status is Status.FAILED:
            label, attrs = "fail", ", color=red, shape=plaintext"
        else:
            label, attrs = f"{p}\n{sigma}", ""
            if node.dead_end:
                label += "\ndead end"
                attrs = ", style=dashed"
        lines.append(f"  n{node.id} [label={_quote(label)}{attrs}];")
    for node in tree.nodes:
        if node.parent is None:
            continue
        if node.problem.status is Status.FAILED:
            edge = str(node.problem.failure)
        else:
            edge = str(node.rule)
        lines.append(f"  n{node.parent} -> n{node.id} [label={_quote(edge)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
