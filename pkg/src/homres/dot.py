"""Graphviz DOT output for diagrams of modules and maps.

Objects are nodes labelled by name and dimension. An edge ``f: A -> B`` is
labelled with the rank of ``f`` and, when ``f`` has a successor in its row,
with the exactness verdict at ``B`` (``exact`` or ``not exact``). Objects
shared between rows (the same Python object) are drawn once, which is how a
construction's rows get glued together. No layout hints are emitted.
"""
from __future__ import annotations

from .modcat import Module, Morphism, is_exact


class Diagram:
    def __init__(self, name: str = "diagram"):
        self.name = name
        self._nodes: list[Module] = []
        self._rows: list[tuple[str, list[Morphism]]] = []
        self._extra: list[tuple[Morphism, str]] = []

    def _node(self, m: Module) -> str:
        for i, n in enumerate(self._nodes):
            if n is m:
                return f"n{i}"
        self._nodes.append(m)
        return f"n{len(self._nodes) - 1}"

    def row(self, label: str, maps: list[Morphism]) -> "Diagram":
        self._rows.append((label, list(maps)))
        return self

    def edge(self, f: Morphism, label: str = "") -> "Diagram":
        self._extra.append((f, label))
        return self

    def render(self) -> str:
        lines = [f"digraph {_quote(self.name)} {{"]
        edges = []
        for r, (label, maps) in enumerate(self._rows):
            for i, f in enumerate(maps):
                a, b = self._node(f.source), self._node(f.target)
                text = f"rank {f.rank()}"
                if i + 1 < len(maps):
                    text += ", exact" if is_exact([f, maps[i + 1]]) else ", not exact"
                edges.append(f'  {a} -> {b} [label={_quote(text)}, row={_quote(label)}];')
        for f, label in self._extra:
            a, b = self._node(f.source), self._node(f.target)
            text = f"rank {f.rank()}" + (f", {label}" if label else "")
            edges.append(f'  {a} -> {b} [label={_quote(text)}, style=dashed];')
        for i, m in enumerate(self._nodes):
            lines.append(f"  n{i} [label={_quote(f'{m.name or chr(63)} ({m.dim})')}];")
        lines.extend(edges)
        lines.append("}")
        return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def sequence_dot(maps: list[Morphism], name: str = "sequence") -> str:
    return Diagram(name).row(name, maps).render()
