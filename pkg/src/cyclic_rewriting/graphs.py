"""Small directed-graph helpers: strongly connected components and text dumps."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping


def strongly_connected_components(nodes: Iterable[Hashable],
                                  succ: Mapping[Hashable, Iterable[Hashable]]) -> list[list]:
    """Tarjan's algorithm, iterative.  Components come out in reverse topological order.

    ``succ`` may omit nodes (treated as sinks) and may mention targets outside
    ``nodes``; those are visited too.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def adjacency_text(order: Iterable, edges: Mapping, label: Callable, edge_label: Callable) -> str:
    lines = []
    for v in order:
        targets = edges.get(v, [])
        rhs = ", ".join(f"{label(t)} [{edge_label(e)}]" for t, e in targets)
        lines.append(f"{label(v)}: {rhs}" if rhs else f"{label(v)}:")
    return "\n".join(lines) + "\n"


def dot_text(order: Iterable, edges: Mapping, label: Callable, edge_label: Callable, *,
             name: str = "G", highlight: Iterable = ()) -> str:
    highlight = set(highlight)
    ids = {}
    lines = [f"digraph {name} {{"]
    for v in order:
        ids[v] = f"n{len(ids)}"
        style = ", peripheries=2" if v in highlight else ""
        lines.append(f'  {ids[v]} [label="{_esc(label(v))}"{style}];')
    for v in order:
        for t, e in edges.get(v, []):
            if t not in ids:
                ids[t] = f"n{len(ids)}"
                lines.append(f'  {ids[t]} [label="{_esc(label(t))}", style=dashed];')
            lines.append(f'  {ids[v]} -> {ids[t]} [label="{_esc(edge_label(e))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
