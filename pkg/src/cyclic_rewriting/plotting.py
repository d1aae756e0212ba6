"""Figures for exploration graphs and reducibility classes (matplotlib, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .cyclic import AllseqReport, StepKind  # noqa: E402
from .rewriting import RewritingSystem  # noqa: E402
from .words import canonical_rotation  # noqa: E402

STYLE = {
    "figure.dpi": 100,
    "font.size": 9,
    "axes.titlesize": 10,
    "savefig.bbox": "tight",
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no timestamp metadata, so reruns give the same bytes
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def _layout(g):
    if g.number_of_nodes() <= 2:
        return nx.circular_layout(g)
    return nx.kamada_kawai_layout(g)


def plot_allseq(system: RewritingSystem, report: AllseqReport, path, *, max_nodes: int = 200) -> Path:
    """Explored graph: irreducible forms in green, root outlined, witness cycle in red."""
    nodes = report.order[:max_nodes]
    keep = set(nodes)
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    for src in nodes:
        for tgt, step in report.edges.get(src, ()):
            if tgt in keep:
                g.add_edge(src, tgt, kind=step.kind)
    cycle_edges = set()
    if report.witness is not None:
        w = report.witness
        seq = [canonical_rotation(w.start)] + [canonical_rotation(s.target) for s in w.steps]
        cycle_edges = set(zip(seq, seq[1:]))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 5))
        pos = _layout(g)
        colors = ["#7fc97f" if n in report.irreducible_forms else "#cfd8dc" for n in g.nodes]
        edges = ["#d62728" if e in cycle_edges else "#607d8b" for e in g.edges]
        styles = ["dashed" if g.edges[e]["kind"] is StepKind.ADDED else "solid" for e in g.edges]
        nx.draw_networkx_nodes(g, pos, ax=ax, node_color=colors, node_size=500,
                               edgecolors=["black" if n == report.root else "none" for n in g.nodes])
        nx.draw_networkx_edges(g, pos, ax=ax, edge_color=edges, style=styles, arrows=True,
                               connectionstyle="arc3,rad=0.1", node_size=500)
        nx.draw_networkx_labels(g, pos, ax=ax, labels={n: system.fmt(n) for n in g.nodes}, font_size=7)
        ax.set_title(f"cyclic reductions from {system.fmt(report.start)}")
        ax.set_axis_off()
        return _save(fig, path)


def plot_classes(system: RewritingSystem, classes, path) -> Path:
    """Class sizes, split by whether a class contains an irreducible word."""
    sizes = [len(c.members) for c in classes.classes]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        colors = ["#7fc97f" if c.has_irreducible else "#fdc086" for c in classes.classes]
        ax.bar(range(len(sizes)), sizes, color=colors)
        ax.set_xlabel("class (by least member)")
        ax.set_ylabel("canonical words")
        ax.set_title(f"mutual cyclic reducibility classes, length {classes.length}")
        return _save(fig, path)
