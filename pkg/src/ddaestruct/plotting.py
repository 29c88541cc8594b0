"""Matplotlib rendering of bipartite graph views, one figure per pipeline stage.

Equations sit on the left, variable classes on the right; pruned classes and
their edges are grayed out and the current matching is drawn bold.
"""

from __future__ import annotations

from typing import Optional

from .bigraph import GraphView, _class_label, _eq_label
from .matching import Matching


def render_figure(view: GraphView, path: str,
                  matching: Optional[Matching] = None,
                  title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matching = matching or {}
    g = view.parent
    n_eq = len(g.equations)
    n_cls = max(len(g.classes), 1)
    height = max(n_eq, n_cls)

    fig, ax = plt.subplots(figsize=(5.0, 0.55 * height + 1.2))
    eq_y = {ref.index: height - i * (height / max(n_eq, 1))
            for i, ref in enumerate(g.equations)}
    cls_y = {cpos: height - i * (height / n_cls)
             for i, cpos in enumerate(range(len(g.classes)))}

    for eq_index, cpos in sorted(g.edges):
        key = g.classes[cpos]
        if matching.get(key) == eq_index:
            style = dict(color="tab:blue", linewidth=2.4, zorder=2)
        elif cpos not in view.active:
            style = dict(color="0.8", linewidth=0.9, linestyle="--", zorder=1)
        else:
            style = dict(color="0.3", linewidth=1.1, zorder=1)
        ax.plot([0.0, 1.0], [eq_y[eq_index], cls_y[cpos]], **style)

    for ref in g.equations:
        ax.plot(0.0, eq_y[ref.index], "s", color="black", markersize=9, zorder=3)
        ax.annotate(_eq_label(ref), (0.0, eq_y[ref.index]),
                    textcoords="offset points", xytext=(-10, 0),
                    ha="right", va="center", fontsize=9, family="monospace")
    for cpos, key in enumerate(g.classes):
        active = cpos in view.active
        ax.plot(1.0, cls_y[cpos], "o",
                color="black" if active else "0.75", markersize=9, zorder=3)
        ax.annotate(_class_label(key), (1.0, cls_y[cpos]),
                    textcoords="offset points", xytext=(10, 0),
                    ha="left", va="center", fontsize=9, family="monospace",
                    color="black" if active else "0.6")

    if title:
        ax.set_title(title, fontsize=10)
    ax.set_xlim(-0.65, 1.65)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
