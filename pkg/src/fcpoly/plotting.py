"""Static figures for complexes and inventories (files only, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402
import numpy as np  # noqa: E402

from .polytope import f_vector, perm_word, vertex_coordinates  # noqa: E402

# PNG metadata otherwise carries the matplotlib version string
_META = {"Software": None}


def _layout(c):
    g = c.skeleton_graph()
    nodes = list(g)
    coords = vertex_coordinates(c)
    if len(nodes) <= 2:
        return {r: (float(coords[r][0]), 0.0) if len(coords[r]) else (0.0, 0.0) for r in nodes}
    pts = np.array([coords[r] for r in nodes], dtype=float)
    pts -= pts.mean(axis=0)
    # principal plane of the vertex cloud as the starting layout
    _, _, vt = np.linalg.svd(pts, full_matrices=False)
    flat = pts @ vt[:2].T
    if flat.shape[1] < 2:
        flat = np.column_stack([flat[:, 0], np.zeros(len(nodes))])
    if len({(round(x, 6), round(y, 6)) for x, y in flat}) < len(nodes):
        return nx.kamada_kawai_layout(g)
    return nx.kamada_kawai_layout(g, pos={r: tuple(p) for r, p in zip(nodes, flat)})


def plot_skeleton(c, path, label=None, title=None):
    """Draw the labelled 1-skeleton of ``c`` to ``path``."""
    label = label or perm_word
    g = c.skeleton_graph()
    pos = _layout(c)
    fig, ax = plt.subplots(figsize=(9, 8))
    nx.draw_networkx_edges(g, pos, ax=ax, edge_color="0.45", width=1.2)
    nx.draw_networkx_nodes(g, pos, ax=ax, node_size=40, node_color="tab:blue")
    labels = {r: label(r) for r in g}
    nx.draw_networkx_labels(g, pos, labels=labels, ax=ax, font_size=6, verticalalignment="bottom")
    ax.set_title(title or f"P^{c.N}_{c.n}: {len(g)} vertices, {g.number_of_edges()} edges")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path


def plot_f_vector(c, path, title=None):
    fv = f_vector(c)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(range(len(fv)), fv, color="tab:gray")
    for d, k in enumerate(fv):
        ax.text(d, k, str(k), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(range(len(fv)))
    ax.set_xlabel("dimension")
    ax.set_ylabel("cells")
    ax.set_title(title or f"boundary f-vector of P^{c.N}_{c.n}")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path


def plot_inventory(inventory, path, title="cross-term inventory"):
    """Heat table of generator totals over (n, r)."""
    ns = sorted({n for n, _ in inventory})
    rs = sorted({r for _, r in inventory})
    grid = [[sum(inventory.get((n, r), {}).values()) for r in rs] for n in ns]
    fig, ax = plt.subplots(figsize=(4.5, 4))
    ax.imshow(grid, cmap="Greys", origin="lower", vmin=0)
    for i, n in enumerate(ns):
        for j, r in enumerate(rs):
            cell = inventory.get((n, r), {})
            txt = "\n".join(f"{k}:{v}" for k, v in sorted(cell.items())) or "0"
            ax.text(j, i, txt, ha="center", va="center", fontsize=7, color="tab:red")
    ax.set_xticks(range(len(rs)), [str(r) for r in rs])
    ax.set_yticks(range(len(ns)), [str(n) for n in ns])
    ax.set_xlabel("r")
    ax.set_ylabel("n")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path
