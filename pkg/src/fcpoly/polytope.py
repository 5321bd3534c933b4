"""Permutohedra and face-codegeneracy polyhedra as finite cell complexes.

A vertex of the N-permutohedron is an arrangement ``σ`` of the labels
``1..N``: ``σ[p]`` is the label sitting in position ``p``.  Labels ``<= n``
play the role of codegeneracies and labels ``> n`` the role of faces.  The
face-codegeneracy polyhedron ``P^N_n`` identifies two arrangements that
differ by swapping adjacent positions holding two face labels.

Faces of the permutohedron are ordered set partitions ``(B_1|...|B_k)`` of
the labels: the arrangements whose first ``|B_1|`` positions hold ``B_1``,
and so on.  Cells of ``P^N_n`` are the images of those faces; faces with
the same image are merged and their dimension is the product-rule
dimension of the coarsest partition realizing them.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .errors import InvalidQuotient, NotASphereCandidate, SizeLimit, UnsupportedDim

FORMAT_VERSION = 1
DEFAULT_MAX_N = 8


def max_n():
    """Enumeration bound, overridable through ``FCPOLY_MAX_N``."""
    raw = os.environ.get("FCPOLY_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise SizeLimit(f"FCPOLY_MAX_N must be an integer, got {raw!r}") from None


def check_size(N):
    bound = max_n()
    if N > bound:
        raise SizeLimit(f"N={N} exceeds the enumeration bound {bound} (set FCPOLY_MAX_N)")


def validate_permutation(sigma):
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    return sigma


def class_repr(sigma, n):
    """Lexicographically least member of the vertex class of ``sigma``.

    Maximal runs of adjacent face labels can be permuted freely, so sorting
    each run gives the least member.
    """
    out = list(sigma)
    p = 0
    while p < len(out):
        if out[p] <= n:
            p += 1
            continue
        q = p
        while q < len(out) and out[q] > n:
            q += 1
        out[p:q] = sorted(out[p:q])
        p = q
    return tuple(out)


def class_members(rep, n):
    """All arrangements in the class named by ``rep``."""
    runs = []
    p = 0
    while p < len(rep):
        if rep[p] <= n:
            runs.append([(rep[p],)])
            p += 1
            continue
        q = p
        while q < len(rep) and rep[q] > n:
            q += 1
        runs.append(list(itertools.permutations(rep[p:q])))
        p = q
    return frozenset(sum(parts, ()) for parts in itertools.product(*runs))


def block_decomposition(partition, n):
    """``(ℓ_i, c_i)`` for each block: its size and how many labels are ``<= n``."""
    return tuple((len(b), sum(1 for x in b if x <= n)) for b in partition)


def product_dim(blocks):
    """Dimension of ``∏ P^{ℓ_i}_{c_i}``: a factor with no codegeneracy is a point."""
    return sum(l - 1 for l, c in blocks if c >= 1)


@dataclass(frozen=True)
class VertexClass:
    repr: tuple
    members: frozenset

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Cell:
    dim: int
    vertices: frozenset
    blocks: tuple  # ((ℓ, c), ...) in position order
    partition: tuple  # coarsest ordered set partition of labels realizing the cell

    def sort_key(self):
        return (self.dim, sorted(self.vertices), self.partition)


@dataclass
class CellComplex:
    """Finite graded face poset.  Treat instances as read-only."""

    N: int
    n: int
    classes: dict  # repr -> VertexClass
    cells: tuple  # sorted by Cell.sort_key
    covers: tuple  # (lower index, upper index)
    top: int
    quotient: bool = True
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {c.vertices: i for i, c in enumerate(self.cells)}

    @property
    def dim(self):
        return self.cells[self.top].dim

    @property
    def top_cell(self):
        return self.cells[self.top]

    def cell_of(self, vertices):
        return self.cells[self._index[frozenset(vertices)]]

    def index_of(self, cell):
        return self._index[cell.vertices]

    def cells_of_dim(self, d):
        return [c for c in self.cells if c.dim == d]

    def class_of(self, sigma):
        return class_repr(sigma, self.n) if self.quotient else tuple(sigma)

    def boundary_cells(self):
        return [c for i, c in enumerate(self.cells) if i != self.top]

    def facets(self):
        """Top-codimension-one cells of the boundary."""
        return [c for c in self.cells if c.dim == self.dim - 1]

    @cached_property
    def hasse(self):
        g = nx.DiGraph()
        for i, c in enumerate(self.cells):
            g.add_node(i, dim=c.dim)
        g.add_edges_from(self.covers)
        return g

    def edges(self):
        """1-skeleton as pairs of class representatives."""
        out = []
        for c in self.cells_of_dim(1):
            a, b = sorted(c.vertices)
            out.append((a, b))
        return sorted(out)

    def skeleton_graph(self):
        g = nx.Graph()
        g.add_nodes_from(sorted(self.classes))
        g.add_edges_from(self.edges())
        return g


def ordered_set_partitions(labels):
    """All ordered set partitions of ``labels``, blocks as sorted tuples."""
    labels = tuple(labels)
    if not labels:
        yield ()
        return
    first, rest = labels[0], labels[1:]
    for part in ordered_set_partitions(rest):
        for i in range(len(part)):
            merged = tuple(sorted(part[i] + (first,)))
            yield part[:i] + (merged,) + part[i + 1:]
        for i in range(len(part) + 1):
            yield part[:i] + ((first,),) + part[i:]


def _consecutive_blocks(sigma, cuts):
    """Split ``sigma`` after the positions flagged in the bitmask ``cuts``."""
    blocks = []
    start = 0
    for p in range(len(sigma) - 1):
        if cuts >> p & 1:
            blocks.append(sigma[start:p + 1])
            start = p + 1
    blocks.append(sigma[start:])
    return blocks


def _build(N, n, quotient):
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got N={N}, n={n}")
    check_size(N)
    perms = list(itertools.permutations(range(1, N + 1)))
    if quotient:
        class_of = {s: class_repr(s, n) for s in perms}
    else:
        class_of = {s: s for s in perms}
    classes = {}
    for s, r in class_of.items():
        classes.setdefault(r, set()).add(s)
    classes = {r: VertexClass(r, frozenset(m)) for r, m in sorted(classes.items())}

    # image of each permutohedron face: each arrangement lies in exactly the
    # faces obtained by cutting it into consecutive blocks
    images = defaultdict(set)
    for s in perms:
        r = class_of[s]
        for cuts in range(1 << (N - 1)):
            osp = tuple(tuple(sorted(b)) for b in _consecutive_blocks(s, cuts))
            images[osp].add(r)

    groups = defaultdict(list)
    for osp, verts in images.items():
        groups[frozenset(verts)].append(osp)

    label_n = n if quotient else N  # in the plain permutohedron every label carries dimension
    cells = []
    for verts, osps in groups.items():
        dims = {product_dim(block_decomposition(o, label_n)) for o in osps}
        if len(dims) != 1:
            raise InvalidQuotient(f"faces with equal image disagree on dimension: {sorted(dims)}")
        rep = min(osps, key=lambda o: (len(o), o))
        coarsest = [o for o in osps if len(o) == len(rep)]
        labels = {block_decomposition(o, label_n) for o in coarsest}
        if len(labels) != 1:
            raise InvalidQuotient(f"merged faces disagree on decomposition labels: {sorted(labels)}")
        cells.append(Cell(dims.pop(), verts, block_decomposition(rep, label_n), rep))
    cells.sort(key=Cell.sort_key)
    index = {c.vertices: i for i, c in enumerate(cells)}

    # covering relations: every cover is realized by splitting one block
    covers = set()
    for osp, verts in images.items():
        upper = index[frozenset(verts)]
        for i, block in enumerate(osp):
            if len(block) < 2:
                continue
            for k in range(1, len(block)):
                for left in itertools.combinations(block, k):
                    right = tuple(x for x in block if x not in left)
                    child = osp[:i] + (left, right) + osp[i + 1:]
                    lower = index[frozenset(images[child])]
                    if cells[lower].dim == cells[upper].dim - 1:
                        covers.add((lower, upper))
    top = index[frozenset(classes)]
    return CellComplex(N, n, classes, tuple(cells), tuple(sorted(covers)), top, quotient)


def permutohedron(N):
    """The (N-1)-dimensional permutohedron; faces are ordered set partitions."""
    return _build(N, N - 1, quotient=False)


def fc_polytope(N, n):
    """The face-codegeneracy polyhedron ``P^N_n``.

    ``n = N`` (no face labels) is accepted and gives the permutohedron; it
    arises for words made of codegeneracies only.
    """
    return _build(N, n, quotient=True)


def facets_at_vertex(sigma, N, n, admissible_only=True):
    """Cells through ``sigma`` given by consecutive position blocks.

    By default a cut between positions ``p`` and ``p+1`` is admitted only if
    at least one of the two labels there is ``<= n``.  Every consecutive
    partition still names a product cell, and the admitted ones miss some
    cells through the vertex (an edge whose endpoint sits inside a face run,
    for instance); pass ``admissible_only=False`` to list them all.

    Returns ``(position_blocks, decomposition)`` pairs with 1-based
    positions; the uncut partition (the top cell) comes first.
    """
    sigma = validate_permutation(sigma)
    if len(sigma) != N:
        raise ValueError(f"permutation has length {len(sigma)}, expected {N}")
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got N={N}, n={n}")
    allowed = [p for p in range(N - 1) if not admissible_only or sigma[p] <= n or sigma[p + 1] <= n]
    out = []
    for r in range(len(allowed) + 1):
        for chosen in itertools.combinations(allowed, r):
            cuts = sum(1 << p for p in chosen)
            positions = _consecutive_blocks(tuple(range(1, N + 1)), cuts)
            labels = [tuple(sigma[p - 1] for p in blk) for blk in positions]
            out.append((tuple(positions), block_decomposition(labels, n)))
    return out


def partition_image(complex_, label_partition):
    """The cell that is the image of the face ``(B_1|...|B_k)``."""
    verts = set()
    for parts in itertools.product(*(itertools.permutations(b) for b in label_partition)):
        verts.add(complex_.class_of(sum(parts, ())))
    return complex_.cell_of(verts)


def f_vector(c, include_top=False):
    """Cells per dimension; the top cell is counted only with ``include_top``."""
    counts = defaultdict(int)
    for i, cell in enumerate(c.cells):
        if i == c.top and not include_top:
            continue
        counts[cell.dim] += 1
    if not counts:
        return ()
    return tuple(counts.get(d, 0) for d in range(max(counts) + 1))


def euler_boundary(c):
    """Alternating sum of the boundary f-vector."""
    if c.n == 0:
        raise NotASphereCandidate("P^N_0 is a single point and has no boundary sphere")
    return sum((-1) ** d * k for d, k in enumerate(f_vector(c)))


def vertex_degree_expected(rep, n):
    """Degree of a vertex class in the 1-skeleton, from its run structure.

    Two adjacent codegeneracy labels give one neighbour; a codegeneracy next
    to a run of ``r`` face labels gives ``r`` neighbours, one per face that
    can be moved past it.
    """
    runs = []
    p = 0
    while p < len(rep):
        if rep[p] <= n:
            runs.append(0)  # a codegeneracy slot
            p += 1
            continue
        q = p
        while q < len(rep) and rep[q] > n:
            q += 1
        runs.append(q - p)
        p = q
    deg = 0
    for a, b in zip(runs, runs[1:]):
        if a == 0 and b == 0:
            deg += 1
        else:
            deg += max(a, b)
    return deg


# ---------------------------------------------------------------------------
# poset utilities


def subcomplex_graph(c, cell):
    """Hasse diagram of the cells lying in ``cell``."""
    nodes = [i for i, x in enumerate(c.cells) if x.vertices <= cell.vertices]
    return c.hasse.subgraph(nodes).copy()


def product_graph(*graphs):
    """Hasse diagram of a product of graded posets."""
    g = nx.DiGraph()
    node_lists = [list(h.nodes) for h in graphs]
    for combo in itertools.product(*node_lists):
        g.add_node(combo, dim=sum(h.nodes[x]["dim"] for h, x in zip(graphs, combo)))
    for combo in itertools.product(*node_lists):
        for k, h in enumerate(graphs):
            for succ in h.successors(combo[k]):
                g.add_edge(combo, combo[:k] + (succ,) + combo[k + 1:])
    return g


def posets_isomorphic(g1, g2):
    if g1.number_of_nodes() != g2.number_of_nodes() or g1.number_of_edges() != g2.number_of_edges():
        return False
    return nx.is_isomorphic(g1, g2, node_match=lambda a, b: a["dim"] == b["dim"])


def order_by_inclusion(c):
    """Hasse diagram of cells ordered by vertex-set inclusion (an independent check)."""
    g = nx.DiGraph()
    for i, x in enumerate(c.cells):
        g.add_node(i, dim=x.dim)
    for i, a in enumerate(c.cells):
        for j, b in enumerate(c.cells):
            if i != j and a.vertices < b.vertices:
                g.add_edge(i, j)
    red = nx.transitive_reduction(g)
    red.add_nodes_from(g.nodes(data=True))  # the reduction drops node attributes
    return red


# ---------------------------------------------------------------------------
# export


def perm_word(rep):
    return "".join(str(x) for x in rep)


def complex_to_json(c, label=None):
    label = label or perm_word
    return {
        "format_version": FORMAT_VERSION,
        "N": c.N,
        "n": c.n,
        "vertices": [
            {"repr": label(r), "members": sorted(label(m) for m in vc.members)}
            for r, vc in c.classes.items()
        ],
        "cells": [
            {
                "dim": x.dim,
                "vertices": sorted(label(v) for v in x.vertices),
                "blocks": [list(b) for b in x.blocks],
                "partition": [list(b) for b in x.partition],
            }
            for x in c.cells
        ],
        "top": c.top,
    }


def complex_to_dot(c, label=None, name=None):
    label = label or perm_word
    name = name or f"P{c.N}_{c.n}"
    lines = [f"// format-version: {FORMAT_VERSION}", f'graph "{name}" {{']
    for r in c.classes:
        lines.append(f'  "{label(r)}";')
    for a, b in c.edges():
        lines.append(f'  "{label(a)}" -- "{label(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _hyperplane_basis(N):
    m = np.eye(N) - 1.0 / N
    q, _ = np.linalg.qr(m[:, : N - 1])
    return q[:, : N - 1]


def vertex_coordinates(c):
    """Centroid of the permutohedron points ``p`` over each class.

    The point of an arrangement records the position of each label, so
    adjacent transpositions of positions are the edges of the hull.
    """
    basis = _hyperplane_basis(c.N)
    coords = {}
    for r, vc in c.classes.items():
        pts = []
        for s in vc.members:
            pos = [0] * c.N
            for p, lab in enumerate(s):
                pos[lab - 1] = p + 1
            pts.append(pos)
        centroid = np.mean(np.array(pts, dtype=float), axis=0)
        coords[r] = (centroid - (c.N + 1) / 2.0) @ basis
    return coords


def _polygon_order(cell, edges):
    adj = defaultdict(list)
    for a, b in edges:
        if a in cell.vertices and b in cell.vertices:
            adj[a].append(b)
            adj[b].append(a)
    start = min(cell.vertices)
    cycle = [start]
    prev = None
    cur = start
    while True:
        nxt = [v for v in sorted(adj[cur]) if v != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        cycle.append(cur)
    if len(cycle) != len(cell.vertices):
        raise UnsupportedDim("2-cell boundary is not a polygon")
    return cycle


def complex_to_off(c):
    if c.dim != 3:
        raise UnsupportedDim(f"OFF export needs a 3-dimensional complex, got dim {c.dim}")
    coords = vertex_coordinates(c)
    order = list(c.classes)
    pos = {r: i for i, r in enumerate(order)}
    edges = c.edges()
    faces = []
    for cell in c.cells_of_dim(2):
        cyc = _polygon_order(cell, edges)
        pts = np.array([coords[v] for v in cyc])
        normal = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        if np.dot(normal, pts.mean(axis=0)) < 0:
            cyc = [cyc[0]] + cyc[1:][::-1]
        faces.append([pos[v] for v in cyc])
    lines = ["OFF", f"# format-version: {FORMAT_VERSION}", f"{len(order)} {len(faces)} {len(edges)}"]
    for r in order:
        lines.append(" ".join(f"{x:.6f}" for x in coords[r]))
    for f in faces:
        lines.append(" ".join(str(x) for x in [len(f)] + f))
    return "\n".join(lines) + "\n"


def export_complex(c, fmt, label=None):
    """Serialize ``c`` as ``json``, ``dot`` or ``off``; returns bytes."""
    if fmt == "json":
        text = json.dumps(complex_to_json(c, label), indent=1, sort_keys=True) + "\n"
    elif fmt == "dot":
        text = complex_to_dot(c, label)
    elif fmt == "off":
        text = complex_to_off(c)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return text.encode()
