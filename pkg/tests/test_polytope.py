import itertools
import json
import math

import networkx as nx
import pytest

from fcpoly.errors import NotASphereCandidate, SizeLimit, UnsupportedDim
from fcpoly.polytope import (
    block_decomposition,
    class_members,
    class_repr,
    euler_boundary,
    export_complex,
    f_vector,
    facets_at_vertex,
    fc_polytope,
    partition_image,
    permutohedron,
    posets_isomorphic,
    product_graph,
    order_by_inclusion,
    subcomplex_graph,
    vertex_degree_expected,
)

from oracles import permutohedron_f_vector


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_permutohedron_f_vector_matches_formula(N):
    assert f_vector(permutohedron(N), include_top=True) == permutohedron_f_vector(N)


def test_small_examples():
    assert f_vector(permutohedron(2), include_top=True) == (2, 1)
    assert f_vector(permutohedron(3)) == (6, 6)
    assert f_vector(fc_polytope(2, 1), include_top=True) == (2, 1)
    assert len(fc_polytope(4, 2).classes) == 18
    assert f_vector(fc_polytope(4, 1)) == (8, 12, 6)


def test_cube():
    c = fc_polytope(4, 1)
    g = nx.convert_node_labels_to_integers(c.skeleton_graph())
    assert nx.is_isomorphic(g, nx.hypercube_graph(3))


@pytest.mark.parametrize("N", range(2, 7))
def test_class_sizes_sum(N):
    for n in range(N):
        c = fc_polytope(N, n) if N <= 5 or n in (0, 1, N - 1) else None
        if c is None:
            continue
        assert sum(len(v) for v in c.classes.values()) == math.factorial(N)


def test_orbit_count_by_brute_force():
    # classes = connected components of the face-face swap graph
    N, n = 5, 2
    g = nx.Graph()
    for s in itertools.permutations(range(1, N + 1)):
        g.add_node(s)
        for p in range(N - 1):
            if s[p] > n and s[p + 1] > n:
                g.add_edge(s, s[:p] + (s[p + 1], s[p]) + s[p + 2:])
    comps = [frozenset(x) for x in nx.connected_components(g)]
    c = fc_polytope(N, n)
    assert {vc.members for vc in c.classes.values()} == set(comps)
    for comp in comps:
        rep = min(comp)
        assert class_repr(next(iter(comp)), n) == rep
        assert class_members(rep, n) == comp


@pytest.mark.parametrize("N,n", [(3, 1), (4, 1), (4, 2), (4, 3), (5, 2), (5, 3)])
def test_graded_and_covers(N, n):
    c = fc_polytope(N, n)
    for lo, hi in c.covers:
        assert c.cells[hi].dim == c.cells[lo].dim + 1
        assert c.cells[lo].vertices < c.cells[hi].vertices
    # vertex set of a cell is the union of its facets' vertex sets
    below = {}
    for lo, hi in c.covers:
        below.setdefault(hi, set()).update(c.cells[lo].vertices)
    for i, cell in enumerate(c.cells):
        if cell.dim >= 1:
            assert below[i] == set(cell.vertices)
    # covers agree with vertex-set inclusion
    assert posets_isomorphic(c.hasse, order_by_inclusion(c))


@pytest.mark.parametrize("N,n", [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)])
def test_vertex_degree_rule(N, n):
    c = fc_polytope(N, n)
    g = c.skeleton_graph()
    for rep in c.classes:
        assert g.degree(rep) == vertex_degree_expected(rep, n)


@pytest.mark.parametrize("N,n", [(4, 1), (4, 2), (5, 2), (5, 3)])
def test_facets_are_products(N, n):
    c = fc_polytope(N, n)
    for cell in c.facets():
        assert cell.dim == N - 2
        factors = []
        for l, k in cell.blocks:
            factors.append(fc_polytope(l, k).hasse)
        assert posets_isomorphic(subcomplex_graph(c, cell), product_graph(*factors))


def _local_cells(c, sigma, admissible_only):
    out = set()
    for positions, deco in facets_at_vertex(sigma, c.N, c.n, admissible_only):
        labels = [tuple(sigma[p - 1] for p in blk) for blk in positions]
        cell = partition_image(c, labels)
        assert c.class_of(sigma) in cell.vertices
        assert cell.dim == sum(l - 1 for l, k in deco if k)
        assert posets_isomorphic(subcomplex_graph(c, cell), product_graph(*(fc_polytope(l, k).hasse for l, k in deco)))
        out.add(c.index_of(cell))
    return out


@pytest.mark.parametrize("N,n", [(3, 1), (4, 1), (4, 2), (4, 3)])
def test_facets_at_vertex_sound_and_complete(N, n):
    c = fc_polytope(N, n)
    for rep, vc in c.classes.items():
        containing = {i for i, x in enumerate(c.cells) if rep in x.vertices}
        admitted, everything = set(), set()
        for sigma in vc.members:
            local = facets_at_vertex(sigma, N, n)
            assert local[0][0] == (tuple(range(1, N + 1)),)
            for positions, _ in local:
                for a, b in zip(positions, positions[1:]):
                    assert sigma[a[-1] - 1] <= n or sigma[b[0] - 1] <= n
            admitted |= _local_cells(c, sigma, True)
            everything |= _local_cells(c, sigma, False)
        assert admitted <= containing
        assert everything == containing


def test_admissible_cuts_miss_cells():
    # the edge from 1234 to 2134 in the cube needs a cut between two faces at 1234
    c = fc_polytope(4, 1)
    edge = partition_image(c, [(1, 2), (3, 4)])
    assert edge.dim == 1
    seen = set()
    for sigma in c.classes[(1, 2, 3, 4)].members:
        seen |= _local_cells(c, sigma, True)
    assert c.index_of(edge) not in seen


def test_facets_at_vertex_examples():
    local = dict(facets_at_vertex((1, 2, 3, 4), 4, 2))
    assert local[((1, 2), (3, 4))] == ((2, 2), (2, 0))
    local1 = dict(facets_at_vertex((1, 2, 3, 4), 4, 1))
    assert local1[((1,), (2, 3, 4))] == ((1, 1), (3, 0))
    assert ((1, 2), (3, 4)) not in local1  # cut between two faces


def test_extremes():
    for N in range(2, 6):
        assert posets_isomorphic(fc_polytope(N, N - 1).hasse, permutohedron(N).hasse)
    for N in range(1, 7):
        c = fc_polytope(N, 0)
        assert len(c.classes) == 1 and len(c.cells) == 1


def test_euler():
    for N in range(2, 6):
        for n in range(1, N):
            assert euler_boundary(fc_polytope(N, n)) == 1 + (-1) ** N
    with pytest.raises(NotASphereCandidate):
        euler_boundary(fc_polytope(3, 0))


def test_size_limit(monkeypatch):
    monkeypatch.setenv("FCPOLY_MAX_N", "4")
    with pytest.raises(SizeLimit):
        fc_polytope(5, 2)


def test_exports():
    c = fc_polytope(4, 1)
    dot = export_complex(c, "dot").decode()
    assert dot.startswith("// format-version: 1")
    assert dot.count(" -- ") == 12 and dot.count(";") == 8 + 12
    j = json.loads(export_complex(fc_polytope(4, 2), "json"))
    assert j["format_version"] == 1 and len(j["vertices"]) == 18
    off = export_complex(c, "off").decode().splitlines()
    assert off[0] == "OFF" and off[2] == "8 6 12"
    with pytest.raises(UnsupportedDim):
        export_complex(permutohedron(2), "off")
    assert export_complex(c, "dot") == export_complex(fc_polytope(4, 1), "dot")


def test_block_decomposition():
    assert block_decomposition(((1, 2), (3, 4)), 2) == ((2, 2), (2, 0))
