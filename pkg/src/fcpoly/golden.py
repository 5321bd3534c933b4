"""Bundled golden files for the two labelled polyhedra drawn as figures."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .factorization import TargetMap, label_polytope

FIGURES = {
    "fig3": ("d_0 d_1 s^0 s^1", (2, 2)),
    "fig4": ("d_0 d_1 d_2 s^0", (1, 3)),
}


def figure_polytope(name):
    text, source = FIGURES[name]
    return label_polytope(TargetMap.parse(text, source))


def golden_dir():
    return resources.files("fcpoly") / "figures"


def load_golden(name, directory=None):
    base = Path(directory) if directory else golden_dir()
    return json.loads((base / f"{name}.json").read_text())


def render_golden(lp):
    return json.dumps(lp.to_json(), indent=1, sort_keys=True) + "\n"


def write_golden(name, directory):
    path = Path(directory) / f"{name}.json"
    path.write_text(render_golden(figure_polytope(name)))
    return path


def _shape(obj):
    classes = [frozenset(c["members"]) for c in obj["classes"]]
    edges = {frozenset((classes[i], classes[j])) for i, j in obj["edges"]}
    return classes, edges


def compare(lp, golden):
    """Differences between a labelled polytope and a golden record, as text lines."""
    diffs = []
    got = lp.to_json()
    gc, ge = _shape(got)
    wc, we = _shape(golden)
    if got["psi_text"] != golden.get("psi_text"):
        diffs.append(f"psi: got {got['psi_text']!r}, golden {golden.get('psi_text')!r}")
    if len(gc) != len(wc):
        diffs.append(f"class count: got {len(gc)}, golden {len(wc)}")
    for c in sorted(set(gc) - set(wc), key=sorted):
        diffs.append("+ class " + " = ".join(sorted(c)))
    for c in sorted(set(wc) - set(gc), key=sorted):
        diffs.append("- class " + " = ".join(sorted(c)))
    if sorted(map(len, gc)) != sorted(map(len, wc)):
        diffs.append(f"class sizes: got {sorted(map(len, gc))}, golden {sorted(map(len, wc))}")
    if len(ge) != len(we):
        diffs.append(f"edge count: got {len(ge)}, golden {len(we)}")
    for e in sorted(ge - we, key=lambda e: sorted(map(sorted, e))):
        diffs.append("+ edge " + " -- ".join(min(x) for x in sorted(e, key=min)))
    for e in sorted(we - ge, key=lambda e: sorted(map(sorted, e))):
        diffs.append("- edge " + " -- ".join(min(x) for x in sorted(e, key=min)))
    return diffs
