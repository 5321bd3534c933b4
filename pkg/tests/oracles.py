"""Brute-force reference computations used to check the library.

Nothing here goes through the rewriting rules or the quotient construction:
words are compared through their finite-ordinal semantics, and polytope
counts come from closed formulas or exhaustive search.
"""

import itertools
import math
import random
from functools import lru_cache

from fcpoly.words import (
    CODEGEN,
    DEGEN,
    FACE,
    Bidegree,
    Letter,
    OpWord,
    apply_letter,
    delta_oracle,
    degen,
    simp_normalize_letters,
)
from fcpoly.errors import IndexOutOfRange


def stirling2(n, k):
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def permutohedron_f_vector(N):
    """Faces of dimension d of the N-permutohedron: ordered partitions into N-d blocks."""
    return tuple(math.factorial(N - d) * stirling2(N, N - d) for d in range(N))


def legal_letters(at, kinds=(FACE, CODEGEN)):
    out = []
    if FACE in kinds and at.simp >= 1:
        out += [Letter(FACE, i) for i in range(at.simp + 1)]
    if CODEGEN in kinds and at.cosimp >= 1:
        out += [Letter(CODEGEN, j) for j in range(at.cosimp)]
    return out


def random_word(rng, source, length):
    """A valid face/codegeneracy word built from the first-applied letter outward."""
    at = source
    applied = []
    for _ in range(length):
        opts = legal_letters(at)
        if not opts:
            break
        x = rng.choice(opts)
        applied.append(x)
        at = apply_letter(x, at)
    return OpWord(tuple(reversed(applied)), source)


def random_same_shape(rng, word):
    """Another word with the same source and the same number of each kind (may be invalid)."""
    kinds = [x.kind for x in word.letters]
    rng.shuffle(kinds)
    at = word.source
    applied = []
    for k in reversed(kinds):
        opts = legal_letters(at, (k,))
        if not opts:
            return None
        x = rng.choice(opts)
        applied.append(x)
        at = apply_letter(x, at)
    return OpWord(tuple(reversed(applied)), word.source)


def all_words(source, n_codegen, n_face):
    """Every valid word with the given letter counts, by exhaustive search."""
    out = []

    def rec(at, applied, c, f):
        if c == 0 and f == 0:
            out.append(OpWord(tuple(reversed(applied)), source))
            return
        kinds = ([CODEGEN] if c else []) + ([FACE] if f else [])
        for x in legal_letters(at, kinds):
            nxt = apply_letter(x, at)
            rec(nxt, applied + [x], c - (x.kind == CODEGEN), f - (x.kind == FACE))

    rec(source, [], n_codegen, n_face)
    return out


def factorizations_by_oracle(word):
    """``D(ψ)``: all words with the same letter counts and the same oracle value."""
    target = delta_oracle(word)
    nc = word.count(CODEGEN)
    nf = word.count(FACE)
    return {w for w in all_words(word.source, nc, nf) if delta_oracle(w) == target}


def face_run_classes(words):
    """Group words that agree off their maximal face runs and whose runs agree semantically."""

    def signature(w):
        parts = []
        run = []
        at = w.source
        # walk in application order, cutting at codegeneracies
        segments = []
        for x in reversed(w.letters):
            if x.kind == FACE:
                if not run:
                    run_src = at
                run.append(x)
            else:
                if run:
                    segments.append(("run", delta_oracle(OpWord(tuple(reversed(run)), run_src))))
                    run = []
                segments.append(("letter", x))
            at = apply_letter(x, at)
        if run:
            segments.append(("run", delta_oracle(OpWord(tuple(reversed(run)), run_src))))
        parts.extend(segments)
        return tuple(parts)

    groups = {}
    for w in words:
        groups.setdefault(signature(w), set()).add(w)
    return list(groups.values())


def allowable_by_cuts(words):
    """Subwords of consecutive letters whose end cuts never separate two faces.

    Returns pairs ``(oracle value, source bidegree)`` for each allowable subword.
    """
    out = set()
    for w in words:
        app = list(reversed(w.letters))
        srcs = []
        at = w.source
        for x in app:
            srcs.append(at)
            at = apply_letter(x, at)
        L = len(app)
        for a in range(L):
            if a > 0 and app[a - 1].kind == FACE and app[a].kind == FACE:
                continue
            for b in range(a, L):
                if b + 1 < L and app[b].kind == FACE and app[b + 1].kind == FACE:
                    continue
                sub = OpWord(tuple(reversed(app[a:b + 1])), srcs[a])
                out.add((delta_oracle(sub), srcs[a], b - a + 1))
    return out


def degeneracy_closure(n, basis_counts):
    """Count generators of level ``n`` by applying every degeneracy word to basis generators.

    ``basis_counts`` maps a level to ``{degree: count}``.  Words are reduced
    with the simplicial normal form, so distinct results are distinct
    degeneracy operators.
    """
    totals = {}
    for k, counts in basis_counts.items():
        if k > n:
            continue
        ops = _degeneracy_ops(k, n)
        for deg, c in counts.items():
            if c:
                totals[deg] = totals.get(deg, 0) + c * len(ops)
    return totals


@lru_cache(maxsize=None)
def _degeneracy_ops(k, n):
    """Distinct composites of ``n-k`` degeneracies from level k to level n."""
    seen = set()
    frontier = {((), k)}
    for _ in range(n - k):
        nxt = set()
        for ops, lvl in frontier:
            for j in range(lvl + 1):
                nxt.add((simp_normalize_letters((degen(j),) + ops), lvl + 1))
        frontier = nxt
    for ops, _ in frontier:
        seen.add(ops)
    return frozenset(seen)


def random_basis(rng, max_level=4, max_degree=9):
    spec = {}
    for lvl in range(max_level + 1):
        if rng.random() < 0.6:
            spec[lvl] = {d: rng.randint(0, 2) for d in rng.sample(range(1, max_degree + 1), rng.randint(1, 3))}
    return spec


def in_range(word):
    try:
        word.target
        return True
    except IndexOutOfRange:
        return False
