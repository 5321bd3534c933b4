"""Factorizations of composite face-codegeneracy maps.

For a map ``ψ`` with ``n`` codegeneracies and ``m`` faces, every way of
writing ``ψ`` as a word of ``n + m`` letters corresponds to an arrangement
of the labels ``1..n+m``.  The canonical word ``d_{i1}...d_{im} s^{j1}...s^{jn}``
sits at the identity arrangement, with the codegeneracies (applied first)
carrying labels ``1..n``.  Swapping two adjacent positions applies the
matching commutation identity, so the whole set is reached by a
breadth-first closure.

Positions are counted in order of application: position 1 is the letter
applied first, i.e. the rightmost letter of the written word.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidQuotient, SizeLimit
from .polytope import check_size, class_repr, fc_polytope
from .words import (
    CODEGEN,
    FACE,
    Bidegree,
    CanonicalForm,
    OpWord,
    compact,
    format_word,
    intermediate_bidegrees,
    normalize,
    parse_word,
    rewrite_step,
    validate,
    word_to_json,
)


@dataclass(frozen=True, order=True)
class TargetMap:
    """A composite ``ψ : E^{n+k}_{m+ℓ} -> E^k_ℓ`` in canonical form."""

    canonical: CanonicalForm
    source: Bidegree

    def __post_init__(self):
        validate(self.word)

    @classmethod
    def from_word(cls, word):
        return cls(normalize(word), word.source)

    @classmethod
    def parse(cls, text, source):
        return cls.from_word(parse_word(text, source))

    @property
    def word(self):
        return self.canonical.to_word(self.source)

    @property
    def n(self):
        return len(self.canonical.codegens)

    @property
    def m(self):
        return len(self.canonical.faces)

    @property
    def length(self):
        return self.n + self.m

    @property
    def target(self):
        return validate(self.word)

    @property
    def frame(self):
        """``(n, m, k, ℓ)`` with source ``E^{n+k}_{m+ℓ}`` and target ``E^k_ℓ``."""
        t = self.target
        return (self.n, self.m, t.cosimp, t.simp)

    def __str__(self):
        return str(self.canonical)


def _written_index(length, position):
    """Index in the written word of the letter applied ``position``-th (0-based)."""
    return length - 1 - position


def word_for(letters_by_position, source):
    return OpWord(tuple(reversed(letters_by_position)), source)


def enumerate_factorizations(psi):
    """All factorizations of ``psi``, keyed by arrangement.

    Returns ``{arrangement: OpWord}`` where the arrangement lists the labels
    in order of application.  Raises SizeLimit beyond the enumeration bound.
    """
    N = psi.length
    check_size(N)
    start = tuple(range(1, N + 1))
    words = {start: psi.word}
    queue = deque([start])
    while queue:
        arr = queue.popleft()
        w = words[arr]
        for p in range(N - 1):
            nxt = arr[:p] + (arr[p + 1], arr[p]) + arr[p + 2:]
            nw = rewrite_step(w, N - 2 - p)
            seen = words.get(nxt)
            if seen is None:
                words[nxt] = nw
                queue.append(nxt)
            elif seen != nw:
                raise InvalidQuotient(f"arrangement {nxt} reached with two words: {seen} / {nw}")
    if len(words) != math.factorial(N) or len(set(words.values())) != len(words):
        raise InvalidQuotient("factorization correspondence is not a bijection")
    return words


@dataclass(frozen=True)
class FactorClass:
    """Factorizations that differ only inside runs of face maps."""

    repr: tuple  # least arrangement in the class
    members: frozenset  # OpWords

    def words(self):
        return sorted(compact(w) for w in self.members)

    def __len__(self):
        return len(self.members)


def xi_blocks(arrangement, n):
    """Split an arrangement into its ξ-letters: single codegeneracies and maximal face runs.

    Returns position intervals ``(start, stop)``, 0-based, in order of application.
    """
    out = []
    p = 0
    N = len(arrangement)
    while p < N:
        if arrangement[p] <= n:
            out.append((p, p + 1))
            p += 1
            continue
        q = p
        while q < N and arrangement[q] > n:
            q += 1
        out.append((p, q))
        p = q
    return out


def subword(word, start, stop):
    """Letters at application positions ``start..stop-1`` as a word with its own source."""
    L = len(word.letters)
    lo, hi = _written_index(L, stop - 1), _written_index(L, start)
    sources = intermediate_bidegrees(word)
    return OpWord(word.letters[lo:hi + 1], sources[hi])


@dataclass
class LabeledPolytope:
    """``P^{n+m}_n`` with each vertex class labelled by its factorizations of ``psi``."""

    psi: TargetMap
    complex: object
    words: dict  # arrangement -> OpWord
    labels: dict  # class repr -> FactorClass

    def class_of_word(self, word):
        for fc in self.labels.values():
            if word in fc.members:
                return fc
        raise KeyError(str(word))

    def label(self, rep):
        return " = ".join(self.labels[rep].words())

    def class_sizes(self):
        return sorted(len(fc) for fc in self.labels.values())

    def edges(self):
        return self.complex.edges()

    @cached_property
    def allowable(self):
        return _allowable(self)

    @cached_property
    def scheme(self):
        return _boundary_scheme(self)

    def to_json(self):
        reps = list(self.labels)
        idx = {r: i for i, r in enumerate(reps)}
        out = {
            "format_version": 1,
            "psi": word_to_json(self.psi.word),
            "psi_text": format_word(self.psi.word),
            "classes": [
                {
                    "repr": compact(self.words[r]),
                    "members": self.labels[r].words(),
                }
                for r in reps
            ],
            "edges": [[idx[a], idx[b]] for a, b in self.edges()],
        }
        if self.psi.n >= 1:
            out["facets"] = [
                {
                    "blocks": [list(b) for b in f.cell.blocks],
                    "partition": [list(b) for b in f.cell.partition],
                    "scheme": [format_word(r.word) for r in f.scheme],
                }
                for f in self.scheme
            ]
        return out


def label_polytope(psi):
    """Label the vertices of ``P^{n+m}_n`` by the classes ``D(ψ)/~``."""
    words = enumerate_factorizations(psi)
    complex_ = fc_polytope(psi.length, psi.n)
    grouped = {}
    for arr, w in words.items():
        grouped.setdefault(class_repr(arr, psi.n), set()).add(w)
    labels = {r: FactorClass(r, frozenset(grouped[r])) for r in complex_.classes}
    if set(grouped) != set(complex_.classes):
        raise InvalidQuotient("factor classes do not match the vertex classes")
    return LabeledPolytope(psi, complex_, words, labels)


def _allowable(lp):
    n = lp.psi.n
    out = set()
    for rep in lp.labels:
        word = lp.words[rep]
        blocks = xi_blocks(rep, n)
        for a in range(len(blocks)):
            for b in range(a, len(blocks)):
                sw = subword(word, blocks[a][0], blocks[b][1])
                out.add(TargetMap.from_word(sw))
    return frozenset(out)


def allowable_subcomposites(psi):
    """``C(ψ)``: composites of consecutive ξ-letters of some factorization class.

    Members carry their source bidegree, so the same canonical word acting at
    two different levels counts twice.  Use :func:`canonical_forms` for the
    level-free projection.
    """
    return label_polytope(psi).allowable


def canonical_forms(maps):
    return frozenset(m.canonical for m in maps)


@dataclass(frozen=True)
class FacetScheme:
    cell: object
    scheme: tuple  # TargetMaps, first-applied first

    @property
    def composite(self):
        letters = ()
        for r in reversed(self.scheme):
            letters += r.word.letters
        return OpWord(letters, self.scheme[0].source)


def _facet_arrangement(partition, n):
    """An arrangement of the facet placing codegeneracies next to the cut."""
    first, second = partition
    head = sorted(x for x in first if x > n) + sorted(x for x in first if x <= n)
    tail = sorted(x for x in second if x <= n) + sorted(x for x in second if x > n)
    return tuple(head + tail)


def _boundary_scheme(lp):
    n = lp.psi.n
    if n < 1:
        raise SizeLimit("boundary schemes need at least one codegeneracy")
    out = []
    for cell in lp.complex.facets():
        if len(cell.partition) != 2:
            raise InvalidQuotient(f"facet with {len(cell.partition)} blocks: {cell.partition}")
        arr = _facet_arrangement(cell.partition, n)
        word = lp.words[arr]
        cut = len(cell.partition[0])
        parts = (subword(word, 0, cut), subword(word, cut, len(arr)))
        out.append(FacetScheme(cell, tuple(TargetMap.from_word(p) for p in parts)))
    return out


def boundary_scheme(psi):
    """Pair each boundary facet with the maps whose labelled polytopes form it."""
    return label_polytope(psi).scheme


def letter_counts(word):
    return word.count(FACE), word.count(CODEGEN)
