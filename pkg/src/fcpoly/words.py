"""Operator words in a cosimplicial simplicial object.

A word is a composite of letters acting on a bigraded object ``E^c_s``:
simplicial faces ``d_i`` and degeneracies ``s_j`` change the simplicial
level ``s``; cosimplicial cofaces ``d^i`` and codegeneracies ``s^j`` change
the cosimplicial level ``c``.  Words are written the way maps are composed,
so the rightmost letter is applied first.

Two independent routes to equality are provided: rewriting to a normal
form (:func:`normalize`, :func:`simp_normalize`, :func:`cosimp_normalize`)
and a finite-ordinal semantics (:func:`delta_oracle`) that composes the
monotone maps the letters stand for.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NoRuleApplies, WordSyntaxError

FACE = "d"  # simplicial face d_i
DEGEN = "s"  # simplicial degeneracy s_j
COFACE = "D"  # cosimplicial coface d^i
CODEGEN = "S"  # cosimplicial codegeneracy s^j

KINDS = (FACE, DEGEN, COFACE, CODEGEN)
SIMPLICIAL = frozenset((FACE, DEGEN))
COSIMPLICIAL = frozenset((COFACE, CODEGEN))


@dataclass(frozen=True, order=True)
class Letter:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown letter kind {self.kind!r}")
        if self.index < 0:
            raise IndexOutOfRange(f"negative index in {self.kind}{self.index}")

    def __str__(self):
        return format_letter(self)


@dataclass(frozen=True, order=True)
class Bidegree:
    cosimp: int
    simp: int

    def __post_init__(self):
        if self.cosimp < 0 or self.simp < 0:
            raise IndexOutOfRange(f"negative bidegree ({self.cosimp}, {self.simp})")

    def __str__(self):
        return f"({self.cosimp},{self.simp})"


def face(i):
    return Letter(FACE, i)


def degen(j):
    return Letter(DEGEN, j)


def coface(i):
    return Letter(COFACE, i)


def codegen(j):
    return Letter(CODEGEN, j)


@dataclass(frozen=True)
class OpWord:
    """An immutable composite of letters; ``letters[-1]`` is applied first."""

    letters: tuple
    source: Bidegree

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self.letters)

    @property
    def target(self):
        return validate(self)

    def count(self, kind):
        return sum(1 for x in self.letters if x.kind == kind)


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """``d_{i1} ... d_{im} s^{j1} ... s^{jn}`` with both index lists strictly increasing."""

    faces: tuple
    codegens: tuple

    def letters(self):
        return tuple(face(i) for i in self.faces) + tuple(codegen(j) for j in self.codegens)

    def to_word(self, source):
        return OpWord(self.letters(), source)

    def __str__(self):
        return format_word(self.letters())


# ---------------------------------------------------------------------------
# validation


def apply_letter(letter, at):
    """Return the bidegree reached by applying ``letter`` to an object at ``at``."""
    c, s = at.cosimp, at.simp
    i = letter.index
    if letter.kind == FACE:
        if s < 1 or i > s:
            raise IndexOutOfRange(f"{letter} illegal at simplicial level {s}")
        return Bidegree(c, s - 1)
    if letter.kind == DEGEN:
        if i > s:
            raise IndexOutOfRange(f"{letter} illegal at simplicial level {s}")
        return Bidegree(c, s + 1)
    if letter.kind == CODEGEN:
        if i > c - 1:
            raise IndexOutOfRange(f"{letter} illegal at cosimplicial level {c}")
        return Bidegree(c - 1, s)
    if i > c + 1:
        raise IndexOutOfRange(f"{letter} illegal at cosimplicial level {c}")
    return Bidegree(c + 1, s)


def validate(word):
    """Target bidegree of ``word``; raises IndexOutOfRange naming the bad position."""
    at = word.source
    for pos in range(len(word.letters) - 1, -1, -1):
        try:
            at = apply_letter(word.letters[pos], at)
        except IndexOutOfRange as exc:
            raise IndexOutOfRange(f"position {pos}: {exc}", position=pos) from None
    return at


def intermediate_bidegrees(word):
    """Bidegrees before each letter is applied, indexed like ``word.letters``."""
    out = [None] * len(word.letters)
    at = word.source
    for pos in range(len(word.letters) - 1, -1, -1):
        out[pos] = at
        at = apply_letter(word.letters[pos], at)
    return out


# ---------------------------------------------------------------------------
# rewriting in the face/codegeneracy calculus


def _swap_pair(left, right):
    """Rewrite the adjacent pair ``left ∘ right`` (right applied first)."""
    a, b = left.index, right.index
    if left.kind == FACE and right.kind == FACE:
        # d_i d_j = d_{j-1} d_i for i < j, read in both directions
        if a < b:
            return face(b - 1), face(a)
        return face(b), face(a + 1)
    if left.kind == CODEGEN and right.kind == CODEGEN:
        # s^j s^i = s^{i-1} s^j for i > j, read in both directions
        if b > a:
            return codegen(b - 1), codegen(a)
        return codegen(b), codegen(a + 1)
    if {left.kind, right.kind} == {FACE, CODEGEN}:
        return right, left
    raise NoRuleApplies(f"no commutation rule for {left} {right}")


def rewrite_step(word, pos):
    """Apply the unique commutation rule to ``word.letters[pos:pos+2]``."""
    if not 0 <= pos < len(word.letters) - 1:
        raise NoRuleApplies(f"position {pos} does not address an adjacent pair")
    left, right = word.letters[pos], word.letters[pos + 1]
    new_left, new_right = _swap_pair(left, right)
    letters = word.letters[:pos] + (new_left, new_right) + word.letters[pos + 2:]
    return OpWord(letters, word.source)


def _sort_run(indices, kind):
    """Bubble a run of faces or codegeneracies into strictly increasing order."""
    mk = face if kind == FACE else codegen
    run = [mk(i) for i in indices]
    changed = True
    while changed:
        changed = False
        for p in range(len(run) - 1):
            if run[p].index >= run[p + 1].index:
                run[p], run[p + 1] = _swap_pair(run[p], run[p + 1])
                changed = True
    return tuple(x.index for x in run)


def normalize(word):
    """Canonical factorization ``φ∘θ`` of a face/codegeneracy word."""
    validate(word)
    for x in word.letters:
        if x.kind not in (FACE, CODEGEN):
            raise NoRuleApplies(f"{x} is not a face or codegeneracy letter")
    # faces and codegeneracies commute, so each direction sorts independently
    faces = [x.index for x in word.letters if x.kind == FACE]
    codegens = [x.index for x in word.letters if x.kind == CODEGEN]
    return CanonicalForm(_sort_run(faces, FACE), _sort_run(codegens, CODEGEN))


def canonical_word(word):
    return normalize(word).to_word(word.source)


# ---------------------------------------------------------------------------
# one-direction normal forms (used for decorations and formal group words)


def _simp_rule(left, right):
    """One rewrite toward ``s_{j1} > ... > s_{jp}`` then ``d_{i1} < ... < d_{iq}``.

    Returns the replacement tuple, or None when the pair is already in order.
    """
    a, b = left.index, right.index
    if left.kind == FACE and right.kind == DEGEN:
        if a < b:
            return (degen(b - 1), face(a))
        if a in (b, b + 1):
            return ()
        return (degen(b), face(a - 1))
    if left.kind == FACE and right.kind == FACE and a >= b:
        return (face(b), face(a + 1))
    if left.kind == DEGEN and right.kind == DEGEN and a <= b:
        # s_i s_j = s_{j+1} s_i for i <= j
        return (degen(b + 1), degen(a))
    return None


def _cosimp_rule(left, right):
    """One rewrite toward ``d^{i1} > ... > d^{ip}`` then ``s^{j1} < ... < s^{jq}``."""
    a, b = left.index, right.index
    if left.kind == CODEGEN and right.kind == COFACE:
        # s^j d^i = d^i s^{j-1} (i < j), id (i = j, j+1), d^{i-1} s^j (i > j+1)
        if b < a:
            return (coface(b), codegen(a - 1))
        if b in (a, a + 1):
            return ()
        return (coface(b - 1), codegen(a))
    if left.kind == COFACE and right.kind == COFACE and a <= b:
        # d^j d^i = d^i d^{j-1} for i < j
        return (coface(b + 1), coface(a))
    if left.kind == CODEGEN and right.kind == CODEGEN and a >= b:
        return (codegen(b), codegen(a + 1))
    return None


def _rewrite_all(letters, rule):
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for p in range(len(letters) - 1):
            rep = rule(letters[p], letters[p + 1])
            if rep is not None:
                letters[p:p + 2] = rep
                changed = True
                break
    return tuple(letters)


def simp_normalize_letters(letters):
    for x in letters:
        if x.kind not in SIMPLICIAL:
            raise NoRuleApplies(f"{x} is not a simplicial letter")
    return _rewrite_all(letters, _simp_rule)


def cosimp_normalize_letters(letters):
    for x in letters:
        if x.kind not in COSIMPLICIAL:
            raise NoRuleApplies(f"{x} is not a cosimplicial letter")
    return _rewrite_all(letters, _cosimp_rule)


def simp_normalize(word):
    """Eilenberg-Zilber normal form ``s_{j1}...s_{jp} d_{i1}...d_{iq}``.

    Degeneracy indices strictly decrease and face indices strictly increase,
    reading left to right.
    """
    validate(word)
    return OpWord(simp_normalize_letters(word.letters), word.source)


def cosimp_normalize(word):
    """Normal form ``d^{i1}...d^{ip} s^{j1}...s^{jq}``, cofaces decreasing, codegeneracies increasing."""
    validate(word)
    return OpWord(cosimp_normalize_letters(word.letters), word.source)


def decoration_normalize(letters):
    """Normalize a mixed decoration: simplicial part first, then cosimplicial part.

    The two directions act on independent gradings, so they commute.
    """
    simp = [x for x in letters if x.kind in SIMPLICIAL]
    cosimp = [x for x in letters if x.kind in COSIMPLICIAL]
    return simp_normalize_letters(simp) + cosimp_normalize_letters(cosimp)


# ---------------------------------------------------------------------------
# finite-ordinal oracle


def _coface_map(i, k):
    """δ^i : [k-1] -> [k], skipping i."""
    return tuple(x if x < i else x + 1 for x in range(k))


def _codegen_map(j, k):
    """σ^j : [k+1] -> [k], hitting j twice."""
    return tuple(x if x <= j else x - 1 for x in range(k + 2))


def _compose(f, g):
    """f ∘ g for maps stored as image tuples."""
    return tuple(f[x] for x in g)


def delta_oracle(word):
    """Pair of monotone maps denoted by ``word``.

    The simplicial entry is the map ``[target.simp] -> [source.simp]`` that the
    simplicial letters induce contravariantly; the cosimplicial entry is
    ``[source.cosimp] -> [target.cosimp]``, composed covariantly.  Each is
    returned as ``(images, codomain_size)``.
    """
    validate(word)
    s = word.source.simp
    c = word.source.cosimp
    simp_map = tuple(range(s + 1))  # [current] -> [source]
    cosimp_map = tuple(range(c + 1))  # [source] -> [current]
    for x in reversed(word.letters):
        if x.kind == FACE:
            simp_map = _compose(simp_map, _coface_map(x.index, s))
            s -= 1
        elif x.kind == DEGEN:
            simp_map = _compose(simp_map, _codegen_map(x.index, s))
            s += 1
        elif x.kind == CODEGEN:
            cosimp_map = _compose(_codegen_map(x.index, c - 1), cosimp_map)
            c -= 1
        else:
            cosimp_map = _compose(_coface_map(x.index, c + 1), cosimp_map)
            c += 1
    return (simp_map, word.source.simp + 1), (cosimp_map, c + 1)


# ---------------------------------------------------------------------------
# text and JSON forms

_TOKEN = re.compile(r"\s*(?:(d)_?(\d+)|(s)_(\d+)|(s)\^(\d+)|([dD])\^(\d+))\s*")


def parse_letters(text):
    """Parse ``"s^0 d_0 s^1 d1"``-style text into letters (leftmost applied last).

    Tokens: ``d<i>``/``d_<i>`` face, ``s_<j>`` degeneracy, ``s^<j>``
    codegeneracy, ``D^<i>``/``d^<i>`` coface.  Braces as in ``s^{1}`` are
    accepted; whitespace between tokens is optional.
    """
    text = text.replace("{", "").replace("}", "").replace("∘", " ")
    letters = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"cannot parse word at {text[pos:]!r}")
        g = m.groups()
        if g[0]:
            letters.append(face(int(g[1])))
        elif g[2]:
            letters.append(degen(int(g[3])))
        elif g[4]:
            letters.append(codegen(int(g[5])))
        else:
            letters.append(coface(int(g[7])))
        pos = m.end()
    return tuple(letters)


def parse_word(text, source):
    if not isinstance(source, Bidegree):
        source = Bidegree(*source)
    return OpWord(parse_letters(text), source)


def parse_bidegree(text):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise WordSyntaxError(f"bidegree must be 'cosimp,simp', got {text!r}")
    try:
        return Bidegree(int(parts[0]), int(parts[1]))
    except ValueError:
        raise WordSyntaxError(f"bidegree must be 'cosimp,simp', got {text!r}") from None


def format_letter(x):
    if x.kind == FACE:
        return f"d_{x.index}"
    if x.kind == DEGEN:
        return f"s_{x.index}"
    if x.kind == CODEGEN:
        return f"s^{x.index}"
    return f"d^{x.index}"


def format_word(letters, sep=" "):
    if isinstance(letters, OpWord):
        letters = letters.letters
    return sep.join(format_letter(x) for x in letters)


def compact(letters):
    """Unspaced form, e.g. ``s^0d_0s^1d_1`` (the way the figures print labels)."""
    return format_word(letters, sep="")


def word_to_json(word):
    return {
        "source": {"cosimp": word.source.cosimp, "simp": word.source.simp},
        "letters": [{"k": x.kind, "i": x.index} for x in word.letters],
    }


def word_from_json(obj):
    src = obj["source"]
    letters = tuple(Letter(d["k"], int(d["i"])) for d in obj["letters"])
    return OpWord(letters, Bidegree(int(src["cosimp"]), int(src["simp"])))


def concat(words: Sequence[OpWord]) -> OpWord:
    """Compose words written outermost first; the last word's source is used."""
    letters: tuple = ()
    for w in words:
        letters += w.letters
    word = OpWord(letters, words[-1].source)
    validate(word)
    return word


def count_kinds(letters: Iterable[Letter]):
    out = dict.fromkeys(KINDS, 0)
    for x in letters:
        out[x.kind] += 1
    return out
