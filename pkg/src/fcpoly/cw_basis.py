"""Index calculus for CW bases of simplicial objects.

Level ``n`` of a simplicial object with CW basis ``R̄_*`` splits as a
coproduct of copies ``s_I R̄_{n-λ}`` over strictly increasing multi-indices
``I = (i_1 < ... < i_λ)`` with entries below ``n``.  The same bookkeeping
applies to cross-term bases of a cosimplicial simplicial object, which are
forced to vanish along the two edges ``n = 0`` and ``r = 0``.

The second half of the module works with formal group words: products of
signed generators decorated by simplicial operators, used to run the
recursion that moves a generator into the chains (all faces but ``d_0``
trivial).
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .errors import IndexOutOfRange, MalformedTuple, NonReducible
from .words import (
    FACE,
    Bidegree,
    apply_letter,
    degen,
    face,
    format_word,
    simp_normalize_letters,
)

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib


# ---------------------------------------------------------------------------
# multi-indices


@dataclass(frozen=True, order=True)
class MultiIndex:
    entries: tuple
    level: int

    def __post_init__(self):
        e = self.entries
        if any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError(f"multi-index {e} is not strictly increasing")
        if e and (e[0] < 0 or e[-1] >= self.level):
            raise IndexOutOfRange(f"multi-index {e} out of range for level {self.level}")

    @property
    def lam(self):
        return len(self.entries)

    def letters(self):
        """``s_I = s_{i_λ} ... s_{i_1}``, written outermost first."""
        return tuple(degen(i) for i in reversed(self.entries))

    def tag(self, name):
        if not self.entries:
            return name
        return "s_(" + ",".join(map(str, self.entries)) + ")<" + name + ">"


def enumerate_multi_indices(lam, n):
    if not 0 <= lam <= n:
        raise IndexOutOfRange(f"need 0 <= lambda <= n, got lambda={lam}, n={n}")
    return [MultiIndex(c, n) for c in combinations(range(n), lam)]


# ---------------------------------------------------------------------------
# graded sets


@dataclass
class GradedSet:
    """Generators grouped by degree: ``{degree: [names]}``."""

    names: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts, prefix="x"):
        names = {}
        for k in sorted(int(d) for d in counts):
            c = int(counts[k] if k in counts else counts[str(k)])
            if k < 1 and c:
                raise ValueError(f"generator degree must be >= 1, got {k}")
            if c:
                names[k] = [f"{prefix}{k}" if c == 1 else f"{prefix}{k}.{j}" for j in range(c)]
        return cls(names)

    @property
    def counts(self):
        return {k: len(v) for k, v in sorted(self.names.items()) if v}

    def total(self):
        return sum(len(v) for v in self.names.values())

    def add(self, degree, name):
        self.names.setdefault(degree, []).append(name)

    def union(self, other):
        out = GradedSet({k: list(v) for k, v in self.names.items()})
        for k, v in other.names.items():
            for x in v:
                out.add(k, x)
        return out

    def truncated(self, below):
        return GradedSet({k: list(v) for k, v in self.names.items() if k < below})

    def __bool__(self):
        return self.total() > 0

    def to_json(self):
        return {str(k): sorted(v) for k, v in sorted(self.names.items()) if v}


def _level_spec(per_level, k):
    if isinstance(per_level, dict):
        return per_level.get(k, GradedSet())
    return per_level[k] if k < len(per_level) else GradedSet()


def cw_decompose(n, basis):
    """Generators of ``R_n`` in terms of the CW basis: ``∐_λ ∐_I s_I R̄_{n-λ}``.

    ``basis`` maps each level to a GradedSet (a list or a dict).
    """
    if n < 0:
        raise IndexOutOfRange(f"negative level {n}")
    out = GradedSet()
    for lam in range(n + 1):
        base = _level_spec(basis, n - lam)
        if not base:
            continue
        for I in enumerate_multi_indices(lam, n):
            for k in sorted(base.names):
                for name in base.names[k]:
                    out.add(k, I.tag(name))
    return out


@dataclass
class CrossTermSpec:
    """The cross-term bases ``C̄^n_r``, keyed by ``(n, r)``."""

    per_bidegree: dict = field(default_factory=dict)

    def __post_init__(self):
        for (n, r), g in list(self.per_bidegree.items()):
            if (n == 0 or r == 0) and g:
                raise ValueError(f"cross-terms vanish at n=0 or r=0, got C({n},{r})")

    def at(self, n, r):
        if n == 0 or r == 0:
            return GradedSet()
        return self.per_bidegree.get((n, r), GradedSet())


def cross_term_level(n, r, spec):
    """``Ē^n_r = ∐_λ ∐_{I ∈ I_{λ,n}} [C̄^{n-λ}_r]_I``."""
    if n < 0 or r < 0:
        raise IndexOutOfRange(f"negative bidegree ({n},{r})")
    out = GradedSet()
    if r == 0:
        return out
    for lam in range(n + 1):
        base = spec.at(n - lam, r)
        if not base:
            continue
        for I in enumerate_multi_indices(lam, n):
            for k in sorted(base.names):
                for name in base.names[k]:
                    out.add(k, I.tag(name))
    return out


def latching_copies(n):
    """Copies in the n-th latching object and the identifications among them.

    Copy ``i`` is the image of ``s_i``; ``s_j x`` in copy ``i`` is identified
    with ``s_i x`` in copy ``j+1`` whenever ``i <= j``.  Both copies must
    exist, which bounds ``j <= n-2``.
    """
    if n < 0:
        raise IndexOutOfRange(f"negative level {n}")
    pairs = [(i, j) for j in range(max(n - 1, 0)) for i in range(j + 1)]
    return n, pairs


# ---------------------------------------------------------------------------
# config files


def _graded(obj, prefix):
    return GradedSet.from_counts({int(k): int(v) for k, v in obj.items()}, prefix=prefix)


def load_config(path):
    """Read ``{"cw": {...}, "cross": {"n,r": {...}}}`` from JSON or TOML."""
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".toml":
        data = tomllib.loads(raw.decode())
    else:
        data = json.loads(raw)
    return parse_config(data)


def parse_config(data):
    cw = {}
    for lvl, counts in (data.get("cw") or {}).items():
        cw[int(lvl)] = _graded(counts, prefix=f"r{int(lvl)}_")
    cross = {}
    for key, counts in (data.get("cross") or {}).items():
        n, r = (int(x) for x in str(key).split(","))
        cross[(n, r)] = _graded(counts, prefix=f"c{n}{r}_")
    return cw, CrossTermSpec(cross)


# ---------------------------------------------------------------------------
# formal group words


@dataclass(frozen=True, order=True)
class FormalGen:
    name: str
    level: int

    def __str__(self):
        return self.name


def _target_level(ops, level):
    at = Bidegree(0, level)
    for x in reversed(ops):
        at = apply_letter(x, at)
    return at.simp


@dataclass(frozen=True)
class Factor:
    exp: int  # +1 or -1
    ops: tuple  # simplicial letters in normal form, outermost first
    gen: FormalGen

    def __str__(self):
        body = (format_word(self.ops, sep="") + " " if self.ops else "") + self.gen.name
        return f"({body})" + ("^-1" if self.exp < 0 else "")


def _factor(exp, ops, gen):
    ops = simp_normalize_letters(tuple(ops))
    _target_level(ops, gen.level)
    return Factor(exp, ops, gen)


@dataclass(frozen=True)
class FormalGroupWord:
    """A product of decorated generators, read left to right."""

    factors: tuple
    level: int

    def __post_init__(self):
        for f in self.factors:
            lv = _target_level(f.ops, f.gen.level)
            if lv != self.level:
                raise MalformedTuple(f"factor {f} lives at level {lv}, word at {self.level}")

    @classmethod
    def gen(cls, g):
        return cls((Factor(1, (), g),), g.level)

    @classmethod
    def identity(cls, level):
        return cls((), level)

    def __mul__(self, other):
        if self.level != other.level:
            raise MalformedTuple(f"levels differ: {self.level} vs {other.level}")
        return FormalGroupWord(self.factors + other.factors, self.level)

    def inverse(self):
        return FormalGroupWord(tuple(Factor(-f.exp, f.ops, f.gen) for f in reversed(self.factors)), self.level)

    def apply(self, letters):
        """Apply simplicial operators (written outermost first) factorwise."""
        letters = tuple(letters)
        level = _target_level(letters, self.level)
        return FormalGroupWord(tuple(_factor(f.exp, letters + f.ops, f.gen) for f in self.factors), level)

    def face(self, i):
        return self.apply((face(i),))

    def reduced(self):
        stack = []
        for f in self.factors:
            if stack and stack[-1].gen == f.gen and stack[-1].ops == f.ops and stack[-1].exp == -f.exp:
                stack.pop()
            else:
                stack.append(f)
        return FormalGroupWord(tuple(stack), self.level)

    def substitute(self, images, limit=64):
        """Replace ``d_i g`` by the supplied image of ``g`` wherever a face hits a generator.

        ``images`` maps a FormalGen to ``{i: FormalGroupWord}``.  Generators
        without an image for the innermost face are left symbolic.
        """
        w = self
        for _ in range(limit):
            out, changed = [], False
            for f in w.factors:
                img = None
                if f.ops and f.ops[-1].kind == FACE:
                    img = images.get(f.gen, {}).get(f.ops[-1].index)
                if img is None:
                    out.append(f)
                    continue
                changed = True
                part = img.apply(f.ops[:-1])
                out.extend(part.factors if f.exp > 0 else part.inverse().factors)
            w = FormalGroupWord(tuple(out), w.level).reduced()
            if not changed:
                return w
        raise NonReducible("face-image substitution did not terminate")

    def is_empty(self):
        return not self.factors

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return " ".join(map(str, self.factors)) if self.factors else "e"


def chains_defect(word, images=None):
    """Faces ``d_i`` (``i >= 1``) that do not reduce to the empty word."""
    bad = []
    for i in range(1, word.level + 1):
        w = word.face(i).reduced()
        if not w.is_empty() and images:
            w = w.substitute(images)
        if not w.is_empty():
            bad.append((i, w))
    return bad


def tau_normalize(tau, n=None, face_images=None):
    """Run ``τ_{i+1} = τ_i (s_{n-i-1} d_{n-i} τ_i)^{-1}`` up to ``τ_n`` and certify it.

    ``face_images`` optionally maps ``i`` to a FormalGroupWord for ``d_i τ``.
    Raises NonReducible if some ``d_i τ_n`` with ``i >= 1`` cannot be shown
    to vanish.
    """
    if n is None:
        n = tau.level
    if n != tau.level or n < 1:
        raise IndexOutOfRange(f"tau must sit at level n >= 1, got level {tau.level}, n={n}")
    images = {tau: dict(face_images)} if face_images else {}
    t = FormalGroupWord.gen(tau)
    for i in range(n):
        corr = t.apply((degen(n - i - 1), face(n - i)))
        t = (t * corr.inverse()).reduced()
    bad = chains_defect(t, images)
    if bad:
        detail = "; ".join(f"d_{i}: {w}" for i, w in bad)
        raise NonReducible(f"could not certify chains membership ({detail})")
    if images:
        t = t.substitute(images)
    return t


@dataclass
class MatchingTuple:
    k: int
    n: int
    components: dict  # j -> FormalGroupWord at level n-1, for k <= j <= n

    def __post_init__(self):
        want = set(range(self.k, self.n + 1))
        if set(self.components) != want:
            raise MalformedTuple(f"components must be indexed by {sorted(want)}")
        for j, x in self.components.items():
            if x.level != self.n - 1:
                raise MalformedTuple(f"x_{j} at level {x.level}, expected {self.n - 1}")


def check_matching_tuple(t, images=None):
    """True iff ``d_i x_j = d_{j-1} x_i`` for all ``k <= i < j <= n``."""
    if t.n < 2:
        return True  # no faces below level 0
    x = t.components
    for j in range(t.k, t.n + 1):
        for i in range(t.k, j):
            diff = x[j].face(i) * x[i].face(j - 1).inverse()
            diff = diff.reduced()
            if images and not diff.is_empty():
                diff = diff.substitute(images)
            if not diff.is_empty():
                return False
    return True
