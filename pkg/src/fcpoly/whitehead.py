"""Formal Whitehead-bracket expressions over decorated generators.

An expression is an integer combination of binary bracket trees whose
leaves are generators carrying a homotopy degree and a decoration word of
simplicial and cosimplicial operators.  A bracket of degrees ``p`` and
``q`` has degree ``p + q - 1``, and every term of an expression has the
same degree.

The normal form uses graded antisymmetry ``[a, b] = (-1)^{|a||b|} [b, a]``
to put every bracket in a fixed leaf order.  Coefficients are integers but
the calculus is rational: a self-bracket whose antisymmetry sign is ``-1``
is dropped.  The Jacobi identity is only checked, never used to rewrite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

from .errors import DegreeMismatch, InhomogeneousOperand
from .words import (
    CODEGEN,
    Bidegree,
    OpWord,
    codegen,
    coface,
    decoration_normalize,
    degen,
    format_word,
    parse_letters,
    validate,
)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Generator:
    """A generator ``ops ι`` of degree ``degree``.

    ``level`` is the bidegree of the undecorated generator (optional, used
    to validate decorations); ``cross`` marks cross-term generators, on
    which every codegeneracy vanishes.
    """

    name: str
    degree: int
    copy: int = 0
    ops: tuple = ()
    level: Bidegree | None = None
    cross: bool = False

    def __post_init__(self):
        if self.degree < 1:
            raise DegreeMismatch(f"generator degree must be >= 1, got {self.degree}")
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.level is not None:
            validate(OpWord(self.ops, self.level))

    @property
    def base(self):
        return Generator(self.name, self.degree, self.copy, (), self.level, self.cross)

    def decorate(self, letters):
        """``letters ∘ self`` in normal form, or None when it vanishes."""
        ops = decoration_normalize(tuple(letters) + self.ops)
        if self.cross and any(x.kind == CODEGEN for x in ops):
            return None
        return Generator(self.name, self.degree, self.copy, ops, self.level, self.cross)

    def key(self):
        return (-self.degree, 0, self.name, self.copy, tuple((x.kind, x.index) for x in self.ops))

    def __str__(self):
        ops = format_word(self.ops, sep="")
        cp = f"_({self.copy})" if self.copy else ""
        return f"{ops}{self.name}{cp}"


@dataclass(frozen=True)
class Br:
    left: object
    right: object
    degree: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "degree", self.left.degree + self.right.degree - 1)

    def key(self):
        return (-self.degree, 1, self.left.key(), self.right.key())

    def __str__(self):
        return f"[{self.left}, {self.right}]"


def leaves(tree):
    if isinstance(tree, Generator):
        return [tree]
    return leaves(tree.left) + leaves(tree.right)


def _sign(p, q):
    return -1 if (p * q) % 2 else 1


@dataclass(frozen=True)
class BracketExpr:
    terms: tuple  # (coefficient, tree) pairs
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for c, t in self.terms:
            if t.degree != self.degree:
                raise InhomogeneousOperand(f"term {t} has degree {t.degree}, expression {self.degree}")

    @classmethod
    def of(cls, tree, coef=1):
        return cls(((coef, tree),), tree.degree)

    @classmethod
    def zero(cls, degree):
        return cls((), degree)

    def is_zero(self):
        return not normalize_expr(self).terms

    def _check(self, other):
        if other.degree != self.degree:
            raise InhomogeneousOperand(f"cannot add degrees {self.degree} and {other.degree}")

    def __add__(self, other):
        self._check(other)
        return BracketExpr(self.terms + other.terms, self.degree)

    def __neg__(self):
        return BracketExpr(tuple((-c, t) for c, t in self.terms), self.degree)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return BracketExpr(tuple((k * c, t) for c, t in self.terms), self.degree)

    def __eq__(self, other):
        if not isinstance(other, BracketExpr):
            return NotImplemented
        a, b = normalize_expr(self), normalize_expr(other)
        return a.degree == b.degree and a.terms == b.terms

    def __hash__(self):
        n = normalize_expr(self)
        return hash((n.degree, n.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (c, t) in enumerate(self.terms):
            sgn = "-" if c < 0 else ("+" if i else "")
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            out.append(f"{sgn} {mag}{t}".strip() if i else f"{sgn}{mag}{t}")
        return " ".join(out)

    def signs(self):
        return tuple("+" if c > 0 else "-" for c, _ in self.terms)

    def to_json(self):
        return {
            "format_version": FORMAT_VERSION,
            "degree": self.degree,
            "terms": [{"c": c, "t": tree_to_json(t)} for c, t in self.terms],
        }


def as_expr(x):
    if isinstance(x, BracketExpr):
        return x
    return BracketExpr.of(x)


def bracket(a, b):
    """Bilinear bracket of two homogeneous expressions (or trees)."""
    a, b = as_expr(a), as_expr(b)
    terms = tuple((ca * cb, Br(ta, tb)) for ca, ta in a.terms for cb, tb in b.terms)
    return BracketExpr(terms, a.degree + b.degree - 1)


def _canon(tree):
    """Return ``(sign, tree)`` in canonical leaf order, or ``(0, None)``."""
    if isinstance(tree, Generator):
        return 1, tree
    sl, l = _canon(tree.left)
    sr, r = _canon(tree.right)
    if not sl or not sr:
        return 0, None
    s = sl * sr
    if l == r and _sign(l.degree, l.degree) < 0:
        return 0, None
    if r.key() < l.key():
        s *= _sign(l.degree, r.degree)
        l, r = r, l
    return s, Br(l, r)


def normalize_expr(e):
    """Canonical leaf order, like terms merged, zero terms dropped, terms sorted."""
    acc = {}
    for c, t in e.terms:
        s, t2 = _canon(t)
        if s:
            acc[t2] = acc.get(t2, 0) + s * c
    terms = sorted(((c, t) for t, c in acc.items() if c), key=lambda ct: ct[1].key())
    return BracketExpr(tuple(terms), e.degree)


def _map_tree(tree, fn):
    if isinstance(tree, Generator):
        img = fn(tree)
        if img.degree != tree.degree:
            raise DegreeMismatch(f"image of {tree} has degree {img.degree}, expected {tree.degree}")
        return img
    return bracket(_map_tree(tree.left, fn), _map_tree(tree.right, fn))


def apply_morphism(e, images):
    """Apply a bracket-preserving map given on leaves.

    ``images`` is a dict ``Generator -> BracketExpr`` (missing leaves map to
    themselves) or a callable returning the image of a leaf.
    """
    if callable(images):
        fn = images
    else:
        fn = lambda g: as_expr(images.get(g, g))  # noqa: E731
    out = BracketExpr.zero(e.degree)
    for c, t in e.terms:
        out = out + c * _map_tree(t, fn)
    return normalize_expr(out)


def pushforward(e, letters):
    """Apply operator letters (written outermost first) to every leaf.

    Codegeneracies vanish on cross-term generators.
    """
    letters = tuple(letters)

    def img(g):
        h = g.decorate(letters)
        return BracketExpr.zero(g.degree) if h is None else as_expr(h)

    return apply_morphism(e, img)


def jacobi(a, b, c):
    """``(-1)^{pr}[[a,b],c] + (-1)^{pq}[[b,c],a] + (-1)^{qr}[[c,a],b]`` for degrees p, q, r."""
    a, b, c = as_expr(a), as_expr(b), as_expr(c)
    p, q, r = a.degree, b.degree, c.degree
    return (
        _sign(p, r) * bracket(bracket(a, b), c)
        + _sign(p, q) * bracket(bracket(b, c), a)
        + _sign(q, r) * bracket(bracket(c, a), b)
    )


def is_jacobi_instance(e):
    """True if ``e`` is a nonzero multiple of a Jacobi combination of three of its subtrees."""
    n = normalize_expr(e)
    if not n.terms:
        return False
    parts = set()
    for _, t in n.terms:
        if not isinstance(t, Br) or not isinstance(t.left, Br) and not isinstance(t.right, Br):
            return False
        inner, outer = (t.left, t.right) if isinstance(t.left, Br) else (t.right, t.left)
        parts.update((inner.left, inner.right, outer))
    if len(parts) > 3:
        return False
    for a, b, c in permutations(sorted(parts, key=lambda x: x.key()), 3):
        j = normalize_expr(jacobi(a, b, c))
        if not j.terms or len(j.terms) != len(n.terms):
            continue
        (c0, t0), (d0, u0) = j.terms[0], n.terms[0]
        if t0 != u0 or d0 % c0:
            continue
        k = d0 // c0
        if normalize_expr(k * j).terms == n.terms:
            return True
    return False


# ---------------------------------------------------------------------------
# serialization


def tree_to_json(t):
    if isinstance(t, Generator):
        out = {"g": t.name, "deg": t.degree, "copy": t.copy, "ops": format_word(t.ops)}
        # optional keys, omitted at their defaults
        if t.level is not None:
            out["level"] = [t.level.cosimp, t.level.simp]
        if t.cross:
            out["cross"] = True
        return out
    return ["br", tree_to_json(t.left), tree_to_json(t.right)]


def tree_from_json(obj):
    if isinstance(obj, dict):
        level = obj.get("level")
        return Generator(
            obj["g"],
            int(obj["deg"]),
            int(obj.get("copy", 0)),
            parse_letters(obj.get("ops", "")),
            None if level is None else Bidegree(*map(int, level)),
            bool(obj.get("cross", False)),
        )
    tag, l, r = obj
    if tag != "br":
        raise ValueError(f"unknown tree node {tag!r}")
    return Br(tree_from_json(l), tree_from_json(r))


def expr_from_json(obj):
    terms = tuple((int(t["c"]), tree_from_json(t["t"])) for t in obj["terms"])
    return BracketExpr(terms, int(obj["degree"]))


def dumps(e):
    return json.dumps(e.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# cross-terms


def _graded_items(g):
    names = getattr(g, "names", g)
    for k in sorted(names):
        for x in names[k]:
            yield k, x


def cross_term_c21(basis0, basis1):
    """One generator of degree ``p+q-1`` per pair ``(x, y)`` with ``d̄_0 = [ι_x, ι_y]``.

    ``x`` ranges over the first basis (copy 0), ``y`` over the second (copy 1).
    """
    out = []
    for p, x in _graded_items(basis0):
        for q, y in _graded_items(basis1):
            gx = Generator(x, p, copy=0)
            gy = Generator(y, q, copy=1)
            g = Generator(f"S{p + q - 1}({x},{y})", p + q - 1, cross=True)
            out.append((g, bracket(gx, gy)))
    return out


# ---------------------------------------------------------------------------
# the S^7 example


def _iota7():
    return Generator("iota7", 7, level=Bidegree(0, 0))


def _iota13():
    return Generator("iota13", 13, level=Bidegree(1, 1), cross=True)


def _iota19():
    return Generator("iota19", 19, level=Bidegree(2, 2), cross=True)


def s7_cross_terms():
    """Attaching data of the two low cross-terms for the 7-sphere."""
    i7, i13 = _iota7(), _iota13()
    d = lambda g, *ops: g.decorate(ops)  # noqa: E731
    c11 = bracket(d(i7, coface(0)), d(i7, coface(1)))
    c22 = (
        bracket(d(i13, coface(0)), d(i7, degen(0), coface(2), coface(1)))
        - bracket(d(i13, coface(1)), d(i7, degen(0), coface(2), coface(0)))
        + bracket(d(i13, coface(2)), d(i7, degen(0), coface(1), coface(0)))
    )
    return {(1, 1): (i13, c11), (2, 2): (_iota19(), c22)}


S7_CONFIG = {"cw": {"0": {"7": 1}}, "cross": {"1,1": {"13": 1}, "2,2": {"19": 1}}}
S7_CANDIDATES = ("d_0 d_1 s^0 s^1", "d_0 d_2 s^0 s^1", "d_1 d_2 s^0 s^1")
H_MULTIPLICATIONS = 120  # quoted constant, not computed
CONNECTIVITY_BOUND = 24


@dataclass
class S7Report:
    cross_terms: dict
    inventory: dict  # (n, r) -> {degree: count} of Ē^n_r below the bound
    candidates: list  # (psi text, LabeledPolytope)
    obstruction_degree: int
    pushforwards: dict
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())

    def rows(self):
        """Flat (section, key, value) rows for tabular output."""
        out = []
        for (n, r), (g, e) in sorted(self.cross_terms.items()):
            out.append(("cross_term", f"C{n},{r}", f"deg={g.degree}; d0 = {normalize_expr(e)}"))
        for (n, r), counts in sorted(self.inventory.items()):
            val = ",".join(f"{k}:{v}" for k, v in sorted(counts.items())) or "0"
            out.append(("inventory", f"E{n},{r}", val))
        for text, lp in self.candidates:
            out.append(("candidate", text, f"classes={len(lp.labels)}; edges={len(lp.edges())}"))
        out.append(("obstruction", "degree", str(self.obstruction_degree)))
        out.append(("constant", "h_multiplications", str(H_MULTIPLICATIONS)))
        for k, v in sorted(self.pushforwards.items()):
            out.append(("pushforward", k, str(v)))
        for k, v in sorted(self.checks.items()):
            out.append(("check", k, "pass" if v else "FAIL"))
        return out


def s7_example(max_level=3):
    from .cw_basis import cross_term_level, parse_config
    from .factorization import TargetMap, label_polytope

    _, spec = parse_config(S7_CONFIG)
    terms = s7_cross_terms()
    (g13, c11), (g19, c22) = terms[(1, 1)], terms[(2, 2)]
    c22n = normalize_expr(c22)

    inventory = {}
    for n in range(max_level + 1):
        for r in range(max_level + 1):
            g = cross_term_level(n, r, spec).truncated(CONNECTIVITY_BOUND)
            inventory[(n, r)] = g.counts

    # an operation indexed by a word of length N has order N - 1 and raises degree by N - 2
    candidates = []
    for text in S7_CANDIDATES:
        psi = TargetMap.parse(text, (2, 2))
        candidates.append((text, label_polytope(psi)))

    pushes = {f"s^{j} d0(iota19)": normalize_expr(pushforward(c22, (codegen(j),))) for j in range(2)}

    a = Generator("iota7", 7)
    triple = bracket(bracket(a, a), a)
    checks = {
        "c11_degree_13": g13.degree == 13 == c11.degree == 7 + 7 - 1,
        "c22_degree_19": g19.degree == 19 == c22.degree == 13 + 7 - 1,
        "c22_three_terms": len(c22n.terms) == 3,
        "c22_signs_alternate": c22n.signs() == ("+", "-", "+"),
        "e21_two_deg13": inventory[(2, 1)] == {13: 2},
        "zero_edges": all(not inventory[(n, 0)] and not inventory[(0, r)] for n in range(max_level + 1) for r in range(max_level + 1)),
        "candidates_18_classes": all(len(lp.labels) == 18 for _, lp in candidates),
        "pushforwards_homogeneous": all(e.degree == 19 for e in pushes.values()),
        "triple_bracket_vanishes": normalize_expr(triple).terms == (),
    }
    obstruction = g19.degree + candidates[0][1].psi.length - 2
    checks["obstruction_degree_21"] = obstruction == 21
    return S7Report(terms, inventory, candidates, obstruction, pushes, checks)
