import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcpoly.errors import DegreeMismatch, InhomogeneousOperand
from fcpoly.whitehead import (
    BracketExpr,
    Br,
    Generator,
    apply_morphism,
    bracket,
    cross_term_c21,
    dumps,
    expr_from_json,
    is_jacobi_instance,
    jacobi,
    normalize_expr,
    pushforward,
    s7_cross_terms,
    s7_example,
)
from fcpoly.words import codegen, coface, degen


# An evaluation model: leaves become integer matrices and a bracket of
# degrees p, q becomes AB + (-1)^{pq} BA.  This satisfies the same graded
# antisymmetry the normal form uses, so evaluating before and after
# normalization must agree exactly.


def _eval(tree, env):
    if isinstance(tree, Generator):
        return env[tree]
    a, b = _eval(tree.left, env), _eval(tree.right, env)
    s = -1 if (tree.left.degree * tree.right.degree) % 2 else 1
    return a @ b + s * (b @ a)


def evaluate(e, env, size=3):
    out = np.zeros((size, size), dtype=object)
    for c, t in e.terms:
        out = out + c * _eval(t, env)
    return out


def _env(gens, rng, size=3):
    return {g: np.array([[rng.randint(-3, 3) for _ in range(size)] for _ in range(size)], dtype=object) for g in gens}


POOL = [Generator(n, d) for n, d in [("a", 2), ("b", 3), ("c", 7), ("d", 4), ("e", 7), ("f", 1)]]


def random_tree(rng, leaves):
    if leaves == 1:
        return rng.choice(POOL)
    k = rng.randint(1, leaves - 1)
    return Br(random_tree(rng, k), random_tree(rng, leaves - k))


def random_expr(rng):
    t0 = random_tree(rng, rng.randint(1, 4))
    terms = [(rng.randint(-3, 3), t0)]
    for _ in range(rng.randint(0, 4)):
        t = random_tree(rng, rng.randint(1, 4))
        if t.degree == t0.degree:
            terms.append((rng.randint(-3, 3), t))
    return BracketExpr(tuple(terms), t0.degree)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_normal_form_agrees_with_model(seed):
    rng = random.Random(seed)
    e = random_expr(rng)
    env = _env(POOL, rng)
    n = normalize_expr(e)
    assert (evaluate(e, env) == evaluate(n, env)).all()
    assert normalize_expr(n).terms == n.terms
    assert n.degree == e.degree and all(t.degree == e.degree for _, t in n.terms)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_morphism_commutes_with_bracket(seed):
    rng = random.Random(seed)
    a, b = random_expr(rng), random_expr(rng)
    images = {}
    for g in POOL:
        if rng.random() < 0.5:
            same = [h for h in POOL if h.degree == g.degree]
            images[g] = rng.randint(-2, 2) * BracketExpr.of(rng.choice(same))
    lhs = apply_morphism(bracket(a, b), images)
    rhs = normalize_expr(bracket(apply_morphism(a, images), apply_morphism(b, images)))
    assert lhs == rhs
    assert lhs.degree == a.degree + b.degree - 1


def test_antisymmetry_cases():
    a, b, c = POOL[0], POOL[1], POOL[2]
    for x, y in [(a, b), (b, c), (a, c), (c, POOL[4])]:
        s = -1 if (x.degree * y.degree) % 2 else 1
        assert bracket(x, y) == s * bracket(y, x)
        assert (bracket(x, y) + (-s) * bracket(y, x)).is_zero()
    assert normalize_expr(2 * bracket(a, b) - bracket(a, b)) == bracket(a, b)
    # odd self-brackets vanish, even ones survive
    assert normalize_expr(bracket(c, c)).terms == ()
    assert len(normalize_expr(bracket(a, a)).terms) == 1


def test_degree_rules_and_errors():
    i7 = Generator("iota", 7)
    assert bracket(i7, i7).degree == 13
    assert bracket(Generator("iota13", 13), i7).degree == 19
    assert bracket(BracketExpr.zero(3), i7).is_zero()
    with pytest.raises(InhomogeneousOperand):
        BracketExpr.of(i7) + BracketExpr.of(Generator("x", 3))
    with pytest.raises(DegreeMismatch):
        apply_morphism(BracketExpr.of(i7), {i7: Generator("x", 3)})
    with pytest.raises(DegreeMismatch):
        Generator("z", 0)


def test_morphism_examples():
    a, b = POOL[0], POOL[1]
    e = bracket(a, b) + bracket(bracket(a, a), a)
    assert e.degree == 4
    assert apply_morphism(e, {}) == e
    killed = apply_morphism(e, {a: BracketExpr.zero(a.degree)})
    assert killed.is_zero()


def test_cross_term_c21():
    out = cross_term_c21({7: ["x"]}, {7: ["y"]})
    assert len(out) == 1
    g, e = out[0]
    assert g.degree == 13 and e.degree == 13
    assert e == bracket(Generator("x", 7, copy=0), Generator("y", 7, copy=1))
    assert cross_term_c21({}, {7: ["y"]}) == []
    out = cross_term_c21({3: ["p"], 5: ["q"]}, {3: ["r"]})
    assert sorted(g.degree for g, _ in out) == [5, 7]
    out = cross_term_c21({3: ["p", "p2"], 5: ["q"]}, {3: ["r"], 4: ["s"]})
    assert len(out) == 3 * 2


def test_s7_boundary_expression():
    terms = s7_cross_terms()
    g13, c11 = terms[(1, 1)]
    g19, c22 = terms[(2, 2)]
    assert g13.degree == c11.degree == 13
    assert g19.degree == c22.degree == 19
    n = normalize_expr(c22)
    assert n.signs() == ("+", "-", "+")
    assert [str(t) for _, t in n.terms] == [
        "[d^0iota13, s_0d^2d^1iota7]",
        "[d^1iota13, s_0d^2d^0iota7]",
        "[d^2iota13, s_0d^1d^0iota7]",
    ]
    for j in range(2):
        pushed = pushforward(c22, (codegen(j),))
        assert pushed.degree == 19 and pushed.is_zero()


def test_decorations():
    i7 = Generator("iota7", 7)
    g = i7.decorate((degen(0), coface(2), coface(1)))
    assert g.degree == 7 and str(g) == "s_0d^2d^1iota7"
    cross = Generator("c", 13, cross=True)
    assert cross.decorate((coface(1), codegen(0))) is None
    # s^0 d^1 is the identity, so nothing is left to vanish
    assert cross.decorate((codegen(0), coface(1))) == cross


def test_jacobi_checker():
    a, b, c = POOL[0], POOL[1], POOL[3]
    j = jacobi(a, b, c)
    assert j.degree == a.degree + b.degree + c.degree - 2
    assert is_jacobi_instance(j)
    assert is_jacobi_instance(3 * j)
    assert not is_jacobi_instance(bracket(bracket(a, b), c))
    assert not is_jacobi_instance(BracketExpr.zero(j.degree))


def test_json_round_trip():
    _, c22 = s7_cross_terms()[(2, 2)]
    text = dumps(c22)
    back = expr_from_json(json.loads(text))
    assert back == c22
    assert dumps(back) == text
    assert json.loads(text)["terms"][0]["t"][0] == "br"
    plain = bracket(Generator("x", 3), Generator("y", 5, copy=1))
    leaf = plain.to_json()["terms"][0]["t"][1]
    assert set(leaf) == {"g", "deg", "copy", "ops"}
    assert expr_from_json(json.loads(dumps(plain))) == plain


def test_s7_report():
    rep = s7_example()
    assert rep.ok, rep.checks
    assert rep.inventory[(2, 1)] == {13: 2}
    assert rep.inventory[(1, 1)] == {13: 1}
    assert rep.obstruction_degree == 21
    assert [t for t, _ in rep.candidates] == ["d_0 d_1 s^0 s^1", "d_0 d_2 s^0 s^1", "d_1 d_2 s^0 s^1"]
