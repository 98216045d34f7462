import random

import pytest

from modlat.terms import (
    Const, Join, LogEntry, Meet, ParseError, Presentation, TermError,
    Transformation, Var, apply_strengthening, as_constants, compose, jn, mt,
    normalize, parse_term, presentation_from_json, product_presentation,
    render, substitute,
)


def test_parse_join_idempotent():
    assert parse_term("x1 + x1") == Var("x1")


def test_parse_commutativity():
    assert parse_term("x*(y+z)") == parse_term("(z+y)*x")


def test_parse_juxtaposition_is_meet():
    assert parse_term("x y") == parse_term("x*y")
    assert parse_term("a(b+c)") == mt(Var("a"), jn(Var("b"), Var("c")))


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_term("x + * y")
    assert exc.value.position == 4


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_term("x + ?")
    with pytest.raises(ParseError):
        parse_term("x + (y")


def test_normalize_flatten_dedupe():
    t = Join(Var("x"), Join(Var("y"), Var("x")))
    assert normalize(t) == jn(Var("x"), Var("y"))


def test_normalize_no_absorption():
    t = Meet(Var("x"), Join(Var("x"), Var("y")))
    n = normalize(t)
    assert n.kind == "meet" and len(n.args) == 2


def test_normalize_idempotent_on_random_terms():
    rng = random.Random(0)
    names = ["x", "y", "z", "w"]

    def gen(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(rng.choice(names))
        op = Join if rng.random() < 0.5 else Meet
        return op(*[gen(depth - 1) for _ in range(rng.randint(2, 3))])

    for _ in range(500):
        t = gen(3)
        n = normalize(t)
        assert normalize(n) == n


def test_meet_then_join_reading():
    # s*t + u groups as (s*t) + u
    assert parse_term("a*b+c") == jn(mt(Var("a"), Var("b")), Var("c"))
    assert normalize(Join(Meet(Var("a"), Var("b")), Var("c"))) == parse_term("a*b+c")


def test_render_round_trip():
    rng = random.Random(1)
    names = ["x", "y", "z", "a1", "c12"]

    def gen(depth):
        if depth == 0 or rng.random() < 0.3:
            return Var(rng.choice(names))
        op = Join if rng.random() < 0.5 else Meet
        return op(*[gen(depth - 1) for _ in range(rng.randint(2, 3))])

    for _ in range(300):
        t = normalize(gen(3))
        assert parse_term(render(t)) == t


# independent canonicalizer: frozenset-of-frozensets representation; a
# different algorithm and data path than normalize()
def _canon(t):
    if t.kind in ("var", "const"):
        return (t.kind, t.name)
    parts = set()
    for a in t.args:
        c = _canon(a)
        if isinstance(c, frozenset) and c and next(iter(c))[0] == t.kind:
            parts |= {x[1] for x in c}
        else:
            parts.add(c)
    flat = set()
    for p in parts:
        flat.add(p)
    if len(flat) == 1:
        return next(iter(flat))
    return frozenset({(t.kind, p) for p in flat})


def _canon_flat(t):
    # flatten one layer at a time until fixpoint, using only AC/I steps
    if t.kind in ("var", "const"):
        return (t.kind, t.name)
    items = []
    for a in t.args:
        ca = _canon_flat(a)
        if isinstance(ca, tuple) and ca[0] == t.kind and isinstance(ca[1], frozenset):
            items.extend(ca[1])
        else:
            items.append(ca)
    uniq = frozenset(items)
    if len(uniq) == 1:
        return next(iter(uniq))
    return (t.kind, uniq)


def test_normalize_agrees_with_independent_ac_oracle():
    rng = random.Random(2)
    names = ["x", "y", "z"]

    def gen(depth):
        if depth == 0 or rng.random() < 0.35:
            return Var(rng.choice(names))
        op = Join if rng.random() < 0.5 else Meet
        return op(*[gen(depth - 1) for _ in range(rng.randint(2, 3))])

    pairs = 0
    equal_seen = 0
    while pairs < 10_000:
        s = gen(4)
        if rng.random() < 0.5:
            # AC/I-equivalent scramble: shuffle arguments, re-nest, duplicate one
            def scramble(t):
                if t.kind in ("var", "const"):
                    return t
                args = [scramble(a) for a in t.args]
                rng.shuffle(args)
                if len(args) > 2 and rng.random() < 0.5:
                    head = Join(*args[:2]) if t.kind == "join" else Meet(*args[:2])
                    args = [head] + args[2:]
                if rng.random() < 0.3:
                    args.append(args[0])
                return Join(*args) if t.kind == "join" else Meet(*args)

            t = scramble(s)
        else:
            t = gen(4)
        pairs += 1
        same_norm = normalize(s) == normalize(t)
        same_oracle = _canon_flat(s) == _canon_flat(t)
        assert same_norm == same_oracle
        equal_seen += same_norm
    assert equal_seen > 1000  # the scrambles actually produce equal pairs


def test_substitute_collapse():
    t = parse_term("x+y")
    assert substitute(t, {"x": Var("a"), "y": Var("a")}) == Var("a")


def test_substitute_composes():
    # t(u(x)) built by nested substitution
    t = parse_term("x*y")
    u = {"x": parse_term("a+b"), "y": parse_term("a")}
    inner = substitute(t, u)
    assert inner == mt(jn(Var("a"), Var("b")), Var("a"))


def test_substitute_missing_symbol():
    with pytest.raises(TermError):
        substitute(parse_term("x+y"), {"x": Var("a")})


def frame2_presentation():
    gens = ("abot", "a1", "a2", "c12")
    A, A1, A2, C = Const("abot"), Const("a1"), Const("a2"), Const("c12")
    rels = (
        (A, mt(A1, A2)),
        (A, mt(A1, C)),
        (A, mt(A2, C)),
        (jn(A1, A2), jn(A1, C)),
        (jn(A1, A2), jn(A2, C)),
    )
    return Presentation(gens, rels).check()


def test_strengthening_records_and_replays():
    pres = frame2_presentation()
    c14 = "c12"
    assign = [(c14, mt(jn(Const(c14), Const("abot")), jn(Const("a1"), Const("a2"))))]
    new_rel = [(Const("abot"), mt(Const("abot"), Const(c14)))]
    pres2 = apply_strengthening(pres, assign, new_rel)
    assert pres2.generators == pres.generators
    assert pres2.relations == pres.relations + tuple(
        (normalize(a), normalize(b)) for a, b in new_rel
    )
    assert pres2.replay() == pres2.relations
    # relation-only extension
    pres3 = apply_strengthening(pres, [], new_rel)
    assert len(pres3.log) == 1 and not pres3.log[0].assignments


def test_strengthening_unknown_symbol():
    with pytest.raises(TermError):
        apply_strengthening(frame2_presentation(), [("q", Var("a1"))], [])


def test_compose_identity_and_associativity():
    rng = random.Random(3)
    gens = ("a", "b", "c")

    def rand_transform():
        def gen(depth):
            if depth == 0 or rng.random() < 0.4:
                return Var(rng.choice(gens))
            op = Join if rng.random() < 0.5 else Meet
            return op(gen(depth - 1), gen(depth - 1))

        return Transformation(gens, gens, tuple(normalize(gen(2)) for _ in gens)).check()

    ident = Transformation.identity(gens)
    for _ in range(50):
        f, g, h = rand_transform(), rand_transform(), rand_transform()
        assert compose(ident, g).terms == g.terms
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_compose_arity_mismatch():
    f = Transformation(("a",), ("b", "c"), (Var("a"), Var("a"))).check()
    g = Transformation(("b",), ("d",), (Var("b"),)).check()
    with pytest.raises(TermError):
        compose(f, g)


def chain_presentation(bottom, top):
    return Presentation(
        (bottom, top),
        ((Const(bottom), mt(Const(bottom), Const(top))),),
    ).check()


def test_product_presentation():
    f2 = frame2_presentation()
    chain = chain_presentation("abot", "a3")
    prod = product_presentation(f2, chain, bottom="abot")
    assert set(prod.generators) == {"abot", "a1", "a2", "c12", "a3"}
    # the product relation is present
    lhs = mt(Join(Const("a1"), Const("a2"), Const("c12")), Const("a3"))
    assert (lhs, Const("abot")) in prod.relations


def test_product_with_empty_presentation_is_identity():
    f2 = frame2_presentation()
    trivial = Presentation(("abot",)).check()
    prod = product_presentation(f2, trivial, bottom="abot")
    assert set(prod.generators) == set(f2.generators)
    assert prod.relations == f2.relations


def test_product_name_collision():
    f2 = frame2_presentation()
    with pytest.raises(TermError):
        product_presentation(f2, frame2_presentation(), bottom="abot")


def test_presentation_json_round_trip():
    pres = apply_strengthening(
        frame2_presentation(),
        [("c12", mt(jn(Const("c12"), Const("abot")), jn(Const("a1"), Const("a2"))))],
        [(Const("abot"), mt(Const("abot"), Const("c12")))],
    )
    doc = pres.to_json()
    back = presentation_from_json(doc)
    assert back.generators == pres.generators
    assert back.relations == pres.relations
    assert len(back.log) == 1


def test_as_constants():
    t = parse_term("x + y*z")
    c = as_constants(t, {"x", "z"})
    assert c == jn(Const("x"), mt(Var("y"), Const("z")))
