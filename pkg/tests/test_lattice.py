import numpy as np
import pytest

from modlat.lattice import (
    BudgetExceeded, FiniteLattice, NotALattice, axioms_report, chain,
    check_nearrow, check_oracle, eval_term, find_pentagon, from_order,
    generated_sublattice, holds_identity, interval, is_modular, m3, n5,
    product, satisfies_presentation,
)
from modlat.terms import Const, Presentation, Var, jn, mt, parse_term

MODULAR_LAW = (parse_term("x*(y+x*z)"), parse_term("x*y+x*z"))


def test_from_order_m3_and_n5():
    L = m3()
    assert L.n == 5
    assert is_modular(L) is None
    P = n5()
    assert P.n == 5
    assert is_modular(P) is not None


def test_from_order_bowtie_fails():
    # two minimal, two maximal, all crosswise comparable: no supremum of the
    # minimal pair
    with pytest.raises(NotALattice):
        from_order("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def test_from_order_cycle():
    with pytest.raises(NotALattice) as exc:
        from_order("abc", [("a", "b"), ("b", "a"), ("a", "c"), ("b", "c")])
    assert "cycle" in str(exc.value)


def test_axioms_on_small_lattices():
    for L in (m3(), n5(), chain(4), product(chain(2), chain(3))):
        rep = axioms_report(L)
        assert all(rep.values()), rep


def test_eval_term():
    L = m3()
    e = 1  # an atom
    v = eval_term(parse_term("x+y"), {"x": L.bot, "y": e}, L)
    assert v == e


def test_modular_law_all_assignments_m3():
    res = holds_identity(m3(), *MODULAR_LAW)
    assert res.holds and res.assignments_checked == 125


def test_modular_law_counterexample_n5():
    res = holds_identity(n5(), *MODULAR_LAW)
    assert not res.holds
    assert res.counterexample is not None
    # and the sweep version gives the lexicographically least counterexample
    res2 = holds_identity(n5(), *MODULAR_LAW, sweep=True)
    first = sorted(
        [r.counterexample for r in [res, res2] if r.counterexample],
        key=lambda a: tuple(a[v] for v in sorted(a)),
    )[0]
    assert res2.counterexample == first


def test_two_variable_identity_evaluation_bound():
    L = product(chain(2), chain(3))  # 6 elements
    res = holds_identity(L, parse_term("x+y"), parse_term("y+x"))
    assert res.holds and res.assignments_checked == 36
    res = holds_identity(L, parse_term("x+y"), parse_term("x*y"))
    assert not res.holds and res.assignments_checked <= 36


def test_absorption_in_constructed_lattices():
    law1 = (parse_term("x*(x+y)"), parse_term("x"))
    law2 = (parse_term("x+x*y"), parse_term("x"))
    for L in (m3(), n5(), chain(5)):
        assert holds_identity(L, *law1).holds
        assert holds_identity(L, *law2).holds


def test_pentagon_search_agrees_with_modular_check():
    corpus = [
        m3(), n5(), chain(1), chain(4),
        product(chain(2), chain(2)),
        product(m3(), chain(2)),
        product(n5(), chain(2)),
        interval(product(m3(), m3()), 0, product(m3(), m3()).top),
    ]
    for L in corpus:
        assert L.n <= 50
        assert (is_modular(L) is None) == (find_pentagon(L) is None)


def test_pentagon_witness_is_a_pentagon():
    P = n5()
    w = find_pentagon(P)
    bot, a, b, c, top = w
    assert P.leq(a, b) and a != b
    assert P.join(a, c) == top and P.join(b, c) == top
    assert P.meet(a, c) == bot and P.meet(b, c) == bot


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


def test_satisfies_presentation_m3_frame():
    L = m3()
    atoms = [i for i in range(5) if i not in (L.bot, L.top)]
    A = {"abot": L.bot, "a1": atoms[0], "a2": atoms[1], "c12": atoms[2]}
    assert satisfies_presentation(L, frame2_presentation(), A) is None


def test_satisfies_presentation_collapse_model():
    L = chain(2)
    A = {g: L.bot for g in ("abot", "a1", "a2", "c12")}
    assert satisfies_presentation(L, frame2_presentation(), A) is None


def test_satisfies_presentation_failure_and_missing():
    L = n5()
    # a1 and a2 comparable: the 2-frame fails
    A = {"abot": L.bot, "a1": 1, "a2": 2, "c12": 3}
    assert satisfies_presentation(L, frame2_presentation(), A) is not None
    with pytest.raises(Exception):
        satisfies_presentation(L, frame2_presentation(), {"abot": 0})


def test_product_of_frame_models_satisfies_product_presentation():
    from modlat.terms import product_presentation, rename

    f1 = frame2_presentation()
    f2_renamed = Presentation(
        tuple(g + "q" if g != "abot" else g for g in f1.generators),
        tuple((rename(a, {"a1": "a1q", "a2": "a2q", "c12": "c12q"}),
               rename(b, {"a1": "a1q", "a2": "a2q", "c12": "c12q"}))
              for a, b in f1.base_relations),
    ).check()
    prod_pres = product_presentation(f1, f2_renamed, bottom="abot")
    M = m3()
    L = product(M, M)

    def pair(i, j):
        return i * M.n + j

    atoms = [i for i in range(5) if i not in (M.bot, M.top)]
    A = {
        "abot": pair(M.bot, M.bot),
        "a1": pair(atoms[0], M.bot), "a2": pair(atoms[1], M.bot), "c12": pair(atoms[2], M.bot),
        "a1q": pair(M.bot, atoms[0]), "a2q": pair(M.bot, atoms[1]), "c12q": pair(M.bot, atoms[2]),
    }
    assert satisfies_presentation(L, prod_pres, A) is None


def test_check_nearrow_basic():
    L = m3()
    xs = [L.bot, 1]
    assert check_nearrow(L, xs, xs)
    with pytest.raises(Exception):
        check_nearrow(L, [0, 1], [0])


def test_check_nearrow_transitivity_on_frame_intervals():
    # in a product A x B the tuples ((a_i, b)) for increasing b are linked by
    # the perspectivity-up relation; transitivity must hold along the chain
    M = m3()
    L = product(M, chain(3))
    rng = np.random.default_rng(4)

    def enc(a, b):
        return a * 3 + b

    checked = 0
    for _ in range(500):
        a_tuple = [int(rng.integers(M.n)) for _ in range(3)]
        xs = [enc(a, 0) for a in a_tuple]
        ys = [enc(a, 1) for a in a_tuple]
        zs = [enc(a, 2) for a in a_tuple]
        assert check_nearrow(L, xs, ys)
        assert check_nearrow(L, ys, zs)
        assert check_nearrow(L, xs, zs)
        checked += 1
    assert checked == 500


def test_interval_and_product():
    L = m3()
    assert interval(L, L.bot, L.top).n == L.n
    with pytest.raises(Exception):
        interval(L, 1, 2)  # incomparable atoms
    B = product(chain(2), chain(2))
    assert B.n == 4
    assert is_modular(B) is None


def test_generated_sublattice_single_seed():
    L = m3()
    sub, handles = generated_sublattice(L, [1])
    assert sub.n == 1 and handles == [1]


def test_generated_sublattice_two_incomparable_seeds():
    L = m3()
    sub, handles = generated_sublattice(L, [1, 2])
    assert sub.n == 4
    assert set(handles) == {1, 2, L.bot, L.top}
    # closure property: all pairwise joins/meets inside
    for i in range(sub.n):
        for j in range(sub.n):
            assert sub.join(i, j) in range(sub.n)


def test_generated_sublattice_duplicate_seed_rejected():
    with pytest.raises(Exception):
        generated_sublattice(m3(), [1, 1])


def test_generated_sublattice_budget():
    L = product(m3(), m3())
    with pytest.raises(BudgetExceeded):
        generated_sublattice(L, [1, 5, 7, 11], cap=3)


def test_check_oracle_on_lattice():
    L = product(m3(), chain(3))
    assert check_oracle(L, list(range(L.n)), samples=500) is None


def test_fact_transposed_intervals_isomorphic():
    # x -> x+b is a bijection [ab, a] -> [b, a+b] with inverse y -> ya
    for L in (m3(), product(m3(), chain(2)), product(chain(3), chain(3))):
        if is_modular(L) is not None:
            continue
        for a in range(L.n):
            for b in range(L.n):
                lo, hi = L.meet(a, b), L.join(a, b)
                up = L.interval_elements(lo, a)
                down = L.interval_elements(b, hi)
                image = [L.join(x, b) for x in up]
                assert sorted(image) == sorted(down)
                for x in up:
                    assert L.meet(L.join(x, b), a) == x


def test_fact_independent_triple_embedding():
    # relatively independent u, v, w over t: (x,y,z) -> x+y+z injective and
    # order-preserving on [t,u] x [t,v] x [t,w]
    L = product(chain(3), product(chain(3), chain(3)))
    t = L.bot
    # the three "axes" of the product are independent over bottom
    def enc(i, j, k):
        return (i * 9) + (j * 3) + k

    u, v, w = enc(2, 0, 0), enc(0, 2, 0), enc(0, 0, 2)
    assert L.meet(u, v) == t and L.meet(L.join(u, v), w) == t
    cube = [(x, y, z) for x in L.interval_elements(t, u)
            for y in L.interval_elements(t, v)
            for z in L.interval_elements(t, w)]
    images = {}
    for x, y, z in cube:
        s = L.join(L.join(x, y), z)
        assert s not in images
        images[s] = (x, y, z)
    for x, y, z in cube:
        for x2, y2, z2 in cube:
            if L.leq(x, x2) and L.leq(y, y2) and L.leq(z, z2):
                assert L.leq(L.join(L.join(x, y), z), L.join(L.join(x2, y2), z2))


def test_json_round_trip():
    L = m3()
    doc = L.to_json()
    back = FiniteLattice.from_json(doc)
    assert back.n == L.n
    assert (back.leq_mat == L.leq_mat).all()
    assert back.labels == L.labels
