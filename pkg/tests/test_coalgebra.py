"""Path coalgebra structure: comultiplication, actions, subcoalgebras,
coideals, multipath bases, hulls."""
from __future__ import annotations

import random

import pytest

from pathcoalg import coalgebra as ca
from pathcoalg.coalgebra import (CoalgebraError, ClosureBoundError, Coideal,
                                 CoidealError, Element, Functional,
                                 Subcoalgebra, act, coef_coalgebra,
                                 coideal_generated, comultiply, convolve,
                                 counit, independent_reduce,
                                 injective_envelope, multipath_basis,
                                 multipath_hull, path_hull,
                                 subcoalgebra_closure, validate_monomial)
from pathcoalg.fields import QQ, PrimeField
from pathcoalg.quiver import Path, Quiver, enumerate_paths, parse_path

from conftest import element, full_monomial


def assert_coalgebra_axioms(C: Subcoalgebra) -> None:
    """Coassociativity and both counit laws, checked term by term."""
    field = C.field
    for b in C.basis:
        delta = comultiply(b)
        left: dict = {}
        right: dict = {}
        for (u, w), c in delta.items():
            for (u1, u2) in u.splittings():
                key = (u1, u2, w)
                left[key] = field.add(left.get(key, field.zero), c)
            for (w1, w2) in w.splittings():
                key = (u, w1, w2)
                right[key] = field.add(right.get(key, field.zero), c)
        left = {k: v for k, v in left.items() if not field.is_zero(v)}
        right = {k: v for k, v in right.items() if not field.is_zero(v)}
        assert left == right
        eps_id = Element.zero(C.quiver, field)
        id_eps = Element.zero(C.quiver, field)
        for (u, w), c in delta.items():
            if u.is_trivial:
                eps_id = eps_id.add(Element(C.quiver, field, {w: c}, validate=False))
            if w.is_trivial:
                id_eps = id_eps.add(Element(C.quiver, field, {u: c}, validate=False))
        assert eps_id == b and id_eps == b


class TestComultiplyCounit:
    def test_vertex(self, chain2_q):
        e = element(chain2_q, {"x": 1})
        assert comultiply(e) == {(Path.trivial("x"), Path.trivial("x")): QQ.one}
        assert counit(e) == 1

    def test_arrow(self, chain2_q):
        a = parse_path(chain2_q, "a")
        d = comultiply(element(chain2_q, {"a": 1}))
        assert d == {(Path.trivial("x"), a): QQ.one, (a, Path.trivial("y")): QQ.one}
        assert counit(element(chain2_q, {"a": 1})) == 0

    def test_length_two(self, branching_q):
        ab = parse_path(branching_q, "alpha.beta")
        al = parse_path(branching_q, "alpha")
        be = parse_path(branching_q, "beta")
        d = comultiply(element(branching_q, {"alpha.beta": 1}))
        assert d == {(Path.trivial("r"), ab): QQ.one,
                     (al, be): QQ.one,
                     (ab, Path.trivial("t")): QQ.one}

    def test_term_count(self, cycle2_q):
        for p in enumerate_paths(cycle2_q, max_len=4):
            d = comultiply(Element.from_path(cycle2_q, QQ, p))
            assert len(d) == p.length + 1

    def test_linearity(self, chain2_q):
        x = element(chain2_q, {"x": 2, "a": 3})
        assert counit(x) == 2
        d = comultiply(x)
        assert d[(Path.trivial("x"), Path.trivial("x"))] == 2
        assert d[(Path.trivial("x"), parse_path(chain2_q, "a"))] == 3

    def test_axioms_on_corpus(self, chain2_C, cycle2_C2, branching_C5,
                              branching_C9, loop_q, discrete3_q):
        for C in [chain2_C, cycle2_C2, branching_C5, branching_C9,
                  full_monomial(loop_q, 3), full_monomial(discrete3_q, 0)]:
            assert_coalgebra_axioms(C)


class TestConvolveAct:
    def test_counit_is_identity(self, chain2_C):
        eps = chain2_C.counit_functional()
        rng = random.Random(5)
        for _ in range(10):
            f = Functional(chain2_C, [QQ.of_int(rng.randrange(-3, 4))
                                      for _ in range(chain2_C.dim)])
            assert convolve(eps, f) == f
            assert convolve(f, eps) == f

    def test_dual_product_on_arrow(self, chain2_C):
        # x* . a* at a picks the cut x (x) a
        xs = chain2_C.path_dual(Path.trivial("x"))
        as_ = chain2_C.path_dual(parse_path(chain2_C.quiver, "a"))
        prod = convolve(xs, as_)
        assert prod.eval(element(chain2_C.quiver, {"a": 1})) == 1

    def test_vertex_dual_squares(self, chain2_C):
        # e*.e* kills any path of positive length not looping at e
        xs = chain2_C.path_dual(Path.trivial("x"))
        prod = convolve(xs, xs)
        assert prod.eval(element(chain2_C.quiver, {"a": 1})) == 0

    def test_associative(self, branching_C9):
        rng = random.Random(13)
        C = branching_C9
        for _ in range(8):
            f, g, h = [Functional(C, [QQ.of_int(rng.randrange(-2, 3))
                                      for _ in range(C.dim)]) for _ in range(3)]
            assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))

    def test_act_target_projection(self, cycle2_C2):
        C = cycle2_C2
        us = C.path_dual(Path.trivial("u"))
        for p in C.path_basis():
            got = act(us, Element.from_path(C.quiver, QQ, p), "left")
            want = (Element.from_path(C.quiver, QQ, p) if p.target == "u"
                    else Element.zero(C.quiver, QQ))
            assert got == want

    def test_act_counit(self, branching_C9):
        eps = branching_C9.counit_functional()
        for b in branching_C9.basis:
            assert act(eps, b, "left") == b
            assert act(eps, b, "right") == b

    def test_act_tail_arrow_dual(self):
        q = Quiver(["x", "y", "e"], [("a", "x", "y"), ("a1", "y", "e")])
        C = full_monomial(q, 2)
        a1s = C.path_dual(parse_path(q, "a1"))
        got = act(a1s, element(q, {"a.a1": 1}), "left")
        assert got == element(q, {"a": 1})

    def test_act_right_side(self, chain2_C):
        q = chain2_C.quiver
        a = element(q, {"a": 1})
        xs = chain2_C.path_dual(Path.trivial("x"))
        ys = chain2_C.path_dual(Path.trivial("y"))
        assert act(xs, a, "right") == a
        assert act(ys, a, "right") == Element.zero(q, QQ)

    def test_action_compatibility(self, branching_C9):
        C = branching_C9
        rng = random.Random(17)
        for _ in range(6):
            f, g = [Functional(C, [QQ.of_int(rng.randrange(-2, 3))
                                   for _ in range(C.dim)]) for _ in range(2)]
            x = C.element_from_coords([QQ.of_int(rng.randrange(-2, 3))
                                       for _ in range(C.dim)])
            fg = convolve(f, g)
            assert act(fg, x, "left") == act(f, act(g, x, "left"), "left")
            assert act(g, act(f, x, "right"), "right") == act(fg, x, "right")

    def test_act_outside_span(self, branching_C5):
        f = branching_C5.counit_functional()
        stray = element(branching_C5.quiver, {"beta": 1})
        with pytest.raises(CoalgebraError):
            act(f, stray, "left")


class TestValidateMonomial:
    def test_branching_five_paths(self, branching_q):
        paths = {parse_path(branching_q, t)
                 for t in ["r", "s", "sp", "alpha", "alphap"]}
        ok, problems = validate_monomial(branching_q, paths)
        assert ok and problems == []

    def test_lone_composite(self, branching_q):
        ok, problems = validate_monomial(
            branching_q, {parse_path(branching_q, "alpha.beta")})
        assert not ok
        assert any("alpha" in p for p in problems)

    def test_cycle_length_two(self, cycle2_q):
        paths = set(enumerate_paths(cycle2_q, max_len=2))
        ok, _ = validate_monomial(cycle2_q, paths)
        assert ok


class TestClosure:
    def test_single_vertex(self, branching_q):
        D = subcoalgebra_closure(branching_q, [element(branching_q, {"r": 1})], 0)
        assert D.dim == 1 and D.monomial

    def test_branching_nine(self, branching_C9):
        C = branching_C9
        assert C.dim == 9 and not C.monomial
        for t in ["r", "s", "sp", "t", "alpha", "beta", "alphap", "betap"]:
            assert C.contains(element(C.quiver, {t: 1}))
        assert C.contains(element(C.quiver, {"alpha.beta": 1, "alphap.betap": 1}))
        assert not C.contains(element(C.quiver, {"alpha.beta": 1}))

    def test_single_arrow(self, branching_q):
        D = subcoalgebra_closure(branching_q, [element(branching_q, {"alphap": 1})], 1)
        assert {str(b) for b in D.basis} == {"1 r", "1 sp", "1 alphap"}

    def test_bound_error(self, branching_q):
        with pytest.raises(ClosureBoundError):
            subcoalgebra_closure(branching_q,
                                 [element(branching_q, {"alpha.beta": 1})], 1)

    def test_closure_is_delta_closed(self, branching_C9):
        # every one-sided cut leg lands back in the span
        C = branching_C9
        for b in C.basis:
            for _, y in ca.delta_left_groups(b):
                assert C.contains(y)
            for _, z in ca.delta_right_groups(b):
                assert C.contains(z)


class TestSubcoalgebra:
    def test_rejects_non_closed(self, chain2_q):
        with pytest.raises(CoalgebraError):
            Subcoalgebra(chain2_q, QQ, [element(chain2_q, {"a": 1})])

    def test_rejects_dependent(self, chain2_q):
        with pytest.raises(CoalgebraError):
            Subcoalgebra(chain2_q, QQ, [element(chain2_q, {"x": 1}),
                                        element(chain2_q, {"x": 2})])

    def test_monomial_detection(self, cycle2_q):
        els = [Element.from_path(cycle2_q, QQ, p)
               for p in enumerate_paths(cycle2_q, max_len=1)]
        C = Subcoalgebra.from_span(cycle2_q, QQ, els)
        assert C.monomial

    def test_coordinates_roundtrip(self, branching_C9):
        C = branching_C9
        rng = random.Random(3)
        coeffs = [QQ.of_int(rng.randrange(-3, 4)) for _ in range(C.dim)]
        x = C.element_from_coords(coeffs)
        assert C.coordinates(x) == coeffs

    def test_mirror_involution(self, branching_C9):
        C = branching_C9
        assert C.mirror().mirror() is C
        assert C.mirror().dim == C.dim

    def test_gabriel_quiver(self, branching_C5):
        G = branching_C5.gabriel_quiver()
        assert set(G.vertices) == {"r", "s", "sp"}
        assert {a.name for a in G.arrows} == {"alpha", "alphap"}

    def test_parallel_arrow_bundle_is_valid(self):
        # a subcoalgebra may contain a sum of parallel arrows without the
        # individual arrows; its Gabriel quiver is smaller than the support
        q = Quiver(["v", "w"], [("a", "v", "w"), ("b", "v", "w")])
        C = Subcoalgebra.from_span(q, QQ, [
            element(q, {"v": 1}), element(q, {"w": 1}),
            element(q, {"a": 1, "b": 1})])
        assert C.dim == 3 and not C.monomial
        assert not C.contains(element(q, {"a": 1}))


class TestCoidealGenerated:
    def test_vertex(self, chain2_C):
        I = coideal_generated(chain2_C, element(chain2_C.quiver, {"x": 1}), "right")
        assert [str(b) for b in I.basis] == ["1 x"]

    def test_arrow_right(self, chain2_C):
        I = coideal_generated(chain2_C, element(chain2_C.quiver, {"a": 1}), "right")
        assert [str(b) for b in I.basis] == ["1 x", "1 a"]

    def test_arrow_left(self, chain2_C):
        I = coideal_generated(chain2_C, element(chain2_C.quiver, {"a": 1}), "left")
        assert I.side == "left"
        assert [str(b) for b in I.basis] == ["1 y", "1 a"]

    def test_mixed_element(self, branching_C9):
        C = branching_C9
        x = element(C.quiver, {"alpha.beta": 1, "alphap.betap": 1})
        I = coideal_generated(C, x, "right")
        assert I.dim == 4
        for t in ["r", "alpha", "alphap"]:
            assert I.contains(element(C.quiver, {t: 1}))
        assert I.contains(x)
        assert not I.contains(element(C.quiver, {"alpha.beta": 1}))

    def test_outside_span(self, branching_C5):
        with pytest.raises(CoalgebraError):
            coideal_generated(branching_C5, element(branching_C5.quiver, {"beta": 1}),
                              "right")

    def test_dual_action_stability(self, branching_C9, chain2_C):
        for C, gen in [(branching_C9, {"alpha.beta": 1, "alphap.betap": 1}),
                       (chain2_C, {"a": 1})]:
            I = coideal_generated(C, element(C.quiver, gen), "right")
            for i in range(C.dim):
                f = C.dual_basis_functional(i)
                for b in I.basis:
                    assert I.contains(act(f, b, "left"))


class TestCoideal:
    def test_vertex_sum_not_coideal(self, chain2_C):
        with pytest.raises(CoidealError):
            Coideal(chain2_C, "right", [element(chain2_C.quiver, {"x": 1, "y": 1})])

    def test_zero_coideal(self, chain2_C):
        z = Coideal(chain2_C, "right", [])
        assert z.dim == 0
        assert multipath_basis(z) == []

    def test_mirror(self, chain2_C):
        I = coideal_generated(chain2_C, element(chain2_C.quiver, {"a": 1}), "right")
        Im = I.mirror()
        assert Im.side == "left" and Im.dim == I.dim


class TestMultipathBasis:
    def test_paths_unchanged(self, branching_C5):
        I = Coideal.from_paths(branching_C5, "right",
                               [parse_path(branching_C5.quiver, t)
                                for t in ["r", "alpha", "alphap"]])
        mb = multipath_basis(I)
        assert [str(m) for m in mb] == ["1 r", "1 alpha", "1 alphap"]

    def test_mixed_coideal(self, branching_C9):
        C = branching_C9
        x = element(C.quiver, {"alpha.beta": 1, "alphap.betap": 1})
        mb = multipath_basis(coideal_generated(C, x, "right"))
        assert len(mb) == 4
        for m in mb:
            assert ca.is_right_multipath(m)
        assert any(str(m) == "1 alpha.beta + 1 alphap.betap" for m in mb)

    def test_error_on_fake_coideal(self, chain2_C):
        fake = Coideal(chain2_C, "right",
                       [element(chain2_C.quiver, {"x": 1, "y": 1})], validate=False)
        with pytest.raises(CoidealError):
            multipath_basis(fake)

    def test_subcoalgebra_full_multipaths(self, branching_C9):
        mb = multipath_basis(branching_C9)
        assert len(mb) == 9
        for m in mb:
            assert ca.is_full_multipath(m)
        span = Subcoalgebra.from_span(branching_C9.quiver, QQ, mb, validate=False)
        assert span.basis == Subcoalgebra.from_span(
            branching_C9.quiver, QQ, branching_C9.basis, validate=False).basis


class TestHulls:
    def test_path_hull_mixed_generator(self, branching_C5):
        C = branching_C5
        J = path_hull(C, [element(C.quiver, {"alpha": 1, "alphap": 1})], "right")
        assert {str(p) for p in J.path_set()} == {"r", "alpha", "alphap"}

    def test_path_hull_fixed_point(self, chain2_C):
        I = Coideal.from_paths(chain2_C, "right",
                               [Path.trivial("x"), parse_path(chain2_C.quiver, "a")])
        J = path_hull(chain2_C, I, "right")
        assert set(J.path_set()) == set(I.path_set())

    def test_path_hull_vertex(self, chain2_C):
        J = path_hull(chain2_C, [element(chain2_C.quiver, {"x": 1})], "right")
        assert [str(p) for p in J.path_set()] == ["x"]

    def test_path_hull_needs_monomial(self, branching_C9):
        with pytest.raises(CoalgebraError):
            path_hull(branching_C9, [element(branching_C9.quiver, {"r": 1})], "right")

    def test_multipath_hull_splits_sources(self):
        q = Quiver(["z1", "z2", "w"], [("c", "z1", "w"), ("d", "z2", "w")])
        C = full_monomial(q, 1)
        x = element(q, {"c": 1, "d": 1})
        I = coideal_generated(C, x, "right")
        J = multipath_hull(C, I, "right")
        assert all(ca.is_full_multipath(g) for g in J.generators)
        assert {str(g) for g in J.generators} >= {"1 c", "1 d"}
        for b in I.basis:
            assert J.contains(b)

    def test_multipath_hull_idempotent_on_full(self, chain2_C):
        I = coideal_generated(chain2_C, element(chain2_C.quiver, {"a": 1}), "right")
        J = multipath_hull(chain2_C, I, "right")
        assert J == I

    def test_multipath_hull_zero(self, chain2_C):
        J = multipath_hull(chain2_C, Coideal(chain2_C, "right", []), "right")
        assert J.dim == 0


class TestIndependentReduce:
    def test_full_basis_reduces(self, chain2_C):
        q = chain2_C.quiver
        B = [element(q, {"x": 1}), element(q, {"y": 1}), element(q, {"a": 1})]
        F = independent_reduce(chain2_C, B)
        assert [str(f) for f in F] == ["1 y", "1 a"]

    def test_two_vertices(self, chain2_C):
        q = chain2_C.quiver
        B = [element(q, {"x": 1}), element(q, {"y": 1})]
        assert [str(f) for f in independent_reduce(chain2_C, B)] == ["1 x", "1 y"]

    def test_singleton(self, chain2_C):
        B = [element(chain2_C.quiver, {"x": 1})]
        assert independent_reduce(chain2_C, B) == B

    def test_postcondition(self, cycle2_C2):
        C = cycle2_C2
        pool = multipath_basis(C)
        F = independent_reduce(C, pool)
        span_before = [C.vector(b) for m in pool
                       for b in coideal_generated(C, m, "right").basis]
        span_after = [C.vector(b) for m in F
                      for b in coideal_generated(C, m, "right").basis]
        from pathcoalg import linalg
        assert linalg.subspace_equal(QQ, span_before, span_after)
        for x in F:
            gen = coideal_generated(C, x, "right")
            for y in F:
                if y is not x:
                    assert not gen.contains(y)


class TestCoefCoalgebra:
    def test_vertex(self, chain2_C):
        M = Coideal.from_paths(chain2_C, "right", [Path.trivial("x")])
        D = coef_coalgebra(chain2_C, M)
        assert [str(b) for b in D.basis] == ["1 x"]

    def test_full_chain(self, chain2_C):
        M = Coideal.from_paths(chain2_C, "right",
                               [Path.trivial("x"), parse_path(chain2_C.quiver, "a")])
        D = coef_coalgebra(chain2_C, M)
        assert D.dim == 3

    def test_zero(self, chain2_C):
        D = coef_coalgebra(chain2_C, Coideal(chain2_C, "right", []))
        assert D.dim == 0


class TestInjectiveEnvelope:
    def test_branching_right(self, branching_C5):
        E = injective_envelope(branching_C5, "r", "right")
        assert {str(p) for p in E.path_set()} == {"r", "alpha", "alphap"}

    def test_branching_left(self, branching_C5):
        E = injective_envelope(branching_C5, "s", "left")
        assert {str(p) for p in E.path_set()} == {"s", "alpha"}

    def test_discrete(self, discrete3_q):
        C = full_monomial(discrete3_q, 0)
        E = injective_envelope(C, "d2", "right")
        assert [str(b) for b in E.basis] == ["1 d2"]

    def test_general(self, branching_C9):
        E = injective_envelope(branching_C9, "r", "right")
        assert E.dim == 4
        assert E.contains(element(branching_C9.quiver,
                                  {"alpha.beta": 1, "alphap.betap": 1}))

    def test_unknown_vertex(self, branching_C5):
        with pytest.raises(CoalgebraError):
            injective_envelope(branching_C5, "t", "right")


class TestPrimeFieldBackend:
    def test_closure_and_coideal_over_gf5(self, branching_q):
        gf5 = PrimeField(5)
        gen = element(branching_q, {"alpha.beta": 1, "alphap.betap": 1}, field=gf5)
        C = subcoalgebra_closure(branching_q, [gen], max_len=2)
        assert C.dim == 9
        I = coideal_generated(C, gen, "right")
        assert I.dim == 4
        assert_coalgebra_axioms(C)


class TestElementText:
    def test_ordering_and_zero(self, branching_q):
        x = element(branching_q, {"alphap.betap": 1, "r": 2, "alpha": -1})
        assert str(x) == "2 r + -1 alpha + 1 alphap.betap"
        assert str(Element.zero(branching_q, QQ)) == "0"
