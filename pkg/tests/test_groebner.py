"""Ideal arithmetic: Groebner bases, membership, radicals, real solving."""

import random
from fractions import Fraction

import pytest

from accesskit import (
    Ideal,
    VariableRegistry,
    ideal_equal,
    ideal_sum,
    radical_heuristic,
    solve_zero_dim,
)
from accesskit.groebner import vanishing_ideal


@pytest.fixture(scope="module")
def reg():
    return VariableRegistry(("x1", "x2"), ("u",), ("T",), 1)


class TestGroebnerBasis:
    def test_linear_elimination(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        I = Ideal(reg, [x1 + x2, x1 - x2])
        assert set(map(str, I.groebner_basis())) == {"x1", "x2"}

    def test_principal_ideal_single_generator(self, reg):
        x1, x2, T = reg.var("x1"), reg.var("x2"), reg.var("T")
        I = Ideal(reg, [x1 * (x1 + T * x2)])
        gb = I.groebner_basis()
        assert len(gb) == 1
        assert str(gb[0]) == "T*x1*x2 + x1^2"

    def test_determinism_under_permutation(self, reg):
        rng = random.Random(3)
        for _ in range(1000):
            gens = [_random_state_poly(reg, rng) for _ in range(3)]
            gens = [g for g in gens if not g.is_zero]
            if not gens:
                continue
            perm = list(gens)
            rng.shuffle(perm)
            a = Ideal(reg, gens).groebner_basis()
            b = Ideal(reg, perm).groebner_basis()
            assert [str(g) for g in a] == [str(g) for g in b]


def _random_state_poly(reg, rng, deg=2):
    p = reg.zero()
    for _ in range(3):
        term = reg.const(Fraction(rng.randint(-4, 4)))
        for _ in range(rng.randint(0, deg)):
            term = term * reg.var(rng.choice(("x1", "x2")))
        p = p + term
    return p


class TestContains:
    def test_generator_itself(self, reg):
        x1, x2, T = reg.var("x1"), reg.var("x2"), reg.var("T")
        I = Ideal(reg, [x1 * (x1 + T * x2)])
        assert I.contains(x1 * x1 + T * x1 * x2)

    def test_product_in_maximal_ideal(self, reg):
        x1, x2, T = reg.var("x1"), reg.var("x2"), reg.var("T")
        I = Ideal(reg, [x1, x2])
        assert I.contains(x1 * (x1 + T * x2))

    def test_radical_strictly_larger(self, reg):
        x1 = reg.var("x1")
        I = Ideal(reg, [x1 * x1])
        assert not I.contains(x1)

    def test_cofactor_members_randomized(self, reg):
        rng = random.Random(8)
        for _ in range(200):
            g1 = _random_state_poly(reg, rng)
            g2 = _random_state_poly(reg, rng)
            if g1.is_zero or g2.is_zero:
                continue
            I = Ideal(reg, [g1, g2])
            h1 = _random_state_poly(reg, rng, deg=1)
            h2 = _random_state_poly(reg, rng, deg=1)
            assert I.contains(h1 * g1 + h2 * g2)


class TestIdealEqual:
    def test_unit_multiple(self, reg):
        x1 = reg.var("x1")
        assert ideal_equal(Ideal(reg, [x1]), Ideal(reg, [x1 + x1]))

    def test_same_linear_span(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        assert ideal_equal(
            Ideal(reg, [x1, x2]), Ideal(reg, [x1 + x2, x1 - x2])
        )

    def test_curve_differs_from_point(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        assert not ideal_equal(
            Ideal(reg, [x2 * (x1 + x2)]), Ideal(reg, [x1, x2])
        )

    def test_equivalence_relation_randomized(self, reg):
        rng = random.Random(13)
        for _ in range(100):
            ideals = []
            for _ in range(3):
                gens = [_random_state_poly(reg, rng) for _ in range(2)]
                gens = [g for g in gens if not g.is_zero] or [reg.var("x1")]
                ideals.append(Ideal(reg, gens))
            a, b, c = ideals
            assert ideal_equal(a, a)
            if ideal_equal(a, b):
                assert ideal_equal(b, a)
            if ideal_equal(a, b) and ideal_equal(b, c):
                assert ideal_equal(a, c)


class TestIdealSum:
    def test_union_of_generators(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        s = ideal_sum(Ideal(reg, [x1]), Ideal(reg, [x2]))
        assert ideal_equal(s, Ideal(reg, [x1, x2]))

    def test_zero_ideal_is_identity(self, reg):
        x1 = reg.var("x1")
        I = Ideal(reg, [x1])
        assert ideal_equal(ideal_sum(I, Ideal(reg, [])), I)

    def test_certification_weakest_wins(self, reg):
        from accesskit.groebner import CERT_HEURISTIC

        x1, x2 = reg.var("x1"), reg.var("x2")
        a = Ideal(reg, [x1])
        b = Ideal(reg, [x2], certification=CERT_HEURISTIC)
        assert ideal_sum(a, b).certification == CERT_HEURISTIC


class TestRadicalHeuristic:
    def test_principal_square_free_reduction(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        p = x2 * (x1 + x2)
        J, _cert = radical_heuristic(Ideal(reg, [p * p]))
        assert ideal_equal(J, Ideal(reg, [p]))

    def test_zero_dimensional_certified(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        J, cert = radical_heuristic(Ideal(reg, [x1 * x1, x2]))
        assert cert
        assert ideal_equal(J, Ideal(reg, [x1, x2]))

    def test_sum_of_squares_origin(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        J, cert = radical_heuristic(Ideal(reg, [x1 * x1 + x2 * x2]))
        assert cert
        assert ideal_equal(J, Ideal(reg, [x1, x2]))

    def test_output_contains_input_and_zeros_agree(self, reg):
        rng = random.Random(21)
        x1, x2 = reg.var("x1"), reg.var("x2")
        for _ in range(50):
            g = _random_state_poly(reg, rng)
            if g.is_zero:
                continue
            I = Ideal(reg, [g * g])
            J, cert = radical_heuristic(I)
            for gen in I.generators:
                assert J.contains(gen)
            if not cert:
                continue
            for _ in range(20):
                pt = {
                    "x1": Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                    "x2": Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                    "T": Fraction(1),
                }
                in_I = all(p.evaluate(pt) == 0 for p in I.generators)
                in_J = all(p.evaluate(pt) == 0 for p in J.generators)
                assert in_I == in_J


class TestSolveZeroDim:
    def test_origin(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        r = solve_zero_dim(Ideal(reg, [x1, x2]))
        assert r.status == "points"
        assert r.points == [(Fraction(0), Fraction(0))]

    def test_two_points(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        r = solve_zero_dim(Ideal(reg, [x1 * x1 - reg.one(), x2]))
        assert r.status == "points"
        assert sorted(r.points) == [
            (Fraction(-1), Fraction(0)),
            (Fraction(1), Fraction(0)),
        ]

    def test_curve_flagged(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        r = solve_zero_dim(Ideal(reg, [x2 * (x1 + x2)]))
        assert r.status == "not_zero_dimensional"

    def test_solutions_zero_generators(self, reg):
        x1, x2 = reg.var("x1"), reg.var("x2")
        gens = [x1 * x1 - reg.const(Fraction(9)), x2 - x1]
        r = solve_zero_dim(Ideal(reg, gens))
        assert r.status == "points"
        for pt in r.points:
            env = {"x1": pt[0], "x2": pt[1]}
            for g in gens:
                assert g.evaluate(env) == 0


class TestVanishingIdeal:
    def test_single_point(self, reg):
        V = vanishing_ideal(reg, [(Fraction(1), Fraction(2))])
        assert V.contains(reg.var("x1") - reg.one())
        assert not V.contains(reg.var("x1"))

    def test_two_points_separating(self, reg):
        V = vanishing_ideal(reg, [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))])
        x1, x2 = reg.var("x1"), reg.var("x2")
        assert V.contains(x2)
        assert V.contains(x1 * x1 - x1)
        assert not V.contains(x1)
