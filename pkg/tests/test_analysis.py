"""Decision procedures: the ideal chains, point verdicts, invariance,
and backward accessibility."""

import random
from fractions import Fraction

import pytest

from accesskit import (
    Ideal,
    algorithm1,
    algorithm2,
    backward_analysis,
    cumulative_ideal,
    generic_accessibility,
    ideal_equal,
    invariance_check,
    point_status,
)


@pytest.fixture(scope="session")
def coil_report(coil):
    return algorithm2(coil)


@pytest.fixture(scope="session")
def rational2d_report(rational2d):
    return algorithm2(rational2d)


@pytest.fixture(scope="session")
def fivestep_report(fivestep):
    return algorithm2(fivestep)


class TestGenericAccessibility:
    def test_coil(self, coil):
        assert generic_accessibility(coil)

    def test_drift_never_accessible(self, drift):
        assert not generic_accessibility(drift)

    def test_fivestep(self, fivestep):
        assert generic_accessibility(fivestep)


class TestStabilizationChain:
    def test_coil_kappa_and_singular_point(self, coil_report):
        r = coil_report
        assert r.submersive and r.generically_accessible
        assert r.kappa == 3
        assert not r.budget_exhausted
        assert r.singular_set.kind == "points"
        assert r.singular_set.points == [(Fraction(0), Fraction(0))]

    def test_coil_step2_ideal(self, coil):
        I2 = cumulative_ideal(coil, 2)
        reg = I2.reg
        x1, x2, T = reg.var("x1"), reg.var("x2"), reg.var("T")
        assert ideal_equal(I2, Ideal(reg, [x1 * (x1 + T * x2)]))

    def test_coil_chain_stabilizes(self, coil):
        I3 = cumulative_ideal(coil, 3)
        I4 = cumulative_ideal(coil, 4)
        assert ideal_equal(I3, I4)

    def test_rational2d(self, rational2d_report):
        r = rational2d_report
        assert r.kappa == 3
        assert r.singular_set.points == [(Fraction(0), Fraction(0))]

    def test_fivestep(self, fivestep_report):
        r = fivestep_report
        assert r.kappa == 6
        assert r.singular_set.kind == "points"
        assert r.singular_set.points == [(Fraction(0), Fraction(0))]

    def test_drift_entire_space(self, drift):
        r = algorithm2(drift)
        assert not r.generically_accessible
        assert r.singular_set.kind == "entire"
        assert r.kappa is None

    def test_integrator_no_singular_points(self, integrator):
        r = algorithm2(integrator)
        assert r.kappa == 1
        assert r.singular_set.kind == "empty"

    def test_ascending_chain_with_extra_step(self, coil, rational2d):
        for sys, kappa in ((coil, 3), (rational2d, 3)):
            prev = None
            for k in range(sys.n, kappa + 2):
                cur = cumulative_ideal(sys, k)
                if prev is not None:
                    for g in prev.generators:
                        assert cur.contains(g)
                prev = cur
            # one extra step beyond stabilization stays equal
            assert ideal_equal(
                cumulative_ideal(sys, kappa), cumulative_ideal(sys, kappa + 1)
            )


class TestAccessibilityIndex:
    def test_rational2d_index_certified(self, rational2d):
        r_star, final, certified = algorithm1(rational2d)
        assert r_star == 3
        assert certified
        reg = final.reg
        assert ideal_equal(final, Ideal(reg, [reg.var("x1"), reg.var("x2")]))

    def test_rational2d_radical_step2(self, rational2d):
        from accesskit import radical_heuristic
        from accesskit.analysis import _step_ideal

        J, _ = radical_heuristic(_step_ideal(rational2d, 2))
        reg = J.reg
        x1, x2 = reg.var("x1"), reg.var("x2")
        assert ideal_equal(J, Ideal(reg, [x2 * (x1 + x2)]))

    def test_coil_index(self, coil):
        r_star, _final, _certified = algorithm1(coil)
        assert r_star == 3

    def test_index_bounded_by_kappa(self, coil, rational2d, coil_report, rational2d_report):
        for sys, rep in ((coil, coil_report), (rational2d, rational2d_report)):
            r_star, _f, certified = algorithm1(sys)
            if certified:
                assert r_star <= rep.kappa


class TestPointStatus:
    def test_fivestep_accessible_exactly_at_five(self, fivestep):
        v4 = point_status(fivestep, (0, 1), 4)
        v5 = point_status(fivestep, (0, 1), 5)
        assert v4.in_S_k and not v4.undefined
        assert not v5.in_S_k and not v5.undefined

    def test_fivestep_chain_releases_transient_point(
        self, fivestep, fivestep_report
    ):
        # (1, 0) lies on the five-step trajectory from (0, 1): it belongs
        # to S_2 but leaves the singular locus at k = 3, so the stabilized
        # chain ideal must not vanish there
        assert point_status(fivestep, (1, 0), 2).in_S_k
        assert not point_status(fivestep, (1, 0), 3).in_S_k
        pt = {"x1": Fraction(1), "x2": Fraction(0)}
        gb = fivestep_report.chain.ideal.groebner_basis()
        assert any(g.evaluate(pt) != 0 for g in gb)

    def test_coil_origin_always_singular(self, coil):
        for k in (2, 3, 4, 5):
            assert point_status(coil, (0, 0), k).in_S_k

    def test_rational2d_excluded_locus(self, rational2d):
        # x1 = -u would be needed to define the first step; x0 with x1
        # arbitrary is fine, but the pinned matrix may degenerate at poles
        v = point_status(rational2d, (0, 0), 3)
        assert v.in_S_k and not v.undefined

    def test_descending_sets_randomized(self, coil, rational2d, fivestep):
        rng = random.Random(29)
        systems = (coil, rational2d, fivestep)
        checked = 0
        while checked < 200:
            sys = systems[checked % len(systems)]
            x0 = tuple(
                Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                for _ in range(sys.n)
            )
            verdicts = []
            for k in range(sys.n, sys.n + 3):
                v = point_status(sys, x0, k)
                if v.undefined:
                    break
                verdicts.append(v.in_S_k)
            else:
                # membership can only switch from True to False as k grows
                for a, b in zip(verdicts, verdicts[1:]):
                    assert a or not b
                checked += 1


class TestInvariance:
    def test_coil_origin_invariant(self, coil):
        reg = coil.reg
        assert invariance_check(Ideal(reg, [reg.var("x1"), reg.var("x2")]), coil)

    def test_coil_axis_not_invariant(self, coil):
        reg = coil.reg
        assert not invariance_check(Ideal(reg, [reg.var("x1")]), coil)

    def test_stabilized_chains_invariant(
        self, coil, rational2d, fivestep, coil_report, rational2d_report, fivestep_report
    ):
        for sys, rep in (
            (coil, coil_report),
            (rational2d, rational2d_report),
            (fivestep, fivestep_report),
        ):
            assert rep.kappa is not None
            assert invariance_check(rep.chain.ideal, sys)


class TestBackward:
    def test_inverse_coil(self, coil_reversed):
        r = backward_analysis(coil_reversed)
        assert r.mode == "backward"
        assert r.kappa == 3
        assert r.singular_set.points == [(Fraction(0), Fraction(0))]

    def test_inverse_coil_expected_generator_contained(self, coil_reversed):
        I2 = cumulative_ideal(coil_reversed, 2)
        reg = I2.reg
        z1, z2, T, b = (reg.var(n) for n in ("z1", "z2", "T", "b"))
        assert I2.contains(z1 * (z1 - T * (b * z1 + z2)))

    def test_self_inverse_integrator_empty_singular_set(self, integrator):
        r = backward_analysis(integrator)
        assert r.singular_set.kind == "empty"
        assert r.kappa == 1

    def test_inaccessible_inverse_entire(self, drift):
        r = backward_analysis(drift)
        assert r.singular_set.kind == "entire"
        assert r.mode == "backward"


class TestSampledGenericity:
    def test_almost_every_point_accessible(
        self, coil, rational2d, fivestep, coil_report, rational2d_report, fivestep_report
    ):
        rng = random.Random(37)
        for sys, rep in (
            (coil, coil_report),
            (rational2d, rational2d_report),
            (fivestep, fivestep_report),
        ):
            gb = rep.chain.ideal.groebner_basis()
            names = rep.chain.ideal.reg.states
            singular = 0
            for _ in range(500):
                pt = {
                    n: Fraction(rng.randint(-50, 50), rng.randint(1, 7))
                    for n in names
                }
                pt.update({p: Fraction(1, 3) for p in sys.reg.params})
                if all(g.evaluate(pt) == 0 for g in gb):
                    singular += 1
            assert singular <= 5  # >= 99% accessible
