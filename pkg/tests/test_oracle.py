"""Numeric oracle: simulation, matrix recursion, ranks, grid scans."""

import random

import numpy as np
import pytest

from accesskit import PoleError
from accesskit.oracle import (
    finite_difference_jacobian,
    grid_scan_1d,
    jacobian_rank,
    numeric_access_matrix,
    simulate,
)
from accesskit.sysfile import to_numeric_step

COIL_PARAMS = {"T": 0.1, "a": 1.0, "b": 1.0}


class TestSimulate:
    def test_fivestep_prefix_fixed_for_any_inputs(self, fivestep):
        # from (0, 1) the first three states do not depend on the inputs
        rng = random.Random(11)
        for _ in range(10):
            us = [[rng.uniform(-2, 2)] for _ in range(5)]
            traj = simulate(fivestep, (0.0, 1.0), us)
            assert traj.states[1] == pytest.approx([1.0, 1.0])
            assert traj.states[2] == pytest.approx([1.0, 0.0])
            assert traj.states[3] == pytest.approx([0.0, -1.0])

    def test_fivestep_fourth_step_single_direction(self, fivestep):
        u3 = 0.7
        us = [[0.0], [0.0], [0.0], [u3]]
        traj = simulate(fivestep, (0.0, 1.0), us)
        assert traj.states[4] == pytest.approx([-1.0, -1.0 + 2 * u3])

    def test_deterministic(self, coil):
        us = [[0.3], [-0.2], [0.9]]
        a = simulate(coil, (1.0, -1.0), us, COIL_PARAMS)
        b = simulate(coil, (1.0, -1.0), us, COIL_PARAMS)
        assert a.states == b.states
        assert a.inputs == b.inputs

    def test_pole_guard(self, rational2d):
        with pytest.raises(PoleError):
            simulate(rational2d, (1.0, 0.0), [[-1.0]])

    def test_integrator_closed_form(self, integrator):
        traj = simulate(integrator, (2.0,), [[1.0], [-3.0], [0.5]])
        assert traj.states[-1] == pytest.approx([0.5])


class TestAccessMatrix:
    @pytest.mark.parametrize("name", ["coil", "rational2d", "fivestep"])
    def test_matches_finite_differences(self, request, name):
        sys = request.getfixturevalue(name)
        params = COIL_PARAMS if name == "coil" else None
        rng = random.Random(17)
        for _ in range(5):
            x0 = [rng.uniform(0.5, 1.5) for _ in range(sys.n)]
            us = [[rng.uniform(-1, 1)] for _ in range(3)]
            try:
                M = numeric_access_matrix(sys, x0, us, params)
                J = finite_difference_jacobian(sys, x0, us, params)
            except PoleError:
                continue
            assert np.max(np.abs(M - J)) < 1e-5

    def test_shape(self, coil):
        M = numeric_access_matrix(coil, (1.0, 1.0), [[0.1]] * 4, COIL_PARAMS)
        assert M.shape == (2, 4)


class TestJacobianRank:
    def test_fivestep_rank_one_at_four_steps(self, fivestep):
        assert jacobian_rank(fivestep, (0.0, 1.0), 4).rank == 1

    def test_fivestep_rank_two_at_five_steps(self, fivestep):
        est = jacobian_rank(fivestep, (0.0, 1.0), 5)
        assert est.rank == 2
        assert len(est.best_inputs) == 5

    def test_coil_origin_rank_zero(self, coil):
        for k in (2, 3, 4):
            assert jacobian_rank(coil, (0.0, 0.0), k, params=COIL_PARAMS).rank == 0

    def test_generic_point_full_rank(self, coil, rational2d):
        assert jacobian_rank(coil, (1.0, 1.0), 2, params=COIL_PARAMS).rank == 2
        assert jacobian_rank(rational2d, (1.0, 1.0), 2).rank == 2

    def test_rank_monotone_in_k(self, fivestep, coil):
        rng = random.Random(23)
        for sys, params in ((fivestep, None), (coil, COIL_PARAMS)):
            for _ in range(5):
                x0 = [rng.uniform(-1.5, 1.5) for _ in range(sys.n)]
                ranks = [
                    jacobian_rank(sys, x0, k, params=params).rank
                    for k in (2, 3, 4)
                ]
                assert ranks == sorted(ranks)


class TestGridScan:
    def test_sinemap_levels(self, sinemap_spec):
        step = to_numeric_step(sinemap_spec)
        levels = grid_scan_1d(step, (0.0, 2.0), (-1.0, 1.0), 3, samples=32)

        def as_set(vals):
            return {round(v, 6) for v in vals}

        assert as_set(levels[0]) == {0.0, 1.0, 2.0}
        assert as_set(levels[1]) == {0.0, 2.0}
        assert as_set(levels[2]) == {0.0}

    def test_levels_nested(self, sinemap_spec):
        step = to_numeric_step(sinemap_spec)
        levels = grid_scan_1d(step, (0.0, 2.0), (-1.0, 1.0), 3, samples=32)
        for shallow, deep in zip(levels, levels[1:]):
            assert set(deep) <= set(shallow)

    def test_accessible_map_flags_nothing(self):
        step = lambda x, u: x + u
        levels = grid_scan_1d(step, (0.0, 1.0), (-1.0, 1.0), 2, samples=16)
        assert levels == [[], []]
