import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fireflysync.model import (ModelParams, StepDecision, flash_start_phase,
                               is_flashing, noisy_update, quorum_decision)


def params(c=10, f=0.5, theta=0.5, sigma=0.0, n=100, t=1000):
    return ModelParams(n_agents=n, cycle_len=c, horizon=t,
                       quorum_threshold=theta, flash_fraction=f, noise_level=sigma)


class TestModelParams:
    def test_valid_defaults(self):
        p = params()
        assert p.n_agents == 100 and p.cycle_len == 10

    @pytest.mark.parametrize("kwargs", [
        dict(n=1),                 # too few agents
        dict(t=5, c=10),           # horizon shorter than a cycle
        dict(theta=1.5),
        dict(f=0.0),
        dict(sigma=-0.1),
        dict(f=0.1, c=10),         # f*C = 1 < 2: no quorum-check phase
        dict(f=0.15, c=10),        # ceil(8.5)=9, check phase 10 out of range
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            params(**kwargs)

    def test_f_c_exactly_two_accepted(self):
        p = params(f=0.2, c=10)
        assert flash_start_phase(p) == 8


class TestFlashWindow:
    @pytest.mark.parametrize("c,f,expected", [
        (10, 0.5, 5),
        (10, 1.0, 0),
        (10, 0.3, 7),
    ])
    def test_flash_start(self, c, f, expected):
        assert flash_start_phase(params(c=c, f=f)) == expected

    @pytest.mark.parametrize("phase,c,f,expected", [
        (5, 10, 0.5, True),
        (4, 10, 0.5, False),
        (9, 10, 0.2, True),
    ])
    def test_is_flashing(self, phase, c, f, expected):
        assert is_flashing(phase, params(c=c, f=f)) is expected

    def test_phase_out_of_range(self):
        with pytest.raises(ValueError):
            is_flashing(10, params(c=10))

    @given(st.integers(4, 200), st.integers(1, 100))
    def test_window_size_close_to_f(self, c, f_num):
        # f chosen so that f*C >= 2 holds
        f = max(f_num / 100.0, 2.0 / c)
        if f > 1.0:
            return
        p = ModelParams(n_agents=2, cycle_len=c, horizon=c, flash_fraction=f)
        s = flash_start_phase(p)
        window = c - s
        assert abs(window / c - f) < 1.0 / c + 1e-12


class TestQuorumDecision:
    def test_paper_boundary(self):
        p = params(theta=0.5)
        assert quorum_decision(50, 99, p) is True   # 50 > 49.5
        assert quorum_decision(49, 99, p) is False  # strict inequality

    def test_isolated_agent(self):
        assert quorum_decision(0, 0, params()) is False

    def test_invalid_counts(self):
        with pytest.raises(ValueError):
            quorum_decision(5, 4, params())

    @given(st.integers(0, 50), st.integers(0, 50))
    def test_monotone_in_flashing_count(self, m, n_extra):
        n = m + n_extra
        p = params(theta=0.37, n=2)
        if m < n:
            assert quorum_decision(m, n, p) <= quorum_decision(m + 1, n, p)

    @given(st.integers(0, 30), st.integers(0, 30))
    def test_theta_extremes(self, m, extra):
        n = m + extra
        assert quorum_decision(m, n, params(theta=0.0)) is (m >= 1)
        assert quorum_decision(m, n, params(theta=1.0)) is False


class TestNoisyUpdate:
    @pytest.mark.parametrize("quorum,xi,expected", [
        (True, False, True),
        (True, True, False),
        (False, True, True),
        (False, False, False),
    ])
    def test_truth_table(self, quorum, xi, expected):
        assert noisy_update(quorum, xi) is expected

    def test_flip_frequency_matches_sigma(self):
        sigma = 0.3
        draws = 100_000
        rng = np.random.default_rng(12345)
        xi = rng.random(draws) < sigma
        flips = sum(noisy_update(True, bool(x)) != True for x in xi)
        std = math.sqrt(draws * sigma * (1 - sigma))
        assert abs(flips - draws * sigma) < 4 * std

    def test_step_decision_applied_advance(self):
        d = StepDecision(flashing_neighbors=3, quorum_met=True, noise_draw=True)
        assert d.applied_advance is False
