import math

import numpy as np
import pytest

from qsector.errors import InputError
from qsector.measurement import (
    CascadeConfig,
    cascade_config_from_json,
    cascade_config_to_json,
    cascade_step,
    coherence_curve,
    device_sizes,
    pointer_local_states,
    premeasure,
    sample_outcome,
)
from qsector.sequences import truncated_overlap

S = 1 / math.sqrt(2)


def uniform_config(m, eta, **kw):
    amp = tuple(complex(1 / math.sqrt(m)) for _ in range(m))
    return CascadeConfig(amp, eta, **kw)


class TestConfig:
    def test_rejects_unnormalized(self):
        with pytest.raises(InputError):
            CascadeConfig((1 + 0j, 1 + 0j), 0.5)

    def test_rejects_bad_eta(self):
        with pytest.raises(InputError):
            CascadeConfig((1 + 0j,), 1.0)

    def test_json_round_trip(self):
        config = uniform_config(3, 0.25, initial_size=2, growth=3.0)
        again = cascade_config_from_json(cascade_config_to_json(config))
        assert again == config


class TestPointers:
    @pytest.mark.parametrize("m,eta", [(2, 0.0), (2, S), (3, 0.3), (5, 0.9)])
    def test_uniform_pairwise_overlap(self, m, eta):
        states = pointer_local_states(m, eta)
        for j in range(m):
            for k in range(m):
                want = 1.0 if j == k else eta
                assert abs(np.vdot(states[j], states[k])) == pytest.approx(want)


class TestPremeasure:
    def test_degenerate_amplitudes(self):
        state = premeasure(CascadeConfig((1 + 0j, 0j), S))
        assert state.coherence(0, 1).magnitude == pytest.approx(0)

    def test_initial_coherence(self):
        state = premeasure(CascadeConfig((complex(S), complex(S)), S, initial_size=1))
        assert state.coherence(0, 1).magnitude == pytest.approx(0.5 * S)

    def test_populations_do_not_depend_on_eta(self):
        for eta in (0.0, 0.4, 0.99):
            state = premeasure(CascadeConfig((complex(math.sqrt(0.8)), complex(math.sqrt(0.2))), eta))
            assert state.populations() == pytest.approx([0.8, 0.2])


class TestCascadeStep:
    def test_growth(self):
        state = premeasure(uniform_config(2, S, initial_size=4))
        assert cascade_step(state, 2.0).device_size == 8

    def test_coherence_scaling_per_step(self):
        state = premeasure(uniform_config(2, S, initial_size=4))
        before = state.coherence(0, 1)
        after = cascade_step(state, 2.0).coherence(0, 1)
        delta = after.log2_magnitude - before.log2_magnitude
        assert delta == pytest.approx(4 * math.log2(S))

    def test_orthogonal_pointers_kill_coherence(self):
        state = premeasure(uniform_config(2, 0.0))
        assert cascade_step(state, 2.0).coherence(0, 1).is_zero

    def test_depth_cap(self):
        state = premeasure(uniform_config(2, S))
        with pytest.raises(InputError):
            cascade_step(state, 2.0, depth_cap=0)


class TestCoherenceCurve:
    def test_closed_form(self):
        report = coherence_curve(uniform_config(2, S), list(range(8)))
        for e in report.entries:
            assert e.log2_magnitude == pytest.approx(-1 + e.device_size * math.log2(S))

    def test_affine_in_device_size(self):
        config = uniform_config(2, 0.3)
        report = coherence_curve(config, list(range(12)))
        sizes = np.array([e.device_size for e in report.entries], dtype=float)
        logs = np.array([e.log2_magnitude for e in report.entries])
        slope, _ = np.polyfit(sizes, logs, 1)
        assert abs(slope - math.log2(0.3)) < 1e-9

    def test_trace_preserved(self):
        report = coherence_curve(uniform_config(3, 0.5), list(range(10)))
        assert all(abs(t - 1) < 1e-12 for t in report.traces)

    def test_uniform_three_outcomes_symmetric(self):
        report = coherence_curve(uniform_config(3, 0.5), [4])
        mags = {e.magnitude for e in report.entries}
        assert len(mags) == 1

    def test_zero_eta_curve(self):
        report = coherence_curve(uniform_config(2, 0.0), [0, 1, 2])
        assert all(e.magnitude == 0 for e in report.entries)

    def test_matches_truncated_overlap(self):
        # spec-level pointer overlaps agree with the closed form eta**L
        config = uniform_config(3, 0.7, initial_size=5)
        state = premeasure(config)
        amp = truncated_overlap(state.pointers[1], state.pointers[0], 5)
        assert amp.magnitude == pytest.approx(0.7 ** 5, rel=1e-12)
        assert state.pointer_overlap_amplitude(0, 1).magnitude == pytest.approx(
            0.7 ** 5, rel=1e-12
        )

    def test_coherence_vanishes_below_any_epsilon(self):
        config = uniform_config(2, S, depth_cap=60)
        report = coherence_curve(config, [40])
        assert report.entries[0].magnitude < 1e-300 or report.entries[0].log2_magnitude < -1000


class TestSampling:
    def test_deterministic_for_seed(self):
        config = uniform_config(2, S)
        a = sample_outcome(config, 1000, seed=5)
        b = sample_outcome(config, 1000, seed=5)
        assert a == b

    def test_certain_outcome(self):
        report = sample_outcome(CascadeConfig((1 + 0j, 0j), 0.5), 500, seed=1)
        assert report.counts == (500, 0)

    def test_uniform_within_three_sigma(self):
        report = sample_outcome(uniform_config(2, S), 10 ** 5, seed=7)
        sigma = math.sqrt(0.25 / 10 ** 5)
        assert abs(report.frequencies[0] - 0.5) < 3 * sigma

    def test_skewed_within_three_sigma(self):
        amp = (complex(math.sqrt(0.8)), complex(math.sqrt(0.2)))
        report = sample_outcome(CascadeConfig(amp, 0.5), 10 ** 5, seed=11)
        sigma = math.sqrt(0.8 * 0.2 / 10 ** 5)
        assert abs(report.frequencies[0] - 0.8) < 3 * sigma


class TestDeviceSizes:
    def test_ladder(self):
        config = uniform_config(2, 0.5, initial_size=1, growth=2.0, depth_cap=10)
        assert device_sizes(config, [0, 1, 2, 3]) == [1, 2, 4, 8]

    def test_depth_cap_enforced(self):
        config = uniform_config(2, 0.5, depth_cap=3)
        with pytest.raises(InputError):
            device_sizes(config, [4])
