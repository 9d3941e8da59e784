import cmath
import math

import numpy as np
import pytest

from qsector.errors import DimensionMismatchError, InputError
from qsector.sequences import (
    CONVERGES,
    DIVERGES,
    DIVERGES_TO_ZERO,
    QUASI_CONVERGES,
    ConstantTail,
    LogAmplitude,
    PeriodicTail,
    PowerLawTail,
    ProductStateSpec,
    SequenceSpec,
    classify_product,
    orthogonalization_curve,
    product_state_from_json,
    product_state_to_json,
    same_sector,
    truncated_overlap,
)

from conftest import DOWN, PLUS, UP, random_local_state


def brute_force_power_law_product(scale, p, stagnation=1e-10):
    """Independent oracle: multiply factors until the partial product stalls."""
    value = 1.0 + 0j
    alpha = 0
    while True:
        alpha += 1
        nxt = value * (1.0 + scale * alpha ** (-p))
        if abs(nxt - value) < stagnation:
            return nxt
        value = nxt


class TestClassifyProduct:
    def test_finite_deviations_only(self):
        spec = SequenceSpec(ConstantTail(1 + 0j), {1: 2 + 0j, 2: 0.5 + 0j})
        verdict = classify_product(spec)
        assert verdict.kind == CONVERGES
        assert verdict.value == pytest.approx(1)

    def test_unimodular_constant_tail_quasi_converges(self):
        spec = SequenceSpec(ConstantTail(cmath.exp(1j * math.pi / 4)))
        assert classify_product(spec).kind == QUASI_CONVERGES

    def test_subunit_constant_tail_diverges_to_zero(self):
        spec = SequenceSpec(ConstantTail(0.9 + 0j))
        assert classify_product(spec).kind == DIVERGES_TO_ZERO
        # independent check: partial products head to 0
        assert 0.9 ** 200 < 1e-9

    def test_power_law_value_matches_partial_products(self):
        verdict = classify_product(SequenceSpec(PowerLawTail(1.0, 2.0)))
        assert verdict.kind == CONVERGES
        oracle = brute_force_power_law_product(1.0, 2.0)
        assert verdict.value == pytest.approx(oracle, abs=1e-4)
        # closed form: prod (1 + 1/a^2) = sinh(pi)/pi
        assert verdict.value == pytest.approx(math.sinh(math.pi) / math.pi, abs=1e-9)

    def test_power_law_shallow_exponent_diverges(self):
        assert classify_product(SequenceSpec(PowerLawTail(1.0, 0.5))).kind == DIVERGES
        assert (
            classify_product(SequenceSpec(PowerLawTail(-0.5, 1.0))).kind
            == DIVERGES_TO_ZERO
        )

    def test_zero_factor_is_trivial_convergence(self):
        spec = SequenceSpec(ConstantTail(0.9 + 0j), {4: 0j})
        verdict = classify_product(spec)
        assert verdict.kind == CONVERGES
        assert verdict.value == 0

    def test_growing_tail_diverges(self):
        assert classify_product(SequenceSpec(ConstantTail(1.1 + 0j))).kind == DIVERGES

    def test_all_ones_tail(self):
        verdict = classify_product(SequenceSpec(ConstantTail(1 + 0j)))
        assert verdict.kind == CONVERGES and verdict.value == pytest.approx(1)

    def test_periodic_unimodular_quasi(self):
        spec = SequenceSpec(PeriodicTail((1j, -1j)))
        assert classify_product(spec).kind == QUASI_CONVERGES


class TestSameSector:
    def test_reflexive(self, all_up):
        assert same_sector(all_up, all_up).same_sector

    def test_finite_deviations_stay_in_sector(self, all_up):
        rng = np.random.default_rng(4)
        other = ProductStateSpec(
            2, ConstantTail(UP), {i: random_local_state(rng) for i in (2, 5, 9)}
        )
        verdict = same_sector(all_up, other)
        assert verdict.same_sector
        assert verdict.witness == CONVERGES

    def test_fig_pair_is_different_sector(self, all_up, odd_sites_plus):
        verdict = same_sector(all_up, odd_sites_plus)
        assert not verdict.same_sector
        assert verdict.witness == DIVERGES

    def test_equivalence_laws_on_random_triples(self):
        rng = np.random.default_rng(8)
        tails = [ConstantTail(UP), ConstantTail(PLUS), ConstantTail(DOWN)]
        for _ in range(100):
            specs = []
            for _ in range(3):
                tail = tails[rng.integers(len(tails))]
                devs = {
                    int(i): random_local_state(rng)
                    for i in rng.integers(1, 20, size=rng.integers(0, 4))
                }
                specs.append(ProductStateSpec(2, tail, devs))
            a, b, c = specs
            assert same_sector(a, a).same_sector
            assert same_sector(a, b).same_sector == same_sector(b, a).same_sector
            if same_sector(a, b).same_sector and same_sector(b, c).same_sector:
                assert same_sector(a, c).same_sector

    def test_local_dim_mismatch(self, all_up):
        qutrit = ProductStateSpec(3, ConstantTail(np.array([1, 0, 0], dtype=complex)))
        with pytest.raises(DimensionMismatchError):
            same_sector(all_up, qutrit)


class TestTruncatedOverlap:
    def test_quarter_law_small(self, all_up, odd_sites_plus):
        assert truncated_overlap(all_up, odd_sites_plus, 4).magnitude == pytest.approx(0.5)
        assert truncated_overlap(all_up, odd_sites_plus, 8).magnitude == pytest.approx(0.25)

    def test_all_plus_halving(self, all_up, all_plus):
        for n in (1, 2, 5, 20):
            amp = truncated_overlap(all_up, all_plus, n)
            assert amp.log2_magnitude == pytest.approx(-n / 2)

    def test_matches_naive_product(self):
        rng = np.random.default_rng(21)
        for trial in range(20):
            a = ProductStateSpec(
                2,
                PeriodicTail(tuple(random_local_state(rng) for _ in range(3))),
                {2: random_local_state(rng)},
            )
            b = ProductStateSpec(
                2, ConstantTail(random_local_state(rng)), {5: random_local_state(rng)}
            )
            n = 30
            naive = 1.0 + 0j
            for alpha in range(1, n + 1):
                naive *= np.vdot(a.site_state(alpha), b.site_state(alpha))
            amp = truncated_overlap(a, b, n)
            assert amp.magnitude == pytest.approx(abs(naive), rel=1e-12)
            assert cmath.exp(1j * amp.phase) == pytest.approx(naive / abs(naive), rel=1e-9)

    def test_zero_factor_dominates(self, all_up):
        flipped = ProductStateSpec(2, ConstantTail(UP), {3: DOWN})
        assert truncated_overlap(all_up, flipped, 2).magnitude == pytest.approx(1)
        for n in (3, 10, 1000):
            assert truncated_overlap(all_up, flipped, n).is_zero

    def test_million_site_magnitude(self, all_up, odd_sites_plus):
        amp = truncated_overlap(all_up, odd_sites_plus, 10 ** 6)
        assert amp.log2_magnitude == pytest.approx(-250000.0, rel=1e-12)


class TestOrthogonalizationCurve:
    def test_different_sector_strictly_decreasing(self, all_up, odd_sites_plus):
        curve = orthogonalization_curve(all_up, odd_sites_plus, [4, 8, 16, 32, 64])
        logs = [p.log2_magnitude for p in curve]
        assert all(b < a for a, b in zip(logs, logs[1:]))

    def test_same_sector_flat_after_last_deviation(self, all_up):
        rng = np.random.default_rng(6)
        other = ProductStateSpec(2, ConstantTail(UP), {3: random_local_state(rng)})
        curve = orthogonalization_curve(all_up, other, [3, 4, 8, 100])
        mags = [p.magnitude for p in curve]
        assert mags[0] > 0
        assert all(m == pytest.approx(mags[0]) for m in mags[1:])

    def test_orthogonal_deviation_zeroes_curve(self, all_up):
        other = ProductStateSpec(2, ConstantTail(UP), {5: DOWN})
        curve = orthogonalization_curve(all_up, other, [4, 5, 6, 50])
        assert curve[0].magnitude == pytest.approx(1)
        assert all(p.magnitude == 0 for p in curve[1:])

    def test_requires_ascending_n(self, all_up, all_plus):
        with pytest.raises(InputError):
            orthogonalization_curve(all_up, all_plus, [8, 4])


class TestLogAmplitude:
    def test_zero_round_trip(self):
        assert LogAmplitude.of(0).is_zero
        assert LogAmplitude.of(0).to_complex() == 0

    def test_of_to_complex(self):
        z = 0.3 - 1.2j
        assert LogAmplitude.of(z).to_complex() == pytest.approx(z)

    def test_scaled(self):
        amp = LogAmplitude.of(2.0).scaled(-0.5j)
        assert amp.to_complex() == pytest.approx(-1j)


class TestJsonRoundTrip:
    def test_round_trip(self, odd_sites_plus):
        rng = np.random.default_rng(12)
        spec = ProductStateSpec(
            2, odd_sites_plus.tail, {4: random_local_state(rng)}
        )
        again = product_state_from_json(product_state_to_json(spec))
        for alpha in range(1, 10):
            assert np.allclose(spec.site_state(alpha), again.site_state(alpha))

    def test_rejects_bad_tail_kind(self):
        with pytest.raises(InputError):
            product_state_from_json(
                {"local_dim": 2, "tail": {"kind": "mystery", "data": []}}
            )

    def test_rejects_non_unit_state(self):
        with pytest.raises(InputError):
            product_state_from_json(
                {"local_dim": 2, "tail": {"kind": "constant", "data": [[2, 0], [0, 0]]}}
            )
