import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import binary, distributions
from oracles import emd_transport
from morerep.distributions import (
    BINARY,
    Distribution,
    EvaluationSpace,
    SpaceMismatchError,
    emd,
    entropy,
    flat,
    mix,
    target,
)


class TestEvaluationSpace:
    def test_single_term_rejected(self):
        with pytest.raises(ValueError):
            EvaluationSpace(("only",))

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            EvaluationSpace(("B", "B"))

    def test_top_is_last(self):
        assert BINARY.top == "G"
        assert EvaluationSpace.of_size(4).labels == ("e1", "e2", "e3", "e4")


class TestDistribution:
    def test_sum_violation_rejected(self):
        with pytest.raises(ValueError):
            Distribution(BINARY, (0.4, 0.5))

    def test_negative_component_rejected(self):
        with pytest.raises(ValueError):
            Distribution(BINARY, (-0.1, 1.1))

    def test_small_drift_is_renormalized(self):
        d = Distribution(BINARY, (0.3 + 4e-7, 0.7))
        assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-12)

    def test_exact_probs_left_untouched(self):
        probs = (0.1234567890123, 1 - 0.1234567890123)
        assert Distribution(BINARY, probs).probs == probs

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            Distribution(BINARY, (0.2, 0.3, 0.5))

    def test_label_access(self):
        d = binary(0.75)
        assert d["G"] == 0.75
        assert d.as_dict() == {"B": 0.25, "G": 0.75}


class TestFlatAndTarget:
    def test_flat_binary(self):
        assert flat(BINARY).probs == (0.5, 0.5)

    def test_flat_five(self):
        assert flat(EvaluationSpace.of_size(5)).probs == pytest.approx((0.2,) * 5)

    def test_target(self):
        assert target(BINARY).probs == (0.0, 1.0)
        assert target(EvaluationSpace.of_size(4)).probs == (0.0, 0.0, 0.0, 1.0)
        assert emd(target(BINARY), target(BINARY)) == 0.0


class TestEntropy:
    def test_point_mass(self):
        assert entropy(binary(1.0)) == 0.0

    def test_flat_binary(self):
        assert entropy(flat(BINARY)) == pytest.approx(0.693147180559945, abs=1e-12)

    def test_quarter(self):
        # mpmath at 30 digits: 0.562335144618808350...
        assert entropy(binary(0.75)) == pytest.approx(0.5623351446188083, abs=1e-12)

    @given(distributions())
    def test_flat_maximizes(self, d):
        assert entropy(d) <= entropy(flat(d.space)) + 1e-12
        assert entropy(d) >= 0.0


class TestEmd:
    def test_identity(self):
        d = binary(0.3)
        assert emd(d, d) == 0.0

    def test_binary_half(self):
        assert emd(binary(1.0), flat(BINARY)) == 0.5

    def test_opposite_extremes(self):
        s = EvaluationSpace.of_size(3)
        assert emd(Distribution(s, (1, 0, 0)), Distribution(s, (0, 0, 1))) == 1.0

    def test_mismatched_spaces(self):
        with pytest.raises(SpaceMismatchError):
            emd(flat(BINARY), flat(EvaluationSpace.of_size(2)))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(distributions(n), distributions(n))))
    def test_matches_transport_lp(self, pair):
        p, q = pair
        assert emd(p, q) == pytest.approx(emd_transport(p.probs, q.probs), abs=1e-9)

    def test_matches_scipy_wasserstein(self):
        from scipy.stats import wasserstein_distance

        rng = np.random.default_rng(3)
        s = EvaluationSpace.of_size(5)
        for _ in range(50):
            a, b = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
            pos = np.arange(5)
            expected = wasserstein_distance(pos, pos, a, b) / 4
            assert emd(Distribution(s, a), Distribution(s, b)) == pytest.approx(expected, abs=1e-12)

    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(*(distributions(n),) * 3)))
    def test_metric_axioms(self, triple):
        p, q, r = triple
        assert 0.0 <= emd(p, q) <= 1.0
        assert emd(p, q) == pytest.approx(emd(q, p), abs=1e-15)
        assert emd(p, p) <= 1e-12
        assert emd(p, r) <= emd(p, q) + emd(q, r) + 1e-12

    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(distributions(n), distributions(n))))
    def test_zero_only_for_equal(self, pair):
        p, q = pair
        if emd(p, q) <= 1e-12:
            assert max(abs(a - b) for a, b in zip(p.probs, q.probs)) <= 1e-9


class TestMix:
    def test_endpoints(self):
        d1, d2 = binary(1.0), flat(BINARY)
        assert mix(1.0, d1, d2) == d1
        assert mix(0.0, d1, d2) == d2

    def test_quarter(self):
        assert mix(0.25, binary(1.0), flat(BINARY)).probs == pytest.approx((0.375, 0.625), abs=1e-15)

    def test_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            mix(0.5, flat(BINARY), flat(EvaluationSpace.of_size(3)))

    def test_weight_out_of_range(self):
        with pytest.raises(ValueError):
            mix(1.5, flat(BINARY), flat(BINARY))

    @given(st.floats(0.0, 1.0), st.integers(2, 5).flatmap(lambda n: st.tuples(distributions(n), distributions(n))))
    def test_validity(self, a, pair):
        d = mix(a, *pair)
        assert all(0.0 <= v <= 1.0 for v in d.probs)
        assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-9)
