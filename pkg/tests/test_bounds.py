"""Depth bounds, growth table, obstruction certificates, the refuter."""

from fractions import Fraction

import pytest

from reluvol.bounds import (
    ceil_log,
    gradual_growth_table,
    lower_bound_nary,
    refute_network_claim,
    volume_obstruction_check,
)
from reluvol.network import (
    Layer,
    RING_Q,
    RING_Z,
    ReluNetwork,
    max_network,
    nary_ring,
)
from reluvol.polytope import dilate, standard_simplex


def brute_ceil_log(base, x):
    k = 0
    power = 1
    while power < x:
        power *= base
        k += 1
    return k


class TestCeilLog:
    def test_against_power_walk(self):
        for base in (2, 3, 5):
            for x in range(1, 1000):
                assert ceil_log(base, x) == brute_ceil_log(base, x)

    def test_validation(self):
        with pytest.raises(ValueError):
            ceil_log(1, 5)
        with pytest.raises(ValueError):
            ceil_log(2, 0)


class TestLowerBound:
    def test_integer_weights_use_p_two(self):
        r = lower_bound_nary(5, "Z")
        assert r.prime == 2
        assert r.lower_bound == r.upper_bound == 3  # ceil(log2 6)

    def test_decimal_weights_use_p_three(self):
        r = lower_bound_nary(80, 10)
        assert r.prime == 3
        assert r.lower_bound == 4  # 3^4 = 81 >= 81
        assert r.upper_bound == 7  # 2^7 = 128 >= 81

    def test_prime_depends_only_on_base_factors(self):
        assert lower_bound_nary(10, 2).prime == 3
        assert lower_bound_nary(10, 6).prime == 5
        assert lower_bound_nary(10, 30).prime == 7
        assert lower_bound_nary(10, 8).prime == 3  # same factors as 2

    def test_lower_never_exceeds_upper(self):
        for n in (1, 2, 5, 9, 26, 27, 100):
            for base in ("Z", 2, 10, 30):
                r = lower_bound_nary(n, base)
                assert 1 <= r.lower_bound <= r.upper_bound

    def test_json_shape(self):
        obj = lower_bound_nary(3, 10).to_json_dict()
        assert obj["lower_bound_hidden_layers"] == 2
        assert obj["weight_base"] == 10

    def test_validation(self):
        with pytest.raises(ValueError):
            lower_bound_nary(0, 10)
        with pytest.raises(ValueError):
            lower_bound_nary(3, 1)


class TestGrowthTable:
    def test_decimal_table(self):
        rows = gradual_growth_table(9, 10)
        assert [(r.k, r.inputs, r.insufficient_depth, r.sufficient_depth) for r in rows] == [
            (1, 3, 1, 2),
            (2, 9, 2, 4),
        ]
        assert rows[0].binary_tree_depth == 2  # ceil(log2 4)
        assert rows[1].binary_tree_depth == 4  # ceil(log2 10)

    def test_empty_below_first_power(self):
        assert gradual_growth_table(2, 10) == []

    def test_table_respects_the_base_prime(self):
        rows = gradual_growth_table(30, 6)  # p = 5
        assert [r.inputs for r in rows] == [5, 25]


class TestVolumeObstruction:
    def test_simplex_is_obstructed_at_depth_one(self):
        cert = volume_obstruction_check(standard_simplex(2), 1, 2)
        assert cert.obstructed
        assert cert.volume == 1
        assert cert.residue == 1

    def test_even_volume_gives_no_obstruction(self):
        cert = volume_obstruction_check(dilate(standard_simplex(2), 2), 1, 2)
        assert cert.verdict == "no obstruction"
        assert cert.volume == 4

    def test_dimension_not_a_prime_power_inapplicable(self):
        cert = volume_obstruction_check(standard_simplex(3), 1, 2)
        assert cert.verdict == "inapplicable"

    def test_depth_beyond_t_inapplicable(self):
        cert = volume_obstruction_check(standard_simplex(2), 2, 2)
        assert cert.verdict == "inapplicable"

    def test_validation(self):
        with pytest.raises(ValueError):
            volume_obstruction_check(standard_simplex(2), 1, 4)
        with pytest.raises(ValueError):
            volume_obstruction_check(standard_simplex(2), -1, 2)


def one_hidden_sum_net():
    """relu(x1) + relu(x2): not max(0, x1, x2)."""
    return ReluNetwork(
        (Layer(((1, 0), (0, 1)), (0, 0)), Layer(((1, 1),), (0,))), RING_Z
    )


class TestRefuter:
    def test_verifies_the_max_network(self):
        report = refute_network_claim(max_network(2), 2)
        assert report.verdict == "represents"
        assert report.exit_code == 0
        assert report.lower_bound == 2

    def test_refutes_a_wrong_one_layer_claim(self):
        report = refute_network_claim(one_hidden_sum_net(), 2)
        assert report.verdict == "refuted"
        assert report.exit_code == 1
        assert report.certificate is not None and not report.certificate.holds

    def test_clears_nary_weights_before_comparing(self):
        # f(x) = 10 * relu(x / 10) = relu(x), written with decimal weights
        net = ReluNetwork(
            (Layer(((Fraction(1, 10),),), (0,)), Layer(((10,),), (0,))),
            nary_ring(10),
        )
        report = refute_network_claim(net, 1)
        assert report.verdict == "represents"
        assert report.clearing == {"M": 10, "t": 1, "lambda": 100}
        assert report.prime == 3

    def test_rejects_wrong_input_count(self):
        report = refute_network_claim(max_network(2), 3)
        assert report.verdict == "rejected"
        assert report.exit_code == 2

    def test_rejects_nonzero_bias(self):
        net = ReluNetwork(
            (Layer(((1,),), (1,)), Layer(((1,),), (0,))), RING_Z
        )
        assert refute_network_claim(net, 1).verdict == "rejected"

    def test_rejects_unrestricted_rationals(self):
        net = ReluNetwork(
            (Layer(((1,),), (0,)), Layer(((1,),), (0,))), RING_Q
        )
        assert refute_network_claim(net, 1).verdict == "rejected"

    def test_explicit_lambda_overrides_auto(self):
        report = refute_network_claim(max_network(2), 2, lam=2)
        assert report.verdict == "refuted"  # the net computes 1x max, not 2x

    def test_report_serializes(self):
        obj = refute_network_claim(one_hidden_sum_net(), 2).to_json_dict()
        assert obj["verdict"] == "refuted"
        assert obj["certificate"]["verdict"] == "fails"
