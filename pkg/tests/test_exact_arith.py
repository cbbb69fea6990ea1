"""Scalar layer: N-ary fractions, residues, prime helpers."""

from fractions import Fraction

import pytest

from reluvol.exact_arith import (
    NaryFraction,
    Residue,
    common_denominator,
    distinct_prime_factors,
    format_rational,
    is_prime,
    mod_reduce,
    nary_parse,
    next_prime,
    parse_rational,
    primes_up_to,
    smallest_prime_not_dividing,
)


class TestNaryFraction:
    def test_canonical_form_strips_base_factors(self):
        q = NaryFraction(10, 2500, 4)  # 2500/10^4 = 25/10^2
        assert (q.z, q.t) == (25, 2)

    def test_integer_has_exponent_zero(self):
        q = NaryFraction(10, 30, 1)  # 30/10 = 3
        assert (q.z, q.t) == (3, 0)
        assert str(q) == "3"

    def test_as_fraction(self):
        assert NaryFraction(2, 3, 2).as_fraction() == Fraction(3, 4)
        assert NaryFraction(10, -7, 2).as_fraction() == Fraction(-7, 100)

    def test_value_equality_across_bases(self):
        half_binary = NaryFraction(2, 1, 1)
        half_decimal = NaryFraction(10, 5, 1)
        assert half_binary == half_decimal
        assert hash(half_binary) == hash(half_decimal)
        assert half_binary == Fraction(1, 2)
        assert NaryFraction(10, 3, 0) == 3

    def test_str(self):
        assert str(NaryFraction(10, -7, 2)) == "-7/100"
        assert str(NaryFraction(2, 3, 2)) == "3/4"

    def test_validation(self):
        with pytest.raises(ValueError):
            NaryFraction(1, 1, 0)
        with pytest.raises(ValueError):
            NaryFraction(10, 1, -1)


class TestNaryParse:
    def test_plain_integer(self):
        assert nary_parse("42", 10) == 42
        assert nary_parse("-3", 2) == -3

    def test_slash_fraction(self):
        assert nary_parse("1/2", 10) == Fraction(1, 2)  # 5/10
        assert nary_parse("1/8", 10) == Fraction(1, 8)  # 125/1000
        assert nary_parse("-7/100", 10) == Fraction(-7, 100)

    def test_slash_fraction_not_representable(self):
        with pytest.raises(ValueError):
            nary_parse("1/3", 10)
        with pytest.raises(ValueError):
            nary_parse("1/10", 2)

    def test_positional_literal_reads_digits_in_base(self):
        assert nary_parse("0.25", 10) == Fraction(1, 4)
        assert nary_parse("10.01", 2) == Fraction(9, 4)  # 2 + 1/4
        assert nary_parse("-0.1", 2) == Fraction(-1, 2)

    def test_positional_literal_rejects_foreign_digits(self):
        with pytest.raises(ValueError):
            nary_parse("0.7", 2)

    def test_empty_and_trailing_dot_rejected(self):
        with pytest.raises(ValueError):
            nary_parse("", 10)
        with pytest.raises(ValueError):
            nary_parse("1.", 10)


class TestResidue:
    def test_addition_same_modulus(self):
        assert (Residue(5, 3) + Residue(5, 4)).value == 2

    def test_addition_mixed_moduli_rejected(self):
        with pytest.raises(ValueError):
            Residue(5, 3) + Residue(7, 3)

    def test_mod_reduce_handles_negatives(self):
        r = mod_reduce(-1, 5)
        assert (r.modulus, r.value) == (5, 4)
        assert not r.is_zero
        assert mod_reduce(10, 5).is_zero

    def test_validation(self):
        with pytest.raises(ValueError):
            Residue(5, 5)
        with pytest.raises(ValueError):
            Residue(0, 0)


class TestPrimes:
    def test_is_prime_against_sieve(self):
        sieve = set(primes_up_to(200))
        for n in range(-3, 201):
            assert is_prime(n) == (n in sieve)

    def test_primes_up_to(self):
        assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert primes_up_to(1) == []

    def test_next_prime(self):
        assert next_prime(1) == 2
        assert next_prime(2) == 3
        assert next_prime(7) == 11
        assert next_prime(13) == 17

    def test_smallest_prime_not_dividing(self):
        assert smallest_prime_not_dividing(1) == 2
        assert smallest_prime_not_dividing(2) == 3
        assert smallest_prime_not_dividing(10) == 3
        assert smallest_prime_not_dividing(6) == 5
        assert smallest_prime_not_dividing(30) == 7
        with pytest.raises(ValueError):
            smallest_prime_not_dividing(0)

    def test_distinct_prime_factors(self):
        assert distinct_prime_factors(1) == []
        assert distinct_prime_factors(12) == [2, 3]
        assert distinct_prime_factors(97) == [97]
        assert distinct_prime_factors(360) == [2, 3, 5]


class TestRationalHelpers:
    def test_common_denominator(self):
        assert common_denominator([Fraction(1, 2), Fraction(1, 3)]) == 6
        assert common_denominator([2, 3]) == 1
        assert common_denominator([NaryFraction(10, 7, 2)]) == 100
        with pytest.raises(ValueError):
            common_denominator([])

    def test_parse_format_round_trip(self):
        for text in ("5", "-7/100", "0", "22/7"):
            assert format_rational(parse_rational(text)) == text
