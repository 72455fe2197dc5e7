"""Exact cyclotomic arithmetic: worked values, field axioms, square roots."""

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import cyclotomics, embed, nonzero_cyclotomics
from finiteqm.cyclotomic import (
    Cyclotomic,
    FieldMismatchError,
    SqrtConstructionError,
    canonical_dumps,
    conductor_for,
    cyclotomic_polynomial,
    euler_phi,
    sqrt_embed,
    sqrt_rational,
    zeta,
)

M = 24  # shared working conductor for the property tests


class TestReduction:
    def test_fourth_root_squares_to_minus_one(self):
        i = Cyclotomic.make(4, [0, 1])
        assert (i * i).rational() == -1

    def test_phi8_relation(self):
        z = Cyclotomic.make(8, [0, 0, 0, 0, 1])  # x^4 mod Phi_8 = x^4 + 1
        assert z.rational() == -1

    def test_x4_mod_phi12(self):
        # long division of x^4 by Phi_12 = x^4 - x^2 + 1 leaves x^2 - 1
        z = Cyclotomic.make(12, [0, 0, 0, 0, 1])
        assert z.coeffs == (Fraction(-1), Fraction(0), Fraction(1), Fraction(0))
        # numeric cross-check of the same identity
        assert abs(embed(z) - embed(zeta(12)) ** 4) < 1e-9

    def test_phi_polynomials(self):
        assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
        assert cyclotomic_polynomial(24) == (1, 0, 0, 0, -1, 0, 0, 0, 1)

    def test_euler_phi(self):
        assert [euler_phi(m) for m in (1, 2, 8, 12, 24, 120)] == [1, 1, 4, 4, 8, 32]

    @given(cyclotomics(M))
    def test_make_is_idempotent_on_canonical_coeffs(self, z):
        assert Cyclotomic.make(M, z.coeffs) == z


class TestArithmetic:
    def test_conj_of_i(self):
        i = Cyclotomic.make(4, [0, 1])
        assert i.conj() == -i

    def test_inverse_of_root_of_unity(self):
        z8 = zeta(8)
        assert z8.inv() == z8**7
        assert (z8 * z8**7).rational() == 1

    def test_omega_sum_vanishes(self):
        w = zeta(3)
        assert (1 + w + w * w).is_zero()

    def test_conductor_mismatch_raises(self):
        with pytest.raises(FieldMismatchError):
            zeta(8) + zeta(12)

    def test_zero_inversion_raises(self):
        with pytest.raises(ZeroDivisionError):
            Cyclotomic.zero(8).inv()

    @given(cyclotomics(M), cyclotomics(M), cyclotomics(M))
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)

    @given(nonzero_cyclotomics(M))
    def test_multiplicative_inverse(self, a):
        assert (a * a.inv()).rational() == 1

    @given(cyclotomics(M), cyclotomics(M))
    def test_conj_is_ring_homomorphism(self, a, b):
        assert (a + b).conj() == a.conj() + b.conj()
        assert (a * b).conj() == a.conj() * b.conj()

    @given(cyclotomics(M))
    def test_conj_is_involution(self, a):
        assert a.conj().conj() == a

    def test_conj_inverts_roots_of_unity(self):
        for k in range(24):
            z = zeta(24, k)
            assert (z.conj() * z).rational() == 1

    @given(cyclotomics(M))
    def test_norm_is_conj_invariant(self, z):
        w = z * z.conj()
        assert w.conj() == w

    @given(cyclotomics(M), cyclotomics(M))
    def test_embedding_oracle_agrees(self, a, b):
        assert abs(embed(a * b) - embed(a) * embed(b)) < 1e-6
        assert abs(embed(a + b) - (embed(a) + embed(b))) < 1e-6

    def test_power_and_division(self):
        z = zeta(24, 5)
        assert z**-3 == (z**3).inv()
        a = Cyclotomic.make(24, [Fraction(1, 2), 3, 0, Fraction(-2, 7)])
        assert (a / z) * z == a


class TestRationality:
    def test_constant_is_rational(self):
        assert Cyclotomic.from_rational(8, Fraction(1, 2)).rational() == Fraction(1, 2)

    def test_sqrt2_combination_is_irrational(self):
        s = zeta(8) + zeta(8, 7)  # sqrt(2)
        assert s.rational() is None
        assert s.coeffs == (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))

    def test_omega_pair_sums_to_minus_one(self):
        assert (zeta(3) + zeta(3, 2)).rational() == -1


class TestSqrtEmbed:
    def test_sqrt2_in_eighth_field(self):
        r = sqrt_embed(2, 8)
        assert r == zeta(8) + zeta(8, 7)
        assert (r * r).rational() == 2

    def test_sqrt3_in_twelfth_field(self):
        r = sqrt_embed(3, 12)
        # -i(2 zeta_3 + 1) with i = zeta_12^3 and zeta_3 = zeta_12^4
        expected = -zeta(12, 3) * (2 * zeta(12, 4) + 1)
        assert r == expected
        assert (r * r).rational() == 3

    def test_perfect_square(self):
        assert sqrt_embed(4, 8).rational() == 2
        assert sqrt_embed(9, 12).rational() == 3

    def test_squares_back_up_to_25(self):
        for n in range(1, 26):
            m = conductor_for(n)
            r = sqrt_embed(n, m)
            assert (r * r).rational() == n
            assert embed(r).real > 0

    def test_field_too_small(self):
        with pytest.raises(SqrtConstructionError):
            sqrt_embed(2, 3)
        with pytest.raises(SqrtConstructionError):
            sqrt_embed(5, 24)

    def test_sqrt_rational(self):
        r = sqrt_rational(Fraction(3, 2), 24)
        assert (r * r).rational() == Fraction(3, 2)


class TestConductor:
    def test_small_dimensions(self):
        assert conductor_for(2) == 24
        assert conductor_for(3) == 24
        assert conductor_for(5) == 120

    def test_dimension_five_field_contents(self):
        m = conductor_for(5)
        tau = -zeta(m, m // 10)
        assert (tau**5).rational() == 1  # odd dimension: order 5
        assert (zeta(m, m // 5) ** 5).rational() == 1
        assert (sqrt_embed(5, m) ** 2).rational() == 5


class TestSerialization:
    def test_canonical_form(self):
        i = Cyclotomic.make(4, [0, 1])
        assert canonical_dumps(i.to_json()) == '{"c":["0/1","1/1"],"m":4}'

    @given(cyclotomics(M))
    def test_roundtrip(self, z):
        assert Cyclotomic.from_json(z.to_json()) == z

    @given(cyclotomics(M))
    def test_byte_stability(self, z):
        assert canonical_dumps(z.to_json()) == canonical_dumps(
            Cyclotomic.from_json(z.to_json()).to_json()
        )
