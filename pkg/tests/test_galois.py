"""Finite fields: construction, arithmetic, traces."""

import itertools

import pytest

from finiteqm.galois import gf_build, gf_trace, gf_trace_int


class TestBuild:
    def test_prime_field_convention(self):
        f = gf_build(2, 1)
        assert f.modulus == (0, 1)  # the "x - 0" modulus
        assert f.order == 2

    def test_unique_irreducible_quadratic_over_f2(self):
        assert gf_build(2, 2).modulus == (1, 1, 1)

    def test_lex_smallest_over_f3(self):
        # x^2 + 1 has no root mod 3 and precedes every other candidate
        assert gf_build(3, 2).modulus == (1, 0, 1)

    def test_not_prime(self):
        with pytest.raises(ValueError):
            gf_build(4, 1)

    def test_moduli_are_irreducible(self):
        # no roots in the base field for a few degrees (necessary condition,
        # and sufficient for degree <= 3)
        for p, ell in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2)]:
            f = gf_build(p, ell)
            for a in range(p):
                value = sum(c * a**k for k, c in enumerate(f.modulus)) % p
                assert value != 0


class TestArithmetic:
    def test_f4_generator_square(self):
        f4 = gf_build(2, 2)
        x = f4.element([0, 1])
        assert (x * x).coeffs == (1, 1)  # x^2 = x + 1

    def test_characteristic_two_self_cancellation(self):
        f4 = gf_build(2, 2)
        for a in f4.elements():
            assert (a + a).is_zero()

    def test_multiplicative_group_order(self):
        for p, ell in [(2, 2), (2, 3), (3, 2), (5, 1)]:
            f = gf_build(p, ell)
            q = f.order
            for a in f.elements():
                if not a.is_zero():
                    assert (a ** (q - 1)) == f.one()

    def test_enumeration_is_index_order(self):
        f = gf_build(3, 2)
        els = f.elements()
        assert [e.index for e in els] == list(range(9))
        assert els[5].coeffs == (2, 1)  # 5 = 1*3 + 2 with high digit = degree 1

    def test_field_mismatch(self):
        with pytest.raises(ValueError):
            gf_build(2, 2).one() + gf_build(3, 1).one()


class TestTrace:
    def test_identity_when_same_degree(self):
        f = gf_build(3, 2)
        for a in f.elements():
            assert gf_trace(a, 2) == a

    def test_f4_to_f2(self):
        f4 = gf_build(2, 2)
        x = f4.element([0, 1])
        assert gf_trace(x) == f4.one()  # x + x^2 = 1
        assert gf_trace_int(x) == 1

    def test_zero_everywhere(self):
        for p, ell in [(2, 2), (2, 4), (3, 2), (5, 2)]:
            f = gf_build(p, ell)
            assert gf_trace(f.zero()).is_zero()

    def test_rejects_bad_subfield(self):
        with pytest.raises(ValueError):
            gf_trace(gf_build(2, 4).one(), 3)

    def test_f4_trace_values(self):
        # gamma + gamma^2 over 0, 1, x, x+1 gives 0, 0, 1, 1
        f4 = gf_build(2, 2)
        assert [gf_trace_int(e) for e in f4.elements()] == [0, 0, 1, 1]

    @pytest.mark.parametrize("p,ell,m", [(2, 4, 2), (2, 6, 2), (2, 6, 3), (3, 4, 2)])
    def test_linearity_over_subfield(self, p, ell, m):
        field = gf_build(p, ell)
        subfield = [a for a in field.elements() if a.frobenius(m) == a]
        sample = field.elements()[:: max(1, field.order // 16)]
        for a, b in itertools.product(sample, repeat=2):
            for s in subfield[:4]:
                lhs = gf_trace(s * a + b, m)
                rhs = s * gf_trace(a, m) + gf_trace(b, m)
                assert lhs == rhs

    @pytest.mark.parametrize(
        "p,ell,m", [(2, 2, 1), (2, 4, 2), (3, 2, 1), (3, 4, 2), (2, 6, 3), (5, 2, 1)]
    )
    def test_surjective_with_equal_fibers(self, p, ell, m):
        field = gf_build(p, ell)
        subfield = {a for a in field.elements() if a.frobenius(m) == a}
        assert len(subfield) == p**m
        fibers = {}
        for a in field.elements():
            fibers.setdefault(gf_trace(a, m), 0)
            fibers[gf_trace(a, m)] += 1
        assert set(fibers) == subfield
        assert set(fibers.values()) == {p ** (ell - m)}

    @pytest.mark.parametrize("p,ell,m", [(2, 4, 2), (2, 6, 2), (2, 6, 3), (3, 4, 2)])
    def test_transitivity(self, p, ell, m):
        # trace to the prime field equals trace-to-subfield composed with
        # the subfield's own absolute trace, evaluated inside the big field
        field = gf_build(p, ell)
        for a in field.elements():
            inner = gf_trace(a, m)
            acc = inner
            power = inner
            for _ in range(m - 1):
                power = power.frobenius(1)
                acc = acc + power
            assert acc == gf_trace(a, 1)
