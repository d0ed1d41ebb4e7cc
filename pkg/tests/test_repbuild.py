import itertools

import pytest

from makeev.errors import DomainError
from makeev.services import gf2poly, repbuild
from makeev.services.gf2poly import DegreeCaps
from makeev.services.repbuild import equip, make_spec, ortho


def _orbit(pattern):
    return [tuple(p) for p in set(itertools.permutations(pattern))]


class TestBlockPolynomials:
    def test_r1_is_product_of_variables(self):
        caps = DegreeCaps.uniform(4, 3)
        assert repbuild.r_poly(1, (1, 2, 3, 4), caps).terms() == [(1, 1, 1, 1)]

    def test_r2_is_vandermonde(self):
        caps = DegreeCaps.uniform(4, 4)
        expected = gf2poly.from_terms(caps, _orbit((3, 2, 1, 0)))
        assert repbuild.r_poly(2, (1, 2, 3, 4), caps) == expected
        assert expected.support_size() == 24

    def test_r3_closed_form(self):
        caps = DegreeCaps.uniform(4, 5)
        assert repbuild.r_poly(3, (1, 2, 3, 4), caps) == repbuild.closed_r34(caps)

    def test_r_poly_weight_out_of_range(self):
        caps = DegreeCaps.uniform(3, 4)
        with pytest.raises(DomainError):
            repbuild.r_poly(4, (1, 2, 3), caps)
        with pytest.raises(DomainError):
            repbuild.r_poly(0, (1, 2, 3), caps)

    def test_equip_examples(self):
        caps = DegreeCaps.uniform(2, 4)
        assert gf2poly.render(repbuild.equip_poly(2, (1, 2), caps)) == "t1^2*t2 + t1*t2^2"

        caps3 = DegreeCaps.uniform(3, 5)
        p23 = repbuild.equip_poly(2, (1, 2, 3), caps3)
        assert p23 == gf2poly.from_terms(caps3, _orbit((3, 2, 1)))
        assert repbuild.equip_poly(3, (1, 2, 3), caps3) == repbuild.closed_p33(caps3)
        assert repbuild.closed_p33(caps3).support_size() == 6

    def test_equip_on_variable_subset(self):
        caps = DegreeCaps.uniform(3, 4)
        p = repbuild.equip_poly(2, (2, 3), caps)
        assert p == gf2poly.from_terms(caps, [(0, 2, 1), (0, 1, 2)])

    def test_equip_level_above_variables(self):
        with pytest.raises(DomainError):
            repbuild.equip_poly(3, (1, 2), DegreeCaps.uniform(2, 4))

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_p2k_closed_form(self, k):
        caps = DegreeCaps.uniform(k, k + 1)
        assert repbuild.equip_poly(2, range(1, k + 1), caps) == repbuild.closed_p2k(k, caps)

    def test_p2k_at_two(self):
        caps = DegreeCaps.uniform(2, 3)
        assert gf2poly.render(repbuild.closed_p2k(2, caps)) == "t1^2*t2 + t1*t2^2"

    def test_p34_closed_form(self):
        caps = DegreeCaps.uniform(4, 8)
        p34 = repbuild.equip_poly(3, (1, 2, 3, 4), caps)
        assert p34 == repbuild.closed_p34(caps)
        assert p34.support_size() == 96
        assert gf2poly.max_degrees(p34) == [7, 7, 7, 7]

    def test_p34_as_product_of_r(self):
        caps = DegreeCaps.uniform(4, 8)
        product = (
            repbuild.r_poly(1, (1, 2, 3, 4), caps)
            * repbuild.r_poly(2, (1, 2, 3, 4), caps)
            * repbuild.r_poly(3, (1, 2, 3, 4), caps)
        )
        assert product == repbuild.closed_p34(caps)

    def test_max_degree_of_p23(self):
        p23 = repbuild.equip_poly(2, (1, 2, 3), DegreeCaps.uniform(3, 4))
        assert gf2poly.max_degree(p23, 1) == 3

    def test_closed_form_needs_matching_k(self):
        with pytest.raises(DomainError):
            repbuild.closed_p34(DegreeCaps.uniform(3, 8))

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_full_ortho_is_r2(self, k):
        caps = DegreeCaps.uniform(k, k)
        pairs = repbuild.full_pairs(k)
        assert repbuild.ortho_poly(pairs, caps) == repbuild.r_poly(2, range(1, k + 1), caps)

    def test_ortho_small_cases(self):
        caps = DegreeCaps.uniform(3, 2)
        assert gf2poly.render(repbuild.ortho_poly([(1, 3)], caps)) == "t1 + t3"
        assert repbuild.ortho_poly([], caps) == gf2poly.one(caps)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_equip_matches_all_low_weight_forms(self, n):
        for level in range(1, n + 1):
            spec = make_spec(n, [equip(level, range(1, n + 1))])
            caps = DegreeCaps.uniform(n, repbuild.dimension(spec) + 1)
            forms = [gf2poly.linear_form(caps, row) for row in repbuild.linear_factors(spec)]
            assert repbuild.equip_poly(level, range(1, n + 1), caps) == gf2poly.product(forms, caps)

    @pytest.mark.parametrize("q,t", [(0, 1), (1, 1), (1, 2)])
    def test_p34_reduces_to_p24(self, q, t):
        m = 2 ** (q + 1) - t
        d = 7 * 2 ** q - 2 * t
        caps = DegreeCaps.uniform(4, d + 1)
        lhs = gf2poly.power(repbuild.equip_poly(3, (1, 2, 3, 4), caps), m)
        rhs = gf2poly.monomial(caps, (m, m, m, m)) * gf2poly.power(repbuild.equip_poly(2, (1, 2, 3, 4), caps), m)
        assert lhs == rhs


class TestSpecs:
    def test_dimensions(self):
        assert repbuild.dimension(make_spec(4, [equip(3, (1, 2, 3, 4))])) == 14

        spec_a = make_spec(4, [
            equip(3, (1, 2, 3, 4)),
            ortho(repbuild.full_pairs(4)),
            equip(1, (2, 3, 4)),
            equip(1, (3, 4), 2),
            equip(1, (4,)),
        ])
        assert repbuild.dimension(spec_a) == 28

        spec_b = make_spec(5, [
            equip(3, (1, 2, 3, 4, 5)),
            ortho(repbuild.full_pairs(5)),
            *repbuild.cascade(2, 5),
        ])
        assert repbuild.dimension(spec_b) == 45

    def test_linear_factor_count_is_dimension(self):
        spec = make_spec(4, [equip(2, (1, 2, 3, 4), 3), ortho([(1, 3), (2, 4)]), equip(1, (3, 4), 2)])
        rows = repbuild.linear_factors(spec)
        assert len(rows) == repbuild.dimension(spec) == 30 + 2 + 4
        assert rows[-1] == (0, 0, 0, 1)

    def test_invalid_blocks(self):
        with pytest.raises(DomainError):
            equip(3, (1, 2))
        with pytest.raises(DomainError):
            equip(1, (2, 1))
        with pytest.raises(DomainError):
            ortho([(2, 1)])
        with pytest.raises(DomainError):
            equip(1, (1,), mult=0)
        with pytest.raises(DomainError):
            make_spec(2, [equip(1, (1, 3))])

    def test_build_u_examples(self):
        spec = make_spec(3, [equip(2, (1, 2, 3)), ortho([(1, 3)]), equip(1, (2, 3))])
        p = repbuild.build_U(spec, DegreeCaps.uniform(3, 4))
        assert p.terms() == [(3, 3, 3)]

        spec = make_spec(4, [
            equip(3, (1, 2, 3, 4)),
            ortho(repbuild.full_pairs(4)),
            equip(1, (2, 3, 4)),
            equip(1, (3, 4), 2),
            equip(1, (4,)),
        ])
        p = repbuild.build_U(spec, DegreeCaps.uniform(4, 8))
        assert p.terms() == [(7, 7, 7, 7)]

        spec = make_spec(2, [equip(2, (1, 2)), equip(1, (2,))])
        p = repbuild.build_U(spec, DegreeCaps.uniform(2, 3))
        assert gf2poly.render(p) == "t1^2*t2^2"

    def test_build_u_matches_linear_factors(self):
        spec = make_spec(3, [equip(2, (1, 2, 3), 2), ortho([(1, 2)]), equip(1, (3,))])
        caps = DegreeCaps.uniform(3, 9)
        forms = [gf2poly.linear_form(caps, row) for row in repbuild.linear_factors(spec)]
        assert repbuild.build_U(spec, caps) == gf2poly.product(forms, caps)

    def test_build_u_caps_must_match_k(self):
        spec = make_spec(3, [equip(1, (1, 2, 3))])
        with pytest.raises(DomainError):
            repbuild.build_U(spec, DegreeCaps.uniform(2, 3))
