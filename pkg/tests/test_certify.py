import pytest

from makeev.errors import DomainError, ResourceLimitError
from makeev.models.schemas import CertificateStatus, TheoremPreset
from makeev.services import bounds, certify, presets, repbuild
from makeev.services.certify import CertificationService
from makeev.services.repbuild import equip, make_spec, ortho


def _preset(identifier, **params):
    return presets.make_preset(identifier, **params)


class TestPresets:
    def test_thm41_blocks(self):
        spec, d = presets.preset_spec(_preset("thm4.1", q=1, t=2))
        assert d == 10
        assert list(spec.blocks) == [
            equip(3, (1, 2, 3, 4), 2),
            equip(2, (2, 3, 4)),
            ortho([(1, 3), (1, 4), (2, 4)]),
            equip(1, (2, 3, 4)),
        ]
        assert repbuild.dimension(spec) == 40
        assert presets.resolve(_preset("thm4.1", q=1, t=2)).m == 2

    def test_prop43_blocks(self):
        instance = presets.resolve(_preset("prop4.3", q=1))
        assert (instance.m, instance.d) == (2, 10)
        assert list(instance.spec.blocks) == [
            equip(3, (1, 2, 3, 4), 2),
            equip(3, (2, 3, 4)),
            equip(1, (3, 4), 2),
            equip(1, (4,)),
        ]

    def test_prop54a_blocks(self):
        spec, n = presets.preset_spec(_preset("prop5.4a", k=3, q=0, t=1, d=1))
        assert n == 5
        assert list(spec.blocks) == [
            equip(2, (1, 2, 3)),
            equip(1, (1, 2, 3), 2),
            equip(1, (2, 3)),
            equip(1, (3,)),
        ]
        assert repbuild.dimension(spec) == 15

    def test_thm31_gapped_pairs(self):
        spec, d = presets.preset_spec(_preset("thm3.1", k=5, q=1, t=2))
        assert d == 10
        ortho_blocks = [b for b in spec.blocks if b.kind == "ortho"]
        assert ortho_blocks[0].pairs == ((1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5))

    def test_every_grid_preset_fills_kd(self):
        for preset in presets.reproduction_grid():
            instance = presets.resolve(preset)
            assert repbuild.dimension(instance.spec) == instance.k * instance.d, preset.label()

    @pytest.mark.parametrize("identifier,params", [
        ("thm3.1", {"k": 3, "q": 1, "t": 3}),
        ("thm3.1", {"k": 3, "q": 0, "t": 0}),
        ("thm3.1", {"q": 0, "t": 1}),
        ("thm3.2", {"k": 3, "q": 0, "t": 1}),
        ("thm3.2", {"k": 3, "q": 1, "t": 1}),
        ("thm4.1", {"k": 5, "q": 0, "t": 1}),
        ("thm4.2", {"q": 0, "t": 1}),
        ("prop4.3", {"q": 0}),
        ("prop5.4a", {"k": 2, "q": 0, "t": 1, "d": 0}),
    ])
    def test_out_of_range(self, identifier, params):
        with pytest.raises(DomainError):
            presets.resolve(_preset(identifier, **params))

    def test_unknown_identifier(self):
        with pytest.raises(DomainError):
            presets.make_preset("thm9.9")

    def test_preset_for(self):
        assert presets.preset_for(3, 2, 3) == TheoremPreset(identifier="thm3.1", k=3, q=1, t=1)
        assert presets.preset_for(1, 3, 4) == TheoremPreset(identifier="thm4.1", q=0, t=1)
        assert presets.preset_for(1, 3, 5) is None

    def test_label(self):
        assert _preset("thm3.1", k=3, q=0, t=1).label() == "thm3.1(k=3, q=0, t=1)"
        assert _preset("prop6.1a").label() == "prop6.1a"


class TestFullMonomial:
    def test_thm31_small(self):
        result = certify.certify_preset(_preset("thm3.1", k=3, q=0, t=1))
        assert result.status == CertificateStatus.CERTIFIED
        assert result.d == 3
        assert result.residual_support == 1
        assert result.max_degrees == [3, 3, 3]
        assert result.preset == "thm3.1(k=3, q=0, t=1)"

    def test_truncates_to_zero(self):
        spec = make_spec(3, [equip(2, (1, 2, 3))])
        result = certify.certify_full_monomial(spec, 2)
        assert result.status == CertificateStatus.NOT_CERTIFIED
        assert result.dim_U == 6
        assert result.residual_support == 0
        assert result.max_degrees == [-1, -1, -1]

    def test_dimension_mismatch(self):
        spec = make_spec(3, [equip(2, (1, 2, 3))])
        result = certify.certify_full_monomial(spec, 3)
        assert result.status == CertificateStatus.DIMENSION_MISMATCH
        assert not result.certified
        assert (result.dim_U, result.target_dimension) == (6, 9)
        assert result.max_degrees == []

    def test_padding_never_hides_a_mismatch(self):
        spec = make_spec(2, [equip(2, (1, 2)), equip(1, (2,), 2)])
        assert certify.certify_full_monomial(spec, 2).status == CertificateStatus.DIMENSION_MISMATCH

    def test_target_coefficient_cancels(self):
        # (t1 + t2)^2 = t1^2 + t2^2, and both terms vanish under caps 2
        spec = make_spec(2, [ortho([(1, 2)], 2)])
        result = certify.certify_full_monomial(spec, 1)
        assert result.status == CertificateStatus.NOT_CERTIFIED
        assert result.residual_support == 0

    def test_symmetric_padding_certifies(self):
        spec = make_spec(2, [equip(2, (1, 2)), equip(1, (1,))])
        assert certify.certify_full_monomial(spec, 2).certified

    def test_nonpositive_d(self):
        with pytest.raises(DomainError):
            certify.certify_full_monomial(make_spec(1, [equip(1, (1,))]), 0)

    @pytest.mark.parametrize("identifier,params,d", [
        ("thm3.2", {"k": 4, "q": 1, "t": 2}, 8),
        ("thm4.1", {"q": 0, "t": 1}, 5),
        ("thm4.2", {"q": 1, "t": 2}, 10),
        ("prop4.3", {"q": 1}, 10),
        ("prop5.4a", {"k": 2, "q": 0, "t": 1, "d": 1}, 4),
        ("prop5.4b", {"q": 0, "t": 1, "d": 1}, 7),
        ("prop6.1a", {}, 7),
        ("prop6.1b", {}, 9),
    ])
    def test_presets_certify(self, identifier, params, d):
        result = certify.certify_preset(_preset(identifier, **params))
        assert result.status == CertificateStatus.CERTIFIED
        assert result.d == d

    def test_small_l2_presets(self):
        for k in range(2, 5):
            for q in range(0, 2):
                for t in range(1, 2 ** q + 1):
                    result = certify.certify_preset(_preset("thm3.1", k=k, q=q, t=t))
                    assert result.certified, (k, q, t)
                    assert result.d == 2 ** q * (k + 1) - t

    def test_certified_presets_respect_lower_bound(self):
        for preset in presets.reproduction_grid(max_q=1, max_q_l2=1):
            instance = presets.resolve(preset)
            if instance.l < 2 or preset.identifier.startswith("prop5.4"):
                continue
            lower = bounds.makeev_lower(instance.m, instance.l, instance.k, instance.orthogonal)
            assert lower <= instance.d, preset.label()

    def test_resource_limit_is_raised(self, cell_limit):
        cell_limit(1000)
        with pytest.raises(ResourceLimitError):
            certify.certify_preset(_preset("prop6.1a"))


class TestIdealNonMembership:
    def test_examples(self):
        assert certify.bk_nonmembership(1, 2, 3, 4)
        assert not certify.bk_nonmembership(1, 2, 3, 2)
        assert not certify.bk_nonmembership(1, 1, 1, 0)
        assert certify.bk_nonmembership(1, 1, 1, 1)

    def test_monotone_in_d(self):
        for m, l, k in [(1, 2, 3), (2, 2, 3), (1, 3, 4)]:
            values = [certify.bk_nonmembership(m, l, k, d) for d in range(0, bounds.bk_upper(m, l, k) + 1)]
            first = values.index(True)
            assert all(values[first:])

    def test_staircase_is_weaker(self):
        for d in range(0, 5):
            if certify.bk_nonmembership(1, 2, 3, d):
                assert certify.bk_nonmembership(1, 2, 3, d, staircase=True)

    def test_holds_at_rough_upper_bound(self):
        for m in range(1, 4):
            for k in range(1, 5):
                for l in range(1, k + 1):
                    d = bounds.bk_upper(m, l, k)
                    assert certify.bk_nonmembership(m, l, k, d), (m, l, k)
                    assert certify.bk_nonmembership(m, l, k, d, staircase=True), (m, l, k)

    def test_invalid(self):
        with pytest.raises(DomainError):
            certify.bk_nonmembership(0, 1, 1, 1)
        with pytest.raises(DomainError):
            certify.bk_nonmembership(1, 3, 2, 1)
        with pytest.raises(DomainError):
            certify.bk_nonmembership(1, 1, 1, -1)


class TestSearch:
    def test_preset_policy(self):
        report = certify.minimal_certified_d(1, 2, 3, "paper")
        assert report.found and report.d == 3
        assert [c.d for c in report.candidates] == [2, 3]
        assert report.candidates[0].status == certify.SKIPPED
        assert report.spec.d == 3

        report = certify.minimal_certified_d(1, 3, 4, "paper")
        assert report.found and report.d == 5

        report = certify.minimal_certified_d(3, 2, 3, "paper")
        assert report.found and report.d == 7

    def test_ham_sandwich(self):
        report = certify.minimal_certified_d(1, 1, 1, "bisection-pad")
        assert report.found and report.d == 1
        assert report.d_min == 1

    def test_bisection_pad(self):
        report = certify.minimal_certified_d(1, 2, 2, "bisection-pad")
        assert report.found and report.d == 2
        assert list(report.spec.blocks) == [equip(2, (1, 2)), equip(1, (2,))]

    def test_below_certified_range(self):
        report = certify.minimal_certified_d(1, 2, 3, d_max=2)
        assert not report.found
        assert report.d is None
        assert report.candidates[0].reason

    def test_unrepresentable_d_is_skipped(self):
        report = certify.minimal_certified_d(1, 2, 3, "ortho-then-pad", d_max=2)
        assert not report.found
        assert report.candidates[0].status == certify.SKIPPED
        assert "exceed" in report.candidates[0].reason

    def test_never_below_lower_bound(self):
        for m, l, k in [(1, 2, 3), (2, 2, 3), (1, 2, 4), (1, 3, 4)]:
            report = certify.minimal_certified_d(m, l, k)
            assert report.found
            assert report.d >= bounds.makeev_lower(m, l, k)

    def test_same_answer_for_any_pool_width(self):
        serial = CertificationService(workers=1).minimal_certified_d(2, 2, 3, "bisection-pad")
        pooled = CertificationService(workers=3).minimal_certified_d(2, 2, 3, "bisection-pad")
        assert serial.d == pooled.d
        assert serial.candidates == pooled.candidates

    def test_policy_specs_fill_kd(self):
        for policy in ("bisection-pad", "ortho-then-pad"):
            for m, l, k in [(1, 2, 3), (2, 2, 4), (1, 3, 4)]:
                for d in range(1, 12):
                    spec, reason = certify.policy_spec(policy, m, l, k, d)
                    if spec is None:
                        assert reason
                    else:
                        assert repbuild.dimension(spec) == k * d

    def test_invalid_instance(self):
        with pytest.raises(DomainError):
            certify.minimal_certified_d(1, 3, 2)


class TestGrid:
    def test_results_in_input_order(self):
        grid = [_preset("prop6.1a"), _preset("thm3.1", k=2, q=0, t=1), _preset("thm4.1", q=0, t=1)]
        outcomes = CertificationService(workers=3).certify_grid(grid)
        assert [o.preset for o in outcomes] == grid
        assert all(o.result.certified for o in outcomes)

    def test_resource_skips_are_reported(self, cell_limit):
        cell_limit(5000)
        grid = [_preset("thm3.1", k=2, q=0, t=1), _preset("prop6.1b")]
        outcomes = certify.certify_grid(grid)
        assert outcomes[0].result.certified
        assert outcomes[1].result is None
        assert outcomes[1].skipped == certify.SKIPPED_RESOURCE

    @pytest.mark.slow
    def test_full_reproduction_grid(self):
        outcomes = certify.certify_grid(presets.reproduction_grid())
        failed = [o.preset.label() for o in outcomes if o.result is None or not o.result.certified]
        assert failed == []
