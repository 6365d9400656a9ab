import math

import numpy as np
import pytest

from monopsony_lab import (
    CensorKind,
    CensorRule,
    CensoringTooRestrictive,
    ModelDomainError,
    SingularDesign,
    StudyEstimate,
    fat_pet,
    funnel_points,
    naive_pooled_mean,
    simulate_studies,
    wls_fit,
)
from monopsony_lab.metareg import fat_pet_precision_form
from monopsony_lab.rng import SplitMix64

from oracles import splitmix64_reference, wls_grid_oracle

NEG_SIG = CensorRule(CensorKind.NEGATIVE_SIG, 0.1)


def _studies(pairs):
    return [StudyEstimate(e, s) for e, s in pairs]


def _random_studies(seed, n=40):
    rng = np.random.default_rng(seed)
    se = rng.uniform(0.05, 0.5, n)
    return _studies(zip(rng.normal(0.1, 1.0, n) * se + 0.2, se))


class TestWls:
    def test_exact_fit(self):
        fit = wls_fit([1, 2, 2], [1, 2, 2], [1, 1, 1])
        assert fit.intercept == pytest.approx(0.0, abs=1e-14)
        assert fit.slope == pytest.approx(1.0, abs=1e-14)

    def test_constant_outcome(self):
        b0, b1, _, _ = wls_fit([0.1, 0.4, 0.9, 1.3], [2.5] * 4, [1, 2, 3, 4])
        assert b0 == pytest.approx(2.5, abs=1e-14)
        assert b1 == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_grid_minimizer(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(0, 2, 25)
        y = 0.7 - 1.3 * x + rng.normal(0, 0.3, 25)
        w = rng.uniform(0.2, 3, 25)
        fit = wls_fit(x, y, w)
        b0, b1 = wls_grid_oracle(x, y, w, center=(0.0, 0.0), half_width=(3.0, 3.0))
        assert fit.intercept == pytest.approx(b0, abs=1e-6)
        assert fit.slope == pytest.approx(b1, abs=1e-6)

    def test_standard_errors_match_textbook_formula(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(0, 1, 30)
        y = 1 + 2 * x + rng.normal(0, 0.1, 30)
        w = rng.uniform(0.5, 2, 30)
        fit = wls_fit(x, y, w)
        X = np.column_stack([np.ones_like(x), x])
        W = np.diag(w)
        beta = np.linalg.solve(X.T @ W @ X, X.T @ W @ y)
        resid = y - X @ beta
        cov = (resid @ W @ resid) / 28 * np.linalg.inv(X.T @ W @ X)
        np.testing.assert_allclose([fit.intercept, fit.slope], beta, rtol=1e-12)
        np.testing.assert_allclose([fit.se_intercept, fit.se_slope], np.sqrt(np.diag(cov)), rtol=1e-10)

    def test_degenerate_design(self):
        with pytest.raises(SingularDesign):
            wls_fit([1, 1, 1], [1, 2, 3])

    @pytest.mark.parametrize(
        "args",
        [([1, 2], [1, 2], None), ([1, 2, 3], [1, 2], None), ([1, 2, 3], [1, 2, 3], [0, 0, 0]), ([1, 2, 3], [1, 2, 3], [1, -1, 1])],
    )
    def test_invalid_inputs(self, args):
        with pytest.raises(ModelDomainError):
            wls_fit(*args)


class TestFatPet:
    def test_proportional_effects(self):
        r = fat_pet(_studies([(1, 1), (2, 2), (1.5, 1.5)]))
        assert r.pet == pytest.approx(0.0, abs=1e-10)
        assert r.fat == pytest.approx(1.0, abs=1e-10)
        assert r.n == 3

    def test_constant_effect(self):
        r = fat_pet(_studies([(0.5, 0.1), (0.5, 0.2), (0.5, 0.3)]))
        assert r.pet == pytest.approx(0.5, abs=1e-10)
        assert r.fat == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("c0, c1", [(0.0, 0.0), (-0.13, 2.0), (0.8, -1.5), (3.0, 0.25)])
    def test_exact_line_recovered(self, c0, c1):
        se = np.linspace(0.05, 0.6, 17)
        r = fat_pet(_studies(zip(c0 + c1 * se, se)))
        assert r.pet == pytest.approx(c0, abs=1e-10)
        assert r.fat == pytest.approx(c1, abs=1e-10)

    @pytest.mark.parametrize("seed", range(20))
    def test_two_formulations_agree(self, seed):
        studies = _random_studies(seed)
        a, b = fat_pet(studies), fat_pet_precision_form(studies)
        assert abs(a.pet - b.pet) <= 1e-10
        assert abs(a.fat - b.fat) <= 1e-10
        assert a.se_pet == pytest.approx(b.se_pet, rel=1e-8)
        assert a.se_fat == pytest.approx(b.se_fat, rel=1e-8)

    def test_equal_standard_errors_rejected(self):
        with pytest.raises(SingularDesign, match="standard errors"):
            fat_pet(_studies([(0.1, 0.2), (0.3, 0.2), (0.5, 0.2)]))

    def test_too_few_studies(self):
        with pytest.raises(ModelDomainError):
            fat_pet(_studies([(0.1, 0.2), (0.3, 0.4)]))


class TestPooling:
    @pytest.mark.parametrize(
        "pairs, expected", [([(1, 1), (3, 1)], 2.0), ([(1, 1), (1, 0.5)], 1.0), ([(2, 1), (0, 0.5)], 0.4)]
    )
    def test_examples(self, pairs, expected):
        assert naive_pooled_mean(_studies(pairs)) == pytest.approx(expected, abs=1e-15)

    def test_empty(self):
        with pytest.raises(ModelDomainError):
            naive_pooled_mean([])

    def test_funnel(self):
        assert funnel_points(_studies([(0.2, 0.5)])) == [(0.2, 2.0)]
        assert funnel_points([]) == []

    def test_invalid_study(self):
        with pytest.raises(ModelDomainError):
            StudyEstimate(0.1, 0.0)
        with pytest.raises(ModelDomainError):
            StudyEstimate(math.inf, 0.1)


class TestGenerator:
    def test_matches_reference_transcription(self):
        g = SplitMix64(1234567)
        assert [g.next_u64() for _ in range(10)] == splitmix64_reference(1234567, 10)
        assert splitmix64_reference(1234567, 1)[0] == 0x599ED017FB08FC85

    def test_uniform_uses_top_53_bits(self):
        raw = splitmix64_reference(99, 3)
        g = SplitMix64(99)
        assert [g.uniform() for _ in range(3)] == [(x >> 11) / 2**53 for x in raw]

    def test_normal_moments(self):
        g = SplitMix64(3)
        z = np.array([g.normal() for _ in range(20000)])
        assert abs(z.mean()) < 0.03
        assert abs(z.std() - 1) < 0.03


class TestSimulate:
    def test_uncensored_first_draw(self):
        studies = simulate_studies(0.0, 5, 0.05, 0.5, CensorRule(), seed=7)
        assert len(studies) == 5
        u = [(x >> 11) / 2**53 for x in splitmix64_reference(7, 3)]
        se = 0.05 + 0.45 * u[0]
        z = math.sqrt(-2 * math.log(1 - u[1])) * math.cos(2 * math.pi * u[2])
        assert studies[0] == StudyEstimate(0.0 + se * z, se)

    def test_byte_identical(self):
        a = simulate_studies(0.0, 300, 0.05, 0.5, NEG_SIG, seed=11)
        b = simulate_studies(0.0, 300, 0.05, 0.5, NEG_SIG, seed=11)
        assert [(s.effect.hex(), s.se.hex()) for s in a] == [(s.effect.hex(), s.se.hex()) for s in b]
        assert a != simulate_studies(0.0, 300, 0.05, 0.5, NEG_SIG, seed=12)

    def test_seed_42_bias_fixture(self):
        studies = simulate_studies(0.0, 2000, 0.05, 0.5, NEG_SIG, seed=42)
        naive = naive_pooled_mean(studies)
        r = fat_pet(studies)
        # frozen from the first run of this generator
        assert naive == pytest.approx(-0.0595318045, abs=1e-9)
        assert r.pet == pytest.approx(0.0010751915, abs=1e-9)
        assert r.fat == pytest.approx(-0.4723407933, abs=1e-9)
        assert naive < -0.05 and r.fat < 0 and abs(r.pet) <= 0.05

    def test_uncensored_literature_is_unbiased(self):
        studies = simulate_studies(0.0, 2000, 0.05, 0.5, CensorRule(), seed=42)
        assert abs(naive_pooled_mean(studies)) < 0.01
        effect, precision = np.array(funnel_points(studies)).T
        assert abs(np.corrcoef(effect, precision)[0, 1]) < 0.05

    @pytest.mark.parametrize("seed", range(1, 21))
    def test_correction_beats_naive_pooling(self, seed):
        studies = simulate_studies(0.0, 2000, 0.05, 0.5, NEG_SIG, seed=seed)
        naive = naive_pooled_mean(studies)
        assert naive < 0
        assert abs(fat_pet(studies).pet) < abs(naive)

    def test_two_sided_rule(self):
        rule = CensorRule(CensorKind.TWO_SIDED_SIG, 0.0)
        studies = simulate_studies(0.0, 50, 0.05, 0.5, rule, seed=1)
        assert all(abs(s.effect / s.se) >= 1.96 for s in studies)

    def test_budget_exhaustion(self):
        rule = CensorRule(CensorKind.NEGATIVE_SIG, 0.0)
        with pytest.raises(CensoringTooRestrictive):
            simulate_studies(50.0, 3, 0.05, 0.5, rule, seed=1)

    @pytest.mark.parametrize("kwargs", [dict(se_lo=0.0), dict(se_lo=0.5, se_hi=0.1), dict(n=0)])
    def test_invalid_arguments(self, kwargs):
        args = {"true_effect": 0.0, "n": 5, "se_lo": 0.05, "se_hi": 0.5, **kwargs}
        with pytest.raises(ModelDomainError):
            simulate_studies(**args)

    def test_invalid_rule(self):
        with pytest.raises(ModelDomainError):
            CensorRule(CensorKind.NEGATIVE_SIG, 1.5)
