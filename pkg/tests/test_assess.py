import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import gammaln
from scipy.stats import beta as beta_dist

from muse import assess
from muse.assess import (PleasantnessModel, ScoredCandidate, SurpriseModel,
                         bayesian_surprise, compound_pleasantness, dirichlet_kl,
                         fit_pleasantness, fit_surprise_prior, pairing_score,
                         rank_candidates, recipe_pleasantness)
from muse.corpus import Compound, FrequencyTable, Recipe, RecipeIngredient


def kl_dirichlet_numeric(alpha_post, alpha_prior):
    """Independent oracle: reduce the simplex KL integral to 1-D integrals via
    the Beta marginals of the posterior Dirichlet.

    KL = log B(prior) - log B(post) + sum_i (a1_i - a0_i) * E_post[log x_i],
    with E_post[log x_i] computed by numerical quadrature (no digamma).
    """
    def log_beta_fn(a):
        return float(sum(gammaln(ai) for ai in a) - gammaln(sum(a)))

    s1 = float(sum(alpha_post))
    kl = log_beta_fn(alpha_prior) - log_beta_fn(alpha_post)
    for a1, a0 in zip(alpha_post, alpha_prior):
        e_log, err = quad(lambda t: math.log(t) * beta_dist.pdf(t, a1, s1 - a1),
                          0.0, 1.0, limit=200)
        assert err < 1e-7
        kl += (a1 - a0) * e_log
    return kl


def _recipe(ids, qtys=None):
    from fractions import Fraction
    items = []
    for n, i in enumerate(ids):
        q = Fraction(qtys[n]).limit_denominator() if qtys else None
        items.append(RecipeIngredient(ingredient_id=i, quantity=q))
    return Recipe(id="-".join(ids), title="t", dish_type="soup",
                  ingredients=tuple(items))


class TestSurprisePrior:
    def test_additive_rule(self):
        freq = FrequencyTable(unigram={"a": 1, "b": 1}, pair={}, total_recipes=2)
        model = fit_surprise_prior(freq, smoothing=1.0)
        assert model.alpha == {"a": 2.0, "b": 2.0}
        assert model.unseen_mass == 1.0

    def test_zero_count_catalog_ingredient_gets_mass(self):
        freq = FrequencyTable(unigram={"a": 3}, pair={}, total_recipes=3)
        model = fit_surprise_prior(freq, 0.5, catalog_ingredients=["a", "c"])
        assert model.alpha["c"] == 0.5

    def test_alpha0_identity_on_bundled_corpus(self, freq, ingredients):
        model = fit_surprise_prior(freq, 0.5, catalog_ingredients=ingredients)
        expect = sum(freq.unigram.values()) + 0.5 * len(ingredients) + 0.5
        assert model.alpha0 == pytest.approx(expect, rel=1e-9)

    def test_nonpositive_smoothing_rejected(self):
        freq = FrequencyTable(unigram={"a": 1}, pair={}, total_recipes=1)
        with pytest.raises(assess.AssessmentError):
            fit_surprise_prior(freq, 0.0)


class TestBayesianSurprise:
    def test_two_category_hand_case(self):
        # KL(Dir(2,1) || Dir(1,1)) = log 2 - 1/2
        model = SurpriseModel(alpha={"a": 1.0, "b": 1.0}, unseen_mass=0.5)
        value = bayesian_surprise(model, _recipe(["a"]))
        assert value == pytest.approx(math.log(2) - 0.5, abs=1e-12)
        assert value == pytest.approx(0.1931, abs=1e-4)

    def test_matches_numeric_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            k = rng.integers(2, 6)
            prior = rng.uniform(0.2, 10.0, size=k)
            counts = rng.integers(0, 4, size=k)
            post = prior + counts
            assert dirichlet_kl(post, prior) == pytest.approx(
                kl_dirichlet_numeric(post, prior), abs=1e-6)

    def test_empty_update_is_zero(self):
        prior = np.array([2.0, 3.0, 4.0])
        assert dirichlet_kl(prior, prior) == 0.0

    def test_rare_beats_common(self):
        model = SurpriseModel(alpha={"common": 50.0, "rare": 0.5}, unseen_mass=0.5)
        assert bayesian_surprise(model, _recipe(["rare"])) > \
            bayesian_surprise(model, _recipe(["common"]))

    def test_unseen_ingredient_scores_positive(self):
        model = SurpriseModel(alpha={"a": 5.0}, unseen_mass=0.5)
        assert bayesian_surprise(model, _recipe(["martian-moss"])) > 0

    def test_empty_recipe_rejected(self):
        model = SurpriseModel(alpha={"a": 1.0}, unseen_mass=0.5)
        with pytest.raises(assess.AssessmentError):
            bayesian_surprise(model, [])

    @given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=5, unique=True))
    @settings(max_examples=60)
    def test_nonnegative(self, ids):
        model = SurpriseModel(alpha={c: 1.0 + i for i, c in enumerate("abcd")},
                              unseen_mass=0.3)
        assert bayesian_surprise(model, ids) >= 0.0

    def test_monotone_in_pseudo_count(self):
        # skewed prior: surprise of a single-ingredient recipe falls with its count
        alphas = {f"i{n}": float(2 ** n) for n in range(8)}
        model = SurpriseModel(alpha=alphas, unseen_mass=0.5)
        values = [bayesian_surprise(model, [f"i{n}"]) for n in range(8)]
        assert values == sorted(values, reverse=True)


def _compound(cid, feats, label=None):
    return Compound(id=cid, name=cid, features=feats, rated_pleasantness=label)


def _linear_compounds(n, coef, intercept, noise, rng, n_features):
    out = []
    for i in range(n):
        feats = {f"f{j}": float(rng.normal()) for j in range(n_features)}
        y = intercept + sum(coef.get(f, 0.0) * v for f, v in feats.items())
        y += float(rng.normal(0, noise)) if noise else 0.0
        out.append(_compound(f"c{i}", feats, label=y))
    return out


class TestFitPleasantness:
    def test_exact_linear_recovery(self):
        rng = np.random.default_rng(3)
        comps = _linear_compounds(30, {"f0": 2.0}, 3.0, 0.0, rng, 2)
        model = fit_pleasantness(comps, cv_mode="leave-one-out")
        assert model.selected_features == ("f0",)
        assert model.coefficients[0] == pytest.approx(2.0, abs=1e-6)
        assert model.intercept == pytest.approx(3.0, abs=1e-6)
        assert model.cv_error <= 1e-9

    def test_constant_labels(self):
        comps = [_compound(f"c{i}", {"f0": float(i), "f1": float(-i)}, label=0.4)
                 for i in range(12)]
        model = fit_pleasantness(comps, cv_mode="leave-one-out")
        assert model.selected_features == ()
        assert model.intercept == pytest.approx(0.4)

    def test_synthetic_70x20_recovery(self):
        rng = np.random.default_rng(42)
        true_coef = {"f0": 1.5, "f4": -1.2, "f7": 0.8, "f12": 2.0, "f19": -0.6}
        comps = _linear_compounds(70, true_coef, 0.5, 0.05, rng, 20)
        model = fit_pleasantness(comps, cv_mode="ten-fold", seed=0)
        assert set(true_coef) <= set(model.selected_features)
        fitted = dict(zip(model.selected_features, model.coefficients))
        errs = [(fitted.get(f, 0.0) - c) ** 2 for f, c in true_coef.items()]
        assert math.sqrt(sum(errs) / len(errs)) <= 0.1

    def test_too_few_labels_rejected(self):
        comps = _linear_compounds(5, {"f0": 1.0}, 0.0, 0.0,
                                  np.random.default_rng(0), 2)
        with pytest.raises(assess.AssessmentError):
            fit_pleasantness(comps)


class TestCompoundPleasantness:
    MODEL = PleasantnessModel(selected_features=("f0",), coefficients=(0.5,),
                              intercept=0.2, cv_mode="leave-one-out", cv_error=0.0)

    def test_zero_features_gives_intercept(self):
        assert compound_pleasantness(self.MODEL, _compound("c", {"f0": 0.0})) == 0.2

    def test_clamped_to_one(self):
        assert compound_pleasantness(self.MODEL, _compound("c", {"f0": 2.0})) == 1.0

    def test_missing_feature_rejected(self):
        with pytest.raises(assess.AssessmentError):
            compound_pleasantness(self.MODEL, _compound("c", {"f9": 1.0}))

    def test_training_residuals_small_on_bundled_fit(self, catalog):
        model = fit_pleasantness(catalog.labeled_compounds(), cv_mode="leave-one-out")
        resid = [abs(compound_pleasantness(model, c) - c.rated_pleasantness)
                 for c in catalog.labeled_compounds()]
        assert max(resid) <= 3.0 * math.sqrt(model.cv_error) + 0.05


class TestRecipePleasantness:
    def test_single_compound_identity(self, catalog):
        from muse.corpus import CompoundCatalog
        comp = _compound("c1", {"f0": 0.0})
        cat = CompoundCatalog(compounds={"c1": comp},
                              profiles={"x": {"c1": 10.0}}, feature_names=("f0",))
        model = TestCompoundPleasantness.MODEL
        assert recipe_pleasantness(_recipe(["x"]), cat, model) == \
            pytest.approx(compound_pleasantness(model, comp))

    def test_equal_ppm_mixture(self):
        from muse.corpus import CompoundCatalog
        model = PleasantnessModel(selected_features=("f0",), coefficients=(1.0,),
                                  intercept=0.0, cv_mode="leave-one-out", cv_error=0.0)
        cat = CompoundCatalog(
            compounds={"lo": _compound("lo", {"f0": 0.2}),
                       "hi": _compound("hi", {"f0": 0.8})},
            profiles={"x": {"lo": 50.0, "hi": 50.0}}, feature_names=("f0",))
        assert recipe_pleasantness(_recipe(["x"]), cat, model) == pytest.approx(0.5)

    def test_matches_hand_rolled_weighted_mean(self, catalog, recipes):
        model = fit_pleasantness(catalog.labeled_compounds(), cv_mode="leave-one-out")
        recipe = recipes[0]
        # independent recomputation with plain python arithmetic
        vals, weights = [], []
        for ri in recipe.ingredients:
            profile = {c: p for c, p in catalog.profiles[ri.ingredient_id].items()
                       if p > 0}
            total = sum(profile.values())
            vals.append(sum(p * compound_pleasantness(model, catalog.compounds[c])
                            for c, p in profile.items()) / total)
            weights.append(float(ri.quantity))
        expect = sum(v * w for v, w in zip(vals, weights)) / sum(weights)
        assert recipe_pleasantness(recipe, catalog, model) == pytest.approx(expect, abs=1e-9)

    def test_profileless_ingredient_excluded(self):
        from muse.corpus import CompoundCatalog
        cat = CompoundCatalog(compounds={"c1": _compound("c1", {"f0": 0.0})},
                              profiles={"x": {"c1": 5.0}, "y": {}},
                              feature_names=("f0",))
        model = TestCompoundPleasantness.MODEL
        with pytest.warns(UserWarning, match="excluded"):
            value = recipe_pleasantness(_recipe(["x", "y"]), cat, model)
        assert value == pytest.approx(0.2)

    def test_all_excluded_is_error(self):
        from muse.corpus import CompoundCatalog
        cat = CompoundCatalog(compounds={}, profiles={}, feature_names=())
        model = TestCompoundPleasantness.MODEL
        with pytest.raises(assess.AssessmentError), pytest.warns(UserWarning):
            recipe_pleasantness(_recipe(["x"]), cat, model)


class TestPairing:
    def _catalog(self, profiles):
        from muse.corpus import CompoundCatalog
        return CompoundCatalog(compounds={}, profiles=profiles, feature_names=())

    def test_one_shared_of_one_pair(self):
        cat = self._catalog({"a": {"x": 1.0, "y": 1.0}, "b": {"y": 1.0, "z": 1.0}})
        assert pairing_score(_recipe(["a", "b"]), cat) == 1.0

    def test_disjoint_profiles(self):
        cat = self._catalog({"a": {"x": 1.0}, "b": {"y": 1.0}})
        assert pairing_score(_recipe(["a", "b"]), cat) == 0.0

    def test_single_ingredient_is_zero(self):
        cat = self._catalog({"a": {"x": 1.0}})
        assert pairing_score(_recipe(["a"]), cat) == 0.0

    def test_matches_exhaustive_enumeration(self, catalog, recipes):
        recipe = recipes[3]
        ids = sorted(recipe.ingredient_ids())
        pairs = list(combinations(ids, 2))
        expect = sum(len({c for c, p in catalog.profiles[a].items() if p > 0}
                         & {c for c, p in catalog.profiles[b].items() if p > 0})
                     for a, b in pairs) / len(pairs)
        assert pairing_score(recipe, catalog) == pytest.approx(expect)


class TestRanking:
    def _candidates(self, rows):
        return [ScoredCandidate(recipe=_recipe([f"i{n}"]), surprise=s,
                                pleasantness=p, pairing=q)
                for n, (s, p, q) in enumerate(rows)]

    def test_single_candidate_rank_one(self):
        out = rank_candidates(self._candidates([(1.0, 0.5, 2.0)]))
        assert out[0].composite_rank == 1

    def test_single_weight_reduces_to_sort(self):
        cands = self._candidates([(3.0, 0.1, 0.0), (1.0, 0.9, 5.0), (2.0, 0.5, 1.0)])
        out = rank_candidates(cands, {"surprise": 1.0})
        assert [c.surprise for c in out] == [3.0, 2.0, 1.0]

    def test_matches_brute_force_composite(self):
        rng = np.random.default_rng(5)
        rows = [(float(rng.uniform(0, 3)), float(rng.uniform()), float(rng.uniform(0, 8)))
                for _ in range(10)]
        out = rank_candidates(self._candidates(rows), {"surprise": 1, "pleasantness": 1, "pairing": 1})

        def norm(vs):
            lo, hi = min(vs), max(vs)
            return [(v - lo) / (hi - lo) for v in vs]

        s, p, q = (norm([r[k] for r in rows]) for k in range(3))
        composite = [a + b + c for a, b, c in zip(s, p, q)]
        expect = sorted(range(10), key=lambda i: (-composite[i], f"i{i}"))
        got = [int(c.recipe.id[1:]) for c in out]
        assert got == expect

    def test_permutation_invariant(self):
        cands = self._candidates([(3.0, 0.1, 0.0), (1.0, 0.9, 5.0), (2.0, 0.5, 1.0)])
        a = rank_candidates(cands)
        b = rank_candidates(list(reversed(cands)))
        assert [c.recipe.id for c in a] == [c.recipe.id for c in b]

    def test_constant_metric_neutralized(self):
        cands = self._candidates([(1.0, 0.2, 7.0), (1.0, 0.8, 7.0)])
        out = rank_candidates(cands)
        assert out[0].pleasantness == 0.8

    def test_bad_weights_rejected(self):
        cands = self._candidates([(1.0, 0.2, 7.0)])
        with pytest.raises(assess.AssessmentError):
            rank_candidates(cands, {"surprise": 0.0, "pleasantness": 0.0, "pairing": 0.0})


class TestModelPersistence:
    def test_surprise_roundtrip(self, tmp_path):
        model = SurpriseModel(alpha={"a": 1.5, "b": 2.0}, unseen_mass=0.5)
        assess.save_model(model, tmp_path / "s.json")
        assert assess.load_surprise_model(tmp_path / "s.json") == model

    def test_pleasantness_roundtrip(self, tmp_path):
        model = PleasantnessModel(selected_features=("f0", "f3"),
                                  coefficients=(1.0, -0.5), intercept=0.1,
                                  cv_mode="ten-fold", cv_error=0.02)
        assess.save_model(model, tmp_path / "p.json")
        loaded = assess.load_pleasantness_model(tmp_path / "p.json")
        assert loaded.selected_features == model.selected_features
        assert loaded.coefficients == model.coefficients
