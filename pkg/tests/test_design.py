import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from muse import design
from muse.corpus import (CuisineEntry, FrequencyTable, Ingredient, Recipe,
                         RecipeIngredient, build_frequency_table)
from muse.design import (Candidate, CandidateSet, DesignProblem,
                         GenerationConfig, design_space_for_problem,
                         estimate_design_space, generate, novelty_prefilter)


def _recipe(rid, ids, dish="soup"):
    return Recipe(id=rid, title=rid, dish_type=dish,
                  ingredients=tuple(RecipeIngredient(ingredient_id=i) for i in ids))


def _world(n=10):
    cats = ["vegetable", "protein", "spice"]
    ingredients = {f"i{k}": Ingredient(id=f"i{k}", name=f"i{k}",
                                       category=cats[k % 3])
                   for k in range(n)}
    cuisines = {"test": CuisineEntry(name="test",
                                     typicality={f"i{k}": 0.1 * (k + 1)
                                                 for k in range(n)})}
    corpus = [_recipe("r1", ["i0", "i1", "i2"]),
              _recipe("r2", ["i0", "i3", "i4", "i5"]),
              _recipe("r3", ["i6", "i7"], dish="salad")]
    return ingredients, cuisines, corpus


PROBLEM = DesignProblem(key_ingredient="i0", cuisines=frozenset({"test"}),
                        dish_type="soup", min_ingredients=3, max_ingredients=5)


class TestDesignSpace:
    def test_tiny_hand_count(self):
        # key fixed; choose 1..2 of the other 3: C(3,1)+C(3,2) = 6
        assert estimate_design_space(4, 2, 3) == 6

    def test_single_size(self):
        assert estimate_design_space(5, 3, 3) == math.comb(4, 2)

    def test_cuisine_and_dish_factors(self):
        assert estimate_design_space(4, 2, 3, n_cuisines=2, n_dish_types=3) == 36

    def test_exceeds_1e24_at_catalog_scale(self):
        count = estimate_design_space(1000, 1, 12, n_cuisines=1, n_dish_types=1)
        assert isinstance(count, int)
        assert count > 10 ** 24

    def test_matches_exhaustive_enumeration(self):
        universe = list(range(7))
        subsets = [s for n in range(2, 5)
                   for s in combinations(universe[1:], n - 1)]
        assert estimate_design_space(7, 2, 4) == len(subsets)

    def test_problem_wrapper(self):
        ingredients, _, _ = _world(6)
        expect = estimate_design_space(6, PROBLEM.min_ingredients,
                                       PROBLEM.max_ingredients, n_cuisines=1)
        assert design_space_for_problem(ingredients, PROBLEM) == expect

    def test_empty_catalog_rejected(self):
        with pytest.raises(design.DesignError):
            estimate_design_space(0, 1, 2)


class TestProblemConfig:
    def test_bad_bounds_rejected(self):
        with pytest.raises(design.DesignError):
            DesignProblem(key_ingredient="x", cuisines=frozenset({"c"}),
                          dish_type="soup", min_ingredients=4, max_ingredients=2)

    def test_no_cuisine_rejected(self):
        with pytest.raises(design.DesignError):
            DesignProblem(key_ingredient="x", cuisines=frozenset(), dish_type="soup")

    def test_bad_rates_rejected(self):
        with pytest.raises(design.DesignError):
            GenerationConfig(mutation_rate=1.5)


class TestGenerate:
    def test_population_one_no_generations(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=1, generations=0, seed=1))
        assert out.populations_evaluated == 1
        for cand in out.candidates:
            assert "i0" in cand.ingredients

    def test_constraints_always_hold(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=30, generations=8, seed=3))
        assert out.candidates
        for cand in out.candidates:
            assert PROBLEM.key_ingredient in cand.ingredients
            assert PROBLEM.min_ingredients <= len(cand.ingredients) <= PROBLEM.max_ingredients
            assert cand.ingredients <= set(ingredients)

    def test_seed_determinism(self):
        ingredients, cuisines, corpus = _world()
        cfg = GenerationConfig(population_size=20, generations=5, seed=11)
        a = generate(PROBLEM, corpus, ingredients, cuisines, cfg)
        b = generate(PROBLEM, corpus, ingredients, cuisines, cfg)
        assert a.candidates == b.candidates

    def test_different_seeds_diverge(self):
        ingredients, cuisines, corpus = _world()
        a = generate(PROBLEM, corpus, ingredients, cuisines,
                     GenerationConfig(population_size=20, generations=5, seed=1))
        b = generate(PROBLEM, corpus, ingredients, cuisines,
                     GenerationConfig(population_size=20, generations=5, seed=2))
        assert a.ingredient_sets() != b.ingredient_sets()

    def test_corpus_identical_sets_filtered(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=40, generations=6, seed=2))
        corpus_sets = {r.ingredient_ids() for r in corpus}
        assert all(c.ingredients not in corpus_sets for c in out.candidates)

    def test_no_duplicate_outputs(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=40, generations=6, seed=2))
        sets = out.ingredient_sets()
        assert len(sets) == len(set(sets))

    def test_mutations_stay_in_category(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=40, generations=10,
                                        mutation_rate=0.9, seed=7))
        saw = 0
        for cand in out.candidates:
            for replaced, replacement in cand.mutations:
                saw += 1
                if replaced in ingredients:
                    assert ingredients[replaced].category == \
                        ingredients[replacement].category
        assert saw > 0

    def test_missing_dish_type_warns(self):
        ingredients, cuisines, corpus = _world()
        odd = DesignProblem(key_ingredient="i0", cuisines=frozenset({"test"}),
                            dish_type="flambé", min_ingredients=3, max_ingredients=5)
        with pytest.warns(UserWarning, match="dish type"):
            out = generate(odd, corpus, ingredients, cuisines,
                           GenerationConfig(population_size=5, generations=0, seed=0))
        assert out.candidates

    def test_unknown_key_rejected(self):
        ingredients, cuisines, corpus = _world()
        bad = DesignProblem(key_ingredient="plutonium", cuisines=frozenset({"test"}),
                            dish_type="soup")
        with pytest.raises(design.DesignError):
            generate(bad, corpus, ingredients, cuisines, GenerationConfig())

    def test_output_cap_respected(self):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=40, generations=10,
                                        seed=5, output_cap=7))
        assert len(out.candidates) <= 7

    def test_fitness_hook_biases_population(self):
        ingredients, cuisines, corpus = _world()
        cfg = GenerationConfig(population_size=30, generations=8, seed=4)
        plain = generate(PROBLEM, corpus, ingredients, cuisines, cfg)
        biased = generate(PROBLEM, corpus, ingredients, cuisines, cfg,
                          fitness=lambda s: float("i9" in s))
        assert plain.ingredient_sets() != biased.ingredient_sets()

    @given(seed=st.integers(0, 2 ** 16), pop=st.integers(1, 15),
           gens=st.integers(0, 4))
    @settings(max_examples=25, deadline=None)
    def test_invariants_random_configs(self, seed, pop, gens):
        ingredients, cuisines, corpus = _world()
        out = generate(PROBLEM, corpus, ingredients, cuisines,
                       GenerationConfig(population_size=pop, generations=gens,
                                        seed=seed))
        for cand in out.candidates:
            assert PROBLEM.key_ingredient in cand.ingredients
            assert PROBLEM.min_ingredients <= len(cand.ingredients) <= PROBLEM.max_ingredients


class TestNoveltyPrefilter:
    def _cands(self, sets):
        return CandidateSet(problem=PROBLEM,
                            candidates=[Candidate(ingredients=frozenset(s))
                                        for s in sets])

    def test_all_known_pairs_dropped(self):
        freq = build_frequency_table([_recipe("r", ["a", "b", "c"])])
        out = novelty_prefilter(self._cands([{"a", "b"}, {"a", "b", "c"}]), freq)
        assert out.candidates == []

    def test_one_new_pair_kept(self):
        freq = build_frequency_table([_recipe("r", ["a", "b"])])
        out = novelty_prefilter(self._cands([{"a", "b", "z"}]), freq)
        assert len(out.candidates) == 1

    def test_matches_brute_force(self):
        rng = random.Random(6)
        corpus = [_recipe(f"r{k}", rng.sample("abcdefgh", rng.randint(2, 5)))
                  for k in range(12)]
        freq = build_frequency_table(corpus)
        sets = [frozenset(rng.sample("abcdefgh", rng.randint(2, 4)))
                for _ in range(30)]
        out = novelty_prefilter(self._cands(sets), freq)

        def known(s):
            return all(freq.pair_count(a, b) >= 1
                       for a, b in combinations(sorted(s), 2))

        expect = [s for s in sets if not known(s)]
        assert [c.ingredients for c in out.candidates] == expect

    def test_threshold_validated(self):
        freq = build_frequency_table([_recipe("r", ["a", "b"])])
        with pytest.raises(design.DesignError):
            novelty_prefilter(self._cands([{"a", "b"}]), freq, threshold=0)
