"""Engine facade: loads the knowledge base once and wires designer, assessor,
and planner together for the CLI and the HTTP service."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import assess, design, plan as planning, topics
from .config import EngineConfig
from .corpus import (CompoundCatalog, CuisineTable, FrequencyTable, Ingredient,
                     Recipe, RecipeIngredient, load_compound_catalog,
                     load_cuisines, load_ingredients, load_recipes,
                     build_frequency_table)

ENGINE_VERSION = "0.1.0"


def candidate_id(ingredients: frozenset[str]) -> str:
    digest = hashlib.sha1("|".join(sorted(ingredients)).encode()).hexdigest()
    return f"cand-{digest[:12]}"


def candidate_recipe(cand: design.Candidate, problem: design.DesignProblem) -> Recipe:
    return Recipe(id=candidate_id(cand.ingredients),
                  title=f"{problem.key_ingredient} {problem.dish_type}",
                  dish_type=problem.dish_type,
                  cuisine=sorted(problem.cuisines)[0],
                  ingredients=tuple(RecipeIngredient(ingredient_id=i)
                                    for i in sorted(cand.ingredients)),
                  provenance="generated")


@dataclass
class RankedCandidate:
    scored: assess.ScoredCandidate
    parents: tuple[str, ...]
    mutations: tuple[tuple[str, str], ...]

    def to_json(self) -> dict:
        return {"id": self.scored.recipe.id,
                "ingredients": sorted(self.scored.recipe.ingredient_ids()),
                "surprise": self.scored.surprise,
                "pleasantness": self.scored.pleasantness,
                "pairing": self.scored.pairing,
                "composite": self.scored.composite,
                "rank": self.scored.composite_rank,
                "reasoning": {"parent_recipes": list(self.parents),
                              "mutated_ingredients": [list(m) for m in self.mutations]}}


@dataclass
class Engine:
    config: EngineConfig
    recipes: list[Recipe]
    catalog: CompoundCatalog
    ingredients: dict[str, Ingredient]
    cuisines: CuisineTable
    freq: FrequencyTable
    surprise_model: assess.SurpriseModel
    pleasantness_model: assess.PleasantnessModel
    topic_model: Optional[topics.TopicModel] = None
    action_durations: dict[str, float] = field(default_factory=dict)

    @classmethod
    def load(cls, config: EngineConfig) -> "Engine":
        catalog = load_compound_catalog(config.compounds_path,
                                        config.ingredient_compounds_path)
        ingredients = load_ingredients(config.ingredients_path, catalog)
        result = load_recipes(config.recipes_path)
        cuisines = load_cuisines(config.cuisines_path)
        freq = build_frequency_table(result.recipes)
        surprise_model = assess.fit_surprise_prior(freq, config.smoothing,
                                                   catalog_ingredients=ingredients)
        pl_path = config.pleasantness_model_path()
        if pl_path.exists():
            pleasantness_model = assess.load_pleasantness_model(pl_path)
        else:
            pleasantness_model = assess.fit_pleasantness(catalog.labeled_compounds())
        topic_model = None
        tm_path = config.topic_model_path()
        if tm_path.exists():
            topic_model = topics.load_topic_model(tm_path)
        durations = planning.load_action_durations(config.action_durations_path)
        return cls(config=config, recipes=result.recipes, catalog=catalog,
                   ingredients=ingredients, cuisines=cuisines, freq=freq,
                   surprise_model=surprise_model,
                   pleasantness_model=pleasantness_model,
                   topic_model=topic_model, action_durations=durations)

    # -- problem finding -------------------------------------------------

    def ingredient_choices(self, dish_type: Optional[str] = None) -> list[dict]:
        """Catalog ingredients annotated with corpus-frequency quartile labels."""
        counts = {i: self.freq.unigram.get(i, 0) for i in self.ingredients}
        if dish_type:
            sub = [r for r in self.recipes if r.dish_type == dish_type]
            if sub:
                sub_freq = build_frequency_table(sub)
                counts = {i: sub_freq.unigram.get(i, 0) for i in self.ingredients}
        ordered = sorted(counts.values())

        def quartile(c: int) -> str:
            below = sum(1 for v in ordered if v < c)
            q = below / max(len(ordered) - 1, 1)
            if q >= 0.75:
                return "very common"
            if q >= 0.5:
                return "common"
            if q >= 0.25:
                return "uncommon"
            return "rare"

        return [{"id": i, "name": ing.name, "category": ing.category,
                 "corpus_count": counts[i], "commonness": quartile(counts[i])}
                for i, ing in sorted(self.ingredients.items())]

    def dish_types(self) -> list[str]:
        return sorted({r.dish_type for r in self.recipes})

    # -- generate + assess ----------------------------------------------

    def generate_and_rank(self, problem: design.DesignProblem, seed: int,
                          gen: Optional[design.GenerationConfig] = None,
                          weights: Optional[dict[str, float]] = None) -> list[RankedCandidate]:
        if gen is None:
            g = self.config.generation
            gen = design.GenerationConfig(population_size=g.population_size,
                                          generations=g.generations,
                                          mutation_rate=g.mutation_rate,
                                          crossover_rate=g.crossover_rate,
                                          seed=seed, output_cap=g.output_cap)
        cand_set = design.generate(problem, self.recipes, self.ingredients,
                                   self.cuisines, gen)
        cand_set = design.novelty_prefilter(cand_set, self.freq, threshold=1)
        by_id = {candidate_id(c.ingredients): c for c in cand_set.candidates}
        recipes = [candidate_recipe(c, problem) for c in cand_set.candidates]
        scored = assess.score_candidates(recipes, self.surprise_model,
                                         self.pleasantness_model, self.catalog)
        ranked = assess.rank_candidates(scored, weights or self.config.ranking_weights)
        out = []
        for sc in ranked:
            c = by_id[sc.recipe.id]
            out.append(RankedCandidate(scored=sc, parents=c.parents,
                                       mutations=c.mutations))
        return out

    # -- planning --------------------------------------------------------

    def plan_candidate(self, ingredient_ids: Sequence[str], dish_type: str,
                       cooks: int = 1) -> tuple[Recipe, planning.Plan]:
        proportioned = planning.estimate_proportions(ingredient_ids, self.recipes,
                                                     dish_type,
                                                     ingredients=self.ingredients)
        graph = planning.build_step_graph(proportioned, self.recipes,
                                          ingredients=self.ingredients,
                                          durations=self.action_durations)
        return proportioned, planning.schedule(graph, cooks)

    # -- menus -----------------------------------------------------------

    def ensure_topic_model(self, L: Optional[int] = None, iterations: Optional[int] = None,
                           seed: int = 0) -> topics.TopicModel:
        if self.topic_model is None:
            t = self.config.topics
            bags = topics.recipes_to_bags(self.recipes)
            self.topic_model = topics.fit_lda(bags,
                                              L=L or min(t.topics, len(bags)),
                                              hyper_beta=t.hyper_beta,
                                              iterations=iterations or t.iterations,
                                              seed=seed)
        return self.topic_model

    def suggest_menu(self, K: int, seed: int = 0) -> dict:
        model = self.ensure_topic_model(seed=seed)
        seeds, variety = topics.suggest_menu_parameters(model, self.recipes, K)
        return {"seeds": [{"key_ingredient": s.key_ingredient,
                           "dish_type": s.dish_type,
                           "exemplar_recipe_id": s.exemplar_recipe_id}
                          for s in seeds],
                "variety": variety}
