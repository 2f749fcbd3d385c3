"""Generation of candidate ingredient sets by evolutionary search.

The population is seeded from corpus recipes of the requested dish type with
the key ingredient injected; crossover exchanges random ingredient subsets
between parents and mutation substitutes a same-category ingredient weighted
by cuisine typicality.  Every candidate is repaired back into its constraints.
"""

from __future__ import annotations

import math
import random
import warnings as _warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .corpus import CuisineTable, FrequencyTable, Ingredient, Recipe


class DesignError(Exception):
    pass


@dataclass(frozen=True)
class DesignProblem:
    key_ingredient: str
    cuisines: frozenset[str]
    dish_type: str
    min_ingredients: int = 3
    max_ingredients: int = 12

    def __post_init__(self):
        if not self.cuisines:
            raise DesignError("at least one cuisine required")
        if not 1 <= self.min_ingredients <= self.max_ingredients:
            raise DesignError("need 1 <= min <= max ingredient count")


@dataclass(frozen=True)
class GenerationConfig:
    population_size: int = 200
    generations: int = 50
    mutation_rate: float = 0.2
    crossover_rate: float = 0.7
    seed: int = 0
    output_cap: int = 10_000

    def __post_init__(self):
        if self.population_size < 1 or self.generations < 0 or self.output_cap < 1:
            raise DesignError("sizes must be >= 1")
        if not (0.0 <= self.mutation_rate <= 1.0 and 0.0 <= self.crossover_rate <= 1.0):
            raise DesignError("rates must lie in [0,1]")


@dataclass(frozen=True)
class Candidate:
    ingredients: frozenset[str]
    parents: tuple[str, ...] = ()
    mutations: tuple[tuple[str, str], ...] = ()  # (replaced, replacement)


@dataclass
class CandidateSet:
    problem: DesignProblem
    candidates: list[Candidate]
    populations_evaluated: int = 0
    duplicates_removed: int = 0

    def ingredient_sets(self) -> list[frozenset[str]]:
        return [c.ingredients for c in self.candidates]


def estimate_design_space(n_eligible: int, min_ingredients: int, max_ingredients: int,
                          n_cuisines: int = 1, n_dish_types: int = 1) -> int:
    """Exact count of distinct problems: ingredient subsets containing the key
    ingredient, times cuisine/dish-type configurations, in big integers."""
    if n_eligible < 1:
        raise DesignError("catalog must be nonempty")
    total = 0
    for n in range(min_ingredients, max_ingredients + 1):
        if n - 1 <= n_eligible - 1:
            total += math.comb(n_eligible - 1, n - 1)
    return total * max(n_cuisines, 1) * max(n_dish_types, 1)


def design_space_for_problem(ingredients: dict[str, Ingredient],
                             problem: DesignProblem, n_dish_types: int = 1) -> int:
    return estimate_design_space(len(ingredients), problem.min_ingredients,
                                 problem.max_ingredients,
                                 n_cuisines=len(problem.cuisines),
                                 n_dish_types=n_dish_types)


def _repair(ingredients: set[str], problem: DesignProblem, rng: random.Random,
            pool: Sequence[str]) -> frozenset[str]:
    out = set(ingredients)
    out.add(problem.key_ingredient)
    extras = sorted(out - {problem.key_ingredient})
    while len(out) > problem.max_ingredients:
        out.remove(rng.choice(extras))
        extras = sorted(out - {problem.key_ingredient})
    fill = [p for p in pool if p not in out]
    while len(out) < problem.min_ingredients and fill:
        pick = rng.choice(sorted(fill))
        out.add(pick)
        fill.remove(pick)
    return frozenset(out)


def _mutation_weights(replaced: str, same_cat: Sequence[Ingredient],
                      problem: DesignProblem, cuisines: CuisineTable) -> list[float]:
    weights = []
    for ing in same_cat:
        w = 0.05  # floor so out-of-cuisine swaps stay possible
        for cid in problem.cuisines:
            entry = cuisines.get(cid)
            if entry:
                w = max(w, entry.typicality.get(ing.id, 0.0))
        weights.append(w)
    return weights


def generate(problem: DesignProblem, corpus: Sequence[Recipe],
             ingredients: dict[str, Ingredient], cuisines: CuisineTable,
             config: GenerationConfig,
             fitness: Optional[Callable[[frozenset[str]], float]] = None) -> CandidateSet:
    """Evolve candidate ingredient sets from corpus seeds, deterministically
    under the config seed.  `fitness` optionally biases parent selection."""
    if not corpus:
        raise DesignError("empty corpus")
    if problem.key_ingredient not in ingredients:
        raise DesignError(f"unknown key ingredient {problem.key_ingredient!r}")

    rng = random.Random(config.seed)
    seeds = [r for r in corpus if r.dish_type == problem.dish_type]
    if not seeds:
        _warnings.warn(f"no corpus recipes of dish type {problem.dish_type!r}; seeding from all",
                       stacklevel=2)
        seeds = list(corpus)
    seeds = sorted(seeds, key=lambda r: r.id)

    by_category: dict[str, list[Ingredient]] = {}
    for ing in sorted(ingredients.values(), key=lambda i: i.id):
        by_category.setdefault(ing.category, []).append(ing)
    pool = sorted(ingredients)

    corpus_sets = {r.ingredient_ids() for r in corpus}

    population: list[Candidate] = []
    for n in range(config.population_size):
        seed_recipe = seeds[n % len(seeds)]
        ing_set = _repair(set(seed_recipe.ingredient_ids()), problem, rng, pool)
        population.append(Candidate(ingredients=ing_set, parents=(seed_recipe.id,)))

    seen: dict[frozenset[str], Candidate] = {}
    duplicates = 0

    def admit(cand: Candidate) -> None:
        nonlocal duplicates
        if cand.ingredients in seen or cand.ingredients in corpus_sets:
            duplicates += 1
        else:
            seen[cand.ingredients] = cand

    for cand in population:
        admit(cand)

    populations = 1
    for _ in range(config.generations):
        if fitness is not None:
            scored = sorted(population, key=lambda c: (-fitness(c.ingredients),
                                                       sorted(c.ingredients)))
            parents_pool = scored[: max(2, len(scored) // 2)]
        else:
            parents_pool = population
        next_pop: list[Candidate] = []
        while len(next_pop) < config.population_size:
            a = rng.choice(parents_pool)
            b = rng.choice(parents_pool)
            child_set = set(a.ingredients)
            parents = (a.parents + b.parents)[:4]
            if rng.random() < config.crossover_rate and a is not b:
                # exchange a random subset from each parent
                give = {i for i in sorted(a.ingredients) if rng.random() < 0.5}
                take = {i for i in sorted(b.ingredients) if rng.random() < 0.5}
                child_set = (set(a.ingredients) - give) | take
            mutations: list[tuple[str, str]] = []
            if rng.random() < config.mutation_rate and child_set:
                victim = rng.choice(sorted(child_set - {problem.key_ingredient})
                                    or sorted(child_set))
                cat = ingredients[victim].category if victim in ingredients else None
                same_cat = [i for i in by_category.get(cat, []) if i.id != victim]
                if same_cat:
                    weights = _mutation_weights(victim, same_cat, problem, cuisines)
                    repl = rng.choices(same_cat, weights=weights, k=1)[0]
                    child_set.discard(victim)
                    child_set.add(repl.id)
                    mutations.append((victim, repl.id))
            repaired = _repair(child_set, problem, rng, pool)
            cand = Candidate(ingredients=repaired, parents=parents,
                             mutations=tuple(mutations))
            next_pop.append(cand)
            admit(cand)
        population = next_pop
        populations += 1

    ordered = sorted(seen.values(), key=lambda c: sorted(c.ingredients))
    return CandidateSet(problem=problem, candidates=ordered[: config.output_cap],
                        populations_evaluated=populations,
                        duplicates_removed=duplicates)


def novelty_prefilter(candidates: CandidateSet, freq: FrequencyTable,
                      threshold: int = 1) -> CandidateSet:
    """Drop candidates whose every ingredient pair already co-occurs at least
    `threshold` times; cheap screen before full surprise scoring."""
    if threshold < 1:
        raise DesignError("threshold must be >= 1")
    kept = []
    for cand in candidates.candidates:
        ids = sorted(cand.ingredients)
        all_known = all(freq.pair_count(a, b) >= threshold
                        for n, a in enumerate(ids) for b in ids[n + 1:])
        if not (all_known and len(ids) >= 2):
            kept.append(cand)
    return CandidateSet(problem=candidates.problem, candidates=kept,
                        populations_evaluated=candidates.populations_evaluated,
                        duplicates_removed=candidates.duplicates_removed)
