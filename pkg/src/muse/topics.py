"""Latent recipe topics, topic-spanning vectors, and menu variety.

A recipe is summarized as its bag of ingredients; topics are fit by collapsed
Gibbs sampling with a fixed seed so identical inputs give identical models.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .corpus import Recipe


class TopicError(Exception):
    pass


@dataclass(frozen=True)
class TopicModel:
    L: int
    vocab: tuple[str, ...]
    phi: np.ndarray            # L x V, rows sum to 1
    topic_marginal: np.ndarray  # length L, sums to 1
    hyper_alpha: float
    hyper_beta: float
    seed: int
    iterations: int

    def to_json(self) -> dict:
        return {"version": 1, "L": self.L, "vocab": list(self.vocab),
                "phi": self.phi.ravel().tolist(),
                "topic_marginal": self.topic_marginal.tolist(),
                "hyper_alpha": self.hyper_alpha, "hyper_beta": self.hyper_beta,
                "seed": self.seed, "iterations": self.iterations}

    @classmethod
    def from_json(cls, obj: dict) -> "TopicModel":
        L = int(obj["L"])
        vocab = tuple(obj["vocab"])
        phi = np.array(obj["phi"], dtype=float).reshape(L, len(vocab))
        return cls(L=L, vocab=vocab, phi=phi,
                   topic_marginal=np.array(obj["topic_marginal"], dtype=float),
                   hyper_alpha=float(obj["hyper_alpha"]),
                   hyper_beta=float(obj["hyper_beta"]),
                   seed=int(obj["seed"]), iterations=int(obj["iterations"]))


def save_topic_model(model: TopicModel, path) -> None:
    Path(path).write_text(json.dumps(model.to_json(), sort_keys=True))


def load_topic_model(path) -> TopicModel:
    return TopicModel.from_json(json.loads(Path(path).read_text()))


def recipes_to_bags(recipes: Iterable[Recipe]) -> list[list[str]]:
    return [sorted(r.ingredient_ids()) for r in recipes]


def fit_lda(documents: Sequence[Sequence[str]], L: int,
            hyper_alpha: Optional[float] = None, hyper_beta: float = 0.01,
            iterations: int = 1000, seed: int = 0) -> TopicModel:
    """Collapsed Gibbs sampler; phi and the topic marginal are read off the
    final sample's counts with hyperparameter smoothing."""
    documents = [list(d) for d in documents if d]
    if L < 1:
        raise TopicError("L must be >= 1")
    if not documents:
        raise TopicError("empty corpus")
    vocab = sorted({w for d in documents for w in d})
    if len(documents) < L or len(vocab) < L:
        raise TopicError(f"need >= {L} documents and vocabulary items")
    if hyper_alpha is None:
        hyper_alpha = 50.0 / L

    V = len(vocab)
    word_id = {w: i for i, w in enumerate(vocab)}
    doc_ids = [np.array([word_id[w] for w in d], dtype=np.int64) for d in documents]

    rng = np.random.default_rng(seed)
    n_tw = np.zeros((L, V), dtype=np.int64)   # topic-word counts
    n_t = np.zeros(L, dtype=np.int64)
    n_dt = np.zeros((len(documents), L), dtype=np.int64)
    z = []
    for d, ids in enumerate(doc_ids):
        zd = rng.integers(0, L, size=len(ids))
        z.append(zd)
        for w, t in zip(ids, zd):
            n_tw[t, w] += 1
            n_t[t] += 1
            n_dt[d, t] += 1

    beta_sum = hyper_beta * V
    for _ in range(iterations):
        for d, ids in enumerate(doc_ids):
            zd = z[d]
            for n in range(len(ids)):
                w, t = ids[n], zd[n]
                n_tw[t, w] -= 1
                n_t[t] -= 1
                n_dt[d, t] -= 1
                p = ((n_tw[:, w] + hyper_beta) / (n_t + beta_sum)
                     * (n_dt[d] + hyper_alpha))
                cdf = np.cumsum(p)
                t = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
                t = min(t, L - 1)
                zd[n] = t
                n_tw[t, w] += 1
                n_t[t] += 1
                n_dt[d, t] += 1

    phi = (n_tw + hyper_beta) / (n_t + beta_sum)[:, None]
    marginal = (n_t + hyper_alpha) / (n_t.sum() + hyper_alpha * L)
    return TopicModel(L=L, vocab=tuple(vocab), phi=phi,
                      topic_marginal=marginal, hyper_alpha=hyper_alpha,
                      hyper_beta=hyper_beta, seed=seed, iterations=iterations)


def topic_posterior(model: TopicModel, ingredient: str) -> np.ndarray:
    """P(T = t | I) ∝ phi_t(I) * P(T = t), normalized over topics."""
    try:
        w = model.vocab.index(ingredient)
    except ValueError:
        _warnings.warn(f"out-of-vocabulary ingredient {ingredient!r}; uniform posterior",
                       stacklevel=2)
        return np.full(model.L, 1.0 / model.L)
    joint = model.phi[:, w] * model.topic_marginal
    total = joint.sum()
    if total == 0:
        return np.full(model.L, 1.0 / model.L)
    return joint / total


@dataclass(frozen=True)
class SpanningVector:
    values: tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def spanning_vector(model: TopicModel, recipe: Recipe | Iterable[str]) -> SpanningVector:
    """Per-topic probability that at least one ingredient came from the topic:
    s_l = 1 - prod_n (1 - P(T = t_l | I_n))."""
    ids = sorted(recipe.ingredient_ids()) if isinstance(recipe, Recipe) else sorted(set(recipe))
    if not ids:
        raise TopicError("empty recipe")
    miss = np.ones(model.L)
    for i in ids:
        miss *= 1.0 - topic_posterior(model, i)
    return SpanningVector(values=tuple(float(v) for v in 1.0 - miss))


_DISTANCES = ("mean", "min", "max")


def menu_variety(spanning_vectors: Sequence[SpanningVector], distance: str = "mean") -> float:
    """Dispersion of a menu's spanning vectors: pairwise Euclidean distances
    aggregated by mean (default), min, or max."""
    if len(spanning_vectors) < 2:
        raise TopicError("need >= 2 spanning vectors")
    if distance not in _DISTANCES:
        raise TopicError(f"unknown distance {distance!r}")
    arrs = [s.as_array() for s in spanning_vectors]
    dim = len(arrs[0])
    if any(len(a) != dim for a in arrs):
        raise TopicError("mismatched spanning vector lengths")
    dists = [float(np.linalg.norm(a - b)) for a, b in combinations(arrs, 2)]
    if distance == "mean":
        return float(np.mean(dists))
    return float(min(dists) if distance == "min" else max(dists))


@dataclass(frozen=True)
class MenuSeed:
    key_ingredient: str
    dish_type: str
    exemplar_recipe_id: str


def suggest_menu_parameters(model: TopicModel, corpus: Sequence[Recipe], K: int,
                            variety_target: str = "mean") -> tuple[list[MenuSeed], float]:
    """Greedy pick of K (key ingredient, dish type) seeds whose corpus
    exemplars maximize menu variety."""
    if K < 2:
        raise TopicError("K must be >= 2")
    if not corpus:
        raise TopicError("empty corpus")

    # one exemplar per dish type: the recipe with the most in-vocabulary ingredients
    by_dish: dict[str, Recipe] = {}
    for r in sorted(corpus, key=lambda r: r.id):
        cur = by_dish.get(r.dish_type)
        n_in = sum(1 for i in r.ingredient_ids() if i in model.vocab)
        if cur is None or n_in > sum(1 for i in cur.ingredient_ids() if i in model.vocab):
            by_dish[r.dish_type] = r

    exemplars = sorted(by_dish.values(), key=lambda r: r.id)
    if len(exemplars) < K:
        _warnings.warn(f"corpus has only {len(exemplars)} dish types for K={K}; repeating seeds",
                       stacklevel=2)
    spans = {r.id: spanning_vector(model, r) for r in exemplars}

    def key_ing(r: Recipe) -> str:
        # most topic-concentrated in-vocab ingredient is the dish's anchor
        best, best_peak = None, -1.0
        for i in sorted(r.ingredient_ids()):
            if i not in model.vocab:
                continue
            peak = float(topic_posterior(model, i).max())
            if peak > best_peak:
                best, best_peak = i, peak
        return best or sorted(r.ingredient_ids())[0]

    chosen: list[Recipe] = [exemplars[0]]
    while len(chosen) < K:
        pool = [r for r in exemplars if r not in chosen] or exemplars
        best_r, best_v = None, -1.0
        for r in pool:
            vecs = [spans[c.id] for c in chosen] + [spans[r.id]]
            v = menu_variety(vecs, variety_target) if len(vecs) >= 2 else 0.0
            if v > best_v:
                best_r, best_v = r, v
        chosen.append(best_r)

    seeds = [MenuSeed(key_ingredient=key_ing(r), dish_type=r.dish_type,
                      exemplar_recipe_id=r.id) for r in chosen]
    variety = menu_variety([spans[r.id] for r in chosen], variety_target)
    return seeds, variety
