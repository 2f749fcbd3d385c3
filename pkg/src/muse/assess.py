"""Candidate assessment: novelty, predicted pleasantness, flavor pairing.

Novelty is Bayesian surprise: the KL divergence between the Dirichlet
posterior over ingredient occurrence frequencies after observing a candidate
and the Dirichlet prior fitted to the corpus.  Smoothing over the full
catalog plus a reserved unseen mass keeps never-seen ingredients scoreable.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import digamma, gammaln

from .corpus import Compound, CompoundCatalog, FrequencyTable, Recipe

_UNSEEN = "__unseen__"


class AssessmentError(Exception):
    pass


@dataclass(frozen=True)
class SurpriseModel:
    alpha: dict[str, float]
    unseen_mass: float

    @property
    def alpha0(self) -> float:
        return sum(self.alpha.values()) + self.unseen_mass

    def to_json(self) -> dict:
        return {"version": 1, "alpha": self.alpha, "unseen_mass": self.unseen_mass}

    @classmethod
    def from_json(cls, obj: dict) -> "SurpriseModel":
        return cls(alpha={k: float(v) for k, v in obj["alpha"].items()},
                   unseen_mass=float(obj["unseen_mass"]))


def fit_surprise_prior(freq: FrequencyTable, smoothing: float,
                       catalog_ingredients: Optional[Iterable[str]] = None) -> SurpriseModel:
    """Additive-smoothed Dirichlet prior over ingredient occurrences.

    Every catalog ingredient gets pseudo-count count+smoothing, so zero-count
    ingredients still carry positive mass; `smoothing` is also reserved as the
    unseen mass for ingredients outside the catalog entirely.
    """
    if smoothing <= 0:
        raise AssessmentError("smoothing must be > 0")
    if not freq.unigram:
        raise AssessmentError("empty frequency table")
    vocab = set(freq.unigram)
    if catalog_ingredients is not None:
        vocab |= set(catalog_ingredients)
    alpha = {i: freq.unigram.get(i, 0) + smoothing for i in sorted(vocab)}
    return SurpriseModel(alpha=alpha, unseen_mass=smoothing)


def dirichlet_kl(alpha_post: np.ndarray, alpha_prior: np.ndarray) -> float:
    """Closed-form KL( Dir(alpha_post) || Dir(alpha_prior) )."""
    a1 = np.asarray(alpha_post, dtype=float)
    a0 = np.asarray(alpha_prior, dtype=float)
    s1, s0 = a1.sum(), a0.sum()
    kl = (gammaln(s1) - gammaln(s0)
          - np.sum(gammaln(a1) - gammaln(a0))
          + np.sum((a1 - a0) * (digamma(a1) - digamma(s1))))
    return float(kl)


def bayesian_surprise(model: SurpriseModel, recipe: Recipe | Iterable[str]) -> float:
    """KL divergence from prior to posterior after observing one candidate."""
    if isinstance(recipe, Recipe):
        ids = sorted(recipe.ingredient_ids())
    else:
        ids = sorted(set(recipe))
    if not ids:
        raise AssessmentError("cannot score an empty recipe")

    vocab = list(model.alpha)
    prior = [model.alpha[i] for i in vocab]
    post = list(prior)
    index = {i: n for n, i in enumerate(vocab)}
    unseen = [i for i in ids if i not in index]
    if unseen:
        # never-seen ingredients split the reserved unseen pseudo-count;
        # the unseen category only enters the KL when it is actually consumed
        share = model.unseen_mass / len(unseen)
        for i in unseen:
            index[i] = len(prior)
            prior.append(share)
            post.append(share)
    for i in ids:
        post[index[i]] += 1.0

    kl = dirichlet_kl(np.array(post), np.array(prior))
    if not np.isfinite(kl):
        raise AssessmentError("non-finite surprise: corrupted model")
    return max(kl, 0.0)


@dataclass(frozen=True)
class PleasantnessModel:
    selected_features: tuple[str, ...]
    coefficients: tuple[float, ...]
    intercept: float
    cv_mode: str  # "ten-fold" | "leave-one-out"
    cv_error: float
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"version": 1, "features": list(self.selected_features),
                "coefficients": list(self.coefficients),
                "intercept": self.intercept, "cv_mode": self.cv_mode,
                "cv_error": self.cv_error}

    @classmethod
    def from_json(cls, obj: dict) -> "PleasantnessModel":
        return cls(selected_features=tuple(obj["features"]),
                   coefficients=tuple(float(c) for c in obj["coefficients"]),
                   intercept=float(obj["intercept"]), cv_mode=obj["cv_mode"],
                   cv_error=float(obj["cv_error"]))


def _cv_mse(X: np.ndarray, y: np.ndarray, folds: Sequence[np.ndarray]) -> float:
    errs = []
    n = len(y)
    for test_idx in folds:
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        Xtr = np.column_stack([np.ones(mask.sum()), X[mask]])
        beta, *_ = np.linalg.lstsq(Xtr, y[mask], rcond=None)
        Xte = np.column_stack([np.ones(len(test_idx)), X[test_idx]])
        pred = Xte @ beta
        errs.extend((pred - y[test_idx]) ** 2)
    return float(np.mean(errs))


def _make_folds(n: int, cv_mode: str, rng: np.random.Generator) -> list[np.ndarray]:
    if cv_mode == "leave-one-out":
        return [np.array([i]) for i in range(n)]
    perm = rng.permutation(n)
    return [perm[k::10] for k in range(10) if len(perm[k::10])]


def fit_pleasantness(labeled_compounds: Sequence[Compound], cv_mode: str = "ten-fold",
                     seed: int = 0) -> PleasantnessModel:
    """Greedy forward feature selection by CV mean-squared prediction error.

    Features are added one at a time while CV error keeps improving; the final
    coefficients are ordinary least squares on the full labeled set.
    """
    compounds = [c for c in labeled_compounds if c.rated_pleasantness is not None]
    if len(compounds) < 10:
        raise AssessmentError(f"need >= 10 labeled compounds, got {len(compounds)}")
    feature_names = sorted(compounds[0].features)
    if len(feature_names) < 2:
        raise AssessmentError("need >= 2 candidate features")

    warn: list[str] = []
    if cv_mode == "ten-fold" and len(compounds) < 10 + 1:
        warn.append("fewer labels than folds; falling back to leave-one-out")
        cv_mode = "leave-one-out"
    if cv_mode not in ("ten-fold", "leave-one-out"):
        raise AssessmentError(f"unknown cv_mode {cv_mode!r}")

    X_all = np.array([[c.features[f] for f in feature_names] for c in compounds])
    y = np.array([c.rated_pleasantness for c in compounds])
    rng = np.random.default_rng(seed)
    folds = _make_folds(len(y), cv_mode, rng)

    selected: list[int] = []
    best_err = _cv_mse(np.empty((len(y), 0)), y, folds)
    improved = True
    while improved:
        improved = False
        best_j, best_j_err = None, best_err
        for j in range(len(feature_names)):
            if j in selected:
                continue
            err = _cv_mse(X_all[:, selected + [j]], y, folds)
            if err < best_j_err - 1e-15:
                best_j, best_j_err = j, err
        if best_j is not None:
            selected.append(best_j)
            best_err = best_j_err
            improved = True

    if not selected:
        # constant-label corner: intercept-only model
        return PleasantnessModel(selected_features=(), coefficients=(),
                                 intercept=float(y.mean()), cv_mode=cv_mode,
                                 cv_error=best_err, warnings=tuple(warn))

    Xs = X_all[:, selected]
    design = np.column_stack([np.ones(len(y)), Xs])
    rank = np.linalg.matrix_rank(design)
    while rank < design.shape[1] and selected:
        dropped = selected.pop()
        warn.append(f"dropped rank-deficient feature {feature_names[dropped]!r}")
        Xs = X_all[:, selected]
        design = np.column_stack([np.ones(len(y)), Xs])
        rank = np.linalg.matrix_rank(design)
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)

    for msg in warn:
        _warnings.warn(msg, stacklevel=2)
    return PleasantnessModel(
        selected_features=tuple(feature_names[j] for j in selected),
        coefficients=tuple(float(b) for b in beta[1:]),
        intercept=float(beta[0]), cv_mode=cv_mode, cv_error=best_err,
        warnings=tuple(warn))


def compound_pleasantness(model: PleasantnessModel, compound: Compound) -> float:
    missing = [f for f in model.selected_features if f not in compound.features]
    if missing:
        raise AssessmentError(f"compound {compound.id!r} missing features {missing}")
    val = model.intercept + sum(b * compound.features[f]
                                for f, b in zip(model.selected_features, model.coefficients))
    return min(1.0, max(0.0, val))


def recipe_pleasantness(recipe: Recipe, catalog: CompoundCatalog,
                        model: PleasantnessModel) -> float:
    """Concentration-weighted compound mix per ingredient, quantity-weighted
    mean over ingredients (mixture linearity)."""
    values: list[float] = []
    weights: list[float] = []
    have_qty = all(ri.quantity is not None for ri in recipe.ingredients)
    for ri in recipe.ingredients:
        profile = catalog.profiles.get(ri.ingredient_id, {})
        profile = {c: p for c, p in profile.items() if p > 0 and c in catalog.compounds}
        if not profile:
            _warnings.warn(f"ingredient {ri.ingredient_id!r} has no compound profile; excluded",
                           stacklevel=2)
            continue
        total = sum(profile.values())
        val = sum(ppm * compound_pleasantness(model, catalog.compounds[c])
                  for c, ppm in profile.items()) / total
        values.append(val)
        weights.append(float(ri.quantity) if have_qty else 1.0)
    if not values:
        raise AssessmentError(f"recipe {recipe.id!r}: no ingredient has a compound profile")
    w = np.array(weights)
    return float(np.dot(values, w / w.sum()))


def pairing_score(recipe: Recipe, catalog: CompoundCatalog) -> float:
    """Mean shared-compound count over all unordered ingredient pairs."""
    ids = sorted(recipe.ingredient_ids())
    if len(ids) < 2:
        return 0.0
    pairs = list(combinations(ids, 2))
    shared = sum(len(catalog.shared_compounds(a, b)) for a, b in pairs)
    return shared / len(pairs)


@dataclass(frozen=True)
class ScoredCandidate:
    recipe: Recipe
    surprise: float
    pleasantness: float
    pairing: float
    composite: float = 0.0
    composite_rank: int = 0


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi - lo < 1e-300:
        return np.full_like(values, 0.5)
    return (values - lo) / (hi - lo)


def rank_candidates(candidates: Sequence[ScoredCandidate],
                    weights: Optional[dict[str, float]] = None) -> list[ScoredCandidate]:
    """Min-max normalize each metric over the set, rank by weighted sum."""
    if not candidates:
        raise AssessmentError("empty candidate set")
    weights = weights or {"surprise": 1.0, "pleasantness": 1.0, "pairing": 1.0}
    w = {k: float(weights.get(k, 0.0)) for k in ("surprise", "pleasantness", "pairing")}
    if any(v < 0 for v in w.values()) or all(v == 0 for v in w.values()):
        raise AssessmentError("weights must be nonnegative and not all zero")

    s = _minmax(np.array([c.surprise for c in candidates]))
    p = _minmax(np.array([c.pleasantness for c in candidates]))
    q = _minmax(np.array([c.pairing for c in candidates]))
    composite = w["surprise"] * s + w["pleasantness"] * p + w["pairing"] * q

    order = sorted(range(len(candidates)),
                   key=lambda i: (-composite[i], candidates[i].recipe.id))
    out = []
    for rank, i in enumerate(order, start=1):
        c = candidates[i]
        out.append(ScoredCandidate(recipe=c.recipe, surprise=c.surprise,
                                   pleasantness=c.pleasantness, pairing=c.pairing,
                                   composite=float(composite[i]), composite_rank=rank))
    return out


def score_candidates(recipes: Iterable[Recipe], surprise_model: SurpriseModel,
                     pleasantness_model: PleasantnessModel,
                     catalog: CompoundCatalog) -> list[ScoredCandidate]:
    out = []
    for r in recipes:
        try:
            pl = recipe_pleasantness(r, catalog, pleasantness_model)
        except AssessmentError:
            pl = 0.0
        out.append(ScoredCandidate(recipe=r,
                                   surprise=bayesian_surprise(surprise_model, r),
                                   pleasantness=pl,
                                   pairing=pairing_score(r, catalog)))
    return out


def save_model(model: SurpriseModel | PleasantnessModel, path) -> None:
    Path(path).write_text(json.dumps(model.to_json(), indent=2, sort_keys=True))


def load_surprise_model(path) -> SurpriseModel:
    return SurpriseModel.from_json(json.loads(Path(path).read_text()))


def load_pleasantness_model(path) -> PleasantnessModel:
    return PleasantnessModel.from_json(json.loads(Path(path).read_text()))
