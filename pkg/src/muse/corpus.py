"""Domain knowledge store: recipes, ingredients, compounds, cuisines, counts.

Everything loaded here is immutable after load and shared read-only by the
designer, assessor, and planner.
"""

from __future__ import annotations

import csv
import json
import statistics
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional

INGREDIENT_CATEGORIES = (
    "protein", "vegetable", "fruit", "dairy", "grain",
    "spice", "herb", "fat", "liquid", "sweetener", "other",
)

# Irregular plurals that a naive trailing-s rule would mangle.
_SINGULAR_EXCEPTIONS = {
    "tomatoes": "tomato",
    "potatoes": "potato",
    "leaves": "leaf",
    "loaves": "loaf",
    "berries": "berry",
    "cherries": "cherry",
    "anchovies": "anchovy",
    "chilies": "chili",
    "chillies": "chilli",
    "radishes": "radish",
    "molasses": "molasses",
    "couscous": "couscous",
    "hummus": "hummus",
    "asparagus": "asparagus",
    "watercress": "watercress",
}


def canonicalize_name(name: str) -> str:
    """Lowercase, trim, and singularize an ingredient name.

    Singularization uses the exception table plus a trailing-s rule; there is
    deliberately no general stemmer so joins stay deterministic.
    """
    words = name.strip().lower().split()
    out = []
    for w in words:
        if w in _SINGULAR_EXCEPTIONS:
            out.append(_SINGULAR_EXCEPTIONS[w])
        elif len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
            out.append(w[:-1])
        else:
            out.append(w)
    return " ".join(out)


class CorpusError(Exception):
    """Raised for malformed or unusable corpus data files."""


@dataclass(frozen=True)
class Compound:
    id: str
    name: str
    features: dict[str, float]
    rated_pleasantness: Optional[float] = None


@dataclass(frozen=True)
class Ingredient:
    id: str
    name: str
    category: str
    cuisines: frozenset[str] = frozenset()
    seasons: frozenset[str] = frozenset()
    compound_profile: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Step:
    action: str
    inputs: frozenset[str]
    output: str
    tool: Optional[str] = None
    duration: Optional[float] = None


@dataclass(frozen=True)
class RecipeIngredient:
    ingredient_id: str
    quantity: Optional[Fraction] = None
    unit: Optional[str] = None
    state: Optional[str] = None


@dataclass(frozen=True)
class Recipe:
    id: str
    title: str
    dish_type: str
    ingredients: tuple[RecipeIngredient, ...]
    steps: tuple[Step, ...] = ()
    cuisine: Optional[str] = None
    provenance: str = "corpus"

    def ingredient_ids(self) -> frozenset[str]:
        return frozenset(ri.ingredient_id for ri in self.ingredients)


@dataclass
class CompoundCatalog:
    """Compound feature table joined with ingredient concentration profiles."""

    compounds: dict[str, Compound]
    profiles: dict[str, dict[str, float]]
    feature_names: tuple[str, ...]
    warnings: list[str] = field(default_factory=list)

    def labeled_compounds(self) -> list[Compound]:
        return [c for c in self.compounds.values() if c.rated_pleasantness is not None]

    def shared_compounds(self, ing_a: str, ing_b: str) -> set[str]:
        pa = self.profiles.get(ing_a, {})
        pb = self.profiles.get(ing_b, {})
        return {c for c, ppm in pa.items() if ppm > 0 and pb.get(c, 0.0) > 0}


@dataclass(frozen=True)
class FrequencyTable:
    unigram: dict[str, int]
    pair: dict[tuple[str, str], int]
    total_recipes: int

    def pair_count(self, a: str, b: str) -> int:
        return self.pair.get(_pair_key(a, b), 0)


@dataclass(frozen=True)
class CuisineEntry:
    name: str
    typicality: dict[str, float]


CuisineTable = dict[str, CuisineEntry]


@dataclass(frozen=True)
class LoadDiagnostic:
    line: int
    reason: str


@dataclass
class RecipeLoadResult:
    recipes: list[Recipe]
    diagnostics: list[LoadDiagnostic]


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise CorpusError(f"{path}: empty file")
    return rows


def _normalize_labels(labels: dict[str, float]) -> dict[str, float]:
    """Map raw pleasantness labels into [0,1] (min-max when out of range)."""
    if not labels:
        return labels
    lo, hi = min(labels.values()), max(labels.values())
    if 0.0 <= lo and hi <= 1.0:
        return labels
    span = hi - lo
    if span == 0:
        return {k: 0.5 for k in labels}
    return {k: (v - lo) / span for k, v in labels.items()}


def load_compound_catalog(compound_features_path, ingredient_compound_path) -> CompoundCatalog:
    """Load compounds.csv + ingredient_compounds.csv into a joined catalog.

    Unresolvable ingredient->compound rows become warnings, not errors.
    Blank concentrations default to the catalog median for that compound.
    """
    compound_features_path = Path(compound_features_path)
    ingredient_compound_path = Path(ingredient_compound_path)

    rows = _read_csv(compound_features_path)
    feature_names = tuple(
        c[len("feature:"):] for c in rows[0].keys() if c.startswith("feature:")
    )

    raw_labels: dict[str, float] = {}
    parsed: dict[str, tuple[str, dict[str, float]]] = {}
    for lineno, row in enumerate(rows, start=2):
        cid = (row.get("compound_id") or "").strip()
        if not cid:
            raise CorpusError(f"{compound_features_path}:{lineno}: missing compound_id")
        if cid in parsed:
            raise CorpusError(f"{compound_features_path}:{lineno}: duplicate compound id {cid!r}")
        try:
            features = {name: float(row[f"feature:{name}"]) for name in feature_names}
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"{compound_features_path}:{lineno}: bad feature value ({exc})") from exc
        pl = (row.get("pleasantness") or "").strip()
        if pl:
            try:
                raw_labels[cid] = float(pl)
            except ValueError as exc:
                raise CorpusError(f"{compound_features_path}:{lineno}: bad pleasantness {pl!r}") from exc
        parsed[cid] = (row.get("name", cid).strip(), features)

    labels = _normalize_labels(raw_labels)
    compounds = {
        cid: Compound(id=cid, name=name, features=features,
                      rated_pleasantness=labels.get(cid))
        for cid, (name, features) in parsed.items()
    }

    warnings: list[str] = []
    profile_rows: list[tuple[str, str, Optional[float]]] = []
    by_compound_ppm: dict[str, list[float]] = {}
    for lineno, row in enumerate(_read_csv(ingredient_compound_path), start=2):
        ing = (row.get("ingredient_id") or "").strip()
        cid = (row.get("compound_id") or "").strip()
        if not ing or not cid:
            raise CorpusError(f"{ingredient_compound_path}:{lineno}: missing ids")
        if cid not in compounds:
            warnings.append(f"line {lineno}: unknown compound {cid!r} for ingredient {ing!r}")
            continue
        raw_ppm = (row.get("ppm") or "").strip()
        if raw_ppm:
            try:
                ppm = float(raw_ppm)
            except ValueError as exc:
                raise CorpusError(f"{ingredient_compound_path}:{lineno}: bad ppm {raw_ppm!r}") from exc
            if ppm < 0:
                raise CorpusError(f"{ingredient_compound_path}:{lineno}: negative ppm")
            by_compound_ppm.setdefault(cid, []).append(ppm)
        else:
            ppm = None
        profile_rows.append((ing, cid, ppm))

    medians = {cid: statistics.median(v) for cid, v in by_compound_ppm.items()}
    profiles: dict[str, dict[str, float]] = {}
    for ing, cid, ppm in profile_rows:
        if ppm is None:
            ppm = medians.get(cid, 0.0)
        profiles.setdefault(ing, {})[cid] = ppm

    return CompoundCatalog(compounds=compounds, profiles=profiles,
                           feature_names=feature_names, warnings=warnings)


def load_ingredients(path, catalog: Optional[CompoundCatalog] = None) -> dict[str, Ingredient]:
    """Load ingredients.csv; attach compound profiles when a catalog is given."""
    path = Path(path)
    out: dict[str, Ingredient] = {}
    seen_names: set[str] = set()
    for lineno, row in enumerate(_read_csv(path), start=2):
        iid = (row.get("ingredient_id") or "").strip()
        name = canonicalize_name(row.get("name") or "")
        if not iid or not name:
            raise CorpusError(f"{path}:{lineno}: missing ingredient id or name")
        if iid in out:
            raise CorpusError(f"{path}:{lineno}: duplicate ingredient id {iid!r}")
        if name in seen_names:
            raise CorpusError(f"{path}:{lineno}: duplicate ingredient name {name!r}")
        seen_names.add(name)
        category = (row.get("category") or "other").strip()
        if category not in INGREDIENT_CATEGORIES:
            raise CorpusError(f"{path}:{lineno}: unknown category {category!r}")
        cuisines = frozenset(filter(None, (row.get("cuisines") or "").split("|")))
        seasons = frozenset(filter(None, (row.get("seasons") or "").split("|")))
        profile = dict(catalog.profiles.get(iid, {})) if catalog else {}
        out[iid] = Ingredient(id=iid, name=name, category=category,
                              cuisines=cuisines, seasons=seasons,
                              compound_profile=profile)
    return out


def load_cuisines(path) -> CuisineTable:
    path = Path(path)
    names: dict[str, str] = {}
    typicality: dict[str, dict[str, float]] = {}
    for lineno, row in enumerate(_read_csv(path), start=2):
        cid = (row.get("cuisine_id") or "").strip()
        ing = (row.get("ingredient_id") or "").strip()
        if not cid or not ing:
            raise CorpusError(f"{path}:{lineno}: missing ids")
        try:
            w = float(row.get("typicality") or "")
        except ValueError as exc:
            raise CorpusError(f"{path}:{lineno}: bad typicality") from exc
        if not 0.0 <= w <= 1.0:
            raise CorpusError(f"{path}:{lineno}: typicality {w} outside [0,1]")
        names[cid] = (row.get("name") or cid).strip()
        typicality.setdefault(cid, {})[ing] = w
    return {cid: CuisineEntry(name=names[cid], typicality=t)
            for cid, t in typicality.items()}


def _parse_quantity(raw) -> Optional[Fraction]:
    if raw is None or raw == "":
        return None
    q = Fraction(str(raw)) if "/" in str(raw) else Fraction(str(raw)).limit_denominator(10**6)
    return q


def _recipe_from_json(obj: dict, rid: str) -> Recipe:
    ings = []
    seen: set[str] = set()
    for item in obj.get("ingredients", []):
        iid = item.get("ingredient_id")
        if not iid:
            iid = canonicalize_name(item.get("raw_text", ""))
        if not iid:
            raise ValueError("ingredient entry without id or raw_text")
        if iid in seen:
            raise ValueError(f"duplicate ingredient {iid!r}")
        seen.add(iid)
        qty = _parse_quantity(item.get("qty"))
        if qty is not None and qty <= 0:
            raise ValueError(f"non-positive quantity for {iid!r}")
        ings.append(RecipeIngredient(ingredient_id=iid, quantity=qty,
                                     unit=item.get("unit"), state=item.get("state")))
    if not ings:
        raise ValueError("no ingredients")
    steps = []
    for n, text in enumerate(obj.get("steps", [])):
        # Raw corpus steps are free text; structured fields come from the parser.
        steps.append(Step(action="raw", inputs=frozenset({f"_text:{text}"}),
                          output=f"{rid}_s{n}"))
    return Recipe(id=rid, title=obj.get("title", rid),
                  dish_type=obj.get("dish_type", "other"),
                  cuisine=obj.get("cuisine"), ingredients=tuple(ings),
                  steps=tuple(steps), provenance="corpus")


def load_recipes(path) -> RecipeLoadResult:
    """Load recipes.jsonl; bad lines become per-line diagnostics, not aborts."""
    path = Path(path)
    recipes: list[Recipe] = []
    diagnostics: list[LoadDiagnostic] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                recipes.append(_recipe_from_json(obj, rid=f"r{lineno:05d}"))
            except (ValueError, KeyError, TypeError) as exc:
                diagnostics.append(LoadDiagnostic(line=lineno, reason=str(exc)))
    return RecipeLoadResult(recipes=recipes, diagnostics=diagnostics)


def build_frequency_table(recipes: Iterable[Recipe]) -> FrequencyTable:
    """Per-recipe presence counts for single ingredients and unordered pairs."""
    recipes = list(recipes)
    if not recipes:
        raise CorpusError("cannot build frequency table from an empty corpus")
    unigram: Counter[str] = Counter()
    pair: Counter[tuple[str, str]] = Counter()
    for r in recipes:
        ids = sorted(r.ingredient_ids())
        unigram.update(ids)
        pair.update(_pair_key(a, b) for a, b in combinations(ids, 2))
    return FrequencyTable(unigram=dict(unigram), pair=dict(pair),
                          total_recipes=len(recipes))
