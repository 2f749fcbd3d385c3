"""Command-line mirror of the engine: autonomous batch operation.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import assess, design, topics
from .config import ConfigError, EngineConfig, load_config
from .corpus import CorpusError
from .engine import Engine, candidate_id, candidate_recipe
from .plan import PlanError, save_plan
from .sessions import SessionStore

_DATA_ERRORS = (CorpusError, assess.AssessmentError, design.DesignError,
                topics.TopicError, PlanError, OSError)


class UsageFailure(click.UsageError):
    """Usage problems exit 1 (click's default UsageError exits 2, which we
    reserve for data errors)."""

    exit_code = 1


def _load_engine(config_path, **overrides) -> Engine:
    cfg = load_config(config_path)
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    return Engine.load(cfg)


def _fail_data(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


config_option = click.option("--config", "config_path", type=str, default=None,
                             help="TOML config file (or MUSE_CONFIG)")
seed_option = click.option("--seed", type=int, default=0, show_default=True)


@click.group()
def main():
    """Culinary creativity engine: generate, assess, and plan recipes."""


@main.command()
@config_option
@seed_option
@click.option("--out", "out_dir", default=None, help="output directory")
def ingest(config_path, seed, out_dir):
    """Load corpus + catalogs, build counts, persist the surprise prior."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        model_dir = Path(out_dir or cfg.model_dir)
        model_dir.mkdir(parents=True, exist_ok=True)
        assess.save_model(engine.surprise_model, model_dir / "surprise_model.json")
        click.echo(f"recipes: {len(engine.recipes)}")
        click.echo(f"ingredients: {len(engine.ingredients)}")
        click.echo(f"compounds: {len(engine.catalog.compounds)}")
        click.echo(f"catalog warnings: {len(engine.catalog.warnings)}")
        click.echo(f"surprise model -> {model_dir / 'surprise_model.json'}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command("fit-pleasantness")
@config_option
@seed_option
@click.option("--cv", "cv_mode", type=click.Choice(["ten-fold", "leave-one-out"]),
              default="ten-fold", show_default=True)
def fit_pleasantness_cmd(config_path, seed, cv_mode):
    """Fit the odor pleasantness regression on labeled compounds."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        model = assess.fit_pleasantness(engine.catalog.labeled_compounds(),
                                        cv_mode=cv_mode, seed=seed)
        path = cfg.pleasantness_model_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        assess.save_model(model, path)
        click.echo(f"selected features: {list(model.selected_features)}")
        click.echo(f"cv error ({model.cv_mode}): {model.cv_error:.6f}")
        click.echo(f"model -> {path}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command("fit-topics")
@config_option
@seed_option
@click.option("--topics", "n_topics", type=int, default=None, help="topic count L")
@click.option("--iters", type=int, default=None, help="Gibbs iterations")
def fit_topics_cmd(config_path, seed, n_topics, iters):
    """Fit the LDA topic model over the recipe corpus."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        model = engine.ensure_topic_model(L=n_topics, iterations=iters, seed=seed)
        path = cfg.topic_model_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        topics.save_topic_model(model, path)
        click.echo(f"topics: {model.L}, iterations: {model.iterations}, seed: {model.seed}")
        click.echo(f"model -> {path}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command()
@config_option
@seed_option
@click.option("--key", "key_ingredient", required=True)
@click.option("--cuisine", "cuisines", multiple=True, required=True)
@click.option("--dish", "dish_type", required=True)
@click.option("--min-ingredients", type=int, default=3, show_default=True)
@click.option("--max-ingredients", type=int, default=12, show_default=True)
@click.option("--population", type=int, default=None)
@click.option("--generations", type=int, default=None)
@click.option("--out", "out_path", default=None, help="candidates.jsonl path")
def generate(config_path, seed, key_ingredient, cuisines, dish_type,
             min_ingredients, max_ingredients, population, generations, out_path):
    """Evolve candidate ingredient sets for a design problem."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        problem = design.DesignProblem(key_ingredient=key_ingredient,
                                       cuisines=frozenset(cuisines),
                                       dish_type=dish_type,
                                       min_ingredients=min_ingredients,
                                       max_ingredients=max_ingredients)
        g = cfg.generation
        gen = design.GenerationConfig(
            population_size=population or g.population_size,
            generations=generations if generations is not None else g.generations,
            mutation_rate=g.mutation_rate, crossover_rate=g.crossover_rate,
            seed=seed, output_cap=g.output_cap)
        cand_set = design.generate(problem, engine.recipes, engine.ingredients,
                                   engine.cuisines, gen)
        cand_set = design.novelty_prefilter(cand_set, engine.freq)
        out = Path(out_path or Path(cfg.output_dir) / "candidates.jsonl")
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as fh:
            for c in cand_set.candidates:
                fh.write(json.dumps({"id": candidate_id(c.ingredients),
                                     "ingredients": sorted(c.ingredients),
                                     "parents": list(c.parents),
                                     "mutations": [list(m) for m in c.mutations],
                                     "dish_type": problem.dish_type,
                                     "key_ingredient": problem.key_ingredient,
                                     "cuisines": sorted(problem.cuisines),
                                     "seed": seed}, sort_keys=True) + "\n")
        click.echo(f"{len(cand_set.candidates)} candidates -> {out} "
                   f"(populations {cand_set.populations_evaluated}, "
                   f"duplicates removed {cand_set.duplicates_removed})")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command("assess")
@config_option
@seed_option
@click.option("--candidates", "candidates_path", default=None,
              help="candidates.jsonl from generate")
@click.option("--out", "out_path", default=None, help="ranked.jsonl path")
def assess_cmd(config_path, seed, candidates_path, out_path):
    """Score and rank generated candidates by surprise/pleasantness/pairing."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        src = Path(candidates_path or Path(cfg.output_dir) / "candidates.jsonl")
        lines = [json.loads(l) for l in src.read_text().splitlines() if l.strip()]
        if not lines:
            _fail_data(f"{src}: no candidates")
        problem = design.DesignProblem(key_ingredient=lines[0]["key_ingredient"],
                                       cuisines=frozenset(lines[0]["cuisines"]),
                                       dish_type=lines[0]["dish_type"])
        cands = [design.Candidate(ingredients=frozenset(l["ingredients"]),
                                  parents=tuple(l["parents"]),
                                  mutations=tuple(tuple(m) for m in l["mutations"]))
                 for l in lines]
        recipes = [candidate_recipe(c, problem) for c in cands]
        scored = assess.score_candidates(recipes, engine.surprise_model,
                                         engine.pleasantness_model, engine.catalog)
        ranked = assess.rank_candidates(scored, cfg.ranking_weights)
        out = Path(out_path or Path(cfg.output_dir) / "ranked.jsonl")
        out.parent.mkdir(parents=True, exist_ok=True)
        by_id = {candidate_id(c.ingredients): c for c in cands}
        with open(out, "w") as fh:
            for sc in ranked:
                c = by_id[sc.recipe.id]
                fh.write(json.dumps({"id": sc.recipe.id, "rank": sc.composite_rank,
                                     "ingredients": sorted(sc.recipe.ingredient_ids()),
                                     "surprise": sc.surprise,
                                     "pleasantness": sc.pleasantness,
                                     "pairing": sc.pairing,
                                     "composite": sc.composite,
                                     "parents": list(c.parents),
                                     "mutations": [list(m) for m in c.mutations]},
                                    sort_keys=True) + "\n")
        click.echo(f"{len(ranked)} ranked candidates -> {out}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command("plan")
@config_option
@seed_option
@click.option("--ranked", "ranked_path", default=None, help="ranked.jsonl from assess")
@click.option("--candidate", "cand_id", default=None,
              help="candidate id (default: top ranked)")
@click.option("--cooks", type=int, default=1, show_default=True)
@click.option("--out", "out_path", default=None, help="plan.json path")
def plan_cmd(config_path, seed, ranked_path, cand_id, cooks, out_path):
    """Proportion and schedule a selected candidate into a full work plan."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        src = Path(ranked_path or Path(cfg.output_dir) / "ranked.jsonl")
        lines = [json.loads(l) for l in src.read_text().splitlines() if l.strip()]
        if not lines:
            _fail_data(f"{src}: empty ranked file")
        if cand_id:
            try:
                chosen = next(l for l in lines if l["id"] == cand_id)
            except StopIteration:
                _fail_data(f"candidate {cand_id!r} not found in {src}")
        else:
            chosen = min(lines, key=lambda l: l["rank"])
        # ranked rows don't carry the dish type; recover it from the candidates file
        cand_src = Path(cfg.output_dir) / "candidates.jsonl"
        dish = "other"
        if cand_src.exists():
            for l in cand_src.read_text().splitlines():
                obj = json.loads(l)
                if obj["id"] == chosen["id"]:
                    dish = obj["dish_type"]
                    break
        proportioned, scheduled = engine.plan_candidate(chosen["ingredients"], dish,
                                                        cooks=cooks)
        out = Path(out_path or Path(cfg.output_dir) / "plan.json")
        out.parent.mkdir(parents=True, exist_ok=True)
        save_plan(scheduled, out)
        click.echo(f"plan for {chosen['id']} ({cooks} cooks, "
                   f"makespan {scheduled.makespan:g} min) -> {out}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command("menu")
@config_option
@seed_option
@click.option("--k", type=int, default=3, show_default=True, help="menu length")
@click.option("--out", "out_path", default=None, help="menu.json path")
def menu_cmd(config_path, seed, k, out_path):
    """Suggest K topic-diverse dish seeds for a menu."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
        result = engine.suggest_menu(k, seed=seed)
        out = Path(out_path or Path(cfg.output_dir) / "menu.json")
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(result, indent=2, sort_keys=True))
        click.echo(f"menu variety {result['variety']:.4f} -> {out}")
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))


@main.command()
@config_option
@seed_option
@click.option("--port", type=int, default=None, help="override service port")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path, seed, port, host):
    """Run the mixed-initiative HTTP service."""
    try:
        cfg = load_config(config_path)
        engine = Engine.load(cfg)
    except ConfigError as exc:
        raise UsageFailure(str(exc))
    except _DATA_ERRORS as exc:
        _fail_data(str(exc))
    import uvicorn

    from .service import create_app
    app = create_app(engine, SessionStore(cfg.session_dir))
    uvicorn.run(app, host=host, port=port or cfg.port, log_level="warning")


if __name__ == "__main__":
    main()
