"""Engine configuration: data paths, model paths, defaults.

Loaded from a TOML file; anything unset falls back to the bundled fixtures so
the engine runs out of the box.  MUSE_CONFIG overrides the config path and
MUSE_PORT the service port.
"""

from __future__ import annotations

import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path


def bundled(name: str) -> str:
    return str(resources.files("muse.data").joinpath(name))


@dataclass(frozen=True)
class GenerationDefaults:
    population_size: int = 60
    generations: int = 15
    mutation_rate: float = 0.2
    crossover_rate: float = 0.7
    output_cap: int = 10_000


@dataclass(frozen=True)
class TopicDefaults:
    topics: int = 25
    iterations: int = 1000
    hyper_beta: float = 0.01


@dataclass(frozen=True)
class EngineConfig:
    recipes_path: str = field(default_factory=lambda: bundled("recipes.jsonl"))
    compounds_path: str = field(default_factory=lambda: bundled("compounds.csv"))
    ingredient_compounds_path: str = field(default_factory=lambda: bundled("ingredient_compounds.csv"))
    ingredients_path: str = field(default_factory=lambda: bundled("ingredients.csv"))
    cuisines_path: str = field(default_factory=lambda: bundled("cuisines.csv"))
    action_durations_path: str = field(default_factory=lambda: bundled("action_durations.csv"))
    model_dir: str = "models"
    session_dir: str = "sessions"
    output_dir: str = "out"
    smoothing: float = 0.5
    ranking_weights: dict = field(default_factory=lambda: {"surprise": 1.0,
                                                           "pleasantness": 1.0,
                                                           "pairing": 1.0})
    generation: GenerationDefaults = field(default_factory=GenerationDefaults)
    topics: TopicDefaults = field(default_factory=TopicDefaults)
    port: int = 8765

    def surprise_model_path(self) -> Path:
        return Path(self.model_dir) / "surprise_model.json"

    def pleasantness_model_path(self) -> Path:
        return Path(self.model_dir) / "pleasantness_model.json"

    def topic_model_path(self) -> Path:
        return Path(self.model_dir) / "topic_model.json"


class ConfigError(Exception):
    pass


def load_config(path=None) -> EngineConfig:
    """Read TOML config; env MUSE_CONFIG beats the argument, MUSE_PORT beats both."""
    env_path = os.environ.get("MUSE_CONFIG")
    if env_path:
        path = env_path
    cfg = EngineConfig()
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = tomllib.loads(p.read_text())
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
        paths = raw.get("paths", {})
        simple = {k: str(v) for k, v in paths.items()
                  if k in {"recipes_path", "compounds_path", "ingredient_compounds_path",
                           "ingredients_path", "cuisines_path", "action_durations_path",
                           "model_dir", "session_dir", "output_dir"}}
        cfg = replace(cfg, **simple)
        if "smoothing" in raw:
            cfg = replace(cfg, smoothing=float(raw["smoothing"]))
        if "ranking_weights" in raw:
            cfg = replace(cfg, ranking_weights={k: float(v)
                                                for k, v in raw["ranking_weights"].items()})
        if "generation" in raw:
            cfg = replace(cfg, generation=GenerationDefaults(**raw["generation"]))
        if "topics" in raw:
            cfg = replace(cfg, topics=TopicDefaults(**raw["topics"]))
        if "port" in raw:
            cfg = replace(cfg, port=int(raw["port"]))
        for key in ("recipes_path", "compounds_path", "ingredient_compounds_path",
                    "ingredients_path", "cuisines_path", "action_durations_path"):
            if not Path(getattr(cfg, key)).exists():
                raise ConfigError(f"configured path does not exist: {getattr(cfg, key)}")
    env_port = os.environ.get("MUSE_PORT")
    if env_port:
        cfg = replace(cfg, port=int(env_port))
    return cfg
