import pytest

from muse import corpus
from muse.config import EngineConfig, GenerationDefaults, TopicDefaults


@pytest.fixture(scope="session")
def config():
    return EngineConfig()


@pytest.fixture(scope="session")
def catalog(config):
    return corpus.load_compound_catalog(config.compounds_path,
                                        config.ingredient_compounds_path)


@pytest.fixture(scope="session")
def ingredients(config, catalog):
    return corpus.load_ingredients(config.ingredients_path, catalog)


@pytest.fixture(scope="session")
def recipes(config):
    return corpus.load_recipes(config.recipes_path).recipes


@pytest.fixture(scope="session")
def cuisines(config):
    return corpus.load_cuisines(config.cuisines_path)


@pytest.fixture(scope="session")
def freq(recipes):
    return corpus.build_frequency_table(recipes)


@pytest.fixture(scope="session")
def engine():
    """Engine on the bundled corpus with small search/topic settings so the
    service and end-to-end tests stay fast."""
    from muse.engine import Engine

    cfg = EngineConfig(generation=GenerationDefaults(population_size=20,
                                                     generations=4),
                       topics=TopicDefaults(topics=4, iterations=80))
    return Engine.load(cfg)
