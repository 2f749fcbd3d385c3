"""muse: a culinary computational-creativity engine.

Generates candidate recipes from a corpus, assesses them for novelty
(Bayesian surprise), predicted flavor pleasantness, and ingredient pairing,
and externalizes selections as proportioned, scheduled cooking plans.
"""

from .engine import ENGINE_VERSION as __version__  # noqa: F401
