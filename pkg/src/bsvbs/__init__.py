"""Adversarial-bandit radio-policy scheduling for virtualized base stations.

The learner (:mod:`bsvbs.learner`) runs Exp3 over a finite grid of radio
policies; :mod:`bsvbs.environment` supplies contexts, a surrogate power and
throughput model, and trace ingestion; :mod:`bsvbs.harness` ties them into
seeded experiments.
"""

from .kernels import BACKEND
from .learner import BSvBS, LearnerState, adaptive_gamma, fixed_gamma, regret_bound
from .space import ConfigurationSpace, RadioPolicy, cardinality, index_of, policy_at

__all__ = [
    "BACKEND",
    "BSvBS",
    "ConfigurationSpace",
    "LearnerState",
    "RadioPolicy",
    "adaptive_gamma",
    "cardinality",
    "fixed_gamma",
    "index_of",
    "policy_at",
    "regret_bound",
]

__version__ = "0.1.0"
