"""MOEA/D with Levy-flight mutation for mean-variance portfolio selection."""

from .algorithms import ALGORITHMS, PIPELINES, AlgorithmConfig, MoeadConfig, run
from .datasets import AssetUniverse, ReferenceFrontier, load_frontier, load_universe, parse_frontier, parse_universe
from .harness import ExperimentConfig, experiment_presets, run_experiment
from .metrics import all_metrics, gd, hypervolume, igd, nondominated_filter
from .operators import LevyParams, OperatorConfig
from .problem import PortfolioSolution, evaluate, repair

__version__ = "0.1.0"
