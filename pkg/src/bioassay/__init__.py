"""bioassay: dose-response and growth-model statistics toolkit.

A registry of nonlinear mean-response models with analytic gradients,
Fisher information, maximum-likelihood and least-squares fitting,
low-dose percentile extrapolation, covariate-omission efficiency,
summary-table consistency checking, and a linear birth-death simulator.
"""

from . import birthdeath, covariates, fisher, fitting, lowdose, models, tables
from .models import REGISTRY, evaluate, get_model, gradient, list_models

__version__ = "0.1.0"

__all__ = [
    "birthdeath",
    "covariates",
    "fisher",
    "fitting",
    "lowdose",
    "models",
    "tables",
    "REGISTRY",
    "evaluate",
    "gradient",
    "get_model",
    "list_models",
    "__version__",
]
