"""Information measures of cubic transmuted distributions.

>>> from ctinfo import Uniform, CTParams, make_ct, kl
>>> ct = make_ct(Uniform(), CTParams(0.4, 0.6))
>>> round(kl(ct, Uniform(), Uniform()).value, 10) >= 0
True
"""

__version__ = "0.1.0"

from .baselines import (FAMILIES, Baseline, Exponential, ParameterDomainError, Pareto, Power, Uniform, Weibull,
                        make_baseline)
from .ct_model import (CTDistribution, CTParams, InvalidParametersError, OrderStatComponent, PolyTransform,
                       make_ct, make_one_param_cubic, make_quadratic)
from .divergences import chi_square, jeffreys, kl, kl_mixture_ct, symmetric_chi_square
from .entropy import ct_entropy_decomposed, ct_shannon_entropy, shannon_entropy
from .fisher_inference import FisherMatrix, FitResult, fisher_matrix, fisher_one_param, mle_fit
from .gini import ctg, ctg_energy_mixture, gmd, gmd_ct_decomposed
from .parsing import DistSpecError, parse_dist
from .quadrature import DEFAULT_SPEC, Estimate, QuadratureSpec
from .roots import DegenerateParametersError

__all__ = [
    "__version__",
    "Baseline", "Uniform", "Exponential", "Pareto", "Power", "Weibull", "FAMILIES", "make_baseline",
    "ParameterDomainError",
    "CTParams", "CTDistribution", "PolyTransform", "OrderStatComponent", "InvalidParametersError",
    "make_ct", "make_quadratic", "make_one_param_cubic",
    "kl", "jeffreys", "chi_square", "symmetric_chi_square", "kl_mixture_ct",
    "shannon_entropy", "ct_shannon_entropy", "ct_entropy_decomposed",
    "gmd", "gmd_ct_decomposed", "ctg", "ctg_energy_mixture",
    "FisherMatrix", "FitResult", "fisher_matrix", "fisher_one_param", "mle_fit",
    "DistSpecError", "parse_dist",
    "QuadratureSpec", "Estimate", "DEFAULT_SPEC", "DegenerateParametersError",
]
