"""Binomial and negative binomial distribution functions with asymptotic
quantile inversion based on the uniform erfc expansion of the incomplete
beta function."""

from .beta_asym import DEFAULT_CONFIG, AsymptoticConfig, inc_beta_asym
from .binomial import BinomialParams, cdf, cdf_exact, sf_exact
from .binomial_inv import InversionResult, invert, quantile_scan_oracle
from .errors import AccuracyWarning, DomainError, NoSolutionError, OutOfRangeError
from .negbinomial import NegBinomialParams, nb_cdf_exact, nb_invert, nb_quantile_scan_oracle
from .special_fn import erfc, inc_beta_ref, inverfc

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "AsymptoticConfig",
    "BinomialParams",
    "DEFAULT_CONFIG",
    "DomainError",
    "InversionResult",
    "NegBinomialParams",
    "NoSolutionError",
    "OutOfRangeError",
    "cdf",
    "cdf_exact",
    "erfc",
    "inc_beta_asym",
    "inc_beta_ref",
    "inverfc",
    "invert",
    "nb_cdf_exact",
    "nb_invert",
    "nb_quantile_scan_oracle",
    "quantile_scan_oracle",
    "sf_exact",
]
