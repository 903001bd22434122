"""Partitions with nonnegative r-th differences: bijection, counts, asymptotics, sampling."""
from ._caps import CapExceededError
from .asymptotics import (
    AsymptoticConstants,
    PolynomialPartSet,
    asym_delta,
    asym_pr,
    constants_binomial,
    constants_polynomial,
    tilt_parameter,
)
from .core import (
    BinomialPartSet,
    DifferenceVector,
    MultiplicityPartition,
    NotInPrError,
    Partition,
    bijection_forward,
    bijection_inverse,
    binomial_part_set,
    count_at_least,
    is_in_pr,
    positive_difference_count,
    rth_differences,
)
from .counting import (
    count_pr,
    count_pr_k_m,
    count_pr_le,
    count_table,
    delta_exact,
    enumerate_pr,
    exact_mean_ratio,
)
from .sampling import (
    GeometricEnsembleSpec,
    ensemble_moments,
    point_mass_scaling,
    sample_conditioned,
    sample_exact,
)

__version__ = "0.1.0"
