"""Generalised Kozachenko-Leonenko estimation of the non-additive entropy S_Q."""
from .errors import (
    DegenerateSampleError,
    DomainError,
    FitError,
    IntegrationError,
    NumericError,
    ParameterError,
    QklaError,
    TieError,
)
from .estimator import (
    DeltaSet,
    EstimateResult,
    KlaConfig,
    SortedSample,
    binning_estimate,
    expected_q_log_mass,
    kla_estimate,
    kla_estimate_many,
    knn_deltas,
    mean_q_log_delta,
)
from .generators import Seed, sample_gaussian, sample_student_t3, sample_uniform
from .qmath import EntropicIndex, digamma, log_gamma, q_exp, q_log, q_product_expand
from .theory import ReferenceDistribution, ref_entropy, validity_domain

__version__ = "0.1.0"
