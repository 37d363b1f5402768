"""Partition reservation over a noisy Boolean multi-access channel.

Random Bernoulli coding, typical-set edge-construction decoding for two
active users, the achievability/converse rate functions, and a seeded
Monte-Carlo harness.
"""

from .channel import ChannelParams, JointKernel, apply_noise, joint_pattern_prob, or_superpose, status_vector
from .codebook import ExperimentConfig, TransmissionMatrix, generate
from .decoder import (
    bayesian_decode,
    build_candidate_graph,
    decode,
    distortion,
    full_typical_membership,
    simplified_edge_test,
    suboptimal_success,
)
from .graphs import BudgetExceededError, CandidateGraph, lies_on_odd_cycle, min_edge_bipartize, two_coloring
from .ldp import appendixB_rate, legendre_transform, lemma3_gap, markov_log_mgf
from .rates import LdpKernel, RatePoint, optimize_over_p, phi, rate_C, rate_Cg, rate_D, rate_point, rho_plus

__all__ = [
    "ChannelParams",
    "JointKernel",
    "ExperimentConfig",
    "TransmissionMatrix",
    "CandidateGraph",
    "BudgetExceededError",
    "LdpKernel",
    "RatePoint",
    "apply_noise",
    "appendixB_rate",
    "bayesian_decode",
    "build_candidate_graph",
    "decode",
    "distortion",
    "full_typical_membership",
    "generate",
    "joint_pattern_prob",
    "legendre_transform",
    "lemma3_gap",
    "lies_on_odd_cycle",
    "markov_log_mgf",
    "min_edge_bipartize",
    "optimize_over_p",
    "or_superpose",
    "phi",
    "rate_C",
    "rate_Cg",
    "rate_D",
    "rate_point",
    "rho_plus",
    "simplified_edge_test",
    "status_vector",
    "suboptimal_success",
    "two_coloring",
]
