"""Cost-optimal planning of bilingual dictionary creation.

Thin python surface over the C++ core: beta-distribution precision model,
MDP transition graph, value iteration, and Monte Carlo execution.
"""

try:
    from ._core import (
        BetaParams,
        Sampler,
        baseline,
        cdf,
        combine_posteriors,
        likelihood_from_precision,
        lower_truncated_mean,
        mean,
        pdf,
        plan,
        posterior,
        prior_from_similarity,
        simulate,
        survival,
        update_posteriors,
        upper_truncated_mean,
    )
except ImportError:  # running against a plain CMake build tree
    from _core import (
        BetaParams,
        Sampler,
        baseline,
        cdf,
        combine_posteriors,
        likelihood_from_precision,
        lower_truncated_mean,
        mean,
        pdf,
        plan,
        posterior,
        prior_from_similarity,
        simulate,
        survival,
        update_posteriors,
        upper_truncated_mean,
    )

__all__ = [
    "BetaParams",
    "Sampler",
    "baseline",
    "cdf",
    "combine_posteriors",
    "likelihood_from_precision",
    "lower_truncated_mean",
    "mean",
    "pdf",
    "plan",
    "posterior",
    "prior_from_similarity",
    "simulate",
    "survival",
    "update_posteriors",
    "upper_truncated_mean",
]
