#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lexiplan::beta {

/// Shape pair of a beta distribution. Priors built by this project keep
/// alpha, beta >= 2 (bell shape); likelihoods may go below (e.g. beta = 1.15),
/// so the type only enforces positivity.
struct BetaParams {
    double alpha = 2.0;
    double beta = 2.0;
};

/// Throws std::domain_error unless alpha > 0 and beta > 0.
void validate(const BetaParams& p);

/// Density at x in (0,1). B(alpha,beta) is evaluated through log-gamma.
double pdf(double x, const BetaParams& p);

/// Regularized incomplete beta I_k(alpha,beta); absolute error <= 1e-10.
double cdf(double k, const BetaParams& p);

/// 1 - cdf(k, p).
double survival(double k, const BetaParams& p);

/// alpha / (alpha + beta).
double mean(const BetaParams& p);

/// E(X | 0 < X < k). Throws std::domain_error when cdf(k,p) underflows to 0
/// (degenerate truncation).
double lower_truncated_mean(double k, const BetaParams& p);

/// E(X | k < X < 1). Throws std::domain_error when survival(k,p) underflows.
double upper_truncated_mean(double k, const BetaParams& p);

/// Prior from language similarity in [0,1] (alpha = 2 + 8*similarity) and
/// topology polysemy in [2,10] (beta).
BetaParams prior_from_similarity(double similarity, double polysemy);

/// Normalization scale for observed precisions; likelihood alpha = scale * p.
inline constexpr double kLikelihoodScale = 10.0;

/// Likelihood params from an observed precision in [0,1]:
/// (scale*p, scale - scale*p).
BetaParams likelihood_from_precision(double observed,
                                     double scale = kLikelihoodScale);

/// Parameter-wise sum. This is how the source tables combine prior and
/// likelihood (a conjugate-style update on the normalized scale).
BetaParams posterior(const BetaParams& prior, const BetaParams& likelihood);

/// Parameter-wise sum over a batch; empty input is an error.
BetaParams combine_posteriors(std::span<const BetaParams> parts);

/// Deterministic draw from Beta(alpha,beta) built from two gamma draws.
/// The stream type is fixed so results are reproducible for a given seed.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed);
    double sample(const BetaParams& p);
    /// Uniform draw in [0,1); used by actor models.
    double uniform();

private:
    std::uint64_t state_;
    std::uint64_t next_raw();
};

}  // namespace lexiplan::beta
