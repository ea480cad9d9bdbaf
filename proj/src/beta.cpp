#include "lexiplan/beta.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lexiplan::beta {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::domain_error(what);
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    fail("beta cdf continued fraction failed to converge");
}

}  // namespace

void validate(const BetaParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !std::isfinite(p.alpha) ||
        !std::isfinite(p.beta)) {
        fail("beta shape parameters must be finite and positive");
    }
}

double pdf(double x, const BetaParams& p) {
    validate(p);
    if (!(x > 0.0 && x < 1.0)) fail("pdf requires 0 < x < 1");
    return std::exp((p.alpha - 1.0) * std::log(x) +
                    (p.beta - 1.0) * std::log1p(-x) -
                    log_beta(p.alpha, p.beta));
}

double cdf(double k, const BetaParams& p) {
    validate(p);
    if (!(k >= 0.0 && k <= 1.0)) fail("cdf requires 0 <= k <= 1");
    if (k == 0.0) return 0.0;
    if (k == 1.0) return 1.0;
    const double a = p.alpha;
    const double b = p.beta;
    const double front = std::exp(a * std::log(k) + b * std::log1p(-k) -
                                  log_beta(a, b));
    // Symmetry switch keeps the continued fraction in its fast region.
    if (k < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, k) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - k) / b;
}

double survival(double k, const BetaParams& p) {
    return 1.0 - cdf(k, p);
}

double mean(const BetaParams& p) {
    validate(p);
    return p.alpha / (p.alpha + p.beta);
}

double lower_truncated_mean(double k, const BetaParams& p) {
    validate(p);
    if (!(k > 0.0 && k <= 1.0)) fail("lower truncated mean requires 0 < k <= 1");
    if (k == 1.0) return mean(p);
    const double den = cdf(k, p);
    if (den <= 0.0) fail("degenerate truncation: cdf(k) underflows to 0");
    const double num = cdf(k, BetaParams{p.alpha + 1.0, p.beta});
    return mean(p) * num / den;
}

double upper_truncated_mean(double k, const BetaParams& p) {
    validate(p);
    if (!(k >= 0.0 && k < 1.0)) fail("upper truncated mean requires 0 <= k < 1");
    if (k == 0.0) return mean(p);
    const double den = survival(k, p);
    if (den <= 0.0) fail("degenerate truncation: survival(k) underflows to 0");
    const double num = 1.0 - cdf(k, BetaParams{p.alpha + 1.0, p.beta});
    return mean(p) * num / den;
}

BetaParams prior_from_similarity(double similarity, double polysemy) {
    if (!(similarity >= 0.0 && similarity <= 1.0)) {
        fail("similarity must lie in [0,1]");
    }
    if (!(polysemy >= 2.0 && polysemy <= 10.0)) {
        fail("polysemy must lie in [2,10]");
    }
    return BetaParams{2.0 + 8.0 * similarity, polysemy};
}

BetaParams likelihood_from_precision(double observed, double scale) {
    if (!(observed >= 0.0 && observed <= 1.0)) {
        fail("observed precision must lie in [0,1]");
    }
    if (!(scale > 0.0)) fail("likelihood scale must be positive");
    return BetaParams{scale * observed, scale - scale * observed};
}

BetaParams posterior(const BetaParams& prior, const BetaParams& likelihood) {
    validate(prior);
    if (likelihood.alpha < 0.0 || likelihood.beta < 0.0) {
        fail("likelihood increments must be non-negative");
    }
    return BetaParams{prior.alpha + likelihood.alpha,
                      prior.beta + likelihood.beta};
}

BetaParams combine_posteriors(std::span<const BetaParams> parts) {
    if (parts.empty()) fail("combine_posteriors needs at least one element");
    BetaParams out{0.0, 0.0};
    for (const auto& p : parts) {
        if (p.alpha < 0.0 || p.beta < 0.0) {
            fail("posterior parameters must be non-negative");
        }
        out.alpha += p.alpha;
        out.beta += p.beta;
    }
    validate(out);
    return out;
}

// splitmix64; fixed so sampling is reproducible independent of the
// standard library's distribution implementations.
Sampler::Sampler(std::uint64_t seed) : state_(seed) {}

std::uint64_t Sampler::next_raw() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Sampler::uniform() {
    return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

namespace {

double draw_normal(Sampler& s) {
    // Box-Muller; 1-u keeps the log argument in (0,1].
    const double u1 = 1.0 - s.uniform();
    const double u2 = s.uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

double draw_gamma(Sampler& s, double shape) {
    if (shape < 1.0) {
        const double u = 1.0 - s.uniform();
        return draw_gamma(s, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = draw_normal(s);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = 1.0 - s.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

}  // namespace

double Sampler::sample(const BetaParams& p) {
    validate(p);
    const double x = draw_gamma(*this, p.alpha);
    const double y = draw_gamma(*this, p.beta);
    const double sum = x + y;
    if (sum <= 0.0) return 0.5;
    return x / sum;
}

}  // namespace lexiplan::beta
