#pragma once

// Shared scenario builders and independent oracles for the test suites.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "lexiplan/reports.hpp"

namespace testsupport {

using namespace lexiplan;

// ---- scenarios -----------------------------------------------------------

inline SimilarityMatrix indonesian_similarity() {
    SimilarityMatrix sim;
    sim.set("ind", "jav", 0.2409);
    sim.set("ind", "sun", 0.3943);
    sim.set("jav", "sun", 0.2182);
    sim.set("ind", "zlm", 0.8510);
    sim.set("jav", "zlm", 0.2136);
    sim.set("sun", "zlm", 0.4112);
    sim.set("ind", "min", 0.6159);
    sim.set("jav", "min", 0.2501);
    sim.set("sun", "min", 0.3081);
    sim.set("zlm", "min", 0.6166);
    sim.set("ind", "plm", 0.6824);
    sim.set("jav", "plm", 0.3185);
    sim.set("sun", "plm", 0.3890);
    sim.set("zlm", "plm", 0.7323);
    sim.set("min", "plm", 0.6360);
    sim.set("ind", "bjn", 0.7157);
    sim.set("jav", "bjn", 0.3250);
    sim.set("sun", "bjn", 0.3872);
    sim.set("zlm", "bjn", 0.7093);
    sim.set("min", "bjn", 0.6039);
    sim.set("plm", "bjn", 0.6353);
    return sim;
}

// First batch: 5 languages, 3 existing dictionaries, min size 2000.
inline ScenarioConfig batch1_config() {
    ScenarioConfig config;
    config.languages = {"ind", "zlm", "min", "jav", "sun"};
    config.similarity = indonesian_similarity();
    config.existing[DictKey("ind", "zlm")] = 711;
    config.existing[DictKey("ind", "min")] = 2590;
    config.existing[DictKey("zlm", "min")] = 1246;
    config.min_size = 2000;
    return config;
}

// Second batch: two more languages; the first ten dictionaries are done.
inline ScenarioConfig batch2_config(const beta::BetaParams& combined) {
    ScenarioConfig config;
    config.languages = {"ind", "zlm", "min", "plm", "bjn", "jav", "sun"};
    config.similarity = indonesian_similarity();
    config.existing[DictKey("ind", "zlm")] = 2000;
    config.existing[DictKey("ind", "min")] = 2590;
    config.existing[DictKey("ind", "jav")] = 2000;
    config.existing[DictKey("ind", "sun")] = 2000;
    config.existing[DictKey("zlm", "min")] = 3186;
    config.existing[DictKey("zlm", "jav")] = 2910;
    config.existing[DictKey("zlm", "sun")] = 2694;
    config.existing[DictKey("min", "jav")] = 2747;
    config.existing[DictKey("min", "sun")] = 2674;
    config.existing[DictKey("jav", "sun")] = 2786;
    config.min_size = 2000;
    config.alpha_basis = AlphaBasis::TripleAverage;
    config.combined_prior = combined;
    return config;
}

// Three languages, one open pair reachable by a single pivot.
inline ScenarioConfig micro_config() {
    ScenarioConfig config;
    config.languages = {"ind", "zlm", "min"};
    SimilarityMatrix sim;
    sim.set("ind", "zlm", 0.8510);
    sim.set("ind", "min", 0.6159);
    sim.set("zlm", "min", 0.6166);
    config.similarity = sim;
    config.existing[DictKey("ind", "zlm")] = 2500;
    config.existing[DictKey("ind", "min")] = 2200;
    config.min_size = 2000;
    return config;
}

// The worked transition example: existing 4000, inputs 5000/6500,
// min size 10000, prior Beta(7.58, 3.5).
inline ScenarioConfig worked_example_config() {
    ScenarioConfig config;
    config.languages = {"p", "x", "y"};
    SimilarityMatrix sim;
    sim.set("x", "y", 0.6975);  // alpha = 2 + 8 * 0.6975 = 7.58
    sim.set("p", "x", 0.5);
    sim.set("p", "y", 0.5);
    config.similarity = sim;
    config.default_polysemy = 3.5;
    config.existing[DictKey("p", "x")] = 5000;
    config.existing[DictKey("p", "y")] = 6500;
    config.existing[DictKey("x", "y")] = 4000;
    config.min_size = 10000;
    return config;
}

// ---- quadrature oracle ---------------------------------------------------

// Adaptive Simpson integration, independent of the cdf implementation.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb,
                               double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

// I_k(alpha, beta) by direct quadrature of the density.
inline double quadrature_cdf(double k, const beta::BetaParams& p) {
    if (k <= 0.0) return 0.0;
    if (k >= 1.0) return 1.0;
    const double eps = 1e-12;  // density endpoints vanish for alpha,beta >= 2
    return integrate([&](double x) { return beta::pdf(std::min(1.0 - eps, std::max(eps, x)), p); },
                     eps, k);
}

// ---- brute-force policy oracle -------------------------------------------

// Minimal expected cost by explicit enumeration of deterministic policies,
// independent of the value-iteration code path.
inline double brute_force_optimal(const mdp::TransitionGraph& graph) {
    const int n = static_cast<int>(graph.states.size());
    if (n > 64) throw std::invalid_argument("brute force oracle wants small graphs");
    std::vector<int> pick(n, 0);
    double best = std::numeric_limits<double>::infinity();

    auto evaluate = [&]() {
        // Expected cost of the fixed policy from every state, child-first.
        std::vector<double> cost(n, 0.0);
        std::vector<bool> done(n, false);
        std::function<double(int)> eval = [&](int sid) -> double {
            if (done[sid]) return cost[sid];
            done[sid] = true;  // DAG: no revisits on a path
            const auto& row = graph.transitions[sid];
            if (row.empty()) return cost[sid] = 0.0;
            const auto& tr = row[pick[sid]];
            double q = 0.0;
            for (const auto& t : tr.targets) {
                q += t.probability * (t.cost + eval(t.state_id));
            }
            return cost[sid] = q;
        };
        return eval(graph.start_id);
    };

    std::function<void(int)> enumerate = [&](int sid) {
        if (sid == n) {
            best = std::min(best, evaluate());
            return;
        }
        const auto& row = graph.transitions[sid];
        if (row.empty()) {
            enumerate(sid + 1);
            return;
        }
        for (int i = 0; i < static_cast<int>(row.size()); ++i) {
            pick[sid] = i;
            enumerate(sid + 1);
        }
    };
    enumerate(0);
    return best;
}

// Random small scenario whose graph stays tiny: two satisfied pairs plus
// one open pair on three languages.
inline ScenarioConfig random_small_scenario(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::uniform_int_distribution<long long> min_size(800, 3000);
    std::uniform_int_distribution<int> coin(0, 1);

    ScenarioConfig config;
    config.languages = {"n0", "e1", "e2"};
    SimilarityMatrix sim;
    sim.set("n0", "e1", unit(rng));
    sim.set("n0", "e2", unit(rng));
    sim.set("e1", "e2", unit(rng));
    config.similarity = sim;
    config.min_size = min_size(rng);
    std::uniform_int_distribution<long long> big(config.min_size,
                                                 3 * config.min_size);
    config.existing[DictKey("n0", "e1")] = big(rng);
    config.existing[DictKey("n0", "e2")] = big(rng);
    if (coin(rng)) {
        std::uniform_int_distribution<long long> small(1, config.min_size - 1);
        config.existing[DictKey("e1", "e2")] = small(rng);
    }
    std::uniform_real_distribution<double> cost(0.5, 10.0);
    config.cost_model.ct1 = {cost(rng), cost(rng)};
    config.cost_model.ct2 = {cost(rng), cost(rng)};
    config.cost_model.t4_evaluation = cost(rng);
    config.cost_model.human_accuracy = 0.5 + 0.5 * unit(rng);
    if (coin(rng)) config.cost_model.formula = CostModel::Formula::Eq10Literal;
    if (coin(rng)) {
        config.cost_model.pivot_charge = CostModel::PivotCharge::AllCandidates;
    }
    std::uniform_real_distribution<double> poly(2.0, 10.0);
    config.default_polysemy = poly(rng);
    return config;
}

}  // namespace testsupport
