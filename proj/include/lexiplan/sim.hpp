#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexiplan/solver.hpp"

namespace lexiplan::sim {

/// Pivot triple: output pair plus pivot language.
struct Triple {
    DictKey key;
    LanguageCode pivot;
    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
    std::string str() const { return key.a + "|" + pivot + "|" + key.b; }
};

/// Constant value or a beta draw.
struct Draw {
    enum class Kind : std::uint8_t { Constant, Beta } kind = Kind::Constant;
    double value = 0.0;
    beta::BetaParams params;

    static Draw constant(double v) { return Draw{Kind::Constant, v, {}}; }
    static Draw from_beta(beta::BetaParams p) { return Draw{Kind::Beta, 0.0, p}; }
    double sample(beta::Sampler& rng) const {
        return kind == Kind::Constant ? value : rng.sample(params);
    }
};

/// Ground truth the simulator draws from. When a triple has no explicit
/// precision entry, the planning prior is used with its beta parameter
/// replaced by the drawn topology polysemy.
struct ActorModel {
    std::map<Triple, Draw> precision;
    std::optional<Draw> default_precision;
    Draw accuracy = Draw::constant(0.8);
    Draw polysemy = Draw::constant(3.0);
};

struct TraceRecord {
    int state_id = -1;
    mdp::PlanAction action;
    enum class SampleKind : std::uint8_t { Accuracy, Precision } sample_kind =
        SampleKind::Accuracy;
    double sample = 0.0;            // drawn accuracy or precision
    double polysemy = 0.0;          // pivot records only
    long long realized_size = 0;    // created or induced pairs
    double realized_cost = 0.0;
    mdp::Branch branch = mdp::Branch::Sat;
};

struct ExecutionTrace {
    std::vector<TraceRecord> records;
    double total = 0.0;
};

/// Walks the policy from the start state with sampled actors. Planning
/// follows the graph (branch chosen by the realized result); accounting
/// uses realized sizes and accuracies throughout. Deterministic per seed.
ExecutionTrace simulate_execution(const mdp::TransitionGraph& graph,
                                  const solver::Policy& policy,
                                  const ActorModel& actors, std::uint64_t seed);

struct ObservationBatch {
    struct Obs {
        Triple triple;
        double precision = 0.0;
    };
    std::vector<Obs> items;
};

struct PosteriorEntry {
    beta::BetaParams prior;
    beta::BetaParams likelihood{0.0, 0.0};
    beta::BetaParams posterior;
    bool observed = false;
};

struct PosteriorUpdate {
    std::map<Triple, PosteriorEntry> entries;
    beta::BetaParams combined;
};

/// Per-triple conjugate-style update; unobserved priors pass through.
/// `combined` is the parameter sum over all resulting entries.
PosteriorUpdate update_posteriors(const std::map<Triple, beta::BetaParams>& priors,
                                  const ObservationBatch& observations);

/// Rebuild-solve-act loop: after every executed action the realized sizes
/// and statuses become the next start state. Same trace format; state ids
/// refer to each iteration's fresh graph.
ExecutionTrace replan_loop(const ScenarioConfig& config, const ActorModel& actors,
                           std::uint64_t seed);

/// Decorrelated per-run seed stream for Monte Carlo batches.
std::uint64_t derive_run_seed(std::uint64_t base, std::uint64_t run_index);

/// Realized totals of `runs` independent executions (seeds derived from
/// `base_seed`).
std::vector<double> simulate_many(const mdp::TransitionGraph& graph,
                                  const solver::Policy& policy,
                                  const ActorModel& actors, std::uint64_t base_seed,
                                  int runs);

std::vector<double> replan_many(const ScenarioConfig& config,
                                const ActorModel& actors, std::uint64_t base_seed,
                                int runs);

}  // namespace lexiplan::sim
