#pragma once

#include <filesystem>
#include <string>

#include "lexiplan/scenario.hpp"

namespace lexiplan::io {

/// Column-aligned plain-text table, Table-2/3 layout.
std::string report_to_text(const solver::PlanReport& report,
                           const ScenarioConfig& config);
std::string report_to_json(const solver::PlanReport& report,
                           const ScenarioConfig& config);

/// Machine-readable policy; states are ids of the deterministic graph.
std::string policy_to_json(const mdp::TransitionGraph& graph,
                           const solver::Policy& policy);
solver::Policy policy_from_json(const std::string& text,
                                const mdp::TransitionGraph& graph);

/// Full graph dump (states, transitions, probabilities, costs).
std::string graph_to_json(const mdp::TransitionGraph& graph);
/// Graphviz dot rendering for visualization.
std::string graph_to_dot(const mdp::TransitionGraph& graph);

std::string trace_to_text(const sim::ExecutionTrace& trace,
                          const ScenarioConfig& config);
std::string trace_to_json(const sim::ExecutionTrace& trace,
                          const ScenarioConfig& config);

std::string posteriors_to_json(const sim::PosteriorUpdate& update);
std::string posteriors_to_text(const sim::PosteriorUpdate& update);
std::string priors_to_json(const std::map<sim::Triple, beta::BetaParams>& priors);

struct SimulationSummary {
    int runs = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    double p10 = 0.0, p50 = 0.0, p90 = 0.0;

    static SimulationSummary from_totals(const std::vector<double>& totals);
};

std::string summary_to_json(const SimulationSummary& summary, const std::string& mode,
                            double value_start);
std::string summary_to_text(const SimulationSummary& summary, const std::string& mode,
                            double value_start);

/// Paired static-vs-replan comparison over identical seeds.
std::string comparison_to_json(const SimulationSummary& stat,
                               const SimulationSummary& replan,
                               const std::vector<double>& diffs);
std::string comparison_to_text(const SimulationSummary& stat,
                               const SimulationSummary& replan,
                               const std::vector<double>& diffs);

}  // namespace lexiplan::io
