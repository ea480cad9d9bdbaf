#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lexiplan/mdp.hpp"

namespace lexiplan::solver {

/// Expected remaining cost per state id; 0 at terminal states.
using ValueTable = std::vector<double>;

/// Chosen transition index per state id (-1 at terminal states).
struct Policy {
    std::vector<int> choice;

    bool defined(int state_id) const {
        return state_id >= 0 && state_id < static_cast<int>(choice.size()) &&
               choice[state_id] >= 0;
    }
    const mdp::Transition& transition(const mdp::TransitionGraph& graph,
                                      int state_id) const {
        return graph.transitions[state_id][choice[state_id]];
    }
};

/// Exact fixed point by backward induction over a reverse topological order
/// of the DAG. Throws std::runtime_error if a cycle is detected.
ValueTable value_iteration(const mdp::TransitionGraph& graph);

/// Argmin action per non-terminal state. Ties (relative 1e-9) break
/// Invest before Pivot, then pair declaration order, then pivot order.
Policy extract_policy(const mdp::TransitionGraph& graph, const ValueTable& values);

struct ReportRow {
    std::string task;            // e.g. "CT1(ind, zlm)", "P(zlm, ind, min)"
    mdp::TaskClass task_cls = mdp::TaskClass::CT1;
    DictKey key;
    LanguageCode pivot;          // pivot rows only
    long long induced = -1;      // estimated induced pairs (pivot rows)
    double precision = std::numeric_limits<double>::quiet_NaN();
    double accuracy = std::numeric_limits<double>::quiet_NaN();
    long long required = -1;     // investment rows
    long long paid = -1;         // created + evaluated pairs
    double cost = 0.0;
    bool contingent = false;     // fallback row, excluded from the total
};

struct PlanReport {
    std::vector<ReportRow> rows;
    double total = 0.0;  // sum of non-contingent row costs
    double value_start = std::numeric_limits<double>::quiet_NaN();
};

/// Renders the policy as Table-style rows by walking the most probable
/// branch from the start state. Each pivot expands to a P row (cost 0) and
/// a T4 row; a risky pivot also lists the forced fallback investment as an
/// indented contingent row.
PlanReport rollout_expected_plan(const mdp::TransitionGraph& graph,
                                 const Policy& policy);

/// One itemized Invest row per unsatisfied dictionary; no pivots.
PlanReport baseline_all_investment(const ScenarioConfig& config);

}  // namespace lexiplan::solver
