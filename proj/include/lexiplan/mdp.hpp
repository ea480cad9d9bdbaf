#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lexiplan/lexicon.hpp"

namespace lexiplan::mdp {

enum class ActionKind : std::uint8_t { Invest, Pivot };

struct PlanAction {
    ActionKind kind = ActionKind::Invest;
    DictKey key;
    LanguageCode pivot;  // empty for Invest

    /// "ai(x,y)" / "ap(x,z,y)" with the pair printed in scenario order.
    std::string label(const ScenarioConfig& config) const;
    friend bool operator==(const PlanAction&, const PlanAction&) = default;
};

enum class Branch : std::uint8_t { Sat, Unsat };
enum class TaskClass : std::uint8_t { CT1, CT2, T4 };

struct Target {
    int state_id = -1;
    Branch branch = Branch::Sat;
    double probability = 1.0;
    double cost = 0.0;
    long long estimated_size = 0;  // raw result-size estimate (Eqs. on truncated means)
};

struct Transition {
    PlanAction action;
    std::vector<Target> targets;
};

struct PlanState {
    int id = -1;
    std::vector<DictState> dicts;  // one per scenario pair, declaration order
    bool terminal = false;
};

struct TransitionGraph {
    ScenarioConfig config;
    std::vector<PlanState> states;
    std::vector<std::vector<Transition>> transitions;  // indexed by state id
    int start_id = 0;
    std::size_t edge_count = 0;

    const PlanState& start() const { return states[start_id]; }
};

/// Thrown when graph generation exceeds config.state_budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(std::size_t budget)
        : std::runtime_error("state budget exceeded (" + std::to_string(budget) +
                             " states); scenario too large for exhaustive graph"),
          budget_(budget) {}
    std::size_t budget() const { return budget_; }

private:
    std::size_t budget_;
};

/// CT1 when the pair includes the national language, CT2 otherwise;
/// pivots evaluate as T4.
TaskClass task_class(const PlanAction& action, const ScenarioConfig& config);

/// Constraint-filtered actions for one (non-terminal) state:
/// C1 skip Satisfied dicts; C2 NotExisting/ExistingUnsat take Invest and
/// Pivot; C3 PivotUnsat takes Invest only; C4 pivot inputs must be
/// Satisfied or ExistingUnsat. Order: pair declaration order, Invest first,
/// then pivots by pivot-language order.
std::vector<PlanAction> enumerate_actions(const std::vector<DictState>& dicts,
                                          const ScenarioConfig& config);

/// Successor dictionary vectors with their branch tags. Invest yields one
/// Sat successor at exactly min_size. A pivot yields a Sat successor
/// (stored size capped at min_size) and, unless certain to fail, an Unsat
/// successor tagged with the pivot language.
std::vector<std::pair<std::vector<DictState>, Branch>> target_states(
    const std::vector<DictState>& dicts, const PlanAction& action,
    const ScenarioConfig& config);

/// Invest -> 1. Pivot -> cdf(k, prior) for Unsat, survival(k, prior) for
/// Sat; k >= 1 forces the Unsat branch.
double transition_prob(const std::vector<DictState>& dicts,
                       const PlanAction& action, Branch branch,
                       const ScenarioConfig& config);

/// (sat, unsat) size estimates for a pivot action: truncated-mean times
/// candidates, plus the existing size (merged additively).
std::pair<long long, long long> estimate_result_sizes(
    const std::vector<DictState>& dicts, const PlanAction& action,
    const ScenarioConfig& config);

/// Cost in unit time of taking `action`; branch-independent for pivots.
double action_cost(const std::vector<DictState>& dicts, const PlanAction& action,
                   Branch branch, const ScenarioConfig& config);

/// Full state-transition graph: BFS from the start state in id order,
/// deduplicating states by content. Throws BudgetError past the cap.
TransitionGraph build_graph(const ScenarioConfig& config);

/// Same, from an explicit start assignment (re-planning entry point).
TransitionGraph build_graph_from(std::vector<DictState> start,
                                 const ScenarioConfig& config);

}  // namespace lexiplan::mdp
