#include "lexiplan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lexiplan::solver {

namespace {

// Reverse topological order (children before parents) with cycle detection.
std::vector<int> topo_post_order(const mdp::TransitionGraph& graph) {
    const int n = static_cast<int>(graph.states.size());
    std::vector<int> indegree(n, 0);
    for (const auto& row : graph.transitions) {
        for (const auto& tr : row) {
            for (const auto& t : tr.targets) ++indegree[t.state_id];
        }
    }
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> ready;
    for (int i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        const int node = ready.back();
        ready.pop_back();
        order.push_back(node);
        for (const auto& tr : graph.transitions[node]) {
            for (const auto& t : tr.targets) {
                if (--indegree[t.state_id] == 0) ready.push_back(t.state_id);
            }
        }
    }
    if (static_cast<int>(order.size()) != n) {
        throw std::runtime_error("transition graph contains a cycle");
    }
    std::reverse(order.begin(), order.end());  // children first
    return order;
}

double q_value(const mdp::Transition& tr, const ValueTable& values) {
    double q = 0.0;
    for (const auto& t : tr.targets) {
        q += t.probability * (t.cost + values[t.state_id]);
    }
    return q;
}

// Invest before Pivot, then pair declaration order, then pivot order.
std::tuple<int, int, int> tie_key(const mdp::PlanAction& action,
                                  const ScenarioConfig& config) {
    const auto [x, y] = scenario_pair_order(action.key, config);
    const int pair_rank = config.language_index(x) * 64 + config.language_index(y);
    return {action.kind == mdp::ActionKind::Invest ? 0 : 1, pair_rank,
            action.pivot.empty() ? -1 : config.language_index(action.pivot)};
}

long long ordered_count(long long required, double accuracy) {
    return std::llround(static_cast<double>(required) / accuracy);
}

ReportRow invest_row(const DictKey& key, long long required, double cost,
                     const ScenarioConfig& config) {
    const auto [x, y] = scenario_pair_order(key, config);
    const bool national = key.contains(config.national_language());
    ReportRow row;
    row.task_cls = national ? mdp::TaskClass::CT1 : mdp::TaskClass::CT2;
    row.task = std::string(national ? "CT1(" : "CT2(") + x + ", " + y + ")";
    row.key = key;
    row.accuracy = config.cost_model.human_accuracy;
    row.required = required;
    row.paid = required + ordered_count(required, config.cost_model.human_accuracy);
    row.cost = cost;
    return row;
}

}  // namespace

ValueTable value_iteration(const mdp::TransitionGraph& graph) {
    const auto order = topo_post_order(graph);
    ValueTable values(graph.states.size(), 0.0);
    for (int node : order) {
        const auto& row = graph.transitions[node];
        if (row.empty()) continue;  // terminal
        double best = std::numeric_limits<double>::infinity();
        for (const auto& tr : row) best = std::min(best, q_value(tr, values));
        values[node] = best;
    }
    return values;
}

Policy extract_policy(const mdp::TransitionGraph& graph, const ValueTable& values) {
    Policy policy;
    policy.choice.assign(graph.states.size(), -1);
    for (std::size_t sid = 0; sid < graph.states.size(); ++sid) {
        const auto& row = graph.transitions[sid];
        if (row.empty()) continue;
        int best_idx = 0;
        double best_q = q_value(row[0], values);
        for (std::size_t i = 1; i < row.size(); ++i) {
            const double q = q_value(row[i], values);
            const double tie_band = 1e-9 * std::max({1.0, std::fabs(q), std::fabs(best_q)});
            if (q < best_q - tie_band) {
                best_q = q;
                best_idx = static_cast<int>(i);
            } else if (q <= best_q + tie_band &&
                       tie_key(row[i].action, graph.config) <
                           tie_key(row[best_idx].action, graph.config)) {
                best_q = std::min(best_q, q);
                best_idx = static_cast<int>(i);
            }
        }
        policy.choice[sid] = best_idx;
    }
    return policy;
}

PlanReport rollout_expected_plan(const mdp::TransitionGraph& graph,
                                 const Policy& policy) {
    const ScenarioConfig& config = graph.config;
    PlanReport report;
    int sid = graph.start_id;
    while (!graph.states[sid].terminal) {
        if (!policy.defined(sid)) {
            throw std::runtime_error("policy gap at state " + std::to_string(sid));
        }
        const auto& tr = policy.transition(graph, sid);
        const auto& action = tr.action;
        const auto [x, y] = scenario_pair_order(action.key, config);

        if (action.kind == mdp::ActionKind::Invest) {
            long long required = 0;
            for (const auto& d : graph.states[sid].dicts) {
                if (d.key == action.key) {
                    required = lex::required_size(d, config.min_size);
                    break;
                }
            }
            ReportRow row = invest_row(action.key, required, tr.targets[0].cost, config);
            report.total += row.cost;
            report.rows.push_back(std::move(row));
            sid = tr.targets[0].state_id;
            continue;
        }

        // Pivot: induced estimate from the overall prior mean and the
        // candidate set in the current state.
        const auto prior = lex::prior_for_pivot(config, x, action.pivot, y);
        long long cand = 0;
        long long existing = 0;
        for (const auto& d : graph.states[sid].dicts) {
            if (d.key == action.key) existing = d.size;
        }
        {
            const auto& dicts = graph.states[sid].dicts;
            long long sxz = 0, szy = 0;
            const DictKey kxz(x, action.pivot);
            const DictKey kzy(action.pivot, y);
            for (const auto& d : dicts) {
                if (d.key == kxz) sxz = d.size;
                if (d.key == kzy) szy = d.size;
            }
            cand = lex::candidate_size(sxz, szy);
        }
        const long long induced = lex::induced_size(beta::mean(prior), cand);

        ReportRow prow;
        prow.task = "P(" + x + ", " + action.pivot + ", " + y + ")";
        if (existing > 0) prow.task += " - " + std::to_string(existing) + " exist";
        prow.task_cls = mdp::TaskClass::T4;
        prow.key = action.key;
        prow.pivot = action.pivot;
        prow.induced = induced;
        prow.precision = beta::mean(prior);
        prow.cost = 0.0;
        report.rows.push_back(std::move(prow));

        ReportRow erow;
        erow.task = "T4(" + x + ", " + action.pivot + ", " + y + ")";
        erow.task_cls = mdp::TaskClass::T4;
        erow.key = action.key;
        erow.pivot = action.pivot;
        erow.accuracy = 1.0;
        erow.paid = induced;
        erow.cost = tr.targets[0].cost;
        report.total += erow.cost;
        report.rows.push_back(std::move(erow));

        // Follow the most probable branch; document the other branch's
        // forced fallback investment as a contingent row.
        const mdp::Target* main = &tr.targets[0];
        for (const auto& t : tr.targets) {
            if (t.probability > main->probability) main = &t;
        }
        for (const auto& t : tr.targets) {
            if (&t == main || t.branch != mdp::Branch::Unsat) continue;
            const long long fallback_required =
                std::max<long long>(0, config.min_size - t.estimated_size);
            const auto& dicts = graph.states[t.state_id].dicts;
            mdp::PlanAction fallback{mdp::ActionKind::Invest, action.key, {}};
            ReportRow crow = invest_row(action.key, fallback_required,
                                        mdp::action_cost(dicts, fallback,
                                                         mdp::Branch::Sat, config),
                                        config);
            crow.task = "if unsat: " + crow.task;
            crow.contingent = true;
            report.rows.push_back(std::move(crow));
        }
        sid = main->state_id;
    }
    return report;
}

PlanReport baseline_all_investment(const ScenarioConfig& config) {
    config.validate();
    const auto dicts =
        lex::apply_existing(lex::generate_dictionary_list(config.languages),
                            config.existing, config.min_size);
    // The baseline is always itemized, whatever the planner formula is.
    ScenarioConfig itemized = config;
    itemized.cost_model.formula = CostModel::Formula::Itemized;
    PlanReport report;
    for (const auto& d : dicts) {
        if (d.satisfied()) continue;
        const long long required = lex::required_size(d, config.min_size);
        mdp::PlanAction invest{mdp::ActionKind::Invest, d.key, {}};
        ReportRow row = invest_row(
            d.key, required,
            mdp::action_cost(dicts, invest, mdp::Branch::Sat, itemized), itemized);
        if (d.size > 0) row.task += " - " + std::to_string(d.size) + " exist";
        report.total += row.cost;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace lexiplan::solver
