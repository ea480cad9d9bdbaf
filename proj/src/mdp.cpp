#include "lexiplan/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lexiplan::mdp {

namespace {

struct PairContext {
    std::vector<DictKey> keys;                       // declaration order
    std::unordered_map<std::string, int> key_index;  // by DictKey::str()
    std::unordered_map<std::string, int> lang_index;

    explicit PairContext(const ScenarioConfig& config) {
        const auto& langs = config.languages;
        for (std::size_t i = 0; i < langs.size(); ++i) {
            lang_index[langs[i]] = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < langs.size(); ++i) {
            for (std::size_t j = i + 1; j < langs.size(); ++j) {
                DictKey key(langs[i], langs[j]);
                key_index[key.str()] = static_cast<int>(keys.size());
                keys.push_back(std::move(key));
            }
        }
    }

    int index_of(const DictKey& key) const {
        auto it = key_index.find(key.str());
        return it == key_index.end() ? -1 : it->second;
    }
};

bool pivot_input_ok(const DictState& d) {
    // PivotUnsat inputs are rejected: their estimated sizes are
    // history-dependent and the induced-size accounting for them is
    // unreliable (duplicate entries cannot be estimated).
    return d.status == DictStatus::Satisfied ||
           d.status == DictStatus::ExistingUnsat;
}

bool is_terminal(const std::vector<DictState>& dicts) {
    return std::all_of(dicts.begin(), dicts.end(),
                       [](const DictState& d) { return d.satisfied(); });
}

// One materialized outcome of applying an action.
struct Outcome {
    Branch branch = Branch::Sat;
    double probability = 1.0;
    long long estimated_size = 0;  // raw estimate recorded on the transition
    DictState result;              // replacement entry for the acted-on pair
};

struct ActionEffect {
    double cost = 0.0;
    std::vector<Outcome> outcomes;
};

ActionEffect compute_effect(const std::vector<DictState>& dicts,
                            const PairContext& ctx, const PlanAction& action,
                            const ScenarioConfig& config) {
    const int idx = ctx.index_of(action.key);
    if (idx < 0) throw std::invalid_argument("action on unknown pair " + action.key.str());
    if (dicts.size() != ctx.keys.size() || !(dicts[idx].key == action.key)) {
        throw std::invalid_argument(
            "dictionary assignment must list every scenario pair in declaration order");
    }
    const DictState& current = dicts[idx];
    if (current.satisfied()) {
        throw std::invalid_argument("action targets a satisfied dictionary " +
                                    action.key.str());
    }
    const long long required = lex::required_size(current, config.min_size);
    const CostModel& cm = config.cost_model;

    ActionEffect effect;
    if (action.kind == ActionKind::Invest) {
        const CostModel::Unit& unit =
            action.key.contains(config.national_language()) ? cm.ct1 : cm.ct2;
        const double req = static_cast<double>(required);
        if (cm.formula == CostModel::Formula::Itemized) {
            // Creation paid per correct pair, evaluation per ordered pair.
            effect.cost = req * unit.creation +
                          (req / cm.human_accuracy) * unit.evaluation;
        } else {
            effect.cost = (req / cm.human_accuracy) * (unit.creation + unit.evaluation);
        }
        Outcome sat;
        sat.branch = Branch::Sat;
        sat.probability = 1.0;
        sat.estimated_size = current.size + required;  // == min_size
        sat.result = DictState{action.key, DictStatus::Satisfied, {}, config.min_size};
        effect.outcomes.push_back(std::move(sat));
        return effect;
    }

    const auto [x, y] = scenario_pair_order(action.key, config);
    const int ixz = ctx.index_of(DictKey(x, action.pivot));
    const int izy = ctx.index_of(DictKey(action.pivot, y));
    if (ixz < 0 || izy < 0) {
        throw std::invalid_argument("pivot language " + action.pivot +
                                    " has no input pairs for " + action.key.str());
    }
    const long long cand = lex::candidate_size(dicts[ixz].size, dicts[izy].size);
    const auto prior = lex::prior_for_pivot(config, x, action.pivot, y);
    const double prior_mean = beta::mean(prior);
    effect.cost = cm.pivot_charge == CostModel::PivotCharge::InducedSet
                      ? prior_mean * static_cast<double>(cand) * cm.t4_evaluation
                      : static_cast<double>(cand) * cm.t4_evaluation;

    const double k = lex::min_precision_k(required, cand);
    const double p_sat = k >= 1.0 ? 0.0 : beta::survival(k, prior);

    if (p_sat > 0.0) {
        const double upper = beta::upper_truncated_mean(k, prior);
        const long long est =
            std::max(config.min_size,
                     lex::induced_size(upper, cand) + current.size);
        Outcome sat;
        sat.branch = Branch::Sat;
        sat.probability = p_sat;
        sat.estimated_size = est;
        // Stored size capped at min_size so downstream candidate sizes stay
        // conservative and state contents stay canonical.
        sat.result = DictState{action.key, DictStatus::Satisfied, {}, config.min_size};
        effect.outcomes.push_back(std::move(sat));
    }
    if (p_sat < 1.0) {
        const double lower = k >= 1.0 ? prior_mean
                                      : beta::lower_truncated_mean(k, prior);
        long long est = lex::induced_size(lower, cand) + current.size;
        est = std::min(est, config.min_size - 1);  // PivotUnsat stays below min
        est = std::max<long long>(est, 1);
        Outcome unsat;
        unsat.branch = Branch::Unsat;
        unsat.probability = 1.0 - p_sat;
        unsat.estimated_size = est;
        unsat.result = DictState{action.key, DictStatus::PivotUnsat, action.pivot, est};
        effect.outcomes.push_back(std::move(unsat));
    }
    return effect;
}

// Packed per-dict word for state interning.
std::uint64_t pack_dict(const DictState& d, const PairContext& ctx, bool merge_pivot) {
    std::uint64_t pivot_bits = 0;
    if (d.status == DictStatus::PivotUnsat && !merge_pivot) {
        auto it = ctx.lang_index.find(d.pivot);
        pivot_bits = it == ctx.lang_index.end() ? 63
                                                : static_cast<std::uint64_t>(it->second) + 1;
    }
    return (static_cast<std::uint64_t>(d.size) << 8) | (pivot_bits << 2) |
           static_cast<std::uint64_t>(d.status);
}

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : key) {
            h ^= w;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::string PlanAction::label(const ScenarioConfig& config) const {
    const auto [x, y] = scenario_pair_order(key, config);
    if (kind == ActionKind::Invest) return "invest(" + x + ", " + y + ")";
    return "pivot(" + x + ", " + pivot + ", " + y + ")";
}

TaskClass task_class(const PlanAction& action, const ScenarioConfig& config) {
    if (action.kind == ActionKind::Pivot) return TaskClass::T4;
    return action.key.contains(config.national_language()) ? TaskClass::CT1
                                                           : TaskClass::CT2;
}

std::vector<PlanAction> enumerate_actions(const std::vector<DictState>& dicts,
                                          const ScenarioConfig& config) {
    const PairContext ctx(config);
    std::vector<PlanAction> actions;
    for (std::size_t i = 0; i < ctx.keys.size(); ++i) {
        const DictState& d = dicts[i];
        if (d.satisfied()) continue;  // C1
        actions.push_back(PlanAction{ActionKind::Invest, d.key, {}});
        if (d.status == DictStatus::PivotUnsat) continue;  // C3
        const auto [x, y] = scenario_pair_order(d.key, config);
        for (const auto& z : config.languages) {  // C2 + C4
            if (z == x || z == y) continue;
            const int ixz = ctx.index_of(DictKey(x, z));
            const int izy = ctx.index_of(DictKey(z, y));
            if (ixz < 0 || izy < 0) continue;
            if (pivot_input_ok(dicts[ixz]) && pivot_input_ok(dicts[izy])) {
                actions.push_back(PlanAction{ActionKind::Pivot, d.key, z});
            }
        }
    }
    return actions;
}

std::vector<std::pair<std::vector<DictState>, Branch>> target_states(
    const std::vector<DictState>& dicts, const PlanAction& action,
    const ScenarioConfig& config) {
    const PairContext ctx(config);
    const auto effect = compute_effect(dicts, ctx, action, config);
    const int idx = ctx.index_of(action.key);
    std::vector<std::pair<std::vector<DictState>, Branch>> out;
    out.reserve(effect.outcomes.size());
    for (const auto& o : effect.outcomes) {
        std::vector<DictState> next = dicts;
        next[idx] = o.result;
        out.emplace_back(std::move(next), o.branch);
    }
    return out;
}

double transition_prob(const std::vector<DictState>& dicts,
                       const PlanAction& action, Branch branch,
                       const ScenarioConfig& config) {
    const PairContext ctx(config);
    const auto effect = compute_effect(dicts, ctx, action, config);
    for (const auto& o : effect.outcomes) {
        if (o.branch == branch) return o.probability;
    }
    return 0.0;
}

std::pair<long long, long long> estimate_result_sizes(
    const std::vector<DictState>& dicts, const PlanAction& action,
    const ScenarioConfig& config) {
    if (action.kind != ActionKind::Pivot) {
        throw std::invalid_argument("result-size estimation applies to pivot actions");
    }
    const PairContext ctx(config);
    const int idx = ctx.index_of(action.key);
    if (idx < 0) throw std::invalid_argument("unknown pair " + action.key.str());
    const DictState& current = dicts[idx];
    const auto [x, y] = scenario_pair_order(action.key, config);
    const long long cand =
        lex::candidate_size(dicts[ctx.index_of(DictKey(x, action.pivot))].size,
                            dicts[ctx.index_of(DictKey(action.pivot, y))].size);
    if (cand == 0) return {current.size, current.size};
    const long long required = lex::required_size(current, config.min_size);
    const double k = lex::min_precision_k(required, cand);
    const auto prior = lex::prior_for_pivot(config, x, action.pivot, y);
    if (k >= 1.0) {
        // Satisfaction is impossible; the whole candidate set is the ceiling.
        return {current.size + cand,
                lex::induced_size(beta::mean(prior), cand) + current.size};
    }
    const long long sat =
        lex::induced_size(beta::upper_truncated_mean(k, prior), cand) + current.size;
    const long long unsat =
        lex::induced_size(beta::lower_truncated_mean(k, prior), cand) + current.size;
    return {sat, unsat};
}

double action_cost(const std::vector<DictState>& dicts, const PlanAction& action,
                   Branch /*branch*/, const ScenarioConfig& config) {
    const PairContext ctx(config);
    return compute_effect(dicts, ctx, action, config).cost;
}

TransitionGraph build_graph(const ScenarioConfig& config) {
    config.validate();
    auto start = lex::apply_existing(lex::generate_dictionary_list(config.languages),
                                     config.existing, config.min_size);
    return build_graph_from(std::move(start), config);
}

TransitionGraph build_graph_from(std::vector<DictState> start,
                                 const ScenarioConfig& config) {
    config.validate();
    const PairContext ctx(config);
    if (start.size() != ctx.keys.size()) {
        throw std::invalid_argument("start state must cover every scenario pair");
    }
    for (std::size_t i = 0; i < start.size(); ++i) {
        if (!(start[i].key == ctx.keys[i])) {
            throw std::invalid_argument("start state pairs must follow declaration order");
        }
    }

    TransitionGraph graph;
    graph.config = config;

    std::unordered_map<std::vector<std::uint64_t>, int, KeyHash> ids;
    auto intern = [&](std::vector<DictState>&& dicts) -> int {
        std::vector<std::uint64_t> key(dicts.size());
        for (std::size_t i = 0; i < dicts.size(); ++i) {
            key[i] = pack_dict(dicts[i], ctx, config.merge_pivot_identity);
        }
        auto [it, inserted] = ids.try_emplace(std::move(key),
                                              static_cast<int>(graph.states.size()));
        if (inserted) {
            PlanState state;
            state.id = it->second;
            state.terminal = is_terminal(dicts);
            state.dicts = std::move(dicts);
            graph.states.push_back(std::move(state));
            if (graph.states.size() > config.state_budget) {
                throw BudgetError(config.state_budget);
            }
        }
        return it->second;
    };

    intern(std::move(start));
    graph.start_id = 0;

    // BFS in discovery order == lowest-id-first processing.
    for (std::size_t sid = 0; sid < graph.states.size(); ++sid) {
        graph.transitions.emplace_back();
        if (graph.states[sid].terminal) continue;
        const auto actions = enumerate_actions(graph.states[sid].dicts, config);
        auto& row = graph.transitions.back();
        row.reserve(actions.size());
        for (const auto& action : actions) {
            // intern() may reallocate graph.states; never hold a reference
            // to a state across it, re-index instead.
            const auto effect =
                compute_effect(graph.states[sid].dicts, ctx, action, config);
            Transition tr;
            tr.action = action;
            tr.targets.reserve(effect.outcomes.size());
            const int pair_idx = ctx.index_of(action.key);
            for (const auto& o : effect.outcomes) {
                std::vector<DictState> next = graph.states[sid].dicts;
                next[pair_idx] = o.result;
                Target t;
                t.state_id = intern(std::move(next));
                t.branch = o.branch;
                t.probability = o.probability;
                t.cost = effect.cost;
                t.estimated_size = o.estimated_size;
                tr.targets.push_back(t);
            }
            graph.edge_count += tr.targets.size();
            row.push_back(std::move(tr));
        }
    }
    return graph;
}

}  // namespace lexiplan::mdp
