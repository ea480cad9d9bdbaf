#include "lexiplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lexiplan::sim {

namespace {

int pair_index(const std::vector<DictState>& dicts, const DictKey& key) {
    for (std::size_t i = 0; i < dicts.size(); ++i) {
        if (dicts[i].key == key) return static_cast<int>(i);
    }
    throw std::invalid_argument("unknown pair " + key.str());
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Applies one action against the realized dictionary assignment. Draw
// order is fixed: invest draws accuracy; pivot draws polysemy, then
// precision.
TraceRecord execute_action(std::vector<DictState>& dicts,
                           const mdp::PlanAction& action,
                           const ScenarioConfig& config, const ActorModel& actors,
                           beta::Sampler& rng) {
    TraceRecord rec;
    rec.action = action;
    const int idx = pair_index(dicts, action.key);
    DictState& dict = dicts[idx];

    if (action.kind == mdp::ActionKind::Invest) {
        const long long required =
            std::max<long long>(0, config.min_size - dict.size);
        const double accuracy = clamp(actors.accuracy.sample(rng), 1e-6, 1.0);
        const auto& unit = action.key.contains(config.national_language())
                               ? config.cost_model.ct1
                               : config.cost_model.ct2;
        const double req = static_cast<double>(required);
        rec.sample_kind = TraceRecord::SampleKind::Accuracy;
        rec.sample = accuracy;
        rec.realized_size = required;
        rec.realized_cost = req * unit.creation + (req / accuracy) * unit.evaluation;
        rec.branch = mdp::Branch::Sat;
        dict.status = DictStatus::Satisfied;
        dict.pivot.clear();
        dict.size += required;
        return rec;
    }

    const auto [x, y] = scenario_pair_order(action.key, config);
    const long long sxz = dicts[pair_index(dicts, DictKey(x, action.pivot))].size;
    const long long szy = dicts[pair_index(dicts, DictKey(action.pivot, y))].size;
    const long long cand = lex::candidate_size(sxz, szy);

    const double polysemy = clamp(actors.polysemy.sample(rng), 2.0, 10.0);
    double precision = 0.0;
    const Triple triple{action.key, action.pivot};
    if (auto it = actors.precision.find(triple); it != actors.precision.end()) {
        precision = it->second.sample(rng);
    } else if (actors.default_precision) {
        precision = actors.default_precision->sample(rng);
    } else {
        // Ground truth defaults to the planning prior with its polysemy
        // replaced by the realized draw.
        auto prior = lex::prior_for_pivot(config, x, action.pivot, y);
        prior.beta = polysemy;
        precision = rng.sample(prior);
    }
    precision = clamp(precision, 0.0, 1.0);

    const long long induced = lex::induced_size(precision, cand);
    rec.sample_kind = TraceRecord::SampleKind::Precision;
    rec.sample = precision;
    rec.polysemy = polysemy;
    rec.realized_size = induced;
    rec.realized_cost =
        static_cast<double>(induced) * config.cost_model.t4_evaluation;

    dict.size += induced;
    if (dict.size >= config.min_size) {
        rec.branch = mdp::Branch::Sat;
        dict.status = DictStatus::Satisfied;
        dict.pivot.clear();
    } else {
        rec.branch = mdp::Branch::Unsat;
        dict.status = DictStatus::PivotUnsat;
        dict.pivot = action.pivot;
    }
    return rec;
}

}  // namespace

ExecutionTrace simulate_execution(const mdp::TransitionGraph& graph,
                                  const solver::Policy& policy,
                                  const ActorModel& actors, std::uint64_t seed) {
    const ScenarioConfig& config = graph.config;
    beta::Sampler rng(seed);
    ExecutionTrace trace;
    std::vector<DictState> realized = graph.start().dicts;
    int sid = graph.start_id;
    while (!graph.states[sid].terminal) {
        if (!policy.defined(sid)) {
            throw std::runtime_error("policy gap at state " + std::to_string(sid));
        }
        const auto& tr = policy.transition(graph, sid);
        TraceRecord rec = execute_action(realized, tr.action, config, actors, rng);
        rec.state_id = sid;
        trace.total += rec.realized_cost;

        // Planning continues on the graph branch matching the realized one.
        const mdp::Target* next = &tr.targets[0];
        for (const auto& t : tr.targets) {
            if (t.branch == rec.branch) {
                next = &t;
                break;
            }
        }
        sid = next->state_id;
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

PosteriorUpdate update_posteriors(const std::map<Triple, beta::BetaParams>& priors,
                                  const ObservationBatch& observations) {
    if (priors.empty()) {
        throw std::invalid_argument("posterior update needs at least one prior");
    }
    PosteriorUpdate out;
    for (const auto& [triple, prior] : priors) {
        PosteriorEntry entry;
        entry.prior = prior;
        entry.posterior = prior;
        out.entries.emplace(triple, std::move(entry));
    }
    for (const auto& obs : observations.items) {
        auto it = out.entries.find(obs.triple);
        if (it == out.entries.end()) {
            throw std::invalid_argument("observation for unknown triple " +
                                        obs.triple.str());
        }
        auto& entry = it->second;
        const auto lik = beta::likelihood_from_precision(obs.precision);
        // Sequential batches fold in by parameter addition (commutative).
        entry.likelihood.alpha += lik.alpha;
        entry.likelihood.beta += lik.beta;
        entry.posterior = beta::posterior(entry.posterior, lik);
        entry.observed = true;
    }
    std::vector<beta::BetaParams> parts;
    parts.reserve(out.entries.size());
    for (const auto& [triple, entry] : out.entries) parts.push_back(entry.posterior);
    out.combined = beta::combine_posteriors(parts);
    return out;
}

ExecutionTrace replan_loop(const ScenarioConfig& config, const ActorModel& actors,
                           std::uint64_t seed) {
    config.validate();
    beta::Sampler rng(seed);
    ExecutionTrace trace;
    std::vector<DictState> current =
        lex::apply_existing(lex::generate_dictionary_list(config.languages),
                            config.existing, config.min_size);
    while (!std::all_of(current.begin(), current.end(),
                        [](const DictState& d) { return d.satisfied(); })) {
        // Re-formalize against the realized sizes, then execute exactly the
        // first policy action.
        auto graph = mdp::build_graph_from(current, config);
        const auto values = solver::value_iteration(graph);
        const auto policy = solver::extract_policy(graph, values);
        if (!policy.defined(graph.start_id)) {
            throw std::runtime_error("replan produced no action for a non-final state");
        }
        const auto& tr = policy.transition(graph, graph.start_id);
        TraceRecord rec = execute_action(current, tr.action, config, actors, rng);
        rec.state_id = graph.start_id;
        trace.total += rec.realized_cost;
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

std::uint64_t derive_run_seed(std::uint64_t base, std::uint64_t run_index) {
    // murmur3 finalizer; keeps run streams far apart in splitmix state space.
    std::uint64_t h = base + 0x9e3779b97f4a7c15ULL * (run_index + 1);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::vector<double> simulate_many(const mdp::TransitionGraph& graph,
                                  const solver::Policy& policy,
                                  const ActorModel& actors, std::uint64_t base_seed,
                                  int runs) {
    std::vector<double> totals;
    totals.reserve(runs);
    for (int i = 0; i < runs; ++i) {
        totals.push_back(
            simulate_execution(graph, policy, actors, derive_run_seed(base_seed, i))
                .total);
    }
    return totals;
}

std::vector<double> replan_many(const ScenarioConfig& config,
                                const ActorModel& actors, std::uint64_t base_seed,
                                int runs) {
    std::vector<double> totals;
    totals.reserve(runs);
    for (int i = 0; i < runs; ++i) {
        totals.push_back(replan_loop(config, actors, derive_run_seed(base_seed, i)).total);
    }
    return totals;
}

}  // namespace lexiplan::sim
