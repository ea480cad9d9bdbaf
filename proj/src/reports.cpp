#include "lexiplan/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace lexiplan::io {

using nlohmann::json;

namespace {

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

// Whole unit-time figures where the value is integral (Table 2/3 style),
// two decimals otherwise.
std::string fmt_cost(double cost) {
    const double rounded = std::round(cost);
    if (std::fabs(cost - rounded) < 5e-3) {
        return std::to_string(static_cast<long long>(rounded));
    }
    return fmt(cost, 2);
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

json action_to_json(const mdp::PlanAction& action, const ScenarioConfig& config) {
    const auto [x, y] = scenario_pair_order(action.key, config);
    json j;
    j["kind"] = action.kind == mdp::ActionKind::Invest ? "invest" : "pivot";
    j["pair"] = x + "-" + y;
    if (action.kind == mdp::ActionKind::Pivot) j["pivot"] = action.pivot;
    return j;
}

mdp::PlanAction action_from_json(const json& j) {
    mdp::PlanAction action;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "invest") {
        action.kind = mdp::ActionKind::Invest;
    } else if (kind == "pivot") {
        action.kind = mdp::ActionKind::Pivot;
        action.pivot = j.at("pivot").get<std::string>();
    } else {
        throw ScenarioError("unknown action kind '" + kind + "'");
    }
    action.key = parse_dict_key(j.at("pair").get<std::string>());
    return action;
}

json beta_to_json(const beta::BetaParams& p) {
    return json{{"alpha", p.alpha}, {"beta", p.beta}, {"mean", beta::mean(p)}};
}

std::string triple_str(const sim::Triple& t) {
    return t.key.a + "-" + t.pivot + "-" + t.key.b;
}

}  // namespace

std::string report_to_text(const solver::PlanReport& report,
                           const ScenarioConfig& /*config*/) {
    std::ostringstream out;
    out << "# lexiplan report 1\n";
    out << pad_right("Task following plan", 42) << pad_left("#Induced", 10)
        << pad_left("Precision", 11) << pad_left("Accuracy", 10)
        << pad_left("#Paid", 10) << pad_left("Cost", 12) << "\n";
    for (const auto& row : report.rows) {
        std::string task = row.contingent ? "  " + row.task : row.task;
        out << pad_right(task, 42)
            << pad_left(row.induced >= 0 ? std::to_string(row.induced) : "-", 10)
            << pad_left(std::isnan(row.precision) ? "-" : fmt(row.precision, 4), 11)
            << pad_left(std::isnan(row.accuracy) ? "-" : fmt(row.accuracy, 2), 10)
            << pad_left(row.paid >= 0 ? std::to_string(row.paid) : "-", 10)
            << pad_left(fmt_cost(row.cost), 12) << "\n";
    }
    out << pad_right("TOTAL", 42) << pad_left("", 10) << pad_left("", 11)
        << pad_left("", 10) << pad_left("", 10) << pad_left(fmt_cost(report.total), 12)
        << "\n";
    if (!std::isnan(report.value_start)) {
        out << "expected total cost from start: " << fmt(report.value_start, 2)
            << "\n";
    }
    return out.str();
}

std::string report_to_json(const solver::PlanReport& report,
                           const ScenarioConfig& config) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        const auto [x, y] = scenario_pair_order(row.key, config);
        json r;
        r["task"] = row.task;
        r["pair"] = x + "-" + y;
        if (!row.pivot.empty()) r["pivot"] = row.pivot;
        if (row.induced >= 0) r["induced"] = row.induced;
        if (!std::isnan(row.precision)) r["precision"] = row.precision;
        if (!std::isnan(row.accuracy)) r["accuracy"] = row.accuracy;
        if (row.required >= 0) r["required"] = row.required;
        if (row.paid >= 0) r["paid"] = row.paid;
        r["cost"] = row.cost;
        r["contingent"] = row.contingent;
        rows.push_back(std::move(r));
    }
    json doc;
    doc["schema"] = "lexiplan/report@1";
    doc["rows"] = std::move(rows);
    doc["total"] = report.total;
    if (!std::isnan(report.value_start)) doc["expected_total"] = report.value_start;
    return doc.dump(2) + "\n";
}

std::string policy_to_json(const mdp::TransitionGraph& graph,
                           const solver::Policy& policy) {
    json entries = json::array();
    for (std::size_t sid = 0; sid < graph.states.size(); ++sid) {
        if (!policy.defined(static_cast<int>(sid))) continue;
        const auto& tr = policy.transition(graph, static_cast<int>(sid));
        entries.push_back(json{{"state", sid},
                               {"action", action_to_json(tr.action, graph.config)}});
    }
    json doc;
    doc["schema"] = "lexiplan/policy@1";
    doc["states"] = graph.states.size();
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

solver::Policy policy_from_json(const std::string& text,
                                const mdp::TransitionGraph& graph) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("policy document: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", "") != "lexiplan/policy@1") {
        throw ScenarioError("policy document has an unexpected schema tag");
    }
    if (doc.value("states", std::size_t{0}) != graph.states.size()) {
        throw ScenarioError("policy does not match the scenario graph size");
    }
    solver::Policy policy;
    policy.choice.assign(graph.states.size(), -1);
    for (const auto& entry : doc.at("entries")) {
        const auto sid = entry.at("state").get<std::size_t>();
        if (sid >= graph.states.size()) {
            throw ScenarioError("policy entry for unknown state");
        }
        const auto action = action_from_json(entry.at("action"));
        const auto& row = graph.transitions[sid];
        int found = -1;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i].action == action) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) {
            throw ScenarioError("policy action not available in state " +
                                std::to_string(sid));
        }
        policy.choice[sid] = found;
    }
    return policy;
}

std::string graph_to_json(const mdp::TransitionGraph& graph) {
    const auto& config = graph.config;
    json states = json::array();
    for (const auto& state : graph.states) {
        json dicts = json::array();
        for (const auto& d : state.dicts) {
            const auto [x, y] = scenario_pair_order(d.key, config);
            json e;
            e["pair"] = x + "-" + y;
            e["status"] = to_string(d.status);
            e["size"] = d.size;
            if (d.status == DictStatus::PivotUnsat) e["pivot"] = d.pivot;
            dicts.push_back(std::move(e));
        }
        states.push_back(json{{"id", state.id},
                              {"terminal", state.terminal},
                              {"dicts", std::move(dicts)}});
    }
    json transitions = json::array();
    for (std::size_t sid = 0; sid < graph.transitions.size(); ++sid) {
        for (const auto& tr : graph.transitions[sid]) {
            json targets = json::array();
            for (const auto& t : tr.targets) {
                targets.push_back(json{
                    {"state", t.state_id},
                    {"branch", t.branch == mdp::Branch::Sat ? "sat" : "unsat"},
                    {"probability", t.probability},
                    {"cost", t.cost},
                    {"estimated_size", t.estimated_size}});
            }
            transitions.push_back(json{{"state", sid},
                                       {"action", action_to_json(tr.action, config)},
                                       {"targets", std::move(targets)}});
        }
    }
    json doc;
    doc["schema"] = "lexiplan/graph@1";
    doc["start"] = graph.start_id;
    doc["states"] = std::move(states);
    doc["transitions"] = std::move(transitions);
    return doc.dump(2) + "\n";
}

std::string graph_to_dot(const mdp::TransitionGraph& graph) {
    std::ostringstream out;
    out << "digraph plan {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (const auto& state : graph.states) {
        out << "  s" << state.id;
        if (state.terminal) {
            out << " [shape=doublecircle]";
        } else if (state.id == graph.start_id) {
            out << " [shape=box]";
        }
        out << ";\n";
    }
    for (std::size_t sid = 0; sid < graph.transitions.size(); ++sid) {
        for (const auto& tr : graph.transitions[sid]) {
            for (const auto& t : tr.targets) {
                out << "  s" << sid << " -> s" << t.state_id << " [label=\""
                    << tr.action.label(graph.config)
                    << (t.branch == mdp::Branch::Sat ? " sat " : " unsat ")
                    << fmt(t.probability, 3) << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

std::string trace_to_text(const sim::ExecutionTrace& trace,
                          const ScenarioConfig& config) {
    std::ostringstream out;
    out << "# lexiplan trace 1\n";
    out << pad_right("Action", 30) << pad_left("Sample", 10)
        << pad_left("Polysemy", 10) << pad_left("Realized", 10)
        << pad_left("Cost", 12) << pad_left("Branch", 8) << "\n";
    for (const auto& rec : trace.records) {
        out << pad_right(rec.action.label(config), 30)
            << pad_left(fmt(rec.sample, 4), 10)
            << pad_left(rec.sample_kind == sim::TraceRecord::SampleKind::Precision
                            ? fmt(rec.polysemy, 3)
                            : std::string("-"),
                        10)
            << pad_left(std::to_string(rec.realized_size), 10)
            << pad_left(fmt_cost(rec.realized_cost), 12)
            << pad_left(rec.branch == mdp::Branch::Sat ? "sat" : "unsat", 8) << "\n";
    }
    out << pad_right("TOTAL", 30) << pad_left("", 10) << pad_left("", 10)
        << pad_left("", 10) << pad_left(fmt_cost(trace.total), 12) << "\n";
    return out.str();
}

std::string trace_to_json(const sim::ExecutionTrace& trace,
                          const ScenarioConfig& config) {
    json records = json::array();
    for (const auto& rec : trace.records) {
        json r;
        r["state"] = rec.state_id;
        r["action"] = action_to_json(rec.action, config);
        r["sample_kind"] =
            rec.sample_kind == sim::TraceRecord::SampleKind::Precision ? "precision"
                                                                       : "accuracy";
        r["sample"] = rec.sample;
        if (rec.sample_kind == sim::TraceRecord::SampleKind::Precision) {
            r["polysemy"] = rec.polysemy;
        }
        r["realized_size"] = rec.realized_size;
        r["realized_cost"] = rec.realized_cost;
        r["branch"] = rec.branch == mdp::Branch::Sat ? "sat" : "unsat";
        records.push_back(std::move(r));
    }
    json doc;
    doc["schema"] = "lexiplan/trace@1";
    doc["records"] = std::move(records);
    doc["total"] = trace.total;
    return doc.dump(2) + "\n";
}

std::string posteriors_to_json(const sim::PosteriorUpdate& update) {
    json entries = json::array();
    for (const auto& [triple, entry] : update.entries) {
        json e;
        e["triple"] = json::array({triple.key.a, triple.pivot, triple.key.b});
        e["prior"] = beta_to_json(entry.prior);
        if (entry.observed) {
            e["likelihood"] = json{{"alpha", entry.likelihood.alpha},
                                   {"beta", entry.likelihood.beta}};
        }
        e["posterior"] = beta_to_json(entry.posterior);
        e["observed"] = entry.observed;
        entries.push_back(std::move(e));
    }
    json doc;
    doc["schema"] = "lexiplan/posteriors@1";
    doc["entries"] = std::move(entries);
    doc["combined"] = beta_to_json(update.combined);
    return doc.dump(2) + "\n";
}

std::string posteriors_to_text(const sim::PosteriorUpdate& update) {
    std::ostringstream out;
    out << "# lexiplan posteriors 1\n";
    out << pad_right("Triple", 18) << pad_left("Prior a", 10) << pad_left("b", 8)
        << pad_left("E(X)", 8) << pad_left("Lik a", 10) << pad_left("b", 8)
        << pad_left("Post a", 10) << pad_left("b", 8) << pad_left("E(X)", 8) << "\n";
    for (const auto& [triple, entry] : update.entries) {
        out << pad_right(triple_str(triple), 18)
            << pad_left(fmt(entry.prior.alpha, 3), 10)
            << pad_left(fmt(entry.prior.beta, 3), 8)
            << pad_left(fmt(beta::mean(entry.prior), 3), 8)
            << pad_left(entry.observed ? fmt(entry.likelihood.alpha, 3) : "-", 10)
            << pad_left(entry.observed ? fmt(entry.likelihood.beta, 3) : "-", 8)
            << pad_left(fmt(entry.posterior.alpha, 3), 10)
            << pad_left(fmt(entry.posterior.beta, 3), 8)
            << pad_left(fmt(beta::mean(entry.posterior), 3), 8) << "\n";
    }
    out << pad_right("COMBINED", 18) << pad_left("", 10) << pad_left("", 8)
        << pad_left("", 8) << pad_left("", 10) << pad_left("", 8)
        << pad_left(fmt(update.combined.alpha, 3), 10)
        << pad_left(fmt(update.combined.beta, 3), 8)
        << pad_left(fmt(beta::mean(update.combined), 3), 8) << "\n";
    return out.str();
}

std::string priors_to_json(const std::map<sim::Triple, beta::BetaParams>& priors) {
    json entries = json::array();
    for (const auto& [triple, p] : priors) {
        entries.push_back(json{
            {"triple", json::array({triple.key.a, triple.pivot, triple.key.b})},
            {"alpha", p.alpha},
            {"beta", p.beta}});
    }
    json doc;
    doc["schema"] = "lexiplan/priors@1";
    doc["priors"] = std::move(entries);
    return doc.dump(2) + "\n";
}

SimulationSummary SimulationSummary::from_totals(const std::vector<double>& totals) {
    SimulationSummary s;
    s.runs = static_cast<int>(totals.size());
    if (totals.empty()) return s;
    std::vector<double> sorted = totals;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    s.mean = sum / s.runs;
    double var = 0.0;
    for (double t : sorted) var += (t - s.mean) * (t - s.mean);
    s.stddev = s.runs > 1 ? std::sqrt(var / (s.runs - 1)) : 0.0;
    auto quantile = [&](double q) {
        const auto rank = static_cast<std::size_t>(
            std::min<double>(sorted.size() - 1, std::ceil(q * sorted.size()) - 1));
        return sorted[std::max<std::size_t>(rank, 0)];
    };
    s.p10 = quantile(0.10);
    s.p50 = quantile(0.50);
    s.p90 = quantile(0.90);
    return s;
}

namespace {

json summary_body(const SimulationSummary& s) {
    return json{{"runs", s.runs}, {"mean", s.mean},   {"stddev", s.stddev},
                {"min", s.min},   {"max", s.max},     {"p10", s.p10},
                {"p50", s.p50},   {"p90", s.p90}};
}

}  // namespace

std::string summary_to_json(const SimulationSummary& summary, const std::string& mode,
                            double value_start) {
    json doc;
    doc["schema"] = "lexiplan/simulation@1";
    doc["mode"] = mode;
    doc["summary"] = summary_body(summary);
    if (!std::isnan(value_start)) doc["expected_total"] = value_start;
    return doc.dump(2) + "\n";
}

std::string summary_to_text(const SimulationSummary& summary, const std::string& mode,
                            double value_start) {
    std::ostringstream out;
    out << "# lexiplan simulation 1\n";
    out << "mode: " << mode << "\nruns: " << summary.runs << "\n";
    out << "mean realized total: " << fmt(summary.mean, 2) << "\n";
    out << "stddev:              " << fmt(summary.stddev, 2) << "\n";
    out << "min/p10/p50/p90/max: " << fmt(summary.min, 2) << " / "
        << fmt(summary.p10, 2) << " / " << fmt(summary.p50, 2) << " / "
        << fmt(summary.p90, 2) << " / " << fmt(summary.max, 2) << "\n";
    if (!std::isnan(value_start)) {
        out << "expected total (value iteration): " << fmt(value_start, 2) << "\n";
    }
    return out.str();
}

std::string comparison_to_json(const SimulationSummary& stat,
                               const SimulationSummary& replan,
                               const std::vector<double>& diffs) {
    const auto d = SimulationSummary::from_totals(diffs);
    json doc;
    doc["schema"] = "lexiplan/simulation@1";
    doc["mode"] = "compare";
    doc["static"] = summary_body(stat);
    doc["replan"] = summary_body(replan);
    doc["paired_diff_replan_minus_static"] =
        json{{"mean", d.mean}, {"stddev", d.stddev}, {"min", d.min}, {"max", d.max}};
    return doc.dump(2) + "\n";
}

std::string comparison_to_text(const SimulationSummary& stat,
                               const SimulationSummary& replan,
                               const std::vector<double>& diffs) {
    const auto d = SimulationSummary::from_totals(diffs);
    std::ostringstream out;
    out << "# lexiplan simulation 1\n";
    out << "mode: compare (paired seeds)\nruns: " << stat.runs << "\n";
    out << "static mean:  " << fmt(stat.mean, 2) << "  (sd " << fmt(stat.stddev, 2)
        << ")\n";
    out << "replan mean:  " << fmt(replan.mean, 2) << "  (sd "
        << fmt(replan.stddev, 2) << ")\n";
    out << "paired diff (replan - static): mean " << fmt(d.mean, 2) << ", sd "
        << fmt(d.stddev, 2) << ", min " << fmt(d.min, 2) << ", max "
        << fmt(d.max, 2) << "\n";
    return out.str();
}

}  // namespace lexiplan::io
