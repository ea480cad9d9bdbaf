#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lexiplan/reports.hpp"

namespace {

using namespace lexiplan;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        io::write_file(out_path, content);
    }
}

struct PlanArgs {
    std::string scenario, out, policy_out, graph_out, dot_out, format = "text";
};

int run_plan(const PlanArgs& args) {
    const auto config = io::load_scenario(args.scenario);
    const auto graph = mdp::build_graph(config);
    const auto values = solver::value_iteration(graph);
    const auto policy = solver::extract_policy(graph, values);
    auto report = solver::rollout_expected_plan(graph, policy);
    report.value_start = values[graph.start_id];
    emit(args.format == "json" ? io::report_to_json(report, config)
                               : io::report_to_text(report, config),
         args.out);
    if (!args.policy_out.empty()) {
        io::write_file(args.policy_out, io::policy_to_json(graph, policy));
    }
    if (!args.graph_out.empty()) {
        io::write_file(args.graph_out, io::graph_to_json(graph));
    }
    if (!args.dot_out.empty()) {
        io::write_file(args.dot_out, io::graph_to_dot(graph));
    }
    return 0;
}

struct BaselineArgs {
    std::string scenario, out, format = "text";
};

int run_baseline(const BaselineArgs& args) {
    const auto config = io::load_scenario(args.scenario);
    const auto report = solver::baseline_all_investment(config);
    emit(args.format == "json" ? io::report_to_json(report, config)
                               : io::report_to_text(report, config),
         args.out);
    return 0;
}

struct SimulateArgs {
    std::string scenario, mode = "static", policy_path, actors_path, out,
                trace_out, format = "text";
    int runs = 1;
    std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& args) {
    const auto config = io::load_scenario(args.scenario);
    const std::uint64_t seed = args.seed.value_or(config.seed);
    sim::ActorModel actors;
    if (!args.actors_path.empty()) actors = io::load_actors(args.actors_path);
    actors.accuracy = args.actors_path.empty()
                          ? sim::Draw::constant(config.cost_model.human_accuracy)
                          : actors.accuracy;
    actors.polysemy = args.actors_path.empty()
                          ? sim::Draw::constant(config.default_polysemy)
                          : actors.polysemy;

    const auto graph = mdp::build_graph(config);
    const auto values = solver::value_iteration(graph);
    const auto policy = args.policy_path.empty()
                            ? solver::extract_policy(graph, values)
                            : io::policy_from_json(io::read_file(args.policy_path),
                                                   graph);
    const double v_start = values[graph.start_id];

    if (args.mode == "compare") {
        std::vector<double> st, rp, diffs;
        st.reserve(args.runs);
        rp.reserve(args.runs);
        for (int i = 0; i < args.runs; ++i) {
            const auto run_seed = sim::derive_run_seed(seed, i);
            st.push_back(sim::simulate_execution(graph, policy, actors, run_seed).total);
            rp.push_back(sim::replan_loop(config, actors, run_seed).total);
            diffs.push_back(rp.back() - st.back());
        }
        const auto ss = io::SimulationSummary::from_totals(st);
        const auto rs = io::SimulationSummary::from_totals(rp);
        emit(args.format == "json" ? io::comparison_to_json(ss, rs, diffs)
                                   : io::comparison_to_text(ss, rs, diffs),
             args.out);
        return 0;
    }

    const bool replan = args.mode == "replan";
    if (args.runs == 1) {
        const auto trace =
            replan ? sim::replan_loop(config, actors, sim::derive_run_seed(seed, 0))
                   : sim::simulate_execution(graph, policy, actors,
                                             sim::derive_run_seed(seed, 0));
        emit(args.format == "json" ? io::trace_to_json(trace, config)
                                   : io::trace_to_text(trace, config),
             args.out);
        if (!args.trace_out.empty()) {
            io::write_file(args.trace_out, io::trace_to_json(trace, config));
        }
        return 0;
    }

    std::vector<double> totals;
    std::string traces_json;
    totals.reserve(args.runs);
    for (int i = 0; i < args.runs; ++i) {
        const auto run_seed = sim::derive_run_seed(seed, i);
        const auto trace =
            replan ? sim::replan_loop(config, actors, run_seed)
                   : sim::simulate_execution(graph, policy, actors, run_seed);
        totals.push_back(trace.total);
        if (!args.trace_out.empty()) {
            traces_json += io::trace_to_json(trace, config);
        }
    }
    if (!args.trace_out.empty()) io::write_file(args.trace_out, traces_json);
    const auto summary = io::SimulationSummary::from_totals(totals);
    emit(args.format == "json" ? io::summary_to_json(summary, args.mode, v_start)
                               : io::summary_to_text(summary, args.mode, v_start),
         args.out);
    return 0;
}

struct PosteriorArgs {
    std::string priors, observations, out, format = "text";
};

int run_posterior(const PosteriorArgs& args) {
    const auto priors = io::load_priors(args.priors);
    sim::ObservationBatch batch;
    if (!args.observations.empty()) batch = io::load_observations(args.observations);
    const auto update = sim::update_posteriors(priors, batch);
    emit(args.format == "json" ? io::posteriors_to_json(update)
                               : io::posteriors_to_text(update),
         args.out);
    return 0;
}

void add_format(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-optimal planner for bilingual dictionary creation"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Solve a scenario and print the plan");
    plan->add_option("--scenario", plan_args.scenario, "Scenario document")->required();
    plan->add_option("--out", plan_args.out, "Write the report here instead of stdout");
    plan->add_option("--policy-out", plan_args.policy_out, "Write the policy document");
    plan->add_option("--graph-out", plan_args.graph_out, "Write the full graph (JSON)");
    plan->add_option("--dot-out", plan_args.dot_out, "Write the graph as Graphviz dot");
    add_format(plan, plan_args.format);

    BaselineArgs base_args;
    auto* baseline =
        app.add_subcommand("baseline", "All-investment cost estimate");
    baseline->add_option("--scenario", base_args.scenario, "Scenario document")
        ->required();
    baseline->add_option("--out", base_args.out, "Write the report here");
    add_format(baseline, base_args.format);

    SimulateArgs sim_args;
    auto* simulate =
        app.add_subcommand("simulate", "Monte Carlo execution of the plan");
    simulate->add_option("--scenario", sim_args.scenario, "Scenario document")
        ->required();
    simulate->add_option("--runs", sim_args.runs, "Number of runs")
        ->check(CLI::PositiveNumber);
    simulate
        ->add_option("--mode", sim_args.mode,
                     "static (fixed policy), replan (rebuild each step), or compare")
        ->check(CLI::IsMember({"static", "replan", "compare"}));
    simulate->add_option("--seed", sim_args.seed, "Override the scenario seed");
    simulate->add_option("--policy", sim_args.policy_path,
                         "Use a stored policy document (static mode)");
    simulate->add_option("--actors", sim_args.actors_path, "Actor model document");
    simulate->add_option("--out", sim_args.out, "Write the summary/trace here");
    simulate->add_option("--trace-out", sim_args.trace_out, "Write per-run traces");
    add_format(simulate, sim_args.format);

    PosteriorArgs post_args;
    auto* posterior =
        app.add_subcommand("posterior", "Update precision priors from observations");
    posterior->add_option("--priors", post_args.priors, "Priors document")->required();
    posterior->add_option("--observations", post_args.observations,
                          "Observation file (x z y precision)");
    posterior->add_option("--out", post_args.out, "Write the posterior document");
    add_format(posterior, post_args.format);

    try {
        app.parse(argc, argv);
        if (plan->parsed()) return run_plan(plan_args);
        if (baseline->parsed()) return run_baseline(base_args);
        if (simulate->parsed()) return run_simulate(sim_args);
        if (posterior->parsed()) return run_posterior(post_args);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const lexiplan::io::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lexiplan::mdp::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
