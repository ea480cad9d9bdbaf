#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "lexiplan/reports.hpp"

namespace py = pybind11;
using namespace lexiplan;

namespace {

py::object json_to_py(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

ScenarioConfig scenario_from_arg(const std::string& path_or_text) {
    // Accept either a path to a scenario document or the document itself.
    if (!path_or_text.empty() && path_or_text.front() == '{') {
        return io::parse_scenario(path_or_text);
    }
    return io::load_scenario(path_or_text);
}

py::dict plan_scenario(const std::string& scenario) {
    const auto config = scenario_from_arg(scenario);
    const auto graph = mdp::build_graph(config);
    const auto values = solver::value_iteration(graph);
    const auto policy = solver::extract_policy(graph, values);
    auto report = solver::rollout_expected_plan(graph, policy);
    report.value_start = values[graph.start_id];
    py::dict out;
    out["report"] = json_to_py(io::report_to_json(report, config));
    out["states"] = graph.states.size();
    out["edges"] = graph.edge_count;
    out["expected_total"] = values[graph.start_id];
    out["total"] = report.total;
    return out;
}

py::object baseline_scenario(const std::string& scenario) {
    const auto config = scenario_from_arg(scenario);
    const auto report = solver::baseline_all_investment(config);
    return json_to_py(io::report_to_json(report, config));
}

py::object simulate_scenario(const std::string& scenario, int runs,
                             const std::string& mode, std::uint64_t seed) {
    const auto config = scenario_from_arg(scenario);
    sim::ActorModel actors;
    actors.accuracy = sim::Draw::constant(config.cost_model.human_accuracy);
    actors.polysemy = sim::Draw::constant(config.default_polysemy);
    if (mode == "replan") {
        const auto totals = sim::replan_many(config, actors, seed, runs);
        return json_to_py(io::summary_to_json(
            io::SimulationSummary::from_totals(totals), mode,
            std::numeric_limits<double>::quiet_NaN()));
    }
    const auto graph = mdp::build_graph(config);
    const auto values = solver::value_iteration(graph);
    const auto policy = solver::extract_policy(graph, values);
    const auto totals = sim::simulate_many(graph, policy, actors, seed, runs);
    return json_to_py(io::summary_to_json(io::SimulationSummary::from_totals(totals),
                                          mode, values[graph.start_id]));
}

py::object update_posteriors_py(
    const std::map<std::string, std::pair<double, double>>& priors,
    const std::vector<std::tuple<std::string, std::string, std::string, double>>&
        observations) {
    std::map<sim::Triple, beta::BetaParams> prior_map;
    for (const auto& [key, p] : priors) {
        const auto first = key.find('-');
        const auto last = key.rfind('-');
        if (first == std::string::npos || first == last) {
            throw std::invalid_argument("triple keys look like 'x-z-y': " + key);
        }
        prior_map[sim::Triple{DictKey(key.substr(0, first), key.substr(last + 1)),
                              key.substr(first + 1, last - first - 1)}] =
            beta::BetaParams{p.first, p.second};
    }
    sim::ObservationBatch batch;
    for (const auto& [x, z, y, precision] : observations) {
        batch.items.push_back({sim::Triple{DictKey(x, y), z}, precision});
    }
    return json_to_py(io::posteriors_to_json(sim::update_posteriors(prior_map, batch)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Planner for bilingual dictionary creation: beta-precision model, "
              "MDP graph, value iteration, Monte Carlo simulation";

    py::class_<beta::BetaParams>(m, "BetaParams")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &beta::BetaParams::alpha)
        .def_readwrite("beta", &beta::BetaParams::beta)
        .def("__repr__", [](const beta::BetaParams& p) {
            return "BetaParams(alpha=" + std::to_string(p.alpha) +
                   ", beta=" + std::to_string(p.beta) + ")";
        });

    m.def("pdf", &beta::pdf, py::arg("x"), py::arg("params"));
    m.def("cdf", &beta::cdf, py::arg("k"), py::arg("params"));
    m.def("survival", &beta::survival, py::arg("k"), py::arg("params"));
    m.def("mean", &beta::mean, py::arg("params"));
    m.def("lower_truncated_mean", &beta::lower_truncated_mean, py::arg("k"),
          py::arg("params"));
    m.def("upper_truncated_mean", &beta::upper_truncated_mean, py::arg("k"),
          py::arg("params"));
    m.def("prior_from_similarity", &beta::prior_from_similarity,
          py::arg("similarity"), py::arg("polysemy"));
    m.def("likelihood_from_precision", &beta::likelihood_from_precision,
          py::arg("observed"), py::arg("scale") = beta::kLikelihoodScale);
    m.def("posterior", &beta::posterior, py::arg("prior"), py::arg("likelihood"));
    m.def(
        "combine_posteriors",
        [](const std::vector<beta::BetaParams>& parts) {
            return beta::combine_posteriors(parts);
        },
        py::arg("parts"));

    py::class_<beta::Sampler>(m, "Sampler")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("sample", &beta::Sampler::sample, py::arg("params"))
        .def("uniform", &beta::Sampler::uniform);

    m.def("plan", &plan_scenario, py::arg("scenario"),
          "Solve a scenario (path or JSON text); returns report, graph size and "
          "expected total");
    m.def("baseline", &baseline_scenario, py::arg("scenario"),
          "All-investment cost report for a scenario");
    m.def("simulate", &simulate_scenario, py::arg("scenario"), py::arg("runs") = 1,
          py::arg("mode") = "static", py::arg("seed") = 0,
          "Monte Carlo realized-cost summary");
    m.def("update_posteriors", &update_posteriors_py, py::arg("priors"),
          py::arg("observations"),
          "priors: {'x-z-y': (alpha, beta)}; observations: [(x, z, y, precision)]");
}
