#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lexiplan/solver.hpp"
#include "support.hpp"

using namespace lexiplan;
using namespace lexiplan::solver;

TEST_CASE("terminal-only scenario solves to zero") {
    ScenarioConfig config = testsupport::micro_config();
    config.existing[DictKey("zlm", "min")] = 2400;  // everything satisfied
    const auto graph = mdp::build_graph(config);
    REQUIRE(graph.states.size() == 1);
    const auto values = value_iteration(graph);
    CHECK(values[graph.start_id] == 0.0);
    const auto policy = extract_policy(graph, values);
    const auto report = rollout_expected_plan(graph, policy);
    CHECK(report.rows.empty());
    CHECK(report.total == 0.0);
}

TEST_CASE("forced investment chain equals the investment cost") {
    auto config = testsupport::micro_config();
    config.existing[DictKey("zlm", "min")] = 1500;
    config.cost_model.t4_evaluation = 1e6;  // price pivots out of the optimum
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    // required 500 at CT2 rates: 500*3 + 625*8.
    CHECK(values[graph.start_id] == doctest::Approx(6500.0).epsilon(1e-12));
    const auto policy = extract_policy(graph, values);
    const auto& tr = policy.transition(graph, graph.start_id);
    CHECK(tr.action.kind == mdp::ActionKind::Invest);
}

TEST_CASE("two-branch pivot value matches the hand formula") {
    const auto config = testsupport::micro_config();
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);

    // candidates 4400, k = 5/11, prior from the zlm-min similarity.
    const auto prior = lex::prior_for_pivot(config, "zlm", "ind", "min");
    const double k = 2000.0 / 4400.0;
    const double pivot_cost = beta::mean(prior) * 4400 * 4.0;
    const long long pu_size = lex::induced_size(beta::lower_truncated_mean(k, prior), 4400);
    const double fallback_required = 2000.0 - static_cast<double>(pu_size);
    const double fallback_cost =
        fallback_required * 3.0 + (fallback_required / 0.8) * 8.0;
    const double invest_cost = 2000 * 3.0 + 2500 * 8.0;
    const double expected =
        std::min(invest_cost, pivot_cost + beta::cdf(k, prior) * fallback_cost);

    CHECK(values[graph.start_id] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(values[graph.start_id] == doctest::Approx(12491.573).epsilon(1e-6));

    // And brute force over every deterministic policy agrees.
    CHECK(values[graph.start_id] ==
          doctest::Approx(testsupport::brute_force_optimal(graph)).epsilon(1e-12));
}

TEST_CASE("value iteration equals brute-force policy enumeration") {
    std::mt19937_64 rng(31);
    int checked = 0;
    while (checked < 50) {
        const auto config = testsupport::random_small_scenario(rng);
        const auto graph = mdp::build_graph(config);
        if (graph.states.size() > 10) continue;
        const auto values = value_iteration(graph);
        const double brute = testsupport::brute_force_optimal(graph);
        CHECK(values[graph.start_id] ==
              doctest::Approx(brute).epsilon(1e-9));
        ++checked;
    }
}

TEST_CASE("policy is bellman-consistent and never beats the baseline") {
    const auto config = testsupport::batch1_config();
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    const auto policy = extract_policy(graph, values);

    const auto baseline = baseline_all_investment(config);
    CHECK(values[graph.start_id] <= baseline.total);

    for (std::size_t sid = 0; sid < graph.states.size(); ++sid) {
        if (graph.states[sid].terminal) {
            CHECK(values[sid] == 0.0);
            continue;
        }
        REQUIRE(policy.defined(static_cast<int>(sid)));
        const auto& tr = policy.transition(graph, static_cast<int>(sid));
        double q = 0.0;
        for (const auto& t : tr.targets) {
            q += t.probability * (t.cost + values[t.state_id]);
        }
        CHECK(std::fabs(q - values[sid]) <= 1e-6 * std::max(1.0, values[sid]));
        CHECK(values[sid] >= 0.0);
    }
}

TEST_CASE("ties prefer investment in declaration order") {
    // All-empty state: every investment is part of some optimal plan, so
    // the first pair in declaration order wins the tie.
    ScenarioConfig config;
    config.languages = {"a", "b", "c"};
    SimilarityMatrix sim;
    sim.set("a", "b", 0.3);
    sim.set("a", "c", 0.3);
    sim.set("b", "c", 0.3);
    config.similarity = sim;
    config.min_size = 1000;
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    const auto policy = extract_policy(graph, values);
    const auto& tr = policy.transition(graph, graph.start_id);
    CHECK(tr.action.kind == mdp::ActionKind::Invest);
    CHECK(tr.action.key == DictKey("a", "b"));
}

TEST_CASE("single-action states pick that action") {
    auto config = testsupport::micro_config();
    config.existing[DictKey("zlm", "min")] = 1999;
    config.cost_model.t4_evaluation = 1e9;
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    const auto policy = extract_policy(graph, values);
    // Walk to the pu state if any; at minimum the policy is defined on all
    // non-terminal states.
    for (std::size_t sid = 0; sid < graph.states.size(); ++sid) {
        if (!graph.states[sid].terminal) {
            CHECK(policy.defined(static_cast<int>(sid)));
        }
    }
}

TEST_CASE("micro rollout rows") {
    const auto config = testsupport::micro_config();
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    const auto policy = extract_policy(graph, values);
    const auto report = rollout_expected_plan(graph, policy);

    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].task == "P(zlm, ind, min)");
    CHECK(report.rows[0].induced == lex::induced_size(
              beta::mean(lex::prior_for_pivot(config, "zlm", "ind", "min")), 4400));
    CHECK(report.rows[0].cost == 0.0);
    CHECK(report.rows[1].task == "T4(zlm, ind, min)");
    CHECK(report.rows[1].cost > 0.0);
    CHECK(report.rows[2].contingent);
    CHECK(report.rows[2].task == "if unsat: CT2(zlm, min)");

    // Total counts only the main line.
    CHECK(report.total == doctest::Approx(report.rows[1].cost));
}

TEST_CASE("report totals sum their rows") {
    const auto config = testsupport::batch1_config();
    const auto graph = mdp::build_graph(config);
    const auto values = value_iteration(graph);
    const auto policy = extract_policy(graph, values);
    const auto report = rollout_expected_plan(graph, policy);
    double sum = 0.0;
    for (const auto& row : report.rows) {
        if (!row.contingent) sum += row.cost;
    }
    CHECK(report.total == doctest::Approx(sum).epsilon(1e-12));
    CHECK(report.total > 0.0);
}

TEST_CASE("all-investment baseline reproduces the cost tables") {
    const auto b1 = baseline_all_investment(testsupport::batch1_config());
    CHECK(std::llround(b1.total) == 162280);
    REQUIRE(b1.rows.size() == 9);
    // Canonical order puts the national-language investments first.
    CHECK(b1.rows[0].task == "CT1(ind, zlm) - 711 exist");
    CHECK(std::llround(b1.rows[0].cost) == 5478);
    CHECK(b1.rows[0].paid == 2900);
    CHECK(b1.rows[1].task == "CT1(ind, jav)");
    CHECK(std::llround(b1.rows[1].cost) == 8500);
    CHECK(b1.rows[1].paid == 4500);
    bool saw_zlm_min = false, saw_jav_sun = false;
    for (const auto& row : b1.rows) {
        if (row.key == DictKey("zlm", "min")) {
            saw_zlm_min = true;
            CHECK(std::llround(row.cost) == 9802);
            CHECK(row.paid == 1697);
        }
        if (row.key == DictKey("jav", "sun")) {
            saw_jav_sun = true;
            CHECK(std::llround(row.cost) == 26000);
        }
    }
    CHECK(saw_zlm_min);
    CHECK(saw_jav_sun);

    const auto b2 = baseline_all_investment(
        testsupport::batch2_config(beta::BetaParams{76.984, 29.16}));
    CHECK(std::llround(b2.total) == 251000);
    CHECK(b2.rows.size() == 11);

    auto done = testsupport::micro_config();
    done.existing[DictKey("zlm", "min")] = 2800;
    const auto empty = baseline_all_investment(done);
    CHECK(empty.rows.empty());
    CHECK(empty.total == 0.0);
}

TEST_CASE("cycle detection rejects corrupted graphs") {
    const auto config = testsupport::micro_config();
    auto graph = mdp::build_graph(config);
    // Manufacture a back edge.
    for (auto& row : graph.transitions) {
        for (auto& tr : row) {
            for (auto& t : tr.targets) {
                if (t.state_id != graph.start_id) t.state_id = graph.start_id;
            }
        }
    }
    CHECK_THROWS_AS(value_iteration(graph), std::runtime_error);
}
