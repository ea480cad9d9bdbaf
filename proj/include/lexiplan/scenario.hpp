#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "lexiplan/sim.hpp"

namespace lexiplan::io {

/// Any problem with user-provided input (parse or validation); the CLI
/// maps it to exit code 2.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a scenario document. JSON object with sections:
///   languages   ordered list; first entry is the common/national language
///   similarity  {"pairs": [[x, y, value], ...]} or {"file": "table.tsv"}
///               or {"matrix": {"codes": [...], "rows": [[...], ...]}}
///   existing    {"x-y": pairs, ...}
///   min_size    positive integer
///   polysemy    topology polysemy in [2,10] (default 3)
///   costs       {"preset": "paper-2019"} and/or explicit fields
///   priors      {"alpha_basis": ..., "combined": {...}, "pairs": {...}}
///   seed, state_budget, merge_pivot_identity, national
/// Similarity values > 1 anywhere are read as percentages. Unknown fields
/// are rejected.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text,
                              const std::filesystem::path& base_dir = {});

/// Delimited similarity table: first row/column are language codes; cells
/// percent or fraction. Lower-triangle tables are accepted.
SimilarityMatrix load_similarity_table(const std::filesystem::path& path);

/// Observation lines: "x z y precision" (whitespace or comma separated,
/// '#' comments).
sim::ObservationBatch load_observations(const std::filesystem::path& path);

/// Priors document: {"priors": [{"triple": [x, z, y], "alpha": a, "beta": b}]}.
std::map<sim::Triple, beta::BetaParams> load_priors(
    const std::filesystem::path& path);

/// Actor document:
///   {"accuracy": {"constant": 0.8} | {"beta": {"alpha": ..., "beta": ...}},
///    "polysemy": {...}, "default_precision": {...},
///    "triples": {"x-z-y": {...}}}
/// Omitted fields keep the defaults (accuracy 0.8, polysemy 3, precision
/// from the planning prior).
sim::ActorModel load_actors(const std::filesystem::path& path);
sim::ActorModel parse_actors(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace lexiplan::io
