#include "lexiplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lexiplan::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ScenarioError(what); }

std::pair<int, int> line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_of_offset(text, e.byte ? e.byte - 1 : 0);
        fail(what + ": parse error at line " + std::to_string(line) + ", column " +
             std::to_string(col) + ": " + e.what());
    }
}

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail("unknown field '" + key + "' in " + where);
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + " must be a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + " must be a string");
    return v.get<std::string>();
}

double similarity_value(double raw, const std::string& where) {
    if (raw < 0.0) fail(where + ": similarity cannot be negative");
    const double v = raw > 1.0 ? raw / 100.0 : raw;  // percent auto-detect
    if (v > 1.0) fail(where + ": similarity above 100 percent");
    return v;
}

beta::BetaParams parse_beta(const json& v, const std::string& where) {
    expect_keys(v, where, {"alpha", "beta"});
    if (!v.contains("alpha") || !v.contains("beta")) {
        fail(where + " needs alpha and beta");
    }
    return beta::BetaParams{as_number(v["alpha"], where + ".alpha"),
                            as_number(v["beta"], where + ".beta")};
}

void parse_similarity(const json& v, const std::filesystem::path& base_dir,
                      SimilarityMatrix& out) {
    expect_keys(v, "similarity", {"pairs", "file", "matrix"});
    int sources = 0;
    for (const char* key : {"pairs", "file", "matrix"}) sources += v.contains(key);
    if (sources != 1) fail("similarity needs exactly one of pairs/file/matrix");
    if (v.contains("file")) {
        std::filesystem::path p = as_string(v["file"], "similarity.file");
        if (p.is_relative()) p = base_dir / p;
        out = load_similarity_table(p);
        return;
    }
    if (v.contains("pairs")) {
        const auto& pairs = v["pairs"];
        if (!pairs.is_array()) fail("similarity.pairs must be an array");
        for (const auto& entry : pairs) {
            if (!entry.is_array() || entry.size() != 3) {
                fail("similarity.pairs entries must be [x, y, value]");
            }
            const auto x = as_string(entry[0], "similarity pair language");
            const auto y = as_string(entry[1], "similarity pair language");
            out.set(x, y,
                    similarity_value(as_number(entry[2], "similarity value"),
                                     x + "-" + y));
        }
        return;
    }
    const auto& m = v["matrix"];
    expect_keys(m, "similarity.matrix", {"codes", "rows"});
    if (!m.contains("codes") || !m.contains("rows")) {
        fail("similarity.matrix needs codes and rows");
    }
    std::vector<std::string> codes;
    for (const auto& c : m["codes"]) codes.push_back(as_string(c, "matrix code"));
    const auto& rows = m["rows"];
    if (!rows.is_array() || rows.size() != codes.size()) {
        fail("similarity.matrix.rows must have one row per code");
    }
    for (std::size_t i = 0; i < codes.size(); ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() < i) fail("similarity matrix row too short");
        for (std::size_t j = 0; j < std::min<std::size_t>(row.size(), codes.size());
             ++j) {
            if (j == i) continue;
            if (row[j].is_null()) continue;
            out.set(codes[i], codes[j],
                    similarity_value(as_number(row[j], "matrix cell"),
                                     codes[i] + "-" + codes[j]));
        }
    }
}

void parse_costs(const json& v, CostModel& cm) {
    expect_keys(v, "costs",
                {"preset", "ct1", "ct2", "t4_evaluation", "human_accuracy",
                 "formula", "pivot_charge"});
    if (v.contains("preset")) {
        const auto name = as_string(v["preset"], "costs.preset");
        if (name != "paper-2019") fail("unknown cost preset '" + name + "'");
        cm = CostModel::paper2019();
    }
    auto parse_unit = [&](const char* key, CostModel::Unit& unit) {
        if (!v.contains(key)) return;
        const auto& u = v[key];
        expect_keys(u, std::string("costs.") + key, {"creation", "evaluation"});
        if (u.contains("creation")) unit.creation = as_number(u["creation"], "creation");
        if (u.contains("evaluation")) {
            unit.evaluation = as_number(u["evaluation"], "evaluation");
        }
    };
    parse_unit("ct1", cm.ct1);
    parse_unit("ct2", cm.ct2);
    if (v.contains("t4_evaluation")) {
        cm.t4_evaluation = as_number(v["t4_evaluation"], "costs.t4_evaluation");
    }
    if (v.contains("human_accuracy")) {
        cm.human_accuracy = as_number(v["human_accuracy"], "costs.human_accuracy");
    }
    if (v.contains("formula")) {
        const auto f = as_string(v["formula"], "costs.formula");
        if (f == "itemized") {
            cm.formula = CostModel::Formula::Itemized;
        } else if (f == "eq10-literal") {
            cm.formula = CostModel::Formula::Eq10Literal;
        } else {
            fail("costs.formula must be 'itemized' or 'eq10-literal'");
        }
    }
    if (v.contains("pivot_charge")) {
        const auto c = as_string(v["pivot_charge"], "costs.pivot_charge");
        if (c == "induced") {
            cm.pivot_charge = CostModel::PivotCharge::InducedSet;
        } else if (c == "candidates") {
            cm.pivot_charge = CostModel::PivotCharge::AllCandidates;
        } else {
            fail("costs.pivot_charge must be 'induced' or 'candidates'");
        }
    }
}

void parse_priors(const json& v, ScenarioConfig& config) {
    expect_keys(v, "priors", {"alpha_basis", "combined", "pairs"});
    if (v.contains("alpha_basis")) {
        const auto b = as_string(v["alpha_basis"], "priors.alpha_basis");
        if (b == "output-pair") {
            config.alpha_basis = AlphaBasis::OutputPair;
        } else if (b == "triple-average") {
            config.alpha_basis = AlphaBasis::TripleAverage;
        } else {
            fail("priors.alpha_basis must be 'output-pair' or 'triple-average'");
        }
    }
    if (v.contains("combined")) {
        config.combined_prior = parse_beta(v["combined"], "priors.combined");
    }
    if (v.contains("pairs")) {
        if (!v["pairs"].is_object()) fail("priors.pairs must be an object");
        for (const auto& [key, value] : v["pairs"].items()) {
            config.pair_prior_overrides[parse_dict_key(key)] =
                parse_beta(value, "priors.pairs." + key);
        }
    }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write " + path.string());
    out << content;
}

ScenarioConfig parse_scenario(const std::string& text,
                              const std::filesystem::path& base_dir) {
    const json doc = parse_json(text, "scenario");
    expect_keys(doc, "scenario document",
                {"schema", "languages", "similarity", "existing", "min_size",
                 "polysemy", "costs", "priors", "seed", "state_budget",
                 "merge_pivot_identity", "national"});
    ScenarioConfig config;
    if (!doc.contains("languages") || !doc["languages"].is_array()) {
        fail("scenario needs a 'languages' array");
    }
    for (const auto& code : doc["languages"]) {
        config.languages.push_back(as_string(code, "language code"));
    }
    if (!doc.contains("similarity")) fail("scenario needs a 'similarity' section");
    parse_similarity(doc["similarity"], base_dir, config.similarity);
    if (doc.contains("existing")) {
        if (!doc["existing"].is_object()) fail("'existing' must map pair -> size");
        for (const auto& [key, value] : doc["existing"].items()) {
            if (!value.is_number_integer() || value.get<long long>() < 0) {
                fail("existing size for " + key + " must be a non-negative integer");
            }
            config.existing[parse_dict_key(key)] = value.get<long long>();
        }
    }
    if (!doc.contains("min_size")) fail("scenario needs 'min_size'");
    if (!doc["min_size"].is_number_integer()) fail("min_size must be an integer");
    config.min_size = doc["min_size"].get<long long>();
    if (doc.contains("polysemy")) {
        config.default_polysemy = as_number(doc["polysemy"], "polysemy");
    }
    if (doc.contains("costs")) parse_costs(doc["costs"], config.cost_model);
    if (doc.contains("priors")) parse_priors(doc["priors"], config);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            fail("seed must be an integer");
        }
        config.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("state_budget")) {
        if (!doc["state_budget"].is_number_unsigned() &&
            !doc["state_budget"].is_number_integer()) {
            fail("state_budget must be an integer");
        }
        config.state_budget = doc["state_budget"].get<std::size_t>();
    }
    if (doc.contains("merge_pivot_identity")) {
        if (!doc["merge_pivot_identity"].is_boolean()) {
            fail("merge_pivot_identity must be a boolean");
        }
        config.merge_pivot_identity = doc["merge_pivot_identity"].get<bool>();
    }
    if (doc.contains("national")) {
        config.national = as_string(doc["national"], "national");
    }
    try {
        config.validate();
    } catch (const std::exception& e) {
        fail(std::string("invalid scenario: ") + e.what());
    }
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_file(path), path.parent_path());
}

SimilarityMatrix load_similarity_table(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    SimilarityMatrix out;
    auto tokens = [](const std::string& s) {
        std::vector<std::string> cols;
        std::string cur;
        for (char c : s) {
            if (c == '\t' || c == ',' || c == ' ' || c == ';') {
                if (!cur.empty()) cols.push_back(std::move(cur));
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) cols.push_back(std::move(cur));
        return cols;
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cols = tokens(line);
        if (cols.empty()) continue;
        if (header.empty()) {
            header = std::move(cols);
            continue;
        }
        const std::string row_code = cols[0];
        if (cols.size() - 1 > header.size()) {
            fail(path.string() + ":" + std::to_string(lineno) +
                 ": more cells than header codes");
        }
        for (std::size_t j = 1; j < cols.size(); ++j) {
            const std::string& col_code = header[j - 1];
            if (col_code == row_code) {
                fail(path.string() + ":" + std::to_string(lineno) +
                     ": self pair " + row_code);
            }
            double raw = 0.0;
            try {
                raw = std::stod(cols[j]);
            } catch (const std::exception&) {
                fail(path.string() + ":" + std::to_string(lineno) +
                     ": cannot parse similarity '" + cols[j] + "'");
            }
            out.set(row_code, col_code,
                    similarity_value(raw, row_code + "-" + col_code));
        }
    }
    if (out.size() == 0) fail(path.string() + ": no similarity entries found");
    return out;
}

sim::ObservationBatch load_observations(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    sim::ObservationBatch batch;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string x, z, y;
        double precision = 0.0;
        if (!(row >> x)) continue;  // blank line
        if (!(row >> z >> y >> precision)) {
            fail(path.string() + ":" + std::to_string(lineno) +
                 ": expected 'x z y precision'");
        }
        if (!(precision >= 0.0 && precision <= 1.0)) {
            fail(path.string() + ":" + std::to_string(lineno) +
                 ": precision must lie in [0,1]");
        }
        batch.items.push_back({sim::Triple{DictKey(x, y), z}, precision});
    }
    return batch;
}

namespace {

sim::Draw parse_draw(const json& v, const std::string& where) {
    expect_keys(v, where, {"constant", "beta"});
    if (v.contains("constant") == v.contains("beta")) {
        fail(where + " needs exactly one of 'constant' or 'beta'");
    }
    if (v.contains("constant")) {
        return sim::Draw::constant(as_number(v["constant"], where + ".constant"));
    }
    return sim::Draw::from_beta(parse_beta(v["beta"], where + ".beta"));
}

sim::Triple parse_triple_key(const std::string& text) {
    // "x-z-y" with the middle code as pivot.
    const auto first = text.find('-');
    const auto last = text.rfind('-');
    if (first == std::string::npos || first == last) {
        fail("cannot parse triple '" + text + "' (expected x-z-y)");
    }
    return sim::Triple{DictKey(text.substr(0, first), text.substr(last + 1)),
                       text.substr(first + 1, last - first - 1)};
}

}  // namespace

sim::ActorModel parse_actors(const std::string& text) {
    const json doc = parse_json(text, "actors");
    expect_keys(doc, "actors document",
                {"schema", "accuracy", "polysemy", "default_precision", "triples"});
    sim::ActorModel actors;
    if (doc.contains("accuracy")) {
        actors.accuracy = parse_draw(doc["accuracy"], "accuracy");
    }
    if (doc.contains("polysemy")) {
        actors.polysemy = parse_draw(doc["polysemy"], "polysemy");
    }
    if (doc.contains("default_precision")) {
        actors.default_precision =
            parse_draw(doc["default_precision"], "default_precision");
    }
    if (doc.contains("triples")) {
        if (!doc["triples"].is_object()) fail("actors.triples must be an object");
        for (const auto& [key, value] : doc["triples"].items()) {
            actors.precision[parse_triple_key(key)] =
                parse_draw(value, "triples." + key);
        }
    }
    return actors;
}

sim::ActorModel load_actors(const std::filesystem::path& path) {
    return parse_actors(read_file(path));
}

std::map<sim::Triple, beta::BetaParams> load_priors(
    const std::filesystem::path& path) {
    const json doc = parse_json(read_file(path), path.string());
    expect_keys(doc, "priors document", {"schema", "priors"});
    if (!doc.contains("priors") || !doc["priors"].is_array()) {
        fail(path.string() + ": needs a 'priors' array");
    }
    std::map<sim::Triple, beta::BetaParams> out;
    for (const auto& entry : doc["priors"]) {
        expect_keys(entry, "priors entry", {"triple", "alpha", "beta"});
        if (!entry.contains("triple") || !entry["triple"].is_array() ||
            entry["triple"].size() != 3) {
            fail(path.string() + ": each prior needs a [x, z, y] triple");
        }
        const auto x = as_string(entry["triple"][0], "triple language");
        const auto z = as_string(entry["triple"][1], "triple language");
        const auto y = as_string(entry["triple"][2], "triple language");
        out[sim::Triple{DictKey(x, y), z}] =
            beta::BetaParams{as_number(entry["alpha"], "prior alpha"),
                             as_number(entry["beta"], "prior beta")};
    }
    return out;
}

}  // namespace lexiplan::io
