#include "lexiplan/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace lexiplan {

DictKey::DictKey(LanguageCode x, LanguageCode y) {
    if (x == y) {
        throw std::invalid_argument("dictionary pair needs two distinct languages: " + x);
    }
    if (x > y) std::swap(x, y);
    a = std::move(x);
    b = std::move(y);
}

const LanguageCode& DictKey::other(const LanguageCode& code) const {
    if (a == code) return b;
    if (b == code) return a;
    throw std::invalid_argument("language " + code + " is not part of " + str());
}

DictKey parse_dict_key(const std::string& text) {
    for (char sep : {'-', ':', ','}) {
        auto pos = text.find(sep);
        if (pos != std::string::npos) {
            return DictKey(text.substr(0, pos), text.substr(pos + 1));
        }
    }
    throw std::invalid_argument("cannot parse dictionary pair '" + text + "'");
}

void SimilarityMatrix::set(const LanguageCode& x, const LanguageCode& y, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("similarity for " + x + "-" + y +
                                    " must lie in [0,1]");
    }
    values_[DictKey(x, y)] = value;
}

double SimilarityMatrix::get(const LanguageCode& x, const LanguageCode& y) const {
    auto it = values_.find(DictKey(x, y));
    if (it == values_.end()) {
        throw std::invalid_argument("similarity missing for pair " + x + "-" + y);
    }
    return it->second;
}

bool SimilarityMatrix::has(const LanguageCode& x, const LanguageCode& y) const {
    return values_.count(DictKey(x, y)) > 0;
}

const char* to_string(DictStatus status) {
    switch (status) {
        case DictStatus::NotExisting: return "n";
        case DictStatus::ExistingUnsat: return "eu";
        case DictStatus::PivotUnsat: return "pu";
        case DictStatus::Satisfied: return "s";
    }
    return "?";
}

int ScenarioConfig::language_index(const LanguageCode& code) const {
    for (std::size_t i = 0; i < languages.size(); ++i) {
        if (languages[i] == code) return static_cast<int>(i);
    }
    return -1;
}

void ScenarioConfig::validate() const {
    if (languages.size() < 3) {
        throw std::invalid_argument("scenario needs at least 3 languages");
    }
    std::set<LanguageCode> seen;
    for (const auto& code : languages) {
        if (code.empty()) throw std::invalid_argument("empty language code");
        if (!seen.insert(code).second) {
            throw std::invalid_argument("duplicate language code: " + code);
        }
    }
    if (min_size <= 0) throw std::invalid_argument("min_size must be positive");
    if (!(default_polysemy >= 2.0 && default_polysemy <= 10.0)) {
        throw std::invalid_argument("polysemy must lie in [2,10]");
    }
    if (!national.empty() && language_index(national) < 0) {
        throw std::invalid_argument("national language not in language list: " + national);
    }
    for (std::size_t i = 0; i < languages.size(); ++i) {
        for (std::size_t j = i + 1; j < languages.size(); ++j) {
            if (!similarity.has(languages[i], languages[j])) {
                throw std::invalid_argument("similarity missing for pair " +
                                            languages[i] + "-" + languages[j]);
            }
        }
    }
    for (const auto& [key, size] : existing) {
        if (language_index(key.a) < 0 || language_index(key.b) < 0) {
            throw std::invalid_argument("existing dictionary " + key.str() +
                                        " names an unknown language");
        }
        if (size < 0) {
            throw std::invalid_argument("existing size for " + key.str() +
                                        " must be non-negative");
        }
    }
    const CostModel& cm = cost_model;
    for (double v : {cm.ct1.creation, cm.ct1.evaluation, cm.ct2.creation,
                     cm.ct2.evaluation, cm.t4_evaluation}) {
        if (v < 0.0) throw std::invalid_argument("unit costs must be non-negative");
    }
    if (!(cm.human_accuracy > 0.0 && cm.human_accuracy <= 1.0)) {
        throw std::invalid_argument("human accuracy must lie in (0,1]");
    }
    if (combined_prior) beta::validate(*combined_prior);
    if (state_budget == 0) throw std::invalid_argument("state budget must be positive");
}

std::pair<LanguageCode, LanguageCode> scenario_pair_order(
    const DictKey& key, const ScenarioConfig& config) {
    const int ia = config.language_index(key.a);
    const int ib = config.language_index(key.b);
    if (ia >= 0 && ib >= 0 && ib < ia) return {key.b, key.a};
    return {key.a, key.b};
}

namespace lex {

std::vector<DictState> generate_dictionary_list(
    std::span<const LanguageCode> languages) {
    if (languages.size() < 3) {
        throw std::invalid_argument(
            "pivot induction needs at least 3 languages, got " +
            std::to_string(languages.size()));
    }
    std::set<LanguageCode> seen(languages.begin(), languages.end());
    if (seen.size() != languages.size()) {
        throw std::invalid_argument("duplicate language in scenario list");
    }
    std::vector<DictState> out;
    out.reserve(languages.size() * (languages.size() - 1) / 2);
    for (std::size_t i = 0; i < languages.size(); ++i) {
        for (std::size_t j = i + 1; j < languages.size(); ++j) {
            DictState d;
            d.key = DictKey(languages[i], languages[j]);
            out.push_back(std::move(d));
        }
    }
    return out;
}

std::vector<DictState> apply_existing(std::vector<DictState> dicts,
                                      const std::map<DictKey, long long>& existing,
                                      long long min_size) {
    if (min_size <= 0) throw std::invalid_argument("min_size must be positive");
    for (auto& d : dicts) {
        auto it = existing.find(d.key);
        const long long size = it == existing.end() ? 0 : it->second;
        if (size < 0) {
            throw std::invalid_argument("existing size for " + d.key.str() +
                                        " must be non-negative");
        }
        d.size = size;
        d.pivot.clear();
        if (size == 0) {
            d.status = DictStatus::NotExisting;
        } else if (size >= min_size) {
            d.status = DictStatus::Satisfied;
        } else {
            d.status = DictStatus::ExistingUnsat;
        }
    }
    return dicts;
}

long long candidate_size(long long size_xz, long long size_zy) {
    if (size_xz < 0 || size_zy < 0) {
        throw std::invalid_argument("dictionary sizes must be non-negative");
    }
    return 2 * std::min(size_xz, size_zy);
}

long long induced_size(double precision, long long candidates) {
    if (!(precision >= 0.0 && precision <= 1.0)) {
        throw std::invalid_argument("precision must lie in [0,1]");
    }
    if (candidates < 0) throw std::invalid_argument("candidates must be non-negative");
    return std::llround(precision * static_cast<double>(candidates));
}

long long required_size(const DictState& current, long long min_size) {
    if (current.status == DictStatus::NotExisting) return min_size;
    return std::max<long long>(0, min_size - current.size);
}

double min_precision_k(long long required, long long candidates) {
    if (candidates <= 0) {
        throw std::invalid_argument("candidate size must be positive to form k");
    }
    if (required < 0) throw std::invalid_argument("required size must be non-negative");
    const double k = static_cast<double>(required) / static_cast<double>(candidates);
    return std::min(1.0, k);
}

beta::BetaParams prior_for_pivot(const ScenarioConfig& config,
                                 const LanguageCode& x, const LanguageCode& z,
                                 const LanguageCode& y) {
    double basis = 0.0;
    if (config.alpha_basis == AlphaBasis::OutputPair) {
        basis = config.similarity.get(x, y);
    } else {
        basis = (config.similarity.get(x, z) + config.similarity.get(z, y) +
                 config.similarity.get(x, y)) /
                3.0;
    }
    beta::BetaParams prior =
        beta::prior_from_similarity(basis, config.default_polysemy);
    auto it = config.pair_prior_overrides.find(DictKey(x, y));
    if (it != config.pair_prior_overrides.end()) {
        return beta::posterior(prior, it->second);
    }
    if (config.combined_prior) {
        return beta::posterior(prior, *config.combined_prior);
    }
    return prior;
}

}  // namespace lex
}  // namespace lexiplan
