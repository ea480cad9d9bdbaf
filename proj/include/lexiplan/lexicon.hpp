#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexiplan/beta.hpp"

namespace lexiplan {

using LanguageCode = std::string;

/// Unordered pair of distinct language codes. Stored lexicographically so
/// (x,y) and (y,x) compare equal everywhere.
struct DictKey {
    LanguageCode a;
    LanguageCode b;

    DictKey() = default;
    DictKey(LanguageCode x, LanguageCode y);

    bool contains(const LanguageCode& code) const { return a == code || b == code; }
    /// The member that is not `code`; throws if `code` is not in the pair.
    const LanguageCode& other(const LanguageCode& code) const;
    std::string str() const { return a + "-" + b; }

    friend bool operator==(const DictKey&, const DictKey&) = default;
    friend auto operator<=>(const DictKey&, const DictKey&) = default;
};

/// Parses "x-y" (also accepts ':' or ',' separators).
DictKey parse_dict_key(const std::string& text);

/// Symmetric similarity table over language pairs, values in [0,1].
class SimilarityMatrix {
public:
    void set(const LanguageCode& x, const LanguageCode& y, double value);
    double get(const LanguageCode& x, const LanguageCode& y) const;
    bool has(const LanguageCode& x, const LanguageCode& y) const;
    std::size_t size() const { return values_.size(); }

private:
    std::map<DictKey, double> values_;
};

enum class DictStatus : std::uint8_t {
    NotExisting,   // n
    ExistingUnsat, // eu
    PivotUnsat,    // pu(z)
    Satisfied,     // s
};

const char* to_string(DictStatus status);

/// Per-pair dictionary record. `pivot` is set only for PivotUnsat.
struct DictState {
    DictKey key;
    DictStatus status = DictStatus::NotExisting;
    LanguageCode pivot;
    long long size = 0;

    bool satisfied() const { return status == DictStatus::Satisfied; }
    friend bool operator==(const DictState&, const DictState&) = default;
};

enum class AlphaBasis : std::uint8_t {
    OutputPair,    // alpha from similarity(x,y) -- first-batch regime
    TripleAverage, // alpha from mean of the three pair similarities
};

/// Per-pair unit costs and global knobs of the cost function.
struct CostModel {
    struct Unit {
        double creation = 0.0;
        double evaluation = 0.0;
    };
    Unit ct1{3.0, 1.0};  // national-ethnic creation+evaluation
    Unit ct2{3.0, 8.0};  // ethnic-ethnic creation+evaluation
    double t4_evaluation = 4.0;  // evaluation of induced triples, per pair
    double human_accuracy = 0.8;

    enum class Formula : std::uint8_t { Itemized, Eq10Literal };
    Formula formula = Formula::Itemized;

    enum class PivotCharge : std::uint8_t { InducedSet, AllCandidates };
    PivotCharge pivot_charge = PivotCharge::InducedSet;

    /// Unit costs derived from the 2019 experiment tables.
    static CostModel paper2019() { return CostModel{}; }
};

/// Full planning scenario. `languages.front()` is the common/national
/// language unless `national` overrides it.
struct ScenarioConfig {
    std::vector<LanguageCode> languages;
    SimilarityMatrix similarity;
    std::map<DictKey, long long> existing;
    long long min_size = 0;
    double default_polysemy = 3.0;
    AlphaBasis alpha_basis = AlphaBasis::OutputPair;
    std::optional<beta::BetaParams> combined_prior;  // summed into every pivot prior
    std::map<DictKey, beta::BetaParams> pair_prior_overrides;  // summed instead, per pair
    CostModel cost_model;
    LanguageCode national;
    std::size_t state_budget = 1'000'000;
    bool merge_pivot_identity = false;
    std::uint64_t seed = 0;

    const LanguageCode& national_language() const {
        return national.empty() ? languages.front() : national;
    }
    int language_index(const LanguageCode& code) const;  // -1 if unknown
    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

/// (x, y) with x before y in scenario declaration order.
std::pair<LanguageCode, LanguageCode> scenario_pair_order(
    const DictKey& key, const ScenarioConfig& config);

namespace lex {

/// All C(n,2) pairs in declaration order, size 0, NotExisting.
/// Requires >= 3 distinct languages.
std::vector<DictState> generate_dictionary_list(
    std::span<const LanguageCode> languages);

/// Maps known sizes onto statuses: >= min_size -> Satisfied,
/// 0 < size < min_size -> ExistingUnsat, absent -> NotExisting.
std::vector<DictState> apply_existing(std::vector<DictState> dicts,
                                      const std::map<DictKey, long long>& existing,
                                      long long min_size);

/// Translation-pair candidates: 2 * min of the two input sizes.
long long candidate_size(long long size_xz, long long size_zy);

/// round(precision * candidates), half away from zero.
long long induced_size(double precision, long long candidates);

/// Pairs still needed: min_size for NotExisting, else max(0, min_size - size).
long long required_size(const DictState& current, long long min_size);

/// Minimum induction precision k = required / candidates, clamped to [0,1].
/// k == 1 with required >= candidates means the pivot can never satisfy.
double min_precision_k(long long required, long long candidates);

/// Prior for pivot (x,z,y): similarity basis per config.alpha_basis, then
/// prior_from_similarity, parameter-summed with any configured combined
/// posterior (or a per-pair override).
beta::BetaParams prior_for_pivot(const ScenarioConfig& config,
                                 const LanguageCode& x, const LanguageCode& z,
                                 const LanguageCode& y);

}  // namespace lex
}  // namespace lexiplan
