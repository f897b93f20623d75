#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include "json.hpp"

#include "disev/label_scheme.hpp"
#include "disev/rational.hpp"

namespace disev {

inline constexpr double kMassTolerance = 1e-9;

// Probability vector over a scheme's ordered bins; the unit of Task A
// scoring. Bin k of an ordinal/binary scheme sits at position min+k.
struct Distribution {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }

    // Mass within kMassTolerance of 1 and no negative entries.
    bool valid() const;

    // JSON object keyed by label value, e.g. {"1": 0.5, "2": 0.25, ...}.
    nlohmann::ordered_json to_json(const LabelScheme& scheme) const;
    static Distribution from_json(const nlohmann::json& j, const LabelScheme& scheme,
                                  const std::string& context);
};

// One two-bin distribution [P(not selected), P(selected)] per label of a
// multilabel scheme, aligned to scheme.label_names order.
struct MultilabelDistribution {
    std::vector<std::array<double, 2>> per_label;

    bool valid() const;

    // {"C": {"0": 1.0, "1": 0.0}, ...}
    nlohmann::ordered_json to_json(const LabelScheme& scheme) const;
    static MultilabelDistribution from_json(const nlohmann::json& j, const LabelScheme& scheme,
                                            const std::string& context);
};

// Exact-rational counterparts used for gold derivation, so golden values
// compare with zero tolerance and modal binning needs no epsilon.
struct ExactDistribution {
    std::vector<Rational> probs;

    Distribution to_distribution() const;
    bool operator==(const ExactDistribution&) const = default;
    // Lexicographic over the probability vector; the deterministic
    // tie-break order for modal distributions.
    std::strong_ordering operator<=>(const ExactDistribution&) const = default;
};

struct ExactMultilabelDistribution {
    std::vector<std::array<Rational, 2>> per_label;

    MultilabelDistribution to_distribution() const;
    bool operator==(const ExactMultilabelDistribution&) const = default;
    std::strong_ordering operator<=>(const ExactMultilabelDistribution&) const = default;
};

}  // namespace disev
