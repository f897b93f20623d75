#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace disev {

enum class SchemeKind { Binary, Ordinal, Multilabel };

// Declares how a dataset's labels live: binary 0/1, an inclusive integer
// Likert range, or a set-valued choice over a fixed nominal label list.
// The scheme fixes the soft-label bin layout, the bin positions used as
// Wasserstein ground coordinates, and the Likert range used to normalize
// annotator-level distances.
class LabelScheme {
  public:
    static LabelScheme binary();
    static LabelScheme ordinal(int min_value, int max_value);
    static LabelScheme multilabel(std::vector<std::string> label_names);

    // Bundled shared-task configurations: csc, mp, par, ven.
    static LabelScheme bundled(const std::string& name);
    static bool is_bundled(const std::string& name);

    // {"kind": "ordinal", "min": -5, "max": 5} etc.
    static LabelScheme from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;

    SchemeKind kind() const { return kind_; }
    int min_value() const { return min_value_; }
    int max_value() const { return max_value_; }
    const std::vector<std::string>& label_names() const { return label_names_; }

    // Number of soft-label bins: Likert width for ordinal, 2 for binary,
    // label count for multilabel (where each label then carries its own
    // two-bin distribution).
    std::size_t bin_count() const;

    // Ordinal/binary bin positions on the label axis, ascending.
    std::vector<double> bin_positions() const;

    // Scale range of a Likert scheme (max - min); the NAD normalizer.
    int likert_range() const;

    // Index of a scalar label's bin, or of a label name.
    std::size_t bin_index(int value) const;
    std::size_t label_index(const std::string& name) const;

    bool valid_scalar(int value) const;

    bool operator==(const LabelScheme&) const = default;

  private:
    SchemeKind kind_ = SchemeKind::Binary;
    int min_value_ = 0;
    int max_value_ = 1;
    std::vector<std::string> label_names_;
};

std::string to_string(SchemeKind kind);

}  // namespace disev
