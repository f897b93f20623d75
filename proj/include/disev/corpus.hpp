#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "disev/distribution.hpp"
#include "disev/label_scheme.hpp"

namespace disev {

// One annotator's judgment on one item. `value` holds the scalar label for
// binary/ordinal schemes; `label_set` holds sorted label indices for
// multilabel schemes (non-empty by invariant).
struct Annotation {
    std::string annotator_id;
    int value = 0;
    std::vector<std::size_t> label_set;
};

using StoredSoftLabel = std::variant<Distribution, MultilabelDistribution>;

struct Item {
    std::string item_id;
    nlohmann::ordered_json text;  // dataset-specific composite; opaque
    std::string task;
    std::vector<Annotation> annotations;
    std::vector<std::string> annotator_ids;
    int number_of_annotations = 0;
    int number_of_annotators = 0;
    std::string language;
    nlohmann::ordered_json hard_label;  // pass-through only, never consumed
    std::optional<StoredSoftLabel> soft_label;
    std::string split;                  // train | dev | test
    nlohmann::ordered_json other_info;  // opaque key-value payload

    // Annotations reordered to annotator_ids order (the Task B vector order).
    std::vector<const Annotation*> ordered_annotations() const;
};

struct AnnotatorProfile {
    std::string annotator_id;
    nlohmann::ordered_json attributes;  // open key-value map; null values = missing
};

struct Dataset {
    std::string name;
    LabelScheme scheme;
    std::vector<Item> items;
    std::vector<AnnotatorProfile> profiles;

    const Item* find_item(std::string_view item_id) const;
    std::vector<const Item*> split_items(const std::string& split) const;  // empty split = all
};

struct Finding {
    std::string item_id;  // empty for dataset-level findings
    std::string field;
    std::string kind;  // e.g. "count-mismatch", "soft-label-mismatch"
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    std::vector<Finding> soft_label_mismatches;           // non-structural
    std::vector<std::string> annotators_without_profile;  // recorded, not an error

    bool structurally_clean() const { return findings.empty(); }
    nlohmann::ordered_json to_json() const;
};

// Parses the harmonized per-split corpus JSON. Accepts both a top-level
// array of items and an object keyed by item_id. Field names are accepted
// in snake_case and in their spaced spelling ("number of annotations").
// Throws ValidationError naming the offending item and field.
Dataset parse_dataset(const std::string& raw_json, const LabelScheme& scheme,
                      const std::string& dataset_name = "");

// Collecting variant used by the CLI: never throws on content problems;
// items that violate the scheme are still materialized so one pass can
// report every finding.
struct ParseOutcome {
    std::optional<Dataset> dataset;
    std::vector<Finding> findings;
};
ParseOutcome parse_dataset_report(const std::string& raw_json, const LabelScheme& scheme,
                                  const std::string& dataset_name = "");

// Annotator metadata file: object annotator_id -> attributes, or an array
// of objects carrying annotator_id. Throws ValidationError.
std::vector<AnnotatorProfile> parse_metadata(const std::string& raw_json);

// Re-checks every structural invariant and cross-checks stored soft labels
// against freshly derived ones.
ValidationReport validate_dataset(const Dataset& dataset);

// Canonical serialization: items sorted by item_id, fixed field order,
// stable for golden-file diffs. When include_derived_soft_labels is set,
// items with annotations get their soft_label filled from derivation.
std::string serialize_dataset(const Dataset& dataset, bool include_derived_soft_labels = false);

std::string serialize_metadata(const std::vector<AnnotatorProfile>& profiles);

}  // namespace disev
