#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "disev/corpus.hpp"
#include "disev/metrics.hpp"

namespace disev {

// A Task A or Task B prediction set in the canonical NDJSON wire format:
// one header line {task, dataset, scheme[, provenance]}, then one record
// {item_id, prediction} per line. Exactly one of the payload maps is
// populated, selected by (task, scheme kind).
struct PredictionFile {
    char task = 'A';
    std::string dataset;
    LabelScheme scheme;
    nlohmann::ordered_json provenance;  // optional; baselines record {kind, seed, tie_breaks}

    DistributionMap task_a;
    MultilabelDistributionMap task_a_multilabel;
    std::map<std::string, std::map<std::string, int>> task_b;
    std::map<std::string, std::map<std::string, std::vector<std::size_t>>> task_b_multilabel;

    std::size_t item_count() const;
};

std::string write_prediction_file(const PredictionFile& predictions);
PredictionFile parse_prediction_file(const std::string& ndjson);

// ---- Gold-side extraction ----

// Derived gold soft labels of every annotated item (split filter optional;
// empty = all). Throws on items without annotations.
DistributionMap gold_soft_labels(const Dataset& dataset, const std::string& split = "");
MultilabelDistributionMap gold_soft_labels_multilabel(const Dataset& dataset,
                                                      const std::string& split = "");

// Gold annotator label vectors for Task B, in annotator_ids order
// (restricted to annotators that actually annotated the item).
LabelVectorMap gold_label_vectors(const Dataset& dataset, const std::string& split = "");

// ---- Scoring glue ----

// Aligns a Task B prediction map onto the gold vectors. Every gold slot
// must be predicted; predictions for annotators outside the item's
// annotator_ids are coverage errors.
LabelVectorMap align_task_b_predictions(const PredictionFile& predictions,
                                        const LabelVectorMap& gold, const Dataset& dataset);

// Scores a prediction file against a gold dataset with the official
// (task, scheme) metric, or an explicit override.
ScoreReport score_predictions(const Dataset& gold, const PredictionFile& predictions,
                              std::optional<MetricId> metric_override = std::nullopt,
                              const std::string& split = "");

}  // namespace disev
