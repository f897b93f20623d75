#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "disev/distribution.hpp"
#include "disev/label_scheme.hpp"

namespace disev {

// Per-item vector of annotator labels; the unit of Task B scoring. Values
// are aligned to annotator_ids. For multilabel schemes, per_label holds one
// 0/1 row per scheme label, each row aligned to annotator_ids.
struct AnnotatorLabelVector {
    std::string item_id;
    std::vector<std::string> annotator_ids;
    std::vector<int> values;
    std::vector<std::vector<std::uint8_t>> per_label;
};

struct ScoreReport {
    std::string metric;  // canonical name, e.g. "average_wasserstein_distance"
    std::string abbrev;  // leaderboard column name, e.g. "WS"
    std::map<std::string, double> per_item;
    double aggregate = 0.0;  // mean of per_item in item_id order

    std::size_t item_count() const { return per_item.size(); }

    nlohmann::ordered_json to_json() const;
    static ScoreReport from_json(const nlohmann::json& j);
};

// Deterministic reduction: pairwise summation in index order, so corpus
// aggregates are bit-stable regardless of evaluation parallelism.
double pairwise_sum(std::span<const double> values);
double pairwise_mean(std::span<const double> values);

ScoreReport make_report(std::string metric, std::string abbrev,
                        std::map<std::string, double> per_item);

// ---- Task A distances ----

// L1 between two same-arity distributions; range [0, 2].
double manhattan_distance(const Distribution& predicted, const Distribution& target);

// Bin-to-bin transport cost |pos_u - pos_v| for an ordinal scheme.
std::vector<std::vector<double>> build_ground_matrix(const LabelScheme& scheme);
std::vector<std::vector<double>> build_ground_matrix(std::span<const double> positions);

// 1-Wasserstein distance under the ground matrix above, in closed form:
// sum_k |CDF_p(k) - CDF_t(k)| * (pos_{k+1} - pos_k). Equals the optimal
// transport LP solution; bins may be unevenly spaced.
double wasserstein_distance(std::span<const double> positions, const Distribution& predicted,
                            const Distribution& target);
double wasserstein_distance(const LabelScheme& scheme, const Distribution& predicted,
                            const Distribution& target);

// Per-item multilabel Manhattan: mean over labels of the per-label L1.
double multilabel_manhattan(const MultilabelDistribution& predicted,
                            const MultilabelDistribution& target);

// ---- Task B distances ----

// Fraction of mismatched annotator labels between two aligned binary label
// vectors; range [0, 1].
double error_rate(const AnnotatorLabelVector& target, const AnnotatorLabelVector& predicted);

// Mean absolute annotator-level deviation, normalized by the Likert range.
double normalized_absolute_distance(const LabelScheme& scheme, const AnnotatorLabelVector& target,
                                    const AnnotatorLabelVector& predicted);

// Mean over labels of the per-label error rate.
double multilabel_error_rate(const AnnotatorLabelVector& target,
                             const AnnotatorLabelVector& predicted);

// ---- Corpus aggregates ----

using DistributionMap = std::map<std::string, Distribution>;
using MultilabelDistributionMap = std::map<std::string, MultilabelDistribution>;
using LabelVectorMap = std::map<std::string, AnnotatorLabelVector>;

ScoreReport avg_manhattan(const DistributionMap& predictions, const DistributionMap& targets);
ScoreReport avg_wasserstein(const LabelScheme& scheme, const DistributionMap& predictions,
                            const DistributionMap& targets);
ScoreReport mamd(const MultilabelDistributionMap& predictions,
                 const MultilabelDistributionMap& targets);
ScoreReport aer(const LabelVectorMap& predictions, const LabelVectorMap& targets);
ScoreReport anad(const LabelScheme& scheme, const LabelVectorMap& predictions,
                 const LabelVectorMap& targets);
ScoreReport mer(const LabelVectorMap& predictions, const LabelVectorMap& targets);

// ---- Official metric routing ----

enum class MetricId { Manhattan, Wasserstein, Mamd, Aer, Anad, Mer };

// The shared-task assignment: A+binary -> MD, A+ordinal -> WS,
// A+multilabel -> MMD, B+binary -> ER, B+ordinal -> MAD, B+multilabel -> MER.
MetricId official_metric(char task, const LabelScheme& scheme);
MetricId metric_from_name(const std::string& name);
std::string metric_name(MetricId id);
std::string metric_abbrev(MetricId id);

}  // namespace disev
