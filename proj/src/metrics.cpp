#include "disev/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disev/errors.hpp"

namespace disev {

namespace {

std::string list_ids(const std::vector<std::string>& ids) {
    std::ostringstream out;
    const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i) out << ", ";
        out << ids[i];
    }
    if (ids.size() > shown) out << ", ... (" << ids.size() << " total)";
    return out.str();
}

// Both maps must cover exactly the same item ids.
template <typename Map>
void check_item_coverage(const Map& predictions, const Map& targets) {
    std::vector<std::string> missing, extra;
    for (const auto& [id, unused] : targets)
        if (!predictions.count(id)) missing.push_back(id);
    for (const auto& [id, unused] : predictions)
        if (!targets.count(id)) extra.push_back(id);
    if (missing.empty() && extra.empty()) return;
    std::string msg = "prediction/gold item coverage mismatch:";
    if (!missing.empty()) msg += " missing predictions for [" + list_ids(missing) + "]";
    if (!extra.empty()) msg += " extra predictions for [" + list_ids(extra) + "]";
    throw CoverageError(msg);
}

void check_alignment(const AnnotatorLabelVector& target, const AnnotatorLabelVector& predicted) {
    if (target.annotator_ids != predicted.annotator_ids)
        throw CoverageError("item \"" + target.item_id +
                            "\": target and prediction annotator_id sequences differ");
    if (target.annotator_ids.empty())
        throw ValidationError("item \"" + target.item_id + "\": no annotators to score");
}

void check_binary(const AnnotatorLabelVector& v) {
    for (int value : v.values)
        if (value != 0 && value != 1)
            throw ValidationError("item \"" + v.item_id + "\": error rate requires binary labels, got " +
                                  std::to_string(value));
}

double binary_row_error(std::span<const std::uint8_t> target, std::span<const std::uint8_t> predicted) {
    std::size_t mismatches = 0;
    for (std::size_t k = 0; k < target.size(); ++k)
        mismatches += target[k] != predicted[k];
    return static_cast<double>(mismatches) / static_cast<double>(target.size());
}

template <typename Map, typename PerItem>
ScoreReport aggregate_over(std::string metric, std::string abbrev, const Map& predictions,
                           const Map& targets, PerItem&& per_item_score) {
    check_item_coverage(predictions, targets);
    std::map<std::string, double> per_item;
    for (const auto& [id, target] : targets)
        per_item[id] = per_item_score(predictions.at(id), target);
    return make_report(std::move(metric), std::move(abbrev), std::move(per_item));
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 4) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pairwise_mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return pairwise_sum(values) / static_cast<double>(values.size());
}

ScoreReport make_report(std::string metric, std::string abbrev,
                        std::map<std::string, double> per_item) {
    ScoreReport report;
    report.metric = std::move(metric);
    report.abbrev = std::move(abbrev);
    report.per_item = std::move(per_item);
    std::vector<double> values;
    values.reserve(report.per_item.size());
    for (const auto& [id, v] : report.per_item) values.push_back(v);
    report.aggregate = pairwise_mean(values);
    return report;
}

nlohmann::ordered_json ScoreReport::to_json() const {
    nlohmann::ordered_json j;
    j["metric"] = metric;
    j["abbrev"] = abbrev;
    j["aggregate"] = aggregate;
    j["N"] = per_item.size();
    nlohmann::ordered_json items = nlohmann::ordered_json::object();
    for (const auto& [id, v] : per_item) items[id] = v;
    j["per_item"] = std::move(items);
    return j;
}

ScoreReport ScoreReport::from_json(const nlohmann::json& j) {
    ScoreReport report;
    report.metric = j.at("metric").get<std::string>();
    report.abbrev = j.value("abbrev", std::string());
    for (const auto& [id, v] : j.at("per_item").items())
        report.per_item[id] = v.get<double>();
    report.aggregate = j.at("aggregate").get<double>();
    return report;
}

double manhattan_distance(const Distribution& predicted, const Distribution& target) {
    if (predicted.size() != target.size())
        throw ValidationError("manhattan distance: distribution arity mismatch (" +
                              std::to_string(predicted.size()) + " vs " +
                              std::to_string(target.size()) + ")");
    double sum = 0.0;
    for (std::size_t k = 0; k < target.size(); ++k)
        sum += std::abs(predicted.probs[k] - target.probs[k]);
    return sum;
}

std::vector<std::vector<double>> build_ground_matrix(std::span<const double> positions) {
    std::vector<std::vector<double>> cost(positions.size(), std::vector<double>(positions.size()));
    for (std::size_t u = 0; u < positions.size(); ++u)
        for (std::size_t v = 0; v < positions.size(); ++v)
            cost[u][v] = std::abs(positions[u] - positions[v]);
    return cost;
}

std::vector<std::vector<double>> build_ground_matrix(const LabelScheme& scheme) {
    if (scheme.kind() != SchemeKind::Ordinal)
        throw ValidationError("ground distance matrix requires an ordinal scheme");
    const auto positions = scheme.bin_positions();
    return build_ground_matrix(positions);
}

double wasserstein_distance(std::span<const double> positions, const Distribution& predicted,
                            const Distribution& target) {
    if (predicted.size() != target.size() || predicted.size() != positions.size())
        throw ValidationError("wasserstein distance: distribution arity mismatch");
    double distance = 0.0;
    double cdf_gap = 0.0;
    for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
        cdf_gap += predicted.probs[k] - target.probs[k];
        distance += std::abs(cdf_gap) * (positions[k + 1] - positions[k]);
    }
    return distance;
}

double wasserstein_distance(const LabelScheme& scheme, const Distribution& predicted,
                            const Distribution& target) {
    if (scheme.kind() != SchemeKind::Ordinal)
        throw ValidationError("wasserstein distance requires an ordinal scheme");
    const auto positions = scheme.bin_positions();
    return wasserstein_distance(positions, predicted, target);
}

double multilabel_manhattan(const MultilabelDistribution& predicted,
                            const MultilabelDistribution& target) {
    if (predicted.per_label.size() != target.per_label.size())
        throw ValidationError("multilabel manhattan: label-set mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < target.per_label.size(); ++j)
        sum += std::abs(predicted.per_label[j][0] - target.per_label[j][0]) +
               std::abs(predicted.per_label[j][1] - target.per_label[j][1]);
    return sum / static_cast<double>(target.per_label.size());
}

double error_rate(const AnnotatorLabelVector& target, const AnnotatorLabelVector& predicted) {
    check_alignment(target, predicted);
    check_binary(target);
    check_binary(predicted);
    std::size_t mismatches = 0;
    for (std::size_t k = 0; k < target.values.size(); ++k)
        mismatches += target.values[k] != predicted.values[k];
    return static_cast<double>(mismatches) / static_cast<double>(target.values.size());
}

double normalized_absolute_distance(const LabelScheme& scheme, const AnnotatorLabelVector& target,
                                    const AnnotatorLabelVector& predicted) {
    if (scheme.kind() != SchemeKind::Ordinal)
        throw ValidationError("normalized absolute distance requires an ordinal scheme");
    check_alignment(target, predicted);
    for (const auto* v : {&target, &predicted})
        for (int value : v->values)
            if (!scheme.valid_scalar(value))
                throw ValidationError("item \"" + v->item_id + "\": label " +
                                      std::to_string(value) + " outside scheme range");
    const double scale = static_cast<double>(scheme.likert_range());
    double sum = 0.0;
    for (std::size_t k = 0; k < target.values.size(); ++k)
        sum += std::abs(target.values[k] - predicted.values[k]) / scale;
    return sum / static_cast<double>(target.values.size());
}

double multilabel_error_rate(const AnnotatorLabelVector& target,
                             const AnnotatorLabelVector& predicted) {
    check_alignment(target, predicted);
    if (target.per_label.size() != predicted.per_label.size() || target.per_label.empty())
        throw ValidationError("item \"" + target.item_id + "\": per-label vector count mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < target.per_label.size(); ++j) {
        if (target.per_label[j].size() != predicted.per_label[j].size())
            throw CoverageError("item \"" + target.item_id + "\": per-label vector length mismatch");
        sum += binary_row_error(target.per_label[j], predicted.per_label[j]);
    }
    return sum / static_cast<double>(target.per_label.size());
}

ScoreReport avg_manhattan(const DistributionMap& predictions, const DistributionMap& targets) {
    return aggregate_over("average_manhattan_distance", "MD", predictions, targets,
                          [](const Distribution& p, const Distribution& t) {
                              return manhattan_distance(p, t);
                          });
}

ScoreReport avg_wasserstein(const LabelScheme& scheme, const DistributionMap& predictions,
                            const DistributionMap& targets) {
    if (scheme.kind() != SchemeKind::Ordinal)
        throw ValidationError("average wasserstein distance requires an ordinal scheme");
    const auto positions = scheme.bin_positions();
    return aggregate_over("average_wasserstein_distance", "WS", predictions, targets,
                          [&](const Distribution& p, const Distribution& t) {
                              return wasserstein_distance(positions, p, t);
                          });
}

ScoreReport mamd(const MultilabelDistributionMap& predictions,
                 const MultilabelDistributionMap& targets) {
    return aggregate_over("multilabel_average_manhattan_distance", "MMD", predictions, targets,
                          [](const MultilabelDistribution& p, const MultilabelDistribution& t) {
                              return multilabel_manhattan(p, t);
                          });
}

ScoreReport aer(const LabelVectorMap& predictions, const LabelVectorMap& targets) {
    return aggregate_over("average_error_rate", "ER", predictions, targets,
                          [](const AnnotatorLabelVector& p, const AnnotatorLabelVector& t) {
                              return error_rate(t, p);
                          });
}

ScoreReport anad(const LabelScheme& scheme, const LabelVectorMap& predictions,
                 const LabelVectorMap& targets) {
    return aggregate_over("average_normalized_absolute_distance", "MAD", predictions, targets,
                          [&](const AnnotatorLabelVector& p, const AnnotatorLabelVector& t) {
                              return normalized_absolute_distance(scheme, t, p);
                          });
}

ScoreReport mer(const LabelVectorMap& predictions, const LabelVectorMap& targets) {
    return aggregate_over("multilabel_error_rate", "MER", predictions, targets,
                          [](const AnnotatorLabelVector& p, const AnnotatorLabelVector& t) {
                              return multilabel_error_rate(t, p);
                          });
}

MetricId official_metric(char task, const LabelScheme& scheme) {
    if (task == 'A' || task == 'a') {
        switch (scheme.kind()) {
            case SchemeKind::Binary:
                return MetricId::Manhattan;
            case SchemeKind::Ordinal:
                return MetricId::Wasserstein;
            case SchemeKind::Multilabel:
                return MetricId::Mamd;
        }
    } else if (task == 'B' || task == 'b') {
        switch (scheme.kind()) {
            case SchemeKind::Binary:
                return MetricId::Aer;
            case SchemeKind::Ordinal:
                return MetricId::Anad;
            case SchemeKind::Multilabel:
                return MetricId::Mer;
        }
    }
    throw ValidationError(std::string("unknown task \"") + task + "\"; expected A or B");
}

MetricId metric_from_name(const std::string& name) {
    if (name == "manhattan" || name == "MD" || name == "average_manhattan_distance")
        return MetricId::Manhattan;
    if (name == "wasserstein" || name == "WS" || name == "average_wasserstein_distance")
        return MetricId::Wasserstein;
    if (name == "mamd" || name == "MMD" || name == "multilabel_average_manhattan_distance")
        return MetricId::Mamd;
    if (name == "aer" || name == "ER" || name == "average_error_rate") return MetricId::Aer;
    if (name == "anad" || name == "MAD" || name == "average_normalized_absolute_distance")
        return MetricId::Anad;
    if (name == "mer" || name == "MER" || name == "multilabel_error_rate") return MetricId::Mer;
    throw ValidationError("unknown metric \"" + name + "\"");
}

std::string metric_name(MetricId id) {
    switch (id) {
        case MetricId::Manhattan: return "average_manhattan_distance";
        case MetricId::Wasserstein: return "average_wasserstein_distance";
        case MetricId::Mamd: return "multilabel_average_manhattan_distance";
        case MetricId::Aer: return "average_error_rate";
        case MetricId::Anad: return "average_normalized_absolute_distance";
        case MetricId::Mer: return "multilabel_error_rate";
    }
    return "?";
}

std::string metric_abbrev(MetricId id) {
    switch (id) {
        case MetricId::Manhattan: return "MD";
        case MetricId::Wasserstein: return "WS";
        case MetricId::Mamd: return "MMD";
        case MetricId::Aer: return "ER";
        case MetricId::Anad: return "MAD";
        case MetricId::Mer: return "MER";
    }
    return "?";
}

}  // namespace disev
