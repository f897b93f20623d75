#include "disev/predictions.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "disev/errors.hpp"
#include "disev/soft_label.hpp"

namespace disev {

namespace {

using nlohmann::ordered_json;

ordered_json label_set_to_json(const std::vector<std::size_t>& set, const LabelScheme& scheme) {
    std::vector<std::string> names;
    names.reserve(set.size());
    for (std::size_t idx : set) names.push_back(scheme.label_names()[idx]);
    return names;
}

std::vector<std::size_t> label_set_from_json(const ordered_json& j, const LabelScheme& scheme,
                                             const std::string& context) {
    if (!j.is_array())
        throw ValidationError(context + ": multilabel prediction must be a list of label names");
    std::set<std::size_t> idx;
    for (const auto& e : j) {
        if (!e.is_string()) throw ValidationError(context + ": label names must be strings");
        idx.insert(scheme.label_index(e.get<std::string>()));
    }
    if (idx.empty()) throw ValidationError(context + ": label set must be non-empty");
    return {idx.begin(), idx.end()};
}

}  // namespace

std::size_t PredictionFile::item_count() const {
    return task_a.size() + task_a_multilabel.size() + task_b.size() + task_b_multilabel.size();
}

std::string write_prediction_file(const PredictionFile& predictions) {
    std::ostringstream out;
    ordered_json header;
    header["task"] = std::string(1, predictions.task);
    header["dataset"] = predictions.dataset;
    header["scheme"] = predictions.scheme.to_json();
    if (!predictions.provenance.is_null() && !predictions.provenance.empty())
        header["provenance"] = predictions.provenance;
    out << header.dump() << "\n";

    auto emit = [&](const std::string& item_id, ordered_json prediction) {
        ordered_json record;
        record["item_id"] = item_id;
        record["prediction"] = std::move(prediction);
        out << record.dump() << "\n";
    };

    for (const auto& [id, dist] : predictions.task_a) emit(id, dist.to_json(predictions.scheme));
    for (const auto& [id, dist] : predictions.task_a_multilabel)
        emit(id, dist.to_json(predictions.scheme));
    for (const auto& [id, by_annotator] : predictions.task_b) {
        ordered_json p = ordered_json::object();
        for (const auto& [annotator, value] : by_annotator) p[annotator] = value;
        emit(id, std::move(p));
    }
    for (const auto& [id, by_annotator] : predictions.task_b_multilabel) {
        ordered_json p = ordered_json::object();
        for (const auto& [annotator, set] : by_annotator)
            p[annotator] = label_set_to_json(set, predictions.scheme);
        emit(id, std::move(p));
    }
    return out.str();
}

PredictionFile parse_prediction_file(const std::string& ndjson) {
    std::istringstream in(ndjson);
    std::string line;

    // Header line.
    if (!std::getline(in, line) || line.empty())
        throw ValidationError("prediction file: missing header line");
    ordered_json header;
    try {
        header = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("prediction file header: ") + e.what());
    }
    PredictionFile predictions;
    const std::string task = header.at("task").get<std::string>();
    if (task != "A" && task != "B")
        throw ValidationError("prediction file: task must be \"A\" or \"B\", got \"" + task + "\"");
    predictions.task = task[0];
    predictions.dataset = header.value("dataset", std::string());
    try {
        predictions.scheme = LabelScheme::from_json(header.at("scheme"));
    } catch (const std::exception& e) {
        throw ValidationError(std::string("prediction file header scheme: ") + e.what());
    }
    if (header.contains("provenance")) predictions.provenance = header["provenance"];

    const bool multilabel = predictions.scheme.kind() == SchemeKind::Multilabel;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json record;
        try {
            record = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("prediction file line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        if (!record.contains("item_id") || !record.contains("prediction"))
            throw ValidationError("prediction file line " + std::to_string(line_no) +
                                  ": record needs item_id and prediction");
        const std::string item_id = record["item_id"].is_string()
                                        ? record["item_id"].get<std::string>()
                                        : record["item_id"].dump();
        const std::string context = "item \"" + item_id + "\"";
        const auto& payload = record["prediction"];

        const bool duplicate =
            predictions.task_a.count(item_id) || predictions.task_a_multilabel.count(item_id) ||
            predictions.task_b.count(item_id) || predictions.task_b_multilabel.count(item_id);
        if (duplicate)
            throw ValidationError("prediction file: duplicate prediction for " + context);

        if (predictions.task == 'A') {
            if (multilabel)
                predictions.task_a_multilabel[item_id] =
                    MultilabelDistribution::from_json(payload, predictions.scheme, context);
            else
                predictions.task_a[item_id] =
                    Distribution::from_json(payload, predictions.scheme, context);
        } else {
            if (!payload.is_object())
                throw ValidationError(context + ": Task B prediction must map annotators to labels");
            if (multilabel) {
                std::map<std::string, std::vector<std::size_t>> by_annotator;
                for (const auto& [annotator, value] : payload.items())
                    by_annotator[annotator] = label_set_from_json(
                        value, predictions.scheme, context + " annotator " + annotator);
                predictions.task_b_multilabel[item_id] = std::move(by_annotator);
            } else {
                std::map<std::string, int> by_annotator;
                for (const auto& [annotator, value] : payload.items()) {
                    if (!value.is_number_integer())
                        throw ValidationError(context + ": label of annotator " + annotator +
                                              " must be an integer");
                    const int v = value.get<int>();
                    if (!predictions.scheme.valid_scalar(v))
                        throw ValidationError(context + ": label " + std::to_string(v) +
                                              " of annotator " + annotator +
                                              " outside scheme range");
                    by_annotator[annotator] = v;
                }
                predictions.task_b[item_id] = std::move(by_annotator);
            }
        }
    }
    return predictions;
}

DistributionMap gold_soft_labels(const Dataset& dataset, const std::string& split) {
    if (dataset.scheme.kind() == SchemeKind::Multilabel)
        throw ValidationError("dataset scheme is multilabel; use the multilabel gold accessor");
    DistributionMap gold;
    for (const Item* item : dataset.split_items(split)) {
        const SoftLabel label = derive_soft_label(*item, dataset.scheme);
        gold[item->item_id] = std::get<ExactDistribution>(label).to_distribution();
    }
    return gold;
}

MultilabelDistributionMap gold_soft_labels_multilabel(const Dataset& dataset,
                                                      const std::string& split) {
    if (dataset.scheme.kind() != SchemeKind::Multilabel)
        throw ValidationError("dataset scheme is not multilabel");
    MultilabelDistributionMap gold;
    for (const Item* item : dataset.split_items(split)) {
        const SoftLabel label = derive_soft_label(*item, dataset.scheme);
        gold[item->item_id] = std::get<ExactMultilabelDistribution>(label).to_distribution();
    }
    return gold;
}

LabelVectorMap gold_label_vectors(const Dataset& dataset, const std::string& split) {
    const bool multilabel = dataset.scheme.kind() == SchemeKind::Multilabel;
    const std::size_t label_count = multilabel ? dataset.scheme.label_names().size() : 0;
    LabelVectorMap gold;
    for (const Item* item : dataset.split_items(split)) {
        if (item->annotations.empty())
            throw ValidationError("item \"" + item->item_id +
                                  "\": no annotations to build a gold label vector from");
        AnnotatorLabelVector vec;
        vec.item_id = item->item_id;
        const auto ordered = item->ordered_annotations();
        if (multilabel) vec.per_label.assign(label_count, {});
        for (const Annotation* ann : ordered) {
            vec.annotator_ids.push_back(ann->annotator_id);
            if (multilabel) {
                for (std::size_t j = 0; j < label_count; ++j)
                    vec.per_label[j].push_back(
                        std::count(ann->label_set.begin(), ann->label_set.end(), j) ? 1 : 0);
            } else {
                vec.values.push_back(ann->value);
            }
        }
        gold[item->item_id] = std::move(vec);
    }
    return gold;
}

LabelVectorMap align_task_b_predictions(const PredictionFile& predictions,
                                        const LabelVectorMap& gold, const Dataset& dataset) {
    const bool multilabel = dataset.scheme.kind() == SchemeKind::Multilabel;
    const std::size_t label_count = multilabel ? dataset.scheme.label_names().size() : 0;
    std::unordered_map<std::string_view, const Item*> items_by_id;
    items_by_id.reserve(dataset.items.size());
    for (const auto& item : dataset.items) items_by_id.emplace(item.item_id, &item);
    LabelVectorMap aligned;
    for (const auto& [item_id, target] : gold) {
        const Item* item = items_by_id.at(item_id);
        std::set<std::string> allowed(item->annotator_ids.begin(), item->annotator_ids.end());

        AnnotatorLabelVector vec;
        vec.item_id = item_id;
        vec.annotator_ids = target.annotator_ids;
        if (multilabel) {
            const auto it = predictions.task_b_multilabel.find(item_id);
            if (it == predictions.task_b_multilabel.end())
                throw CoverageError("missing Task B prediction for item \"" + item_id + "\"");
            for (const auto& [annotator, unused] : it->second)
                if (!allowed.count(annotator))
                    throw CoverageError("item \"" + item_id + "\": prediction for annotator " +
                                        annotator + " who is not in annotator_ids");
            vec.per_label.assign(label_count, {});
            for (const auto& annotator : target.annotator_ids) {
                const auto slot = it->second.find(annotator);
                if (slot == it->second.end())
                    throw CoverageError("item \"" + item_id + "\": no prediction for annotator " +
                                        annotator);
                for (std::size_t j = 0; j < label_count; ++j)
                    vec.per_label[j].push_back(
                        std::count(slot->second.begin(), slot->second.end(), j) ? 1 : 0);
            }
        } else {
            const auto it = predictions.task_b.find(item_id);
            if (it == predictions.task_b.end())
                throw CoverageError("missing Task B prediction for item \"" + item_id + "\"");
            for (const auto& [annotator, unused] : it->second)
                if (!allowed.count(annotator))
                    throw CoverageError("item \"" + item_id + "\": prediction for annotator " +
                                        annotator + " who is not in annotator_ids");
            for (const auto& annotator : target.annotator_ids) {
                const auto slot = it->second.find(annotator);
                if (slot == it->second.end())
                    throw CoverageError("item \"" + item_id + "\": no prediction for annotator " +
                                        annotator);
                vec.values.push_back(slot->second);
            }
        }
        aligned[item_id] = std::move(vec);
    }

    // Extra predicted items are coverage errors too.
    std::vector<std::string> extra;
    for (const auto& [id, unused] : predictions.task_b)
        if (!gold.count(id)) extra.push_back(id);
    for (const auto& [id, unused] : predictions.task_b_multilabel)
        if (!gold.count(id)) extra.push_back(id);
    if (!extra.empty())
        throw CoverageError("Task B predictions cover " + std::to_string(extra.size()) +
                            " items outside the gold set, e.g. \"" + extra.front() + "\"");
    return aligned;
}

ScoreReport score_predictions(const Dataset& gold, const PredictionFile& predictions,
                              std::optional<MetricId> metric_override, const std::string& split) {
    if (!(predictions.scheme == gold.scheme))
        throw ValidationError("prediction file scheme does not match the gold dataset scheme");
    const MetricId metric =
        metric_override ? *metric_override : official_metric(predictions.task, gold.scheme);
    const bool metric_is_task_a =
        metric == MetricId::Manhattan || metric == MetricId::Wasserstein || metric == MetricId::Mamd;
    if (metric_is_task_a != (predictions.task == 'A'))
        throw ValidationError(std::string("metric ") + metric_name(metric) +
                              " cannot score a Task " + predictions.task + " prediction file");

    switch (metric) {
        case MetricId::Manhattan:
            return avg_manhattan(predictions.task_a, gold_soft_labels(gold, split));
        case MetricId::Wasserstein:
            return avg_wasserstein(gold.scheme, predictions.task_a, gold_soft_labels(gold, split));
        case MetricId::Mamd:
            return mamd(predictions.task_a_multilabel, gold_soft_labels_multilabel(gold, split));
        case MetricId::Aer: {
            const auto targets = gold_label_vectors(gold, split);
            return aer(align_task_b_predictions(predictions, targets, gold), targets);
        }
        case MetricId::Anad: {
            const auto targets = gold_label_vectors(gold, split);
            return anad(gold.scheme, align_task_b_predictions(predictions, targets, gold), targets);
        }
        case MetricId::Mer: {
            const auto targets = gold_label_vectors(gold, split);
            return mer(align_task_b_predictions(predictions, targets, gold), targets);
        }
    }
    throw ValidationError("unreachable metric routing");
}

}  // namespace disev
