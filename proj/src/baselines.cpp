#include "disev/baselines.hpp"

#include <algorithm>
#include <map>

#include "disev/errors.hpp"
#include "disev/rng.hpp"
#include "disev/soft_label.hpp"

namespace disev {

namespace {

using nlohmann::ordered_json;

std::vector<const Item*> annotated_items(const Dataset& dataset) {
    std::vector<const Item*> items;
    for (const auto& item : dataset.items)
        if (!item.annotations.empty()) items.push_back(&item);
    if (items.empty())
        throw ValidationError("dataset \"" + dataset.name +
                              "\" has no annotated items to fit a baseline on");
    return items;
}

PredictionFile make_file(char task, const Dataset& target, ordered_json provenance) {
    PredictionFile file;
    file.task = task;
    file.dataset = target.name;
    file.scheme = target.scheme;
    file.provenance = std::move(provenance);
    return file;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t bins,
                                        RandomFamily family) {
    if (family == RandomFamily::SimplexUniform) return uniform_simplex(rng, bins);
    std::vector<double> probs(bins);
    double total = 0.0;
    for (auto& p : probs) {
        p = uniform01(rng);
        total += p;
    }
    for (auto& p : probs) p /= total;
    return probs;
}

std::vector<std::size_t> random_label_subset(std::mt19937_64& rng, std::size_t label_count) {
    if (label_count > 62)
        throw ValidationError("random label subsets support at most 62 scheme labels");
    // Uniform over the 2^L - 1 non-empty subsets.
    const std::uint64_t mask = 1 + uniform_below(rng, (1ULL << label_count) - 1);
    std::vector<std::size_t> set;
    for (std::size_t j = 0; j < label_count; ++j)
        if (mask & (1ULL << j)) set.push_back(j);
    return set;
}

}  // namespace

PredictionFile most_frequent_soft(const Dataset& train, const Dataset& target,
                                  const std::string& target_split) {
    const auto items = annotated_items(train);
    std::size_t tie_candidates = 1;

    ordered_json provenance;
    provenance["kind"] = "most_frequent";
    PredictionFile file = make_file('A', target, {});

    if (train.scheme.kind() == SchemeKind::Multilabel) {
        std::map<ExactMultilabelDistribution, std::size_t> counts;
        for (const Item* item : items)
            ++counts[std::get<ExactMultilabelDistribution>(derive_soft_label(*item, train.scheme))];
        const ExactMultilabelDistribution* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [dist, count] : counts) {
            if (count > best_count) {
                best = &dist;
                best_count = count;
                tie_candidates = 1;
            } else if (count == best_count) {
                ++tie_candidates;  // map order keeps the lexicographically smallest
            }
        }
        const MultilabelDistribution modal = best->to_distribution();
        for (const Item* item : target.split_items(target_split))
            file.task_a_multilabel[item->item_id] = modal;
    } else {
        std::map<ExactDistribution, std::size_t> counts;
        for (const Item* item : items)
            ++counts[std::get<ExactDistribution>(derive_soft_label(*item, train.scheme))];
        const ExactDistribution* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [dist, count] : counts) {
            if (count > best_count) {
                best = &dist;
                best_count = count;
                tie_candidates = 1;
            } else if (count == best_count) {
                ++tie_candidates;
            }
        }
        const Distribution modal = best->to_distribution();
        for (const Item* item : target.split_items(target_split))
            file.task_a[item->item_id] = modal;
    }

    provenance["tie_breaks"] = tie_candidates > 1 ? tie_candidates - 1 : 0;
    file.provenance = std::move(provenance);
    return file;
}

PredictionFile most_frequent_label(const Dataset& train, const Dataset& target,
                                   const std::string& target_split) {
    const auto items = annotated_items(train);
    std::size_t tie_candidates = 1;

    ordered_json provenance;
    provenance["kind"] = "most_frequent";
    PredictionFile file = make_file('B', target, {});

    if (train.scheme.kind() == SchemeKind::Multilabel) {
        std::map<std::vector<std::size_t>, std::size_t> counts;
        for (const Item* item : items)
            for (const auto& ann : item->annotations) ++counts[ann.label_set];
        const std::vector<std::size_t>* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [set, count] : counts) {
            if (count > best_count) {
                best = &set;
                best_count = count;
                tie_candidates = 1;
            } else if (count == best_count) {
                ++tie_candidates;
            }
        }
        for (const Item* item : target.split_items(target_split)) {
            auto& by_annotator = file.task_b_multilabel[item->item_id];
            for (const auto& annotator : item->annotator_ids) by_annotator[annotator] = *best;
        }
    } else {
        std::map<int, std::size_t> counts;
        for (const Item* item : items)
            for (const auto& ann : item->annotations) ++counts[ann.value];
        int best = 0;
        std::size_t best_count = 0;
        for (const auto& [value, count] : counts) {
            if (count > best_count) {
                best = value;
                best_count = count;
                tie_candidates = 1;
            } else if (count == best_count) {
                ++tie_candidates;  // map order keeps the smallest label value
            }
        }
        for (const Item* item : target.split_items(target_split)) {
            auto& by_annotator = file.task_b[item->item_id];
            for (const auto& annotator : item->annotator_ids) by_annotator[annotator] = best;
        }
    }

    provenance["tie_breaks"] = tie_candidates > 1 ? tie_candidates - 1 : 0;
    file.provenance = std::move(provenance);
    return file;
}

PredictionFile random_soft(const LabelScheme& scheme, const Dataset& target, std::uint64_t seed,
                           RandomFamily family, const std::string& target_split) {
    ordered_json provenance;
    provenance["kind"] = "random";
    provenance["seed"] = seed;
    provenance["family"] =
        family == RandomFamily::SimplexUniform ? "simplex_uniform" : "normalized_uniform";
    PredictionFile file = make_file('A', target, std::move(provenance));
    file.scheme = scheme;

    for (const Item* item : target.split_items(target_split)) {
        std::mt19937_64 rng(subseed(seed, item->item_id, /*stream=*/'A'));
        if (scheme.kind() == SchemeKind::Multilabel) {
            MultilabelDistribution dist;
            for (std::size_t j = 0; j < scheme.label_names().size(); ++j) {
                const auto pair = random_distribution(rng, 2, family);
                dist.per_label.push_back({pair[0], pair[1]});
            }
            file.task_a_multilabel[item->item_id] = std::move(dist);
        } else {
            Distribution dist;
            dist.probs = random_distribution(rng, scheme.bin_count(), family);
            file.task_a[item->item_id] = std::move(dist);
        }
    }
    return file;
}

PredictionFile random_label(const LabelScheme& scheme, const Dataset& target, std::uint64_t seed,
                            const std::string& target_split) {
    ordered_json provenance;
    provenance["kind"] = "random";
    provenance["seed"] = seed;
    PredictionFile file = make_file('B', target, std::move(provenance));
    file.scheme = scheme;

    for (const Item* item : target.split_items(target_split)) {
        std::mt19937_64 rng(subseed(seed, item->item_id, /*stream=*/'B'));
        if (scheme.kind() == SchemeKind::Multilabel) {
            auto& by_annotator = file.task_b_multilabel[item->item_id];
            for (const auto& annotator : item->annotator_ids)
                by_annotator[annotator] = random_label_subset(rng, scheme.label_names().size());
        } else {
            auto& by_annotator = file.task_b[item->item_id];
            for (const auto& annotator : item->annotator_ids)
                by_annotator[annotator] = uniform_int(rng, scheme.min_value(), scheme.max_value());
        }
    }
    return file;
}

PredictionFile generate_baseline(const BaselineConfig& config, char task, const Dataset& train,
                                 const Dataset& target, const std::string& target_split) {
    const bool task_a = task == 'A' || task == 'a';
    if (config.kind == BaselineKind::MostFrequent)
        return task_a ? most_frequent_soft(train, target, target_split)
                      : most_frequent_label(train, target, target_split);
    return task_a ? random_soft(target.scheme, target, config.rng_seed, config.family, target_split)
                  : random_label(target.scheme, target, config.rng_seed, target_split);
}

}  // namespace disev
