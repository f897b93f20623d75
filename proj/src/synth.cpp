#include "disev/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "disev/errors.hpp"
#include "disev/rng.hpp"
#include "disev/soft_label.hpp"

namespace disev {

namespace {

std::string padded_id(const char* prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, index);
    return buf;
}

template <typename T>
T annotator_param(const std::vector<T>& params, std::size_t k, T fallback) {
    if (params.empty()) return fallback;
    if (params.size() == 1) return params[0];  // broadcast
    return params.at(k);
}

std::vector<std::size_t> random_nonempty_subset(std::mt19937_64& rng, std::size_t label_count) {
    if (label_count > 62)
        throw ValidationError("random label subsets support at most 62 scheme labels");
    const std::uint64_t mask = 1 + uniform_below(rng, (1ULL << label_count) - 1);
    std::vector<std::size_t> set;
    for (std::size_t j = 0; j < label_count; ++j)
        if (mask & (1ULL << j)) set.push_back(j);
    return set;
}

}  // namespace

void PopulationSpec::validate() const {
    if (n_items == 0 || n_annotators == 0)
        throw ValidationError("population spec needs at least one item and one annotator");
    auto check_size = [&](std::size_t size, const char* name) {
        if (size > 1 && size != n_annotators)
            throw ValidationError(std::string(name) +
                                  " must be empty, a single broadcast value, or one per annotator");
    };
    check_size(ordinal_shifts.size(), "ordinal_shifts");
    check_size(flip_probabilities.size(), "flip_probabilities");
    check_size(label_flip_probabilities.size(), "label_flip_probabilities");
    for (double p : flip_probabilities)
        if (p < 0.0 || p > 1.0) throw ValidationError("flip probability outside [0, 1]");
    if (binary_positive_rate < 0.0 || binary_positive_rate > 1.0)
        throw ValidationError("binary positive rate outside [0, 1]");
    for (const auto& row : label_flip_probabilities)
        for (double p : row)
            if (p < 0.0 || p > 1.0) throw ValidationError("label flip probability outside [0, 1]");
}

Dataset generate_corpus(const PopulationSpec& spec, const std::string& dataset_name,
                        const std::string& split) {
    spec.validate();
    const LabelScheme& scheme = spec.scheme;
    const std::size_t label_count =
        scheme.kind() == SchemeKind::Multilabel ? scheme.label_names().size() : 0;

    Dataset dataset;
    dataset.name = dataset_name;
    dataset.scheme = scheme;

    std::vector<std::string> annotator_ids;
    for (std::size_t k = 0; k < spec.n_annotators; ++k)
        annotator_ids.push_back(padded_id("ann", k + 1));

    for (std::size_t i = 0; i < spec.n_items; ++i) {
        Item item;
        item.item_id = padded_id("item", i + 1);
        item.text = "synthetic item " + std::to_string(i + 1);
        item.task = dataset_name;
        item.split = split;
        item.annotator_ids = annotator_ids;
        item.other_info = nlohmann::ordered_json::object();

        std::mt19937_64 rng(subseed(spec.rng_seed, item.item_id, /*stream=*/'c'));

        int latent_scalar = 0;
        std::vector<std::size_t> latent_set;
        if (scheme.kind() == SchemeKind::Multilabel)
            latent_set = random_nonempty_subset(rng, label_count);
        else if (scheme.kind() == SchemeKind::Binary)
            latent_scalar = uniform01(rng) < spec.binary_positive_rate ? 1 : 0;
        else
            latent_scalar = uniform_int(rng, scheme.min_value(), scheme.max_value());

        for (std::size_t k = 0; k < spec.n_annotators; ++k) {
            Annotation ann;
            ann.annotator_id = annotator_ids[k];
            switch (scheme.kind()) {
                case SchemeKind::Ordinal: {
                    const int shift = annotator_param(spec.ordinal_shifts, k, 0);
                    ann.value = std::clamp(latent_scalar + shift, scheme.min_value(),
                                           scheme.max_value());
                    break;
                }
                case SchemeKind::Binary: {
                    const double flip = annotator_param(spec.flip_probabilities, k, 0.0);
                    ann.value = uniform01(rng) < flip ? 1 - latent_scalar : latent_scalar;
                    break;
                }
                case SchemeKind::Multilabel: {
                    const std::vector<double> empty_row;
                    const auto& flips =
                        annotator_param(spec.label_flip_probabilities, k, empty_row);
                    for (std::size_t j = 0; j < label_count; ++j) {
                        const bool in_latent =
                            std::count(latent_set.begin(), latent_set.end(), j) > 0;
                        const double flip = j < flips.size() ? flips[j] : 0.0;
                        const bool flipped = uniform01(rng) < flip;
                        if (in_latent != flipped) ann.label_set.push_back(j);
                    }
                    if (ann.label_set.empty()) ann.label_set = latent_set;
                    break;
                }
            }
            item.annotations.push_back(std::move(ann));
        }

        item.number_of_annotations = static_cast<int>(item.annotations.size());
        item.number_of_annotators = static_cast<int>(item.annotator_ids.size());
        dataset.items.push_back(std::move(item));
    }

    for (std::size_t k = 0; k < spec.n_annotators; ++k) {
        AnnotatorProfile profile;
        profile.annotator_id = annotator_ids[k];
        profile.attributes = nlohmann::ordered_json::object();
        switch (scheme.kind()) {
            case SchemeKind::Ordinal:
                profile.attributes["location_shift"] = annotator_param(spec.ordinal_shifts, k, 0);
                break;
            case SchemeKind::Binary:
                profile.attributes["flip_probability"] =
                    annotator_param(spec.flip_probabilities, k, 0.0);
                break;
            case SchemeKind::Multilabel:
                profile.attributes["label_flip_probabilities"] =
                    annotator_param(spec.label_flip_probabilities, k, {});
                break;
        }
        dataset.profiles.push_back(std::move(profile));
    }
    return dataset;
}

PerturbedPredictions perturb_predictions(const Dataset& gold, double noise_level,
                                         std::uint64_t seed) {
    if (noise_level < 0.0 || noise_level > 1.0)
        throw ValidationError("noise level must lie in [0, 1]");
    const LabelScheme& scheme = gold.scheme;
    const bool multilabel = scheme.kind() == SchemeKind::Multilabel;
    const std::size_t label_count = multilabel ? scheme.label_names().size() : 0;

    PerturbedPredictions out;
    for (auto* file : {&out.task_a, &out.task_b}) {
        file->dataset = gold.name;
        file->scheme = scheme;
        file->provenance["kind"] = "perturbed_gold";
        file->provenance["noise_level"] = noise_level;
        file->provenance["seed"] = seed;
    }
    out.task_a.task = 'A';
    out.task_b.task = 'B';

    for (const auto& item : gold.items) {
        if (item.annotations.empty()) continue;
        const SoftLabel gold_soft = derive_soft_label(item, scheme);

        // Task A: mix toward a per-item random distribution. The random
        // endpoint depends only on (seed, item), not on the noise level.
        std::mt19937_64 rng_a(subseed(seed, item.item_id, /*stream=*/'a'));
        if (multilabel) {
            const auto& exact = std::get<ExactMultilabelDistribution>(gold_soft);
            MultilabelDistribution mixed;
            for (std::size_t j = 0; j < label_count; ++j) {
                const auto random_pair = uniform_simplex(rng_a, 2);
                const double g0 = exact.per_label[j][0].to_double();
                const double g1 = exact.per_label[j][1].to_double();
                mixed.per_label.push_back(
                    {(1.0 - noise_level) * g0 + noise_level * random_pair[0],
                     (1.0 - noise_level) * g1 + noise_level * random_pair[1]});
            }
            out.task_a.task_a_multilabel[item.item_id] = std::move(mixed);
        } else {
            const auto gold_dist = std::get<ExactDistribution>(gold_soft).to_distribution();
            const auto random_dist = uniform_simplex(rng_a, gold_dist.size());
            Distribution mixed;
            mixed.probs.resize(gold_dist.size());
            for (std::size_t k = 0; k < gold_dist.size(); ++k)
                mixed.probs[k] =
                    (1.0 - noise_level) * gold_dist.probs[k] + noise_level * random_dist[k];
            out.task_a.task_a[item.item_id] = std::move(mixed);
        }

        // Task B: each slot has a pre-drawn activation variate and a
        // pre-drawn replacement; raising noise only grows the active set.
        std::mt19937_64 rng_b(subseed(seed, item.item_id, /*stream=*/'b'));
        for (const Annotation* ann : item.ordered_annotations()) {
            const double activation = uniform01(rng_b);
            if (multilabel) {
                auto replacement = random_nonempty_subset(rng_b, label_count);
                out.task_b.task_b_multilabel[item.item_id][ann->annotator_id] =
                    activation < noise_level ? replacement : ann->label_set;
            } else {
                const int replacement = uniform_int(rng_b, scheme.min_value(), scheme.max_value());
                out.task_b.task_b[item.item_id][ann->annotator_id] =
                    activation < noise_level ? replacement : ann->value;
            }
        }
    }
    return out;
}

}  // namespace disev
