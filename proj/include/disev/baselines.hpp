#pragma once

#include <cstdint>
#include <string>

#include "disev/corpus.hpp"
#include "disev/predictions.hpp"

namespace disev {

enum class BaselineKind { Random, MostFrequent };

// Which notion of "a random distribution" the random baseline draws.
// SimplexUniform is the default; NormalizedUniform draws a uniform vector
// and renormalizes it.
enum class RandomFamily { SimplexUniform, NormalizedUniform };

struct BaselineConfig {
    BaselineKind kind = BaselineKind::Random;
    std::uint64_t rng_seed = 0;
    RandomFamily family = RandomFamily::SimplexUniform;
};

// Task A: every target item gets the modal gold soft-label distribution of
// the training items (exact-rational equality for binning; ties broken
// lexicographically over the probability vectors and recorded in the
// provenance header). Throws on an empty training split.
PredictionFile most_frequent_soft(const Dataset& train, const Dataset& target,
                                  const std::string& target_split = "");

// Task B: the most frequent training label (or label set), predicted for
// every (item, annotator) slot of the target. Ties pick the smallest label
// value / lexicographically first set, recorded in provenance.
PredictionFile most_frequent_label(const Dataset& train, const Dataset& target,
                                   const std::string& target_split = "");

// Task A: one independent draw per item, uniform over the scheme's
// probability simplex (per label for multilabel schemes). Sub-seeded per
// item id, so output is independent of generation order.
PredictionFile random_soft(const LabelScheme& scheme, const Dataset& target, std::uint64_t seed,
                           RandomFamily family = RandomFamily::SimplexUniform,
                           const std::string& target_split = "");

// Task B: i.i.d. uniform label per (item, annotator) slot; multilabel slots
// draw uniformly over non-empty label subsets.
PredictionFile random_label(const LabelScheme& scheme, const Dataset& target, std::uint64_t seed,
                            const std::string& target_split = "");

PredictionFile generate_baseline(const BaselineConfig& config, char task, const Dataset& train,
                                 const Dataset& target, const std::string& target_split = "");

}  // namespace disev
