#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disev/corpus.hpp"
#include "disev/predictions.hpp"

namespace disev {

// Deterministic synthetic-population generator: per item a latent label is
// drawn, then each annotator reports it through their own bias channel
// (integer location shift for ordinal schemes, flip probability for binary,
// per-label flip probability for multilabel). Ships in the library so
// downstream scorers can regression-test against always-available gold.
struct PopulationSpec {
    std::size_t n_items = 0;
    std::size_t n_annotators = 0;
    LabelScheme scheme = LabelScheme::binary();
    std::vector<int> ordinal_shifts;                            // per annotator
    std::vector<double> flip_probabilities;                     // per annotator
    std::vector<std::vector<double>> label_flip_probabilities;  // per annotator, per label
    double binary_positive_rate = 0.5;                          // latent skew, binary only
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws ValidationError on a degenerate spec
};

Dataset generate_corpus(const PopulationSpec& spec, const std::string& dataset_name = "synth",
                        const std::string& split = "train");

// Task A and Task B predictions at a controlled distance from gold:
// Task A mixes each gold distribution with a per-item random distribution
// (pred = (1-noise)*gold + noise*random), Task B rewrites each annotator
// slot with a pre-drawn random label when its pre-drawn activation variate
// falls below noise. Both constructions are coupled across noise levels
// under a fixed seed, so metric aggregates are non-decreasing in noise.
struct PerturbedPredictions {
    PredictionFile task_a;
    PredictionFile task_b;
};

PerturbedPredictions perturb_predictions(const Dataset& gold, double noise_level,
                                         std::uint64_t seed);

}  // namespace disev
