#pragma once

#include <variant>

#include "disev/corpus.hpp"
#include "disev/distribution.hpp"

namespace disev {

using SoftLabel = std::variant<ExactDistribution, ExactMultilabelDistribution>;

// Derives the gold soft label of one item from its disaggregated
// annotations. Binary/ordinal: probs[k] = (annotators choosing bin k) /
// (annotators on this item). Multilabel: per label, the two-bin
// [not-selected, selected] fractions. Exact rational arithmetic throughout.
// Throws ValidationError when the item has no annotations.
SoftLabel derive_soft_label(const Item& item, const LabelScheme& scheme);

StoredSoftLabel to_stored(const SoftLabel& label);

nlohmann::ordered_json soft_label_to_json(const SoftLabel& label, const LabelScheme& scheme);

}  // namespace disev
