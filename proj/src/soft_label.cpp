#include "disev/soft_label.hpp"

#include "disev/errors.hpp"

namespace disev {

SoftLabel derive_soft_label(const Item& item, const LabelScheme& scheme) {
    const auto n = static_cast<std::int64_t>(item.annotations.size());
    if (n == 0)
        throw ValidationError("item \"" + item.item_id +
                              "\": cannot derive a soft label without annotations");

    if (scheme.kind() == SchemeKind::Multilabel) {
        const std::size_t label_count = scheme.label_names().size();
        std::vector<std::int64_t> selected(label_count, 0);
        for (const auto& ann : item.annotations)
            for (std::size_t idx : ann.label_set) selected.at(idx) += 1;
        ExactMultilabelDistribution out;
        out.per_label.reserve(label_count);
        for (std::size_t j = 0; j < label_count; ++j)
            out.per_label.push_back({Rational(n - selected[j], n), Rational(selected[j], n)});
        return out;
    }

    std::vector<std::int64_t> counts(scheme.bin_count(), 0);
    for (const auto& ann : item.annotations) {
        if (!scheme.valid_scalar(ann.value))
            throw ValidationError("item \"" + item.item_id + "\": annotation value " +
                                  std::to_string(ann.value) + " of " + ann.annotator_id +
                                  " outside scheme range");
        counts[scheme.bin_index(ann.value)] += 1;
    }
    ExactDistribution out;
    out.probs.reserve(counts.size());
    for (std::int64_t c : counts) out.probs.emplace_back(c, n);
    return out;
}

StoredSoftLabel to_stored(const SoftLabel& label) {
    if (const auto* exact = std::get_if<ExactDistribution>(&label))
        return exact->to_distribution();
    return std::get<ExactMultilabelDistribution>(label).to_distribution();
}

nlohmann::ordered_json soft_label_to_json(const SoftLabel& label, const LabelScheme& scheme) {
    if (const auto* exact = std::get_if<ExactDistribution>(&label))
        return exact->to_distribution().to_json(scheme);
    return std::get<ExactMultilabelDistribution>(label).to_distribution().to_json(scheme);
}

}  // namespace disev
