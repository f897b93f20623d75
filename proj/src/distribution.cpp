#include "disev/distribution.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "disev/errors.hpp"

namespace disev {

namespace {

bool mass_ok(const std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= kMassTolerance;
}

std::vector<std::string> bin_keys(const LabelScheme& scheme) {
    std::vector<std::string> keys;
    if (scheme.kind() == SchemeKind::Multilabel) {
        keys = scheme.label_names();
    } else {
        for (int v = scheme.min_value(); v <= scheme.max_value(); ++v)
            keys.push_back(std::to_string(v));
    }
    return keys;
}

double prob_at(const nlohmann::json& j, const std::string& key, const std::string& context) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ValidationError(context + ": distribution is missing bin \"" + key + "\"");
    if (!it->is_number())
        throw ValidationError(context + ": bin \"" + key + "\" is not a number");
    return it->get<double>();
}

}  // namespace

bool Distribution::valid() const { return !probs.empty() && mass_ok(probs); }

nlohmann::ordered_json Distribution::to_json(const LabelScheme& scheme) const {
    const auto keys = bin_keys(scheme);
    if (keys.size() != probs.size())
        throw ValidationError("distribution arity does not match scheme");
    nlohmann::ordered_json j;
    for (std::size_t k = 0; k < keys.size(); ++k) j[keys[k]] = probs[k];
    return j;
}

Distribution Distribution::from_json(const nlohmann::json& j, const LabelScheme& scheme,
                                     const std::string& context) {
    if (!j.is_object())
        throw ValidationError(context + ": distribution must be a JSON object");
    const auto keys = bin_keys(scheme);
    if (j.size() != keys.size())
        throw ValidationError(context + ": distribution has " + std::to_string(j.size()) +
                                    " bins, scheme expects " + std::to_string(keys.size()));
    Distribution d;
    d.probs.reserve(keys.size());
    for (const auto& key : keys) d.probs.push_back(prob_at(j, key, context));
    if (!d.valid())
        throw ValidationError(context + ": distribution mass is not 1 (or has negative bins)");
    return d;
}

bool MultilabelDistribution::valid() const {
    if (per_label.empty()) return false;
    for (const auto& pair : per_label)
        if (!mass_ok({pair[0], pair[1]})) return false;
    return true;
}

nlohmann::ordered_json MultilabelDistribution::to_json(const LabelScheme& scheme) const {
    if (scheme.label_names().size() != per_label.size())
        throw ValidationError("multilabel distribution arity does not match scheme");
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < per_label.size(); ++i) {
        nlohmann::ordered_json bins;
        bins["0"] = per_label[i][0];
        bins["1"] = per_label[i][1];
        j[scheme.label_names()[i]] = std::move(bins);
    }
    return j;
}

MultilabelDistribution MultilabelDistribution::from_json(const nlohmann::json& j,
                                                         const LabelScheme& scheme,
                                                         const std::string& context) {
    if (!j.is_object())
        throw ValidationError(context + ": multilabel distribution must be a JSON object");
    if (j.size() != scheme.label_names().size())
        throw ValidationError(context + ": expected one distribution per scheme label");
    MultilabelDistribution d;
    for (const auto& name : scheme.label_names()) {
        const auto it = j.find(name);
        if (it == j.end())
            throw ValidationError(context + ": missing distribution for label \"" + name + "\"");
        const double p0 = prob_at(*it, "0", context + " label " + name);
        const double p1 = prob_at(*it, "1", context + " label " + name);
        d.per_label.push_back({p0, p1});
    }
    if (!d.valid())
        throw ValidationError(context + ": a per-label distribution mass is not 1");
    return d;
}

Distribution ExactDistribution::to_distribution() const {
    Distribution d;
    d.probs.reserve(probs.size());
    for (const auto& r : probs) d.probs.push_back(r.to_double());
    return d;
}

MultilabelDistribution ExactMultilabelDistribution::to_distribution() const {
    MultilabelDistribution d;
    d.per_label.reserve(per_label.size());
    for (const auto& pair : per_label)
        d.per_label.push_back({pair[0].to_double(), pair[1].to_double()});
    return d;
}

}  // namespace disev
