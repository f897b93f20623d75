#include "disev/label_scheme.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace disev {

LabelScheme LabelScheme::binary() {
    LabelScheme s;
    s.kind_ = SchemeKind::Binary;
    s.min_value_ = 0;
    s.max_value_ = 1;
    return s;
}

LabelScheme LabelScheme::ordinal(int min_value, int max_value) {
    if (min_value >= max_value)
        throw std::invalid_argument("ordinal scheme requires min_value < max_value");
    LabelScheme s;
    s.kind_ = SchemeKind::Ordinal;
    s.min_value_ = min_value;
    s.max_value_ = max_value;
    return s;
}

LabelScheme LabelScheme::multilabel(std::vector<std::string> label_names) {
    if (label_names.empty())
        throw std::invalid_argument("multilabel scheme requires at least one label name");
    std::set<std::string> seen;
    for (const auto& name : label_names)
        if (!seen.insert(name).second)
            throw std::invalid_argument("multilabel scheme has duplicate label name: " + name);
    LabelScheme s;
    s.kind_ = SchemeKind::Multilabel;
    s.label_names_ = std::move(label_names);
    return s;
}

bool LabelScheme::is_bundled(const std::string& name) {
    return name == "csc" || name == "mp" || name == "par" || name == "ven";
}

LabelScheme LabelScheme::bundled(const std::string& name) {
    if (name == "csc") return ordinal(1, 6);
    if (name == "mp") return binary();
    if (name == "par") return ordinal(-5, 5);
    if (name == "ven") return multilabel({"C", "E", "N"});
    throw std::invalid_argument("unknown bundled scheme: " + name);
}

LabelScheme LabelScheme::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binary") return binary();
    if (kind == "ordinal") return ordinal(j.at("min").get<int>(), j.at("max").get<int>());
    if (kind == "multilabel")
        return multilabel(j.at("labels").get<std::vector<std::string>>());
    throw std::invalid_argument("unknown scheme kind: " + kind);
}

nlohmann::ordered_json LabelScheme::to_json() const {
    nlohmann::ordered_json j;
    switch (kind_) {
        case SchemeKind::Binary:
            j["kind"] = "binary";
            break;
        case SchemeKind::Ordinal:
            j["kind"] = "ordinal";
            j["min"] = min_value_;
            j["max"] = max_value_;
            break;
        case SchemeKind::Multilabel:
            j["kind"] = "multilabel";
            j["labels"] = label_names_;
            break;
    }
    return j;
}

std::size_t LabelScheme::bin_count() const {
    switch (kind_) {
        case SchemeKind::Binary:
            return 2;
        case SchemeKind::Ordinal:
            return static_cast<std::size_t>(max_value_ - min_value_ + 1);
        case SchemeKind::Multilabel:
            return label_names_.size();
    }
    return 0;
}

std::vector<double> LabelScheme::bin_positions() const {
    if (kind_ == SchemeKind::Multilabel)
        throw std::invalid_argument("multilabel scheme has no scalar bin positions");
    std::vector<double> pos;
    pos.reserve(bin_count());
    for (int v = min_value_; v <= max_value_; ++v) pos.push_back(static_cast<double>(v));
    return pos;
}

int LabelScheme::likert_range() const {
    if (kind_ == SchemeKind::Multilabel)
        throw std::invalid_argument("multilabel scheme has no Likert range");
    return max_value_ - min_value_;
}

std::size_t LabelScheme::bin_index(int value) const {
    if (!valid_scalar(value))
        throw std::out_of_range("label value " + std::to_string(value) + " outside scheme range");
    return static_cast<std::size_t>(value - min_value_);
}

std::size_t LabelScheme::label_index(const std::string& name) const {
    const auto it = std::find(label_names_.begin(), label_names_.end(), name);
    if (it == label_names_.end())
        throw std::out_of_range("label name not in scheme: " + name);
    return static_cast<std::size_t>(it - label_names_.begin());
}

bool LabelScheme::valid_scalar(int value) const {
    if (kind_ == SchemeKind::Multilabel) return false;
    return value >= min_value_ && value <= max_value_;
}

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Binary:
            return "binary";
        case SchemeKind::Ordinal:
            return "ordinal";
        case SchemeKind::Multilabel:
            return "multilabel";
    }
    return "?";
}

}  // namespace disev
