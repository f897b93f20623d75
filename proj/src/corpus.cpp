#include "disev/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "disev/errors.hpp"
#include "disev/soft_label.hpp"

namespace disev {

namespace {

using nlohmann::ordered_json;

// Canonical snake_case key first, then the spellings the harmonized files
// use ("number of annotations", "annotator IDs", ...).
const ordered_json* field(const ordered_json& obj, std::initializer_list<const char*> names) {
    for (const char* name : names) {
        const auto it = obj.find(name);
        if (it != obj.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

const std::unordered_set<std::string>& known_item_keys() {
    static const std::unordered_set<std::string> keys = {
        "item_id", "id", "text", "task",
        "annotations", "disaggregated annotations", "disaggregated_annotations",
        "annotator_ids", "annotator IDs", "annotators",
        "number_of_annotations", "number of annotations",
        "number_of_annotators", "number of annotators",
        "language", "lang", "hard_label", "hard label", "hard_labels",
        "soft_label", "soft label", "soft_labels", "soft labels",
        "split", "other_info", "other info", "other annotation info"};
    return keys;
}

std::optional<int> as_int(const ordered_json& j) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_boolean()) return j.get<bool>() ? 1 : 0;
    if (j.is_string()) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(j.get<std::string>(), &pos);
            if (pos == j.get<std::string>().size()) return v;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

std::string as_string(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

// "A1,A2,A3" or a JSON array of ids.
std::vector<std::string> parse_id_list(const ordered_json& j) {
    std::vector<std::string> ids;
    if (j.is_array()) {
        for (const auto& e : j) ids.push_back(as_string(e));
    } else if (j.is_string()) {
        std::stringstream ss(j.get<std::string>());
        std::string part;
        while (std::getline(ss, part, ',')) {
            while (!part.empty() && part.front() == ' ') part.erase(part.begin());
            while (!part.empty() && part.back() == ' ') part.pop_back();
            if (!part.empty()) ids.push_back(part);
        }
    }
    return ids;
}

struct Collector {
    std::vector<Finding>* out;
    void add(std::string item_id, std::string fld, std::string kind, std::string message) {
        out->push_back({std::move(item_id), std::move(fld), std::move(kind), std::move(message)});
    }
};

std::optional<std::vector<std::size_t>> parse_label_set(const ordered_json& value,
                                                        const LabelScheme& scheme) {
    std::vector<std::string> names;
    if (value.is_array()) {
        for (const auto& e : value) names.push_back(as_string(e));
    } else if (value.is_string()) {
        names = parse_id_list(value);
    } else {
        return std::nullopt;
    }
    std::set<std::size_t> idx;
    for (const auto& name : names) {
        const auto& all = scheme.label_names();
        const auto it = std::find(all.begin(), all.end(), name);
        if (it == all.end()) return std::nullopt;
        idx.insert(static_cast<std::size_t>(it - all.begin()));
    }
    return std::vector<std::size_t>(idx.begin(), idx.end());
}

void parse_annotations(const ordered_json& raw, const LabelScheme& scheme, Item& item,
                       Collector& collect) {
    if (!raw.is_object()) {
        collect.add(item.item_id, "annotations", "malformed-field",
                    "item \"" + item.item_id + "\": annotations must be an object keyed by annotator");
        return;
    }
    for (const auto& [annotator, value] : raw.items()) {
        Annotation ann;
        ann.annotator_id = annotator;
        if (scheme.kind() == SchemeKind::Multilabel) {
            auto set = parse_label_set(value, scheme);
            if (!set) {
                collect.add(item.item_id, "annotations", "scheme-violation",
                            "item \"" + item.item_id + "\": annotation of " + annotator +
                                " is not a list of scheme labels");
                continue;  // not representable; dropped
            }
            if (set->empty())
                collect.add(item.item_id, "annotations", "scheme-violation",
                            "item \"" + item.item_id + "\": annotation of " + annotator +
                                " is an empty label set");
            ann.label_set = std::move(*set);
        } else {
            const auto v = as_int(value);
            if (!v) {
                collect.add(item.item_id, "annotations", "scheme-violation",
                            "item \"" + item.item_id + "\": annotation of " + annotator +
                                " is not an integer label");
                continue;  // not representable; dropped
            }
            // Out-of-range values stay representable so the collecting
            // parser can materialize the item and report every finding.
            if (!scheme.valid_scalar(*v))
                collect.add(item.item_id, "annotations", "scheme-violation",
                            "item \"" + item.item_id + "\": annotation value " +
                                std::to_string(*v) + " of " + annotator + " outside scheme range");
            ann.value = *v;
        }
        item.annotations.push_back(std::move(ann));
    }
}

void parse_stored_soft_label(const ordered_json& raw, const LabelScheme& scheme, Item& item,
                             Collector& collect) {
    const std::string context = "item \"" + item.item_id + "\" soft_label";
    try {
        if (scheme.kind() == SchemeKind::Multilabel)
            item.soft_label = MultilabelDistribution::from_json(raw, scheme, context);
        else
            item.soft_label = Distribution::from_json(raw, scheme, context);
    } catch (const std::exception& e) {
        collect.add(item.item_id, "soft_label", "invalid-soft-label", e.what());
    }
}

Item parse_item(const ordered_json& raw, const std::string& fallback_id, const LabelScheme& scheme,
                Collector& collect) {
    Item item;
    if (const auto* id = field(raw, {"item_id", "id"}))
        item.item_id = as_string(*id);
    else
        item.item_id = fallback_id;
    if (item.item_id.empty()) {
        collect.add(fallback_id, "item_id", "missing-field",
                    "item at position " + fallback_id + " has no item_id");
        item.item_id = fallback_id;
    }

    if (const auto* text = field(raw, {"text"})) item.text = *text;
    if (const auto* task = field(raw, {"task"})) item.task = as_string(*task);
    if (const auto* lang = field(raw, {"language", "lang"})) item.language = as_string(*lang);
    if (const auto* split = field(raw, {"split"})) item.split = as_string(*split);
    if (const auto* hard = field(raw, {"hard_label", "hard label", "hard_labels"}))
        item.hard_label = *hard;

    if (const auto* anns =
            field(raw, {"annotations", "disaggregated annotations", "disaggregated_annotations"}))
        parse_annotations(*anns, scheme, item, collect);

    if (const auto* ids = field(raw, {"annotator_ids", "annotator IDs", "annotators"})) {
        item.annotator_ids = parse_id_list(*ids);
    } else {
        for (const auto& ann : item.annotations) item.annotator_ids.push_back(ann.annotator_id);
    }

    {
        std::set<std::string> seen;
        for (const auto& id : item.annotator_ids)
            if (!seen.insert(id).second)
                collect.add(item.item_id, "annotator_ids", "duplicate-annotator",
                            "item \"" + item.item_id + "\": duplicate annotator_id " + id);
        for (const auto& ann : item.annotations)
            if (!seen.count(ann.annotator_id))
                collect.add(item.item_id, "annotations", "annotator-not-listed",
                            "item \"" + item.item_id + "\": annotation from " + ann.annotator_id +
                                " who is not in annotator_ids");
    }

    if (const auto* n = field(raw, {"number_of_annotations", "number of annotations"})) {
        const auto v = as_int(*n);
        item.number_of_annotations = v.value_or(0);
        if (!v || *v != static_cast<int>(item.annotations.size()))
            collect.add(item.item_id, "number_of_annotations", "count-mismatch",
                        "item \"" + item.item_id + "\": number_of_annotations says " +
                            as_string(*n) + " but " + std::to_string(item.annotations.size()) +
                            " annotations are present");
    } else {
        item.number_of_annotations = static_cast<int>(item.annotations.size());
    }

    if (const auto* n = field(raw, {"number_of_annotators", "number of annotators"})) {
        item.number_of_annotators = as_int(*n).value_or(0);
    } else {
        item.number_of_annotators = static_cast<int>(item.annotator_ids.size());
    }

    if (const auto* soft = field(raw, {"soft_label", "soft label", "soft_labels", "soft labels"}))
        parse_stored_soft_label(*soft, scheme, item, collect);

    ordered_json extra = ordered_json::object();
    if (const auto* info = field(raw, {"other_info", "other info", "other annotation info"});
        info && info->is_object())
        extra = *info;
    for (const auto& [key, value] : raw.items())
        if (!known_item_keys().count(key) && !value.is_null()) extra[key] = value;
    item.other_info = std::move(extra);

    return item;
}

}  // namespace

std::vector<const Annotation*> Item::ordered_annotations() const {
    std::unordered_map<std::string_view, const Annotation*> by_id;
    by_id.reserve(annotations.size());
    for (const auto& ann : annotations) by_id.emplace(ann.annotator_id, &ann);
    std::vector<const Annotation*> ordered;
    ordered.reserve(annotations.size());
    for (const auto& id : annotator_ids) {
        const auto it = by_id.find(id);
        if (it != by_id.end()) ordered.push_back(it->second);
    }
    return ordered;
}

const Item* Dataset::find_item(std::string_view item_id) const {
    for (const auto& item : items)
        if (item.item_id == item_id) return &item;
    return nullptr;
}

std::vector<const Item*> Dataset::split_items(const std::string& split) const {
    std::vector<const Item*> out;
    for (const auto& item : items)
        if (split.empty() || item.split == split) out.push_back(&item);
    return out;
}

ParseOutcome parse_dataset_report(const std::string& raw_json, const LabelScheme& scheme,
                                  const std::string& dataset_name) {
    ParseOutcome outcome;
    Collector collect{&outcome.findings};

    ordered_json root;
    try {
        root = ordered_json::parse(raw_json);
    } catch (const nlohmann::json::parse_error& e) {
        collect.add("", "", "malformed-json", e.what());
        return outcome;
    }

    Dataset dataset;
    dataset.name = dataset_name;
    dataset.scheme = scheme;

    // Accept {"items": [...]}, a bare array, or an object keyed by item_id.
    const ordered_json* items = &root;
    if (root.is_object() && root.contains("items") && root["items"].is_array())
        items = &root["items"];

    std::set<std::string> seen_ids;
    auto add_item = [&](const ordered_json& raw, const std::string& fallback_id) {
        if (!raw.is_object()) {
            collect.add(fallback_id, "", "malformed-item",
                        "item " + fallback_id + " is not a JSON object");
            return;
        }
        Item item = parse_item(raw, fallback_id, scheme, collect);
        if (!seen_ids.insert(item.item_id).second)
            collect.add(item.item_id, "item_id", "duplicate-item-id",
                        "duplicate item_id \"" + item.item_id + "\"");
        dataset.items.push_back(std::move(item));
    };

    if (items->is_array()) {
        std::size_t pos = 0;
        for (const auto& raw : *items) add_item(raw, std::to_string(pos++));
    } else if (items->is_object()) {
        for (const auto& [key, raw] : items->items()) add_item(raw, key);
    } else {
        collect.add("", "", "malformed-json", "dataset root must be an array or object of items");
        return outcome;
    }

    outcome.dataset = std::move(dataset);
    return outcome;
}

Dataset parse_dataset(const std::string& raw_json, const LabelScheme& scheme,
                      const std::string& dataset_name) {
    ParseOutcome outcome = parse_dataset_report(raw_json, scheme, dataset_name);
    if (!outcome.findings.empty()) {
        std::string msg = outcome.findings.front().message;
        if (outcome.findings.size() > 1)
            msg += " (+" + std::to_string(outcome.findings.size() - 1) + " more findings)";
        throw ValidationError(msg);
    }
    return std::move(*outcome.dataset);
}

std::vector<AnnotatorProfile> parse_metadata(const std::string& raw_json) {
    ordered_json root;
    try {
        root = ordered_json::parse(raw_json);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("metadata: ") + e.what());
    }

    std::vector<AnnotatorProfile> profiles;
    std::set<std::string> seen;
    auto add = [&](const std::string& id, const ordered_json& attrs) {
        if (!seen.insert(id).second)
            throw ValidationError("metadata: duplicate annotator_id \"" + id + "\"");
        AnnotatorProfile profile;
        profile.annotator_id = id;
        profile.attributes = ordered_json::object();
        if (attrs.is_object())
            for (const auto& [key, value] : attrs.items())
                if (!value.is_null() && !(key == "annotator_id" || key == "id"))
                    profile.attributes[key] = value;  // null attribute == missing
        profiles.push_back(std::move(profile));
    };

    if (root.is_object()) {
        for (const auto& [id, attrs] : root.items()) add(id, attrs);
    } else if (root.is_array()) {
        for (const auto& entry : root) {
            if (!entry.is_object())
                throw ValidationError("metadata: array entries must be objects");
            const auto* id = field(entry, {"annotator_id", "id"});
            if (!id) throw ValidationError("metadata: entry without annotator_id");
            add(as_string(*id), entry);
        }
    } else {
        throw ValidationError("metadata: root must be an object or array");
    }
    return profiles;
}

ValidationReport validate_dataset(const Dataset& dataset) {
    ValidationReport report;
    Collector collect{&report.findings};
    const LabelScheme& scheme = dataset.scheme;

    std::set<std::string> ids;
    std::set<std::string> profile_ids;
    for (const auto& p : dataset.profiles) profile_ids.insert(p.annotator_id);
    std::set<std::string> unprofiled;

    for (const auto& item : dataset.items) {
        if (!ids.insert(item.item_id).second)
            collect.add(item.item_id, "item_id", "duplicate-item-id",
                        "duplicate item_id \"" + item.item_id + "\"");

        std::set<std::string> listed(item.annotator_ids.begin(), item.annotator_ids.end());
        if (listed.size() != item.annotator_ids.size())
            collect.add(item.item_id, "annotator_ids", "duplicate-annotator",
                        "item \"" + item.item_id + "\": annotator_ids contains duplicates");
        bool scheme_clean = true;
        for (const auto& ann : item.annotations) {
            if (!listed.count(ann.annotator_id))
                collect.add(item.item_id, "annotations", "annotator-not-listed",
                            "item \"" + item.item_id + "\": annotation from " + ann.annotator_id +
                                " who is not in annotator_ids");
            if (scheme.kind() == SchemeKind::Multilabel) {
                if (ann.label_set.empty()) {
                    scheme_clean = false;
                    collect.add(item.item_id, "annotations", "scheme-violation",
                                "item \"" + item.item_id + "\": annotation of " +
                                    ann.annotator_id + " is an empty label set");
                }
                for (std::size_t idx : ann.label_set)
                    if (idx >= scheme.label_names().size()) {
                        scheme_clean = false;
                        collect.add(item.item_id, "annotations", "scheme-violation",
                                    "item \"" + item.item_id + "\": label index out of range");
                    }
            } else if (!scheme.valid_scalar(ann.value)) {
                scheme_clean = false;
                collect.add(item.item_id, "annotations", "scheme-violation",
                            "item \"" + item.item_id + "\": annotation value " +
                                std::to_string(ann.value) + " of " + ann.annotator_id +
                                " outside scheme range");
            }
            if (!profile_ids.count(ann.annotator_id)) unprofiled.insert(ann.annotator_id);
        }
        for (const auto& id : item.annotator_ids)
            if (!profile_ids.count(id)) unprofiled.insert(id);

        if (item.number_of_annotations != static_cast<int>(item.annotations.size()))
            collect.add(item.item_id, "number_of_annotations", "count-mismatch",
                        "item \"" + item.item_id + "\": number_of_annotations says " +
                            std::to_string(item.number_of_annotations) + " but " +
                            std::to_string(item.annotations.size()) + " annotations are present");

        if (item.soft_label) {
            const bool stored_valid =
                std::visit([](const auto& d) { return d.valid(); }, *item.soft_label);
            if (!stored_valid)
                collect.add(item.item_id, "soft_label", "invalid-soft-label",
                            "item \"" + item.item_id + "\": stored soft label violates "
                            "distribution invariants");
            else if (!item.annotations.empty() && scheme_clean) {
                // Cross-check against the freshly derived distribution.
                const StoredSoftLabel derived = to_stored(derive_soft_label(item, scheme));
                constexpr double tol = 1e-6;
                bool mismatch = false;
                if (const auto* d = std::get_if<Distribution>(&*item.soft_label)) {
                    const auto& expect = std::get<Distribution>(derived);
                    mismatch = d->probs.size() != expect.probs.size();
                    for (std::size_t k = 0; !mismatch && k < expect.probs.size(); ++k)
                        mismatch = std::abs(d->probs[k] - expect.probs[k]) > tol;
                } else {
                    const auto& got = std::get<MultilabelDistribution>(*item.soft_label);
                    const auto& expect = std::get<MultilabelDistribution>(derived);
                    mismatch = got.per_label.size() != expect.per_label.size();
                    for (std::size_t j = 0; !mismatch && j < expect.per_label.size(); ++j)
                        mismatch = std::abs(got.per_label[j][1] - expect.per_label[j][1]) > tol;
                }
                if (mismatch)
                    report.soft_label_mismatches.push_back(
                        {item.item_id, "soft_label", "soft-label-mismatch",
                         "item \"" + item.item_id +
                             "\": stored soft label differs from the one derived from "
                             "annotations"});
            }
        }
    }

    report.annotators_without_profile.assign(unprofiled.begin(), unprofiled.end());
    return report;
}

nlohmann::ordered_json ValidationReport::to_json() const {
    auto encode = [](const std::vector<Finding>& fs) {
        ordered_json arr = ordered_json::array();
        for (const auto& f : fs) {
            ordered_json j;
            j["item_id"] = f.item_id;
            j["field"] = f.field;
            j["kind"] = f.kind;
            j["message"] = f.message;
            arr.push_back(std::move(j));
        }
        return arr;
    };
    ordered_json j;
    j["structural_findings"] = encode(findings);
    j["soft_label_mismatches"] = encode(soft_label_mismatches);
    j["annotators_without_profile"] = annotators_without_profile;
    return j;
}

std::string serialize_dataset(const Dataset& dataset, bool include_derived_soft_labels) {
    std::vector<const Item*> sorted;
    sorted.reserve(dataset.items.size());
    for (const auto& item : dataset.items) sorted.push_back(&item);
    std::sort(sorted.begin(), sorted.end(),
              [](const Item* a, const Item* b) { return a->item_id < b->item_id; });

    ordered_json root = ordered_json::object();
    for (const Item* item : sorted) {
        ordered_json j;
        j["item_id"] = item->item_id;
        if (!item->text.is_null()) j["text"] = item->text;
        if (!item->task.empty()) j["task"] = item->task;

        ordered_json anns = ordered_json::object();
        for (const Annotation* ann : item->ordered_annotations()) {
            if (dataset.scheme.kind() == SchemeKind::Multilabel) {
                std::vector<std::string> names;
                for (std::size_t idx : ann->label_set)
                    names.push_back(dataset.scheme.label_names()[idx]);
                anns[ann->annotator_id] = names;
            } else {
                anns[ann->annotator_id] = ann->value;
            }
        }
        j["annotations"] = std::move(anns);
        j["annotator_ids"] = item->annotator_ids;
        j["number_of_annotations"] = item->number_of_annotations;
        j["number_of_annotators"] = item->number_of_annotators;
        if (!item->language.empty()) j["language"] = item->language;
        if (!item->hard_label.is_null()) j["hard_label"] = item->hard_label;

        if (item->soft_label) {
            std::visit([&](const auto& d) { j["soft_label"] = d.to_json(dataset.scheme); },
                       *item->soft_label);
        } else if (include_derived_soft_labels && !item->annotations.empty()) {
            j["soft_label"] =
                soft_label_to_json(derive_soft_label(*item, dataset.scheme), dataset.scheme);
        }

        if (!item->split.empty()) j["split"] = item->split;
        j["other_info"] = item->other_info.is_null() ? ordered_json::object() : item->other_info;
        root[item->item_id] = std::move(j);
    }
    return root.dump(2) + "\n";
}

std::string serialize_metadata(const std::vector<AnnotatorProfile>& profiles) {
    std::vector<const AnnotatorProfile*> sorted;
    sorted.reserve(profiles.size());
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const AnnotatorProfile* a, const AnnotatorProfile* b) {
        return a->annotator_id < b->annotator_id;
    });
    ordered_json root = ordered_json::object();
    for (const AnnotatorProfile* p : sorted) root[p->annotator_id] = p->attributes;
    return root.dump(2) + "\n";
}

}  // namespace disev
