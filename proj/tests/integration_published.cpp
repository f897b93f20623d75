// Optional integration check against the public shared-task datasets:
// regenerates the most-frequent and random baselines and compares their
// scores with the published leaderboard values.
//
// Point DISEV_DATA at a directory containing manifest.json:
//   {"datasets": {"csc": {"scheme": "csc", "train": "csc_train.json",
//                         "test": "csc_test.json"}, ...}}
// Dataset files are the harmonized per-split JSON with gold annotations.
// Without DISEV_DATA the binary reports SKIP and exits 0.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "disev/baselines.hpp"
#include "disev/corpus.hpp"
#include "disev/predictions.hpp"

namespace fs = std::filesystem;
using namespace disev;

namespace {

struct Published {
    double most_frequent_a, random_a;
    double most_frequent_b, random_b;
};

const std::map<std::string, Published> kPublished = {
    // dataset -> {MF Task A, random Task A, MF Task B, random Task B}
    {"csc", {1.170, 1.543, 0.239, 0.352}},
    {"mp", {0.518, 0.687, 0.316, 0.499}},
    {"par", {3.231, 3.350, 0.362, 0.367}},
    {"ven", {0.595, 0.676, 0.345, 0.497}},
};

constexpr double kMostFrequentTolerance = 0.005;  // rounding of published values
constexpr double kRandomTolerance = 0.05;         // unknown seed and family

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int failures = 0;

void check_value(const std::string& what, double got, double expected, double tolerance) {
    const bool ok = std::abs(got - expected) <= tolerance;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << what << ": got " << got << ", published "
              << expected << " (tolerance " << tolerance << ")\n";
    if (!ok) ++failures;
}

}  // namespace

int main() {
    const char* data_dir = std::getenv("DISEV_DATA");
    if (!data_dir || !*data_dir) {
        std::cout << "SKIP  integration_published: DISEV_DATA is not set; download the public "
                     "datasets and point DISEV_DATA at them to run this check\n";
        return 0;
    }
    const fs::path root(data_dir);
    const fs::path manifest_path = root / "manifest.json";
    if (!fs::exists(manifest_path)) {
        std::cout << "SKIP  integration_published: " << manifest_path.string() << " not found\n";
        return 0;
    }

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(slurp(manifest_path));
    } catch (const std::exception& e) {
        std::cerr << "FAIL  cannot parse manifest: " << e.what() << "\n";
        return 1;
    }

    for (const auto& [name, entry] : manifest.at("datasets").items()) {
        if (!kPublished.count(name)) {
            std::cout << "SKIP  unknown dataset \"" << name << "\" in manifest\n";
            continue;
        }
        const auto& expected = kPublished.at(name);
        try {
            const auto scheme = LabelScheme::bundled(entry.value("scheme", name));
            const auto train = parse_dataset(
                slurp(root / entry.at("train").get<std::string>()), scheme, name);
            const auto test = parse_dataset(
                slurp(root / entry.at("test").get<std::string>()), scheme, name);

            const auto mf_a = most_frequent_soft(train, test);
            check_value(name + " most-frequent Task A",
                        score_predictions(test, mf_a).aggregate, expected.most_frequent_a,
                        kMostFrequentTolerance);

            const auto mf_b = most_frequent_label(train, test);
            check_value(name + " most-frequent Task B",
                        score_predictions(test, mf_b).aggregate, expected.most_frequent_b,
                        kMostFrequentTolerance);

            const auto rnd_a = random_soft(scheme, test, 0);
            check_value(name + " random Task A", score_predictions(test, rnd_a).aggregate,
                        expected.random_a, kRandomTolerance);

            const auto rnd_b = random_label(scheme, test, 0);
            check_value(name + " random Task B", score_predictions(test, rnd_b).aggregate,
                        expected.random_b, kRandomTolerance);
        } catch (const std::exception& e) {
            std::cerr << "FAIL  " << name << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
