// disev — scoring and ranking front end for disagreement-aware evaluation.
//
// Verbs: validate, derive, score, baseline, rank, report.
// Exit codes: 0 success, 1 usage, 2 validation findings, 3 I/O,
//             4 coverage mismatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "disev/baselines.hpp"
#include "disev/corpus.hpp"
#include "disev/errors.hpp"
#include "disev/metrics.hpp"
#include "disev/predictions.hpp"
#include "disev/ranking.hpp"
#include "disev/soft_label.hpp"

namespace {

using disev::CoverageError;
using disev::IoError;
using disev::ValidationError;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("error while reading \"" + path + "\"");
    return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    out << content;
    if (!out) throw IoError("error while writing \"" + path + "\"");
}

// A bundled scheme name (csc, mp, par, ven) or a path to a scheme JSON file.
disev::LabelScheme load_scheme(const std::string& spec) {
    if (disev::LabelScheme::is_bundled(spec)) return disev::LabelScheme::bundled(spec);
    if (!std::filesystem::exists(spec))
        throw IoError("scheme \"" + spec + "\" is neither a bundled name (csc, mp, par, ven) "
                      "nor an existing config file");
    try {
        return disev::LabelScheme::from_json(nlohmann::json::parse(read_file(spec)));
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError("scheme config \"" + spec + "\": " + e.what());
    }
}

std::string dataset_name_for(const std::string& explicit_name, const std::string& scheme_spec,
                             const std::string& path) {
    if (!explicit_name.empty()) return explicit_name;
    if (disev::LabelScheme::is_bundled(scheme_spec)) return scheme_spec;
    return std::filesystem::path(path).stem().string();
}

struct ValidateOptions {
    std::string dataset_path;
    std::string scheme_spec;
    std::string metadata_path;
    std::string name;
    bool require_metadata = false;
    std::string format = "json";
};

int run_validate(const ValidateOptions& opt) {
    const auto scheme = load_scheme(opt.scheme_spec);
    const std::string raw = read_file(opt.dataset_path);

    std::vector<disev::AnnotatorProfile> profiles;
    if (!opt.metadata_path.empty()) {
        profiles = disev::parse_metadata(read_file(opt.metadata_path));
    } else if (opt.require_metadata) {
        throw IoError("--require-metadata set but no --metadata file given");
    }

    auto outcome = disev::parse_dataset_report(
        raw, scheme, dataset_name_for(opt.name, opt.scheme_spec, opt.dataset_path));

    std::vector<disev::Finding> findings = outcome.findings;
    disev::ValidationReport report;
    if (outcome.dataset) {
        outcome.dataset->profiles = profiles;
        report = disev::validate_dataset(*outcome.dataset);
        std::set<std::array<std::string, 4>> seen;
        for (const auto& f : findings) seen.insert({f.item_id, f.field, f.kind, f.message});
        for (const auto& f : report.findings)
            if (seen.insert({f.item_id, f.field, f.kind, f.message}).second)
                findings.push_back(f);
    }

    ordered_json out;
    out["dataset"] = outcome.dataset ? outcome.dataset->name : std::string();
    out["items"] = outcome.dataset ? outcome.dataset->items.size() : 0;
    out["profiles"] = profiles.size();
    ordered_json findings_json = ordered_json::array();
    for (const auto& f : findings) {
        ordered_json fj;
        fj["item_id"] = f.item_id;
        fj["field"] = f.field;
        fj["kind"] = f.kind;
        fj["message"] = f.message;
        findings_json.push_back(std::move(fj));
    }
    out["structural_findings"] = std::move(findings_json);
    ordered_json mismatches = ordered_json::array();
    for (const auto& f : report.soft_label_mismatches) mismatches.push_back(f.message);
    out["soft_label_mismatches"] = std::move(mismatches);
    out["annotators_without_profile"] = report.annotators_without_profile;

    if (opt.format == "text") {
        std::ostringstream text;
        text << "dataset: " << out["dataset"].get<std::string>() << " ("
             << out["items"].get<std::size_t>() << " items)\n";
        text << "structural findings: " << findings.size() << "\n";
        for (const auto& f : findings) text << "  - " << f.message << "\n";
        text << "soft-label mismatches: " << report.soft_label_mismatches.size() << "\n";
        for (const auto& f : report.soft_label_mismatches) text << "  - " << f.message << "\n";
        std::cout << text.str();
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return findings.empty() ? 0 : 2;
}

struct DeriveOptions {
    std::string dataset_path;
    std::string scheme_spec;
    std::string split;
    std::string name;
    std::string format = "ndjson";
    std::string output;
};

int run_derive(const DeriveOptions& opt) {
    const auto scheme = load_scheme(opt.scheme_spec);
    auto dataset = disev::parse_dataset(
        read_file(opt.dataset_path), scheme,
        dataset_name_for(opt.name, opt.scheme_spec, opt.dataset_path));

    if (opt.format == "dataset") {
        write_output(opt.output, disev::serialize_dataset(dataset, true));
        return 0;
    }

    disev::PredictionFile gold;
    gold.task = 'A';
    gold.dataset = dataset.name;
    gold.scheme = scheme;
    gold.provenance["kind"] = "derived_gold";
    if (scheme.kind() == disev::SchemeKind::Multilabel)
        gold.task_a_multilabel = disev::gold_soft_labels_multilabel(dataset, opt.split);
    else
        gold.task_a = disev::gold_soft_labels(dataset, opt.split);
    write_output(opt.output, disev::write_prediction_file(gold));
    return 0;
}

struct ScoreOptions {
    std::string gold_path;
    std::string pred_path;
    std::string scheme_spec;
    std::string task;
    std::string team = "system";
    std::string name;
    std::string split;
    std::string metric;
    std::string output;
    bool percent = false;
};

int run_score(const ScoreOptions& opt) {
    const auto predictions = disev::parse_prediction_file(read_file(opt.pred_path));
    if (!opt.task.empty() && opt.task != std::string(1, predictions.task))
        throw ValidationError("--task " + opt.task + " contradicts the prediction file header (Task " +
                              std::string(1, predictions.task) + ")");
    const auto scheme =
        opt.scheme_spec.empty() ? predictions.scheme : load_scheme(opt.scheme_spec);
    if (!(scheme == predictions.scheme))
        throw ValidationError("--scheme does not match the prediction file header scheme");

    const std::string dataset_name = !opt.name.empty()
                                         ? opt.name
                                         : (!predictions.dataset.empty()
                                                ? predictions.dataset
                                                : dataset_name_for("", opt.scheme_spec, opt.gold_path));
    const auto gold = disev::parse_dataset(read_file(opt.gold_path), scheme, dataset_name);

    std::optional<disev::MetricId> metric_override;
    if (!opt.metric.empty()) metric_override = disev::metric_from_name(opt.metric);

    disev::ScoreReport report =
        disev::score_predictions(gold, predictions, metric_override, opt.split);

    if (opt.percent) {
        if (report.metric != "average_normalized_absolute_distance")
            throw ValidationError("--percent only applies to the MAD/ANAD metric");
        report.aggregate *= 100.0;
        for (auto& [id, v] : report.per_item) v *= 100.0;
    }

    ordered_json out;
    out["team"] = opt.team;
    out["dataset"] = dataset_name;
    out["task"] = std::string(1, predictions.task);
    if (!opt.split.empty()) out["split"] = opt.split;
    const ordered_json core = report.to_json();
    for (const auto& [key, value] : core.items()) out[key] = value;
    if (metric_override) out["metric_override"] = true;
    if (opt.percent) out["percent"] = true;
    write_output(opt.output, out.dump(2) + "\n");
    return 0;
}

struct BaselineOptions {
    std::string kind;
    std::string task = "A";
    std::string train_path;
    std::string target_path;
    std::string scheme_spec;
    std::string name;
    std::string split;
    std::string family = "simplex";
    std::uint64_t seed = 0;
    std::string output;
};

int run_baseline(const BaselineOptions& opt) {
    const auto scheme = load_scheme(opt.scheme_spec);
    const std::string name = dataset_name_for(opt.name, opt.scheme_spec, opt.target_path);

    disev::BaselineConfig config;
    if (opt.kind == "random")
        config.kind = disev::BaselineKind::Random;
    else if (opt.kind == "most_frequent")
        config.kind = disev::BaselineKind::MostFrequent;
    else
        throw ValidationError("--kind must be random or most_frequent");
    config.rng_seed = opt.seed;
    if (opt.family == "simplex")
        config.family = disev::RandomFamily::SimplexUniform;
    else if (opt.family == "normalized")
        config.family = disev::RandomFamily::NormalizedUniform;
    else
        throw ValidationError("--random-family must be simplex or normalized");

    const auto target = disev::parse_dataset(read_file(opt.target_path), scheme, name);
    disev::Dataset train;
    if (config.kind == disev::BaselineKind::MostFrequent) {
        if (opt.train_path.empty())
            throw ValidationError("most_frequent baseline requires --train");
        train = disev::parse_dataset(read_file(opt.train_path), scheme, name);
    } else {
        train.scheme = scheme;
    }

    const auto file =
        disev::generate_baseline(config, opt.task.at(0), train, target, opt.split);
    write_output(opt.output, disev::write_prediction_file(file));
    return 0;
}

struct RankOptions {
    std::vector<std::string> report_paths;
    double alpha = 0.05;
    std::string baseline = "random_baseline";
    std::string zero_policy = "drop";
    std::string format = "json";
    std::string output;
};

int run_rank(const RankOptions& opt) {
    const disev::ZeroPolicy zeros = opt.zero_policy == "pratt" ? disev::ZeroPolicy::Pratt
                                                               : disev::ZeroPolicy::DropZeros;
    std::map<std::string, std::vector<disev::SystemRun>> by_dataset;
    for (const auto& path : opt.report_paths) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("report \"" + path + "\": " + e.what());
        }
        disev::SystemRun run;
        run.team = j.value("team", std::filesystem::path(path).stem().string());
        run.dataset = j.value("dataset", std::string("default"));
        run.task = j.value("task", std::string("A")).at(0);
        run.report = disev::ScoreReport::from_json(j);
        by_dataset[run.dataset].push_back(std::move(run));
    }
    if (by_dataset.empty()) throw ValidationError("no score reports given");

    std::map<std::string, disev::Leaderboard> boards;
    for (auto& [dataset, runs] : by_dataset)
        boards[dataset] = disev::cluster_ties(std::move(runs), opt.alpha,
                                              disev::WilcoxonMode::Auto, zeros);

    ordered_json out;
    ordered_json per_dataset = ordered_json::object();
    for (const auto& [dataset, board] : boards) per_dataset[dataset] = board.to_json();
    out["datasets"] = std::move(per_dataset);

    std::string text;
    for (const auto& [dataset, board] : boards) text += board.render_text() + "\n";

    if (boards.size() > 1) {
        const auto overall = disev::cross_dataset_leaderboard(boards, opt.baseline);
        out["overall"] = overall.to_json();
        text += overall.render_text();
    }

    write_output(opt.output, opt.format == "text" ? text : out.dump(2) + "\n");
    return 0;
}

struct ReportOptions {
    std::string path;
};

int run_report(const ReportOptions& opt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(opt.path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("report \"" + opt.path + "\": " + e.what());
    }

    std::ostringstream out;
    if (j.contains("per_item")) {  // a score report
        out << "team:      " << j.value("team", std::string("?")) << "\n";
        out << "dataset:   " << j.value("dataset", std::string("?")) << " (Task "
            << j.value("task", std::string("?")) << ")\n";
        out << "metric:    " << j.value("metric", std::string("?")) << " ["
            << j.value("abbrev", std::string("?")) << "]\n";
        out << "items:     " << j.value("N", 0) << "\n";
        out << "aggregate: " << j.at("aggregate").get<double>() << "\n";
    } else if (j.contains("datasets")) {  // rank output
        for (const auto& [dataset, board] : j.at("datasets").items()) {
            out << dataset << " / Task " << board.value("task", std::string("?")) << " ("
                << board.value("abbrev", std::string("?")) << ")\n";
            for (const auto& e : board.at("entries"))
                out << "  " << e.at("rank").get<std::size_t>() << "  "
                    << e.at("team").get<std::string>() << "  " << e.at("score").get<double>()
                    << "\n";
            out << "\n";
        }
        if (j.contains("overall")) {
            out << "overall (av.pos):\n";
            for (const auto& e : j.at("overall").at("entries"))
                out << "  " << e.at("rank").get<std::size_t>() << "  ("
                    << e.at("average_position").get<double>() << ")  "
                    << e.at("team").get<std::string>() << "\n";
        }
    } else {
        throw ValidationError("\"" + opt.path + "\" is neither a score report nor a rank output");
    }
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluation harness for disagreement-aware NLP systems "
                 "(soft-label and perspectivist scoring, baselines, tie-aware leaderboards)"};
    app.require_subcommand(1);

    ValidateOptions validate_opt;
    auto* validate = app.add_subcommand("validate", "Parse and validate a dataset file");
    validate->add_option("dataset", validate_opt.dataset_path, "Harmonized dataset JSON")
        ->required();
    validate->add_option("--scheme", validate_opt.scheme_spec,
                         "Bundled scheme name or scheme config path")
        ->required();
    validate->add_option("--metadata", validate_opt.metadata_path, "Annotator metadata JSON");
    validate->add_flag("--require-metadata", validate_opt.require_metadata,
                       "Fail when no metadata file is given");
    validate->add_option("--name", validate_opt.name, "Dataset name for reports");
    validate->add_option("--format", validate_opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    DeriveOptions derive_opt;
    auto* derive = app.add_subcommand("derive", "Derive gold soft labels from annotations");
    derive->add_option("dataset", derive_opt.dataset_path, "Harmonized dataset JSON")->required();
    derive->add_option("--scheme", derive_opt.scheme_spec, "Scheme name or config path")
        ->required();
    derive->add_option("--split", derive_opt.split, "Only items of this split");
    derive->add_option("--name", derive_opt.name, "Dataset name");
    derive->add_option("--format", derive_opt.format,
                       "ndjson (Task A prediction file) or dataset (canonical JSON)")
        ->check(CLI::IsMember({"ndjson", "dataset"}));
    derive->add_option("--output,-o", derive_opt.output, "Output path (default stdout)");

    ScoreOptions score_opt;
    auto* score = app.add_subcommand("score", "Score a prediction file against gold data");
    score->add_option("--gold", score_opt.gold_path, "Gold dataset JSON")->required();
    score->add_option("--pred", score_opt.pred_path, "Prediction NDJSON")->required();
    score->add_option("--scheme", score_opt.scheme_spec,
                      "Scheme name or config path (default: prediction header)");
    score->add_option("--task", score_opt.task, "A or B (default: prediction header)")
        ->check(CLI::IsMember({"A", "B"}));
    score->add_option("--team", score_opt.team, "Team name recorded in the report");
    score->add_option("--name", score_opt.name, "Dataset name");
    score->add_option("--split", score_opt.split, "Only items of this split");
    score->add_option("--metric", score_opt.metric,
                      "Override the official metric (watermarked in the report)");
    score->add_flag("--percent", score_opt.percent, "Render MAD/ANAD values x100");
    score->add_option("--output,-o", score_opt.output, "Output path (default stdout)");

    BaselineOptions baseline_opt;
    auto* baseline = app.add_subcommand("baseline", "Generate an official baseline prediction file");
    baseline->add_option("--kind", baseline_opt.kind, "random or most_frequent")->required();
    baseline->add_option("--task", baseline_opt.task, "A or B")
        ->required()
        ->check(CLI::IsMember({"A", "B"}));
    baseline->add_option("--train", baseline_opt.train_path,
                         "Training dataset (most_frequent only)");
    baseline->add_option("--target", baseline_opt.target_path, "Items to predict for")->required();
    baseline->add_option("--scheme", baseline_opt.scheme_spec, "Scheme name or config path")
        ->required();
    baseline->add_option("--name", baseline_opt.name, "Dataset name");
    baseline->add_option("--split", baseline_opt.split, "Only target items of this split");
    baseline->add_option("--seed", baseline_opt.seed, "RNG seed (random baseline)");
    baseline->add_option("--random-family", baseline_opt.family, "simplex or normalized")
        ->check(CLI::IsMember({"simplex", "normalized"}));
    baseline->add_option("--output,-o", baseline_opt.output, "Output path (default stdout)");

    RankOptions rank_opt;
    auto* rank = app.add_subcommand("rank", "Build tie-aware leaderboards from score reports");
    rank->add_option("reports", rank_opt.report_paths, "Score report JSON files")->required();
    rank->add_option("--alpha", rank_opt.alpha, "Tie-cluster significance level");
    rank->add_option("--baseline", rank_opt.baseline,
                     "Team whose rank substitutes for missing submissions");
    rank->add_option("--zero-policy", rank_opt.zero_policy, "drop or pratt")
        ->check(CLI::IsMember({"drop", "pratt"}));
    rank->add_option("--format", rank_opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    rank->add_option("--output,-o", rank_opt.output, "Output path (default stdout)");

    ReportOptions report_opt;
    auto* report = app.add_subcommand("report", "Render a score report or rank output as text");
    report->add_option("file", report_opt.path, "Score report or rank output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (validate->parsed()) return run_validate(validate_opt);
        if (derive->parsed()) return run_derive(derive_opt);
        if (score->parsed()) return run_score(score_opt);
        if (baseline->parsed()) return run_baseline(baseline_opt);
        if (rank->parsed()) return run_rank(rank_opt);
        if (report->parsed()) return run_report(report_opt);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const CoverageError& e) {
        std::cerr << "coverage error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
