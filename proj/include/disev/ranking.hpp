#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "disev/metrics.hpp"
#include "disev/wilcoxon.hpp"

namespace disev {

// One system's scored submission on one dataset/task.
struct SystemRun {
    std::string team;
    std::string dataset;
    char task = 'A';
    ScoreReport report;
    bool substituted = false;  // filled in by the random baseline
};

struct LeaderboardEntry {
    std::string team;
    double aggregate = 0.0;
    std::size_t cluster = 0;  // 1-based tie-cluster index
    std::size_t rank = 0;     // 1 + systems in strictly better clusters
    bool substituted = false;
};

struct Leaderboard {
    std::string dataset;
    char task = 'A';
    std::string metric;
    std::string abbrev;
    double alpha = 0.05;
    std::string zero_policy = "drop";
    std::vector<LeaderboardEntry> entries;  // ascending by aggregate

    nlohmann::ordered_json to_json() const;
    std::string render_text() const;
};

// Greedy tie clustering: runs are sorted ascending by aggregate (all
// metrics are losses); each run is Wilcoxon-tested at the instance level
// against the best (first) member of the current cluster. p > alpha joins
// the cluster, p <= alpha opens a new one.
Leaderboard cluster_ties(std::vector<SystemRun> runs, double alpha = 0.05,
                         WilcoxonMode mode = WilcoxonMode::Auto,
                         ZeroPolicy zeros = ZeroPolicy::DropZeros);

struct OverallCell {
    std::size_t rank = 0;
    double aggregate = 0.0;
    bool substituted = false;  // team missing; random-baseline rank used
};

struct OverallEntry {
    std::string team;
    double average_position = 0.0;
    std::size_t rank = 0;  // equal average positions share the min rank
    std::map<std::string, OverallCell> cells;
};

struct OverallTable {
    char task = 'A';
    double alpha = 0.05;
    std::string baseline_team;
    std::vector<std::string> datasets;
    std::vector<OverallEntry> entries;  // ascending by average position

    nlohmann::ordered_json to_json() const;
    std::string render_text() const;
};

// Cross-dataset table: a team's average position is the mean of its
// per-dataset ranks, with missing submissions replaced by the named
// baseline's rank on that dataset. Throws when a needed baseline run is
// absent from a dataset's leaderboard.
OverallTable cross_dataset_leaderboard(const std::map<std::string, Leaderboard>& per_dataset,
                                       const std::string& baseline_team);

}  // namespace disev
