#include "disev/ranking.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "disev/errors.hpp"

namespace disev {

namespace {

std::vector<double> per_item_values(const ScoreReport& report) {
    std::vector<double> values;
    values.reserve(report.per_item.size());
    for (const auto& [id, v] : report.per_item) values.push_back(v);
    return values;
}

void check_same_items(const SystemRun& a, const SystemRun& b) {
    if (a.report.per_item.size() == b.report.per_item.size()) {
        bool equal = true;
        auto ia = a.report.per_item.begin();
        auto ib = b.report.per_item.begin();
        for (; ia != a.report.per_item.end(); ++ia, ++ib)
            if (ia->first != ib->first) {
                equal = false;
                break;
            }
        if (equal) return;
    }
    throw CoverageError("runs \"" + a.team + "\" and \"" + b.team +
                        "\" score different item sets and cannot be ranked together");
}

}  // namespace

Leaderboard cluster_ties(std::vector<SystemRun> runs, double alpha, WilcoxonMode mode,
                         ZeroPolicy zeros) {
    if (runs.empty()) throw ValidationError("cannot rank an empty run list");
    for (std::size_t i = 1; i < runs.size(); ++i) check_same_items(runs[0], runs[i]);

    std::stable_sort(runs.begin(), runs.end(), [](const SystemRun& a, const SystemRun& b) {
        if (a.report.aggregate != b.report.aggregate)
            return a.report.aggregate < b.report.aggregate;
        return a.team < b.team;
    });

    Leaderboard board;
    board.dataset = runs.front().dataset;
    board.task = runs.front().task;
    board.metric = runs.front().report.metric;
    board.abbrev = runs.front().report.abbrev;
    board.alpha = alpha;
    board.zero_policy = zeros == ZeroPolicy::DropZeros ? "drop" : "pratt";

    std::vector<double> head_scores = per_item_values(runs.front().report);
    std::vector<std::size_t> clusters(runs.size(), 1);
    std::size_t cluster = 1;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        const auto scores = per_item_values(runs[i].report);
        const auto test = wilcoxon_signed_rank(scores, head_scores, mode, zeros);
        if (test.p_value <= alpha) {
            ++cluster;
            head_scores = scores;  // this run opens and heads the new cluster
        }
        clusters[i] = cluster;
    }

    std::vector<std::size_t> cluster_sizes(cluster + 1, 0);
    for (std::size_t c : clusters) ++cluster_sizes[c];
    std::vector<std::size_t> rank_of_cluster(cluster + 1, 1);
    for (std::size_t c = 2; c <= cluster; ++c)
        rank_of_cluster[c] = rank_of_cluster[c - 1] + cluster_sizes[c - 1];

    for (std::size_t i = 0; i < runs.size(); ++i)
        board.entries.push_back({runs[i].team, runs[i].report.aggregate, clusters[i],
                                 rank_of_cluster[clusters[i]], runs[i].substituted});
    return board;
}

nlohmann::ordered_json Leaderboard::to_json() const {
    nlohmann::ordered_json j;
    j["dataset"] = dataset;
    j["task"] = std::string(1, task);
    j["metric"] = metric;
    j["abbrev"] = abbrev;
    j["alpha"] = alpha;
    j["zero_policy"] = zero_policy;
    nlohmann::ordered_json entries_json = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json ej;
        ej["rank"] = e.rank;
        ej["team"] = e.team;
        ej["score"] = e.aggregate;
        ej["cluster"] = e.cluster;
        if (e.substituted) ej["substituted"] = true;
        entries_json.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries_json);
    return j;
}

std::string Leaderboard::render_text() const {
    std::size_t team_width = 4;
    for (const auto& e : entries) team_width = std::max(team_width, e.team.size());
    std::ostringstream out;
    out << dataset << " / Task " << task << " (" << abbrev << ", alpha=" << alpha << ")\n";
    out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(team_width + 2))
        << "team" << std::right << std::setw(10) << abbrev << "\n";
    for (const auto& e : entries) {
        out << std::left << std::setw(6) << e.rank << std::setw(static_cast<int>(team_width + 2))
            << e.team << std::right << std::setw(10) << std::fixed << std::setprecision(4)
            << e.aggregate << "\n";
    }
    return out.str();
}

OverallTable cross_dataset_leaderboard(const std::map<std::string, Leaderboard>& per_dataset,
                                       const std::string& baseline_team) {
    if (per_dataset.empty()) throw ValidationError("no per-dataset leaderboards to combine");

    OverallTable table;
    table.task = per_dataset.begin()->second.task;
    table.alpha = per_dataset.begin()->second.alpha;
    table.baseline_team = baseline_team;

    std::set<std::string> teams;
    for (const auto& [dataset, board] : per_dataset) {
        table.datasets.push_back(dataset);
        for (const auto& e : board.entries) teams.insert(e.team);
    }

    for (const auto& team : teams) {
        OverallEntry entry;
        entry.team = team;
        double rank_sum = 0.0;
        for (const auto& [dataset, board] : per_dataset) {
            const LeaderboardEntry* own = nullptr;
            const LeaderboardEntry* baseline = nullptr;
            for (const auto& e : board.entries) {
                if (e.team == team) own = &e;
                if (e.team == baseline_team) baseline = &e;
            }
            OverallCell cell;
            if (own) {
                cell = {own->rank, own->aggregate, false};
            } else if (baseline) {
                cell = {baseline->rank, baseline->aggregate, true};
            } else {
                throw ValidationError("team \"" + team + "\" has no run on dataset \"" + dataset +
                                      "\" and no \"" + baseline_team +
                                      "\" baseline is available there for substitution");
            }
            rank_sum += static_cast<double>(cell.rank);
            entry.cells[dataset] = cell;
        }
        entry.average_position = rank_sum / static_cast<double>(per_dataset.size());
        table.entries.push_back(std::move(entry));
    }

    std::sort(table.entries.begin(), table.entries.end(),
              [](const OverallEntry& a, const OverallEntry& b) {
                  if (a.average_position != b.average_position)
                      return a.average_position < b.average_position;
                  return a.team < b.team;
              });
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        if (i > 0 && table.entries[i].average_position == table.entries[i - 1].average_position)
            table.entries[i].rank = table.entries[i - 1].rank;  // equal av.pos shares min rank
        else
            table.entries[i].rank = i + 1;
    }
    return table;
}

nlohmann::ordered_json OverallTable::to_json() const {
    nlohmann::ordered_json j;
    j["task"] = std::string(1, task);
    j["alpha"] = alpha;
    j["baseline_team"] = baseline_team;
    j["datasets"] = datasets;
    nlohmann::ordered_json entries_json = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json ej;
        ej["rank"] = e.rank;
        ej["average_position"] = e.average_position;
        ej["team"] = e.team;
        nlohmann::ordered_json cells = nlohmann::ordered_json::object();
        for (const auto& [dataset, cell] : e.cells) {
            nlohmann::ordered_json cj;
            cj["rank"] = cell.rank;
            cj["score"] = cell.aggregate;
            cj["substituted"] = cell.substituted;
            cells[dataset] = std::move(cj);
        }
        ej["per_dataset"] = std::move(cells);
        entries_json.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries_json);
    return j;
}

std::string OverallTable::render_text() const {
    std::size_t team_width = 4;
    for (const auto& e : entries) team_width = std::max(team_width, e.team.size());
    std::ostringstream out;
    out << "Overall / Task " << task << " (average position across " << datasets.size()
        << " datasets, alpha=" << alpha << ")\n";
    out << std::left << std::setw(6) << "rank" << std::setw(10) << "(av.pos)"
        << std::setw(static_cast<int>(team_width + 2)) << "team";
    for (const auto& dataset : datasets)
        out << std::right << std::setw(16) << (dataset + " (rank)");
    out << "\n";
    for (const auto& e : entries) {
        std::ostringstream pos;
        pos << "(" << e.average_position << ")";
        out << std::left << std::setw(6) << e.rank << std::setw(10) << pos.str()
            << std::setw(static_cast<int>(team_width + 2)) << e.team;
        for (const auto& dataset : datasets) {
            const auto& cell = e.cells.at(dataset);
            std::ostringstream c;
            if (cell.substituted)
                c << "BSL";
            else
                c << std::fixed << std::setprecision(3) << cell.aggregate;
            c << " (" << cell.rank << ")";
            out << std::right << std::setw(16) << c.str();
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace disev
