#include "disev/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "disev/errors.hpp"

namespace disev {

namespace {

constexpr std::size_t kExactThreshold = 25;

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

// Exact two-sided p over the sign-flip null: every nonzero difference keeps
// its rank and flips sign with probability 1/2. Ranks are doubled so
// mid-ranks become integers; the DP counts achievable positive-rank sums.
double exact_two_sided(const std::vector<double>& nonzero_ranks, double statistic) {
    std::vector<std::int64_t> doubled;
    doubled.reserve(nonzero_ranks.size());
    std::int64_t max_sum = 0;
    for (double r : nonzero_ranks) {
        doubled.push_back(std::llround(2.0 * r));
        max_sum += doubled.back();
    }

    // Counts fit exactly in a double up to 2^53 assignments; the DP stays
    // integer-exact for every N the Auto branch selects and far beyond.
    std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
    counts[0] = 1.0;
    for (std::int64_t r : doubled)
        for (std::int64_t s = max_sum; s >= r; --s)
            counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];

    const std::int64_t observed = std::llround(2.0 * statistic);
    double lo = 0.0, hi = 0.0;
    for (std::int64_t s = 0; s <= max_sum; ++s) {
        if (s <= observed) lo += counts[static_cast<std::size_t>(s)];
        if (s >= observed) hi += counts[static_cast<std::size_t>(s)];
    }
    const double total = std::ldexp(1.0, static_cast<int>(nonzero_ranks.size()));
    const double tail = std::min(lo, hi) / total;
    return std::min(1.0, 2.0 * tail);
}

double approximate_two_sided(const std::vector<double>& nonzero_ranks, double statistic) {
    double rank_sum = 0.0, squared_sum = 0.0;
    for (double r : nonzero_ranks) {
        rank_sum += r;
        squared_sum += r * r;
    }
    const double mean = rank_sum / 2.0;
    const double variance = squared_sum / 4.0;  // tie-corrected: ranks are mid-ranks
    const double centered = statistic - mean;
    const double continuity = centered > 0 ? 0.5 : (centered < 0 ? -0.5 : 0.0);
    const double z = (centered - continuity) / std::sqrt(variance);
    return std::clamp(normal_two_sided(z), 0.0, 1.0);
}

}  // namespace

std::vector<double> midranks(std::span<const double> magnitudes) {
    const std::size_t n = magnitudes.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

WilcoxonResult wilcoxon_from_differences(std::span<const double> differences, WilcoxonMode mode,
                                         ZeroPolicy zeros) {
    std::vector<double> magnitudes;
    std::vector<int> signs;
    magnitudes.reserve(differences.size());
    signs.reserve(differences.size());
    for (double d : differences) {
        if (d == 0.0 && zeros == ZeroPolicy::DropZeros) continue;
        magnitudes.push_back(std::abs(d));
        signs.push_back(d > 0.0 ? 1 : (d < 0.0 ? -1 : 0));
    }

    WilcoxonResult result;
    const auto ranks = midranks(magnitudes);

    std::vector<double> nonzero_ranks;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (signs[i] == 0) continue;  // Pratt: ranked but sign-fixed
        nonzero_ranks.push_back(ranks[i]);
        if (signs[i] > 0) result.statistic += ranks[i];
    }
    result.n_effective = nonzero_ranks.size();

    if (result.n_effective == 0) {
        result.degenerate = true;
        result.exact = true;
        result.p_value = 1.0;
        return result;
    }

    const bool use_exact = mode == WilcoxonMode::Exact ||
                           (mode == WilcoxonMode::Auto && result.n_effective <= kExactThreshold);
    result.exact = use_exact;
    result.p_value = use_exact ? exact_two_sided(nonzero_ranks, result.statistic)
                               : approximate_two_sided(nonzero_ranks, result.statistic);
    return result;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    WilcoxonMode mode, ZeroPolicy zeros) {
    if (x.size() != y.size())
        throw ValidationError("wilcoxon signed-rank: paired score vectors differ in length");
    if (x.empty()) throw ValidationError("wilcoxon signed-rank: empty score vectors");
    std::vector<double> differences(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) differences[i] = x[i] - y[i];
    return wilcoxon_from_differences(differences, mode, zeros);
}

}  // namespace disev
