// Test-only reference computations, kept independent of the library's
// implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---- 1-D optimal transport, solved by brute force ----
//
// Primal route: the no-crossing greedy sweep that drains supply into demand
// left to right (optimal for |x - y| costs on a line).
inline double greedy_transport(std::span<const double> positions, std::span<const double> supply,
                               std::span<const double> demand) {
    std::vector<double> s(supply.begin(), supply.end());
    std::vector<double> d(demand.begin(), demand.end());
    const std::size_t n = positions.size();
    double cost = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < n) {
        const double moved = std::min(s[i], d[j]);
        if (moved > 0) cost += moved * std::abs(positions[i] - positions[j]);
        s[i] -= moved;
        d[j] -= moved;
        if (s[i] <= 1e-15) ++i;
        if (d[j] <= 1e-15) ++j;
    }
    return cost;
}

// Dual route: maximize sum_u f(u) (p_u - t_u) over 1-Lipschitz f (w.r.t.
// the bin positions). On a line the feasible set is the box of adjacent
// increments, so enumerating all 2^(n-1) vertex sign patterns is an
// exhaustive LP solve. By strong duality the maximum equals the transport
// optimum.
inline double dual_vertex_max(std::span<const double> positions, std::span<const double> p,
                              std::span<const double> t) {
    const std::size_t n = positions.size();
    if (n == 0 || n > 26) throw std::invalid_argument("dual oracle supports 1..26 bins");
    double best = 0.0;
    const std::uint64_t patterns = 1ULL << (n - 1);
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        double f = 0.0, objective = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double step = positions[k + 1] - positions[k];
            f += (mask & (1ULL << k)) ? step : -step;
            objective += f * (p[k + 1] - t[k + 1]);
        }
        best = std::max(best, objective);
    }
    return best;
}

// Certified LP value: primal greedy and dual enumeration must sandwich the
// optimum, so their agreement certifies both.
inline double lp_wasserstein(std::span<const double> positions, std::span<const double> p,
                             std::span<const double> t) {
    const double primal = greedy_transport(positions, p, t);
    const double dual = dual_vertex_max(positions, p, t);
    if (std::abs(primal - dual) > 1e-9)
        throw std::runtime_error("transport oracle: primal/dual certificate failed");
    return dual;
}

// ---- Wilcoxon signed-rank, exact by exhaustive sign flips ----

inline std::vector<double> midranks(std::vector<double> magnitudes) {
    std::vector<std::size_t> order(magnitudes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });
    std::vector<double> ranks(magnitudes.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        i = j + 1;
    }
    return ranks;
}

// Two-sided exact p-value by enumerating all 2^N sign assignments of the
// nonzero differences (zeros dropped, ties mid-ranked).
inline double enumerated_wilcoxon_p(std::span<const double> differences) {
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (double d : differences) {
        if (d == 0.0) continue;
        magnitudes.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t n = magnitudes.size();
    if (n == 0) return 1.0;
    if (n > 24) throw std::invalid_argument("enumeration oracle supports N <= 24");
    const auto ranks = midranks(magnitudes);

    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (positive[i]) observed += ranks[i];

    std::uint64_t count_le = 0, count_ge = 0;
    const std::uint64_t assignments = 1ULL << n;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) w += ranks[i];
        if (w <= observed) ++count_le;
        if (w >= observed) ++count_ge;
    }
    const double total = static_cast<double>(assignments);
    const double tail = static_cast<double>(std::min(count_le, count_ge)) / total;
    return std::min(1.0, 2.0 * tail);
}

// Same exact null distribution via an independent probability-space
// convolution; usable at any N (for verifying large-N decisions).
inline double convolved_wilcoxon_p(std::span<const double> differences) {
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (double d : differences) {
        if (d == 0.0) continue;
        magnitudes.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    if (magnitudes.empty()) return 1.0;
    const auto ranks = midranks(magnitudes);

    double observed = 0.0;
    std::int64_t max_sum = 0;
    std::vector<std::int64_t> doubled;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        const std::int64_t r2 = std::llround(2.0 * ranks[i]);
        doubled.push_back(r2);
        max_sum += r2;
        if (positive[i]) observed += ranks[i];
    }
    std::vector<double> pmf(static_cast<std::size_t>(max_sum) + 1, 0.0);
    pmf[0] = 1.0;
    std::int64_t reach = 0;
    for (std::int64_t r2 : doubled) {
        for (std::int64_t s = reach; s >= 0; --s) {
            const double mass = pmf[static_cast<std::size_t>(s)] * 0.5;
            pmf[static_cast<std::size_t>(s)] = mass;
            pmf[static_cast<std::size_t>(s + r2)] += mass;
        }
        reach += r2;
    }
    const std::int64_t observed2 = std::llround(2.0 * observed);
    double lo = 0.0, hi = 0.0;
    for (std::int64_t s = 0; s <= max_sum; ++s) {
        if (s <= observed2) lo += pmf[static_cast<std::size_t>(s)];
        if (s >= observed2) hi += pmf[static_cast<std::size_t>(s)];
    }
    return std::min(1.0, 2.0 * std::min(lo, hi));
}

// ---- Small statistical helpers ----

// P(X >= k) for X ~ Binomial(n, 1/2).
inline double binomial_upper_tail(std::size_t n, std::size_t k) {
    double coefficient = 1.0;  // C(n, 0)
    double tail = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j >= k) tail += coefficient;
        coefficient = coefficient * static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
    return tail * std::pow(0.5, static_cast<double>(n));
}

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 99% normal CI half-width
};

inline MeanCi mean_with_ci99(std::span<const double> samples) {
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    return {mean, 2.5758293035489004 * se};
}

}  // namespace oracles
