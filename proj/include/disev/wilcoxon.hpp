#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace disev {

enum class WilcoxonMode { Auto, Exact, Approximate };

// How zero differences enter the test. DropZeros is Wilcoxon's original
// treatment; Pratt keeps zeros in the ranking and then discards their
// contribution to the statistic.
enum class ZeroPolicy { DropZeros, Pratt };

struct WilcoxonResult {
    double p_value = 1.0;
    double statistic = 0.0;      // W+, the positive-difference rank sum
    std::size_t n_effective = 0; // differences that carry rank mass
    bool exact = false;          // which branch produced the p-value
    bool degenerate = false;     // no nonzero differences; p = 1 by convention
};

// Two-sided Wilcoxon signed-rank test on paired differences x[i] - y[i].
// Ties are mid-ranked. The exact branch (effective N <= 25 under Auto)
// evaluates the full null distribution of W+ by dynamic programming over
// doubled ranks; the approximate branch uses the normal approximation with
// tie-variance and continuity corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    WilcoxonMode mode = WilcoxonMode::Auto,
                                    ZeroPolicy zeros = ZeroPolicy::DropZeros);

WilcoxonResult wilcoxon_from_differences(std::span<const double> differences,
                                         WilcoxonMode mode = WilcoxonMode::Auto,
                                         ZeroPolicy zeros = ZeroPolicy::DropZeros);

// Mid-ranks (1-based, ties averaged) of the given magnitudes, ascending.
std::vector<double> midranks(std::span<const double> magnitudes);

}  // namespace disev
