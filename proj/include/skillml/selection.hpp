#pragma once

#include <map>
#include <span>
#include <vector>

#include "skillml/features.hpp"

namespace skillml {

enum class TTestVariant { welch, student };

struct SelectionResult {
    std::vector<double> p_values;       // one per catalog feature
    std::vector<int> filtered_ids;      // ids with p < alpha, ascending
    std::vector<int> degenerate_ids;    // constant-in-both-classes features (p = 1)
    std::vector<int> forward_ranking;   // greedy order, best first
    std::vector<double> criterion_trace; // Fisher score after each addition
    double alpha = 0.05;
};

// Per-feature two-sample t-test filter. Features constant in both classes get
// p = 1 by convention and are never selected.
SelectionResult ttest_filter(const FeatureMatrix& matrix, double alpha = 0.05,
                             TTestVariant variant = TTestVariant::welch);

// Greedy forward selection of k features from the candidate ids, maximizing
// the two-class Fisher separability score of the growing subset. Ties break
// toward the lower feature id. Extends `base` (typically a filter result) with
// the ranking and criterion trace.
SelectionResult forward_select(const FeatureMatrix& matrix, int k, std::span<const int> candidates,
                               SelectionResult base = {});

// Fisher separability of a feature subset: trace(S_W^-1 S_B) with a small
// ridge on S_W, evaluated via the two-class rank-one identity.
double fisher_score(const FeatureMatrix& matrix, std::span<const int> feature_ids);

inline constexpr double kFisherRidge = 1e-8;

// Nested premier subsets of sizes {5,10,15,20,25,30}, prefixes of one forward
// ranking. Sizes exceeding the filtered pool are dropped (truncated map).
struct PremierResult {
    SelectionResult selection;
    std::map<int, std::vector<int>> subsets;
    bool truncated = false;
};

PremierResult premier_subsets(const FeatureMatrix& matrix, double alpha = 0.05,
                              TTestVariant variant = TTestVariant::welch);

inline constexpr int kPremierSizes[] = {5, 10, 15, 20, 25, 30};

} // namespace skillml
