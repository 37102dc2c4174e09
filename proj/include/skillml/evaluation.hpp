#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skillml/classifiers.hpp"
#include "skillml/features.hpp"
#include "skillml/selection.hpp"

namespace skillml {

enum class NormalizeOn { train, full, none };

const char* to_string(NormalizeOn n);
NormalizeOn normalize_on_from_string(const std::string& s);

struct ExperimentConfig {
    std::vector<double> train_fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<int> feature_counts = {5, 10, 15, 20, 25, 30};
    int iterations = 20;
    std::vector<ClassifierKind> classifiers = {ClassifierKind::knn, ClassifierKind::parzen,
                                               ClassifierKind::svm, ClassifierKind::fknn};
    std::uint64_t master_seed = 0;
    double working_train_fraction = 0.5;
    int working_feature_count = 15;

    bool stratify = true;
    NormalizeOn normalize_on = NormalizeOn::train;
    bool global_ranking = false; // one ranking per scenario from all rows
    double alpha = 0.05;
    TTestVariant ttest = TTestVariant::welch;
    int workers = 1;

    int knn_k = 7;
    int fknn_k = 7;
    double fknn_m = 2.0;
    double parzen_bandwidth = 0.0; // <= 0: Silverman
    SvmParams svm;
};

struct EvalCell {
    int scenario_id = 0;
    ClassifierKind classifier = ClassifierKind::knn;
    double train_fraction = 0.0;
    int n_features = 0;
    int iteration = 0;
    double eer = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double threshold = 0.0;
    std::string error; // nonempty marks a failed cell (metrics are nan)

    // full-dataset confusion at the EER threshold, filled for working-point cells
    int correct_skilled = -1;
    int correct_novice = -1;

    bool failed() const { return !error.empty(); }
};

struct EvalReport {
    std::vector<EvalCell> cells;
    int n_skilled = 0; // per-scenario class sizes (uniform across scenarios)
    int n_novice = 0;
    double working_train_fraction = 0.5;
    int working_feature_count = 15;
};

struct SplitResult {
    std::vector<std::size_t> train; // ascending row indices
    std::vector<std::size_t> test;
};

// Per-class train counts are round-half-up(fraction * class size), clamped to
// [1, size-1]; sampling is uniform without replacement from the seed.
SplitResult stratified_split(std::span<const Label> labels, double train_fraction,
                             std::uint64_t seed);
// Fidelity variant without stratification; a train set may end up one-class.
SplitResult simple_split(std::span<const Label> labels, double train_fraction,
                         std::uint64_t seed);

struct RocPoint {
    double threshold;
    double sensitivity;
    double specificity;
};

struct EerResult {
    double eer = 0.5;
    double threshold = 0.0;
    double sensitivity = 0.5;
    double specificity = 0.5;
    double tolerance = 0.0; // per-class rate quantum at the crossing
    std::vector<RocPoint> roc;
};

// Threshold sweep over the distinct scores (classify skilled when score >=
// threshold), sensitivity/specificity crossing located exactly or by linear
// interpolation at the sign change, clamped to [0, 0.5].
EerResult compute_eer(std::span<const double> scores, std::span<const Label> labels);

EvalReport run_grid(const FeatureMatrix& features, const ExperimentConfig& config);

struct ClassifierConfusionRange {
    int min_correct_skilled = 0, max_correct_skilled = 0;
    int min_correct_novice = 0, max_correct_novice = 0;
    int cells = 0;
};

struct ConfusionSummary {
    std::map<ClassifierKind, ClassifierConfusionRange> per_classifier;
    int n_skilled = 0;
    int n_novice = 0;
};

// Working-point confusion ranges across scenarios and iterations; row ranges
// are over full class sizes (every subject classified at the EER threshold).
ConfusionSummary confusion_ranges(const EvalReport& report);

} // namespace skillml
