#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skillml/signal.hpp"

namespace skillml {

enum class ClassifierKind { knn, parzen, svm, fknn };

const char* to_string(ClassifierKind k);
ClassifierKind classifier_from_string(const std::string& s);

enum class SvmKernel { rbf, linear };

struct KnnModel {
    int k = 7;
    std::vector<std::vector<double>> train;
    std::vector<Label> labels;
};

struct FknnModel {
    int k = 7;
    double m = 2.0; // fuzzifier
    std::vector<std::vector<double>> train;
    std::vector<Label> labels;
};

struct ParzenModel {
    double bandwidth = 0.0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> skilled;
    std::vector<std::vector<double>> novice;
};

struct SvmModel {
    SvmKernel kernel = SvmKernel::rbf;
    double gamma = 0.0;
    double c = 1.0;
    double bias = 0.0;
    std::vector<std::vector<double>> support; // training rows with alpha > 0
    std::vector<double> alpha_y;              // alpha_i * y_i, y in {-1,+1}
    int iterations = 0;
};

struct TrainedClassifier {
    ClassifierKind kind = ClassifierKind::knn;
    std::vector<int> feature_ids; // catalog subset the model was fitted on
    std::variant<KnnModel, ParzenModel, SvmModel, FknnModel> model;

    // Continuous skilled-score; higher means more skilled. KNN/FKNN/Parzen lie
    // in [0,1], SVM returns the decision value.
    double score(std::span<const double> q) const;
    std::string summary() const;
};

struct SvmParams {
    double c = 1.0;
    SvmKernel kernel = SvmKernel::rbf;
    double gamma = 0.0; // <= 0 selects 1 / (dim * pooled feature variance)
    double kkt_tolerance = 1e-3;
    int max_sweeps = 20000;
};

TrainedClassifier knn_fit(std::span<const std::vector<double>> train, std::span<const Label> labels,
                          int k = 7);
TrainedClassifier fknn_fit(std::span<const std::vector<double>> train,
                           std::span<const Label> labels, int k = 7, double m = 2.0);
// bandwidth 0 selects Silverman's rule on the pooled training data; negative rejected
TrainedClassifier parzen_fit(std::span<const std::vector<double>> train,
                             std::span<const Label> labels, double bandwidth = 0.0);
TrainedClassifier svm_fit(std::span<const std::vector<double>> train, std::span<const Label> labels,
                          const SvmParams& params = {});

// Per-class kernel density estimate of a fitted Parzen model.
double parzen_class_density(const TrainedClassifier& clf, Label label, std::span<const double> q);

// Both fuzzy memberships of a query; they sum to 1.
struct FuzzyMembership {
    double skilled = 0.0;
    double novice = 0.0;
};
FuzzyMembership fknn_memberships(const TrainedClassifier& clf, std::span<const double> q);

} // namespace skillml
