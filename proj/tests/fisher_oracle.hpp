#pragma once

// Independent Fisher-criterion evaluation via Eigen full-matrix operations:
// trace((S_W + ridge I)^-1 S_B) built from explicit scatter matrices. Used to
// cross-check the library's rank-one-identity implementation.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "skillml/features.hpp"
#include "skillml/selection.hpp"

namespace skillml::oracle {

inline double eigen_fisher_score(const FeatureMatrix& m, std::span<const int> ids) {
    const int k = static_cast<int>(ids.size());
    std::vector<std::size_t> skilled, novice;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        (m.rows[i].label == Label::skilled ? skilled : novice).push_back(i);

    auto class_mean = [&](const std::vector<std::size_t>& rows) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(k);
        for (std::size_t r : rows)
            for (int j = 0; j < k; ++j) mu(j) += m.rows[r].values[ids[j] - 1];
        return (mu / static_cast<double>(rows.size())).eval();
    };
    const Eigen::VectorXd mu1 = class_mean(skilled);
    const Eigen::VectorXd mu2 = class_mean(novice);
    const double n1 = static_cast<double>(skilled.size());
    const double n2 = static_cast<double>(novice.size());
    const Eigen::VectorXd mu = (n1 * mu1 + n2 * mu2) / (n1 + n2);

    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(k, k);
    auto accumulate = [&](const std::vector<std::size_t>& rows, const Eigen::VectorXd& center) {
        for (std::size_t r : rows) {
            Eigen::VectorXd x(k);
            for (int j = 0; j < k; ++j) x(j) = m.rows[r].values[ids[j] - 1];
            const Eigen::VectorXd c = x - center;
            sw += c * c.transpose();
        }
    };
    accumulate(skilled, mu1);
    accumulate(novice, mu2);

    Eigen::MatrixXd sb = n1 * (mu1 - mu) * (mu1 - mu).transpose() +
                         n2 * (mu2 - mu) * (mu2 - mu).transpose();
    sw.diagonal().array() += kFisherRidge;
    return sw.ldlt().solve(sb).trace();
}

} // namespace skillml::oracle
