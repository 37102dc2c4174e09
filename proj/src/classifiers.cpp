#include "skillml/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace skillml {

const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::parzen: return "parzen";
        case ClassifierKind::svm: return "svm";
        case ClassifierKind::fknn: return "fknn";
    }
    return "?";
}

ClassifierKind classifier_from_string(const std::string& s) {
    if (s == "knn") return ClassifierKind::knn;
    if (s == "parzen") return ClassifierKind::parzen;
    if (s == "svm") return ClassifierKind::svm;
    if (s == "fknn") return ClassifierKind::fknn;
    throw std::invalid_argument("unknown classifier: " + s);
}

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_training(std::span<const std::vector<double>> train, std::span<const Label> labels) {
    if (train.empty() || train.size() != labels.size())
        throw std::invalid_argument("fit: empty training set or label size mismatch");
    for (const auto& row : train)
        if (row.size() != train[0].size())
            throw std::invalid_argument("fit: inconsistent feature dimension");
}

// indices of the k nearest training rows; equal distances break toward the
// lower training-row index
std::vector<std::size_t> k_nearest(std::span<const std::vector<double>> train,
                                   std::span<const double> q, int k) {
    std::vector<std::pair<double, std::size_t>> d(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) d[i] = {sq_distance(train[i], q), i};
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[i] = d[i].second;
    return idx;
}

} // namespace

TrainedClassifier knn_fit(std::span<const std::vector<double>> train, std::span<const Label> labels,
                          int k) {
    check_training(train, labels);
    if (k < 1 || static_cast<std::size_t>(k) > train.size())
        throw std::invalid_argument("knn_fit: k outside [1, n]");
    KnnModel m;
    m.k = k;
    m.train.assign(train.begin(), train.end());
    m.labels.assign(labels.begin(), labels.end());
    return {ClassifierKind::knn, {}, std::move(m)};
}

TrainedClassifier fknn_fit(std::span<const std::vector<double>> train,
                           std::span<const Label> labels, int k, double m) {
    check_training(train, labels);
    if (k < 1 || static_cast<std::size_t>(k) > train.size())
        throw std::invalid_argument("fknn_fit: k outside [1, n]");
    if (!(m > 1.0)) throw std::invalid_argument("fknn_fit: fuzzifier m must exceed 1");
    FknnModel f;
    f.k = k;
    f.m = m;
    f.train.assign(train.begin(), train.end());
    f.labels.assign(labels.begin(), labels.end());
    return {ClassifierKind::fknn, {}, std::move(f)};
}

TrainedClassifier parzen_fit(std::span<const std::vector<double>> train,
                             std::span<const Label> labels, double bandwidth) {
    check_training(train, labels);
    ParzenModel p;
    p.dim = train[0].size();
    for (std::size_t i = 0; i < train.size(); ++i)
        (labels[i] == Label::skilled ? p.skilled : p.novice).push_back(train[i]);
    if (p.skilled.size() < 2 || p.novice.size() < 2)
        throw std::invalid_argument("parzen_fit: need at least 2 training rows per class");

    if (bandwidth < 0.0) throw std::invalid_argument("parzen_fit: bandwidth must be positive");
    if (bandwidth == 0.0) {
        // Silverman's rule on the pooled data; sigma = rms of per-dimension stds
        const double n = static_cast<double>(train.size());
        const double d = static_cast<double>(p.dim);
        double var_sum = 0.0;
        for (std::size_t j = 0; j < p.dim; ++j) {
            double s = 0.0, s2 = 0.0;
            for (const auto& row : train) {
                s += row[j];
                s2 += row[j] * row[j];
            }
            const double mu = s / n;
            var_sum += std::max(0.0, (s2 - n * mu * mu) / (n - 1.0));
        }
        const double sigma = std::sqrt(var_sum / d);
        bandwidth = sigma * std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
        if (!(bandwidth > 0.0))
            throw std::invalid_argument("parzen_fit: degenerate training data, bandwidth is zero");
    }
    p.bandwidth = bandwidth;
    return {ClassifierKind::parzen, {}, std::move(p)};
}

namespace {

double parzen_log_density(const std::vector<std::vector<double>>& pts, double h,
                          std::span<const double> q) {
    const double inv2h2 = 1.0 / (2.0 * h * h);
    double max_e = -std::numeric_limits<double>::infinity();
    std::vector<double> e(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        e[i] = -sq_distance(pts[i], q) * inv2h2;
        max_e = std::max(max_e, e[i]);
    }
    if (!std::isfinite(max_e)) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double v : e) s += std::exp(v - max_e);
    const double d = static_cast<double>(q.size());
    return max_e + std::log(s) - std::log(static_cast<double>(pts.size())) -
           d * std::log(h) - 0.5 * d * std::log(2.0 * M_PI);
}

// --- SMO -------------------------------------------------------------------

struct Smo {
    std::span<const std::vector<double>> x;
    std::vector<double> y; // +1 skilled, -1 novice
    double c;
    double tol;
    std::vector<std::vector<double>> gram;
    std::vector<double> alpha;
    std::vector<double> err; // f(x_i) - y_i, maintained incrementally
    double b = 0.0;

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha[i1], a2 = alpha[i2];
        const double y1 = y[i1], y2 = y[i2];
        const double e1 = err[i1], e2 = err[i2];
        const double s = y1 * y2;
        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        }
        if (lo >= hi) return false;
        const double k11 = gram[i1][i1], k12 = gram[i1][i2], k22 = gram[i2][i2];
        const double eta = k11 + k22 - 2.0 * k12;
        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // flat direction: evaluate the objective at both clip ends
            const double f1 = y1 * (e1 + b) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (e2 + b) - a2 * k22 - s * a1 * k12;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12)
                a2_new = lo;
            else if (obj_lo > obj_hi + 1e-12)
                a2_new = hi;
            else
                return false;
        }
        if (std::fabs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
        const double a1_new = a1 + s * (a2 - a2_new);

        const double b1 = e1 + y1 * (a1_new - a1) * k11 + y2 * (a2_new - a2) * k12 + b;
        const double b2 = e2 + y1 * (a1_new - a1) * k12 + y2 * (a2_new - a2) * k22 + b;
        double b_new;
        if (a1_new > 0.0 && a1_new < c)
            b_new = b1;
        else if (a2_new > 0.0 && a2_new < c)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        const double d1 = y1 * (a1_new - a1), d2 = y2 * (a2_new - a2), db = b - b_new;
        for (std::size_t i = 0; i < err.size(); ++i)
            err[i] += d1 * gram[i1][i] + d2 * gram[i2][i] + db;
        alpha[i1] = a1_new;
        alpha[i2] = a2_new;
        b = b_new;
        return true;
    }

    bool examine(std::size_t i2) {
        const double y2 = y[i2], a2 = alpha[i2], e2 = err[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -tol && a2 < c) || (r2 > tol && a2 > 0.0))) return false;

        // second choice: largest |E1 - E2| among non-bound multipliers
        std::size_t best = err.size();
        double best_gap = -1.0;
        for (std::size_t i = 0; i < err.size(); ++i) {
            if (alpha[i] > 0.0 && alpha[i] < c) {
                const double gap = std::fabs(err[i] - e2);
                if (gap > best_gap) {
                    best_gap = gap;
                    best = i;
                }
            }
        }
        if (best < err.size() && take_step(best, i2)) return true;
        for (std::size_t i = 0; i < err.size(); ++i)
            if (alpha[i] > 0.0 && alpha[i] < c && take_step(i, i2)) return true;
        for (std::size_t i = 0; i < err.size(); ++i)
            if (take_step(i, i2)) return true;
        return false;
    }
};

} // namespace

TrainedClassifier svm_fit(std::span<const std::vector<double>> train, std::span<const Label> labels,
                          const SvmParams& params) {
    check_training(train, labels);
    const std::size_t n = train.size();
    const std::size_t dim = train[0].size();
    bool has_skilled = false, has_novice = false;
    for (Label l : labels) (l == Label::skilled ? has_skilled : has_novice) = true;
    if (!has_skilled || !has_novice)
        throw std::invalid_argument("svm_fit: both classes required");
    if (!(params.c > 0.0)) throw std::invalid_argument("svm_fit: C must be positive");

    double gamma = params.gamma;
    if (gamma <= 0.0) {
        double s = 0.0, s2 = 0.0;
        const double cnt = static_cast<double>(n * dim);
        for (const auto& row : train)
            for (double v : row) {
                s += v;
                s2 += v * v;
            }
        const double var = std::max(s2 / cnt - (s / cnt) * (s / cnt), 1e-12);
        gamma = 1.0 / (static_cast<double>(dim) * var);
    }

    Smo smo;
    smo.x = train;
    smo.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) smo.y[i] = labels[i] == Label::skilled ? 1.0 : -1.0;
    smo.c = params.c;
    smo.tol = params.kkt_tolerance;
    smo.gram.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double kij;
            if (params.kernel == SvmKernel::rbf) {
                kij = std::exp(-gamma * sq_distance(train[i], train[j]));
            } else {
                kij = 0.0;
                for (std::size_t p = 0; p < dim; ++p) kij += train[i][p] * train[j][p];
            }
            smo.gram[i][j] = smo.gram[j][i] = kij;
        }
    }
    smo.alpha.assign(n, 0.0);
    smo.err.resize(n);
    for (std::size_t i = 0; i < n; ++i) smo.err[i] = -smo.y[i]; // f = 0 initially

    // Platt's driver: terminates only after a full pass changes nothing
    int sweeps = 0;
    bool examine_all = true;
    std::size_t changed = 0;
    while (changed > 0 || examine_all) {
        changed = 0;
        if (examine_all) {
            for (std::size_t i = 0; i < n; ++i) changed += smo.examine(i) ? 1 : 0;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                if (smo.alpha[i] > 0.0 && smo.alpha[i] < smo.c) changed += smo.examine(i) ? 1 : 0;
        }
        if (examine_all)
            examine_all = false;
        else if (changed == 0)
            examine_all = true;
        if (++sweeps > params.max_sweeps) {
            std::ostringstream msg;
            msg << "svm_fit: no convergence after " << sweeps << " sweeps (n=" << n
                << ", C=" << params.c << ", gamma=" << gamma << ")";
            throw std::runtime_error(msg.str());
        }
    }

    SvmModel m;
    m.kernel = params.kernel;
    m.gamma = gamma;
    m.c = params.c;
    m.bias = -smo.b; // decision value f(q) = sum alpha_y K(x,q) - b
    m.iterations = sweeps;
    for (std::size_t i = 0; i < n; ++i) {
        if (smo.alpha[i] > 0.0) {
            m.support.push_back(train[i]);
            m.alpha_y.push_back(smo.alpha[i] * smo.y[i]);
        }
    }
    return {ClassifierKind::svm, {}, std::move(m)};
}

double TrainedClassifier::score(std::span<const double> q) const {
    if (const auto* knn = std::get_if<KnnModel>(&model)) {
        const auto idx = k_nearest(knn->train, q, knn->k);
        int skilled = 0;
        for (std::size_t i : idx)
            if (knn->labels[i] == Label::skilled) ++skilled;
        return static_cast<double>(skilled) / static_cast<double>(knn->k);
    }
    if (const auto* fk = std::get_if<FknnModel>(&model)) {
        const auto idx = k_nearest(fk->train, q, fk->k);
        // zero distance: the query adopts that neighbor's membership exactly
        for (std::size_t i : idx)
            if (sq_distance(fk->train[i], q) == 0.0)
                return fk->labels[i] == Label::skilled ? 1.0 : 0.0;
        const double expo = 1.0 / (fk->m - 1.0);
        double wsum = 0.0, wskilled = 0.0;
        for (std::size_t i : idx) {
            const double w = std::pow(sq_distance(fk->train[i], q), -expo); // d^(-2/(m-1))
            wsum += w;
            if (fk->labels[i] == Label::skilled) wskilled += w;
        }
        return wskilled / wsum;
    }
    if (const auto* pz = std::get_if<ParzenModel>(&model)) {
        const double ls = parzen_log_density(pz->skilled, pz->bandwidth, q);
        const double ln = parzen_log_density(pz->novice, pz->bandwidth, q);
        // both class densities underflow to zero: no evidence either way
        constexpr double kLogDblMin = -708.0;
        if (ls < kLogDblMin && ln < kLogDblMin) return 0.5;
        if (ls < kLogDblMin) return 0.0;
        if (ln < kLogDblMin) return 1.0;
        return 1.0 / (1.0 + std::exp(ln - ls));
    }
    const auto& svm = std::get<SvmModel>(model);
    double f = svm.bias;
    for (std::size_t i = 0; i < svm.support.size(); ++i) {
        double kq;
        if (svm.kernel == SvmKernel::rbf) {
            kq = std::exp(-svm.gamma * sq_distance(svm.support[i], q));
        } else {
            kq = 0.0;
            for (std::size_t p = 0; p < q.size(); ++p) kq += svm.support[i][p] * q[p];
        }
        f += svm.alpha_y[i] * kq;
    }
    return f;
}

std::string TrainedClassifier::summary() const {
    std::ostringstream os;
    os << to_string(kind);
    if (const auto* knn = std::get_if<KnnModel>(&model)) {
        os << " k=" << knn->k << " stored_rows=" << knn->train.size();
    } else if (const auto* fk = std::get_if<FknnModel>(&model)) {
        os << " k=" << fk->k << " m=" << fk->m << " stored_rows=" << fk->train.size();
    } else if (const auto* pz = std::get_if<ParzenModel>(&model)) {
        os << " bandwidth=" << pz->bandwidth
           << " stored_rows=" << pz->skilled.size() + pz->novice.size();
    } else if (const auto* svm = std::get_if<SvmModel>(&model)) {
        os << " kernel=" << (svm->kernel == SvmKernel::rbf ? "rbf" : "linear")
           << " C=" << svm->c << " gamma=" << svm->gamma
           << " support_vectors=" << svm->support.size();
    }
    if (!feature_ids.empty()) {
        os << " features=";
        for (std::size_t i = 0; i < feature_ids.size(); ++i)
            os << (i ? "," : "") << feature_ids[i];
    }
    return os.str();
}

double parzen_class_density(const TrainedClassifier& clf, Label label, std::span<const double> q) {
    const auto& pz = std::get<ParzenModel>(clf.model);
    const double lg =
        parzen_log_density(label == Label::skilled ? pz.skilled : pz.novice, pz.bandwidth, q);
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

FuzzyMembership fknn_memberships(const TrainedClassifier& clf, std::span<const double> q) {
    const auto& fk = std::get<FknnModel>(clf.model);
    const auto idx = k_nearest(fk.train, q, fk.k);
    for (std::size_t i : idx)
        if (sq_distance(fk.train[i], q) == 0.0)
            return fk.labels[i] == Label::skilled ? FuzzyMembership{1.0, 0.0}
                                                  : FuzzyMembership{0.0, 1.0};
    const double expo = 1.0 / (fk.m - 1.0);
    double wsum = 0.0, ws = 0.0, wn = 0.0;
    for (std::size_t i : idx) {
        const double w = std::pow(sq_distance(fk.train[i], q), -expo);
        wsum += w;
        (fk.labels[i] == Label::skilled ? ws : wn) += w;
    }
    return {ws / wsum, wn / wsum};
}

} // namespace skillml
