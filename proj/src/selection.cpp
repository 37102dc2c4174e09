#include "skillml/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skillml/stats.hpp"

namespace skillml {

namespace {

struct ClassSplit {
    std::vector<std::size_t> skilled;
    std::vector<std::size_t> novice;
};

ClassSplit split_rows(const FeatureMatrix& m) {
    ClassSplit s;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        (m.rows[i].label == Label::skilled ? s.skilled : s.novice).push_back(i);
    return s;
}

std::vector<double> column(const FeatureMatrix& m, const std::vector<std::size_t>& rows, int j) {
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = m.rows[rows[i]].values[j];
    return v;
}

// Scatter statistics shared by every subset evaluation of one matrix.
struct FisherContext {
    std::size_t n1 = 0, n2 = 0;
    std::vector<double> mean_diff;        // mu_skilled - mu_novice
    std::vector<std::vector<double>> sw;  // pooled within-class scatter
};

FisherContext make_fisher_context(const FeatureMatrix& m) {
    const ClassSplit cs = split_rows(m);
    if (cs.skilled.empty() || cs.novice.empty())
        throw std::invalid_argument("fisher_score: both classes required");
    const int d = kFeatureCount;
    FisherContext ctx;
    ctx.n1 = cs.skilled.size();
    ctx.n2 = cs.novice.size();
    std::vector<double> mu1(d, 0.0), mu2(d, 0.0);
    for (std::size_t r : cs.skilled)
        for (int j = 0; j < d; ++j) mu1[j] += m.rows[r].values[j];
    for (std::size_t r : cs.novice)
        for (int j = 0; j < d; ++j) mu2[j] += m.rows[r].values[j];
    for (int j = 0; j < d; ++j) {
        mu1[j] /= static_cast<double>(ctx.n1);
        mu2[j] /= static_cast<double>(ctx.n2);
    }
    ctx.mean_diff.resize(d);
    for (int j = 0; j < d; ++j) ctx.mean_diff[j] = mu1[j] - mu2[j];

    ctx.sw.assign(d, std::vector<double>(d, 0.0));
    auto accumulate = [&](const std::vector<std::size_t>& rows, const std::vector<double>& mu) {
        std::vector<double> c(d);
        for (std::size_t r : rows) {
            for (int j = 0; j < d; ++j) c[j] = m.rows[r].values[j] - mu[j];
            for (int j = 0; j < d; ++j)
                for (int k = j; k < d; ++k) ctx.sw[j][k] += c[j] * c[k];
        }
    };
    accumulate(cs.skilled, mu1);
    accumulate(cs.novice, mu2);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < j; ++k) ctx.sw[j][k] = ctx.sw[k][j];
    return ctx;
}

// J(S) = (n1 n2 / n) * dS' (SW_S + ridge I)^-1 dS via Cholesky on the subset.
double fisher_subset(const FisherContext& ctx, std::span<const int> ids) {
    const int k = static_cast<int>(ids.size());
    std::vector<double> a(static_cast<std::size_t>(k) * k);
    std::vector<double> dvec(k);
    for (int r = 0; r < k; ++r) {
        const int jr = ids[r] - 1;
        dvec[r] = ctx.mean_diff[jr];
        for (int c = 0; c < k; ++c) a[r * k + c] = ctx.sw[jr][ids[c] - 1];
        a[r * k + r] += kFisherRidge;
    }
    // in-place Cholesky a = L L'
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (int p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("fisher_score: scatter not positive definite");
                a[i * k + i] = std::sqrt(s);
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
    }
    // solve L y = d, L' u = y
    std::vector<double> y(k);
    for (int i = 0; i < k; ++i) {
        double s = dvec[i];
        for (int p = 0; p < i; ++p) s -= a[i * k + p] * y[p];
        y[i] = s / a[i * k + i];
    }
    std::vector<double> u(k);
    for (int i = k - 1; i >= 0; --i) {
        double s = y[i];
        for (int p = i + 1; p < k; ++p) s -= a[p * k + i] * u[p];
        u[i] = s / a[i * k + i];
    }
    double quad = 0.0;
    for (int i = 0; i < k; ++i) quad += dvec[i] * u[i];
    const double n1 = static_cast<double>(ctx.n1), n2 = static_cast<double>(ctx.n2);
    return n1 * n2 / (n1 + n2) * quad;
}

} // namespace

SelectionResult ttest_filter(const FeatureMatrix& matrix, double alpha, TTestVariant variant) {
    if (!(alpha > 0.0 && alpha < 1.0) && alpha != 1.0)
        throw std::invalid_argument("ttest_filter: alpha outside (0,1]");
    const ClassSplit cs = split_rows(matrix);
    if (cs.skilled.size() < 2 || cs.novice.size() < 2)
        throw std::invalid_argument("ttest_filter: need at least 2 rows per class");

    SelectionResult r;
    r.alpha = alpha;
    r.p_values.resize(kFeatureCount);
    for (int j = 0; j < kFeatureCount; ++j) {
        const auto a = column(matrix, cs.skilled, j);
        const auto b = column(matrix, cs.novice, j);
        TTestResult t = variant == TTestVariant::welch ? welch_ttest(a, b) : student_ttest(a, b);
        if (t.degenerate && t.p == 1.0) {
            r.p_values[j] = 1.0;
            r.degenerate_ids.push_back(j + 1);
        } else {
            r.p_values[j] = t.p;
        }
        if (r.p_values[j] < alpha) r.filtered_ids.push_back(j + 1);
    }
    return r;
}

double fisher_score(const FeatureMatrix& matrix, std::span<const int> feature_ids) {
    return fisher_subset(make_fisher_context(matrix), feature_ids);
}

SelectionResult forward_select(const FeatureMatrix& matrix, int k, std::span<const int> candidates,
                               SelectionResult base) {
    if (k < 0 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("forward_select: k exceeds candidate pool");
    const FisherContext ctx = make_fisher_context(matrix);

    std::vector<int> pool(candidates.begin(), candidates.end());
    std::sort(pool.begin(), pool.end()); // id tie-break independent of input order
    SelectionResult r = std::move(base);
    r.forward_ranking.clear();
    r.criterion_trace.clear();
    std::vector<int> selected;
    selected.reserve(k);
    for (int step = 0; step < k; ++step) {
        double best_score = -1.0;
        std::size_t best_pos = pool.size();
        selected.push_back(0);
        for (std::size_t c = 0; c < pool.size(); ++c) {
            selected.back() = pool[c];
            const double score = fisher_subset(ctx, selected);
            if (score > best_score) {
                best_score = score;
                best_pos = c;
            }
        }
        selected.back() = pool[best_pos];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_pos));
        r.forward_ranking.push_back(selected.back());
        r.criterion_trace.push_back(best_score);
    }
    return r;
}

PremierResult premier_subsets(const FeatureMatrix& matrix, double alpha, TTestVariant variant) {
    PremierResult pr;
    SelectionResult filter = ttest_filter(matrix, alpha, variant);
    const int max_size = kPremierSizes[std::size(kPremierSizes) - 1];
    const int k = std::min<int>(max_size, static_cast<int>(filter.filtered_ids.size()));
    pr.truncated = k < max_size;
    const std::vector<int> candidates = filter.filtered_ids;
    pr.selection = forward_select(matrix, k, candidates, std::move(filter));
    for (int size : kPremierSizes) {
        if (size > k) break;
        pr.subsets[size] = std::vector<int>(pr.selection.forward_ranking.begin(),
                                            pr.selection.forward_ranking.begin() + size);
    }
    return pr;
}

} // namespace skillml
