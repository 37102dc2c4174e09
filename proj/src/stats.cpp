#include "skillml/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace skillml {

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        const double d = x - m;
        s += d * d;
    }
    return s / static_cast<double>(n - 1);
}

double stddev(std::span<const double> v) { return std::sqrt(variance(v)); }

double quantile(std::span<const double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const double idx = p * static_cast<double>(s.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
}

double iqr(std::span<const double> v) { return quantile(v, 0.75) - quantile(v, 0.25); }

namespace {

double two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    if (df <= 0.0) return 1.0;
    boost::math::students_t dist(df);
    const double tail = boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return std::min(1.0, 2.0 * tail);
}

} // namespace

TTestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_ttest: need at least 2 samples per group");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double va = variance(a), vb = variance(b);
    TTestResult r;
    const double se2 = va / na + vb / nb;
    if (se2 == 0.0) {
        // both groups constant: identical means are uninformative by convention
        r.degenerate = true;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = std::numeric_limits<double>::infinity() * (ma > mb ? 1.0 : -1.0);
            r.p = 0.0;
        }
        r.df = na + nb - 2.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    const double num = se2 * se2;
    const double den = (va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0);
    r.df = den > 0.0 ? num / den : na + nb - 2.0;
    r.p = two_sided_p(r.t, r.df);
    return r;
}

TTestResult student_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("student_ttest: need at least 2 samples per group");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double va = variance(a), vb = variance(b);
    TTestResult r;
    r.df = na + nb - 2.0;
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / r.df;
    if (sp2 == 0.0) {
        r.degenerate = true;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = std::numeric_limits<double>::infinity() * (ma > mb ? 1.0 : -1.0);
            r.p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
    r.p = two_sided_p(r.t, r.df);
    return r;
}

} // namespace skillml
