#pragma once

#include <span>
#include <vector>

namespace skillml {

double mean(std::span<const double> v);
// sample variance, n-1 denominator; 0 for n < 2
double variance(std::span<const double> v);
double stddev(std::span<const double> v);

// quantile with linear interpolation between order statistics
// (R type 7: index (n-1)*p). v need not be sorted.
double quantile(std::span<const double> v, double p);
double iqr(std::span<const double> v);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;       // two-sided
    bool degenerate = false; // both groups constant
};

// Welch's unequal-variance two-sample t-test (two-sided).
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b);
// Student's pooled-variance variant.
TTestResult student_ttest(std::span<const double> a, std::span<const double> b);

} // namespace skillml
