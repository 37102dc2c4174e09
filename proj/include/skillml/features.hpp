#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "skillml/signal.hpp"

namespace skillml {

inline constexpr int kFeatureCount = 68;

// Static description of one catalog entry. Feature ids are 1-based catalog
// row numbers; best15 implies best30.
struct FeatureDefinition {
    int id;
    const char* description;
    bool force_based;
    bool best30;
    bool best15;
};

std::span<const FeatureDefinition, kFeatureCount> feature_catalog();

// Derived signals of one logical trial, possibly concatenated from several
// tumor segments. Derivatives are computed per segment so no stencil crosses
// a rest break; seg_offsets holds segment start indices plus the total count.
struct TrialSignals {
    double sample_rate_hz = 0.0;
    double duration_s = 0.0;                 // summed segment durations
    std::vector<std::size_t> seg_offsets;    // size = segments + 1
    std::vector<double> t;                   // concatenated task clock

    std::vector<double> x, y, z;
    std::vector<double> vx, vy, vz, ax, ay, az, jx, jy, jz;
    std::vector<double> roll, pitch, yaw;
    std::vector<double> vroll, aroll, jroll, vpitch, apitch, jpitch, vyaw, ayaw, jyaw;
    std::vector<double> f, vf, af, jf;
    std::vector<double> speed, accel_mag;
    std::vector<std::uint8_t> pedal;
    std::vector<Region> region;

    std::size_t size() const { return f.size(); }
    std::size_t segments() const { return seg_offsets.size() - 1; }
};

TrialSignals derive_signals(std::span<const Trial> segments);
TrialSignals derive_signals(const Trial& trial);

struct FeatureVector {
    std::string trial_id;
    std::string subject_id;
    int scenario_id = 0;
    Label label = Label::novice;
    std::array<double, kFeatureCount> values{};
    std::bitset<kFeatureCount> degenerate; // per-feature degenerate-rule flag
};

struct FeatureMatrix {
    std::vector<FeatureVector> rows;
    bool normalized = false;
    // per-feature training-set max |x|, recorded when normalized; a value of 0
    // marks a constant-zero feature whose cells all map to 1
    std::vector<double> normalization_constants;

    std::size_t size() const { return rows.size(); }
};

// --- Named metrics ---------------------------------------------------------

// Integral of the acceleration magnitude over the task (trapezoidal).
double iav(const Trial& trial);
double iav(const TrialSignals& s);
// Integral restricted to the sample window [first, last] of a single-segment
// trial; windows that share an endpoint tile the full integral exactly.
double iav(const Trial& trial, std::size_t first, std::size_t last);

struct MetricResult {
    double value = 0.0;
    bool degenerate = false;
};

// Dimensionless jerk metric sqrt(T^5/(2*Am^2) * integral of |j|^2), Am = total
// path length. Zero path length degenerates to 0.
MetricResult normalized_jerk(const Trial& trial);
MetricResult normalized_jerk(const TrialSignals& s);

struct ForceConsistency {
    double df_metric = 0.0;   // sqrt(T  /(2*iqr(f)^2) * integral (df/dt)^2)
    double d2f_metric = 0.0;  // sqrt(T^3/(2*iqr(f)^2) * integral (d2f/dt2)^2)
    double d3f_metric = 0.0;  // sqrt(T^5/(2*iqr(f)^2) * integral (d3f/dt3)^2)
    bool degenerate = false;  // iqr(f) == 0
};

ForceConsistency force_consistency_metrics(const Trial& trial);
ForceConsistency force_consistency_metrics(const TrialSignals& s);

// Fraction of samples with speed below 10% of peak speed; 1 (degenerate) for
// a stationary tool.
MetricResult movement_arrest_period_ratio(const Trial& trial);

// --- Catalog extraction ----------------------------------------------------

FeatureVector extract_features(const Trial& trial);
// Scenario-level extraction over a subject's segments (all must share
// subject, scenario, rate). Segment order follows the span.
FeatureVector extract_features(std::span<const Trial> segments);
FeatureVector extract_features(const TrialSignals& s);

// Exponential normalization: per feature j, M_j = max |x_ij| over training
// rows; every cell maps to exp(-x_ij / M_j). M_j = 0 maps the whole column
// to 1. Constants are recorded on the result for reuse on held-out rows.
FeatureMatrix normalize(const FeatureMatrix& matrix, std::span<const std::size_t> training_rows);

// Frequency cutoff separating the low band of feature 17, Hz.
inline constexpr double kLowHighCutoffHz = 2.0;

} // namespace skillml
