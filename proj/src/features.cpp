#include "skillml/features.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "skillml/stats.hpp"

namespace skillml {

namespace {

// best-15 and best-30 markers follow the published ranking of the catalog
constexpr FeatureDefinition kCatalog[kFeatureCount] = {
    {1, "fraction of samples with x-jerk <= 0", false, false, false},
    {2, "count of force samples above 0.1 N", true, false, false},
    {3, "std(force) / std(x-velocity)", true, true, false},
    {4, "product of x/y/z velocity ranges", false, false, false},
    {5, "interquartile range of force", true, false, false},
    {6, "force second-derivative consistency metric sqrt(T^3/(2 iqr(f)^2) int af^2)", true, false, false},
    {7, "summed successive force differences / T", true, false, false},
    {8, "summed successive speed differences / (T * std(force))", true, true, true},
    {9, "time of global x-acceleration maximum / T", false, true, true},
    {10, "zero crossings of x-velocity", false, true, false},
    {11, "time of global y-acceleration minimum / T", false, true, false},
    {12, "time of global z-acceleration maximum / T", false, false, false},
    {13, "local extrema count of pitch", false, false, false},
    {14, "time of global force-second-derivative minimum / T", true, true, false},
    {15, "mean speed", false, false, false},
    {16, "std(force) / std(z-velocity)", true, true, false},
    {17, "force spectral power below 2 Hz / power at or above 2 Hz", true, true, true},
    {18, "time of global z-position maximum / T", false, false, false},
    {19, "local extrema count of force first derivative", true, false, false},
    {20, "local minima count of x-acceleration", false, true, true},
    {21, "local minima count of y-acceleration", false, false, false},
    {22, "local maxima counts of x, y, z positions summed", false, false, false},
    {23, "local extrema count of x-position", false, true, true},
    {24, "local extrema count of z-position", false, false, false},
    {25, "summed successive pitch differences / T", false, false, false},
    {26, "summed successive roll-velocity differences / T", false, false, false},
    {27, "mean(roll) * T / range of roll-velocity", false, true, false},
    {28, "local minima counts of yaw, pitch, roll summed", false, false, false},
    {29, "local extrema count of pitch (catalog duplicate of 13)", false, false, false},
    {30, "local extrema count of yaw-velocity", false, false, false},
    {31, "local extrema count of roll-velocity", false, true, true},
    {32, "(time of pitch maximum - time of pitch minimum) / T", false, true, false},
    {33, "pedal activation frequency (rising edges / T)", false, false, false},
    {34, "sum of force samples tagged R3", true, false, false},
    {35, "local extrema count of force", true, true, false},
    {36, "sum of force samples tagged R4 (beneath the tumor bulk)", true, true, false},
    {37, "force range max(f) - min(f)", true, false, false},
    {38, "std(force)", true, false, false},
    {39, "product of x/y/z interquartile ranges", false, false, false},
    {40, "force first-derivative consistency metric sqrt(T/(2 iqr(f)^2) int vf^2)", true, true, true},
    {41, "integral of acceleration magnitude (IAV)", false, false, false},
    {42, "summed successive acceleration-magnitude differences / T", false, true, false},
    {43, "force integral over the widest half-maximum run around the force peak", true, false, false},
    {44, "time of global x-acceleration minimum / T", false, true, false},
    {45, "time of global y-acceleration maximum / T", false, true, true},
    {46, "zero crossings of y-velocity", false, false, false},
    {47, "time of global z-acceleration minimum / T", false, true, true},
    {48, "time of global force-second-derivative maximum / T", true, true, false},
    {49, "maximum speed", false, false, false},
    {50, "force third-derivative smoothness metric sqrt(T^5/(2 iqr(f)^2) int jf^2)", true, true, true},
    {51, "std(force) / std(y-velocity)", true, true, true},
    {52, "local minima count of x-position", false, true, false},
    {53, "local minima count of x-velocity", false, true, true},
    {54, "1-based sample index of force maximum / index of force minimum", true, true, true},
    {55, "local extrema count of force second derivative", true, false, false},
    {56, "count of vf >= 0 samples / count of vf <= 0 samples", true, false, false},
    {57, "local minima counts of x, y, z positions summed", false, false, false},
    {58, "local extrema count of y-position", false, false, false},
    {59, "summed successive yaw differences", false, true, false},
    {60, "summed successive pitch-velocity differences / T", false, false, false},
    {61, "mean(pitch) * T / range of pitch-velocity", false, false, false},
    {62, "local maxima counts of yaw, pitch, roll summed", false, true, true},
    {63, "local extrema count of yaw", false, false, false},
    {64, "local extrema count of roll", false, true, true},
    {65, "local extrema count of pitch-velocity", false, true, false},
    {66, "summed successive pitch-jerk differences / mean pitch-jerk", false, false, false},
    {67, "(time of yaw maximum - time of yaw minimum) / T", false, false, false},
    {68, "sum of force samples tagged R1", true, false, false},
};

std::mutex g_fftw_mutex; // FFTW planner is not thread-safe

// --- segment-aware primitives ---------------------------------------------

using Segs = std::span<const std::size_t>; // seg_offsets

double trapz(std::span<const double> v, double fs, Segs off) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s) {
        for (std::size_t i = off[s]; i + 1 < off[s + 1]; ++i)
            total += 0.5 * (v[i] + v[i + 1]);
    }
    return total / fs;
}

double trapz_sq(std::span<const double> v, double fs, Segs off) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s) {
        for (std::size_t i = off[s]; i + 1 < off[s + 1]; ++i)
            total += 0.5 * (v[i] * v[i] + v[i + 1] * v[i + 1]);
    }
    return total / fs;
}

std::size_t argmax_earliest(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

std::size_t argmin_earliest(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best]) best = i;
    return best;
}

// Strict local extrema with plateau runs counted once; runs touching a
// segment boundary do not count.
void count_extrema(std::span<const double> v, Segs off, std::size_t& maxima,
                   std::size_t& minima) {
    maxima = 0;
    minima = 0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s) {
        const std::size_t lo = off[s], hi = off[s + 1];
        std::size_t i = lo;
        while (i < hi) {
            std::size_t j = i;
            while (j + 1 < hi && v[j + 1] == v[i]) ++j; // plateau [i, j]
            if (i > lo && j + 1 < hi) {
                if (v[i - 1] < v[i] && v[j + 1] < v[i]) ++maxima;
                if (v[i - 1] > v[i] && v[j + 1] > v[i]) ++minima;
            }
            i = j + 1;
        }
    }
}

std::size_t count_local_maxima(std::span<const double> v, Segs off) {
    std::size_t ma, mi;
    count_extrema(v, off, ma, mi);
    return ma;
}

std::size_t count_local_minima(std::span<const double> v, Segs off) {
    std::size_t ma, mi;
    count_extrema(v, off, ma, mi);
    return mi;
}

std::size_t count_extrema_total(std::span<const double> v, Segs off) {
    std::size_t ma, mi;
    count_extrema(v, off, ma, mi);
    return ma + mi;
}

// Sign changes; zeros adopt the preceding sign, leading zeros are skipped.
std::size_t zero_crossings(std::span<const double> v, Segs off) {
    std::size_t count = 0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s) {
        int prev = 0;
        for (std::size_t i = off[s]; i < off[s + 1]; ++i) {
            int sign = v[i] > 0.0 ? 1 : (v[i] < 0.0 ? -1 : 0);
            if (sign == 0) sign = prev;
            if (sign != 0 && prev != 0 && sign != prev) ++count;
            if (sign != 0) prev = sign;
        }
    }
    return count;
}

double telescope_sum(std::span<const double> v, Segs off) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s)
        for (std::size_t i = off[s]; i + 1 < off[s + 1]; ++i) total += v[i + 1] - v[i];
    return total;
}

std::size_t pedal_rising_edges(std::span<const std::uint8_t> pedal, Segs off) {
    std::size_t count = 0;
    for (std::size_t s = 0; s + 1 < off.size(); ++s)
        for (std::size_t i = off[s] + 1; i < off[s + 1]; ++i)
            if (pedal[i] && !pedal[i - 1]) ++count;
    return count;
}

// One-sided periodogram split at the cutoff frequency.
void spectral_power_split(std::span<const double> v, double fs, double cutoff_hz, double& low,
                          double& high) {
    const std::size_t n = v.size();
    std::vector<double> in(v.begin(), v.end());
    const std::size_t nbins = n / 2 + 1;
    std::vector<fftw_complex> out(nbins);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }
    low = 0.0;
    high = 0.0;
    for (std::size_t k = 0; k < nbins; ++k) {
        double p = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        const bool unique_bin = (k == 0) || (n % 2 == 0 && k == n / 2);
        if (!unique_bin) p *= 2.0; // fold in the conjugate bin
        const double freq = static_cast<double>(k) * fs / static_cast<double>(n);
        (freq < cutoff_hz ? low : high) += p;
    }
}

std::vector<double> diff_per_segment(std::span<const double> v, double fs, Segs off, int order) {
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t s = 0; s + 1 < off.size(); ++s) {
        auto piece = differentiate(v.subspan(off[s], off[s + 1] - off[s]), fs, order);
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
}

} // namespace

std::span<const FeatureDefinition, kFeatureCount> feature_catalog() {
    return std::span<const FeatureDefinition, kFeatureCount>(kCatalog);
}

TrialSignals derive_signals(std::span<const Trial> segments) {
    if (segments.empty()) throw std::invalid_argument("derive_signals: no segments");
    TrialSignals s;
    s.sample_rate_hz = segments[0].sample_rate_hz();
    s.seg_offsets.push_back(0);
    for (const auto& seg : segments) {
        if (seg.sample_rate_hz() != s.sample_rate_hz)
            throw std::invalid_argument("derive_signals: segment sample rates differ");
        if (seg.sample_count() < 4)
            throw std::invalid_argument("derive_signals: segment shorter than 4 samples");
        const double t0 = s.duration_s;
        const double dt = 1.0 / s.sample_rate_hz;
        for (std::size_t i = 0; i < seg.sample_count(); ++i)
            s.t.push_back(t0 + static_cast<double>(i) * dt);
        s.duration_s += seg.force.duration_s();
        auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
            dst.insert(dst.end(), src.begin(), src.end());
        };
        append(s.x, seg.position[0].samples);
        append(s.y, seg.position[1].samples);
        append(s.z, seg.position[2].samples);
        append(s.roll, seg.angles[0].samples);
        append(s.pitch, seg.angles[1].samples);
        append(s.yaw, seg.angles[2].samples);
        append(s.f, seg.force.samples);
        s.pedal.insert(s.pedal.end(), seg.pedal.begin(), seg.pedal.end());
        s.region.insert(s.region.end(), seg.region.begin(), seg.region.end());
        s.seg_offsets.push_back(s.f.size());
    }

    const double fs = s.sample_rate_hz;
    const Segs off(s.seg_offsets);
    s.vx = diff_per_segment(s.x, fs, off, 1);
    s.vy = diff_per_segment(s.y, fs, off, 1);
    s.vz = diff_per_segment(s.z, fs, off, 1);
    s.ax = diff_per_segment(s.vx, fs, off, 1);
    s.ay = diff_per_segment(s.vy, fs, off, 1);
    s.az = diff_per_segment(s.vz, fs, off, 1);
    s.jx = diff_per_segment(s.ax, fs, off, 1);
    s.jy = diff_per_segment(s.ay, fs, off, 1);
    s.jz = diff_per_segment(s.az, fs, off, 1);
    s.vroll = diff_per_segment(s.roll, fs, off, 1);
    s.aroll = diff_per_segment(s.vroll, fs, off, 1);
    s.jroll = diff_per_segment(s.aroll, fs, off, 1);
    s.vpitch = diff_per_segment(s.pitch, fs, off, 1);
    s.apitch = diff_per_segment(s.vpitch, fs, off, 1);
    s.jpitch = diff_per_segment(s.apitch, fs, off, 1);
    s.vyaw = diff_per_segment(s.yaw, fs, off, 1);
    s.ayaw = diff_per_segment(s.vyaw, fs, off, 1);
    s.jyaw = diff_per_segment(s.ayaw, fs, off, 1);
    s.vf = diff_per_segment(s.f, fs, off, 1);
    s.af = diff_per_segment(s.vf, fs, off, 1);
    s.jf = diff_per_segment(s.af, fs, off, 1);

    const std::size_t n = s.f.size();
    s.speed.resize(n);
    s.accel_mag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.speed[i] =
            std::sqrt(s.vx[i] * s.vx[i] + s.vy[i] * s.vy[i] + s.vz[i] * s.vz[i]);
        s.accel_mag[i] =
            std::sqrt(s.ax[i] * s.ax[i] + s.ay[i] * s.ay[i] + s.az[i] * s.az[i]);
    }
    return s;
}

TrialSignals derive_signals(const Trial& trial) {
    return derive_signals(std::span<const Trial>(&trial, 1));
}

double iav(const TrialSignals& s) {
    return trapz(s.accel_mag, s.sample_rate_hz, Segs(s.seg_offsets));
}

double iav(const Trial& trial) { return iav(derive_signals(trial)); }

double iav(const Trial& trial, std::size_t first, std::size_t last) {
    TrialSignals s = derive_signals(trial);
    if (first > last || last >= s.size())
        throw std::invalid_argument("iav: window outside trial");
    double total = 0.0;
    for (std::size_t i = first; i < last; ++i)
        total += 0.5 * (s.accel_mag[i] + s.accel_mag[i + 1]);
    return total / s.sample_rate_hz;
}

MetricResult normalized_jerk(const TrialSignals& s) {
    double path = 0.0;
    for (std::size_t seg = 0; seg + 1 < s.seg_offsets.size(); ++seg) {
        for (std::size_t i = s.seg_offsets[seg]; i + 1 < s.seg_offsets[seg + 1]; ++i) {
            const double dx = s.x[i + 1] - s.x[i];
            const double dy = s.y[i + 1] - s.y[i];
            const double dz = s.z[i + 1] - s.z[i];
            path += std::sqrt(dx * dx + dy * dy + dz * dz);
        }
    }
    if (path == 0.0) return {0.0, true};
    std::vector<double> j2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        j2[i] = s.jx[i] * s.jx[i] + s.jy[i] * s.jy[i] + s.jz[i] * s.jz[i];
    const double integral = trapz(j2, s.sample_rate_hz, Segs(s.seg_offsets));
    const double T = s.duration_s;
    return {std::sqrt(T * T * T * T * T / (2.0 * path * path) * integral), false};
}

MetricResult normalized_jerk(const Trial& trial) { return normalized_jerk(derive_signals(trial)); }

ForceConsistency force_consistency_metrics(const TrialSignals& s) {
    ForceConsistency r;
    const double fiqr = iqr(s.f);
    if (fiqr == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double T = s.duration_s;
    const Segs off(s.seg_offsets);
    const double i1 = trapz_sq(s.vf, s.sample_rate_hz, off);
    const double i2 = trapz_sq(s.af, s.sample_rate_hz, off);
    const double i3 = trapz_sq(s.jf, s.sample_rate_hz, off);
    const double denom = 2.0 * fiqr * fiqr;
    r.df_metric = std::sqrt(T / denom * i1);
    r.d2f_metric = std::sqrt(T * T * T / denom * i2);
    r.d3f_metric = std::sqrt(T * T * T * T * T / denom * i3);
    return r;
}

ForceConsistency force_consistency_metrics(const Trial& trial) {
    return force_consistency_metrics(derive_signals(trial));
}

MetricResult movement_arrest_period_ratio(const Trial& trial) {
    TrialSignals s = derive_signals(trial);
    const double vmax = *std::max_element(s.speed.begin(), s.speed.end());
    if (vmax == 0.0) return {1.0, true};
    std::size_t arrested = 0;
    for (double v : s.speed)
        if (v < 0.1 * vmax) ++arrested;
    return {static_cast<double>(arrested) / static_cast<double>(s.size()), false};
}

FeatureVector extract_features(const TrialSignals& s) {
    FeatureVector fv;
    auto& out = fv.values;
    const std::size_t n = s.size();
    const double nd = static_cast<double>(n);
    const double T = s.duration_s;
    const Segs off(s.seg_offsets);

    // resolves x/y to 0 with a flag instead of dividing by zero
    auto ratio = [&fv](int id, double num, double den) {
        if (den == 0.0) {
            fv.degenerate.set(id - 1);
            return 0.0;
        }
        return num / den;
    };
    auto time_frac_max = [&](std::span<const double> v) {
        return s.t[argmax_earliest(v)] / T;
    };
    auto time_frac_min = [&](std::span<const double> v) {
        return s.t[argmin_earliest(v)] / T;
    };
    auto range = [](std::span<const double> v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };

    std::size_t below = 0;
    for (double j : s.jx)
        if (j <= 0.0) ++below;
    out[0] = static_cast<double>(below) / nd; // 1

    std::size_t above01 = 0;
    for (double v : s.f)
        if (v > 0.1) ++above01;
    out[1] = static_cast<double>(above01); // 2

    const double std_f = stddev(s.f);
    out[2] = ratio(3, std_f, stddev(s.vx));                                  // 3
    out[3] = range(s.vx) * range(s.vy) * range(s.vz);                        // 4
    const double f_iqr = iqr(s.f);
    out[4] = f_iqr;                                                          // 5
    const ForceConsistency fc = force_consistency_metrics(s);
    if (fc.degenerate) {
        fv.degenerate.set(5);
        fv.degenerate.set(39);
        fv.degenerate.set(49);
    }
    out[5] = fc.d2f_metric;                                                  // 6
    out[6] = telescope_sum(s.f, off) / T;                                    // 7
    out[7] = ratio(8, telescope_sum(s.speed, off), T * std_f);               // 8
    out[8] = time_frac_max(s.ax);                                            // 9
    out[9] = static_cast<double>(zero_crossings(s.vx, off));                 // 10
    out[10] = time_frac_min(s.ay);                                           // 11
    out[11] = time_frac_max(s.az);                                           // 12
    out[12] = static_cast<double>(count_extrema_total(s.pitch, off));        // 13
    out[13] = time_frac_min(s.af);                                           // 14
    out[14] = mean(s.speed);                                                 // 15
    out[15] = ratio(16, std_f, stddev(s.vz));                                // 16

    double low_p = 0.0, high_p = 0.0;                                        // 17
    spectral_power_split(s.f, s.sample_rate_hz, kLowHighCutoffHz, low_p, high_p);
    if (high_p < 1e-12 * (low_p + high_p) || high_p == 0.0) {
        fv.degenerate.set(16);
        out[16] = 0.0;
    } else {
        out[16] = low_p / high_p;
    }

    out[17] = time_frac_max(s.z);                                            // 18
    out[18] = static_cast<double>(count_extrema_total(s.vf, off));           // 19
    out[19] = static_cast<double>(count_local_minima(s.ax, off));            // 20
    out[20] = static_cast<double>(count_local_minima(s.ay, off));            // 21
    out[21] = static_cast<double>(count_local_maxima(s.x, off) +
                                  count_local_maxima(s.y, off) +
                                  count_local_maxima(s.z, off));             // 22
    out[22] = static_cast<double>(count_extrema_total(s.x, off));            // 23
    out[23] = static_cast<double>(count_extrema_total(s.z, off));            // 24
    out[24] = telescope_sum(s.pitch, off) / T;                               // 25
    out[25] = telescope_sum(s.vroll, off) / T;                               // 26
    out[26] = ratio(27, mean(s.roll) * T, range(s.vroll));                   // 27
    out[27] = static_cast<double>(count_local_minima(s.yaw, off) +
                                  count_local_minima(s.pitch, off) +
                                  count_local_minima(s.roll, off));          // 28
    out[28] = out[12];                                                       // 29
    out[29] = static_cast<double>(count_extrema_total(s.vyaw, off));         // 30
    out[30] = static_cast<double>(count_extrema_total(s.vroll, off));        // 31
    out[31] = (s.t[argmax_earliest(s.pitch)] - s.t[argmin_earliest(s.pitch)]) / T; // 32
    out[32] = static_cast<double>(pedal_rising_edges(s.pedal, off)) / T;     // 33

    double sum_r1 = 0.0, sum_r3 = 0.0, sum_r4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (s.region[i] == Region::r1) sum_r1 += s.f[i];
        if (s.region[i] == Region::r3) sum_r3 += s.f[i];
        if (s.region[i] == Region::r4) sum_r4 += s.f[i];
    }
    out[33] = sum_r3;                                                        // 34
    out[34] = static_cast<double>(count_extrema_total(s.f, off));            // 35
    out[35] = sum_r4;                                                        // 36
    out[36] = range(s.f);                                                    // 37
    out[37] = std_f;                                                         // 38
    out[38] = iqr(s.x) * iqr(s.y) * iqr(s.z);                                // 39
    out[39] = fc.df_metric;                                                  // 40
    out[40] = iav(s);                                                        // 41
    out[41] = telescope_sum(s.accel_mag, off) / T;                           // 42

    { // 43: widest run around the force peak with f >= max/2, within one segment
        const std::size_t peak = argmax_earliest(s.f);
        const double threshold = s.f[peak] / 2.0;
        std::size_t seg = 0;
        while (s.seg_offsets[seg + 1] <= peak) ++seg;
        std::size_t lo = peak, hi = peak;
        while (lo > s.seg_offsets[seg] && s.f[lo - 1] >= threshold) --lo;
        while (hi + 1 < s.seg_offsets[seg + 1] && s.f[hi + 1] >= threshold) ++hi;
        double integral = 0.0;
        for (std::size_t i = lo; i < hi; ++i) integral += 0.5 * (s.f[i] + s.f[i + 1]);
        out[42] = integral / s.sample_rate_hz;
    }

    out[43] = time_frac_min(s.ax);                                           // 44
    out[44] = time_frac_max(s.ay);                                           // 45
    out[45] = static_cast<double>(zero_crossings(s.vy, off));                // 46
    out[46] = time_frac_min(s.az);                                           // 47
    out[47] = time_frac_max(s.af);                                           // 48
    out[48] = *std::max_element(s.speed.begin(), s.speed.end());             // 49
    out[49] = fc.d3f_metric;                                                 // 50
    out[50] = ratio(51, std_f, stddev(s.vy));                                // 51
    out[51] = static_cast<double>(count_local_minima(s.x, off));             // 52
    out[52] = static_cast<double>(count_local_minima(s.vx, off));            // 53
    out[53] = static_cast<double>(argmax_earliest(s.f) + 1) /
              static_cast<double>(argmin_earliest(s.f) + 1);                 // 54
    out[54] = static_cast<double>(count_extrema_total(s.af, off));           // 55

    std::size_t vf_pos = 0, vf_neg = 0;                                      // 56
    for (double v : s.vf) {
        if (v >= 0.0) ++vf_pos;
        if (v <= 0.0) ++vf_neg;
    }
    out[55] = ratio(56, static_cast<double>(vf_pos), static_cast<double>(vf_neg));

    out[56] = static_cast<double>(count_local_minima(s.x, off) +
                                  count_local_minima(s.y, off) +
                                  count_local_minima(s.z, off));             // 57
    out[57] = static_cast<double>(count_extrema_total(s.y, off));            // 58
    out[58] = telescope_sum(s.yaw, off);                                     // 59
    out[59] = telescope_sum(s.vpitch, off) / T;                              // 60
    out[60] = ratio(61, mean(s.pitch) * T, range(s.vpitch));                 // 61
    out[61] = static_cast<double>(count_local_maxima(s.yaw, off) +
                                  count_local_maxima(s.pitch, off) +
                                  count_local_maxima(s.roll, off));          // 62
    out[62] = static_cast<double>(count_extrema_total(s.yaw, off));          // 63
    out[63] = static_cast<double>(count_extrema_total(s.roll, off));         // 64
    out[64] = static_cast<double>(count_extrema_total(s.vpitch, off));       // 65
    out[65] = ratio(66, telescope_sum(s.jpitch, off), mean(s.jpitch));       // 66
    out[66] = (s.t[argmax_earliest(s.yaw)] - s.t[argmin_earliest(s.yaw)]) / T; // 67
    out[67] = sum_r1;                                                        // 68

    for (int i = 0; i < kFeatureCount; ++i) {
        if (!std::isfinite(out[i]))
            throw std::runtime_error("extract_features: non-finite value for feature " +
                                     std::to_string(i + 1));
    }
    return fv;
}

FeatureVector extract_features(std::span<const Trial> segments) {
    FeatureVector fv = extract_features(derive_signals(segments));
    const Trial& first = segments[0];
    fv.subject_id = first.subject_id;
    fv.scenario_id = first.scenario_id;
    fv.label = first.label;
    fv.trial_id = segments.size() == 1
                      ? first.id
                      : first.subject_id + "_sc" + std::to_string(first.scenario_id);
    return fv;
}

FeatureVector extract_features(const Trial& trial) {
    return extract_features(std::span<const Trial>(&trial, 1));
}

FeatureMatrix normalize(const FeatureMatrix& matrix, std::span<const std::size_t> training_rows) {
    if (training_rows.empty()) throw std::invalid_argument("normalize: empty training set");
    for (std::size_t r : training_rows)
        if (r >= matrix.rows.size())
            throw std::invalid_argument("normalize: training row index out of range");

    FeatureMatrix out = matrix;
    out.normalized = true;
    out.normalization_constants.assign(kFeatureCount, 0.0);
    for (int j = 0; j < kFeatureCount; ++j) {
        double m = 0.0;
        for (std::size_t r : training_rows)
            m = std::max(m, std::fabs(matrix.rows[r].values[j]));
        out.normalization_constants[j] = m;
        for (auto& row : out.rows)
            row.values[j] = m == 0.0 ? 1.0 : std::exp(-row.values[j] / m);
    }
    return out;
}

} // namespace skillml
