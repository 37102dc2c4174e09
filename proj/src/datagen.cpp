#include "skillml/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "skillml/rng.hpp"

namespace skillml {

namespace {

// workspace semi-axes, mm (echoes the ellipsoidal tumor geometry)
constexpr double kAxisX = 25.0, kAxisY = 18.0, kAxisZ = 12.0;

double minjerk(double u) { // 0 -> 1, zero velocity/acceleration at both ends
    u = std::clamp(u, 0.0, 1.0);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double bump(double u) { // 0 -> 1 -> 0, minimum-jerk out and back
    return u < 0.5 ? minjerk(2.0 * u) : minjerk(2.0 - 2.0 * u);
}

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 random_workspace_point(Rng& rng) {
    for (;;) {
        Vec3 p{rng.uniform(-kAxisX, kAxisX), rng.uniform(-kAxisY, kAxisY),
               rng.uniform(-kAxisZ, kAxisZ)};
        const double rho = std::sqrt((p.x / kAxisX) * (p.x / kAxisX) +
                                     (p.y / kAxisY) * (p.y / kAxisY) +
                                     (p.z / kAxisZ) * (p.z / kAxisZ));
        if (rho <= 0.85) return p;
    }
}

Vec3 random_unit(Rng& rng) {
    for (;;) {
        Vec3 v{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0,
               2.0 * rng.uniform01() - 1.0};
        const double n2 = v.x * v.x + v.y * v.y + v.z * v.z;
        if (n2 > 1e-4 && n2 <= 1.0) {
            const double inv = 1.0 / std::sqrt(n2);
            return {v.x * inv, v.y * inv, v.z * inv};
        }
    }
}

// two passes of a centered 3-sample moving average
void smooth(std::vector<double>& v) {
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double a = v[i > 0 ? i - 1 : 0];
            const double c = v[i + 1 < v.size() ? i + 1 : v.size() - 1];
            out[i] = (a + v[i] + c) / 3.0;
        }
        v.swap(out);
    }
}

std::vector<double> smoothed_noise(std::size_t n, double sigma, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = sigma * rng.gaussian();
    smooth(v);
    return v;
}

struct Stroke {
    double t0, duration;
    Vec3 from, to;
};

Region region_for(const Vec3& p) {
    if (p.z < -0.5 * kAxisZ) return Region::r4; // beneath the bulk
    const double rho = std::sqrt((p.x / kAxisX) * (p.x / kAxisX) +
                                 (p.y / kAxisY) * (p.y / kAxisY) +
                                 (p.z / kAxisZ) * (p.z / kAxisZ));
    if (rho < 0.4) return Region::r1;
    if (rho < 0.7) return Region::r2;
    if (rho <= 1.05) return Region::r3;
    return Region::background;
}

Trial make_segment(const GeneratorConfig& cfg, Label label, int subject_idx, int scenario_id,
                   int tumor_id) {
    const double fs = cfg.sample_rate_hz;
    const double duration = cfg.segment_duration_s;
    const std::size_t n = static_cast<std::size_t>(std::llround(duration * fs)) + 1;
    const double dt = 1.0 / fs;
    const double delta = cfg.delta;
    const bool novice = label == Label::novice;

    Rng base(mix_seed(cfg.seed, 0xBA5Eu, static_cast<std::uint64_t>(subject_idx),
                      static_cast<std::uint64_t>(scenario_id),
                      static_cast<std::uint64_t>(tumor_id)));
    Rng perturb(mix_seed(cfg.seed, 0x0DDu, static_cast<std::uint64_t>(subject_idx),
                         static_cast<std::uint64_t>(scenario_id),
                         static_cast<std::uint64_t>(tumor_id)));

    // tool-path strokes
    std::vector<Stroke> strokes;
    {
        double t = 0.0;
        Vec3 at = random_workspace_point(base);
        while (t < duration) {
            Stroke s;
            s.t0 = t;
            s.duration = base.uniform(0.45, 0.95);
            s.from = at;
            s.to = random_workspace_point(base);
            at = s.to;
            t += s.duration;
            strokes.push_back(s);
        }
    }

    std::vector<double> x(n), y(n), z(n);
    {
        std::size_t si = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            while (si + 1 < strokes.size() && t >= strokes[si].t0 + strokes[si].duration) ++si;
            const Stroke& s = strokes[si];
            const double u = minjerk((t - s.t0) / s.duration);
            x[i] = s.from.x + (s.to.x - s.from.x) * u;
            y[i] = s.from.y + (s.to.y - s.from.y) * u;
            z[i] = s.from.z + (s.to.z - s.from.z) * u;
        }
    }

    // shared sensor-noise floor keeps derivative features off the precision floor
    {
        auto nx = smoothed_noise(n, 0.02, base);
        auto ny = smoothed_noise(n, 0.02, base);
        auto nz = smoothed_noise(n, 0.02, base);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += nx[i];
            y[i] += ny[i];
            z[i] += nz[i];
        }
    }

    if (novice && delta > 0.0) {
        if (cfg.perturb_jitter) {
            auto jx = smoothed_noise(n, 0.12 * delta, perturb);
            auto jy = smoothed_noise(n, 0.12 * delta, perturb);
            auto jz = smoothed_noise(n, 0.12 * delta, perturb);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += jx[i];
                y[i] += jy[i];
                z[i] += jz[i];
            }
        }
        if (cfg.perturb_submovements) {
            const int extras = perturb.poisson(0.3 * delta * static_cast<double>(strokes.size()));
            for (int e = 0; e < extras; ++e) {
                const double tc = perturb.uniform(0.0, duration);
                const double dur = perturb.uniform(0.12, 0.35);
                const double amp = perturb.uniform(0.6, 2.0);
                const Vec3 dir = random_unit(perturb);
                const std::size_t i0 =
                    static_cast<std::size_t>(std::max(0.0, (tc - dur / 2) * fs));
                const std::size_t i1 =
                    std::min<std::size_t>(n - 1, static_cast<std::size_t>((tc + dur / 2) * fs));
                for (std::size_t i = i0; i <= i1; ++i) {
                    const double u =
                        (static_cast<double>(i) * dt - (tc - dur / 2)) / dur;
                    const double b = amp * bump(u);
                    x[i] += dir.x * b;
                    y[i] += dir.y * b;
                    z[i] += dir.z * b;
                }
            }
        }
    }

    // orientation: slow level-to-level transitions per angle
    auto make_angle = [&](Rng& rng_angles) {
        std::vector<double> a(n);
        double t = 0.0, level = rng_angles.uniform(-0.35, 0.35);
        double prev = level;
        std::size_t i = 0;
        while (t < duration + dt) {
            const double dur = rng_angles.uniform(0.8, 1.6);
            const double next = rng_angles.uniform(-0.35, 0.35);
            const std::size_t end =
                std::min<std::size_t>(n, static_cast<std::size_t>((t + dur) * fs) + 1);
            for (; i < end; ++i) {
                const double u = (static_cast<double>(i) * dt - t) / dur;
                a[i] = prev + (next - prev) * minjerk(u);
            }
            prev = next;
            t += dur;
            if (i >= n) break;
        }
        auto floor_noise = smoothed_noise(n, 3e-4, rng_angles);
        for (std::size_t s = 0; s < n; ++s) a[s] += floor_noise[s];
        return a;
    };
    std::vector<double> roll = make_angle(base);
    std::vector<double> pitch = make_angle(base);
    std::vector<double> yaw = make_angle(base);
    if (novice && delta > 0.0 && cfg.perturb_jitter) {
        auto jr = smoothed_noise(n, 2e-3 * delta, perturb);
        auto jp = smoothed_noise(n, 2e-3 * delta, perturb);
        auto jw = smoothed_noise(n, 2e-3 * delta, perturb);
        for (std::size_t i = 0; i < n; ++i) {
            roll[i] += jr[i];
            pitch[i] += jp[i];
            yaw[i] += jw[i];
        }
    }

    // contact force: per-stroke levels with minimum-jerk transitions
    std::vector<double> f(n);
    {
        std::vector<double> levels(strokes.size());
        for (auto& lv : levels) lv = base.uniform(0.08, 1.2);
        std::size_t si = 0;
        double prev_level = levels[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            while (si + 1 < strokes.size() && t >= strokes[si].t0 + strokes[si].duration) {
                prev_level = levels[si];
                ++si;
            }
            const Stroke& s = strokes[si];
            const double ramp = std::min(1.0, (t - s.t0) / (0.3 * s.duration));
            f[i] = prev_level + (levels[si] - prev_level) * minjerk(ramp);
        }
        auto floor_noise = smoothed_noise(n, 0.008, base);
        for (std::size_t i = 0; i < n; ++i) f[i] += floor_noise[i];
    }
    if (novice && delta > 0.0 && cfg.perturb_force_tremor) {
        const double freq = perturb.uniform(6.5, 8.5);
        const double phase = perturb.uniform(0.0, 2.0 * M_PI);
        const double amp = 0.035 * delta;
        auto tremor_noise = smoothed_noise(n, 0.02 * delta, perturb);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            f[i] += amp * std::sin(2.0 * M_PI * freq * t + phase) + tremor_noise[i];
        }
    }

    // pedal engaged through the middle of each stroke
    std::vector<std::uint8_t> pedal(n, 0);
    {
        for (const Stroke& s : strokes) {
            const std::size_t i0 = static_cast<std::size_t>((s.t0 + 0.2 * s.duration) * fs);
            const std::size_t i1 =
                std::min<std::size_t>(n - 1, static_cast<std::size_t>((s.t0 + 0.85 * s.duration) * fs));
            for (std::size_t i = i0; i <= i1 && i < n; ++i) pedal[i] = 1;
        }
    }
    if (novice && delta > 0.0 && cfg.perturb_pedal_chatter) {
        const int drops = perturb.poisson(0.15 * delta * duration);
        for (int e = 0; e < drops; ++e) {
            const double tc = perturb.uniform(0.0, duration);
            const double dur = perturb.uniform(0.04, 0.12);
            const std::size_t i0 = static_cast<std::size_t>(tc * fs);
            const std::size_t i1 =
                std::min<std::size_t>(n - 1, static_cast<std::size_t>((tc + dur) * fs));
            for (std::size_t i = i0; i <= i1; ++i) pedal[i] = 0;
        }
    }

    Trial trial;
    char sid[16];
    std::snprintf(sid, sizeof sid, "subj%03d", subject_idx + 1);
    trial.subject_id = sid;
    trial.id = trial.subject_id + "_sc" + std::to_string(scenario_id) + "_t" +
               std::to_string(tumor_id);
    trial.scenario_id = scenario_id;
    trial.tumor_id = tumor_id;
    trial.tumor_color = expected_tumor_color(scenario_id, tumor_id);
    trial.tumor_stiffness_kpa = expected_tumor_stiffness(scenario_id, tumor_id);
    trial.label = label;
    trial.duration_s = static_cast<double>(n - 1) / fs;

    auto to_channel = [&](std::vector<double>&& v, const char* name) {
        Channel c;
        c.samples = std::move(v);
        c.sample_rate_hz = fs;
        c.name = name;
        return c;
    };
    trial.position = {to_channel(std::move(x), "x"), to_channel(std::move(y), "y"),
                      to_channel(std::move(z), "z")};
    trial.angles = {to_channel(std::move(roll), "roll"), to_channel(std::move(pitch), "pitch"),
                    to_channel(std::move(yaw), "yaw")};
    trial.force = to_channel(std::move(f), "force");
    trial.pedal = std::move(pedal);
    trial.region.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        trial.region[i] = region_for({trial.position[0].samples[i], trial.position[1].samples[i],
                                      trial.position[2].samples[i]});
    return trial;
}

} // namespace

Dataset generate(const GeneratorConfig& config) {
    if (config.n_skilled < 2 || config.n_novice < 2)
        throw std::invalid_argument("generate: need at least 2 subjects per class");
    if (config.delta < 0.0) throw std::invalid_argument("generate: delta must be >= 0");
    if (!(config.sample_rate_hz > 0.0) || !(config.segment_duration_s > 0.0))
        throw std::invalid_argument("generate: rate and duration must be positive");
    if (config.scenarios.empty())
        throw std::invalid_argument("generate: at least one scenario required");
    for (int s : config.scenarios)
        if (s < 1 || s > 6) throw std::invalid_argument("generate: scenario outside 1..6");

    Dataset ds;
    const int total = config.n_skilled + config.n_novice;
    ds.trials.reserve(static_cast<std::size_t>(total) * config.scenarios.size() * 3);
    for (int subject = 0; subject < total; ++subject) {
        const Label label = subject < config.n_skilled ? Label::skilled : Label::novice;
        for (int scenario : config.scenarios)
            for (int tumor = 1; tumor <= 3; ++tumor)
                ds.trials.push_back(make_segment(config, label, subject, scenario, tumor));
    }
    return ds;
}

std::vector<int> describe_ground_truth(const GeneratorConfig& config) {
    std::set<int> ids;
    if (config.delta > 0.0) {
        if (config.perturb_jitter) {
            // positional jitter raises derivative energy, extrema and crossing counts
            for (int id : {4, 10, 13, 15, 20, 21, 22, 23, 24, 28, 29, 30, 31, 35, 41, 42,
                           46, 49, 52, 53, 55, 57, 58, 62, 63, 64, 65})
                ids.insert(id);
            // force ratios with velocity stds in the denominator shift too
            for (int id : {3, 16, 51}) ids.insert(id);
        }
        if (config.perturb_submovements) {
            for (int id : {4, 15, 22, 23, 24, 41, 49, 52, 57, 58}) ids.insert(id);
        }
        if (config.perturb_force_tremor) {
            for (int id : {6, 17, 19, 35, 37, 38, 40, 50, 55}) ids.insert(id);
        }
        if (config.perturb_pedal_chatter) ids.insert(33);
    }
    return {ids.begin(), ids.end()};
}

} // namespace skillml
