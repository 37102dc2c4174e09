#include "skillml/signal.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace skillml {

const char* to_string(TumorColor c) {
    switch (c) {
        case TumorColor::black: return "black";
        case TumorColor::glioma: return "glioma";
        case TumorColor::white: return "white";
    }
    return "?";
}

const char* to_string(Region r) {
    switch (r) {
        case Region::r1: return "R1";
        case Region::r2: return "R2";
        case Region::r3: return "R3";
        case Region::r4: return "R4";
        case Region::background: return "BG";
    }
    return "?";
}

const char* to_string(Label l) { return l == Label::skilled ? "skilled" : "novice"; }

TumorColor tumor_color_from_string(const std::string& s) {
    if (s == "black") return TumorColor::black;
    if (s == "glioma") return TumorColor::glioma;
    if (s == "white") return TumorColor::white;
    throw std::invalid_argument("unknown tumor color: " + s);
}

Region region_from_string(const std::string& s) {
    if (s == "R1") return Region::r1;
    if (s == "R2") return Region::r2;
    if (s == "R3") return Region::r3;
    if (s == "R4") return Region::r4;
    if (s == "BG") return Region::background;
    throw std::invalid_argument("unknown region tag: " + s);
}

Label label_from_string(const std::string& s) {
    if (s == "skilled") return Label::skilled;
    if (s == "novice") return Label::novice;
    throw std::invalid_argument("unknown label: " + s);
}

std::size_t Dataset::count(Label l) const {
    std::size_t n = 0;
    for (const auto& t : trials)
        if (t.label == l) ++n;
    return n;
}

TumorColor expected_tumor_color(int scenario_id, int tumor_id) {
    static constexpr TumorColor by_tumor[3] = {TumorColor::black, TumorColor::glioma,
                                               TumorColor::white};
    switch (scenario_id) {
        case 1: return TumorColor::black;
        case 2: return TumorColor::glioma;
        case 3: return TumorColor::white;
        case 4:
        case 5:
        case 6: return by_tumor[tumor_id - 1];
        default: throw std::invalid_argument("scenario_id outside 1..6");
    }
}

double expected_tumor_stiffness(int scenario_id, int tumor_id) {
    static constexpr double by_tumor[3] = {3.0, 9.0, 15.0};
    switch (scenario_id) {
        case 1:
        case 2:
        case 3: return by_tumor[tumor_id - 1];
        case 4: return 3.0;
        case 5: return 9.0;
        case 6: return 15.0;
        default: throw std::invalid_argument("scenario_id outside 1..6");
    }
}

namespace {

void check_channel(const Channel& c, const char* what, std::size_t expect_n, double expect_rate,
                   ValidationReport& r) {
    if (c.size() != expect_n)
        r.violations.push_back(std::string(what) + ": sample count " + std::to_string(c.size()) +
                               " differs from " + std::to_string(expect_n));
    if (c.sample_rate_hz != expect_rate)
        r.violations.push_back(std::string(what) + ": sample rate mismatch");
    for (double v : c.samples) {
        if (!std::isfinite(v)) {
            r.violations.push_back(std::string(what) + ": non-finite sample");
            break;
        }
    }
}

} // namespace

ValidationReport validate_trial(const Trial& trial) {
    ValidationReport r;
    // consensus sample count: the longest stream, so short channels get named
    std::size_t n = std::max({trial.position[0].size(), trial.position[1].size(),
                              trial.position[2].size(), trial.angles[0].size(),
                              trial.angles[1].size(), trial.angles[2].size(),
                              trial.force.size(), trial.pedal.size(), trial.region.size()});
    const double rate = trial.sample_rate_hz();
    if (n < 4) r.violations.push_back("fewer than 4 samples");
    if (!(rate > 0.0)) r.violations.push_back("sample rate not positive");

    static const char* pos_names[3] = {"position.x", "position.y", "position.z"};
    static const char* ang_names[3] = {"angles.roll", "angles.pitch", "angles.yaw"};
    for (int i = 0; i < 3; ++i) check_channel(trial.position[i], pos_names[i], n, rate, r);
    for (int i = 0; i < 3; ++i) check_channel(trial.angles[i], ang_names[i], n, rate, r);
    check_channel(trial.force, "force", n, rate, r);
    if (trial.pedal.size() != n) r.violations.push_back("pedal: sample count mismatch");
    if (trial.region.size() != n) r.violations.push_back("region: sample count mismatch");

    if (rate > 0.0 && n > 0) {
        const double expect = static_cast<double>(n - 1) / rate;
        if (std::fabs(trial.duration_s - expect) > 1e-9 * std::max(1.0, expect))
            r.violations.push_back("duration_s inconsistent with sample count and rate");
    }

    if (trial.scenario_id < 1 || trial.scenario_id > 6) {
        r.violations.push_back("scenario_id outside 1..6");
    } else if (trial.tumor_id < 1 || trial.tumor_id > 3) {
        r.violations.push_back("tumor_id outside 1..3");
    } else {
        if (trial.tumor_color != expected_tumor_color(trial.scenario_id, trial.tumor_id))
            r.violations.push_back("tumor_color inconsistent with scenario " +
                                   std::to_string(trial.scenario_id) + " tumor " +
                                   std::to_string(trial.tumor_id));
        if (trial.tumor_stiffness_kpa !=
            expected_tumor_stiffness(trial.scenario_id, trial.tumor_id))
            r.violations.push_back("tumor_stiffness_kpa inconsistent with scenario " +
                                   std::to_string(trial.scenario_id) + " tumor " +
                                   std::to_string(trial.tumor_id));
    }
    return r;
}

ValidationReport validate_dataset(const Dataset& dataset) {
    ValidationReport r;
    std::set<std::string> ids;
    for (const auto& t : dataset.trials) {
        if (!ids.insert(t.id).second)
            r.violations.push_back("duplicate trial id: " + t.id);
        ValidationReport tr = validate_trial(t);
        for (auto& v : tr.violations) r.violations.push_back(t.id + ": " + v);
    }
    if (dataset.count(Label::skilled) < 2)
        r.violations.push_back("fewer than 2 skilled trials");
    if (dataset.count(Label::novice) < 2)
        r.violations.push_back("fewer than 2 novice trials");
    return r;
}

std::vector<double> differentiate(std::span<const double> samples, double sample_rate_hz,
                                  int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("differentiate: order must be 1..3");
    if (samples.size() < 4)
        throw std::invalid_argument("differentiate: need at least 4 samples");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("differentiate: sample rate must be positive");

    const std::size_t n = samples.size();
    const double inv2h = 0.5 * sample_rate_hz;
    std::vector<double> d(n);
    d[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) * inv2h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (samples[i + 1] - samples[i - 1]) * inv2h;
    d[n - 1] = (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) * inv2h;

    if (order == 1) return d;
    return differentiate(d, sample_rate_hz, order - 1);
}

Channel differentiate(const Channel& channel, int order) {
    Channel out;
    out.sample_rate_hz = channel.sample_rate_hz;
    out.name = channel.name + "'" + (order > 1 ? std::string(order - 1, '\'') : "");
    out.samples = differentiate(std::span<const double>(channel.samples),
                                channel.sample_rate_hz, order);
    return out;
}

Channel speed(const std::array<Channel, 3>& position) {
    const std::size_t n = position[0].size();
    if (position[1].size() != n || position[2].size() != n)
        throw std::invalid_argument("speed: position channels differ in length");
    std::array<std::vector<double>, 3> v;
    for (int i = 0; i < 3; ++i)
        v[i] = differentiate(std::span<const double>(position[i].samples),
                             position[i].sample_rate_hz, 1);
    Channel out;
    out.sample_rate_hz = position[0].sample_rate_hz;
    out.name = "speed";
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
    return out;
}

} // namespace skillml
