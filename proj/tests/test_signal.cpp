#include <doctest.h>

#include <cmath>

#include "skillml/datagen.hpp"
#include "skillml/signal.hpp"

using namespace skillml;

namespace {

Channel make_channel(std::vector<double> samples, double rate = 1.0) {
    Channel c;
    c.samples = std::move(samples);
    c.sample_rate_hz = rate;
    c.name = "test";
    return c;
}

Channel sampled(double (*fn)(double), double rate, double duration) {
    Channel c;
    c.sample_rate_hz = rate;
    const std::size_t n = static_cast<std::size_t>(duration * rate) + 1;
    for (std::size_t i = 0; i < n; ++i) c.samples.push_back(fn(static_cast<double>(i) / rate));
    return c;
}

} // namespace

TEST_CASE("derivative of a constant is zero") {
    const Channel c = make_channel({5, 5, 5, 5, 5}, 10.0);
    for (double v : differentiate(c, 1).samples) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("derivative of a ramp is its slope everywhere") {
    const Channel c = make_channel({0, 1, 2, 3, 4}, 1.0);
    for (double v : differentiate(c, 1).samples) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("derivative of sin(2*pi*t) tracks the analytic derivative") {
    const Channel c = sampled([](double t) { return std::sin(2 * M_PI * t); }, 100.0, 2.0);
    const Channel d = differentiate(c, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double t = static_cast<double>(i) / 100.0;
        worst = std::max(worst, std::fabs(d.samples[i] - 2 * M_PI * std::cos(2 * M_PI * t)));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("repeated first derivatives equal the higher-order call") {
    // cubic: exercises every stencil path
    const Channel c = sampled([](double t) { return t * t * t - 2 * t * t + 3 * t - 1; }, 50.0, 1.0);
    const Channel d2 = differentiate(c, 2);
    const Channel d2_composed = differentiate(differentiate(c, 1), 1);
    for (std::size_t i = 0; i < d2.size(); ++i) {
        CHECK(d2.samples[i] ==
              doctest::Approx(d2_composed.samples[i]).epsilon(1e-6).scale(std::fabs(d2.samples[i]) + 1.0));
    }
}

TEST_CASE("differentiation is linear") {
    const Channel u = sampled([](double t) { return std::sin(3 * t) + t; }, 50.0, 1.0);
    const Channel v = sampled([](double t) { return std::cos(2 * t) - t * t; }, 50.0, 1.0);
    const double a = 2.5, b = -1.25;
    Channel combo = u;
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo.samples[i] = a * u.samples[i] + b * v.samples[i];
    const auto d_combo = differentiate(combo, 1);
    const auto du = differentiate(u, 1);
    const auto dv = differentiate(v, 1);
    for (std::size_t i = 0; i < combo.size(); ++i)
        CHECK(d_combo.samples[i] ==
              doctest::Approx(a * du.samples[i] + b * dv.samples[i]).epsilon(1e-12));
}

TEST_CASE("too-short channels are rejected") {
    const Channel c = make_channel({1, 2, 3}, 1.0);
    CHECK_THROWS(differentiate(c, 1));
    CHECK_THROWS(differentiate(make_channel({1, 2, 3, 4}, 1.0), 0));
    CHECK_THROWS(differentiate(make_channel({1, 2, 3, 4}, 1.0), 4));
}

TEST_CASE("speed: stationary tool has zero speed") {
    std::array<Channel, 3> pos = {make_channel({1, 1, 1, 1}, 10.0),
                                  make_channel({2, 2, 2, 2}, 10.0),
                                  make_channel({3, 3, 3, 3}, 10.0)};
    for (double v : speed(pos).samples) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("speed: 3-4-0 straight-line motion gives constant speed 5") {
    std::array<Channel, 3> pos;
    for (int i = 0; i < 3; ++i) pos[i].sample_rate_hz = 10.0;
    for (int s = 0; s < 21; ++s) {
        const double t = s / 10.0;
        pos[0].samples.push_back(3 * t);
        pos[1].samples.push_back(4 * t);
        pos[2].samples.push_back(0);
    }
    for (double v : speed(pos).samples) CHECK(v == doctest::Approx(5.0));
}

TEST_CASE("speed is nonnegative and rotation-invariant") {
    GeneratorConfig cfg;
    cfg.n_skilled = 2;
    cfg.n_novice = 2;
    cfg.scenarios = {1};
    cfg.segment_duration_s = 3.0;
    cfg.sample_rate_hz = 50.0;
    cfg.seed = 11;
    const Dataset ds = generate(cfg);
    const Trial& t = ds.trials[0];

    const Channel base = speed(t.position);
    for (double v : base.samples) CHECK(v >= 0.0);

    // rigid rotation about z by 40 degrees, then about x by 25 degrees
    const double a = 40.0 * M_PI / 180.0, b = 25.0 * M_PI / 180.0;
    std::array<Channel, 3> rot = t.position;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double x = t.position[0].samples[i];
        const double y = t.position[1].samples[i];
        const double z = t.position[2].samples[i];
        const double x1 = std::cos(a) * x - std::sin(a) * y;
        const double y1 = std::sin(a) * x + std::cos(a) * y;
        rot[0].samples[i] = x1;
        rot[1].samples[i] = std::cos(b) * y1 - std::sin(b) * z;
        rot[2].samples[i] = std::sin(b) * y1 + std::cos(b) * z;
    }
    const Channel rotated = speed(rot);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(rotated.samples[i] == doctest::Approx(base.samples[i]).epsilon(1e-9));
}

TEST_CASE("speed rejects mismatched channel lengths") {
    std::array<Channel, 3> pos = {make_channel({1, 2, 3, 4}, 10.0),
                                  make_channel({1, 2, 3}, 10.0),
                                  make_channel({1, 2, 3, 4}, 10.0)};
    CHECK_THROWS(speed(pos));
}

TEST_CASE("validate_trial accepts a well-formed synthetic trial") {
    GeneratorConfig cfg;
    cfg.n_skilled = 2;
    cfg.n_novice = 2;
    cfg.scenarios = {2};
    cfg.segment_duration_s = 2.0;
    cfg.sample_rate_hz = 50.0;
    const Dataset ds = generate(cfg);
    for (const Trial& t : ds.trials) CHECK(validate_trial(t).ok());
    CHECK(validate_dataset(ds).ok());
}

TEST_CASE("validate_trial flags a short force channel") {
    GeneratorConfig cfg;
    cfg.n_skilled = 2;
    cfg.n_novice = 2;
    cfg.scenarios = {1};
    cfg.segment_duration_s = 2.0;
    cfg.sample_rate_hz = 50.0;
    Dataset ds = generate(cfg);
    Trial t = ds.trials[0];
    t.force.samples.pop_back();
    const ValidationReport r = validate_trial(t);
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto& v : r.violations) found |= v.find("force") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate_trial flags scenario-inconsistent tumor metadata") {
    GeneratorConfig cfg;
    cfg.n_skilled = 2;
    cfg.n_novice = 2;
    cfg.scenarios = {1};
    cfg.segment_duration_s = 2.0;
    cfg.sample_rate_hz = 50.0;
    Dataset ds = generate(cfg);
    Trial t = ds.trials[0];
    REQUIRE(t.scenario_id == 1);
    t.tumor_color = TumorColor::white; // scenario 1 tumors are black
    const ValidationReport r = validate_trial(t);
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto& v : r.violations) found |= v.find("tumor_color") != std::string::npos;
    CHECK(found);
}

TEST_CASE("dataset validation flags duplicate ids") {
    GeneratorConfig cfg;
    cfg.n_skilled = 2;
    cfg.n_novice = 2;
    cfg.scenarios = {1};
    cfg.segment_duration_s = 2.0;
    cfg.sample_rate_hz = 50.0;
    Dataset ds = generate(cfg);
    ds.trials.push_back(ds.trials[0]);
    CHECK_FALSE(validate_dataset(ds).ok());
}
