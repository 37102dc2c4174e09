// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criteria 5-7 share one paper-shaped synthetic dataset per delta value
// (23 skilled / 92 novice subjects, 6 scenarios, 3 tumor segments each).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "feature_oracle.hpp"
#include "fisher_oracle.hpp"
#include "skillml/classifiers.hpp"
#include "skillml/datagen.hpp"
#include "skillml/evaluation.hpp"
#include "skillml/features.hpp"
#include "skillml/io.hpp"
#include "skillml/rng.hpp"
#include "skillml/selection.hpp"
#include "skillml/stats.hpp"

using namespace skillml;
namespace fs = std::filesystem;

namespace {

constexpr Label S = Label::skilled;
constexpr Label N = Label::novice;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---- shared synthetic pipeline (paper-shaped, desk-scale durations) --------

GeneratorConfig paper_shaped(double delta, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.n_skilled = 23;
    cfg.n_novice = 92;
    cfg.delta = delta;
    cfg.sample_rate_hz = 50.0;
    cfg.segment_duration_s = 10.0;
    cfg.scenarios = {1, 2, 3, 4, 5, 6};
    cfg.seed = seed;
    return cfg;
}

FeatureMatrix scenario_features(const Dataset& ds) {
    std::map<std::pair<std::string, int>, std::vector<const Trial*>> groups;
    std::vector<std::pair<std::string, int>> order;
    for (const Trial& t : ds.trials) {
        auto key = std::make_pair(t.subject_id, t.scenario_id);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&t);
    }
    FeatureMatrix m;
    for (const auto& key : order) {
        std::vector<Trial> segs;
        for (const Trial* t : groups[key]) segs.push_back(*t);
        m.rows.push_back(extract_features(std::span<const Trial>(segs)));
    }
    return m;
}

struct SharedData {
    FeatureMatrix delta0;
    FeatureMatrix delta3;
    std::map<ClassifierKind, double> wp_mean_delta0;

    const FeatureMatrix& features(double delta) {
        FeatureMatrix& slot = delta == 0.0 ? delta0 : delta3;
        if (slot.rows.empty()) slot = scenario_features(generate(paper_shaped(delta, 20260810)));
        return slot;
    }
};

SharedData shared;

ExperimentConfig working_point_config() {
    ExperimentConfig cfg;
    cfg.train_fractions = {0.5};
    cfg.feature_counts = {15};
    cfg.iterations = 20;
    cfg.master_seed = 424242;
    cfg.workers = 2;
    return cfg;
}

std::map<ClassifierKind, double> working_point_means(const EvalReport& report) {
    std::map<ClassifierKind, std::pair<double, int>> acc;
    for (const auto& c : report.cells) {
        if (c.failed()) continue;
        auto& a = acc[c.classifier];
        a.first += c.eer;
        a.second += 1;
    }
    std::map<ClassifierKind, double> means;
    for (const auto& [kind, a] : acc) means[kind] = a.first / a.second;
    return means;
}

// ---- criteria ---------------------------------------------------------------

void criterion_metric_correctness() {
    // IAV on circular motion r=10 mm, w=1 rad/s over 2 s: r*w^2*T = 20
    {
        Trial t;
        t.scenario_id = 1;
        t.tumor_id = 1;
        t.tumor_color = TumorColor::black;
        t.tumor_stiffness_kpa = 3.0;
        const double fs = 100.0;
        const std::size_t n = 201;
        for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                        &t.angles[1], &t.angles[2], &t.force}) {
            c->sample_rate_hz = fs;
            c->samples.assign(n, 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / fs;
            t.position[0].samples[i] = 10.0 * std::cos(u);
            t.position[1].samples[i] = 10.0 * std::sin(u);
        }
        t.pedal.assign(n, 0);
        t.region.assign(n, Region::background);
        t.duration_s = (n - 1) / fs;
        const double v = iav(t);
        require(std::fabs(v - 20.0) <= 0.2, "IAV circular case: got " + fmt(v));
    }
    // normalized jerk on the unit minimum-jerk reach vs direct quadrature
    {
        Trial t;
        t.scenario_id = 1;
        t.tumor_id = 1;
        t.tumor_color = TumorColor::black;
        t.tumor_stiffness_kpa = 3.0;
        const double fs = 20000.0;
        const std::size_t n = 20001;
        for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                        &t.angles[1], &t.angles[2], &t.force}) {
            c->sample_rate_hz = fs;
            c->samples.assign(n, 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / fs;
            t.position[0].samples[i] = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        }
        t.pedal.assign(n, 0);
        t.region.assign(n, Region::background);
        t.duration_s = (n - 1) / fs;

        double integral = 0.0;
        const int steps = 100000;
        for (int i = 0; i < steps; ++i) {
            const double u0 = static_cast<double>(i) / steps;
            const double u1 = static_cast<double>(i + 1) / steps;
            const double j0 = 60.0 - 360.0 * u0 + 360.0 * u0 * u0;
            const double j1 = 60.0 - 360.0 * u1 + 360.0 * u1 * u1;
            integral += (j0 * j0 + j1 * j1) / (2.0 * steps);
        }
        const double expected = std::sqrt(integral / 2.0);
        const double got = normalized_jerk(t).value;
        require(std::fabs(got - expected) <= 1e-3 * expected,
                "normalized jerk quadrature: got " + fmt(got) + ", oracle " + fmt(expected));
    }
    // force ramp: df metric = sqrt(2)
    {
        Trial t;
        t.scenario_id = 1;
        t.tumor_id = 1;
        t.tumor_color = TumorColor::black;
        t.tumor_stiffness_kpa = 3.0;
        const double fs = 100.0;
        const std::size_t n = 101;
        for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                        &t.angles[1], &t.angles[2], &t.force}) {
            c->sample_rate_hz = fs;
            c->samples.assign(n, 0.0);
        }
        for (std::size_t i = 0; i < n; ++i)
            t.force.samples[i] = static_cast<double>(i) / fs;
        t.pedal.assign(n, 0);
        t.region.assign(n, Region::background);
        t.duration_s = (n - 1) / fs;
        const double got = force_consistency_metrics(t).df_metric;
        require(std::fabs(got - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0),
                "force ramp df metric: got " + fmt(got));
    }
    // exponential normalization on the three-point column
    {
        FeatureMatrix m;
        for (double v : {1.0, 2.0, 4.0}) {
            FeatureVector row;
            row.values.fill(v);
            m.rows.push_back(row);
        }
        const std::size_t train[] = {0, 1, 2};
        const FeatureMatrix out = normalize(m, train);
        const double expect[3] = {std::exp(-0.25), std::exp(-0.5), std::exp(-1.0)};
        for (int i = 0; i < 3; ++i)
            require(std::fabs(out.rows[i].values[0] - expect[i]) <= 1e-12,
                    "normalization three-point case, row " + std::to_string(i));
    }
}

void criterion_invariance() {
    // normalized jerk under spatial x3 / time x2 (cosine series, zero end jerk)
    {
        auto cosine_trial = [](double scale, double stretch) {
            Trial t;
            t.scenario_id = 1;
            t.tumor_id = 1;
            t.tumor_color = TumorColor::black;
            t.tumor_stiffness_kpa = 3.0;
            const double fs = 100.0;
            const double dur = 4.0 * stretch;
            const std::size_t n = static_cast<std::size_t>(dur * fs) + 1;
            for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                            &t.angles[1], &t.angles[2], &t.force}) {
                c->sample_rate_hz = fs;
                c->samples.assign(n, 0.0);
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double u = static_cast<double>(i) / fs / stretch;
                t.position[0].samples[i] = scale * 4.0 * std::cos(2.0 * M_PI * u / 4.0);
                t.position[1].samples[i] = scale * 3.0 * std::cos(4.0 * M_PI * u / 4.0);
                t.position[2].samples[i] = scale * 2.0 * std::cos(2.0 * M_PI * u / 4.0);
            }
            t.pedal.assign(n, 0);
            t.region.assign(n, Region::background);
            t.duration_s = (n - 1) / fs;
            return t;
        };
        const double a = normalized_jerk(cosine_trial(1.0, 1.0)).value;
        const double b = normalized_jerk(cosine_trial(3.0, 2.0)).value;
        require(std::fabs(a - b) <= 1e-3 * a,
                "jerk rescale invariance: " + fmt(a) + " vs " + fmt(b));
    }
    // force metrics under f -> 5f
    {
        Trial t;
        t.scenario_id = 1;
        t.tumor_id = 1;
        t.tumor_color = TumorColor::black;
        t.tumor_stiffness_kpa = 3.0;
        const double fs = 100.0;
        const std::size_t n = 201;
        for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                        &t.angles[1], &t.angles[2], &t.force}) {
            c->sample_rate_hz = fs;
            c->samples.assign(n, 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / fs;
            t.force.samples[i] = 0.8 + 0.3 * std::sin(4.0 * u) + 0.1 * std::cos(9.0 * u);
        }
        t.pedal.assign(n, 0);
        t.region.assign(n, Region::background);
        t.duration_s = (n - 1) / fs;
        const ForceConsistency base = force_consistency_metrics(t);
        for (auto& v : t.force.samples) v *= 5.0;
        const ForceConsistency scaled = force_consistency_metrics(t);
        require(std::fabs(base.df_metric - scaled.df_metric) <= 1e-9 * base.df_metric,
                "df metric force-scale invariance");
        require(std::fabs(base.d2f_metric - scaled.d2f_metric) <= 1e-9 * base.d2f_metric,
                "d2f metric force-scale invariance");
        require(std::fabs(base.d3f_metric - scaled.d3f_metric) <= 1e-9 * base.d3f_metric,
                "d3f metric force-scale invariance");
    }
    // EER under strictly monotone transforms (exact)
    {
        Rng rng(15);
        std::vector<double> scores;
        std::vector<Label> labels;
        for (int i = 0; i < 40; ++i) {
            scores.push_back(rng.uniform(-1, 1));
            labels.push_back(i % 3 ? N : S);
        }
        const double base = compute_eer(scores, labels).eer;
        std::vector<double> warped = scores;
        for (auto& v : warped) v = std::atan(5.0 * v) * 100.0 + 3.0;
        require(compute_eer(warped, labels).eer == base, "EER monotone-transform invariance");
    }
    // Welch p under affine maps
    {
        Rng rng(16);
        std::vector<double> a(18), b(30);
        for (auto& v : a) v = rng.uniform(0, 2);
        for (auto& v : b) v = rng.uniform(0.4, 2.4);
        const double p0 = welch_ttest(a, b).p;
        for (auto& v : a) v = -7.0 * v + 11.0;
        for (auto& v : b) v = -7.0 * v + 11.0;
        const double p1 = welch_ttest(a, b).p;
        require(std::fabs(p0 - p1) <= 1e-9 * p0, "t-test affine invariance");
    }
}

void criterion_oracle_equivalence() {
    // greedy forward selection equals exhaustive argmax, 8 choose 3, 20 seeds
    for (int s = 0; s < 20; ++s) {
        Rng rng(5000 + s);
        FeatureMatrix m;
        for (int i = 0; i < 26; ++i) {
            FeatureVector row;
            row.scenario_id = 1;
            row.label = i < 11 ? S : N;
            for (int j = 0; j < kFeatureCount; ++j) row.values[j] = rng.gaussian();
            for (int j = 0; j < 8; ++j)
                if (row.label == S) row.values[j] += rng.uniform(0.0, 0.9);
            m.rows.push_back(row);
        }
        const std::vector<int> pool = {1, 2, 3, 4, 5, 6, 7, 8};
        const SelectionResult r = forward_select(m, 3, pool);
        std::vector<int> chosen;
        std::vector<int> remaining = pool;
        for (int step = 0; step < 3; ++step) {
            int best_id = -1;
            double best = -1.0;
            for (int candidate : remaining) {
                std::vector<int> subset = chosen;
                subset.push_back(candidate);
                const double score = oracle::eigen_fisher_score(m, subset);
                if (score > best + 1e-12) {
                    best = score;
                    best_id = candidate;
                }
            }
            require(r.forward_ranking[step] == best_id,
                    "greedy step " + std::to_string(step) + " differs from exhaustive argmax, seed " +
                        std::to_string(s));
            chosen.push_back(best_id);
            remaining.erase(std::remove(remaining.begin(), remaining.end(), best_id),
                            remaining.end());
        }
    }
    // all 68 features against the brute-force oracle on 100 random trials
    int made = 0;
    for (int round = 0; made < 100; ++round) {
        GeneratorConfig cfg;
        cfg.n_skilled = 2;
        cfg.n_novice = 2;
        cfg.delta = (round % 4) * 1.0 + 0.5;
        cfg.sample_rate_hz = 40.0 + 20.0 * (round % 3);
        cfg.segment_duration_s = 3.0 + (round % 4);
        cfg.scenarios = {1 + round % 6};
        cfg.seed = 9000 + static_cast<std::uint64_t>(round);
        const Dataset ds = generate(cfg);
        for (int subject = 0; subject < 4 && made < 100; ++subject) {
            const std::size_t base = static_cast<std::size_t>(subject) * 3;
            std::vector<Trial> segs;
            if ((made % 5) < 3)
                segs = {ds.trials[base + static_cast<std::size_t>(made) % 3]};
            else
                segs = {ds.trials[base], ds.trials[base + 1], ds.trials[base + 2]};
            const FeatureVector fv = extract_features(std::span<const Trial>(segs));
            const auto expected = oracle::oracle_features(std::span<const Trial>(segs));
            for (int j = 0; j < kFeatureCount; ++j)
                require(oracle::values_agree(fv.values[j], expected[j], 1e-9),
                        "feature " + std::to_string(j + 1) + " disagrees on trial " +
                            std::to_string(made) + ": " + fmt(fv.values[j]) + " vs " +
                            fmt(expected[j]));
            ++made;
        }
    }
}

void criterion_classifier_sanity() {
    using Rows = std::vector<std::vector<double>>;
    // KNN 4/7 hand case
    {
        Rows train;
        std::vector<Label> labels;
        for (int i = 0; i < 4; ++i) {
            train.push_back({0.1 * (i + 1), 0.0});
            labels.push_back(S);
        }
        for (int i = 0; i < 3; ++i) {
            train.push_back({0.0, 0.1 * (i + 1)});
            labels.push_back(N);
        }
        const double score = knn_fit(train, labels, 7).score(std::vector<double>{0.0, 0.0});
        require(score == 4.0 / 7.0, "KNN 4/7 case: got " + fmt(score));
    }
    // FKNN Keller hand case and membership sum
    {
        const Rows train = {{1.0, 0.0}, {2.0, 0.0}};
        const std::vector<Label> labels = {S, N};
        const TrainedClassifier clf = fknn_fit(train, labels, 2, 2.0);
        const double score = clf.score(std::vector<double>{0.0, 0.0});
        require(std::fabs(score - 0.8) <= 1e-12, "FKNN Keller case: got " + fmt(score));
        Rng rng(33);
        Rows big;
        std::vector<Label> big_labels;
        for (int i = 0; i < 24; ++i) {
            big.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
            big_labels.push_back(i % 2 ? S : N);
        }
        const TrainedClassifier kc = fknn_fit(big, big_labels, 7, 2.0);
        for (int i = 0; i < 40; ++i) {
            const std::vector<double> q = {rng.uniform(-2, 2), rng.uniform(-2, 2),
                                           rng.uniform(-2, 2)};
            const FuzzyMembership u = fknn_memberships(kc, q);
            require(std::fabs(u.skilled + u.novice - 1.0) <= 1e-9, "FKNN memberships sum");
        }
    }
    // Parzen 1-D density normalization
    {
        Rng rng(44);
        Rows train;
        std::vector<Label> labels;
        for (int i = 0; i < 14; ++i) {
            train.push_back({rng.gaussian()});
            labels.push_back(S);
        }
        for (int i = 0; i < 14; ++i) {
            train.push_back({4.0 + rng.gaussian()});
            labels.push_back(N);
        }
        const TrainedClassifier clf = parzen_fit(train, labels);
        const double h = std::get<ParzenModel>(clf.model).bandwidth;
        double lo = 1e9, hi = -1e9;
        for (int i = 0; i < 14; ++i) {
            lo = std::min(lo, train[i][0]);
            hi = std::max(hi, train[i][0]);
        }
        lo -= 8 * h;
        hi += 8 * h;
        const int steps = 40000;
        double integral = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double x = lo + (hi - lo) * i / steps;
            const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
            integral += w * parzen_class_density(clf, S, std::vector<double>{x});
        }
        integral *= (hi - lo) / steps;
        require(std::fabs(integral - 1.0) <= 1e-3,
                "Parzen 1-D density integral: got " + fmt(integral));
    }
    // SVM: separable blobs and XOR, 20 seeds each
    for (int s = 0; s < 20; ++s) {
        Rng rng(7000 + s);
        Rows train;
        std::vector<Label> labels;
        for (int i = 0; i < 12; ++i) {
            train.push_back({2.5 + 0.4 * rng.gaussian(), 2.5 + 0.4 * rng.gaussian()});
            labels.push_back(S);
        }
        for (int i = 0; i < 12; ++i) {
            train.push_back({-2.5 + 0.4 * rng.gaussian(), -2.5 + 0.4 * rng.gaussian()});
            labels.push_back(N);
        }
        SvmParams params;
        params.kernel = SvmKernel::linear;
        params.c = 10.0;
        const TrainedClassifier clf = svm_fit(train, labels, params);
        for (std::size_t i = 0; i < train.size(); ++i)
            require((labels[i] == S) == (clf.score(train[i]) > 0.0),
                    "SVM blobs seed " + std::to_string(s));
    }
    for (int s = 0; s < 20; ++s) {
        Rng rng(8000 + s);
        Rows train;
        std::vector<Label> labels;
        for (int i = 0; i < 4; ++i) {
            const double cx = (i & 1) ? 1.0 : 0.0, cy = (i & 2) ? 1.0 : 0.0;
            train.push_back({cx + 0.01 * rng.gaussian(), cy + 0.01 * rng.gaussian()});
            labels.push_back(((i & 1) ^ ((i & 2) >> 1)) ? S : N);
        }
        SvmParams params;
        params.c = 10.0;
        params.gamma = 1.0;
        const TrainedClassifier clf = svm_fit(train, labels, params);
        for (std::size_t i = 0; i < 4; ++i)
            require((labels[i] == S) == (clf.score(train[i]) > 0.0),
                    "SVM XOR seed " + std::to_string(s));
    }
}

void criterion_chance_level() {
    const FeatureMatrix& m = shared.features(0.0);
    const EvalReport report = run_grid(m, working_point_config());
    shared.wp_mean_delta0 = working_point_means(report);
    for (const auto& [kind, mean] : shared.wp_mean_delta0)
        require(mean >= 0.43 && mean <= 0.57,
                std::string("mean EER for ") + to_string(kind) + " at delta 0: " + fmt(mean));
    require(shared.wp_mean_delta0.size() == 4, "all four classifiers must report");
}

void criterion_separability_response() {
    const FeatureMatrix& m = shared.features(3.0);
    const EvalReport report = run_grid(m, working_point_config());
    const auto means = working_point_means(report);
    const double fknn = means.at(ClassifierKind::fknn);
    require(fknn <= 0.10, "FKNN mean working-point EER at delta 3: " + fmt(fknn));
    if (shared.wp_mean_delta0.empty()) {
        const EvalReport base = run_grid(shared.features(0.0), working_point_config());
        shared.wp_mean_delta0 = working_point_means(base);
    }
    require(fknn < shared.wp_mean_delta0.at(ClassifierKind::fknn),
            "FKNN EER at delta 3 must be below its delta-0 value");
}

void criterion_protocol_fidelity() {
    const FeatureMatrix& m = shared.features(3.0);
    ExperimentConfig cfg; // defaults: 9 fractions, 6 counts, 4 classifiers, 20 iterations
    cfg.master_seed = 1234;
    cfg.workers = 1;
    const EvalReport serial = run_grid(m, cfg);
    require(serial.cells.size() == 6u * 9u * 6u * 4u * 20u,
            "default grid emits " + std::to_string(serial.cells.size()) + " cells");

    cfg.workers = 8;
    const EvalReport parallel = run_grid(m, cfg);

    const fs::path dir =
        fs::temp_directory_path() /
        ("skillml_acceptance_" +
         std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(dir);
    write_report_csv(dir / "serial.csv", serial);
    write_report_csv(dir / "parallel.csv", parallel);
    std::ifstream fa(dir / "serial.csv"), fb(dir / "parallel.csv");
    const std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    fs::remove_all(dir);
    require(!a.empty() && a == b, "serial and 8-worker report bytes differ");

    const ConfusionSummary cs = confusion_ranges(serial);
    require(cs.n_skilled == 23 && cs.n_novice == 92, "confusion margins must be 23/92");
    const std::string table = format_confusion_table(cs);
    require(table.find("N=23") != std::string::npos &&
                table.find("N=92") != std::string::npos &&
                table.find("N=115") != std::string::npos,
            "confusion table must carry the 23/92/115 margins");
    for (const auto& [kind, r] : cs.per_classifier) {
        require(r.min_correct_skilled >= 0 && r.max_correct_skilled <= 23,
                "skilled confusion range outside [0,23]");
        require(r.min_correct_novice >= 0 && r.max_correct_novice <= 92,
                "novice confusion range outside [0,92]");
    }
}

void criterion_null_selection() {
    int selected = 0, total = 0;
    for (int s = 0; s < 20; ++s) {
        GeneratorConfig cfg;
        cfg.n_skilled = 23;
        cfg.n_novice = 92;
        cfg.delta = 0.0;
        cfg.sample_rate_hz = 50.0;
        cfg.segment_duration_s = 8.0;
        cfg.scenarios = {1};
        cfg.seed = 60000 + static_cast<std::uint64_t>(s);
        const FeatureMatrix raw = scenario_features(generate(cfg));
        std::vector<std::size_t> all(raw.rows.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const FeatureMatrix norm = normalize(raw, all);
        const SelectionResult r = ttest_filter(norm, 0.05);
        selected += static_cast<int>(r.filtered_ids.size());
        total += kFeatureCount;
    }
    const double fraction = static_cast<double>(selected) / total;
    const double band = 1.96 * std::sqrt(0.05 * 0.95 / total);
    require(fraction >= 0.05 - band && fraction <= 0.05 + band,
            "null selection fraction " + fmt(fraction) + " outside [" + fmt(0.05 - band) + ", " +
                fmt(0.05 + band) + "]");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"metric correctness (IAV, normalized jerk, force ramp, normalization)",
         criterion_metric_correctness},
        {"invariance suite (rescaling, force scale, monotone scores, affine t-test)",
         criterion_invariance},
        {"oracle equivalence (greedy argmax, 68-feature brute force)",
         criterion_oracle_equivalence},
        {"classifier sanity (KNN, FKNN, Parzen, SVM)", criterion_classifier_sanity},
        {"chance-level calibration (delta 0 working point)", criterion_chance_level},
        {"separability response (delta 3 working point)", criterion_separability_response},
        {"protocol fidelity (grid shape, determinism, confusion margins)",
         criterion_protocol_fidelity},
        {"null selection calibration (delta 0 filter rate)", criterion_null_selection},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criteria[i].second();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char line[512];
        std::snprintf(line, sizeof line, "%s  %zu. %s (%.1f s)%s%s",
                      error.empty() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                      error.empty() ? "" : " -- ", error.c_str());
        std::cout << line << std::endl;
        if (!error.empty()) ++failures;
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
