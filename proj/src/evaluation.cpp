#include "skillml/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "skillml/rng.hpp"

namespace skillml {

const char* to_string(NormalizeOn n) {
    switch (n) {
        case NormalizeOn::train: return "train";
        case NormalizeOn::full: return "full";
        case NormalizeOn::none: return "none";
    }
    return "?";
}

NormalizeOn normalize_on_from_string(const std::string& s) {
    if (s == "train") return NormalizeOn::train;
    if (s == "full") return NormalizeOn::full;
    if (s == "none") return NormalizeOn::none;
    throw std::invalid_argument("unknown normalization mode: " + s);
}

namespace {

std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t k,
                                                    Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::size_t train_count(double fraction, std::size_t size) {
    if (size < 2) throw std::invalid_argument("split: class with fewer than 2 members");
    const auto k = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(size) + 0.5)); // round half up
    return std::clamp<std::size_t>(k, 1, size - 1);
}

} // namespace

SplitResult stratified_split(std::span<const Label> labels, double train_fraction,
                             std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train fraction outside (0,1)");
    std::vector<std::size_t> skilled, novice;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == Label::skilled ? skilled : novice).push_back(i);

    Rng rng(seed);
    SplitResult r;
    for (auto* cls : {&skilled, &novice}) {
        const std::size_t k = train_count(train_fraction, cls->size());
        auto picked = sample_without_replacement(*cls, k, rng);
        r.train.insert(r.train.end(), picked.begin(), picked.end());
    }
    std::sort(r.train.begin(), r.train.end());
    std::set<std::size_t> train_set(r.train.begin(), r.train.end());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!train_set.count(i)) r.test.push_back(i);
    return r;
}

SplitResult simple_split(std::span<const Label> labels, double train_fraction,
                         std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train fraction outside (0,1)");
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Rng rng(seed);
    SplitResult r;
    r.train = sample_without_replacement(all, train_count(train_fraction, all.size()), rng);
    std::set<std::size_t> train_set(r.train.begin(), r.train.end());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!train_set.count(i)) r.test.push_back(i);
    return r;
}

EerResult compute_eer(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("compute_eer: size mismatch or empty input");
    std::vector<double> skilled, novice;
    for (std::size_t i = 0; i < scores.size(); ++i)
        (labels[i] == Label::skilled ? skilled : novice).push_back(scores[i]);
    if (skilled.empty() || novice.empty())
        throw std::invalid_argument("compute_eer: both classes required");

    std::vector<double> thresholds(scores.begin(), scores.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ns = static_cast<double>(skilled.size());
    const double nn = static_cast<double>(novice.size());
    EerResult r;
    r.tolerance = std::max(1.0 / ns, 1.0 / nn);

    // sentinel above every score: nothing classified skilled
    r.roc.push_back({thresholds.front() + 1.0, 0.0, 1.0});
    for (double th : thresholds) {
        double sens = 0.0, spec = 0.0;
        for (double v : skilled)
            if (v >= th) sens += 1.0;
        for (double v : novice)
            if (v < th) spec += 1.0;
        r.roc.push_back({th, sens / ns, spec / nn});
    }

    // diff is non-decreasing from -1 to +1; exact zero wins, else interpolate
    std::size_t cross = r.roc.size();
    for (std::size_t i = 0; i < r.roc.size(); ++i) {
        if (r.roc[i].sensitivity - r.roc[i].specificity == 0.0) {
            cross = i;
            break;
        }
    }
    double eer_raw, sens_at, threshold_at;
    if (cross < r.roc.size()) {
        sens_at = r.roc[cross].sensitivity;
        threshold_at = r.roc[cross].threshold;
        eer_raw = 1.0 - sens_at;
    } else {
        std::size_t k = 0;
        while (k + 1 < r.roc.size()) {
            const double d0 = r.roc[k].sensitivity - r.roc[k].specificity;
            const double d1 = r.roc[k + 1].sensitivity - r.roc[k + 1].specificity;
            if (d0 < 0.0 && d1 > 0.0) break;
            ++k;
        }
        const double d0 = r.roc[k].sensitivity - r.roc[k].specificity;
        const double d1 = r.roc[k + 1].sensitivity - r.roc[k + 1].specificity;
        const double u = -d0 / (d1 - d0);
        sens_at = r.roc[k].sensitivity + u * (r.roc[k + 1].sensitivity - r.roc[k].sensitivity);
        threshold_at = r.roc[k].threshold + u * (r.roc[k + 1].threshold - r.roc[k].threshold);
        eer_raw = 1.0 - sens_at;
    }
    r.eer = std::clamp(eer_raw, 0.0, 0.5);
    r.sensitivity = 1.0 - r.eer;
    r.specificity = 1.0 - r.eer;
    r.threshold = threshold_at;
    return r;
}

namespace {

struct ScenarioRows {
    int scenario_id = 0;
    std::vector<std::size_t> rows; // indices into the feature matrix
    std::vector<Label> labels;
};

FeatureMatrix submatrix(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
    FeatureMatrix out;
    out.rows.reserve(rows.size());
    for (std::size_t r : rows) out.rows.push_back(m.rows[r]);
    return out;
}

std::vector<std::vector<double>> project(const FeatureMatrix& m,
                                         std::span<const std::size_t> rows,
                                         std::span<const int> feature_ids) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        std::vector<double> v(feature_ids.size());
        for (std::size_t j = 0; j < feature_ids.size(); ++j)
            v[j] = m.rows[r].values[feature_ids[j] - 1];
        out.push_back(std::move(v));
    }
    return out;
}

TrainedClassifier fit_classifier(ClassifierKind kind, const ExperimentConfig& cfg,
                                 std::span<const std::vector<double>> x,
                                 std::span<const Label> y) {
    switch (kind) {
        case ClassifierKind::knn: return knn_fit(x, y, cfg.knn_k);
        case ClassifierKind::fknn: return fknn_fit(x, y, cfg.fknn_k, cfg.fknn_m);
        case ClassifierKind::parzen: return parzen_fit(x, y, cfg.parzen_bandwidth);
        case ClassifierKind::svm: return svm_fit(x, y, cfg.svm);
    }
    throw std::logic_error("unknown classifier kind");
}

// work unit: one (scenario, fraction, iteration); shares the split, the
// normalization and the forward ranking across feature counts and classifiers
struct UnitTask {
    std::size_t scenario_idx;
    std::size_t fraction_idx;
    int iteration;
};

} // namespace

EvalReport run_grid(const FeatureMatrix& features, const ExperimentConfig& config) {
    if (features.normalized && config.normalize_on != NormalizeOn::none)
        throw std::invalid_argument(
            "run_grid: input matrix already normalized; use normalize-on none");
    if (config.iterations < 1) throw std::invalid_argument("run_grid: iterations must be >= 1");
    for (double f : config.train_fractions)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("run_grid: train fraction outside (0,1)");

    // group rows by scenario
    std::map<int, ScenarioRows> by_scenario;
    for (std::size_t i = 0; i < features.rows.size(); ++i) {
        auto& sc = by_scenario[features.rows[i].scenario_id];
        sc.scenario_id = features.rows[i].scenario_id;
        sc.rows.push_back(i);
        sc.labels.push_back(features.rows[i].label);
    }
    std::vector<ScenarioRows> scenarios;
    for (auto& [id, sc] : by_scenario) scenarios.push_back(std::move(sc));

    EvalReport report;
    report.working_train_fraction = config.working_train_fraction;
    report.working_feature_count = config.working_feature_count;
    for (const auto& sc : scenarios) {
        int ns = 0, nn = 0;
        for (Label l : sc.labels) (l == Label::skilled ? ns : nn)++;
        if (report.n_skilled == 0) {
            report.n_skilled = ns;
            report.n_novice = nn;
        } else if (report.n_skilled != ns || report.n_novice != nn) {
            throw std::invalid_argument("run_grid: class sizes differ across scenarios");
        }
    }

    // optional fidelity mode: one ranking per scenario from all of its rows
    const int max_count = config.feature_counts.empty()
                              ? 0
                              : *std::max_element(config.feature_counts.begin(),
                                                  config.feature_counts.end());
    std::vector<std::vector<int>> global_rankings(scenarios.size());
    if (config.global_ranking) {
        for (std::size_t s = 0; s < scenarios.size(); ++s) {
            FeatureMatrix sub = submatrix(features, scenarios[s].rows);
            std::vector<std::size_t> all(sub.rows.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            FeatureMatrix norm = config.normalize_on == NormalizeOn::none
                                     ? sub
                                     : normalize(sub, all);
            SelectionResult filter = ttest_filter(norm, config.alpha, config.ttest);
            const int k = std::min<int>(max_count, static_cast<int>(filter.filtered_ids.size()));
            global_rankings[s] =
                forward_select(norm, k, filter.filtered_ids, {}).forward_ranking;
        }
    }

    // cell layout: scenario-major, then fraction, feature count, classifier, iteration
    const std::size_t n_counts = config.feature_counts.size();
    const std::size_t n_clf = config.classifiers.size();
    const std::size_t cells_per_unit = n_counts * n_clf;
    const std::size_t units_per_scenario = config.train_fractions.size() *
                                           static_cast<std::size_t>(config.iterations);
    report.cells.resize(scenarios.size() * units_per_scenario * cells_per_unit);

    std::vector<UnitTask> units;
    units.reserve(scenarios.size() * units_per_scenario);
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        for (std::size_t f = 0; f < config.train_fractions.size(); ++f)
            for (int it = 0; it < config.iterations; ++it) units.push_back({s, f, it});

    auto run_unit = [&](const UnitTask& unit) {
        const ScenarioRows& sc = scenarios[unit.scenario_idx];
        const double fraction = config.train_fractions[unit.fraction_idx];
        const std::uint64_t seed =
            mix_seed(config.master_seed, static_cast<std::uint64_t>(sc.scenario_id),
                     unit.fraction_idx, static_cast<std::uint64_t>(unit.iteration));

        const std::size_t unit_base =
            (unit.scenario_idx * config.train_fractions.size() + unit.fraction_idx) *
                static_cast<std::size_t>(config.iterations) * cells_per_unit +
            static_cast<std::size_t>(unit.iteration) * cells_per_unit;

        auto fill_cells = [&](const std::string& error_all) {
            for (std::size_t ci = 0; ci < n_counts; ++ci) {
                for (std::size_t cl = 0; cl < n_clf; ++cl) {
                    EvalCell& cell = report.cells[unit_base + ci * n_clf + cl];
                    cell.scenario_id = sc.scenario_id;
                    cell.classifier = config.classifiers[cl];
                    cell.train_fraction = fraction;
                    cell.n_features = config.feature_counts[ci];
                    cell.iteration = unit.iteration;
                    cell.eer = cell.sensitivity = cell.specificity = cell.threshold =
                        std::numeric_limits<double>::quiet_NaN();
                    cell.error = error_all;
                }
            }
        };
        fill_cells("unit not evaluated");

        try {
            FeatureMatrix sub = submatrix(features, sc.rows);
            const SplitResult split = config.stratify
                                          ? stratified_split(sc.labels, fraction, seed)
                                          : simple_split(sc.labels, fraction, seed);

            FeatureMatrix norm;
            switch (config.normalize_on) {
                case NormalizeOn::train: norm = normalize(sub, split.train); break;
                case NormalizeOn::full: {
                    std::vector<std::size_t> all(sub.rows.size());
                    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                    norm = normalize(sub, all);
                    break;
                }
                case NormalizeOn::none: norm = sub; break;
            }

            std::vector<Label> train_labels, test_labels;
            for (std::size_t r : split.train) train_labels.push_back(sc.labels[r]);
            for (std::size_t r : split.test) test_labels.push_back(sc.labels[r]);

            std::vector<int> ranking;
            if (config.global_ranking) {
                ranking = global_rankings[unit.scenario_idx];
            } else {
                FeatureMatrix train_matrix = submatrix(norm, split.train);
                SelectionResult filter = ttest_filter(train_matrix, config.alpha, config.ttest);
                const int k =
                    std::min<int>(max_count, static_cast<int>(filter.filtered_ids.size()));
                ranking = forward_select(train_matrix, k, filter.filtered_ids, {}).forward_ranking;
            }

            for (std::size_t ci = 0; ci < n_counts; ++ci) {
                const int want = config.feature_counts[ci];
                const int have = std::min<int>(want, static_cast<int>(ranking.size()));
                std::vector<int> ids(ranking.begin(), ranking.begin() + have);
                for (std::size_t cl = 0; cl < n_clf; ++cl) {
                    EvalCell& cell = report.cells[unit_base + ci * n_clf + cl];
                    try {
                        if (ids.empty())
                            throw std::runtime_error("no features passed the filter");
                        const auto xtr = project(norm, split.train, ids);
                        const auto xte = project(norm, split.test, ids);
                        TrainedClassifier clf =
                            fit_classifier(config.classifiers[cl], config, xtr, train_labels);
                        clf.feature_ids = ids;
                        std::vector<double> scores(xte.size());
                        for (std::size_t i = 0; i < xte.size(); ++i)
                            scores[i] = clf.score(xte[i]);
                        const EerResult eer = compute_eer(scores, test_labels);
                        cell.eer = eer.eer;
                        cell.sensitivity = eer.sensitivity;
                        cell.specificity = eer.specificity;
                        cell.threshold = eer.threshold;
                        cell.error.clear();

                        const bool working_point =
                            std::fabs(fraction - config.working_train_fraction) < 1e-9 &&
                            want == config.working_feature_count;
                        if (working_point) {
                            std::vector<std::size_t> all(norm.rows.size());
                            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                            const auto xall = project(norm, all, ids);
                            int cs = 0, cn = 0;
                            for (std::size_t i = 0; i < xall.size(); ++i) {
                                const bool predicted_skilled =
                                    clf.score(xall[i]) >= eer.threshold;
                                if (sc.labels[i] == Label::skilled && predicted_skilled) ++cs;
                                if (sc.labels[i] == Label::novice && !predicted_skilled) ++cn;
                            }
                            cell.correct_skilled = cs;
                            cell.correct_novice = cn;
                        }
                    } catch (const std::exception& e) {
                        cell.eer = cell.sensitivity = cell.specificity = cell.threshold =
                            std::numeric_limits<double>::quiet_NaN();
                        cell.error = e.what();
                    }
                }
            }
        } catch (const std::exception& e) {
            fill_cells(e.what()); // split/normalization/selection failed for the whole unit
        }
    };

    const int workers = std::max(1, config.workers);
    if (workers == 1 || units.size() < 2) {
        for (const auto& u : units) run_unit(u);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(workers, static_cast<int>(units.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= units.size()) return;
                    run_unit(units[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return report;
}

ConfusionSummary confusion_ranges(const EvalReport& report) {
    ConfusionSummary s;
    s.n_skilled = report.n_skilled;
    s.n_novice = report.n_novice;
    for (const auto& cell : report.cells) {
        if (cell.correct_skilled < 0 || cell.failed()) continue;
        auto [it, fresh] = s.per_classifier.try_emplace(cell.classifier);
        auto& r = it->second;
        if (fresh) {
            r.min_correct_skilled = r.max_correct_skilled = cell.correct_skilled;
            r.min_correct_novice = r.max_correct_novice = cell.correct_novice;
        } else {
            r.min_correct_skilled = std::min(r.min_correct_skilled, cell.correct_skilled);
            r.max_correct_skilled = std::max(r.max_correct_skilled, cell.correct_skilled);
            r.min_correct_novice = std::min(r.min_correct_novice, cell.correct_novice);
            r.max_correct_novice = std::max(r.max_correct_novice, cell.correct_novice);
        }
        ++r.cells;
    }
    if (s.per_classifier.empty())
        throw std::runtime_error("confusion_ranges: no working-point cells in report");
    return s;
}

} // namespace skillml
