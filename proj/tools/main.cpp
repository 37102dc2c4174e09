// Command-line pipeline: generate -> extract -> select -> evaluate -> report.
// Every verb writes a run_manifest.json into its output directory; `rerun`
// replays a manifest and reproduces the data outputs byte-identically.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "skillml/datagen.hpp"
#include "skillml/evaluation.hpp"
#include "skillml/features.hpp"
#include "skillml/io.hpp"
#include "skillml/selection.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skillml;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_s) {
    json m;
    m["tool"] = "skillml";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["wall_time_s"] = wall_s;
    std::ofstream f(dir / "run_manifest.json");
    f << m.dump(2) << '\n';
}

// --- generate ---------------------------------------------------------------

json generator_config_to_json(const GeneratorConfig& g, const std::string& out_dir) {
    json j;
    j["out_dir"] = out_dir;
    j["n_skilled"] = g.n_skilled;
    j["n_novice"] = g.n_novice;
    j["delta"] = g.delta;
    j["sample_rate_hz"] = g.sample_rate_hz;
    j["segment_duration_s"] = g.segment_duration_s;
    j["scenarios"] = g.scenarios;
    j["seed"] = g.seed;
    j["perturb_jitter"] = g.perturb_jitter;
    j["perturb_submovements"] = g.perturb_submovements;
    j["perturb_force_tremor"] = g.perturb_force_tremor;
    j["perturb_pedal_chatter"] = g.perturb_pedal_chatter;
    return j;
}

GeneratorConfig generator_config_from_json(const json& j) {
    GeneratorConfig g;
    g.n_skilled = j.at("n_skilled");
    g.n_novice = j.at("n_novice");
    g.delta = j.at("delta");
    g.sample_rate_hz = j.at("sample_rate_hz");
    g.segment_duration_s = j.at("segment_duration_s");
    g.scenarios = j.at("scenarios").get<std::vector<int>>();
    g.seed = j.at("seed");
    g.perturb_jitter = j.at("perturb_jitter");
    g.perturb_submovements = j.at("perturb_submovements");
    g.perturb_force_tremor = j.at("perturb_force_tremor");
    g.perturb_pedal_chatter = j.at("perturb_pedal_chatter");
    return g;
}

int run_generate(const GeneratorConfig& g, const fs::path& out_dir) {
    Timer timer;
    Dataset ds = generate(g);
    const ValidationReport vr = validate_dataset(ds);
    if (!vr.ok()) {
        for (const auto& v : vr.violations) std::cerr << "generate: " << v << '\n';
        return 1;
    }
    write_dataset(out_dir, ds);
    write_manifest(out_dir, "generate", generator_config_to_json(g, out_dir.string()), {},
                   {(out_dir / "manifest.csv").string()}, timer.seconds());
    std::cout << "generate: " << ds.trials.size() << " trials ("
              << ds.count(Label::skilled) << " skilled / " << ds.count(Label::novice)
              << " novice segments) -> " << out_dir.string() << '\n';
    return 0;
}

// --- extract ----------------------------------------------------------------

int run_extract(const fs::path& in_dir, const fs::path& out_dir, const std::string& normalize_on) {
    Timer timer;
    Dataset ds = read_dataset(in_dir);
    const ValidationReport vr = validate_dataset(ds);
    if (!vr.ok()) {
        for (const auto& v : vr.violations) std::cerr << "extract: invalid input: " << v << '\n';
        return 1;
    }

    // group segments by (subject, scenario) preserving first-seen order
    std::map<std::pair<std::string, int>, std::vector<Trial>> groups;
    std::vector<std::pair<std::string, int>> order;
    for (const Trial& t : ds.trials) {
        auto key = std::make_pair(t.subject_id, t.scenario_id);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(t);
    }
    FeatureMatrix m;
    for (const auto& key : order) {
        auto& segs = groups[key];
        std::sort(segs.begin(), segs.end(),
                  [](const Trial& a, const Trial& b) { return a.tumor_id < b.tumor_id; });
        m.rows.push_back(extract_features(std::span<const Trial>(segs)));
    }

    if (normalize_on == "full") {
        std::vector<std::size_t> all(m.rows.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        m = normalize(m, all);
    } else if (normalize_on != "none") {
        std::cerr << "extract: --normalize-on must be none or full\n";
        return 1;
    }

    fs::create_directories(out_dir);
    write_feature_csv(out_dir / "features.csv", m);
    json cfg;
    cfg["in_dir"] = in_dir.string();
    cfg["out_dir"] = out_dir.string();
    cfg["normalize_on"] = normalize_on;
    write_manifest(out_dir, "extract", cfg, {(in_dir / "manifest.csv").string()},
                   {(out_dir / "features.csv").string()}, timer.seconds());
    std::cout << "extract: " << m.rows.size() << " feature rows -> "
              << (out_dir / "features.csv").string() << '\n';
    return 0;
}

// --- select -----------------------------------------------------------------

int run_select(const fs::path& features_path, const fs::path& out_dir, double alpha, int k_max,
               const std::string& ttest) {
    Timer timer;
    FeatureMatrix m = read_feature_csv(features_path);
    std::vector<std::size_t> all(m.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    FeatureMatrix norm = normalize(m, all);

    const TTestVariant variant =
        ttest == "student" ? TTestVariant::student : TTestVariant::welch;
    PremierResult pr = premier_subsets(norm, alpha, variant);
    if (k_max > 0 &&
        static_cast<std::size_t>(k_max) < pr.selection.forward_ranking.size()) {
        pr.selection.forward_ranking.resize(k_max);
        pr.selection.criterion_trace.resize(k_max);
        for (auto it = pr.subsets.begin(); it != pr.subsets.end();)
            it = it->first > k_max ? pr.subsets.erase(it) : std::next(it);
    }
    if (pr.truncated)
        std::cerr << "select: warning: only " << pr.selection.filtered_ids.size()
                  << " features passed the filter; premier map truncated\n";

    fs::create_directories(out_dir);
    write_selection_report(out_dir / "selection.txt", pr);
    json cfg;
    cfg["features"] = features_path.string();
    cfg["out_dir"] = out_dir.string();
    cfg["alpha"] = alpha;
    cfg["k_max"] = k_max;
    cfg["ttest"] = ttest;
    write_manifest(out_dir, "select", cfg, {features_path.string()},
                   {(out_dir / "selection.txt").string()}, timer.seconds());
    std::cout << "select: " << pr.selection.filtered_ids.size() << " features pass p < "
              << alpha << "; report -> " << (out_dir / "selection.txt").string() << '\n';
    return 0;
}

// --- evaluate ---------------------------------------------------------------

json experiment_config_to_json(const ExperimentConfig& c) {
    json j;
    j["train_fractions"] = c.train_fractions;
    j["feature_counts"] = c.feature_counts;
    j["iterations"] = c.iterations;
    std::vector<std::string> clf;
    for (auto k : c.classifiers) clf.push_back(to_string(k));
    j["classifiers"] = clf;
    j["master_seed"] = c.master_seed;
    j["working_train_fraction"] = c.working_train_fraction;
    j["working_feature_count"] = c.working_feature_count;
    j["stratify"] = c.stratify;
    j["normalize_on"] = to_string(c.normalize_on);
    j["global_ranking"] = c.global_ranking;
    j["alpha"] = c.alpha;
    j["ttest"] = c.ttest == TTestVariant::student ? "student" : "welch";
    j["workers"] = c.workers;
    j["knn_k"] = c.knn_k;
    j["fknn_k"] = c.fknn_k;
    j["fknn_m"] = c.fknn_m;
    j["parzen_bandwidth"] = c.parzen_bandwidth;
    j["svm_c"] = c.svm.c;
    j["svm_kernel"] = c.svm.kernel == SvmKernel::linear ? "linear" : "rbf";
    j["svm_gamma"] = c.svm.gamma;
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    c.train_fractions = j.at("train_fractions").get<std::vector<double>>();
    c.feature_counts = j.at("feature_counts").get<std::vector<int>>();
    c.iterations = j.at("iterations");
    c.classifiers.clear();
    for (const auto& s : j.at("classifiers"))
        c.classifiers.push_back(classifier_from_string(s.get<std::string>()));
    c.master_seed = j.at("master_seed");
    c.working_train_fraction = j.at("working_train_fraction");
    c.working_feature_count = j.at("working_feature_count");
    c.stratify = j.at("stratify");
    c.normalize_on = normalize_on_from_string(j.at("normalize_on"));
    c.global_ranking = j.at("global_ranking");
    c.alpha = j.at("alpha");
    c.ttest = j.at("ttest") == "student" ? TTestVariant::student : TTestVariant::welch;
    c.workers = j.at("workers");
    c.knn_k = j.at("knn_k");
    c.fknn_k = j.at("fknn_k");
    c.fknn_m = j.at("fknn_m");
    c.parzen_bandwidth = j.at("parzen_bandwidth");
    c.svm.c = j.at("svm_c");
    c.svm.kernel = j.at("svm_kernel") == "linear" ? SvmKernel::linear : SvmKernel::rbf;
    c.svm.gamma = j.at("svm_gamma");
    return c;
}

int run_evaluate(const fs::path& features_path, const fs::path& out_dir,
                 const ExperimentConfig& cfg) {
    Timer timer;
    FeatureMatrix m = read_feature_csv(features_path);
    EvalReport report = run_grid(m, cfg);
    fs::create_directories(out_dir);
    write_report_csv(out_dir / "report.csv", report);
    write_confusion_csv(out_dir / "confusion.csv", report);
    write_summary(out_dir / "summary.txt", report);
    json jcfg = experiment_config_to_json(cfg);
    jcfg["features"] = features_path.string();
    jcfg["out_dir"] = out_dir.string();
    write_manifest(out_dir, "evaluate", jcfg, {features_path.string()},
                   {(out_dir / "report.csv").string(), (out_dir / "summary.txt").string()},
                   timer.seconds());
    std::size_t failed = 0;
    for (const auto& c : report.cells)
        if (c.failed()) ++failed;
    std::cout << "evaluate: " << report.cells.size() << " cells (" << failed
              << " failed) -> " << (out_dir / "report.csv").string() << '\n';
    return 0;
}

// --- report -----------------------------------------------------------------

int run_report(const fs::path& report_path, const fs::path& out_dir, double working_fraction,
               int working_count) {
    Timer timer;
    EvalReport report = read_report_csv(report_path);
    report.working_train_fraction = working_fraction;
    report.working_feature_count = working_count;
    const fs::path confusion = report_path.parent_path() / "confusion.csv";
    if (fs::exists(confusion)) read_confusion_csv(confusion, report);
    write_aggregations(out_dir, report);
    json cfg;
    cfg["report"] = report_path.string();
    cfg["out_dir"] = out_dir.string();
    cfg["working_train_fraction"] = working_fraction;
    cfg["working_feature_count"] = working_count;
    write_manifest(out_dir, "report", cfg, {report_path.string()},
                   {(out_dir / "by_train_fraction.csv").string(),
                    (out_dir / "by_feature_count.csv").string(),
                    (out_dir / "working_point.csv").string()},
                   timer.seconds());
    std::cout << "report: aggregations -> " << out_dir.string() << '\n';
    return 0;
}

int run_catalog(const fs::path& out) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        os = &file;
    }
    *os << "id,force_based,best30,best15,description\n";
    for (const auto& def : feature_catalog())
        *os << def.id << ',' << (def.force_based ? 1 : 0) << ',' << (def.best30 ? 1 : 0) << ','
            << (def.best15 ? 1 : 0) << ',' << def.description << '\n';
    return 0;
}

int dispatch_manifest(const fs::path& manifest_path);

int run_pipeline(const fs::path& out_dir, GeneratorConfig g, ExperimentConfig e) {
    const fs::path data_dir = out_dir / "dataset";
    const fs::path feat_dir = out_dir / "features";
    const fs::path sel_dir = out_dir / "selection";
    const fs::path eval_dir = out_dir / "evaluation";
    const fs::path report_dir = out_dir / "report";
    Timer timer;
    if (int rc = run_generate(g, data_dir)) return rc;
    if (int rc = run_extract(data_dir, feat_dir, "none")) return rc;
    if (int rc = run_select(feat_dir / "features.csv", sel_dir, e.alpha, 30,
                            e.ttest == TTestVariant::student ? "student" : "welch"))
        return rc;
    if (int rc = run_evaluate(feat_dir / "features.csv", eval_dir, e)) return rc;
    if (int rc = run_report(eval_dir / "report.csv", report_dir, e.working_train_fraction,
                            e.working_feature_count))
        return rc;
    fs::create_directories(out_dir);
    json cfg;
    cfg["out_dir"] = out_dir.string();
    cfg["generator"] = generator_config_to_json(g, data_dir.string());
    cfg["experiment"] = experiment_config_to_json(e);
    write_manifest(out_dir, "pipeline", cfg, {}, {report_dir.string()}, timer.seconds());
    return 0;
}

int dispatch_manifest(const fs::path& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) {
        std::cerr << "rerun: cannot open " << manifest_path << '\n';
        return 1;
    }
    json m = json::parse(f);
    const std::string command = m.at("command");
    const json& cfg = m.at("config");
    if (command == "generate")
        return run_generate(generator_config_from_json(cfg),
                            fs::path(cfg.at("out_dir").get<std::string>()));
    if (command == "extract")
        return run_extract(fs::path(cfg.at("in_dir").get<std::string>()),
                           fs::path(cfg.at("out_dir").get<std::string>()),
                           cfg.at("normalize_on"));
    if (command == "select")
        return run_select(fs::path(cfg.at("features").get<std::string>()),
                          fs::path(cfg.at("out_dir").get<std::string>()), cfg.at("alpha"),
                          cfg.at("k_max"), cfg.at("ttest"));
    if (command == "evaluate")
        return run_evaluate(fs::path(cfg.at("features").get<std::string>()),
                            fs::path(cfg.at("out_dir").get<std::string>()),
                            experiment_config_from_json(cfg));
    if (command == "report")
        return run_report(fs::path(cfg.at("report").get<std::string>()),
                          fs::path(cfg.at("out_dir").get<std::string>()),
                          cfg.at("working_train_fraction"), cfg.at("working_feature_count"));
    if (command == "pipeline")
        return run_pipeline(fs::path(cfg.at("out_dir").get<std::string>()),
                            generator_config_from_json(cfg.at("generator")),
                            experiment_config_from_json(cfg.at("experiment")));
    std::cerr << "rerun: unknown command in manifest: " << command << '\n';
    return 1;
}

void add_generator_flags(CLI::App* cmd, GeneratorConfig& g) {
    cmd->add_option("--skilled", g.n_skilled, "skilled subjects");
    cmd->add_option("--novice", g.n_novice, "novice subjects");
    cmd->add_option("--delta", g.delta, "separability knob, 0 = identical classes");
    cmd->add_option("--rate", g.sample_rate_hz, "sample rate, Hz");
    cmd->add_option("--duration", g.segment_duration_s, "seconds per tumor segment");
    cmd->add_option("--scenarios", g.scenarios, "scenario ids (1..6)");
    cmd->add_option("--seed", g.seed, "generator seed");
    cmd->add_flag("--no-jitter", [&g](std::int64_t) { g.perturb_jitter = false; },
                  "disable novice positional jitter");
    cmd->add_flag("--no-extra-submovements",
                  [&g](std::int64_t) { g.perturb_submovements = false; },
                  "disable novice extra submovements");
    cmd->add_flag("--no-force-tremor", [&g](std::int64_t) { g.perturb_force_tremor = false; },
                  "disable novice force tremor");
    cmd->add_flag("--no-pedal-chatter", [&g](std::int64_t) { g.perturb_pedal_chatter = false; },
                  "disable novice pedal chatter");
}

void add_experiment_flags(CLI::App* cmd, ExperimentConfig& e, std::vector<std::string>& clf,
                          std::string& normalize_on, std::string& ttest, std::string& kernel) {
    cmd->add_option("--fractions", e.train_fractions, "train fractions");
    cmd->add_option("--counts", e.feature_counts, "premier feature counts");
    cmd->add_option("--iterations", e.iterations, "iterations per cell");
    cmd->add_option("--classifiers", clf, "subset of knn,parzen,svm,fknn");
    cmd->add_option("--master-seed", e.master_seed, "master seed");
    cmd->add_option("--working-fraction", e.working_train_fraction, "working-point fraction");
    cmd->add_option("--working-count", e.working_feature_count, "working-point feature count");
    cmd->add_flag("--no-stratify", [&e](std::int64_t) { e.stratify = false; },
                  "simple instead of stratified splits");
    cmd->add_option("--normalize-on", normalize_on, "train|full|none")
        ->check(CLI::IsMember({"train", "full", "none"}));
    cmd->add_flag("--global-ranking", e.global_ranking,
                  "one feature ranking per scenario instead of per cell");
    cmd->add_option("--alpha", e.alpha, "filter significance level");
    cmd->add_option("--ttest", ttest, "welch|student")
        ->check(CLI::IsMember({"welch", "student"}));
    cmd->add_option("--workers", e.workers, "evaluation worker threads");
    cmd->add_option("--knn-k", e.knn_k, "KNN neighbor count");
    cmd->add_option("--fknn-k", e.fknn_k, "FKNN neighbor count");
    cmd->add_option("--fknn-m", e.fknn_m, "FKNN fuzzifier");
    cmd->add_option("--parzen-bandwidth", e.parzen_bandwidth,
                    "Parzen bandwidth (<=0 = Silverman)");
    cmd->add_option("--svm-c", e.svm.c, "SVM C");
    cmd->add_option("--svm-kernel", kernel, "rbf|linear")
        ->check(CLI::IsMember({"rbf", "linear"}));
    cmd->add_option("--svm-gamma", e.svm.gamma, "SVM gamma (<=0 = 1/(d*var))");
}

void finish_experiment_config(ExperimentConfig& e, const std::vector<std::string>& clf,
                              const std::string& normalize_on, const std::string& ttest,
                              const std::string& kernel) {
    if (!clf.empty()) {
        e.classifiers.clear();
        for (const auto& s : clf) e.classifiers.push_back(classifier_from_string(s));
    }
    e.normalize_on = normalize_on_from_string(normalize_on);
    e.ttest = ttest == "student" ? TTestVariant::student : TTestVariant::welch;
    e.svm.kernel = kernel == "linear" ? SvmKernel::linear : SvmKernel::rbf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"surgical-skill classification pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GeneratorConfig gen_cfg;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a synthetic trial dataset");
    gen->add_option("--out-dir", gen_out, "output directory")->required();
    add_generator_flags(gen, gen_cfg);

    std::string ext_in, ext_out, ext_norm = "none";
    auto* ext = app.add_subcommand("extract", "compute per-scenario feature vectors");
    ext->add_option("--in-dir", ext_in, "dataset directory")->required();
    ext->add_option("--out-dir", ext_out, "output directory")->required();
    ext->add_option("--normalize-on", ext_norm, "none|full (train-fitted happens in evaluate)")
        ->check(CLI::IsMember({"none", "full"}));

    std::string sel_features, sel_out, sel_ttest = "welch";
    double sel_alpha = 0.05;
    int sel_kmax = 30;
    auto* sel = app.add_subcommand("select", "t-test filter plus forward ranking");
    sel->add_option("--features", sel_features, "features.csv path")->required();
    sel->add_option("--out-dir", sel_out, "output directory")->required();
    sel->add_option("--alpha", sel_alpha, "filter significance level");
    sel->add_option("--k-max", sel_kmax, "ranking length cap");
    sel->add_option("--ttest", sel_ttest, "welch|student")
        ->check(CLI::IsMember({"welch", "student"}));

    ExperimentConfig eval_cfg;
    std::string eval_features, eval_out;
    std::vector<std::string> eval_clf;
    std::string eval_norm = "train", eval_ttest = "welch", eval_kernel = "rbf";
    auto* eval = app.add_subcommand("evaluate", "run the EER grid");
    eval->add_option("--features", eval_features, "features.csv path")->required();
    eval->add_option("--out-dir", eval_out, "output directory")->required();
    add_experiment_flags(eval, eval_cfg, eval_clf, eval_norm, eval_ttest, eval_kernel);

    std::string rep_report, rep_out;
    double rep_fraction = 0.5;
    int rep_count = 15;
    auto* rep = app.add_subcommand("report", "plot-ready aggregations from a report csv");
    rep->add_option("--report", rep_report, "report.csv path")->required();
    rep->add_option("--out-dir", rep_out, "output directory")->required();
    rep->add_option("--working-fraction", rep_fraction, "working-point fraction");
    rep->add_option("--working-count", rep_count, "working-point feature count");

    GeneratorConfig pipe_gen;
    ExperimentConfig pipe_eval;
    std::string pipe_out;
    std::vector<std::string> pipe_clf;
    std::string pipe_norm = "train", pipe_ttest = "welch", pipe_kernel = "rbf";
    auto* pipe = app.add_subcommand("pipeline", "generate + extract + select + evaluate + report");
    pipe->add_option("--out-dir", pipe_out, "output directory")->required();
    add_generator_flags(pipe, pipe_gen);
    add_experiment_flags(pipe, pipe_eval, pipe_clf, pipe_norm, pipe_ttest, pipe_kernel);

    std::string cat_out;
    auto* cat = app.add_subcommand("catalog", "print the feature catalog");
    cat->add_option("--out", cat_out, "write to a file instead of stdout");

    std::string rerun_manifest;
    auto* rer = app.add_subcommand("rerun", "replay a run_manifest.json");
    rer->add_option("manifest", rerun_manifest, "manifest path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(gen_cfg, gen_out);
        if (ext->parsed()) return run_extract(ext_in, ext_out, ext_norm);
        if (sel->parsed())
            return run_select(sel_features, sel_out, sel_alpha, sel_kmax, sel_ttest);
        if (eval->parsed()) {
            finish_experiment_config(eval_cfg, eval_clf, eval_norm, eval_ttest, eval_kernel);
            return run_evaluate(eval_features, eval_out, eval_cfg);
        }
        if (rep->parsed()) return run_report(rep_report, rep_out, rep_fraction, rep_count);
        if (pipe->parsed()) {
            finish_experiment_config(pipe_eval, pipe_clf, pipe_norm, pipe_ttest, pipe_kernel);
            return run_pipeline(pipe_out, pipe_gen, pipe_eval);
        }
        if (cat->parsed()) return run_catalog(cat_out);
        if (rer->parsed()) return dispatch_manifest(rerun_manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
