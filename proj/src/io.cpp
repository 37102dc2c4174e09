#include "skillml/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace skillml {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    return f;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
    return f;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": malformed number '" + s + "'");
    }
}

void expect_header(const std::string& got, const std::string& want, const fs::path& path) {
    std::string g = got;
    if (!g.empty() && g.back() == '\r') g.pop_back();
    if (g != want)
        throw std::runtime_error(path.string() + ": unexpected header '" + g + "', expected '" +
                                 want + "'");
}

} // namespace

void write_dataset(const fs::path& dir, const Dataset& dataset) {
    fs::create_directories(dir);
    std::ofstream manifest = open_out(dir / "manifest.csv");
    manifest << "trial_id,subject_id,scenario_id,tumor_id,tumor_color,tumor_stiffness_kpa,"
                "label,sample_rate_hz\n";
    for (const Trial& t : dataset.trials) {
        manifest << t.id << ',' << t.subject_id << ',' << t.scenario_id << ',' << t.tumor_id
                 << ',' << to_string(t.tumor_color) << ',' << format_double(t.tumor_stiffness_kpa)
                 << ',' << to_string(t.label) << ',' << format_double(t.sample_rate_hz()) << '\n';

        std::ofstream f = open_out(dir / (t.id + ".csv"));
        f << "t,x,y,z,roll,pitch,yaw,force,pedal,region\n";
        const double dt = 1.0 / t.sample_rate_hz();
        for (std::size_t i = 0; i < t.sample_count(); ++i) {
            f << format_double(static_cast<double>(i) * dt) << ','
              << format_double(t.position[0].samples[i]) << ','
              << format_double(t.position[1].samples[i]) << ','
              << format_double(t.position[2].samples[i]) << ','
              << format_double(t.angles[0].samples[i]) << ','
              << format_double(t.angles[1].samples[i]) << ','
              << format_double(t.angles[2].samples[i]) << ','
              << format_double(t.force.samples[i]) << ',' << (t.pedal[i] ? '1' : '0') << ','
              << to_string(t.region[i]) << '\n';
        }
    }
}

Dataset read_dataset(const fs::path& dir) {
    std::ifstream manifest = open_in(dir / "manifest.csv");
    std::string line;
    std::getline(manifest, line);
    expect_header(line,
                  "trial_id,subject_id,scenario_id,tumor_id,tumor_color,tumor_stiffness_kpa,"
                  "label,sample_rate_hz",
                  dir / "manifest.csv");
    Dataset ds;
    std::size_t line_no = 1;
    while (std::getline(manifest, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 8)
            throw std::runtime_error(dir.string() + "/manifest.csv:" + std::to_string(line_no) +
                                     ": expected 8 columns, got " + std::to_string(cols.size()));
        Trial t;
        t.id = cols[0];
        t.subject_id = cols[1];
        t.scenario_id = static_cast<int>(parse_double(cols[2], dir / "manifest.csv", line_no));
        t.tumor_id = static_cast<int>(parse_double(cols[3], dir / "manifest.csv", line_no));
        t.tumor_color = tumor_color_from_string(cols[4]);
        t.tumor_stiffness_kpa = parse_double(cols[5], dir / "manifest.csv", line_no);
        t.label = label_from_string(cols[6]);
        const double rate = parse_double(cols[7], dir / "manifest.csv", line_no);

        const fs::path trial_path = dir / (t.id + ".csv");
        std::ifstream tf = open_in(trial_path);
        std::string tline;
        std::getline(tf, tline);
        expect_header(tline, "t,x,y,z,roll,pitch,yaw,force,pedal,region", trial_path);
        for (auto* c : {&t.position[0], &t.position[1], &t.position[2], &t.angles[0],
                        &t.angles[1], &t.angles[2], &t.force})
            c->sample_rate_hz = rate;
        t.position[0].name = "x";
        t.position[1].name = "y";
        t.position[2].name = "z";
        t.angles[0].name = "roll";
        t.angles[1].name = "pitch";
        t.angles[2].name = "yaw";
        t.force.name = "force";
        std::size_t tline_no = 1;
        while (std::getline(tf, tline)) {
            ++tline_no;
            if (tline.empty() || tline == "\r") continue;
            const auto c = split_csv_line(tline);
            if (c.size() != 10)
                throw std::runtime_error(trial_path.string() + ":" + std::to_string(tline_no) +
                                         ": expected 10 columns, got " +
                                         std::to_string(c.size()));
            t.position[0].samples.push_back(parse_double(c[1], trial_path, tline_no));
            t.position[1].samples.push_back(parse_double(c[2], trial_path, tline_no));
            t.position[2].samples.push_back(parse_double(c[3], trial_path, tline_no));
            t.angles[0].samples.push_back(parse_double(c[4], trial_path, tline_no));
            t.angles[1].samples.push_back(parse_double(c[5], trial_path, tline_no));
            t.angles[2].samples.push_back(parse_double(c[6], trial_path, tline_no));
            t.force.samples.push_back(parse_double(c[7], trial_path, tline_no));
            t.pedal.push_back(c[8] == "1" ? 1 : 0);
            t.region.push_back(region_from_string(c[9]));
        }
        t.duration_s = t.force.duration_s();
        ds.trials.push_back(std::move(t));
    }
    return ds;
}

void write_feature_csv(const fs::path& path, const FeatureMatrix& matrix) {
    std::ofstream f = open_out(path);
    f << "trial_id,label,scenario_id";
    for (int j = 1; j <= kFeatureCount; ++j) {
        char col[8];
        std::snprintf(col, sizeof col, ",f%02d", j);
        f << col;
    }
    f << '\n';
    for (const auto& row : matrix.rows) {
        f << row.trial_id << ',' << to_string(row.label) << ',' << row.scenario_id;
        for (int j = 0; j < kFeatureCount; ++j) f << ',' << format_double(row.values[j]);
        f << '\n';
    }
}

FeatureMatrix read_feature_csv(const fs::path& path) {
    std::ifstream f = open_in(path);
    std::string line;
    std::getline(f, line);
    std::string want = "trial_id,label,scenario_id";
    for (int j = 1; j <= kFeatureCount; ++j) {
        char col[8];
        std::snprintf(col, sizeof col, ",f%02d", j);
        want += col;
    }
    expect_header(line, want, path);
    FeatureMatrix m;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 3 + kFeatureCount)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(3 + kFeatureCount) +
                                     " columns, got " + std::to_string(cols.size()));
        FeatureVector row;
        row.trial_id = cols[0];
        row.label = label_from_string(cols[1]);
        row.scenario_id = static_cast<int>(parse_double(cols[2], path, line_no));
        for (int j = 0; j < kFeatureCount; ++j)
            row.values[j] = parse_double(cols[3 + j], path, line_no);
        m.rows.push_back(std::move(row));
    }
    return m;
}

void write_selection_report(const fs::path& path, const PremierResult& result) {
    std::ofstream f = open_out(path);
    const auto& sel = result.selection;
    f << "# feature selection report\n";
    f << "alpha: " << format_double(sel.alpha) << "\n\n";
    f << "## p-values\n";
    const auto catalog = feature_catalog();
    for (int j = 0; j < kFeatureCount; ++j)
        f << "f" << (j + 1 < 10 ? "0" : "") << j + 1 << "  p=" << format_double(sel.p_values[j])
          << "  " << catalog[j].description << '\n';
    f << "\n## filtered (p < alpha): " << sel.filtered_ids.size() << " features\n";
    for (std::size_t i = 0; i < sel.filtered_ids.size(); ++i)
        f << (i ? "," : "") << sel.filtered_ids[i];
    f << '\n';
    if (!sel.degenerate_ids.empty()) {
        f << "\n## degenerate (constant in both classes)\n";
        for (std::size_t i = 0; i < sel.degenerate_ids.size(); ++i)
            f << (i ? "," : "") << sel.degenerate_ids[i];
        f << '\n';
    }
    f << "\n## forward ranking (criterion trace)\n";
    for (std::size_t i = 0; i < sel.forward_ranking.size(); ++i)
        f << i + 1 << ". f" << sel.forward_ranking[i] << "  criterion="
          << format_double(sel.criterion_trace[i]) << '\n';
    f << "\n## premier subsets" << (result.truncated ? " (truncated: filtered pool < 30)" : "")
      << '\n';
    for (const auto& [size, ids] : result.subsets) {
        f << "best-" << size << ": ";
        for (std::size_t i = 0; i < ids.size(); ++i) f << (i ? "," : "") << ids[i];
        f << '\n';
    }
}

void write_report_csv(const fs::path& path, const EvalReport& report) {
    std::ofstream f = open_out(path);
    f << "scenario,classifier,train_frac,n_features,iteration,eer,sensitivity,specificity,"
         "threshold\n";
    for (const auto& c : report.cells) {
        f << c.scenario_id << ',' << to_string(c.classifier) << ','
          << format_double(c.train_fraction) << ',' << c.n_features << ',' << c.iteration << ','
          << format_double(c.eer) << ',' << format_double(c.sensitivity) << ','
          << format_double(c.specificity) << ',' << format_double(c.threshold) << '\n';
    }
}

EvalReport read_report_csv(const fs::path& path) {
    std::ifstream f = open_in(path);
    std::string line;
    std::getline(f, line);
    expect_header(line,
                  "scenario,classifier,train_frac,n_features,iteration,eer,sensitivity,"
                  "specificity,threshold",
                  path);
    EvalReport report;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto c = split_csv_line(line);
        if (c.size() != 9)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 9 columns, got " + std::to_string(c.size()));
        EvalCell cell;
        cell.scenario_id = static_cast<int>(parse_double(c[0], path, line_no));
        cell.classifier = classifier_from_string(c[1]);
        cell.train_fraction = parse_double(c[2], path, line_no);
        cell.n_features = static_cast<int>(parse_double(c[3], path, line_no));
        cell.iteration = static_cast<int>(parse_double(c[4], path, line_no));
        cell.eer = parse_double(c[5], path, line_no);
        cell.sensitivity = parse_double(c[6], path, line_no);
        cell.specificity = parse_double(c[7], path, line_no);
        cell.threshold = parse_double(c[8], path, line_no);
        if (std::isnan(cell.eer)) cell.error = "failed cell (from report csv)";
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void write_confusion_csv(const fs::path& path, const EvalReport& report) {
    std::ofstream f = open_out(path);
    f << "scenario,classifier,train_frac,n_features,iteration,correct_skilled,correct_novice,"
         "n_skilled,n_novice\n";
    for (const auto& c : report.cells) {
        if (c.correct_skilled < 0 || c.failed()) continue;
        f << c.scenario_id << ',' << to_string(c.classifier) << ','
          << format_double(c.train_fraction) << ',' << c.n_features << ',' << c.iteration << ','
          << c.correct_skilled << ',' << c.correct_novice << ',' << report.n_skilled << ','
          << report.n_novice << '\n';
    }
}

void read_confusion_csv(const fs::path& path, EvalReport& report) {
    std::ifstream f = open_in(path);
    std::string line;
    std::getline(f, line);
    expect_header(line,
                  "scenario,classifier,train_frac,n_features,iteration,correct_skilled,"
                  "correct_novice,n_skilled,n_novice",
                  path);
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto c = split_csv_line(line);
        if (c.size() != 9)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 9 columns, got " + std::to_string(c.size()));
        EvalCell cell;
        cell.scenario_id = static_cast<int>(parse_double(c[0], path, line_no));
        cell.classifier = classifier_from_string(c[1]);
        cell.train_fraction = parse_double(c[2], path, line_no);
        cell.n_features = static_cast<int>(parse_double(c[3], path, line_no));
        cell.iteration = static_cast<int>(parse_double(c[4], path, line_no));
        cell.correct_skilled = static_cast<int>(parse_double(c[5], path, line_no));
        cell.correct_novice = static_cast<int>(parse_double(c[6], path, line_no));
        // counts-only row: nan metrics keep it out of the EER aggregations
        cell.eer = cell.sensitivity = cell.specificity = cell.threshold =
            std::numeric_limits<double>::quiet_NaN();
        report.n_skilled = static_cast<int>(parse_double(c[7], path, line_no));
        report.n_novice = static_cast<int>(parse_double(c[8], path, line_no));
        report.cells.push_back(std::move(cell));
    }
}

namespace {

struct MeanAcc {
    double sum = 0.0;
    int n = 0;
    void add(double v) {
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    }
    double mean() const { return n ? sum / n : std::nan(""); }
};

} // namespace

std::string format_confusion_table(const ConfusionSummary& s) {
    std::ostringstream os;
    const int total = s.n_skilled + s.n_novice;
    for (const auto& [kind, r] : s.per_classifier) {
        os << "classifier: " << to_string(kind) << " (" << r.cells << " working-point cells)\n";
        os << "                   classified skilled   classified novice\n";
        os << "  skilled          " << r.min_correct_skilled << "-" << r.max_correct_skilled
           << "                 " << s.n_skilled - r.max_correct_skilled << "-"
           << s.n_skilled - r.min_correct_skilled << "                N=" << s.n_skilled << '\n';
        os << "  novice           " << s.n_novice - r.max_correct_novice << "-"
           << s.n_novice - r.min_correct_novice << "                " << r.min_correct_novice
           << "-" << r.max_correct_novice << "              N=" << s.n_novice << '\n';
        os << "                   N=" << s.n_skilled << "                 N=" << s.n_novice
           << "               N=" << total << "\n\n";
    }
    return os.str();
}

void write_summary(const fs::path& path, const EvalReport& report) {
    std::ofstream f = open_out(path);
    f << "# evaluation summary\n";
    f << "class sizes: skilled=" << report.n_skilled << " novice=" << report.n_novice << '\n';
    std::size_t failed = 0;
    for (const auto& c : report.cells)
        if (c.failed()) ++failed;
    f << "cells: " << report.cells.size() << " (" << failed << " failed)\n\n";

    f << "## mean EER per scenario and classifier (all cells)\n";
    std::map<std::pair<int, ClassifierKind>, MeanAcc> by_sc;
    for (const auto& c : report.cells) by_sc[{c.scenario_id, c.classifier}].add(c.eer);
    for (const auto& [key, acc] : by_sc)
        f << "scenario " << key.first << "  " << to_string(key.second) << "  mean_eer="
          << format_double(acc.mean()) << "  cells=" << acc.n << '\n';

    f << "\n## working point (train fraction " << format_double(report.working_train_fraction)
      << ", " << report.working_feature_count << " features)\n";
    std::map<std::pair<int, ClassifierKind>, MeanAcc> wp;
    for (const auto& c : report.cells) {
        if (std::fabs(c.train_fraction - report.working_train_fraction) < 1e-9 &&
            c.n_features == report.working_feature_count)
            wp[{c.scenario_id, c.classifier}].add(c.eer);
    }
    for (const auto& [key, acc] : wp)
        f << "scenario " << key.first << "  " << to_string(key.second) << "  mean_eer="
          << format_double(acc.mean()) << "  cells=" << acc.n << '\n';

    try {
        const ConfusionSummary cs = confusion_ranges(report);
        f << "\n## working-point confusion ranges (all subjects at the EER threshold)\n";
        f << format_confusion_table(cs);
    } catch (const std::exception&) {
        f << "\n(no working-point confusion data in this report)\n";
    }

    if (failed) {
        f << "## failed cells\n";
        for (const auto& c : report.cells)
            if (c.failed())
                f << "scenario " << c.scenario_id << " " << to_string(c.classifier) << " frac="
                  << format_double(c.train_fraction) << " k=" << c.n_features << " iter="
                  << c.iteration << ": " << c.error << '\n';
    }
}

void write_aggregations(const fs::path& dir, const EvalReport& report) {
    fs::create_directories(dir);
    {
        std::ofstream f = open_out(dir / "by_train_fraction.csv");
        f << "scenario,classifier,train_frac,mean_eer,cells\n";
        std::map<std::tuple<int, ClassifierKind, double>, MeanAcc> acc;
        for (const auto& c : report.cells)
            acc[{c.scenario_id, c.classifier, c.train_fraction}].add(c.eer);
        for (const auto& [key, a] : acc)
            f << std::get<0>(key) << ',' << to_string(std::get<1>(key)) << ','
              << format_double(std::get<2>(key)) << ',' << format_double(a.mean()) << ',' << a.n
              << '\n';
    }
    {
        std::ofstream f = open_out(dir / "by_feature_count.csv");
        f << "scenario,classifier,n_features,mean_eer,cells\n";
        std::map<std::tuple<int, ClassifierKind, int>, MeanAcc> acc;
        for (const auto& c : report.cells)
            acc[{c.scenario_id, c.classifier, c.n_features}].add(c.eer);
        for (const auto& [key, a] : acc)
            f << std::get<0>(key) << ',' << to_string(std::get<1>(key)) << ','
              << std::get<2>(key) << ',' << format_double(a.mean()) << ',' << a.n << '\n';
    }
    {
        std::ofstream f = open_out(dir / "working_point.csv");
        f << "scenario,classifier,mean_eer,cells\n";
        std::map<std::pair<int, ClassifierKind>, MeanAcc> acc;
        for (const auto& c : report.cells) {
            if (std::fabs(c.train_fraction - report.working_train_fraction) < 1e-9 &&
                c.n_features == report.working_feature_count)
                acc[{c.scenario_id, c.classifier}].add(c.eer);
        }
        for (const auto& [key, a] : acc)
            f << key.first << ',' << to_string(key.second) << ',' << format_double(a.mean())
              << ',' << a.n << '\n';
    }
    try {
        const ConfusionSummary cs = confusion_ranges(report);
        std::ofstream f = open_out(dir / "confusion_table.txt");
        f << format_confusion_table(cs);
    } catch (const std::exception&) {
        // reports loaded from CSV carry no confusion data
    }
}

} // namespace skillml
