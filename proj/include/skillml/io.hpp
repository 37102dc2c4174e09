#pragma once

#include <filesystem>
#include <string>

#include "skillml/datagen.hpp"
#include "skillml/evaluation.hpp"
#include "skillml/features.hpp"
#include "skillml/selection.hpp"
#include "skillml/signal.hpp"

namespace skillml {

// round-trip-exact serialization for doubles (17 significant digits)
std::string format_double(double v);

// Trial files: one CSV per trial with header
// t,x,y,z,roll,pitch,yaw,force,pedal,region plus a manifest.csv sidecar
// mapping trial ids to metadata.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& dir);

// Feature table: trial_id,label,scenario_id,f01..f68
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

// Selection report: p-values, filtered ids, ranking with criterion trace.
void write_selection_report(const std::filesystem::path& path, const PremierResult& result);

// Grid report: scenario,classifier,train_frac,n_features,iteration,eer,
// sensitivity,specificity,threshold (nan metrics mark failed cells).
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report_csv(const std::filesystem::path& path);

// Working-point confusion sidecar, enough to rebuild the range table from
// files alone.
void write_confusion_csv(const std::filesystem::path& path, const EvalReport& report);
// Merges confusion counts into a report loaded from CSV.
void read_confusion_csv(const std::filesystem::path& path, EvalReport& report);

// Mean-EER summary plus working-point and confusion tables, plain text.
void write_summary(const std::filesystem::path& path, const EvalReport& report);

// Plot-ready aggregations: mean EER by train fraction, by feature count, and
// at the working point, plus the confusion-range text table.
void write_aggregations(const std::filesystem::path& dir, const EvalReport& report);

std::string format_confusion_table(const ConfusionSummary& summary);

} // namespace skillml
