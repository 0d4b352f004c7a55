#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetnet/experiment.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet {

/// "%.9g"; NaN as an empty field.
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Leading "# ..." line of every CSV artifact.
std::string provenance_comment(const ExperimentResult& r);

extern const std::vector<std::string> raw_columns;
extern const std::vector<std::string> aggregate_columns;
extern const std::vector<std::string> plot_columns;

void write_raw_csv(std::ostream& os, const ExperimentResult& r);
void write_aggregate_csv(std::ostream& os, const ExperimentResult& r);
void write_plot_csv(std::ostream& os, const ExperimentResult& r);

nlohmann::json provenance_json(const ExperimentResult& r, const std::vector<std::filesystem::path>& files);

nlohmann::json to_json(const TrialMetrics& m);
nlohmann::json to_json(const TrialOutcome& t);
nlohmann::json to_json(const ExperimentResult& r);
TrialMetrics trial_metrics_from_json(const nlohmann::json& j);
TrialOutcome trial_outcome_from_json(const nlohmann::json& j);
ExperimentResult experiment_result_from_json(const nlohmann::json& j);

/// Writes the artifacts of a result. CSV: <preset>_raw.csv,
/// <preset>_aggregate.csv, <preset>_plot.csv; JSON: <preset>_result.json.
/// Both add <preset>_provenance.json. Errors name the offending path.
std::vector<std::filesystem::path> emit(const ExperimentResult& r, Format format, const std::filesystem::path& out_dir);

// Single-trial debugging dumps.
void write_association_csv(std::ostream& os, const TrialDetail& d);
void write_link_gains_csv(std::ostream& os, const TrialDetail& d);
void write_hover_report_csv(std::ostream& os, const std::vector<HoverSolution>& hover);
void write_trace_csv(std::ostream& os, const std::vector<TierPowerSolution>& tiers);

}  // namespace hetnet
