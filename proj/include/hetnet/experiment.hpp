#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/montecarlo.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

inline constexpr const char* software_version = "hetnet 1.0.0";

/// One figure-style experiment: an x axis, optionally one series per value of
/// a second field, and the metrics worth plotting.
struct ExperimentPreset {
    std::string name;
    std::string description;
    Axis axis = Axis::n_uavs;
    std::vector<double> values;
    std::optional<Axis> series_axis;
    std::vector<double> series_values;
    Mode mode = Mode::both;
    std::vector<std::string> metrics;
    int trials = 100;
};

const std::vector<ExperimentPreset>& presets();

/// Throws UsageError for an unknown name.
const ExperimentPreset& find_preset(std::string_view name);

struct Overrides {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> uavs;
    std::optional<int> users;
    std::optional<EnvironmentKind> env;
    std::optional<Mode> mode;
    int threads = 0;
};

struct ExperimentPlan {
    ExperimentPreset preset;  // with overrides applied to axis / series values
    ScenarioConfig base;
    std::uint64_t master_seed = 1;
    std::vector<std::string> config_notes;  // defaults and warnings from config loading
    std::vector<SweepSpec> series;
};

/// Label of a series value, e.g. "uavs=3" or "dense_urban".
std::string series_label(std::optional<Axis> axis, double value);

/// Expands a preset. An override that targets the swept axis or the series
/// field pins it to the single given value; otherwise it edits the base config.
ExperimentPlan plan_experiment(const ExperimentPreset& preset, const Overrides& overrides);

struct ExperimentResult {
    std::string preset;
    ScenarioConfig base;
    std::uint64_t master_seed = 1;
    int trials = 0;
    Mode mode = Mode::both;
    Axis axis = Axis::n_uavs;
    std::optional<Axis> series_axis;
    std::vector<std::string> metrics;
    std::vector<std::string> series_labels;
    std::vector<SweepResult> series;
    std::vector<std::string> config_notes;
};

ExperimentResult execute_plan(const ExperimentPlan& plan);

enum class Format { csv, json };

/// Runs a preset and writes its artifacts into `out_dir` (created if needed).
/// Returns the written paths.
std::vector<std::filesystem::path> run_experiment(std::string_view preset_name, const Overrides& overrides,
                                                  const std::filesystem::path& out_dir, Format format = Format::csv);

}  // namespace hetnet
