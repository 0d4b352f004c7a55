#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/channel.hpp"
#include "hetnet/hover_opt.hpp"
#include "hetnet/metrics.hpp"
#include "hetnet/power_alloc.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent sub-seed `stream` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Seed of trial `trial` at sweep point `point`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

enum class Mode { optimal, baseline, both };

std::string to_string(Mode m);

struct SolverOptions {
    NetworkPowerOptions power;
    HoverOptions hover;
};

struct ModeResult {
    TrialMetrics metrics;
    bool converged = true;
    bool feasible = true;
    std::vector<std::string> warnings;

    bool operator==(const ModeResult&) const = default;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    std::optional<ModeResult> optimal;
    std::optional<ModeResult> baseline;

    bool operator==(const TrialOutcome&) const = default;
};

/// Everything a trial computed, for debugging dumps and tests.
struct TrialDetail {
    Scenario scenario;
    ChannelState channel;
    Association association;
    PowerSolution power;
    PowerSolution baseline_power;
    std::vector<double> gamma;
    std::vector<double> baseline_gamma;
    std::vector<HoverSolution> hover;
    std::vector<HoverSolution> baseline_hover;
};

/// Hover problems of every UAV under the given powers (one entry per UAV,
/// including UAVs without users).
std::vector<HoverSolution> solve_uav_hover(const Scenario& s, const Association& a, std::span<const double> gamma,
                                           bool baseline, const HoverOptions& opts);

/// generate -> channel -> associate -> power -> hover -> metrics.
/// Sub-seeds: scenario = derive_seed(seed, 1), channel = derive_seed(seed, 2).
/// Errors are caught and returned as a failed outcome.
TrialOutcome run_trial(const ScenarioConfig& cfg, std::uint64_t seed, Mode mode, const SolverOptions& opts = {},
                       TrialDetail* detail = nullptr);

enum class Axis { n_uavs, n_users, load_bits, environment };

std::string to_string(Axis a);

/// Applies an axis value to a config. For the environment axis, 0 selects
/// dense urban and 1 high-rise urban.
void apply_axis(ScenarioConfig& cfg, Axis axis, double value);

struct SweepSpec {
    std::string series;
    Axis axis = Axis::n_uavs;
    std::vector<double> values;
    int trials = 100;
    ScenarioConfig base;
    std::uint64_t master_seed = 1;
    Mode mode = Mode::both;
    SolverOptions solver;
    int threads = 0;  // 0: hardware concurrency
};

/// Throws ValidationError for an empty axis or trials < 1.
void validate_sweep(const SweepSpec& spec);

struct Summary {
    int n = 0;         // rows used
    int excluded = 0;  // failed rows and undefined values
    double mean = 0.0;
    double sd = 0.0;
    double ci_half_width = 0.0;
    bool degenerate = false;  // fewer than two rows

    bool empty() const { return n == 0; }
    bool operator==(const Summary&) const = default;
};

/// Mean, sample sd and 1.96 sd / sqrt(n). NaN entries are excluded.
Summary summarize(std::span<const double> values);

inline constexpr std::array<const char*, 5> metric_names{"ee_bits_per_joule", "sum_rate_bps", "total_power_w",
                                                          "avg_hover_s", "outage_count"};

/// Metric `name` of a mode result; NaN when undefined.
double metric_value(const ModeResult& r, const std::string& name);

struct PointResult {
    double x = 0.0;
    std::vector<TrialOutcome> trials;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<PointResult> points;
};

SweepResult run_sweep(const SweepSpec& spec);

/// Statistics of metric `name` for one mode over the trials of a point.
Summary aggregate(const PointResult& point, Mode mode, const std::string& name);

}  // namespace hetnet
