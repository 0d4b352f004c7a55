#include "hetnet/experiment.hpp"

#include <cstdio>

#include "hetnet/errors.hpp"
#include "hetnet/report_io.hpp"

namespace hetnet {

namespace {

std::vector<double> range(double from, double to, double step)
{
    std::vector<double> v;
    for (double x = from; x <= to + 1e-9; x += step) v.push_back(x);
    return v;
}

std::vector<ExperimentPreset> build_presets()
{
    const std::vector<double> uav_axis = range(1, 10, 1);
    const std::vector<double> user_axis = range(20, 140, 20);
    std::vector<ExperimentPreset> p;
    p.push_back({"fig2_ee_vs_uavs", "System EE versus number of UAVs, optimal vs maximal power, both environments",
                 Axis::n_uavs, uav_axis, Axis::environment, {0, 1}, Mode::both, {"ee_bits_per_joule"}, 100});
    p.push_back({"fig3_ee_vs_users", "System EE versus number of users for several UAV counts, dense urban",
                 Axis::n_users, user_axis, Axis::n_uavs, {1, 3, 5, 10}, Mode::optimal, {"ee_bits_per_joule"}, 100});
    p.push_back({"fig4_hover_vs_uavs", "Average UAV hover time versus number of UAVs, optimal vs equal time",
                 Axis::n_uavs, uav_axis, std::nullopt, {}, Mode::both, {"avg_hover_s"}, 100});
    p.push_back({"fig5_hover_vs_load", "Average UAV hover time versus per-user load for 1 to 5 UAVs", Axis::load_bits,
                 range(5e6, 30e6, 5e6), Axis::n_uavs, {1, 2, 3, 4, 5}, Mode::optimal, {"avg_hover_s"}, 100});
    p.push_back({"fig6_hover_vs_users", "Average UAV hover time versus number of users for several UAV counts",
                 Axis::n_users, user_axis, Axis::n_uavs, {1, 3, 5, 10}, Mode::optimal, {"avg_hover_s"}, 100});
    p.push_back({"fig7_ee_hover_grid", "System EE and average hover time versus users for 3, 5, 8 and 10 UAVs",
                 Axis::n_users, user_axis, Axis::n_uavs, {3, 5, 8, 10}, Mode::optimal,
                 {"ee_bits_per_joule", "avg_hover_s"}, 100});
    return p;
}

}  // namespace

const std::vector<ExperimentPreset>& presets()
{
    static const std::vector<ExperimentPreset> all = build_presets();
    return all;
}

const ExperimentPreset& find_preset(std::string_view name)
{
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw UsageError("unknown preset '" + std::string(name) + "' (see --list-presets)");
}

std::string series_label(std::optional<Axis> axis, double value)
{
    if (!axis) return "all";
    char buf[64];
    switch (*axis) {
    case Axis::n_uavs: std::snprintf(buf, sizeof buf, "uavs=%d", static_cast<int>(value)); break;
    case Axis::n_users: std::snprintf(buf, sizeof buf, "users=%d", static_cast<int>(value)); break;
    case Axis::load_bits: std::snprintf(buf, sizeof buf, "load_bits=%.9g", value); break;
    case Axis::environment:
        return to_string(value == 0.0 ? EnvironmentKind::dense_urban : EnvironmentKind::high_rise_urban);
    }
    return buf;
}

ExperimentPlan plan_experiment(const ExperimentPreset& preset, const Overrides& ov)
{
    ExperimentPlan plan;
    plan.preset = preset;
    plan.base = default_config();
    if (ov.config) {
        LoadedConfig lc = load_config_file(*ov.config);
        plan.base = lc.config;
        for (auto& s : lc.provenance) plan.config_notes.push_back(std::move(s));
        for (auto& s : lc.warnings) plan.config_notes.push_back("warning: " + s);
    }
    plan.master_seed = ov.seed.value_or(plan.base.seed);

    auto& pr = plan.preset;
    if (ov.trials) {
        if (*ov.trials < 1) throw ValidationError("trials", "must be >= 1");
        pr.trials = *ov.trials;
    }
    auto pin = [&](Axis field, double v) {
        if (pr.axis == field)
            pr.values = {v};
        else if (pr.series_axis == field)
            pr.series_values = {v};
        else
            apply_axis(plan.base, field, v);
    };
    if (ov.uavs) pin(Axis::n_uavs, *ov.uavs);
    if (ov.users) pin(Axis::n_users, *ov.users);
    if (ov.env) {
        if (*ov.env == EnvironmentKind::custom) throw ValidationError("env", "must be dense or high_rise");
        pin(Axis::environment, *ov.env == EnvironmentKind::dense_urban ? 0.0 : 1.0);
    }
    if (ov.mode) pr.mode = *ov.mode;

    std::vector<double> series_vals = pr.series_axis ? pr.series_values : std::vector<double>{0.0};
    for (double sv : series_vals) {
        SweepSpec spec;
        spec.series = series_label(pr.series_axis, sv);
        spec.axis = pr.axis;
        spec.values = pr.values;
        spec.trials = pr.trials;
        spec.base = plan.base;
        if (pr.series_axis) apply_axis(spec.base, *pr.series_axis, sv);
        spec.master_seed = plan.master_seed;
        spec.mode = pr.mode;
        spec.threads = ov.threads;
        validate_sweep(spec);
        plan.series.push_back(std::move(spec));
    }
    return plan;
}

ExperimentResult execute_plan(const ExperimentPlan& plan)
{
    ExperimentResult r;
    r.preset = plan.preset.name;
    r.base = plan.base;
    r.master_seed = plan.master_seed;
    r.trials = plan.preset.trials;
    r.mode = plan.preset.mode;
    r.axis = plan.preset.axis;
    r.series_axis = plan.preset.series_axis;
    r.metrics = plan.preset.metrics;
    r.config_notes = plan.config_notes;
    for (const auto& spec : plan.series) {
        r.series_labels.push_back(spec.series);
        r.series.push_back(run_sweep(spec));
    }
    return r;
}

std::vector<std::filesystem::path> run_experiment(std::string_view preset_name, const Overrides& overrides,
                                                  const std::filesystem::path& out_dir, Format format)
{
    const ExperimentPlan plan = plan_experiment(find_preset(preset_name), overrides);
    return emit(execute_plan(plan), format, out_dir);
}

}  // namespace hetnet
