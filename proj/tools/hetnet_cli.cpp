#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "hetnet/errors.hpp"
#include "hetnet/experiment.hpp"
#include "hetnet/report_io.hpp"

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, runtime = 3 };

void write_dump(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(f);
    if (!f) throw std::runtime_error("failed writing " + path.string());
    std::cout << path.string() << '\n';
}

void dump_trial(const hetnet::ExperimentPlan& plan, int trial, const std::filesystem::path& out_dir)
{
    using namespace hetnet;
    const SweepSpec& spec = plan.series.front();
    ScenarioConfig cfg = spec.base;
    apply_axis(cfg, spec.axis, spec.values.front());
    SolverOptions opts = spec.solver;
    opts.power.tier.record_trace = true;
    TrialDetail d;
    const auto seed = trial_seed(spec.master_seed, 0, static_cast<std::uint64_t>(trial));
    const TrialOutcome out = run_trial(cfg, seed, Mode::both, opts, &d);
    if (out.failed) throw std::runtime_error("trial failed: " + out.error);

    std::filesystem::create_directories(out_dir);
    const std::string stem = "trial" + std::to_string(trial);
    write_dump(out_dir / (stem + "_association.csv"), [&](std::ostream& os) { write_association_csv(os, d); });
    write_dump(out_dir / (stem + "_link_gains.csv"), [&](std::ostream& os) { write_link_gains_csv(os, d); });
    write_dump(out_dir / (stem + "_hover.csv"), [&](std::ostream& os) { write_hover_report_csv(os, d.hover); });
    write_dump(out_dir / (stem + "_trace.csv"), [&](std::ostream& os) { write_trace_csv(os, d.power.tiers); });
    write_dump(out_dir / (stem + "_outcome.json"),
               [&](std::ostream& os) { os << to_json(out).dump(2) << '\n'; });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo experiments for UAV-assisted heterogeneous networks"};
    std::string preset;
    std::string config;
    std::uint64_t seed = 0;
    int trials = 0, uavs = 0, users = 0, threads = 0, dump = -1;
    std::string env;
    const char* env_out = std::getenv("HETNET_OUT_DIR");
    std::string out = env_out ? env_out : "out";
    std::string format = "csv";
    bool baseline_only = false, optimal_only = false, list = false;

    app.add_option("--preset", preset, "Experiment preset name");
    auto* o_config = app.add_option("--config", config, "JSON scenario configuration")->check(CLI::ExistingFile);
    auto* o_seed = app.add_option("--seed", seed, "Master seed");
    auto* o_trials = app.add_option("--trials", trials, "Trials per sweep point");
    auto* o_uavs = app.add_option("--uavs", uavs, "Pin the number of UAVs");
    auto* o_users = app.add_option("--users", users, "Pin the number of users");
    auto* o_env = app.add_option("--env", env, "Pin the environment")->check(CLI::IsMember({"dense", "high_rise"}));
    app.add_option("--out", out, "Output directory (default $HETNET_OUT_DIR or ./out)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "Worker threads (0: all cores)");
    auto* f_base = app.add_flag("--baseline-only", baseline_only, "Run only the baseline schemes");
    auto* f_opt = app.add_flag("--optimal-only", optimal_only, "Run only the optimized schemes");
    f_base->excludes(f_opt);
    app.add_flag("--list-presets", list, "List presets and exit");
    app.add_option("--dump-trial", dump, "Write per-link dumps of one trial of the first sweep point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (list) {
            for (const auto& p : hetnet::presets()) std::cout << p.name << "  " << p.description << '\n';
            return ok;
        }
        if (preset.empty()) throw hetnet::UsageError("--preset is required (see --list-presets)");

        hetnet::Overrides ov;
        if (*o_config) ov.config = config;
        if (*o_seed) ov.seed = seed;
        if (*o_trials) ov.trials = trials;
        if (*o_uavs) ov.uavs = uavs;
        if (*o_users) ov.users = users;
        if (*o_env)
            ov.env = env == "dense" ? hetnet::EnvironmentKind::dense_urban : hetnet::EnvironmentKind::high_rise_urban;
        if (baseline_only) ov.mode = hetnet::Mode::baseline;
        if (optimal_only) ov.mode = hetnet::Mode::optimal;
        ov.threads = threads;

        const auto plan = hetnet::plan_experiment(hetnet::find_preset(preset), ov);
        for (const auto& note : plan.config_notes) std::cerr << "note: " << note << '\n';
        if (dump >= 0) {
            dump_trial(plan, dump, out);
            return ok;
        }
        const auto result = hetnet::execute_plan(plan);
        for (const auto& path :
             hetnet::emit(result, format == "json" ? hetnet::Format::json : hetnet::Format::csv, out))
            std::cout << path.string() << '\n';
        return ok;
    } catch (const hetnet::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const hetnet::ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return validation;
    } catch (const hetnet::ParseError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime;
    }
}
