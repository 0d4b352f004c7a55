#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetnet/errors.hpp"
#include "hetnet/experiment.hpp"
#include "hetnet/report_io.hpp"

using namespace hetnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string line(const std::string& text, int k)
{
    std::istringstream in(text);
    std::string l;
    for (int i = 0; i <= k; ++i) std::getline(in, l);
    return l;
}

ExperimentResult small_run(const char* preset, std::uint64_t seed)
{
    Overrides ov;
    ov.trials = 2;
    ov.seed = seed;
    ov.threads = 1;
    ExperimentPlan plan = plan_experiment(find_preset(preset), ov);
    for (auto& s : plan.series) s.values.resize(std::min<std::size_t>(s.values.size(), 3));
    return execute_plan(plan);
}

fs::path scratch_dir(const char* name)
{
    const fs::path d = fs::temp_directory_path() / "hetnet_tests" / name;
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("presets")
{
    CHECK(presets().size() == 6);
    for (const char* n : {"fig2_ee_vs_uavs", "fig3_ee_vs_users", "fig4_hover_vs_uavs", "fig5_hover_vs_load",
                          "fig6_hover_vs_users", "fig7_ee_hover_grid"}) {
        const ExperimentPreset& p = find_preset(n);
        CHECK_NOTHROW(plan_experiment(p, {}));
    }
    CHECK_THROWS_AS(find_preset("fig9"), UsageError);
}

TEST_CASE("fig2 covers both schemes in both environments")
{
    Overrides ov;
    ov.trials = 10;
    const ExperimentPlan plan = plan_experiment(find_preset("fig2_ee_vs_uavs"), ov);
    REQUIRE(plan.series.size() == 2);
    CHECK(plan.series[0].series == "dense_urban");
    CHECK(plan.series[1].series == "high_rise_urban");
    CHECK(plan.series[1].base.environment == EnvironmentParams::high_rise_urban());
    for (const auto& s : plan.series) {
        CHECK(s.mode == Mode::both);
        CHECK(s.trials == 10);
        CHECK(s.values.size() == 10);
        CHECK(s.axis == Axis::n_uavs);
    }
}

TEST_CASE("fig5 sweeps load with one series per UAV count")
{
    const ExperimentPlan plan = plan_experiment(find_preset("fig5_hover_vs_load"), {});
    REQUIRE(plan.series.size() == 5);
    CHECK(plan.series[0].axis == Axis::load_bits);
    CHECK(plan.series[0].values.front() == 5e6);
    CHECK(plan.series[0].values.back() == 30e6);
    for (int u = 0; u < 5; ++u) CHECK(plan.series[static_cast<std::size_t>(u)].base.n_uavs == u + 1);
}

TEST_CASE("overrides pin axes or edit the base")
{
    Overrides ov;
    ov.uavs = 4;
    ov.users = 60;
    ov.env = EnvironmentKind::high_rise_urban;
    const ExperimentPlan p2 = plan_experiment(find_preset("fig2_ee_vs_uavs"), ov);
    REQUIRE(p2.series.size() == 1);
    CHECK(p2.series[0].values == std::vector<double>{4});
    CHECK(p2.series[0].base.n_users == 60);
    CHECK(p2.series[0].series == "high_rise_urban");

    const ExperimentPlan p3 = plan_experiment(find_preset("fig3_ee_vs_users"), ov);
    REQUIRE(p3.series.size() == 1);
    CHECK(p3.series[0].values == std::vector<double>{60});
    CHECK(p3.series[0].base.n_uavs == 4);

    ov = {};
    ov.mode = Mode::baseline;
    CHECK(plan_experiment(find_preset("fig4_hover_vs_uavs"), ov).series[0].mode == Mode::baseline);
    ov.trials = 0;
    CHECK_THROWS_AS(plan_experiment(find_preset("fig4_hover_vs_uavs"), ov), ValidationError);
}

TEST_CASE("csv artifacts have fixed headers and provenance")
{
    const ExperimentResult r = small_run("fig2_ee_vs_uavs", 5);
    const fs::path dir = scratch_dir("csv");
    const auto files = emit(r, Format::csv, dir);
    REQUIRE(files.size() == 4);

    const std::string raw = slurp(dir / "fig2_ee_vs_uavs_raw.csv");
    const std::string comment = line(raw, 0);
    CHECK(comment.find("config_hash=" + config_hash(r.base)) != std::string::npos);
    CHECK(comment.find("master_seed=5") != std::string::npos);
    CHECK(line(raw, 1) ==
          "series,point,x,trial,seed,status,error,opt_ee_bits_per_joule,opt_sum_rate_bps,opt_total_power_w,"
          "opt_avg_hover_s,opt_outage_count,opt_converged,opt_feasible,base_ee_bits_per_joule,base_sum_rate_bps,"
          "base_total_power_w,base_avg_hover_s,base_outage_count,base_converged,base_feasible");
    int rows = 0;
    for (char ch : raw) rows += ch == '\n';
    CHECK(rows == 2 + 2 * 3 * 2);

    const std::string agg = slurp(dir / "fig2_ee_vs_uavs_aggregate.csv");
    CHECK(line(agg, 0) == comment);
    CHECK(line(agg, 1) == "series,x,mode,metric,n,excluded,mean,sd,ci_half_width,degenerate");
    const std::string plot = slurp(dir / "fig2_ee_vs_uavs_plot.csv");
    CHECK(line(plot, 1) == "figure,series,metric,x,mean,ci_half_width,n");
    CHECK(line(plot, 2).rfind("fig2_ee_vs_uavs,dense_urban/optimal,ee_bits_per_joule,1,", 0) == 0);

    const auto prov = nlohmann::json::parse(slurp(dir / "fig2_ee_vs_uavs_provenance.json"));
    CHECK(prov.at("config_hash") == config_hash(r.base));
    CHECK(prov.at("master_seed") == 5);
    CHECK(prov.at("software_version") == software_version);
}

TEST_CASE("emission is byte-stable and seeds change rows, not schema")
{
    const ExperimentResult r = small_run("fig4_hover_vs_uavs", 1);
    const fs::path a = scratch_dir("stable_a"), b = scratch_dir("stable_b");
    emit(r, Format::csv, a);
    emit(r, Format::csv, b);
    const std::string ra = slurp(a / "fig4_hover_vs_uavs_raw.csv");
    CHECK(ra == slurp(b / "fig4_hover_vs_uavs_raw.csv"));
    CHECK(slurp(a / "fig4_hover_vs_uavs_aggregate.csv") == slurp(b / "fig4_hover_vs_uavs_aggregate.csv"));

    std::ostringstream again;
    write_raw_csv(again, small_run("fig4_hover_vs_uavs", 1));
    CHECK(again.str() == ra);

    std::ostringstream other;
    write_raw_csv(other, small_run("fig4_hover_vs_uavs", 2));
    CHECK(line(other.str(), 1) == line(ra, 1));
    CHECK(line(other.str(), 2) != line(ra, 2));
}

TEST_CASE("json round-trips")
{
    const ExperimentResult r = small_run("fig7_ee_hover_grid", 3);
    const auto j = to_json(r);
    const ExperimentResult back = experiment_result_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.preset == r.preset);
    CHECK(back.base == r.base);
    CHECK(back.master_seed == r.master_seed);
    CHECK(back.mode == r.mode);
    CHECK(back.axis == r.axis);
    CHECK(back.series_axis == r.series_axis);
    CHECK(back.metrics == r.metrics);
    CHECK(back.series_labels == r.series_labels);
    REQUIRE(back.series.size() == r.series.size());
    for (std::size_t s = 0; s < r.series.size(); ++s) {
        CHECK(back.series[s].spec.base == r.series[s].spec.base);
        REQUIRE(back.series[s].points.size() == r.series[s].points.size());
        for (std::size_t k = 0; k < r.series[s].points.size(); ++k) {
            CHECK(back.series[s].points[k].x == r.series[s].points[k].x);
            CHECK(back.series[s].points[k].trials == r.series[s].points[k].trials);
        }
    }
    CHECK(to_json(back).dump() == j.dump());

    const fs::path dir = scratch_dir("json");
    const auto files = emit(r, Format::json, dir);
    CHECK(files.size() == 2);
    CHECK(fs::exists(dir / "fig7_ee_hover_grid_result.json"));
}

TEST_CASE("csv fields")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.333333333");
    CHECK(format_double(12345678912.0) == "1.23456789e+10");
    CHECK(format_double(NAN).empty());
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("unwritable output directories name the path")
{
    const ExperimentResult r = small_run("fig4_hover_vs_uavs", 1);
    const fs::path bad = "/proc/hetnet_no_such_dir/out";
    try {
        emit(r, Format::csv, bad);
        FAIL("expected an I/O error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    }
}
