#include "hetnet/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hetnet/units.hpp"

namespace hetnet {

using nlohmann::json;

namespace {

const std::vector<std::string> mode_metric_columns{"ee_bits_per_joule", "sum_rate_bps", "total_power_w",
                                                   "avg_hover_s",       "outage_count", "converged",
                                                   "feasible"};

std::vector<std::string> make_raw_columns()
{
    std::vector<std::string> c{"series", "point", "x", "trial", "seed", "status", "error"};
    for (const char* pfx : {"opt_", "base_"})
        for (const auto& m : mode_metric_columns) c.push_back(pfx + m);
    return c;
}

void write_header(std::ostream& os, const std::vector<std::string>& cols)
{
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
}

std::vector<Mode> modes_of(Mode m)
{
    if (m == Mode::both) return {Mode::optimal, Mode::baseline};
    return {m};
}

void write_mode_fields(std::ostream& os, const std::optional<ModeResult>& r)
{
    if (!r) {
        for (std::size_t i = 0; i < mode_metric_columns.size(); ++i) os << ',';
        return;
    }
    const auto& m = r->metrics;
    os << ',' << format_double(m.ee_bits_per_joule) << ',' << format_double(m.sum_rate_bps) << ','
       << format_double(m.total_power_w) << ',' << (m.avg_hover_s ? format_double(*m.avg_hover_s) : "") << ','
       << m.outage_count << ',' << (r->converged ? 1 : 0) << ',' << (r->feasible ? 1 : 0);
}

std::filesystem::path write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw std::runtime_error("failed writing " + path.string());
    return path;
}

json mode_to_json(const std::optional<ModeResult>& r)
{
    if (!r) return nullptr;
    return {{"metrics", to_json(r->metrics)},
            {"converged", r->converged},
            {"feasible", r->feasible},
            {"warnings", r->warnings}};
}

std::optional<ModeResult> mode_from_json(const json& j)
{
    if (j.is_null()) return std::nullopt;
    ModeResult r;
    r.metrics = trial_metrics_from_json(j.at("metrics"));
    r.converged = j.at("converged").get<bool>();
    r.feasible = j.at("feasible").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

Mode mode_from_string(const std::string& s)
{
    if (s == "optimal") return Mode::optimal;
    if (s == "baseline") return Mode::baseline;
    if (s == "both") return Mode::both;
    throw std::invalid_argument("unknown mode " + s);
}

Axis axis_from_string(const std::string& s)
{
    for (Axis a : {Axis::n_uavs, Axis::n_users, Axis::load_bits, Axis::environment})
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown axis " + s);
}

}  // namespace

const std::vector<std::string> raw_columns = make_raw_columns();
const std::vector<std::string> aggregate_columns{"series", "x",  "mode",          "metric",    "n",
                                                 "excluded", "mean", "sd", "ci_half_width", "degenerate"};
const std::vector<std::string> plot_columns{"figure", "series", "metric", "x", "mean", "ci_half_width", "n"};

std::string format_double(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string provenance_comment(const ExperimentResult& r)
{
    return "# preset=" + r.preset + " config_hash=" + config_hash(r.base) +
           " master_seed=" + std::to_string(r.master_seed) + " trials=" + std::to_string(r.trials) +
           " version=" + std::string(software_version);
}

void write_raw_csv(std::ostream& os, const ExperimentResult& r)
{
    os << provenance_comment(r) << '\n';
    write_header(os, raw_columns);
    for (std::size_t s = 0; s < r.series.size(); ++s) {
        const auto& sweep = r.series[s];
        for (std::size_t k = 0; k < sweep.points.size(); ++k) {
            const auto& pt = sweep.points[k];
            for (std::size_t t = 0; t < pt.trials.size(); ++t) {
                const auto& tr = pt.trials[t];
                os << csv_field(r.series_labels[s]) << ',' << k << ',' << format_double(pt.x) << ',' << t << ','
                   << tr.seed << ',' << (tr.failed ? "failed" : "ok") << ',' << csv_field(tr.error);
                write_mode_fields(os, tr.optimal);
                write_mode_fields(os, tr.baseline);
                os << '\n';
            }
        }
    }
}

void write_aggregate_csv(std::ostream& os, const ExperimentResult& r)
{
    os << provenance_comment(r) << '\n';
    write_header(os, aggregate_columns);
    for (std::size_t s = 0; s < r.series.size(); ++s)
        for (const auto& pt : r.series[s].points)
            for (Mode m : modes_of(r.mode))
                for (const char* metric : metric_names) {
                    const Summary sm = aggregate(pt, m, metric);
                    os << csv_field(r.series_labels[s]) << ',' << format_double(pt.x) << ',' << to_string(m) << ','
                       << metric << ',' << sm.n << ',' << sm.excluded << ','
                       << (sm.empty() ? "" : format_double(sm.mean)) << ','
                       << (sm.empty() ? "" : format_double(sm.sd)) << ','
                       << (sm.empty() ? "" : format_double(sm.ci_half_width)) << ',' << (sm.degenerate ? 1 : 0)
                       << '\n';
                }
}

void write_plot_csv(std::ostream& os, const ExperimentResult& r)
{
    os << provenance_comment(r) << '\n';
    write_header(os, plot_columns);
    for (std::size_t s = 0; s < r.series.size(); ++s)
        for (Mode m : modes_of(r.mode))
            for (const auto& metric : r.metrics)
                for (const auto& pt : r.series[s].points) {
                    const Summary sm = aggregate(pt, m, metric);
                    if (sm.empty()) continue;
                    os << r.preset << ',' << csv_field(r.series_labels[s] + "/" + to_string(m)) << ',' << metric
                       << ',' << format_double(pt.x) << ',' << format_double(sm.mean) << ','
                       << format_double(sm.ci_half_width) << ',' << sm.n << '\n';
                }
}

json provenance_json(const ExperimentResult& r, const std::vector<std::filesystem::path>& files)
{
    json series = json::array();
    for (std::size_t s = 0; s < r.series.size(); ++s)
        series.push_back({{"label", r.series_labels[s]},
                          {"config_hash", config_hash(r.series[s].spec.base)},
                          {"values", r.series[s].spec.values}});
    json names = json::array();
    for (const auto& f : files) names.push_back(f.filename().string());
    return {{"preset", r.preset},
            {"software_version", software_version},
            {"config_hash", config_hash(r.base)},
            {"master_seed", r.master_seed},
            {"trials", r.trials},
            {"mode", to_string(r.mode)},
            {"axis", to_string(r.axis)},
            {"series_axis", r.series_axis ? json(to_string(*r.series_axis)) : json(nullptr)},
            {"series", series},
            {"config", config_to_json(r.base)},
            {"config_notes", r.config_notes},
            {"seed_scheme",
             "trial seed = splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial); scenario and channel "
             "seeds = splitmix64(splitmix64(trial seed) ^ 1 or 2)"},
            {"files", names}};
}

json to_json(const TrialMetrics& m)
{
    json tiers = json::array();
    for (const auto& t : m.tiers)
        tiers.push_back({{"users", t.users}, {"sum_rate_bps", t.sum_rate_bps}, {"power_w", t.power_w}});
    return {{"sum_rate_bps", m.sum_rate_bps},
            {"total_power_w", m.total_power_w},
            {"ee_bits_per_joule", m.ee_bits_per_joule},
            {"avg_hover_s", m.avg_hover_s ? json(*m.avg_hover_s) : json(nullptr)},
            {"tiers", tiers},
            {"outage_count", m.outage_count}};
}

TrialMetrics trial_metrics_from_json(const json& j)
{
    TrialMetrics m;
    m.sum_rate_bps = j.at("sum_rate_bps").get<double>();
    m.total_power_w = j.at("total_power_w").get<double>();
    m.ee_bits_per_joule = j.at("ee_bits_per_joule").get<double>();
    if (!j.at("avg_hover_s").is_null()) m.avg_hover_s = j.at("avg_hover_s").get<double>();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& t = j.at("tiers").at(k);
        m.tiers[k] = {t.at("users").get<int>(), t.at("sum_rate_bps").get<double>(), t.at("power_w").get<double>()};
    }
    m.outage_count = j.at("outage_count").get<int>();
    return m;
}

json to_json(const TrialOutcome& t)
{
    return {{"seed", t.seed},
            {"failed", t.failed},
            {"error", t.error},
            {"optimal", mode_to_json(t.optimal)},
            {"baseline", mode_to_json(t.baseline)}};
}

TrialOutcome trial_outcome_from_json(const json& j)
{
    TrialOutcome t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.failed = j.at("failed").get<bool>();
    t.error = j.at("error").get<std::string>();
    t.optimal = mode_from_json(j.at("optimal"));
    t.baseline = mode_from_json(j.at("baseline"));
    return t;
}

json to_json(const ExperimentResult& r)
{
    json series = json::array();
    for (std::size_t s = 0; s < r.series.size(); ++s) {
        const auto& sw = r.series[s];
        json points = json::array();
        for (const auto& pt : sw.points) {
            json trials = json::array();
            for (const auto& t : pt.trials) trials.push_back(to_json(t));
            points.push_back({{"x", pt.x}, {"trials", trials}});
        }
        series.push_back({{"label", r.series_labels[s]}, {"base", config_to_json(sw.spec.base)}, {"points", points}});
    }
    return {{"preset", r.preset},
            {"base", config_to_json(r.base)},
            {"config_hash", config_hash(r.base)},
            {"master_seed", r.master_seed},
            {"trials", r.trials},
            {"mode", to_string(r.mode)},
            {"axis", to_string(r.axis)},
            {"series_axis", r.series_axis ? json(to_string(*r.series_axis)) : json(nullptr)},
            {"metrics", r.metrics},
            {"config_notes", r.config_notes},
            {"series", series}};
}

ExperimentResult experiment_result_from_json(const json& j)
{
    ExperimentResult r;
    r.preset = j.at("preset").get<std::string>();
    r.base = load_config(j.at("base").dump()).config;
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.trials = j.at("trials").get<int>();
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    r.axis = axis_from_string(j.at("axis").get<std::string>());
    if (!j.at("series_axis").is_null()) r.series_axis = axis_from_string(j.at("series_axis").get<std::string>());
    r.metrics = j.at("metrics").get<std::vector<std::string>>();
    r.config_notes = j.at("config_notes").get<std::vector<std::string>>();
    for (const auto& js : j.at("series")) {
        SweepResult sw;
        sw.spec.series = js.at("label").get<std::string>();
        sw.spec.axis = r.axis;
        sw.spec.trials = r.trials;
        sw.spec.master_seed = r.master_seed;
        sw.spec.mode = r.mode;
        sw.spec.base = load_config(js.at("base").dump()).config;
        for (const auto& jp : js.at("points")) {
            PointResult pt;
            pt.x = jp.at("x").get<double>();
            for (const auto& jt : jp.at("trials")) pt.trials.push_back(trial_outcome_from_json(jt));
            sw.spec.values.push_back(pt.x);
            sw.points.push_back(std::move(pt));
        }
        r.series_labels.push_back(sw.spec.series);
        r.series.push_back(std::move(sw));
    }
    return r;
}

std::vector<std::filesystem::path> emit(const ExperimentResult& r, Format format, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> files;
    auto put = [&](const std::string& name, const std::string& content) {
        files.push_back(write_file(out_dir / (r.preset + name), content));
    };
    if (format == Format::csv) {
        std::ostringstream raw, agg, plot;
        write_raw_csv(raw, r);
        write_aggregate_csv(agg, r);
        write_plot_csv(plot, r);
        put("_raw.csv", raw.str());
        put("_aggregate.csv", agg.str());
        put("_plot.csv", plot.str());
    } else {
        put("_result.json", to_json(r).dump(2) + "\n");
    }
    const auto prov = out_dir / (r.preset + "_provenance.json");
    files.push_back(prov);
    write_file(prov, provenance_json(r, files).dump(2) + "\n");
    return files;
}

void write_association_csv(std::ostream& os, const TrialDetail& d)
{
    os << "user_id,bs_id,tier,subcarrier,mean_path_loss_db\n";
    const auto& a = d.association;
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const auto& att = a.users[u];
        os << u << ',' << att.bs << ',' << tier_code(att.tier) << ',' << att.subcarrier << ','
           << format_double(units::linear_to_db(d.channel.mean_path_loss(static_cast<int>(u), att.bs))) << '\n';
    }
}

void write_link_gains_csv(std::ostream& os, const TrialDetail& d)
{
    os << "user_id,bs_id,subcarrier,distance_m,elevation_deg,path_loss_db,fading_power,rho\n";
    const auto& a = d.association;
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const int sc = a.users[u].subcarrier;
        for (int b = 0; b < d.channel.n_base_stations(); ++b) {
            const LinkGain g = d.channel.link(static_cast<int>(u), b, sc);
            os << u << ',' << b << ',' << sc << ',' << format_double(g.distance_m) << ','
               << (g.elevation_deg ? format_double(*g.elevation_deg) : "") << ','
               << format_double(units::linear_to_db(g.path_loss_linear)) << ',' << format_double(g.fading_power)
               << ',' << format_double(g.rho) << '\n';
        }
    }
}

void write_hover_report_csv(std::ostream& os, const std::vector<HoverSolution>& hover)
{
    os << "uav_id,n_users,sum_T_s,control_time_s,tau_s,converged\n";
    for (const auto& h : hover) {
        double sum_t = 0.0;
        for (double t : h.T) sum_t += t;
        os << h.uav_id << ',' << h.users.size() << ',' << format_double(sum_t) << ','
           << format_double(h.control_time_s) << ',' << format_double(h.tau_s) << ',' << (h.converged ? 1 : 0)
           << '\n';
    }
}

void write_trace_csv(std::ostream& os, const std::vector<TierPowerSolution>& tiers)
{
    os << "tier,iteration,max_delta,objective,min_power_slack,min_rate_slack,min_interference_slack\n";
    for (const auto& ts : tiers)
        for (const auto& row : ts.trace)
            os << tier_code(ts.tier) << ',' << row.iteration << ',' << format_double(row.max_delta) << ','
               << format_double(row.objective) << ',' << format_double(row.power_slack) << ','
               << format_double(row.rate_slack) << ',' << format_double(row.interference_slack) << '\n';
}

}  // namespace hetnet
