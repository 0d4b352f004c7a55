#include "hetnet/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

char tier_code(Tier t)
{
    switch (t) {
    case Tier::macro: return 'm';
    case Tier::uav: return 'u';
    case Tier::small_cell: return 's';
    }
    return '?';
}

Tier tier_from_code(char c)
{
    switch (c) {
    case 'm': return Tier::macro;
    case 'u': return Tier::uav;
    case 's': return Tier::small_cell;
    default: throw std::invalid_argument(std::string("unknown tier code '") + c + "'");
    }
}

std::string to_string(EnvironmentKind k)
{
    switch (k) {
    case EnvironmentKind::dense_urban: return "dense_urban";
    case EnvironmentKind::high_rise_urban: return "high_rise_urban";
    case EnvironmentKind::custom: return "custom";
    }
    return "custom";
}

EnvironmentKind environment_kind_from_string(std::string_view s)
{
    if (s == "dense_urban" || s == "dense") return EnvironmentKind::dense_urban;
    if (s == "high_rise_urban" || s == "high_rise") return EnvironmentKind::high_rise_urban;
    if (s == "custom") return EnvironmentKind::custom;
    throw ValidationError("environment.name", "unknown environment '" + std::string(s) + "'");
}

EnvironmentParams EnvironmentParams::dense_urban()
{
    return {EnvironmentKind::dense_urban, 12.08, 0.11, 1.6, 23.0, 2.5, 2.6, 4.0};
}

EnvironmentParams EnvironmentParams::high_rise_urban()
{
    return {EnvironmentKind::high_rise_urban, 27.23, 0.08, 2.3, 34.0, 2.7, 2.9, 6.0};
}

EnvironmentParams EnvironmentParams::for_kind(EnvironmentKind k)
{
    return k == EnvironmentKind::high_rise_urban ? high_rise_urban() : dense_urban();
}

double TierValues::operator[](Tier t) const
{
    switch (t) {
    case Tier::macro: return macro;
    case Tier::uav: return uav;
    case Tier::small_cell: return small_cell;
    }
    return 0.0;
}

double RadioParams::p_max_w(Tier t) const { return units::dbm_to_watts(p_max_dbm[t]); }

TierValues RadioParams::p_max_watts() const
{
    return {p_max_w(Tier::macro), p_max_w(Tier::uav), p_max_w(Tier::small_cell)};
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

namespace {

void require(bool ok, const char* field, const char* what)
{
    if (!ok) throw ValidationError(field, what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate_config(const ScenarioConfig& cfg)
{
    require(finite_positive(cfg.roi_width_m), "roi_width_m", "must be > 0");
    require(finite_positive(cfg.roi_height_m), "roi_height_m", "must be > 0");
    require(cfg.n_users >= 0, "n_users", "must be >= 0");
    require(cfg.n_uavs >= 0, "n_uavs", "must be >= 0");
    require(cfg.n_scs >= 0, "n_scs", "must be >= 0");
    require(finite_positive(cfg.uav_altitude_m), "uav_altitude_m", "must be > 0");

    const auto& env = cfg.environment;
    require(finite_positive(env.a), "environment.a", "must be > 0");
    require(finite_positive(env.b), "environment.b", "must be > 0");
    require(std::isfinite(env.mu_los_db) && env.mu_los_db >= 0.0, "environment.mu_los_db", "must be >= 0");
    require(std::isfinite(env.mu_nlos_db) && env.mu_nlos_db > env.mu_los_db, "environment.mu_nlos_db",
            "must exceed mu_los_db");
    require(std::isfinite(env.alpha_mbs) && env.alpha_mbs >= 2.0, "environment.alpha_mbs", "must be >= 2");
    require(std::isfinite(env.alpha_sc) && env.alpha_sc >= 2.0, "environment.alpha_sc", "must be >= 2");
    require(std::isfinite(env.shadow_sigma_db) && env.shadow_sigma_db >= 0.0, "environment.shadow_sigma_db",
            "must be >= 0");

    const auto& r = cfg.radio;
    require(finite_positive(r.carrier_freq_hz), "radio.carrier_freq_hz", "must be > 0");
    require(finite_positive(r.bandwidth_hz), "radio.bandwidth_hz", "must be > 0");
    require(r.n_subcarriers >= 1, "radio.n_subcarriers", "must be >= 1");
    require(std::isfinite(r.noise_psd_dbm_hz), "radio.noise_psd_dbm_hz", "must be finite");
    require(std::isfinite(r.p_max_dbm.macro), "radio.p_max_dbm.m", "must be finite");
    require(std::isfinite(r.p_max_dbm.uav), "radio.p_max_dbm.u", "must be finite");
    require(std::isfinite(r.p_max_dbm.small_cell), "radio.p_max_dbm.s", "must be finite");
    require(finite_positive(r.r_min_bps), "radio.r_min_bps", "must be > 0");
    require(finite_positive(r.i_th_w), "radio.i_th_w", "must be > 0");
    require(finite_positive(r.circuit_power_w), "radio.circuit_power_w", "must be > 0");
    require(finite_positive(r.control_time_s), "radio.control_time_s", "must be > 0");
    require(finite_positive(r.max_hover_s), "radio.max_hover_s", "must be > 0");
    require(finite_positive(r.load_bits), "radio.load_bits", "must be > 0");
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

using nlohmann::json;

class Reader {
public:
    Reader(LoadedConfig& out) : out_(out) {}

    const json& object(const json& parent, const char* key, const char* field)
    {
        auto it = parent.find(key);
        if (it == parent.end()) throw ValidationError(field, "missing required field");
        if (!it->is_object()) throw ValidationError(field, "must be an object");
        return *it;
    }

    double number(const json& parent, const char* key, const char* field)
    {
        auto it = parent.find(key);
        if (it == parent.end()) throw ValidationError(field, "missing required field");
        if (!it->is_number()) throw ValidationError(field, "must be a number");
        return it->get<double>();
    }

    double number_or(const json& parent, const char* key, const char* field, double fallback, bool published)
    {
        auto it = parent.find(key);
        if (it == parent.end()) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "default %s = %.9g%s", field, fallback,
                          published ? "" : " (non-published value)");
            out_.provenance.emplace_back(buf);
            return fallback;
        }
        if (!it->is_number()) throw ValidationError(field, "must be a number");
        return it->get<double>();
    }

    int integer(const json& parent, const char* key, const char* field)
    {
        auto it = parent.find(key);
        if (it == parent.end()) throw ValidationError(field, "missing required field");
        if (!it->is_number_integer()) throw ValidationError(field, "must be an integer");
        return it->get<int>();
    }

    void warn_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where)
    {
        std::set<std::string> k(known.begin(), known.end());
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!k.count(it.key())) out_.warnings.push_back("unknown key '" + where + it.key() + "' ignored");
        }
    }

private:
    LoadedConfig& out_;
};

}  // namespace

LoadedConfig load_config(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed configuration: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("malformed configuration: top level must be an object", 0);

    LoadedConfig out;
    Reader rd(out);
    ScenarioConfig& cfg = out.config;
    rd.warn_unknown(doc, {"roi", "counts", "uav_altitude_m", "environment", "radio", "seed"}, "");

    const json& roi = rd.object(doc, "roi", "roi");
    cfg.roi_width_m = rd.number(roi, "width_m", "roi_width_m");
    cfg.roi_height_m = rd.number(roi, "height_m", "roi_height_m");
    rd.warn_unknown(roi, {"width_m", "height_m"}, "roi.");

    const json& counts = rd.object(doc, "counts", "counts");
    cfg.n_users = rd.integer(counts, "users", "n_users");
    cfg.n_uavs = rd.integer(counts, "uavs", "n_uavs");
    cfg.n_scs = rd.integer(counts, "small_cells", "n_scs");
    rd.warn_unknown(counts, {"users", "uavs", "small_cells"}, "counts.");

    cfg.uav_altitude_m = rd.number_or(doc, "uav_altitude_m", "uav_altitude_m", 140.0, true);

    auto env_it = doc.find("environment");
    if (env_it == doc.end()) throw ValidationError("environment", "missing required field");
    if (env_it->is_string()) {
        auto kind = environment_kind_from_string(env_it->get<std::string>());
        if (kind == EnvironmentKind::custom)
            throw ValidationError("environment", "custom environment needs explicit constants");
        cfg.environment = EnvironmentParams::for_kind(kind);
    } else if (env_it->is_object()) {
        const json& e = *env_it;
        auto name_it = e.find("name");
        auto kind = EnvironmentKind::custom;
        if (name_it != e.end()) {
            if (!name_it->is_string()) throw ValidationError("environment.name", "must be a string");
            kind = environment_kind_from_string(name_it->get<std::string>());
        }
        EnvironmentParams base = EnvironmentParams::for_kind(kind);
        auto field = [&](const char* key, const char* path, double fallback) {
            if (kind == EnvironmentKind::custom) return rd.number(e, key, path);
            auto it = e.find(key);
            if (it == e.end()) return fallback;
            if (!it->is_number()) throw ValidationError(path, "must be a number");
            return it->get<double>();
        };
        base.name = kind;
        base.a = field("a", "environment.a", base.a);
        base.b = field("b", "environment.b", base.b);
        base.mu_los_db = field("mu_los_db", "environment.mu_los_db", base.mu_los_db);
        base.mu_nlos_db = field("mu_nlos_db", "environment.mu_nlos_db", base.mu_nlos_db);
        base.alpha_mbs = field("alpha_mbs", "environment.alpha_mbs", base.alpha_mbs);
        base.alpha_sc = field("alpha_sc", "environment.alpha_sc", base.alpha_sc);
        base.shadow_sigma_db = field("shadow_sigma_db", "environment.shadow_sigma_db", base.shadow_sigma_db);
        cfg.environment = base;
        rd.warn_unknown(e, {"name", "a", "b", "mu_los_db", "mu_nlos_db", "alpha_mbs", "alpha_sc", "shadow_sigma_db"},
                        "environment.");
    } else {
        throw ValidationError("environment", "must be a name or an object of constants");
    }

    const json& radio = rd.object(doc, "radio", "radio");
    RadioParams& r = cfg.radio;
    const RadioParams d;
    r.carrier_freq_hz = rd.number_or(radio, "carrier_freq_hz", "radio.carrier_freq_hz", d.carrier_freq_hz, true);
    r.bandwidth_hz = rd.number_or(radio, "bandwidth_hz", "radio.bandwidth_hz", d.bandwidth_hz, true);
    {
        auto it = radio.find("n_subcarriers");
        if (it == radio.end()) {
            out.provenance.emplace_back("default radio.n_subcarriers = 64");
        } else {
            if (!it->is_number_integer()) throw ValidationError("radio.n_subcarriers", "must be an integer");
            r.n_subcarriers = it->get<int>();
        }
    }
    r.noise_psd_dbm_hz = rd.number_or(radio, "noise_psd_dbm_hz", "radio.noise_psd_dbm_hz", d.noise_psd_dbm_hz, true);
    if (auto it = radio.find("p_max_dbm"); it != radio.end()) {
        if (!it->is_object()) throw ValidationError("radio.p_max_dbm", "must be an object with keys m, u, s");
        r.p_max_dbm.macro = rd.number_or(*it, "m", "radio.p_max_dbm.m", d.p_max_dbm.macro, true);
        r.p_max_dbm.uav = rd.number_or(*it, "u", "radio.p_max_dbm.u", d.p_max_dbm.uav, true);
        r.p_max_dbm.small_cell = rd.number_or(*it, "s", "radio.p_max_dbm.s", d.p_max_dbm.small_cell, true);
        rd.warn_unknown(*it, {"m", "u", "s"}, "radio.p_max_dbm.");
    } else {
        out.provenance.emplace_back("default radio.p_max_dbm = {m: 45, u: 30, s: 27}");
    }
    r.r_min_bps = rd.number_or(radio, "r_min_bps", "radio.r_min_bps", d.r_min_bps, true);
    r.i_th_w = rd.number_or(radio, "i_th_w", "radio.i_th_w", d.i_th_w, true);
    r.circuit_power_w = rd.number_or(radio, "circuit_power_w", "radio.circuit_power_w", d.circuit_power_w, false);
    r.control_time_s = rd.number_or(radio, "control_time_s", "radio.control_time_s", d.control_time_s, false);
    r.max_hover_s = rd.number_or(radio, "max_hover_s", "radio.max_hover_s", d.max_hover_s, true);
    r.load_bits = rd.number_or(radio, "load_bits", "radio.load_bits", d.load_bits, true);
    rd.warn_unknown(radio,
                    {"carrier_freq_hz", "bandwidth_hz", "n_subcarriers", "noise_psd_dbm_hz", "p_max_dbm", "r_min_bps",
                     "i_th_w", "circuit_power_w", "control_time_s", "max_hover_s", "load_bits"},
                    "radio.");

    auto seed_it = doc.find("seed");
    if (seed_it == doc.end()) throw ValidationError("seed", "missing required field");
    if (!seed_it->is_number_unsigned() && !(seed_it->is_number_integer() && seed_it->get<std::int64_t>() >= 0))
        throw ValidationError("seed", "must be a non-negative integer");
    cfg.seed = seed_it->get<std::uint64_t>();

    validate_config(cfg);
    return out;
}

LoadedConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

nlohmann::json config_to_json(const ScenarioConfig& cfg)
{
    const auto& e = cfg.environment;
    const auto& r = cfg.radio;
    return json{
        {"roi", {{"width_m", cfg.roi_width_m}, {"height_m", cfg.roi_height_m}}},
        {"counts", {{"users", cfg.n_users}, {"uavs", cfg.n_uavs}, {"small_cells", cfg.n_scs}}},
        {"uav_altitude_m", cfg.uav_altitude_m},
        {"environment",
         {{"name", to_string(e.name)},
          {"a", e.a},
          {"b", e.b},
          {"mu_los_db", e.mu_los_db},
          {"mu_nlos_db", e.mu_nlos_db},
          {"alpha_mbs", e.alpha_mbs},
          {"alpha_sc", e.alpha_sc},
          {"shadow_sigma_db", e.shadow_sigma_db}}},
        {"radio",
         {{"carrier_freq_hz", r.carrier_freq_hz},
          {"bandwidth_hz", r.bandwidth_hz},
          {"n_subcarriers", r.n_subcarriers},
          {"noise_psd_dbm_hz", r.noise_psd_dbm_hz},
          {"p_max_dbm", {{"m", r.p_max_dbm.macro}, {"u", r.p_max_dbm.uav}, {"s", r.p_max_dbm.small_cell}}},
          {"r_min_bps", r.r_min_bps},
          {"i_th_w", r.i_th_w},
          {"circuit_power_w", r.circuit_power_w},
          {"control_time_s", r.control_time_s},
          {"max_hover_s", r.max_hover_s},
          {"load_bits", r.load_bits}}},
        {"seed", cfg.seed},
    };
}

std::string config_hash(const ScenarioConfig& cfg)
{
    const std::string text = config_to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Scenario generation

Scenario generate_scenario(const ScenarioConfig& cfg)
{
    validate_config(cfg);

    Scenario s;
    s.config = cfg;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ux(0.0, cfg.roi_width_m);
    std::uniform_real_distribution<double> uy(0.0, cfg.roi_height_m);

    s.users.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int n = 0; n < cfg.n_users; ++n) {
        const double x = ux(rng);
        const double y = uy(rng);
        s.users.push_back({n, x, y, cfg.radio.load_bits});
    }

    const auto p_max = cfg.radio.p_max_watts();
    s.base_stations.reserve(static_cast<std::size_t>(cfg.n_base_stations()));
    s.base_stations.push_back({0, Tier::macro, cfg.roi_width_m / 2.0, cfg.roi_height_m / 2.0, 0.0, p_max.macro});
    int id = 1;
    for (int j = 0; j < cfg.n_uavs; ++j, ++id) {
        const double x = ux(rng);
        const double y = uy(rng);
        s.base_stations.push_back({id, Tier::uav, x, y, cfg.uav_altitude_m, p_max.uav});
    }
    for (int j = 0; j < cfg.n_scs; ++j, ++id) {
        const double x = ux(rng);
        const double y = uy(rng);
        s.base_stations.push_back({id, Tier::small_cell, x, y, 0.0, p_max.small_cell});
    }
    return s;
}

std::vector<std::string> validate_scenario(const Scenario& s)
{
    std::vector<std::string> report;
    const auto& cfg = s.config;
    const double w = cfg.roi_width_m;
    const double h = cfg.roi_height_m;
    auto inside = [&](double x, double y) { return x >= 0.0 && x <= w && y >= 0.0 && y <= h; };

    for (std::size_t i = 0; i < s.users.size(); ++i) {
        const auto& u = s.users[i];
        const std::string tag = "user " + std::to_string(u.id);
        if (u.id != static_cast<int>(i)) report.push_back(tag + ": id does not match position");
        if (!inside(u.x_m, u.y_m)) report.push_back(tag + ": user outside ROI");
        if (!(u.load_bits > 0.0)) report.push_back(tag + ": load must be > 0");
    }

    int n_macro = 0;
    for (std::size_t i = 0; i < s.base_stations.size(); ++i) {
        const auto& b = s.base_stations[i];
        const std::string tag = "bs " + std::to_string(b.id);
        if (b.id != static_cast<int>(i)) report.push_back(tag + ": id does not match position");
        if (!inside(b.x_m, b.y_m)) report.push_back(tag + ": base station outside ROI");
        const double expected = cfg.radio.p_max_w(b.tier);
        if (std::abs(b.p_max_w - expected) > 1e-12 * expected)
            report.push_back(tag + ": p_max does not match tier maximum");
        switch (b.tier) {
        case Tier::macro:
            ++n_macro;
            if (std::abs(b.x_m - w / 2.0) > 1e-9 || std::abs(b.y_m - h / 2.0) > 1e-9)
                report.push_back(tag + ": MBS must be at ROI center");
            break;
        case Tier::uav:
            if (b.altitude_m != cfg.uav_altitude_m) report.push_back(tag + ": UAV altitude differs from config");
            break;
        case Tier::small_cell:
            break;
        }
    }
    if (n_macro != 1) report.emplace_back("exactly one MBS required");
    return report;
}

nlohmann::json scenario_to_json(const Scenario& s)
{
    json users = json::array();
    for (const auto& u : s.users) users.push_back({u.id, u.x_m, u.y_m, u.load_bits});
    json bss = json::array();
    for (const auto& b : s.base_stations)
        bss.push_back({b.id, std::string(1, tier_code(b.tier)), b.x_m, b.y_m, b.altitude_m, b.p_max_w});
    return json{{"config", config_to_json(s.config)}, {"users", users}, {"base_stations", bss}};
}

}  // namespace hetnet
