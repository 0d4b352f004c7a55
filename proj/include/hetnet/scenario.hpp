#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hetnet {

/// Base-station tier. The numeric value doubles as an array index.
enum class Tier : std::uint8_t { macro = 0, uav = 1, small_cell = 2 };

inline constexpr std::array<Tier, 3> all_tiers{Tier::macro, Tier::uav, Tier::small_cell};

constexpr std::size_t index(Tier t) { return static_cast<std::size_t>(t); }
char tier_code(Tier t);  // 'm', 'u', 's'
Tier tier_from_code(char c);

enum class EnvironmentKind { dense_urban, high_rise_urban, custom };

std::string to_string(EnvironmentKind k);
EnvironmentKind environment_kind_from_string(std::string_view s);

/// Propagation constants for one urban environment.
///
/// `a`, `b` shape the LoS probability curve of the air-to-ground link,
/// `mu_los_db` / `mu_nlos_db` are the excess attenuations of LoS and NLoS
/// paths, `alpha_*` are the terrestrial path-loss exponents and
/// `shadow_sigma_db` is the log-normal shadowing spread of terrestrial links.
struct EnvironmentParams {
    EnvironmentKind name = EnvironmentKind::dense_urban;
    double a = 12.08;
    double b = 0.11;
    double mu_los_db = 1.6;
    double mu_nlos_db = 23.0;
    double alpha_mbs = 2.5;
    double alpha_sc = 2.6;
    double shadow_sigma_db = 4.0;

    static EnvironmentParams dense_urban();
    static EnvironmentParams high_rise_urban();
    static EnvironmentParams for_kind(EnvironmentKind k);

    bool operator==(const EnvironmentParams&) const = default;
};

/// Per-tier value (macro, uav, small cell).
struct TierValues {
    double macro = 0.0;
    double uav = 0.0;
    double small_cell = 0.0;

    double operator[](Tier t) const;
    bool operator==(const TierValues&) const = default;
};

struct RadioParams {
    double carrier_freq_hz = 2.4e9;
    double bandwidth_hz = 20e6;
    int n_subcarriers = 64;
    double noise_psd_dbm_hz = -174.0;
    TierValues p_max_dbm{45.0, 30.0, 27.0};
    double r_min_bps = 0.25e6;
    double i_th_w = 1e-14;
    double circuit_power_w = 0.1;
    double control_time_s = 0.1;
    double max_hover_s = 30.0 * 60.0;
    double load_bits = 10e6;

    /// B / L, computed once from the two configured values.
    double subcarrier_bandwidth_hz() const { return bandwidth_hz / n_subcarriers; }
    double p_max_w(Tier t) const;
    TierValues p_max_watts() const;

    bool operator==(const RadioParams&) const = default;
};

struct ScenarioConfig {
    double roi_width_m = 1000.0;
    double roi_height_m = 1000.0;
    int n_users = 100;
    int n_uavs = 3;
    int n_scs = 3;
    double uav_altitude_m = 140.0;
    EnvironmentParams environment = EnvironmentParams::dense_urban();
    RadioParams radio;
    std::uint64_t seed = 1;

    int n_base_stations() const { return 1 + n_uavs + n_scs; }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Network layout used in the reference experiments: 1 km square, 100 users,
/// 3 UAVs at 140 m, 3 small cells, dense urban.
ScenarioConfig default_config();

/// Throws ValidationError naming the first offending field.
void validate_config(const ScenarioConfig& cfg);

struct LoadedConfig {
    ScenarioConfig config;
    std::vector<std::string> provenance;  // defaults that are not published values
    std::vector<std::string> warnings;    // unknown keys and similar
};

/// Parses a JSON configuration document (schema in README).
/// Throws ParseError on malformed text and ValidationError on bad fields.
LoadedConfig load_config(std::string_view document);
LoadedConfig load_config_file(const std::filesystem::path& path);

nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

struct User {
    int id = 0;
    double x_m = 0.0;
    double y_m = 0.0;
    double load_bits = 0.0;

    bool operator==(const User&) const = default;
};

struct BaseStation {
    int id = 0;
    Tier tier = Tier::macro;
    double x_m = 0.0;
    double y_m = 0.0;
    double altitude_m = 0.0;
    double p_max_w = 0.0;

    bool operator==(const BaseStation&) const = default;
};

/// Static network snapshot. Base station ids are 0 (macro), then UAVs, then
/// small cells; user ids are 0..N-1. Both equal their vector positions.
struct Scenario {
    std::vector<User> users;
    std::vector<BaseStation> base_stations;
    ScenarioConfig config;

    int n_users() const { return static_cast<int>(users.size()); }
    int n_base_stations() const { return static_cast<int>(base_stations.size()); }

    bool operator==(const Scenario&) const = default;
};

Scenario generate_scenario(const ScenarioConfig& cfg);

/// Empty iff every scenario invariant holds.
std::vector<std::string> validate_scenario(const Scenario& s);

nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace hetnet
