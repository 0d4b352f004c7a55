#include "hetnet/channel.hpp"

#include <cmath>
#include <limits>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

double free_space_constant(double carrier_freq_hz)
{
    const double k = 4.0 * units::pi * carrier_freq_hz / units::speed_of_light;
    return k * k;
}

double terrestrial_path_loss(double distance_m, double ple, double shadow_db, double carrier_freq_hz)
{
    if (!(distance_m > 0.0)) throw DomainError("terrestrial_path_loss: distance must be > 0");
    return free_space_constant(carrier_freq_hz) * std::pow(distance_m, ple) * units::db_to_linear(shadow_db);
}

double elevation_angle_deg(double altitude_m, double distance_3d_m)
{
    if (!(altitude_m > 0.0)) throw DomainError("elevation_angle_deg: altitude must be > 0");
    if (altitude_m > distance_3d_m) throw DomainError("elevation_angle_deg: altitude exceeds distance");
    return 180.0 / units::pi * std::asin(altitude_m / distance_3d_m);
}

double los_probability(double theta_deg, const EnvironmentParams& env)
{
    return 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
}

double a2g_path_loss(double distance_3d_m, double theta_deg, const EnvironmentParams& env, double carrier_freq_hz)
{
    if (!(distance_3d_m > 0.0)) throw DomainError("a2g_path_loss: distance must be > 0");
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) throw DomainError("a2g_path_loss: elevation outside [0, 90]");
    const double p_los = los_probability(theta_deg, env);
    const double excess =
        p_los * units::db_to_linear(env.mu_los_db) + (1.0 - p_los) * units::db_to_linear(env.mu_nlos_db);
    return free_space_constant(carrier_freq_hz) * distance_3d_m * distance_3d_m * excess;
}

double sample_fading(std::mt19937_64& rng)
{
    std::exponential_distribution<double> exp1(1.0);
    return exp1(rng);
}

double channel_gain_rho(double fading_power, double path_loss_linear)
{
    if (!(path_loss_linear > 0.0)) throw DomainError("channel_gain_rho: path loss must be > 0");
    return fading_power / path_loss_linear;
}

double noise_power_w(double b_sub_hz, double noise_psd_dbm_hz)
{
    if (!(b_sub_hz > 0.0)) throw DomainError("noise_power_w: bandwidth must be > 0");
    return units::dbm_to_watts(noise_psd_dbm_hz) * b_sub_hz;
}

ChannelState ChannelState::draw(const Scenario& s, std::uint64_t seed)
{
    const auto& cfg = s.config;
    const auto& env = cfg.environment;
    const double fc = cfg.radio.carrier_freq_hz;

    ChannelState cs;
    cs.n_users_ = s.n_users();
    cs.n_bs_ = s.n_base_stations();
    cs.n_sc_ = cfg.radio.n_subcarriers;
    cs.noise_w_ = noise_power_w(cfg.radio.subcarrier_bandwidth_hz(), cfg.radio.noise_psd_dbm_hz);

    const std::size_t n_pairs = static_cast<std::size_t>(cs.n_users_) * static_cast<std::size_t>(cs.n_bs_);
    cs.path_loss_.resize(n_pairs);
    cs.distance_.resize(n_pairs);
    cs.elevation_.resize(n_pairs, std::numeric_limits<double>::quiet_NaN());
    cs.fading_.resize(n_pairs * static_cast<std::size_t>(cs.n_sc_));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shadow(0.0, env.shadow_sigma_db);

    // Large scale first (user-major), then fading, so that changing L does not
    // perturb the shadowing draws.
    for (const auto& u : s.users) {
        for (const auto& b : s.base_stations) {
            const std::size_t k = cs.pair(u.id, b.id);
            const double dx = b.x_m - u.x_m;
            const double dy = b.y_m - u.y_m;
            const double ground = std::hypot(dx, dy);
            if (b.tier == Tier::uav) {
                const double d = std::hypot(ground, b.altitude_m);
                const double theta = elevation_angle_deg(b.altitude_m, d);
                cs.distance_[k] = d;
                cs.elevation_[k] = theta;
                cs.path_loss_[k] = a2g_path_loss(d, theta, env, fc);
            } else {
                const double ple = b.tier == Tier::macro ? env.alpha_mbs : env.alpha_sc;
                const double d = std::max(ground, min_distance_m);
                const double sh = env.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;
                cs.distance_[k] = d;
                cs.path_loss_[k] = terrestrial_path_loss(d, ple, sh, fc);
            }
        }
    }
    for (double& f : cs.fading_) f = sample_fading(rng);
    return cs;
}

LinkGain ChannelState::link(int user, int bs, int sc) const
{
    const std::size_t k = pair(user, bs);
    LinkGain g;
    g.path_loss_linear = path_loss_[k];
    g.fading_power = fading(user, bs, sc);
    g.rho = channel_gain_rho(g.fading_power, g.path_loss_linear);
    g.distance_m = distance_[k];
    if (!std::isnan(elevation_[k])) g.elevation_deg = elevation_[k];
    return g;
}

}  // namespace hetnet
