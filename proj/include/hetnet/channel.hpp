#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hetnet/scenario.hpp"

namespace hetnet {

/// Free-space constant (4 pi f_c / c)^2.
double free_space_constant(double carrier_freq_hz);

/// Terrestrial link path loss (linear): kappa * d^ple * 10^(shadow/10).
/// Throws DomainError for d <= 0.
double terrestrial_path_loss(double distance_m, double ple, double shadow_db, double carrier_freq_hz);

/// Elevation of a UAV seen from the ground, in degrees.
double elevation_angle_deg(double altitude_m, double distance_3d_m);

/// 1 / (1 + a exp(-b (theta - a))).
double los_probability(double theta_deg, const EnvironmentParams& env);

/// Air-to-ground path loss: kappa d^2 (P_los mu_los + P_nlos mu_nlos), with the
/// LoS/NLoS state averaged out through the LoS probability.
double a2g_path_loss(double distance_3d_m, double theta_deg, const EnvironmentParams& env, double carrier_freq_hz);

/// |h|^2 draw: exponential with unit mean (Rayleigh envelope).
double sample_fading(std::mt19937_64& rng);

/// rho = |h|^2 / PL.
double channel_gain_rho(double fading_power, double path_loss_linear);

/// Thermal noise over one subcarrier, in Watts.
double noise_power_w(double b_sub_hz, double noise_psd_dbm_hz);

struct LinkGain {
    double path_loss_linear = 1.0;
    double fading_power = 1.0;
    double rho = 1.0;
    double distance_m = 0.0;
    std::optional<double> elevation_deg;  // air-to-ground links only
};

/// Large-scale and small-scale state of every BS -> user link for one trial.
///
/// Mean path loss includes shadowing for terrestrial links; fading is drawn
/// independently per (user, base station, subcarrier).
class ChannelState {
public:
    /// Terrestrial distances below this floor are evaluated at the floor.
    static constexpr double min_distance_m = 1.0;

    ChannelState() = default;
    static ChannelState draw(const Scenario& s, std::uint64_t seed);

    int n_users() const { return n_users_; }
    int n_base_stations() const { return n_bs_; }
    int n_subcarriers() const { return n_sc_; }

    double mean_path_loss(int user, int bs) const { return path_loss_[pair(user, bs)]; }
    double distance(int user, int bs) const { return distance_[pair(user, bs)]; }
    double fading(int user, int bs, int sc) const { return fading_[pair(user, bs) * n_sc_ + sc]; }
    double rho(int user, int bs, int sc) const { return fading(user, bs, sc) / mean_path_loss(user, bs); }
    LinkGain link(int user, int bs, int sc) const;

    double noise_w() const { return noise_w_; }

private:
    std::size_t pair(int user, int bs) const
    {
        return static_cast<std::size_t>(user) * static_cast<std::size_t>(n_bs_) + static_cast<std::size_t>(bs);
    }

    int n_users_ = 0;
    int n_bs_ = 0;
    int n_sc_ = 0;
    double noise_w_ = 0.0;
    std::vector<double> path_loss_;
    std::vector<double> distance_;
    std::vector<double> elevation_;  // NaN for terrestrial links
    std::vector<double> fading_;
};

}  // namespace hetnet
