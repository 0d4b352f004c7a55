#pragma once

#include <array>
#include <optional>
#include <span>

#include "hetnet/association.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

/// B log2(1 + gamma p), in the units of `b_sub`.
double user_rate(double p, double gamma, double b_sub);

/// sum p + N P_c.
double total_power(std::span<const double> p, int n_users, double p_c);

/// Bits per joule. Throws DomainError when power is zero but rate is not.
double energy_efficiency(double sum_rate, double total_power_w);

/// Mean of tau over UAVs; nullopt without UAVs.
std::optional<double> average_hover_time(std::span<const double> tau);

struct TierBreakdown {
    int users = 0;
    double sum_rate_bps = 0.0;
    double power_w = 0.0;

    bool operator==(const TierBreakdown&) const = default;
};

struct TrialMetrics {
    double sum_rate_bps = 0.0;
    double total_power_w = 0.0;
    double ee_bits_per_joule = 0.0;
    std::optional<double> avg_hover_s;
    std::array<TierBreakdown, 3> tiers{};
    int outage_count = 0;

    bool operator==(const TrialMetrics&) const = default;
};

/// Rates come from `p` and `gamma` per user; `tau` holds one hover time per UAV.
TrialMetrics compute_metrics(const Scenario& s, const Association& a, std::span<const double> p,
                             std::span<const double> gamma, std::span<const double> tau);

}  // namespace hetnet
