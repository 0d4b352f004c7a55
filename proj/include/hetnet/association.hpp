#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hetnet/channel.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

struct Attachment {
    int bs = -1;
    Tier tier = Tier::macro;
    int subcarrier = -1;  // -1 until assign_subcarriers runs

    bool operator==(const Attachment&) const = default;
};

/// User -> (base station, subcarrier) map plus the derived per-BS, per-tier
/// and per-subcarrier views. Within a tier every subcarrier has at most one
/// occupant; different tiers reuse the same subcarriers.
struct Association {
    int n_subcarriers = 0;
    std::vector<Attachment> users;
    std::vector<std::vector<int>> bs_users;
    std::array<std::vector<int>, 3> tier_users;
    std::array<std::vector<int>, 3> occupant;  // [tier][subcarrier] -> user or -1

    bool has_subcarriers() const;
    int occupant_of(Tier t, int sc) const { return occupant[index(t)][static_cast<std::size_t>(sc)]; }
    int n_users_on(int bs) const { return static_cast<int>(bs_users[static_cast<std::size_t>(bs)].size()); }

    bool operator==(const Association&) const = default;
};

/// Row-major [user][bs] matrix of P_max^j / mean path loss.
std::vector<double> mean_received_power(const Scenario& s, const ChannelState& ch);

/// Strongest-mean-received-power association with a cap of L users per BS and
/// per tier; pairs are taken in descending power order, so users that overflow
/// land on their next-best base station. Throws CapacityError when the network
/// cannot host every user.
Association associate_users(const Scenario& s, std::span<const double> mean_rx_w);

/// P_max^j / N_j for every user (zero for users without a BS).
std::vector<double> baseline_powers(const Scenario& s, const Association& a);

/// Greedy cross-tier-interference-minimizing subcarrier assignment. Tiers are
/// handled in the order m, u, s and users in id order; each user takes the free
/// subcarrier of its tier with the least interference from already placed
/// users of other tiers transmitting at `reference_powers`, lowest index on ties.
Association assign_subcarriers(const Association& a, const Scenario& s, const ChannelState& ch,
                               std::span<const double> reference_powers);

/// Interference received by `user` on `sc` from users of other tiers.
double cross_tier_interference(const Association& a, const ChannelState& ch, int user, int sc,
                               std::span<const double> powers);

/// Sum of gains from the user's serving BS to the other-tier users sharing
/// its subcarrier (the interference it causes per Watt it transmits).
double leakage_gain(const Association& a, const ChannelState& ch, int user);

/// rho / (I + N0), in 1/W. Throws DomainError if noise_w <= 0.
double sinr_coefficient(double rho_own, double interference_w, double noise_w);

/// Gamma of every user on its assigned subcarrier under `powers`.
std::vector<double> user_gammas(const Association& a, const ChannelState& ch, std::span<const double> powers);

/// Invariant violations; empty for a consistent association.
std::vector<std::string> check_association(const Association& a, int n_base_stations);

}  // namespace hetnet
