#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/channel.hpp"
#include "hetnet/scenario.hpp"

namespace hetnet {

// Inside the optimizers rates are in Mbps, powers in W and bandwidths in MHz.

struct SubgradientOptions {
    double c1 = 0.01;
    double c2 = 0.01;
    double c3 = 0.01;
    double tolerance = 0.01;  // on max |multiplier change| / step size
    long max_iterations = 1'000'000;
    double initial_multiplier = 0.01;
    double slack_limit = 1.0;  // subgradient components are clipped to +-slack_limit
    bool record_trace = false;
};

/// Multipliers of one tier problem. `mu` and `phi` are per user (each user
/// holds its own subcarrier within the tier), `lambda` is per base station.
/// Values are in the solver's scaled constraint space (see TierPowerSolution).
struct MultiplierState {
    std::vector<double> mu;
    std::vector<double> lambda;
    std::vector<double> phi;
    double c1 = 0.01;
    double c2 = 0.01;
    double c3 = 0.01;
    long iteration = 0;
    double slack_limit = std::numeric_limits<double>::infinity();
};

/// Subgradients of the three constraint families, already in scaled units.
struct ConstraintSlacks {
    std::vector<double> rate;          // R - R_min per user
    std::vector<double> power;         // P_max - sum p per BS
    std::vector<double> interference;  // I_th - leakage per user
};

/// [ (1+mu) B / ((1 + lambda + phi rho) ln 2) - 1/gamma ]^+.
/// Throws DomainError for gamma <= 0 or negative multipliers.
double kkt_power(double mu, double lambda, double phi, double rho, double gamma, double b_sub);

/// One projected subgradient step: mu <- [mu - c1 s_rate]^+, and likewise for
/// lambda and phi. Slacks are clipped to +-slack_limit first.
MultiplierState update_power_multipliers(const MultiplierState& state, const ConstraintSlacks& slacks);

struct TierUser {
    int user_id = 0;
    int bs = 0;  // index into TierProblem::p_max_w
    double gamma = 0.0;
    double leakage_gain = 0.0;  // interference caused per W transmitted
    double i_th_w = 1e-14;      // leakage budget of this transmitter
};

struct TierProblem {
    Tier tier = Tier::macro;
    std::vector<TierUser> users;
    std::vector<int> bs_ids;
    std::vector<double> p_max_w;
    double b_sub_mhz = 0.3125;
    double r_min_mbps = 0.25;
    double circuit_power_w = 0.1;
};

/// Rate-minus-power objective with the circuit term, in Mbps - W.
double tier_objective(const TierProblem& prob, const std::vector<double>& p);

struct ConstraintResiduals {
    double power = 0.0;         // max (sum p - P_max) / P_max, floored at 0
    double rate = 0.0;          // max (R_min - R) in Mbps over enforced users
    double interference = 0.0;  // max (leak - I_th) / I_th
};

struct TraceRow {
    long iteration = 0;
    double max_delta = 0.0;
    double objective = 0.0;
    double power_slack = 0.0;
    double rate_slack = 0.0;
    double interference_slack = 0.0;
};

/// Result of one tier solve. `mu`, `lambda`, `phi` are in the form that
/// enters the closed-form power: p = kkt_power(mu, lambda, phi, leakage_gain).
struct TierPowerSolution {
    Tier tier = Tier::macro;
    std::vector<double> p;
    std::vector<double> mu;
    std::vector<double> lambda;
    std::vector<double> phi;
    MultiplierState state;  // raw subgradient state at loop exit
    bool converged = false;
    long iterations = 0;
    ConstraintResiduals residuals;
    std::vector<bool> rate_relaxed;  // R_min unreachable under the caps
    double recovery_shift = 0.0;     // max |p_final - p_iterate|
    std::vector<std::string> warnings;
    std::vector<TraceRow> trace;
};

/// Subgradient iterations followed by exact multiplier recovery, so the
/// returned p is a KKT point of the tier problem.
TierPowerSolution solve_tier_power(const TierProblem& prob, const SubgradientOptions& opts = {});

/// Tier problem for `tier` with gammas evaluated under `powers`.
TierProblem build_tier_problem(Tier tier, const Scenario& s, const Association& a, const ChannelState& ch,
                               const std::vector<double>& powers);

struct NetworkPowerOptions {
    SubgradientOptions tier;
    int max_rounds = 20;
    double ee_tolerance = 1e-3;
};

struct PowerSolution {
    std::vector<double> p;  // per user, W
    std::vector<TierPowerSolution> tiers;
    std::vector<double> round_ee;  // bits/J after each accepted round
    int rounds = 0;
    bool converged = true;
    bool baseline = false;
    std::vector<std::string> warnings;
};

/// Network EE (bits/J) when every user transmits `p`.
double network_energy_efficiency(const Scenario& s, const Association& a, const ChannelState& ch,
                                 const std::vector<double>& p);

/// Block-coordinate rounds over tiers m, u, s starting from the maximal-power
/// state; a round that lowers EE is rolled back and ends the schedule.
PowerSolution solve_network_power(const Scenario& s, const Association& a, const ChannelState& ch,
                                  const NetworkPowerOptions& opts = {});

/// p = P_max^j / N_j for every user.
PowerSolution max_power_baseline(const Scenario& s, const Association& a);

}  // namespace hetnet
