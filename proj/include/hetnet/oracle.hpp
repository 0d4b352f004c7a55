#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "hetnet/hover_opt.hpp"
#include "hetnet/power_alloc.hpp"

namespace hetnet {

struct OracleReport {
    double best_objective = 0.0;
    double solver_objective = 0.0;
    double relative_gap = 0.0;  // (oracle - solver) / |oracle|
    int grid_points = 0;
    bool oracle_feasible = false;  // some grid point met every constraint
    bool solver_feasible = false;
    double solver_max_violation = 0.0;  // relative, over all constraints
    std::vector<double> best_point;
};

nlohmann::json to_json(const OracleReport& r);

/// Exhaustive grid over p in [0, P_max] per user with the rate, power and
/// leakage constraints enforced, scored by the tier objective. At most 3
/// users; throws std::invalid_argument otherwise or for grid_points < 2.
OracleReport brute_force_power(const TierProblem& prob, std::span<const double> solver_p, int grid_points = 200);

/// Geometric grid per user over T in [T_hi / 1e3, T_hi] with
/// T_hi = min(budget - N t_c, beta / T_min), scored by the hover objective.
/// At most 2 users.
OracleReport brute_force_time(std::span<const double> gamma, std::span<const double> beta, const HoverParams& params,
                              std::span<const double> solver_T, int grid_points = 200);

struct KktReport {
    double stationarity = 0.0;
    double primal = 0.0;
    double dual = 0.0;
    double complementary = 0.0;

    double max() const;
};

nlohmann::json to_json(const KktReport& r);

/// Residuals of a power solution (p and multipliers in Eq. 13 form),
/// each a max-norm over users / base stations and relative to its scale.
KktReport kkt_residuals(const TierProblem& prob, std::span<const double> p, std::span<const double> mu,
                        std::span<const double> lambda, std::span<const double> phi,
                        const std::vector<bool>& rate_relaxed = {});

KktReport kkt_residuals(const TierProblem& prob, const TierPowerSolution& sol);

/// Residuals of a hover solution for one UAV.
KktReport kkt_residuals(const HoverSolution& sol, std::span<const double> beta, const HoverParams& params);

}  // namespace hetnet
