#pragma once

#include <span>
#include <string>
#include <vector>

namespace hetnet {

// Hover-time layer. Inside the solver loads are in Mb, bandwidth in MHz,
// rates in Mbps, powers in W and times in s; the scalar formulas below are
// unit-agnostic as long as beta / (b_sub T) is dimensionless.

/// (2^(beta / (b_sub T)) - 1) / gamma. Throws DomainError for T <= 0,
/// gamma <= 0 or an exponent above 1024.
double required_power_for_time(double T, double beta, double gamma, double b_sub);

/// Derivative of the hover Lagrangian with respect to T:
/// (beta / T^2) [ln2 2^(beta/(b_sub T)) / (b_sub gamma) - (1 + mu)] - lambda.
double stationarity_residual(double T, double mu, double lambda, double beta, double gamma, double b_sub);

/// The residual divided by the magnitude of its negative part,
/// (1 + mu) beta / T^2 + lambda, so it is dimensionless.
double normalized_stationarity_residual(double T, double mu, double lambda, double beta, double gamma,
                                        double b_sub);

/// Root of the residual at mu = lambda = 0: beta / (b_sub log2(b_sub gamma / ln2)).
/// Throws DomainError unless b_sub gamma > ln2.
double closed_form_transmission_time(double beta, double gamma, double b_sub);

/// Bisection root of the stationarity residual. A root exists iff lambda > 0
/// or (1 + mu) b_sub gamma > ln2; otherwise, or if the bracket search passes
/// 2^60 s, throws NoRootError.
double solve_transmission_time(double mu, double lambda, double beta, double gamma, double b_sub);

/// sum T + n_users t_c.
double hover_time(std::span<const double> T, int n_users, double t_c);

/// sum beta/T - (2^(beta/(b_sub T)) - 1)/gamma.
double hover_objective(std::span<const double> T, std::span<const double> beta, std::span<const double> gamma,
                       double b_sub);

struct HoverParams {
    double b_sub_mhz = 0.3125;
    double t_min_mbps = 0.25;  // rate floor that bounds beta / T
    double budget_s = 1800.0;  // hover-time budget tau_j in the C2 constraint
    double control_time_s = 0.1;
};

struct HoverOptions {
    double c1 = 0.01;
    double c2 = 0.01;
    double tolerance = 0.01;  // on max |multiplier change| / step size
    long max_iterations = 1'000'000;
    double initial_multiplier = 0.01;
    double slack_limit = 1.0;
};

struct HoverMultipliers {
    std::vector<double> mu;  // per user
    double lambda = 0.0;
    double c1 = 0.01;
    double c2 = 0.01;
    long iteration = 0;
    double slack_limit = 1e300;
};

/// mu <- [mu - c1 (beta/T - T_min)]^+, lambda <- [lambda - c2 ((budget - T_c) - sum T)]^+,
/// with each subgradient clipped to +-slack_limit.
HoverMultipliers update_hover_multipliers(const HoverMultipliers& state, std::span<const double> T,
                                          std::span<const double> beta, double budget_s, double control_total_s,
                                          double t_min);

struct HoverSolution {
    int uav_id = -1;
    std::vector<int> users;
    std::vector<double> T;      // s
    std::vector<double> p;      // W implied by T
    std::vector<double> gamma;  // 1/W, as used by the solve
    std::vector<double> mu;
    double lambda = 0.0;
    double control_time_s = 0.0;  // N_j t_c
    double tau_s = 0.0;
    bool converged = false;
    bool feasible = true;
    bool baseline = false;
    long iterations = 0;
    double recovery_shift = 0.0;  // max relative change of T in recovery
    std::vector<std::string> warnings;
};

/// Subgradient iterations on (mu, lambda) with per-user root solves, followed
/// by an exact recovery of the multipliers so that every returned T is a
/// stationary point and both constraints hold. `beta` is in Mb.
HoverSolution solve_hover(std::span<const double> gamma, std::span<const double> beta, const HoverParams& params,
                          const HoverOptions& opts = {});

/// Equal power split p = p_max / N_j with T = beta / R(p).
HoverSolution equal_time_baseline(std::span<const double> gamma, std::span<const double> beta, double p_max_w,
                                  const HoverParams& params);

}  // namespace hetnet
