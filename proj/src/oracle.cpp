#include "hetnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetnet/metrics.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

namespace {

constexpr double feas_tol = 1e-12;

double gap(double oracle, double solver)
{
    const double d = oracle - solver;
    return oracle != 0.0 ? d / std::abs(oracle) : d;
}

}  // namespace

nlohmann::json to_json(const OracleReport& r)
{
    return {{"best_objective", r.best_objective},
            {"solver_objective", r.solver_objective},
            {"relative_gap", r.relative_gap},
            {"grid_points", r.grid_points},
            {"oracle_feasible", r.oracle_feasible},
            {"solver_feasible", r.solver_feasible},
            {"solver_max_violation", r.solver_max_violation},
            {"best_point", r.best_point}};
}

OracleReport brute_force_power(const TierProblem& prob, std::span<const double> solver_p, int grid_points)
{
    const std::size_t n = prob.users.size();
    if (n == 0 || n > 3) throw std::invalid_argument("brute_force_power: needs 1 to 3 users");
    if (grid_points < 2) throw std::invalid_argument("brute_force_power: grid_points must be >= 2");
    const double B = prob.b_sub_mhz;
    const auto g = static_cast<std::size_t>(grid_points);

    // Per user and grid index: power, objective term, and whether the
    // user's own constraints (rate, leakage) hold.
    std::vector<std::vector<double>> pw(n, std::vector<double>(g)), val(n, std::vector<double>(g));
    std::vector<std::vector<char>> ok(n, std::vector<char>(g));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prob.users[i];
        const double pmax = prob.p_max_w[static_cast<std::size_t>(u.bs)];
        for (std::size_t k = 0; k < g; ++k) {
            const double p = pmax * static_cast<double>(k) / static_cast<double>(g - 1);
            const double r = user_rate(p, u.gamma, B);
            pw[i][k] = p;
            val[i][k] = r - p;
            ok[i][k] = r >= prob.r_min_mbps * (1.0 - feas_tol) && u.leakage_gain * p <= u.i_th_w * (1.0 + feas_tol);
        }
    }

    OracleReport rep;
    rep.grid_points = grid_points;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(n, 0), best_idx;
    std::vector<double> load(prob.p_max_w.size());
    for (;;) {
        bool feasible = true;
        double obj = 0.0;
        std::fill(load.begin(), load.end(), 0.0);
        for (std::size_t i = 0; i < n && feasible; ++i) {
            feasible = ok[i][idx[i]] != 0;
            obj += val[i][idx[i]];
            load[static_cast<std::size_t>(prob.users[i].bs)] += pw[i][idx[i]];
        }
        for (std::size_t b = 0; b < load.size() && feasible; ++b)
            feasible = load[b] <= prob.p_max_w[b] * (1.0 + feas_tol);
        if (feasible && obj > best) {
            best = obj;
            best_idx = idx;
        }
        std::size_t d = 0;
        while (d < n && ++idx[d] == g) idx[d++] = 0;
        if (d == n) break;
    }

    const double constant = static_cast<double>(n) * prob.circuit_power_w;
    rep.oracle_feasible = !best_idx.empty();
    if (rep.oracle_feasible) {
        rep.best_objective = best - constant;
        for (std::size_t i = 0; i < n; ++i) rep.best_point.push_back(pw[i][best_idx[i]]);
    }

    std::vector<double> sp(solver_p.begin(), solver_p.end());
    rep.solver_objective = tier_objective(prob, sp);
    std::fill(load.begin(), load.end(), 0.0);
    double viol = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prob.users[i];
        load[static_cast<std::size_t>(u.bs)] += sp[i];
        viol = std::max(viol, (prob.r_min_mbps - user_rate(sp[i], u.gamma, B)) / prob.r_min_mbps);
        if (u.leakage_gain > 0.0) viol = std::max(viol, (u.leakage_gain * sp[i] - u.i_th_w) / u.i_th_w);
    }
    for (std::size_t b = 0; b < load.size(); ++b)
        viol = std::max(viol, prob.p_max_w[b] > 0.0 ? (load[b] - prob.p_max_w[b]) / prob.p_max_w[b] : load[b]);
    rep.solver_max_violation = viol;
    rep.solver_feasible = viol <= 1e-6;
    if (rep.oracle_feasible) rep.relative_gap = gap(rep.best_objective, rep.solver_objective);
    return rep;
}

OracleReport brute_force_time(std::span<const double> gamma, std::span<const double> beta, const HoverParams& params,
                              std::span<const double> solver_T, int grid_points)
{
    const std::size_t n = gamma.size();
    if (n == 0 || n > 2) throw std::invalid_argument("brute_force_time: needs 1 or 2 users");
    if (grid_points < 2) throw std::invalid_argument("brute_force_time: grid_points must be >= 2");
    const double B = params.b_sub_mhz;
    const double remaining = params.budget_s - static_cast<double>(n) * params.control_time_s;
    const auto g = static_cast<std::size_t>(grid_points);

    OracleReport rep;
    rep.grid_points = grid_points;
    std::vector<std::vector<double>> tt(n, std::vector<double>(g)), val(n, std::vector<double>(g));
    for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
        const double hi = std::min(remaining, beta[i] / params.t_min_mbps);
        const double lo = hi * 1e-3;
        for (std::size_t k = 0; k < g; ++k) {
            const double t = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(g - 1));
            tt[i][k] = t;
            const double x = beta[i] / (B * t);
            val[i][k] = x > 1024.0 ? -std::numeric_limits<double>::infinity()
                                   : beta[i] / t - required_power_for_time(t, beta[i], gamma[i], B);
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_idx;
    if (remaining > 0.0) {
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            double obj = 0.0;
            double sum_t = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                obj += val[i][idx[i]];
                sum_t += tt[i][idx[i]];
            }
            if (sum_t <= remaining * (1.0 + feas_tol) && obj > best) {
                best = obj;
                best_idx = idx;
            }
            std::size_t d = 0;
            while (d < n && ++idx[d] == g) idx[d++] = 0;
            if (d == n) break;
        }
    }
    rep.oracle_feasible = !best_idx.empty();
    if (rep.oracle_feasible) {
        rep.best_objective = best;
        for (std::size_t i = 0; i < n; ++i) rep.best_point.push_back(tt[i][best_idx[i]]);
    }

    rep.solver_objective = hover_objective(solver_T, beta, gamma, B);
    double viol = 0.0;
    double sum_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_t += solver_T[i];
        viol = std::max(viol, (params.t_min_mbps - beta[i] / solver_T[i]) / params.t_min_mbps);
    }
    viol = std::max(viol, remaining > 0.0 ? (sum_t - remaining) / remaining : 1.0);
    rep.solver_max_violation = viol;
    rep.solver_feasible = viol <= 1e-6;
    if (rep.oracle_feasible) rep.relative_gap = gap(rep.best_objective, rep.solver_objective);
    return rep;
}

double KktReport::max() const { return std::max({stationarity, primal, dual, complementary}); }

nlohmann::json to_json(const KktReport& r)
{
    return {{"stationarity", r.stationarity},
            {"primal", r.primal},
            {"dual", r.dual},
            {"complementary", r.complementary}};
}

KktReport kkt_residuals(const TierProblem& prob, std::span<const double> p, std::span<const double> mu,
                        std::span<const double> lambda, std::span<const double> phi,
                        const std::vector<bool>& rate_relaxed)
{
    const double B = prob.b_sub_mhz;
    const double A = B / units::ln2;
    KktReport rep;
    std::vector<double> load(prob.p_max_w.size(), 0.0);
    for (std::size_t i = 0; i < prob.users.size(); ++i) {
        const auto& u = prob.users[i];
        const auto b = static_cast<std::size_t>(u.bs);
        const bool relaxed = !rate_relaxed.empty() && rate_relaxed[i];
        load[b] += p[i];

        const double denom = 1.0 + lambda[b] + phi[i] * u.leakage_gain;
        const double grad = (1.0 + mu[i]) * A * u.gamma / (1.0 + u.gamma * p[i]) - denom;
        const double st = p[i] > 0.0 ? std::abs(grad) : std::max(grad, 0.0);
        rep.stationarity = std::max(rep.stationarity, st / denom);

        const double r = user_rate(p[i], u.gamma, B);
        if (!relaxed) {
            rep.primal = std::max(rep.primal, (prob.r_min_mbps - r) / prob.r_min_mbps);
            rep.complementary = std::max(rep.complementary, std::abs(mu[i] * (r - prob.r_min_mbps)) / prob.r_min_mbps);
        }
        if (u.leakage_gain > 0.0) {
            const double slack = (u.i_th_w - u.leakage_gain * p[i]) / u.i_th_w;
            rep.primal = std::max(rep.primal, -slack);
            rep.complementary = std::max(rep.complementary, std::abs(phi[i] * u.leakage_gain * slack));
        }
        rep.dual = std::max({rep.dual, -mu[i], -phi[i]});
    }
    for (std::size_t b = 0; b < load.size(); ++b) {
        const double pmax = prob.p_max_w[b];
        const double slack = pmax > 0.0 ? (pmax - load[b]) / pmax : -load[b];
        rep.primal = std::max(rep.primal, -slack);
        rep.complementary = std::max(rep.complementary, std::abs(lambda[b] * slack));
        rep.dual = std::max(rep.dual, -lambda[b]);
    }
    rep.primal = std::max(rep.primal, 0.0);
    return rep;
}

KktReport kkt_residuals(const TierProblem& prob, const TierPowerSolution& sol)
{
    return kkt_residuals(prob, sol.p, sol.mu, sol.lambda, sol.phi, sol.rate_relaxed);
}

KktReport kkt_residuals(const HoverSolution& sol, std::span<const double> beta, const HoverParams& params)
{
    const double B = params.b_sub_mhz;
    const std::size_t n = sol.T.size();
    const double remaining = params.budget_s - sol.control_time_s;
    KktReport rep;
    double sum_t = 0.0;
    double sum_rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sol.T[i];
        const double mu = sol.mu.empty() ? 0.0 : sol.mu[i];
        sum_t += t;
        sum_rate += beta[i] / t;
        rep.stationarity = std::max(
            rep.stationarity,
            std::abs(normalized_stationarity_residual(t, mu, sol.lambda, beta[i], sol.gamma[i], B)));
        const double slack = (beta[i] / t - params.t_min_mbps) / params.t_min_mbps;
        rep.primal = std::max(rep.primal, -slack);
        rep.complementary = std::max(rep.complementary, std::abs(mu * slack));
        rep.dual = std::max(rep.dual, -mu);
    }
    if (n > 0) {
        const double slack = remaining - sum_t;
        rep.primal = std::max(rep.primal, remaining > 0.0 ? -slack / remaining : 1.0);
        rep.complementary = std::max(rep.complementary, std::abs(sol.lambda * slack) / sum_rate);
        rep.dual = std::max(rep.dual, -sol.lambda);
    }
    rep.primal = std::max(rep.primal, 0.0);
    return rep;
}

}  // namespace hetnet
