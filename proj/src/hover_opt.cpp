#include "hetnet/hover_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hetnet/errors.hpp"
#include "hetnet/metrics.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double project(double x) { return x > 0.0 ? x : 0.0; }

void check_time(double T)
{
    if (!(T > 0.0)) throw DomainError("transmission time must be > 0");
}

bool root_exists(double mu, double lambda, double gamma, double b_sub)
{
    return lambda > 0.0 || (1.0 + mu) * b_sub * gamma > units::ln2;
}

// T with T = beta / (b_sub log2(...)) at mu = lambda = 0 when defined, else beta / b_sub.
double reference_time(double beta, double gamma, double b_sub)
{
    if (b_sub * gamma > 2.0 * units::ln2) return closed_form_transmission_time(beta, gamma, b_sub);
    return beta / b_sub;
}

}  // namespace

double required_power_for_time(double T, double beta, double gamma, double b_sub)
{
    check_time(T);
    if (!(gamma > 0.0)) throw DomainError("required_power_for_time: gamma must be > 0");
    const double x = beta / (b_sub * T);
    if (x > 1024.0) throw DomainError("required_power_for_time: exponent beta/(B T) exceeds 1024");
    return std::expm1(x * units::ln2) / gamma;
}

double stationarity_residual(double T, double mu, double lambda, double beta, double gamma, double b_sub)
{
    check_time(T);
    const double x = beta / (b_sub * T);
    return beta / (T * T) * (units::ln2 * std::exp2(x) / (b_sub * gamma) - (1.0 + mu)) - lambda;
}

double normalized_stationarity_residual(double T, double mu, double lambda, double beta, double gamma,
                                        double b_sub)
{
    const double scale = (1.0 + mu) * beta / (T * T) + lambda;
    return stationarity_residual(T, mu, lambda, beta, gamma, b_sub) / scale;
}

double closed_form_transmission_time(double beta, double gamma, double b_sub)
{
    if (!(b_sub * gamma > units::ln2)) throw DomainError("closed_form_transmission_time: needs b_sub gamma > ln2");
    return beta / (b_sub * std::log2(b_sub * gamma / units::ln2));
}

double solve_transmission_time(double mu, double lambda, double beta, double gamma, double b_sub)
{
    if (!(gamma > 0.0) || !(beta > 0.0)) throw DomainError("solve_transmission_time: beta and gamma must be > 0");
    if (!root_exists(mu, lambda, gamma, b_sub))
        throw NoRootError("solve_transmission_time: residual has no sign change ((1+mu) B gamma <= ln2, lambda = 0)");

    auto f = [&](double T) { return stationarity_residual(T, mu, lambda, beta, gamma, b_sub); };
    const double ref = reference_time(beta, gamma, b_sub);
    double lo = 0.01 * ref;
    for (int k = 0; f(lo) <= 0.0; ++k) {
        if (k == 1100) throw NoRootError("solve_transmission_time: no positive residual near T = 0");
        lo *= 0.5;
    }
    double hi = ref;
    while (f(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 0x1p60) throw NoRootError("solve_transmission_time: bracket exceeded 2^60 s");
    }
    lo = std::min(lo, hi);
    for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

double hover_time(std::span<const double> T, int n_users, double t_c)
{
    return std::accumulate(T.begin(), T.end(), 0.0) + n_users * t_c;
}

double hover_objective(std::span<const double> T, std::span<const double> beta, std::span<const double> gamma,
                       double b_sub)
{
    double obj = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i)
        obj += beta[i] / T[i] - required_power_for_time(T[i], beta[i], gamma[i], b_sub);
    return obj;
}

HoverMultipliers update_hover_multipliers(const HoverMultipliers& state, std::span<const double> T,
                                          std::span<const double> beta, double budget_s, double control_total_s,
                                          double t_min)
{
    const double lim = state.slack_limit;
    HoverMultipliers next = state;
    double sum_t = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        next.mu[i] = project(state.mu[i] - state.c1 * std::clamp(beta[i] / T[i] - t_min, -lim, lim));
        sum_t += T[i];
    }
    next.lambda = project(state.lambda - state.c2 * std::clamp((budget_s - control_total_s) - sum_t, -lim, lim));
    ++next.iteration;
    return next;
}

HoverSolution solve_hover(std::span<const double> gamma, std::span<const double> beta, const HoverParams& params,
                          const HoverOptions& opts)
{
    const std::size_t n = gamma.size();
    const double B = params.b_sub_mhz;
    HoverSolution sol;
    sol.gamma.assign(gamma.begin(), gamma.end());
    sol.control_time_s = static_cast<double>(n) * params.control_time_s;
    if (n == 0) {
        sol.converged = true;
        return sol;
    }
    const double remaining = params.budget_s - sol.control_time_s;

    // T for user i at (mu, lambda); a missing root means transmitting longer
    // always pays, so the time is unbounded.
    auto time_at = [&](std::size_t i, double mu, double lambda) {
        if (!root_exists(mu, lambda, gamma[i], B)) return inf;
        return solve_transmission_time(mu, lambda, beta[i], gamma[i], B);
    };
    auto t_cap = [&](std::size_t i) { return beta[i] / params.t_min_mbps; };

    if (!(remaining > 0.0)) {
        sol.feasible = false;
        sol.warnings.push_back("control signalling alone exhausts the hover budget (" +
                               std::to_string(sol.control_time_s) + " s of " + std::to_string(params.budget_s) +
                               " s)");
        sol.mu.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) sol.T.push_back(std::min(time_at(i, 0.0, 0.0), t_cap(i)));
    } else {
        HoverMultipliers st;
        st.mu.assign(n, opts.initial_multiplier);
        st.lambda = opts.initial_multiplier;
        st.c1 = opts.c1;
        st.c2 = opts.c2;
        st.slack_limit = opts.slack_limit;
        std::vector<double> T(n);
        while (st.iteration < opts.max_iterations) {
            for (std::size_t i = 0; i < n; ++i) T[i] = std::min(time_at(i, st.mu[i], st.lambda), remaining);
            HoverMultipliers next =
                update_hover_multipliers(st, T, beta, params.budget_s, sol.control_time_s, params.t_min_mbps);
            double delta = std::abs(next.lambda - st.lambda) / st.c2;
            for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next.mu[i] - st.mu[i]) / st.c1);
            st = std::move(next);
            if (delta < opts.tolerance) {
                sol.converged = true;
                break;
            }
        }
        sol.iterations = st.iteration;
        for (std::size_t i = 0; i < n; ++i) T[i] = std::min(time_at(i, st.mu[i], st.lambda), remaining);

        // Recovery: lambda by bisection on the budget, then mu in closed form
        // for users pinned at the rate floor.
        auto times = [&](double lambda) {
            std::vector<double> t(n);
            for (std::size_t i = 0; i < n; ++i) t[i] = std::min(time_at(i, 0.0, lambda), t_cap(i));
            return t;
        };
        auto total = [](const std::vector<double>& t) { return std::accumulate(t.begin(), t.end(), 0.0); };
        double lambda = 0.0;
        if (total(times(0.0)) > remaining) {
            double lo = 0.0;
            double hi = std::max(st.lambda, 1e-12);
            while (total(times(hi)) > remaining) {
                lo = hi;
                hi *= 2.0;
            }
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (total(times(mid)) > remaining ? lo : hi) = mid;
            }
            lambda = hi;
        }
        sol.lambda = lambda;
        sol.T = times(lambda);
        sol.mu.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (time_at(i, 0.0, lambda) <= t_cap(i)) continue;
            const double t = sol.T[i];
            const double x = beta[i] / (B * t);
            sol.mu[i] = project(units::ln2 * std::exp2(x) / (B * gamma[i]) - 1.0 - lambda * t * t / beta[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            sol.recovery_shift = std::max(sol.recovery_shift, std::abs(sol.T[i] - T[i]) / sol.T[i]);
        if (!sol.converged)
            sol.warnings.push_back("hover subgradient stopped at i_max = " + std::to_string(opts.max_iterations));
    }

    for (std::size_t i = 0; i < n; ++i) sol.p.push_back(required_power_for_time(sol.T[i], beta[i], gamma[i], B));
    sol.tau_s = hover_time(sol.T, static_cast<int>(n), params.control_time_s);
    return sol;
}

HoverSolution equal_time_baseline(std::span<const double> gamma, std::span<const double> beta, double p_max_w,
                                  const HoverParams& params)
{
    const std::size_t n = gamma.size();
    HoverSolution sol;
    sol.baseline = true;
    sol.converged = true;
    sol.gamma.assign(gamma.begin(), gamma.end());
    sol.mu.assign(n, 0.0);
    sol.control_time_s = static_cast<double>(n) * params.control_time_s;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = p_max_w / static_cast<double>(n);
        const double r = user_rate(p, gamma[i], params.b_sub_mhz);
        sol.p.push_back(p);
        sol.T.push_back(r > 0.0 ? beta[i] / r : inf);
    }
    sol.tau_s = hover_time(sol.T, static_cast<int>(n), params.control_time_s);
    sol.feasible = sol.tau_s <= params.budget_s;
    return sol;
}

}  // namespace hetnet
