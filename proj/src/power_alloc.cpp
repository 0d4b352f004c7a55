#include "hetnet/power_alloc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "hetnet/errors.hpp"
#include "hetnet/metrics.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

namespace {

double project(double x) { return x > 0.0 ? x : 0.0; }

double clip(double s, double limit) { return std::clamp(s, -limit, limit); }

std::vector<double> step(const std::vector<double>& m, const std::vector<double>& s, double c, double limit)
{
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = project(m[i] - c * clip(s[i], limit));
    return out;
}

double max_step_change(const std::vector<double>& a, const std::vector<double>& b, double c)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / c);
    return d;
}

std::string tier_label(Tier t) { return std::string("tier ") + tier_code(t); }

}  // namespace

double kkt_power(double mu, double lambda, double phi, double rho, double gamma, double b_sub)
{
    if (!(gamma > 0.0)) throw DomainError("kkt_power: gamma must be > 0");
    if (mu < 0.0 || lambda < 0.0 || phi < 0.0) throw DomainError("kkt_power: multipliers must be >= 0");
    const double p = (1.0 + mu) * b_sub / ((1.0 + lambda + phi * rho) * units::ln2) - 1.0 / gamma;
    return project(p);
}

MultiplierState update_power_multipliers(const MultiplierState& state, const ConstraintSlacks& slacks)
{
    MultiplierState next = state;
    next.mu = step(state.mu, slacks.rate, state.c1, state.slack_limit);
    next.lambda = step(state.lambda, slacks.power, state.c2, state.slack_limit);
    next.phi = step(state.phi, slacks.interference, state.c3, state.slack_limit);
    ++next.iteration;
    return next;
}

double tier_objective(const TierProblem& prob, const std::vector<double>& p)
{
    double obj = 0.0;
    for (std::size_t i = 0; i < prob.users.size(); ++i)
        obj += user_rate(p[i], prob.users[i].gamma, prob.b_sub_mhz) - p[i];
    return obj - static_cast<double>(prob.users.size()) * prob.circuit_power_w;
}

TierPowerSolution solve_tier_power(const TierProblem& prob, const SubgradientOptions& opts)
{
    const std::size_t n = prob.users.size();
    const std::size_t nb = prob.p_max_w.size();
    const double B = prob.b_sub_mhz;
    const double A = B / units::ln2;
    const double inf = std::numeric_limits<double>::infinity();

    TierPowerSolution sol;
    sol.tier = prob.tier;
    sol.rate_relaxed.assign(n, false);

    // Screening: R_min is dropped for users that cannot reach it under their
    // caps, then for the most expensive users of an overloaded BS.
    std::vector<double> p_min(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prob.users[i];
        if (!(u.gamma > 0.0)) throw DomainError("solve_tier_power: gamma must be > 0");
        p_min[i] = (std::exp2(prob.r_min_mbps / B) - 1.0) / u.gamma;
        hi[i] = u.leakage_gain > 0.0 ? u.i_th_w / u.leakage_gain : inf;
        const double cap = std::min(prob.p_max_w[static_cast<std::size_t>(u.bs)], hi[i]);
        if (p_min[i] > cap * (1.0 - 1e-3)) sol.rate_relaxed[i] = true;
    }
    std::vector<std::vector<std::size_t>> members(nb);
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(prob.users[i].bs)].push_back(i);
    for (std::size_t b = 0; b < nb; ++b) {
        for (;;) {
            double need = 0.0;
            std::optional<std::size_t> worst;
            for (std::size_t i : members[b]) {
                if (sol.rate_relaxed[i]) continue;
                need += p_min[i];
                if (!worst || p_min[i] > p_min[*worst]) worst = i;
            }
            if (!worst || need <= prob.p_max_w[b] * (1.0 - 1e-3)) break;
            sol.rate_relaxed[*worst] = true;
        }
    }

    // Constraint scaling: each slack is expressed so that its sensitivity to
    // its own multiplier is O(1) near the optimum.
    std::vector<double> k_lambda(nb, 1.0), k_phi(n, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        if (members[b].empty()) continue;
        double inv_gamma = 0.0;
        for (std::size_t i : members[b]) inv_gamma += 1.0 / prob.users[i].gamma;
        k_lambda[b] = std::sqrt(static_cast<double>(members[b].size()) * A) / (prob.p_max_w[b] + inv_gamma);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prob.users[i];
        if (u.leakage_gain > 0.0) k_phi[i] = 1.0 / (u.i_th_w + u.leakage_gain / u.gamma);
    }

    MultiplierState st;
    st.c1 = opts.c1;
    st.c2 = opts.c2;
    st.c3 = opts.c3;
    st.slack_limit = opts.slack_limit;
    st.mu.assign(n, opts.initial_multiplier);
    st.lambda.assign(nb, opts.initial_multiplier);
    st.phi.assign(n, opts.initial_multiplier);
    for (std::size_t i = 0; i < n; ++i) {
        if (sol.rate_relaxed[i]) st.mu[i] = 0.0;
        if (prob.users[i].leakage_gain <= 0.0) st.phi[i] = 0.0;
    }

    std::vector<double> p(n);
    auto primal = [&](const MultiplierState& m) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& u = prob.users[i];
            const auto b = static_cast<std::size_t>(u.bs);
            p[i] = kkt_power(m.mu[i], m.lambda[b] * k_lambda[b], m.phi[i], k_phi[i] * u.leakage_gain, u.gamma, B);
        }
    };

    ConstraintSlacks sl;
    sl.rate.assign(n, 0.0);
    sl.power.assign(nb, 0.0);
    sl.interference.assign(n, 0.0);
    std::vector<double> load(nb);
    while (st.iteration < opts.max_iterations) {
        primal(st);
        std::fill(load.begin(), load.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& u = prob.users[i];
            load[static_cast<std::size_t>(u.bs)] += p[i];
            sl.rate[i] = sol.rate_relaxed[i] ? 0.0 : user_rate(p[i], u.gamma, B) - prob.r_min_mbps;
            sl.interference[i] = u.leakage_gain > 0.0 ? k_phi[i] * (u.i_th_w - u.leakage_gain * p[i]) : 0.0;
        }
        for (std::size_t b = 0; b < nb; ++b) sl.power[b] = k_lambda[b] * (prob.p_max_w[b] - load[b]);

        MultiplierState next = update_power_multipliers(st, sl);
        const double delta = std::max({max_step_change(st.mu, next.mu, st.c1),
                                       max_step_change(st.lambda, next.lambda, st.c2),
                                       max_step_change(st.phi, next.phi, st.c3)});
        st = std::move(next);
        if (opts.record_trace && (st.iteration <= 1000 || st.iteration % 1000 == 0)) {
            TraceRow row;
            row.iteration = st.iteration;
            row.max_delta = delta;
            row.objective = tier_objective(prob, p);
            row.power_slack = sl.power.empty() ? 0.0 : *std::min_element(sl.power.begin(), sl.power.end());
            row.rate_slack = sl.rate.empty() ? 0.0 : *std::min_element(sl.rate.begin(), sl.rate.end());
            row.interference_slack =
                sl.interference.empty() ? 0.0 : *std::min_element(sl.interference.begin(), sl.interference.end());
            sol.trace.push_back(row);
        }
        if (delta < opts.tolerance) {
            sol.converged = true;
            break;
        }
    }
    primal(st);
    const std::vector<double> p_iterate = p;
    sol.state = st;
    sol.iterations = st.iteration;

    // Recovery: the constant-step iterate is only within a band of the optimum,
    // so lambda is settled per BS by bisection and mu / phi are set to put each
    // user exactly on its active bound.
    std::vector<double> lo(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!sol.rate_relaxed[i]) lo[i] = p_min[i];
    auto power_at = [&](std::size_t i, double lam) {
        const double pu = project(A / (1.0 + lam) - 1.0 / prob.users[i].gamma);
        return std::clamp(pu, lo[i], hi[i]);
    };
    auto bs_load = [&](std::size_t b, double lam) {
        double total = 0.0;
        for (std::size_t i : members[b]) total += power_at(i, lam);
        return total;
    };

    sol.p.assign(n, 0.0);
    sol.mu.assign(n, 0.0);
    sol.phi.assign(n, 0.0);
    sol.lambda.assign(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        double lam = 0.0;
        if (bs_load(b, 0.0) > prob.p_max_w[b]) {
            double a = 0.0;
            double z = 0.0;
            for (std::size_t i : members[b]) z = std::max(z, A * prob.users[i].gamma);
            for (int it = 0; it < 400 && z - a > 1e-15 * z; ++it) {
                const double mid = 0.5 * (a + z);
                (bs_load(b, mid) > prob.p_max_w[b] ? a : z) = mid;
            }
            lam = z;
        }
        sol.lambda[b] = lam;
        for (std::size_t i : members[b]) {
            const auto& u = prob.users[i];
            const double pu = A / (1.0 + lam) - 1.0 / u.gamma;
            const double pi = power_at(i, lam);
            if (lo[i] > 0.0 && pu < lo[i]) {
                sol.mu[i] = project((lo[i] + 1.0 / u.gamma) * (1.0 + lam) / A - 1.0);
            } else if (pu > hi[i]) {
                sol.phi[i] = project(A / (hi[i] + 1.0 / u.gamma) - (1.0 + lam)) / u.leakage_gain;
            }
            sol.p[i] = pi;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        sol.recovery_shift = std::max(sol.recovery_shift, std::abs(sol.p[i] - p_iterate[i]));

    std::fill(load.begin(), load.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = prob.users[i];
        load[static_cast<std::size_t>(u.bs)] += sol.p[i];
        if (!sol.rate_relaxed[i])
            sol.residuals.rate =
                std::max(sol.residuals.rate, prob.r_min_mbps - user_rate(sol.p[i], u.gamma, B));
        if (u.leakage_gain > 0.0)
            sol.residuals.interference =
                std::max(sol.residuals.interference, (u.leakage_gain * sol.p[i] - u.i_th_w) / u.i_th_w);
    }
    for (std::size_t b = 0; b < nb; ++b) {
        const double over = load[b] - prob.p_max_w[b];
        sol.residuals.power = std::max(sol.residuals.power, prob.p_max_w[b] > 0.0 ? over / prob.p_max_w[b] : over);
    }

    if (!sol.converged)
        sol.warnings.push_back(tier_label(prob.tier) + ": subgradient stopped at i_max = " +
                               std::to_string(opts.max_iterations));
    const auto relaxed = std::count(sol.rate_relaxed.begin(), sol.rate_relaxed.end(), true);
    if (relaxed > 0)
        sol.warnings.push_back(tier_label(prob.tier) + ": R_min unreachable for " + std::to_string(relaxed) +
                               " user(s)");
    return sol;
}

TierProblem build_tier_problem(Tier tier, const Scenario& s, const Association& a, const ChannelState& ch,
                               const std::vector<double>& powers)
{
    const auto& radio = s.config.radio;
    TierProblem prob;
    prob.tier = tier;
    prob.b_sub_mhz = units::to_mega(radio.subcarrier_bandwidth_hz());
    prob.r_min_mbps = units::to_mega(radio.r_min_bps);
    prob.circuit_power_w = radio.circuit_power_w;

    std::vector<int> local(s.base_stations.size(), -1);
    for (const auto& b : s.base_stations) {
        if (b.tier != tier) continue;
        local[static_cast<std::size_t>(b.id)] = static_cast<int>(prob.bs_ids.size());
        prob.bs_ids.push_back(b.id);
        prob.p_max_w.push_back(b.p_max_w);
    }
    for (int u : a.tier_users[index(tier)]) {
        const auto& att = a.users[static_cast<std::size_t>(u)];
        TierUser tu;
        tu.user_id = u;
        tu.bs = local[static_cast<std::size_t>(att.bs)];
        const double i = cross_tier_interference(a, ch, u, att.subcarrier, powers);
        tu.gamma = sinr_coefficient(ch.rho(u, att.bs, att.subcarrier), i, ch.noise_w());
        tu.leakage_gain = leakage_gain(a, ch, u);
        int victims = 0;
        for (Tier t : all_tiers)
            if (t != tier && a.occupant_of(t, att.subcarrier) >= 0) ++victims;
        // Each victim hears every other occupant of the subcarrier, so the
        // threshold is shared among them.
        tu.i_th_w = radio.i_th_w / std::max(victims, 1);
        prob.users.push_back(tu);
    }
    return prob;
}

double network_energy_efficiency(const Scenario& s, const Association& a, const ChannelState& ch,
                                 const std::vector<double>& p)
{
    const auto gamma = user_gammas(a, ch, p);
    const double b = s.config.radio.subcarrier_bandwidth_hz();
    double rate = 0.0;
    for (std::size_t u = 0; u < p.size(); ++u) rate += user_rate(p[u], gamma[u], b);
    return energy_efficiency(rate, total_power(p, s.n_users(), s.config.radio.circuit_power_w));
}

PowerSolution solve_network_power(const Scenario& s, const Association& a, const ChannelState& ch,
                                  const NetworkPowerOptions& opts)
{
    PowerSolution sol;
    sol.p = baseline_powers(s, a);
    std::array<std::optional<TierPowerSolution>, 3> tier_sol;
    std::array<std::vector<double>, 3> solved_gamma;
    double ee_prev = 0.0;

    for (int round = 1; round <= opts.max_rounds; ++round) {
        auto p = sol.p;
        auto next_sol = tier_sol;
        auto next_gamma = solved_gamma;
        bool changed = false;
        for (Tier t : all_tiers) {
            if (a.tier_users[index(t)].empty()) continue;
            const TierProblem prob = build_tier_problem(t, s, a, ch, p);
            std::vector<double> g;
            for (const auto& u : prob.users) g.push_back(u.gamma);
            if (next_sol[index(t)] && g == next_gamma[index(t)]) continue;
            changed = true;
            auto ts = solve_tier_power(prob, opts.tier);
            for (std::size_t i = 0; i < prob.users.size(); ++i)
                p[static_cast<std::size_t>(prob.users[i].user_id)] = ts.p[i];
            next_sol[index(t)] = std::move(ts);
            next_gamma[index(t)] = std::move(g);
        }
        if (!changed) break;
        const double ee = network_energy_efficiency(s, a, ch, p);
        if (round > 1 && ee < ee_prev) {
            sol.warnings.push_back("round " + std::to_string(round) + " lowered EE and was rolled back");
            break;
        }
        sol.p = std::move(p);
        tier_sol = std::move(next_sol);
        solved_gamma = std::move(next_gamma);
        sol.round_ee.push_back(ee);
        sol.rounds = round;
        if (round > 1 && std::abs(ee - ee_prev) <= opts.ee_tolerance * ee_prev) break;
        ee_prev = ee;
    }

    for (auto& ts : tier_sol) {
        if (!ts) continue;
        sol.converged = sol.converged && ts->converged;
        sol.warnings.insert(sol.warnings.end(), ts->warnings.begin(), ts->warnings.end());
        sol.tiers.push_back(std::move(*ts));
    }
    return sol;
}

PowerSolution max_power_baseline(const Scenario& s, const Association& a)
{
    PowerSolution sol;
    sol.p = baseline_powers(s, a);
    sol.baseline = true;
    return sol;
}

}  // namespace hetnet
