#include "hetnet/metrics.hpp"

#include <cmath>
#include <numeric>

#include "hetnet/errors.hpp"

namespace hetnet {

double user_rate(double p, double gamma, double b_sub)
{
    return b_sub * std::log2(1.0 + gamma * p);
}

double total_power(std::span<const double> p, int n_users, double p_c)
{
    return std::accumulate(p.begin(), p.end(), 0.0) + n_users * p_c;
}

double energy_efficiency(double sum_rate, double total_power_w)
{
    if (sum_rate == 0.0) return 0.0;
    if (!(total_power_w > 0.0)) throw DomainError("energy_efficiency: total power must be > 0");
    return sum_rate / total_power_w;
}

std::optional<double> average_hover_time(std::span<const double> tau)
{
    if (tau.empty()) return std::nullopt;
    return std::accumulate(tau.begin(), tau.end(), 0.0) / static_cast<double>(tau.size());
}

TrialMetrics compute_metrics(const Scenario& s, const Association& a, std::span<const double> p,
                             std::span<const double> gamma, std::span<const double> tau)
{
    const auto& radio = s.config.radio;
    const double b = radio.subcarrier_bandwidth_hz();
    TrialMetrics m;
    double sum_p = 0.0;
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const double r = user_rate(p[u], gamma[u], b);
        auto& t = m.tiers[index(a.users[u].tier)];
        ++t.users;
        t.sum_rate_bps += r;
        t.power_w += p[u];
        m.sum_rate_bps += r;
        sum_p += p[u];
        if (r < radio.r_min_bps * (1.0 - 1e-9)) ++m.outage_count;
    }
    m.total_power_w = sum_p + s.n_users() * radio.circuit_power_w;
    m.ee_bits_per_joule = energy_efficiency(m.sum_rate_bps, m.total_power_w);
    m.avg_hover_s = average_hover_time(tau);
    return m;
}

}  // namespace hetnet
