#include "hetnet/association.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <tuple>

#include "hetnet/errors.hpp"

namespace hetnet {

bool Association::has_subcarriers() const
{
    return std::all_of(users.begin(), users.end(), [](const Attachment& a) { return a.subcarrier >= 0; });
}

std::vector<double> mean_received_power(const Scenario& s, const ChannelState& ch)
{
    const int m = s.n_base_stations();
    std::vector<double> rx(static_cast<std::size_t>(s.n_users()) * static_cast<std::size_t>(m));
    for (const auto& u : s.users)
        for (const auto& b : s.base_stations)
            rx[static_cast<std::size_t>(u.id * m + b.id)] = b.p_max_w / ch.mean_path_loss(u.id, b.id);
    return rx;
}

Association associate_users(const Scenario& s, std::span<const double> mean_rx_w)
{
    const int n = s.n_users();
    const int m = s.n_base_stations();
    const int cap = s.config.radio.n_subcarriers;

    std::array<int, 3> tier_bs{};
    for (const auto& b : s.base_stations) ++tier_bs[index(b.tier)];
    long capacity = 0;
    for (int t : tier_bs)
        if (t > 0) capacity += cap;
    if (n > capacity)
        throw CapacityError("capacity exceeded: " + std::to_string(n) + " users but only " + std::to_string(capacity) +
                            " exclusive subcarrier slots");

    struct Candidate {
        double rx;
        int bs;
        int user;
    };
    std::vector<Candidate> cand;
    cand.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    for (int u = 0; u < n; ++u)
        for (int b = 0; b < m; ++b) cand.push_back({mean_rx_w[static_cast<std::size_t>(u * m + b)], b, u});
    std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
        if (x.rx != y.rx) return x.rx > y.rx;
        return std::tie(x.bs, x.user) < std::tie(y.bs, y.user);
    });

    Association a;
    a.n_subcarriers = cap;
    a.users.assign(static_cast<std::size_t>(n), Attachment{});
    a.bs_users.assign(static_cast<std::size_t>(m), {});
    std::array<int, 3> tier_load{};
    int placed = 0;
    for (const auto& c : cand) {
        if (placed == n) break;
        auto& att = a.users[static_cast<std::size_t>(c.user)];
        if (att.bs >= 0) continue;
        const Tier t = s.base_stations[static_cast<std::size_t>(c.bs)].tier;
        if (a.n_users_on(c.bs) >= cap || tier_load[index(t)] >= cap) continue;
        att.bs = c.bs;
        att.tier = t;
        a.bs_users[static_cast<std::size_t>(c.bs)].push_back(c.user);
        ++tier_load[index(t)];
        ++placed;
    }
    if (placed != n) throw CapacityError("capacity exceeded: could not place every user");

    for (auto& list : a.bs_users) std::sort(list.begin(), list.end());
    for (int u = 0; u < n; ++u) a.tier_users[index(a.users[static_cast<std::size_t>(u)].tier)].push_back(u);
    for (auto& occ : a.occupant) occ.assign(static_cast<std::size_t>(cap), -1);
    return a;
}

std::vector<double> baseline_powers(const Scenario& s, const Association& a)
{
    std::vector<double> p(a.users.size(), 0.0);
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const int bs = a.users[u].bs;
        if (bs < 0) continue;
        p[u] = s.base_stations[static_cast<std::size_t>(bs)].p_max_w / a.n_users_on(bs);
    }
    return p;
}

Association assign_subcarriers(const Association& in, const Scenario& s, const ChannelState& ch,
                               std::span<const double> reference_powers)
{
    (void)s;
    Association a = in;
    const int L = a.n_subcarriers;
    for (auto& occ : a.occupant) occ.assign(static_cast<std::size_t>(L), -1);
    for (auto& att : a.users) att.subcarrier = -1;

    std::vector<double> estimate(static_cast<std::size_t>(L));
    for (Tier t : all_tiers) {
        auto& own = a.occupant[index(t)];
        for (int u : a.tier_users[index(t)]) {
            int best = -1;
            double best_i = std::numeric_limits<double>::infinity();
            for (int sc = 0; sc < L; ++sc) {
                if (own[static_cast<std::size_t>(sc)] >= 0) continue;
                double i = 0.0;
                for (Tier other : all_tiers) {
                    if (other == t) continue;
                    const int v = a.occupant_of(other, sc);
                    if (v < 0) continue;
                    const int bs = a.users[static_cast<std::size_t>(v)].bs;
                    i += reference_powers[static_cast<std::size_t>(v)] * ch.rho(u, bs, sc);
                }
                estimate[static_cast<std::size_t>(sc)] = i;
                if (i < best_i) {
                    best_i = i;
                    best = sc;
                }
            }
            // Association already enforces the per-tier cap, so a free slot exists.
            assert(best >= 0);
#ifndef NDEBUG
            for (int sc = 0; sc < L; ++sc)
                if (own[static_cast<std::size_t>(sc)] < 0) assert(best_i <= estimate[static_cast<std::size_t>(sc)]);
#endif
            own[static_cast<std::size_t>(best)] = u;
            a.users[static_cast<std::size_t>(u)].subcarrier = best;
        }
    }
    return a;
}

double cross_tier_interference(const Association& a, const ChannelState& ch, int user, int sc,
                               std::span<const double> powers)
{
    const Tier own = a.users[static_cast<std::size_t>(user)].tier;
    double total = 0.0;
    for (Tier t : all_tiers) {
        if (t == own) continue;
        const int v = a.occupant_of(t, sc);
        if (v < 0) continue;
        const int bs = a.users[static_cast<std::size_t>(v)].bs;
        total += powers[static_cast<std::size_t>(v)] * ch.rho(user, bs, sc);
    }
    return total;
}

double leakage_gain(const Association& a, const ChannelState& ch, int user)
{
    const auto& att = a.users[static_cast<std::size_t>(user)];
    double g = 0.0;
    for (Tier t : all_tiers) {
        if (t == att.tier) continue;
        const int v = a.occupant_of(t, att.subcarrier);
        if (v >= 0) g += ch.rho(v, att.bs, att.subcarrier);
    }
    return g;
}

double sinr_coefficient(double rho_own, double interference_w, double noise_w)
{
    if (!(noise_w > 0.0)) throw DomainError("sinr_coefficient: noise power must be > 0");
    return rho_own / (interference_w + noise_w);
}

std::vector<double> user_gammas(const Association& a, const ChannelState& ch, std::span<const double> powers)
{
    std::vector<double> g(a.users.size());
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const auto& att = a.users[u];
        const int id = static_cast<int>(u);
        const double i = cross_tier_interference(a, ch, id, att.subcarrier, powers);
        g[u] = sinr_coefficient(ch.rho(id, att.bs, att.subcarrier), i, ch.noise_w());
    }
    return g;
}

std::vector<std::string> check_association(const Association& a, int n_base_stations)
{
    std::vector<std::string> out;
    const int L = a.n_subcarriers;
    std::vector<int> per_bs(static_cast<std::size_t>(n_base_stations), 0);
    std::array<std::vector<int>, 3> seen;
    for (auto& v : seen) v.assign(static_cast<std::size_t>(L), 0);
    for (std::size_t u = 0; u < a.users.size(); ++u) {
        const auto& att = a.users[u];
        const std::string tag = "user " + std::to_string(u);
        if (att.bs < 0 || att.bs >= n_base_stations) {
            out.push_back(tag + ": no base station");
            continue;
        }
        ++per_bs[static_cast<std::size_t>(att.bs)];
        if (att.subcarrier < 0 || att.subcarrier >= L) {
            out.push_back(tag + ": no subcarrier");
            continue;
        }
        if (++seen[index(att.tier)][static_cast<std::size_t>(att.subcarrier)] > 1)
            out.push_back(tag + ": subcarrier " + std::to_string(att.subcarrier) + " reused within tier " +
                          tier_code(att.tier));
        if (a.occupant_of(att.tier, att.subcarrier) != static_cast<int>(u))
            out.push_back(tag + ": occupancy table out of sync");
    }
    for (int b = 0; b < n_base_stations; ++b)
        if (per_bs[static_cast<std::size_t>(b)] > L) out.push_back("bs " + std::to_string(b) + ": more than L users");
    return out;
}

}  // namespace hetnet
