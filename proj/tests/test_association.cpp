#include <doctest.h>

#include <cmath>

#include "hetnet/association.hpp"
#include "hetnet/channel.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

namespace {

ScenarioConfig small_config(int users, int uavs, int scs)
{
    ScenarioConfig c = default_config();
    c.n_users = users;
    c.n_uavs = uavs;
    c.n_scs = scs;
    return c;
}

Association full_association(const Scenario& s, const ChannelState& ch)
{
    const Association a = associate_users(s, mean_received_power(s, ch));
    return assign_subcarriers(a, s, ch, baseline_powers(s, a));
}

}  // namespace

TEST_CASE("a lone MBS serves everyone")
{
    const Scenario s = generate_scenario(small_config(20, 0, 0));
    const ChannelState ch = ChannelState::draw(s, 1);
    const Association a = associate_users(s, mean_received_power(s, ch));
    for (const auto& u : a.users) {
        CHECK(u.bs == 0);
        CHECK(u.tier == Tier::macro);
        CHECK(u.subcarrier == -1);
    }
    CHECK(a.n_users_on(0) == 20);
}

TEST_CASE("a user under a UAV far from the MBS joins the UAV")
{
    ScenarioConfig c = small_config(1, 1, 0);
    c.environment.shadow_sigma_db = 0.0;
    Scenario s = generate_scenario(c);
    s.users[0].x_m = s.users[0].y_m = 0.0;
    s.base_stations[1].x_m = s.base_stations[1].y_m = 0.0;
    const ChannelState ch = ChannelState::draw(s, 3);
    const auto rx = mean_received_power(s, ch);
    // 1 W over the overhead air-to-ground loss vs 45 dBm over a 707 m terrestrial link.
    const double uav = 1.0 / a2g_path_loss(140.0, 90.0, c.environment, 2.4e9);
    const double mbs = std::pow(10.0, 1.5) / terrestrial_path_loss(std::hypot(500.0, 500.0), 2.5, 0.0, 2.4e9);
    CHECK(rx[1] == doctest::Approx(uav).epsilon(1e-9));
    CHECK(rx[0] == doctest::Approx(mbs).epsilon(1e-9));
    REQUIRE(uav > mbs);
    CHECK(associate_users(s, rx).users[0].bs == 1);
}

TEST_CASE("association takes the strongest base station with room")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState ch = ChannelState::draw(s, 9);
    const auto rx = mean_received_power(s, ch);
    const Association a = associate_users(s, rx);
    const int m = s.n_base_stations();
    for (int u = 0; u < s.n_users(); ++u) {
        const int bs = a.users[static_cast<std::size_t>(u)].bs;
        const double own = rx[static_cast<std::size_t>(u * m + bs)];
        for (int j = 0; j < m; ++j) {
            const double other = rx[static_cast<std::size_t>(u * m + j)];
            if (other > own) {
                // A stronger station must be saturated, or its tier must be.
                const Tier t = s.base_stations[static_cast<std::size_t>(j)].tier;
                CHECK((a.n_users_on(j) == 64 || a.tier_users[index(t)].size() == 64));
            }
        }
    }
    CHECK(check_association(assign_subcarriers(a, s, ch, baseline_powers(s, a)), m).empty());
}

TEST_CASE("65 users on a single base station exceed capacity")
{
    const Scenario s = generate_scenario(small_config(65, 0, 0));
    const ChannelState ch = ChannelState::draw(s, 1);
    CHECK_THROWS_AS(associate_users(s, mean_received_power(s, ch)), CapacityError);
}

TEST_CASE("one user per tier gets three distinct subcarriers")
{
    ScenarioConfig c = small_config(3, 1, 1);
    c.environment.shadow_sigma_db = 0.0;
    Scenario s = generate_scenario(c);
    s.base_stations[1].x_m = 100.0, s.base_stations[1].y_m = 100.0;
    s.base_stations[2].x_m = 900.0, s.base_stations[2].y_m = 900.0;
    s.users[0].x_m = 501.0, s.users[0].y_m = 500.0;
    s.users[1].x_m = 100.0, s.users[1].y_m = 101.0;
    s.users[2].x_m = 900.0, s.users[2].y_m = 901.0;
    const ChannelState ch = ChannelState::draw(s, 5);
    const Association a = full_association(s, ch);
    REQUIRE(a.users[0].tier == Tier::macro);
    REQUIRE(a.users[1].tier == Tier::uav);
    REQUIRE(a.users[2].tier == Tier::small_cell);
    CHECK(a.users[0].subcarrier != a.users[1].subcarrier);
    CHECK(a.users[0].subcarrier != a.users[2].subcarrier);
    CHECK(a.users[1].subcarrier != a.users[2].subcarrier);
    const auto p = baseline_powers(s, a);
    for (int u = 0; u < 3; ++u) CHECK(cross_tier_interference(a, ch, u, a.users[u].subcarrier, p) == 0.0);
}

TEST_CASE("single-tier assignment follows user order")
{
    const Scenario s = generate_scenario(small_config(30, 0, 0));
    const ChannelState ch = ChannelState::draw(s, 2);
    const Association a = full_association(s, ch);
    for (int u = 0; u < 30; ++u) CHECK(a.users[static_cast<std::size_t>(u)].subcarrier == u);
}

TEST_CASE("assignment is deterministic and exclusive within a tier")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState ch = ChannelState::draw(s, 4);
    const Association a = full_association(s, ch);
    CHECK(a == full_association(s, ch));
    CHECK(a.has_subcarriers());
    CHECK(check_association(a, s.n_base_stations()).empty());
    for (Tier t : all_tiers) {
        std::vector<int> seen(64, 0);
        for (int u : a.tier_users[index(t)]) ++seen[static_cast<std::size_t>(a.users[static_cast<std::size_t>(u)].subcarrier)];
        for (int k : seen) CHECK(k <= 1);
    }
}

TEST_CASE("interference sums other-tier occupants of the subcarrier")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState ch = ChannelState::draw(s, 6);
    const Association a = full_association(s, ch);
    const auto p = baseline_powers(s, a);
    for (int u = 0; u < s.n_users(); ++u) {
        const auto& me = a.users[static_cast<std::size_t>(u)];
        double expect = 0.0;
        int others = 0;
        for (int v = 0; v < s.n_users(); ++v) {
            const auto& o = a.users[static_cast<std::size_t>(v)];
            if (o.tier == me.tier || o.subcarrier != me.subcarrier) continue;
            ++others;
            expect += p[static_cast<std::size_t>(v)] * ch.rho(u, o.bs, me.subcarrier);
        }
        const double got = cross_tier_interference(a, ch, u, me.subcarrier, p);
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        CHECK((others == 0) == (got == 0.0));
    }
}

TEST_CASE("leakage gain is the interference caused per watt")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState ch = ChannelState::draw(s, 8);
    const Association a = full_association(s, ch);
    std::vector<double> p(static_cast<std::size_t>(s.n_users()), 0.0);
    for (int u = 0; u < s.n_users(); ++u) {
        const int sc = a.users[static_cast<std::size_t>(u)].subcarrier;
        p.assign(p.size(), 0.0);
        p[static_cast<std::size_t>(u)] = 1.0;
        double caused = 0.0;
        for (int v = 0; v < s.n_users(); ++v)
            if (v != u && a.users[static_cast<std::size_t>(v)].subcarrier == sc)
                caused += cross_tier_interference(a, ch, v, sc, p);
        CHECK(leakage_gain(a, ch, u) == doctest::Approx(caused).epsilon(1e-12));
    }
}

TEST_CASE("sinr coefficient")
{
    CHECK(sinr_coefficient(1e-9, 0.0, 1.244e-15) == doctest::Approx(8.04e5).epsilon(1e-3));
    CHECK(sinr_coefficient(1e-9, 9.0 * 1.244e-15, 1.244e-15) ==
          doctest::Approx(0.1 * sinr_coefficient(1e-9, 0.0, 1.244e-15)));
    CHECK(sinr_coefficient(0.0, 1e-14, 1e-15) == 0.0);
    CHECK_THROWS_AS(sinr_coefficient(1e-9, 0.0, 0.0), DomainError);
}

TEST_CASE("baseline powers split the maximum evenly")
{
    ScenarioConfig c = small_config(10, 0, 0);
    const Scenario s = generate_scenario(c);
    const ChannelState ch = ChannelState::draw(s, 1);
    const Association a = associate_users(s, mean_received_power(s, ch));
    for (double p : baseline_powers(s, a)) CHECK(p == doctest::Approx(3.16228).epsilon(1e-5));

    ScenarioConfig c1 = small_config(1, 1, 0);
    c1.environment.shadow_sigma_db = 0.0;
    Scenario s1 = generate_scenario(c1);
    s1.users[0].x_m = s1.users[0].y_m = 0.0;
    s1.base_stations[1].x_m = s1.base_stations[1].y_m = 0.0;
    const ChannelState ch1 = ChannelState::draw(s1, 1);
    const Association a1 = associate_users(s1, mean_received_power(s1, ch1));
    CHECK(baseline_powers(s1, a1)[0] == doctest::Approx(1.0));

    const Scenario full = generate_scenario(default_config());
    const ChannelState chf = ChannelState::draw(full, 2);
    const Association af = associate_users(full, mean_received_power(full, chf));
    const auto p = baseline_powers(full, af);
    for (int j = 0; j < full.n_base_stations(); ++j) {
        double sum = 0.0;
        for (int u : af.bs_users[static_cast<std::size_t>(j)]) sum += p[static_cast<std::size_t>(u)];
        if (af.n_users_on(j) > 0) CHECK(sum == doctest::Approx(full.base_stations[static_cast<std::size_t>(j)].p_max_w));
    }
}

TEST_CASE("user gammas follow the serving link and interference")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState ch = ChannelState::draw(s, 12);
    const Association a = full_association(s, ch);
    const auto p = baseline_powers(s, a);
    const auto g = user_gammas(a, ch, p);
    for (int u = 0; u < s.n_users(); ++u) {
        const auto& me = a.users[static_cast<std::size_t>(u)];
        const double want = ch.rho(u, me.bs, me.subcarrier) /
                            (cross_tier_interference(a, ch, u, me.subcarrier, p) + ch.noise_w());
        CHECK(g[static_cast<std::size_t>(u)] == doctest::Approx(want).epsilon(1e-12));
    }
}
