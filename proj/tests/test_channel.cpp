#include <doctest.h>

#include <cmath>
#include <random>

#include "hetnet/channel.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;

namespace {

// (4 pi f / c)^2 computed directly.
double fspl_oracle(double f)
{
    const double k = 4.0 * 3.14159265358979323846 * f / 2.998e8;
    return k * k;
}

}  // namespace

TEST_CASE("terrestrial path loss")
{
    CHECK(terrestrial_path_loss(1.0, 2.5, 0.0, 2.4e9) == doctest::Approx(1.011e4).epsilon(1e-3));
    CHECK(terrestrial_path_loss(1.0, 2.5, 0.0, 2.4e9) == doctest::Approx(fspl_oracle(2.4e9)).epsilon(1e-12));
    const double pl100 = terrestrial_path_loss(100.0, 2.5, 0.0, 2.4e9);
    CHECK(pl100 == doctest::Approx(1.011e9).epsilon(1e-3));
    CHECK(10.0 * std::log10(pl100) == doctest::Approx(90.05).epsilon(1e-4));
    CHECK(terrestrial_path_loss(100.0, 2.5, 3.0, 2.4e9) / pl100 == doctest::Approx(std::pow(10.0, 0.3)));
    CHECK(terrestrial_path_loss(100.0, 2.5, 10.0 * std::log10(2.0), 2.4e9) / pl100 == doctest::Approx(2.0));
    CHECK_THROWS_AS(terrestrial_path_loss(0.0, 2.5, 0.0, 2.4e9), DomainError);
}

TEST_CASE("terrestrial path loss scales as 2^alpha")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(1.0, 2000.0), a(2.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double dist = d(rng), alpha = a(rng);
        const double r = terrestrial_path_loss(2.0 * dist, alpha, 0.0, 2.4e9) /
                         terrestrial_path_loss(dist, alpha, 0.0, 2.4e9);
        CHECK(std::abs(r / std::pow(2.0, alpha) - 1.0) < 1e-9);
    }
}

TEST_CASE("elevation angle")
{
    CHECK(elevation_angle_deg(140.0, 140.0) == doctest::Approx(90.0));
    CHECK(elevation_angle_deg(140.0, 140.0 * std::sqrt(2.0)) == doctest::Approx(45.0));
    CHECK(elevation_angle_deg(140.0, 280.0) == doctest::Approx(30.0));
    CHECK_THROWS_AS(elevation_angle_deg(200.0, 140.0), DomainError);
}

TEST_CASE("LoS probability")
{
    const auto du = EnvironmentParams::dense_urban();
    CHECK(los_probability(90.0, du) == doctest::Approx(0.9977).epsilon(1e-4));
    CHECK(los_probability(45.0, du) == doctest::Approx(0.756).epsilon(1e-3));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.0, 90.0), a(1.0, 30.0), b(0.01, 0.5);
    for (int i = 0; i < 1000; ++i) {
        EnvironmentParams e = du;
        e.a = a(rng);
        e.b = b(rng);
        double t1 = th(rng), t2 = th(rng);
        if (t1 > t2) std::swap(t1, t2);
        CHECK(los_probability(t1, e) <= los_probability(t2, e));
        CHECK(los_probability(t1, e) >= 0.0);
        CHECK(los_probability(t2, e) <= 1.0);
    }
}

TEST_CASE("air-to-ground path loss")
{
    const auto du = EnvironmentParams::dense_urban();
    const double pl = a2g_path_loss(140.0, 90.0, du, 2.4e9);
    CHECK(pl == doctest::Approx(3.77e8).epsilon(2e-3));
    CHECK(10.0 * std::log10(pl) == doctest::Approx(85.8).epsilon(1e-3));

    const auto hr = EnvironmentParams::high_rise_urban();
    CHECK(a2g_path_loss(300.0, 30.0, hr, 2.4e9) > a2g_path_loss(300.0, 30.0, du, 2.4e9));
}

TEST_CASE("air-to-ground path loss is continuous in elevation")
{
    for (const auto& env : {EnvironmentParams::dense_urban(), EnvironmentParams::high_rise_urban()})
        for (double t = 0.0; t < 90.0; t += 0.37) {
            const double a = a2g_path_loss(500.0, t, env, 2.4e9);
            const double b = a2g_path_loss(500.0, t + 1e-6, env, 2.4e9);
            CHECK(std::abs(a - b) / a < 1e-4);
        }
}

TEST_CASE("fading draws are unit-mean exponential")
{
    std::mt19937_64 rng(2024);
    const int n = 1'000'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double h = sample_fading(rng);
        s += h;
        s2 += h * h;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.05);

    std::mt19937_64 r1(7), r2(7);
    for (int i = 0; i < 100; ++i) CHECK(sample_fading(r1) == sample_fading(r2));
}

TEST_CASE("channel gain")
{
    CHECK(channel_gain_rho(1.0, 1.011e9) == doctest::Approx(9.89e-10).epsilon(1e-3));
    CHECK(channel_gain_rho(0.0, 5.0) == 0.0);
    CHECK(channel_gain_rho(2.0, 7.0) == 2.0 * channel_gain_rho(1.0, 7.0));
    CHECK_THROWS_AS(channel_gain_rho(1.0, 0.0), DomainError);
}

TEST_CASE("noise power")
{
    const double n = noise_power_w(312500.0, -174.0);
    CHECK(std::abs(n / 1.244e-15 - 1.0) < 1e-3);
    CHECK(noise_power_w(1.0, -174.0) == doctest::Approx(3.98e-21).epsilon(1e-3));
    CHECK(noise_power_w(625000.0, -174.0) == doctest::Approx(2.0 * n).epsilon(1e-14));
}

TEST_CASE("channel state")
{
    const Scenario s = generate_scenario(default_config());
    const ChannelState a = ChannelState::draw(s, 17);
    const ChannelState b = ChannelState::draw(s, 17);
    const ChannelState c = ChannelState::draw(s, 18);
    CHECK(a.n_users() == 100);
    CHECK(a.n_base_stations() == 7);
    CHECK(a.n_subcarriers() == 64);
    CHECK(a.noise_w() == doctest::Approx(1.244e-15).epsilon(1e-3));

    bool differs = false;
    for (int u = 0; u < a.n_users(); ++u)
        for (int j = 0; j < a.n_base_stations(); ++j) {
            CHECK(a.mean_path_loss(u, j) > 0.0);
            for (int l = 0; l < a.n_subcarriers(); l += 9) {
                CHECK(a.fading(u, j, l) == b.fading(u, j, l));
                differs = differs || a.fading(u, j, l) != c.fading(u, j, l);
                const LinkGain g = a.link(u, j, l);
                CHECK(std::abs(g.rho - g.fading_power / g.path_loss_linear) <= 1e-12 * g.rho);
                const bool aerial = s.base_stations[static_cast<std::size_t>(j)].tier == Tier::uav;
                CHECK(g.elevation_deg.has_value() == aerial);
                if (aerial) {
                    CHECK(*g.elevation_deg > 0.0);
                    CHECK(*g.elevation_deg <= 90.0);
                }
            }
        }
    CHECK(differs);
}
