#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hetnet/errors.hpp"
#include "hetnet/hover_opt.hpp"
#include "hetnet/oracle.hpp"

using namespace hetnet;

namespace {

constexpr double ln2 = 0.69314718055994530942;

// beta / (B log2(B gamma / ln2)), written out independently of the library.
double root_oracle(double beta, double gamma, double b)
{
    return beta / (b * std::log2(b * gamma / ln2));
}

}  // namespace

TEST_CASE("required power")
{
    CHECK(required_power_for_time(2.0, 0.625, 4.0, 0.3125) == doctest::Approx(0.25));
    CHECK(required_power_for_time(1e9, 10.0, 100.0, 0.3125) < 1e-9);
    const double t = root_oracle(1e7, 1e-3, 312500.0);
    const double p = required_power_for_time(t, 1e7, 1e-3, 312500.0);
    CHECK(p == doctest::Approx((312500.0 * 1e-3 / ln2 - 1.0) / 1e-3).epsilon(1e-9));
    CHECK(p == doctest::Approx(4.4985e5).epsilon(1e-3));
    CHECK_THROWS_AS(required_power_for_time(0.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(required_power_for_time(1.0, 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("stationarity residual")
{
    const double t = root_oracle(1e7, 1e-3, 312500.0);
    CHECK(t == doctest::Approx(3.63).epsilon(1e-3));
    CHECK(std::abs(normalized_stationarity_residual(t, 0, 0, 1e7, 1e-3, 312500.0)) < 1e-9);
    CHECK(stationarity_residual(0.2 * t, 0, 0, 1e7, 1e-3, 312500.0) > 0.0);
    CHECK(stationarity_residual(5.0 * t, 0, 0, 1e7, 1e-3, 312500.0) < 0.0);
    CHECK(stationarity_residual(1e-2 * t, 0, 0, 1e7, 1e-3, 312500.0) >
          stationarity_residual(1e-1 * t, 0, 0, 1e7, 1e-3, 312500.0));
}

TEST_CASE("closed-form transmission time")
{
    CHECK(closed_form_transmission_time(1e7, 1e-3, 312500.0) == doctest::Approx(3.6295).epsilon(1e-4));
    CHECK(closed_form_transmission_time(10.0, 1000.0, 0.3125) == doctest::Approx(3.6295).epsilon(1e-4));
    CHECK_THROWS_AS(closed_form_transmission_time(10.0, 1.0, 0.3125), DomainError);
}

TEST_CASE("root solver matches the closed form to six digits")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> g(3.0, 1e5), beta(1.0, 40.0);
    for (int i = 0; i < 500; ++i) {
        const double gm = g(rng), b = beta(rng);
        const double want = root_oracle(b, gm, 0.3125);
        const double got = solve_transmission_time(0, 0, b, gm, 0.3125);
        CHECK(std::abs(got / want - 1.0) < 5e-7);
        CHECK(std::abs(normalized_stationarity_residual(got, 0, 0, b, gm, 0.3125)) < 1e-6);
    }
    const double si = solve_transmission_time(0, 0, 1e7, 1e-3, 312500.0);
    CHECK(std::abs(si / root_oracle(1e7, 1e-3, 312500.0) - 1.0) < 5e-7);
}

TEST_CASE("budget pressure and better channels shorten transmissions")
{
    const double t0 = solve_transmission_time(0, 0, 10.0, 200.0, 0.3125);
    CHECK(solve_transmission_time(0, 0.5, 10.0, 200.0, 0.3125) < t0);
    CHECK(solve_transmission_time(0, 0, 10.0, 400.0, 0.3125) < t0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> g(3.0, 1e4), m(0.0, 3.0), l(0.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        double g1 = g(rng), g2 = g(rng);
        if (g1 > g2) std::swap(g1, g2);
        const double mu = m(rng), la = l(rng);
        CHECK(solve_transmission_time(mu, la, 10.0, g2, 0.3125) <= solve_transmission_time(mu, la, 10.0, g1, 0.3125));
    }
}

TEST_CASE("no interior root without budget pressure on a weak channel")
{
    CHECK_THROWS_AS(solve_transmission_time(0, 0, 10.0, 1.0, 0.3125), NoRootError);
    CHECK_NOTHROW(solve_transmission_time(0, 0.1, 10.0, 1.0, 0.3125));
    CHECK_NOTHROW(solve_transmission_time(2.0, 0, 10.0, 1.5, 0.3125));
}

TEST_CASE("hover multiplier update")
{
    HoverMultipliers st;
    st.mu = {0.2};
    st.lambda = 0.3;
    const std::vector<double> beta{10.0};

    // Sum T equal to the remaining budget leaves lambda alone.
    auto nx = update_hover_multipliers(st, std::vector<double>{40.0}, beta, 100.0, 60.0, 0.25);
    CHECK(nx.lambda == st.lambda);

    nx = update_hover_multipliers(st, std::vector<double>{0.1}, beta, 100.0, 0.1, 0.25);
    CHECK(nx.mu[0] == 0.0);

    nx = update_hover_multipliers(st, std::vector<double>{150.0}, beta, 100.0, 0.1, 0.25);
    CHECK(nx.lambda > st.lambda);
    CHECK(nx.iteration == st.iteration + 1);
}

TEST_CASE("hover time")
{
    CHECK(hover_time(std::vector<double>{}, 0, 0.1) == 0.0);
    CHECK(hover_time(std::vector<double>{2.0, 3.0}, 2, 0.1) == doctest::Approx(5.2));
    CHECK(hover_time(std::vector<double>{2.0, 3.0, 4.0}, 3, 0.1) -
              hover_time(std::vector<double>{2.0, 3.0}, 2, 0.1) ==
          doctest::Approx(4.1));
}

TEST_CASE("solve_hover basics")
{
    const HoverParams params;
    const HoverSolution empty = solve_hover(std::vector<double>{}, std::vector<double>{}, params);
    CHECK(empty.tau_s == 0.0);
    CHECK(empty.feasible);

    const HoverSolution one = solve_hover(std::vector<double>{500.0}, std::vector<double>{10.0}, params);
    CHECK(one.converged);
    CHECK(one.T[0] == doctest::Approx(root_oracle(10.0, 500.0, 0.3125)).epsilon(1e-6));
    CHECK(one.tau_s == doctest::Approx(one.T[0] + 0.1).epsilon(1e-12));

    const HoverSolution two = solve_hover(std::vector<double>{300.0, 300.0}, std::vector<double>{10.0, 10.0}, params);
    CHECK(two.converged);
    CHECK(two.T[0] == doctest::Approx(two.T[1]).epsilon(1e-12));
}

TEST_CASE("tight budgets bind and infeasible budgets are flagged")
{
    HoverParams params;
    params.budget_s = 10.0;
    const std::vector<double> gamma{50.0, 80.0, 120.0};
    const std::vector<double> beta{10.0, 10.0, 10.0};
    const HoverSolution sol = solve_hover(gamma, beta, params);
    CHECK(sol.converged);
    CHECK(sol.feasible);
    double sum = 0.0;
    for (double t : sol.T) sum += t;
    CHECK(sum <= (10.0 - 0.3) * (1.0 + 1e-6));
    CHECK(sol.lambda > 0.0);
    CHECK(kkt_residuals(sol, beta, params).max() < 1e-3);

    params.budget_s = 0.2;
    CHECK_FALSE(solve_hover(gamma, beta, params).feasible);
}

TEST_CASE("random hover instances are KKT points")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> g(3.0, 2000.0), budget(5.0, 400.0), load(2.0, 30.0);
    std::uniform_int_distribution<int> n(1, 8);
    for (int i = 0; i < 100; ++i) {
        HoverParams params;
        params.budget_s = budget(rng);
        std::vector<double> gamma, beta;
        for (int k = n(rng); k > 0; --k) {
            gamma.push_back(g(rng));
            beta.push_back(load(rng));
        }
        const HoverSolution sol = solve_hover(gamma, beta, params);
        if (!sol.feasible) continue;
        // Budgets of a few seconds per user need multipliers far beyond what
        // fixed steps reach in i_max; recovery still makes them KKT points.
        if (params.budget_s >= 20.0 * static_cast<double>(gamma.size())) CHECK(sol.converged);
        double sum = 0.0;
        for (std::size_t k = 0; k < sol.T.size(); ++k) {
            sum += sol.T[k];
            const double mu = sol.mu[k];
            CHECK(std::abs(normalized_stationarity_residual(sol.T[k], mu, sol.lambda, beta[k], gamma[k], 0.3125)) <
                  1e-6);
            CHECK(mu >= 0.0);
        }
        CHECK(sol.lambda >= 0.0);
        CHECK(sum <= (params.budget_s - sol.control_time_s) * (1.0 + 1e-6));
        CHECK(sol.tau_s == doctest::Approx(sum + sol.control_time_s).epsilon(1e-12));
    }
}

TEST_CASE("two-user hover matches the grid oracle")
{
    const HoverParams params;
    const std::vector<double> gamma{40.0, 900.0};
    const std::vector<double> beta{10.0, 10.0};
    const HoverSolution sol = solve_hover(gamma, beta, params);
    const OracleReport rep = brute_force_time(gamma, beta, params, sol.T, 200);
    REQUIRE(rep.oracle_feasible);
    CHECK(rep.relative_gap <= 0.02);

    const std::vector<double> same{300.0, 300.0};
    const OracleReport sym = brute_force_time(same, beta, params, solve_hover(same, beta, params).T, 200);
    CHECK(sym.best_point[0] == sym.best_point[1]);
}

TEST_CASE("equal-time baseline")
{
    const HoverParams params;
    const std::vector<double> gamma{200.0, 200.0};
    const HoverSolution a = equal_time_baseline(gamma, std::vector<double>{10.0, 10.0}, 1.0, params);
    CHECK(a.T[0] == a.T[1]);
    CHECK(a.p[0] == doctest::Approx(0.5));
    const HoverSolution b = equal_time_baseline(gamma, std::vector<double>{20.0, 20.0}, 1.0, params);
    CHECK(b.T[0] == doctest::Approx(2.0 * a.T[0]));
    CHECK(b.tau_s == doctest::Approx(a.tau_s + a.T[0] + a.T[1]));
    CHECK(a.baseline);
}
