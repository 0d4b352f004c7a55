#include "hetnet/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) { return splitmix64(splitmix64(base) ^ stream); }

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial)
{
    return splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial);
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::optimal: return "optimal";
    case Mode::baseline: return "baseline";
    case Mode::both: return "both";
    }
    return "?";
}

std::string to_string(Axis a)
{
    switch (a) {
    case Axis::n_uavs: return "n_uavs";
    case Axis::n_users: return "n_users";
    case Axis::load_bits: return "load_bits";
    case Axis::environment: return "environment";
    }
    return "?";
}

void apply_axis(ScenarioConfig& cfg, Axis axis, double value)
{
    switch (axis) {
    case Axis::n_uavs: cfg.n_uavs = static_cast<int>(value); break;
    case Axis::n_users: cfg.n_users = static_cast<int>(value); break;
    case Axis::load_bits: cfg.radio.load_bits = value; break;
    case Axis::environment:
        cfg.environment = EnvironmentParams::for_kind(value == 0.0 ? EnvironmentKind::dense_urban
                                                                   : EnvironmentKind::high_rise_urban);
        break;
    }
}

std::vector<HoverSolution> solve_uav_hover(const Scenario& s, const Association& a, std::span<const double> gamma,
                                           bool baseline, const HoverOptions& opts)
{
    const auto& radio = s.config.radio;
    HoverParams hp;
    hp.b_sub_mhz = units::to_mega(radio.subcarrier_bandwidth_hz());
    hp.t_min_mbps = units::to_mega(radio.r_min_bps);
    hp.budget_s = radio.max_hover_s;
    hp.control_time_s = radio.control_time_s;

    std::vector<HoverSolution> out;
    for (const auto& b : s.base_stations) {
        if (b.tier != Tier::uav) continue;
        std::vector<double> g, beta;
        for (int u : a.bs_users[static_cast<std::size_t>(b.id)]) {
            g.push_back(gamma[static_cast<std::size_t>(u)]);
            beta.push_back(units::to_mega(s.users[static_cast<std::size_t>(u)].load_bits));
        }
        HoverSolution h = baseline ? equal_time_baseline(g, beta, b.p_max_w, hp) : solve_hover(g, beta, hp, opts);
        h.uav_id = b.id;
        h.users = a.bs_users[static_cast<std::size_t>(b.id)];
        out.push_back(std::move(h));
    }
    return out;
}

namespace {

ModeResult finish_mode(const Scenario& s, const Association& a, const PowerSolution& power,
                       const std::vector<double>& gamma, const std::vector<HoverSolution>& hover)
{
    ModeResult r;
    std::vector<double> tau;
    r.converged = power.converged;
    r.warnings = power.warnings;
    for (const auto& h : hover) {
        tau.push_back(h.tau_s);
        r.converged = r.converged && h.converged;
        r.feasible = r.feasible && h.feasible;
        for (const auto& w : h.warnings) r.warnings.push_back("uav " + std::to_string(h.uav_id) + ": " + w);
    }
    r.metrics = compute_metrics(s, a, power.p, gamma, tau);
    return r;
}

}  // namespace

TrialOutcome run_trial(const ScenarioConfig& cfg, std::uint64_t seed, Mode mode, const SolverOptions& opts,
                       TrialDetail* detail)
{
    TrialOutcome out;
    out.seed = seed;
    try {
        ScenarioConfig c = cfg;
        c.seed = derive_seed(seed, 1);
        validate_config(c);
        Scenario s = generate_scenario(c);
        ChannelState ch = ChannelState::draw(s, derive_seed(seed, 2));
        Association a0 = associate_users(s, mean_received_power(s, ch));
        Association a = assign_subcarriers(a0, s, ch, baseline_powers(s, a0));

        TrialDetail local;
        TrialDetail& d = detail ? *detail : local;
        if (mode != Mode::baseline) {
            d.power = solve_network_power(s, a, ch, opts.power);
            d.gamma = user_gammas(a, ch, d.power.p);
            d.hover = solve_uav_hover(s, a, d.gamma, false, opts.hover);
            out.optimal = finish_mode(s, a, d.power, d.gamma, d.hover);
        }
        if (mode != Mode::optimal) {
            d.baseline_power = max_power_baseline(s, a);
            d.baseline_gamma = user_gammas(a, ch, d.baseline_power.p);
            d.baseline_hover = solve_uav_hover(s, a, d.baseline_gamma, true, opts.hover);
            out.baseline = finish_mode(s, a, d.baseline_power, d.baseline_gamma, d.baseline_hover);
        }
        if (detail) {
            detail->scenario = std::move(s);
            detail->channel = std::move(ch);
            detail->association = std::move(a);
        }
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
        out.optimal.reset();
        out.baseline.reset();
    }
    return out;
}

void validate_sweep(const SweepSpec& spec)
{
    if (spec.values.empty()) throw ValidationError("values", "sweep axis has no values");
    if (spec.trials < 1) throw ValidationError("trials", "must be >= 1");
    for (double v : spec.values) {
        ScenarioConfig c = spec.base;
        apply_axis(c, spec.axis, v);
        validate_config(c);
    }
}

SweepResult run_sweep(const SweepSpec& spec)
{
    validate_sweep(spec);
    SweepResult res;
    res.spec = spec;
    const std::size_t n_points = spec.values.size();
    const auto n_trials = static_cast<std::size_t>(spec.trials);
    res.points.resize(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        res.points[k].x = spec.values[k];
        res.points[k].trials.resize(n_trials);
    }

    const std::size_t total = n_points * n_trials;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const std::size_t k = job / n_trials;
            const std::size_t t = job % n_trials;
            ScenarioConfig c = spec.base;
            apply_axis(c, spec.axis, spec.values[k]);
            res.points[k].trials[t] = run_trial(c, trial_seed(spec.master_seed, k, t), spec.mode, spec.solver);
        }
    };
    unsigned n_threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(total)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return res;
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) {
            ++s.excluded;
            continue;
        }
        ++s.n;
        sum += v;
    }
    if (s.n == 0) return s;
    s.mean = sum / s.n;
    if (s.n < 2) {
        s.degenerate = true;
        return s;
    }
    double ss = 0.0;
    for (double v : values)
        if (!std::isnan(v)) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (s.n - 1));
    s.ci_half_width = 1.96 * s.sd / std::sqrt(static_cast<double>(s.n));
    return s;
}

double metric_value(const ModeResult& r, const std::string& name)
{
    const auto& m = r.metrics;
    if (name == "ee_bits_per_joule") return m.ee_bits_per_joule;
    if (name == "sum_rate_bps") return m.sum_rate_bps;
    if (name == "total_power_w") return m.total_power_w;
    if (name == "avg_hover_s") return m.avg_hover_s.value_or(std::numeric_limits<double>::quiet_NaN());
    if (name == "outage_count") return m.outage_count;
    throw std::invalid_argument("unknown metric " + name);
}

Summary aggregate(const PointResult& point, Mode mode, const std::string& name)
{
    std::vector<double> v;
    v.reserve(point.trials.size());
    for (const auto& t : point.trials) {
        const auto& r = mode == Mode::baseline ? t.baseline : t.optimal;
        v.push_back(t.failed || !r ? std::numeric_limits<double>::quiet_NaN() : metric_value(*r, name));
    }
    return summarize(v);
}

}  // namespace hetnet
