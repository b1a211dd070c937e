// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scpn/oracle_check.hpp"
#include "scpn/report.hpp"

using namespace scpn;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

constexpr std::uint64_t kSeed = 42;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::map<HeuristicKind, AggregateRow> by_kind(const std::vector<AggregateRow> &rows, double value) {
    std::map<HeuristicKind, AggregateRow> out;
    for (const auto &r : rows) {
        if (r.sweep_value == value) out[r.heuristic] = r;
    }
    return out;
}

std::string describe(const std::map<HeuristicKind, AggregateRow> &rows) {
    std::string s;
    for (const auto &[k, r] : rows) {
        s += std::string(to_string(k)) + "=" + fmt(r.mean_degradation) + " ";
    }
    return s;
}

bool lowest_mean(const std::map<HeuristicKind, AggregateRow> &rows, HeuristicKind k) {
    for (const auto &[other, r] : rows) {
        if (other != k && !(rows.at(k).mean_degradation <= r.mean_degradation)) return false;
    }
    return true;
}

Verdict analytic_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const DegradationParams params{};
    const double capacity = 1200.0 * 3600.0;
    Rng rng = make_stream(kSeed, Stream::Tasks, 0, 0xAC);
    std::uniform_real_distribution<double> d0_dist(0.0, 0.5);
    double worst1 = 0.0, worst01 = 0.0;
    for (int i = 0; i < 100; ++i) {
        const PowerProfile p = random_profile(rng);
        const double d0 = d0_dist(rng);
        const double expected = analytic_profile_cost(params, p, d0, capacity);
        auto residual = [&](double dt) {
            const auto tr = integrate_discharge(params, {d0}, capacity, 1.0,
                                                [&](double t) { return profile_power(p, t); }, 0.0,
                                                profile_duration(p), dt);
            return std::abs(tr.cost.life_consumed - expected) / expected;
        };
        worst1 = std::max(worst1, residual(1.0));
        worst01 = std::max(worst01, residual(0.1));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst1 < 1e-4 && worst01 < 1e-6 && secs < 10.0,
            "max rel residual dt=1: " + fmt(worst1) + ", dt=0.1: " + fmt(worst01) +
                ", runtime " + fmt(secs) + " s"};
}

Verdict derivative_identity() {
    const DegradationParams params{};
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double d = 0.05 * i;
        const double fd =
            (integrated_consumption(params, d + h) - integrated_consumption(params, d - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd - instantaneous_rate(params, d)));
    }
    return {worst < 1e-6, "max |f - g'| = " + fmt(worst)};
}

Verdict eclipse_geometry() {
    const OrbitParams p;
    const double sampled = eclipse_fraction(p, SunModel{});
    const double expected = std::asin(p.earth_radius_m / p.semi_major_axis()) / std::numbers::pi;
    return {std::abs(sampled - expected) < 1e-3,
            "sampled " + fmt(sampled) + " vs " + fmt(expected)};
}

Verdict rich_regime() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_regime_experiment(ScenarioConfig{}, {0.1, 0.3}, RunOptions{}, 1000);
    const auto rows = by_kind(res.rows, res.rows.front().sweep_value);
    const double mpd = rows.at(HeuristicKind::MinPowerDeficit).mean_degradation;
    const double rnd = rows.at(HeuristicKind::Random).mean_degradation;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {lowest_mean(rows, HeuristicKind::MinPowerDeficit) && mpd < 0.1 * rnd,
            describe(rows) + "(" + fmt(secs) + " s)"};
}

Verdict constrained_regime() {
    const auto res = run_regime_experiment(ScenarioConfig{}, {0.012, 0.024}, RunOptions{}, 1000);
    const auto rows = by_kind(res.rows, res.rows.front().sweep_value);
    const auto &dod = rows.at(HeuristicKind::DodFirst);
    bool lowest_var = true;
    std::string stds;
    for (const auto &[k, r] : rows) {
        if (k != HeuristicKind::DodFirst && !(dod.std_degradation <= r.std_degradation)) {
            lowest_var = false;
        }
        stds += std::string(to_string(k)) + "=" + fmt(r.std_degradation) + " ";
    }
    const double mpd = rows.at(HeuristicKind::MinPowerDeficit).mean_degradation;
    const bool below_mpd = dod.mean_degradation < mpd &&
                           rows.at(HeuristicKind::MinNetEnergyCost).mean_degradation < mpd;
    return {lowest_mean(rows, HeuristicKind::DodFirst) && lowest_var && below_mpd,
            "mean: " + describe(rows) + "| std: " + stds};
}

Verdict workload_crossover() {
    SweepSpec sweep;
    sweep.parameter = SweepParameter::Workload;
    sweep.values = make_grid(1e11, 3e12, 8, true);
    sweep.fixed = 1500.0;
    const auto res = run_sweep(ScenarioConfig{}, sweep, RunOptions{});
    const auto lo = by_kind(res.rows, sweep.values.front());
    const auto hi = by_kind(res.rows, sweep.values.back());
    const double mpd_hi = hi.at(HeuristicKind::MinPowerDeficit).mean_degradation;
    const bool crossover = hi.at(HeuristicKind::DodFirst).mean_degradation < mpd_hi ||
                           hi.at(HeuristicKind::MinNetEnergyCost).mean_degradation < mpd_hi;
    return {lowest_mean(lo, HeuristicKind::MinPowerDeficit) && crossover,
            "W=1e11: " + describe(lo) + "| W=3e12: " + describe(hi)};
}

Verdict budget_trend() {
    SweepSpec sweep;
    sweep.parameter = SweepParameter::Budget;
    sweep.values = make_grid(400, 2000, 9, false);
    sweep.fixed = 1e12;
    const auto res = run_sweep(ScenarioConfig{}, sweep, RunOptions{});
    const auto b400 = by_kind(res.rows, sweep.values[0]);
    const auto b800 = by_kind(res.rows, sweep.values[2]);
    const auto b2000 = by_kind(res.rows, sweep.values.back());
    bool decreasing = true;
    for (const auto &[k, r] : b400) {
        if (!(b800.at(k).mean_degradation < r.mean_degradation)) decreasing = false;
    }
    const double dod = b2000.at(HeuristicKind::DodFirst).mean_degradation;
    const bool energy_aware = b2000.at(HeuristicKind::MinPowerDeficit).mean_degradation < dod &&
                              b2000.at(HeuristicKind::MinNetEnergyCost).mean_degradation < dod;
    return {decreasing && energy_aware, "T=400: " + describe(b400) + "| T=800: " +
                                            describe(b800) + "| T=2000: " + describe(b2000)};
}

Verdict grid_dominance() {
    const ScenarioConfig cfg = small_instance_config(kSeed, 1.0);
    const Constellation c = instantiate(cfg);
    const BackgroundTimeline bg(c, cfg.horizon_s + cfg.budget_s.hi);
    Rng task_rng = make_stream(kSeed, Stream::Tasks);
    const auto tasks = generate_tasks(cfg, 50, task_rng);
    RunOptions opt;
    opt.heuristics.push_back(HeuristicKind::GridBaseline);
    opt.grid = {5, 5};
    const auto trials = run_trials(c, bg, tasks, kSeed, opt);
    const std::size_t nh = opt.heuristics.size();
    int violations = 0, compared = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TrialResult &grid = trials[i * nh + nh - 1];
        for (std::size_t h = 0; h + 1 < nh; ++h) {
            const TrialResult &r = trials[i * nh + h];
            if (r.infeasible()) continue;
            ++compared;
            if (!grid.cost || grid.cost->life_consumed > r.cost->life_consumed) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations over " +
                                 std::to_string(compared) + " feasible heuristic decisions"};
}

Verdict determinism() {
    ScenarioConfig cfg;
    auto regime = [&](unsigned threads) {
        RunOptions opt;
        opt.threads = threads;
        opt.heuristics.push_back(HeuristicKind::GridBaseline);
        opt.grid = {3, 3};
        std::ostringstream os;
        write_trials_csv(os, run_regime_experiment(cfg, {0.05, 0.15}, opt, 100).trials);
        return os.str();
    };
    auto sweep = [&](unsigned threads, SweepParameter param) {
        RunOptions opt;
        opt.threads = threads;
        SweepSpec s;
        s.parameter = param;
        s.trials_per_point = 50;
        s.values = param == SweepParameter::Workload ? make_grid(1e11, 3e12, 3, true)
                                                      : make_grid(400, 2000, 3, false);
        s.fixed = param == SweepParameter::Workload ? 1500.0 : 1e12;
        std::ostringstream os;
        write_trials_csv(os, run_sweep(cfg, s, opt).trials);
        return os.str();
    };
    bool ok = true;
    std::string detail;
    for (const auto &[name, fn] :
         std::vector<std::pair<std::string, std::function<std::string(unsigned)>>>{
             {"regime", regime},
             {"sweep-workload", [&](unsigned t) { return sweep(t, SweepParameter::Workload); }},
             {"sweep-budget", [&](unsigned t) { return sweep(t, SweepParameter::Budget); }}}) {
        const std::string a = fn(1), b = fn(1), c = fn(8), d = fn(8);
        const bool same = a == b && a == c && c == d;
        ok = ok && same;
        detail += name + (same ? " identical " : " DIFFERS ");
    }
    return {ok, detail + "(threads 1 and 8, two runs each)"};
}

Verdict path_dependence() {
    const DegradationParams params{};
    const double capacity = 1200.0 * 3600.0;
    const double watts = 0.1 * capacity / 1000.0;
    auto cost = [&](double d0) {
        return integrate_discharge(params, {d0}, capacity, 1.0, [&](double) { return watts; }, 0.0,
                                   1000.0, 1.0)
            .cost.life_consumed;
    };
    const double deep = cost(0.8), shallow = cost(0.1);
    const double expected =
        (integrated_consumption(params, 0.9) - integrated_consumption(params, 0.8)) /
        (integrated_consumption(params, 0.2) - integrated_consumption(params, 0.1));
    const double ratio = deep / shallow;
    return {deep > shallow && std::abs(ratio - expected) < 1e-4,
            "ratio " + std::to_string(ratio) + " vs " + std::to_string(expected)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"analytic degradation oracle", analytic_oracle},
        {"derivative identity", derivative_identity},
        {"eclipse geometry", eclipse_geometry},
        {"energy-rich regime", rich_regime},
        {"energy-constrained regime", constrained_regime},
        {"workload crossover", workload_crossover},
        {"budget trend", budget_trend},
        {"grid-baseline dominance", grid_dominance},
        {"determinism", determinism},
        {"path dependence", path_dependence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v{false, ""};
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first.c_str(),
                    v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
