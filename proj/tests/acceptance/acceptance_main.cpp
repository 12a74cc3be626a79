// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "emh/channel.hpp"
#include "emh/config.hpp"
#include "emh/energy.hpp"
#include "emh/experiment.hpp"
#include "emh/learner.hpp"
#include "emh/metrics.hpp"
#include "emh/routing_space.hpp"

using namespace emh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path config_path(const std::string& name)
{
    return fs::path(EMH_CONFIG_DIR) / name;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Every generated trace passes through here for the metric check.
struct MetricAudit {
    std::size_t traces = 0;
    std::size_t points = 0;
    std::size_t violations = 0;

    void check(const ExperimentTrace& trace)
    {
        ++traces;
        const auto historic = historic_series(trace);
        double running = 0.0;
        for (std::size_t t = 0; t < trace.size(); ++t) {
            running += trace.entries[t].bottleneck_energy;
            ++points;
            if (historic[t] > running * (1.0 + 1e-12)) {
                ++violations;
            }
        }
    }
};

MetricAudit audit;

std::string trace_csv(const ExperimentTrace& trace)
{
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

Outcome cayley_counts()
{
    const auto start = std::chrono::steady_clock::now();
    bool ok = count_all_routings(4) == 16 && count_all_routings(10) == BigCount(100'000'000);
    for (std::size_t n = 2; n <= 6; ++n) {
        ok = ok && count_all_routings(n) == oracle::count_trees(n);
    }
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "n=4 -> " << count_all_routings(4) << ", n=10 -> " << count_all_routings(10)
      << ", brute force n=2..6 matched: " << (ok ? "yes" : "no") << ", " << elapsed << " s (limit 1 s)";
    return {ok && elapsed < 1.0, d.str()};
}

Outcome constrained_counts()
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2024);
    std::uniform_int_distribution<std::size_t> size(2, 5);
    std::uniform_real_distribution<double> fine(-95.0, -40.0);
    std::uniform_int_distribution<int> coarse(-9, -4);
    std::bernoulli_distribution tied(0.25);
    int matched = 0;
    const int draws = 200;
    for (int i = 0; i < draws; ++i) {
        std::vector<double> gamma(size(rng));
        const bool with_ties = tied(rng);
        for (double& g : gamma) {
            g = with_ties ? 10.0 * coarse(rng) : fine(rng);
        }
        const ConstrainedSpace space = build_constrained_space(RssiVector{gamma});
        if (space.cardinality() == oracle::count_trees(gamma.size() + 1, &gamma)) {
            ++matched;
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << matched << "/" << draws << " draws matched brute force, " << elapsed << " s (limit 10 s)";
    return {matched == draws && elapsed < 10.0, d.str()};
}

Outcome uniform_sampling()
{
    const ConstrainedSpace space(RssiVector{{-55.0, -67.0, -80.0}});
    const auto all = enumerate_constrained(space);
    std::map<RoutingVector, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) {
        index[all[i]] = i;
    }
    const double critical = oracle::chi_squared_95(all.size() - 1);
    const std::set<RoutingVector> none;
    int passed = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        std::vector<std::size_t> counts(all.size(), 0);
        for (int i = 0; i < 60'000; ++i) {
            ++counts[index.at(*sample_unexplored(space, none, rng))];
        }
        const double stat = oracle::chi_squared_statistic(counts);
        worst = std::max(worst, stat);
        passed += stat < critical ? 1 : 0;
    }
    std::ostringstream d;
    d << passed << "/20 seeds below chi2(5, 0.95) = " << critical << ", largest statistic " << worst
      << " (need >= 18)";
    return {all.size() == 6 && passed >= 18, d.str()};
}

Outcome energy_formulas()
{
    const RadioParams radio;
    const double v = 3.3;
    const double air = 43.0 * 8.0 / 50'000.0;
    struct Case {
        const char* name;
        double got;
        double expected;
    };
    const std::vector<Case> cases{
        {"1 s CPU", microprocessor_energy({1, 0, 0, 0, 0}, v, radio), 42.9e-3},
        {"120 s LPM", microprocessor_energy({0, 120, 0, 0, 0}, v, radio), 3.3 * 120 * 0.4e-6},
        {"6.88 ms TX at 14 dBm", radio_energy({0, 0, 0, air, 0}, v, radio, 14.0), 3.3 * 0.061 * 0.00688},
        {"6.88 ms TX at -16 dBm", radio_energy({0, 0, 0, air, 0}, v, radio, -16.0), 3.3 * 0.039 * 0.00688},
        {"1 s TX at -1 dBm", radio_energy({0, 0, 0, 1, 0}, v, radio, -1.0), 3.3 * 0.050},
        {"100 ms RX", radio_energy({0, 0, 0.1, 0, 0}, v, radio, 14.0), 3.3 * 0.019 * 0.1},
        {"120 s sleep", radio_energy({0, 0, 0, 0, 120}, v, radio, 14.0), 47.52e-6},
    };
    double worst = 0.0;
    for (const Case& c : cases) {
        worst = std::max(worst, std::abs(c.got - c.expected) / c.expected);
    }
    std::ostringstream d;
    d << cases.size() << " oracles, largest relative error " << worst << " (limit 1e-12); 6.88 ms TX = "
      << cases[2].got * 1e3 << " mJ";
    return {worst <= 1e-12, d.str()};
}

Outcome emh_optimality()
{
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream d;
    bool ok = true;
    for (const char* name : {"line3.json", "cluster4.json", "grid5.json"}) {
        const ExperimentConfig cfg = load_experiment_config(config_path(name));
        const Deployment& dep = cfg.deployment;
        const bool deterministic = dep.channel.shadowing_sigma == 0.0 && !dep.channel.per_enabled;
        const auto ranked = rank_all_routings(dep, cfg.cycles);
        const std::size_t space = ranked.size();
        // exploration decays as 1/sqrt(t), so exhaustion needs on the order of |A|^2 iterations
        const std::size_t iterations = std::max(3 * space, space * space);
        int exact = 0;
        int exhausted = 0;
        std::size_t exploits_checked = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const ExperimentTrace trace = run_experiment(dep, Policy::Emh, iterations, cfg.cycles, seed);
            audit.check(trace);
            std::set<RoutingVector> explored;
            bool all_optimal = true;
            for (const auto& e : trace.entries) {
                if (e.kind == ActionKind::Explore) {
                    explored.insert(e.routing);
                } else if (explored.size() == space) {
                    ++exploits_checked;
                    all_optimal = all_optimal && e.routing == ranked.front().routing;
                }
            }
            exhausted += explored.size() == space ? 1 : 0;
            exact += explored.size() == space && all_optimal ? 1 : 0;
        }
        ok = ok && deterministic && space <= 120 && exact == 20;
        d << name << ": |A|=" << space << " T=" << iterations << " exhausted " << exhausted << "/20, optimal "
          << exact << "/20 (" << exploits_checked << " exploits); ";
    }
    const double elapsed = seconds_since(start);
    d << elapsed << " s (limit 30 s)";
    return {ok && elapsed < 30.0, d.str()};
}

Outcome testbed_shape()
{
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = load_experiment_config(config_path("testbed9.json"));
    const Deployment& dep = cfg.deployment;
    const std::size_t iterations = 110;
    const int cycles = 10;
    int below = 0;
    int early_negative = 0;
    std::vector<double> rho;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sh = run_experiment(dep, Policy::SingleHop, iterations, cycles, run_seed(seed, Policy::SingleHop));
        const auto emh = run_experiment(dep, Policy::Emh, iterations, cycles, run_seed(seed, Policy::Emh));
        audit.check(sh);
        audit.check(emh);
        const ComparisonSeries c = compare(sh, emh);
        const double ma_sh = moving_average(c.e_b_sh).back();
        const double ma_emh = c.e_b_emh_smoothed.back();
        below += ma_emh < ma_sh ? 1 : 0;
        rho.push_back(c.rho.back());
        early_negative += *std::min_element(c.rho.begin(), c.rho.begin() + 20) < 0.0 ? 1 : 0;
    }
    std::sort(rho.begin(), rho.end());
    const double median = 0.5 * (rho[9] + rho[10]);
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "EMH MA15 below SH in " << below << "/20 seeds (need >= 16), median rho(110) = " << median
      << " (need [0.02, 0.30]), range [" << rho.front() << ", " << rho.back() << "], early negative rho in "
      << early_negative << "/20, " << elapsed << " s (limit 300 s)";
    return {below >= 16 && median >= 0.02 && median <= 0.30 && elapsed < 300.0, d.str()};
}

Outcome epsilon_schedule()
{
    const Deployment dep = load_deployment(config_path("testbed9.json"));
    double worst = 0.0;
    std::size_t checked = 0;
    for (double eps0 : {1.0, 0.5}) {
        ExperimentOptions options;
        options.learner.epsilon0 = eps0;
        const ExperimentTrace trace = run_experiment(dep, Policy::Emh, 110, 2, 99, options);
        audit.check(trace);
        for (const auto& e : trace.entries) {
            if (!e.epsilon) {
                return {false, "missing epsilon at t = " + std::to_string(e.iteration)};
            }
            worst = std::max(worst, std::abs(*e.epsilon - eps0 / std::sqrt(static_cast<double>(e.iteration))));
            ++checked;
        }
    }
    std::ostringstream d;
    d << checked << " recorded values for eps0 in {1, 0.5}, t = 1..110, largest error " << worst
      << " (limit 1e-12)";
    return {checked == 220 && worst <= 1e-12, d.str()};
}

std::map<std::string, std::string> read_dir(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        files[entry.path().filename().string()] = os.str();
    }
    return files;
}

Outcome determinism()
{
    const fs::path root = fs::temp_directory_path() / ("emh_acceptance_" + std::to_string(std::random_device{}()));
    std::size_t compared = 0;
    bool ok = true;
    std::ostringstream d;
    for (const char* name : {"testbed9.json", "line3.json", "cluster4.json", "grid5.json"}) {
        ExperimentConfig cfg = load_experiment_config(config_path(name));
        cfg.seeds = {1, 7, 42};
        std::map<std::string, std::string> runs[2];
        for (int pass = 0; pass < 2; ++pass) {
            cfg.output_dir = root / (std::string(name) + std::to_string(pass));
            cfg.workers = pass == 0 ? 1 : 3;
            std::ostringstream out;
            std::ostringstream err;
            if (cmd_run(cfg, out, err) != 0) {
                ok = false;
                d << name << ": run failed: " << err.str();
            }
            runs[pass] = read_dir(cfg.output_dir);
        }
        ok = ok && !runs[0].empty() && runs[0] == runs[1];
        compared += runs[0].size();
        for (std::uint64_t seed : cfg.seeds) {
            for (Policy p : cfg.policies) {
                const auto trace = run_experiment(cfg.deployment, p, cfg.iterations, cfg.cycles, run_seed(seed, p));
                audit.check(trace);
                ok = ok && runs[0].at("trace_" + to_string(p) + "_seed" + std::to_string(seed) + ".csv") ==
                               trace_csv(trace);
            }
        }
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    d << compared << " output files identical across reruns (1 and 3 workers) and in-process traces";
    return {ok, d.str()};
}

Outcome metric_distinction()
{
    ExperimentTrace crafted;
    for (const std::vector<double>& row : {std::vector<double>{3.0, 1.0}, std::vector<double>{1.0, 3.0}}) {
        TraceEntry e;
        e.iteration = crafted.size() + 1;
        e.routing = RoutingVector::star(2);
        e.station_energy = row;
        e.bottleneck_energy = *std::max_element(row.begin(), row.end());
        crafted.entries.push_back(e);
    }
    const double historic = historic_bottleneck(crafted, 2);
    const double summed = crafted.entries[0].bottleneck_energy + crafted.entries[1].bottleneck_energy;
    std::ostringstream d;
    d << audit.violations << " violations over " << audit.traces << " generated traces (" << audit.points
      << " points); crafted trace: max of sums " << historic << " < sum of maxima " << summed;
    return {audit.traces > 0 && audit.violations == 0 && historic < summed, d.str()};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 Cayley counts", cayley_counts},
        {"2 constrained-space cardinality", constrained_counts},
        {"3 uniform sampling", uniform_sampling},
        {"4 energy formulas", energy_formulas},
        {"5 EMH optimality, deterministic channel", emh_optimality},
        {"6 testbed shape, stochastic channel", testbed_shape},
        {"7 epsilon schedule", epsilon_schedule},
        {"8 determinism", determinism},
        {"9 historic bottleneck vs summed bottlenecks", metric_distinction},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %-44s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
