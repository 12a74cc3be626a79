#include "emh/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "emh/channel.hpp"
#include "emh/config.hpp"
#include "emh/energy.hpp"
#include "emh/metrics.hpp"
#include "emh/simulator.hpp"

namespace emh {

using nlohmann::json;

ExperimentConfig experiment_config_from_json(const json& doc)
{
    if (!doc.is_object() || !doc.contains("deployment")) {
        throw Error("config must be an object with a \"deployment\" member");
    }
    ExperimentConfig cfg;
    cfg.deployment = deployment_from_json(doc.at("deployment"));
    cfg.cycles = cfg.deployment.averaging_cycles;

    const json exp = doc.value("experiment", json::object());
    static const std::set<std::string> known{"policies", "iterations", "cycles", "seeds", "output_dir", "workers",
                                             "verbose", "freeze_payoffs", "epsilon0", "enumeration_limit",
                                             "association_cost"};
    for (const auto& item : exp.items()) {
        if (!known.count(item.key())) {
            throw Error("unknown key '" + item.key() + "' in experiment");
        }
    }
    try {
        if (exp.contains("policies")) {
            cfg.policies.clear();
            for (const auto& p : exp.at("policies")) {
                cfg.policies.push_back(policy_from_string(p.get<std::string>()));
            }
        }
        cfg.iterations = exp.value("iterations", cfg.iterations);
        cfg.cycles = exp.value("cycles", cfg.cycles);
        if (exp.contains("seeds")) {
            cfg.seeds = exp.at("seeds").get<std::vector<std::uint64_t>>();
        }
        cfg.output_dir = exp.value("output_dir", cfg.output_dir.string());
        cfg.workers = exp.value("workers", cfg.workers);
        cfg.verbose = exp.value("verbose", cfg.verbose);
        cfg.freeze_payoffs = exp.value("freeze_payoffs", cfg.freeze_payoffs);
        cfg.epsilon0 = exp.value("epsilon0", cfg.epsilon0);
        cfg.enumeration_limit = exp.value("enumeration_limit", cfg.enumeration_limit);
        cfg.deployment.association_cost = exp.value("association_cost", cfg.deployment.association_cost);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed experiment section: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(e.what());
    }

    if (cfg.iterations < 1) {
        throw Error("invalid experiment: iterations T >= 1");
    }
    if (cfg.cycles < 1) {
        throw Error("invalid experiment: cycles K >= 1");
    }
    if (cfg.seeds.empty()) {
        throw Error("invalid experiment: at least one seed");
    }
    if (cfg.policies.empty()) {
        throw Error("invalid experiment: at least one policy");
    }
    if (!(cfg.epsilon0 > 0.0 && cfg.epsilon0 <= 1.0)) {
        throw Error("invalid experiment: epsilon0 in (0, 1]");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path)
{
    ExperimentConfig cfg = experiment_config_from_json(read_json_file(path));
    cfg.config_path = path;
    return cfg;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        os << content;
        os.flush();
        if (!os) {
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t run_seed(std::uint64_t master_seed, Policy policy)
{
    return derive_seed(master_seed, policy == Policy::SingleHop ? 0 : 1);
}

namespace {

struct RunJob {
    std::uint64_t seed;
    Policy policy;
    ExperimentTrace trace;
    std::exception_ptr error;
};

void run_parallel(std::vector<RunJob>& jobs, std::size_t workers, const std::function<void(RunJob&)>& body)
{
    workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                body(jobs[i]);
            } catch (...) {
                jobs[i].error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
}

std::string plot_script(std::uint64_t first_seed)
{
    std::ostringstream os;
    os << "# gnuplot -e \"f='comparison_seed" << first_seed << ".csv'\" plot.gp\n"
       << "if (!exists(\"f\")) f = 'comparison_seed" << first_seed << ".csv'\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'iteration'\n"
       << "set terminal pngcairo size 900,900\n"
       << "set output f.'.png'\n"
       << "set multiplot layout 2,1\n"
       << "set ylabel 'bottleneck energy [J]'\n"
       << "plot f using 1:2 with lines, f using 1:3 with points pt 7 ps 0.4, f using 1:7 with lines lw 2\n"
       << "set ylabel 'saving ratio'\n"
       << "plot f using 1:6 with lines, 0 notitle dashtype 2\n"
       << "unset multiplot\n";
    return os.str();
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        std::filesystem::create_directories(config.output_dir);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: cannot create output directory: " << e.what() << '\n';
        return 1;
    }

    std::vector<RunJob> jobs;
    for (std::uint64_t seed : config.seeds) {
        for (Policy policy : config.policies) {
            jobs.push_back({seed, policy, {}, nullptr});
        }
    }

    ExperimentOptions options;
    options.learner.epsilon0 = config.epsilon0;
    options.learner.exploit_update = config.freeze_payoffs ? ExploitUpdate::Freeze : ExploitUpdate::Average;
    options.learner.enumeration_limit = config.enumeration_limit;
    options.keep_cycle_reports = config.verbose;

    run_parallel(jobs, config.workers, [&](RunJob& job) {
        job.trace = run_experiment(config.deployment, job.policy, config.iterations, config.cycles,
                                   run_seed(job.seed, job.policy), options);
    });

    for (const RunJob& job : jobs) {
        if (job.error) {
            try {
                std::rethrow_exception(job.error);
            } catch (const std::exception& e) {
                err << "error: " << to_string(job.policy) << " seed " << job.seed << ": " << e.what() << '\n';
            }
            return 1;
        }
    }

    try {
        std::map<std::pair<std::uint64_t, Policy>, const ExperimentTrace*> by_key;
        for (const RunJob& job : jobs) {
            by_key[{job.seed, job.policy}] = &job.trace;
            const std::string stem = to_string(job.policy) + "_seed" + std::to_string(job.seed);

            std::ostringstream trace_csv;
            write_trace_csv(trace_csv, job.trace);
            write_file_atomic(config.output_dir / ("trace_" + stem + ".csv"), trace_csv.str());

            if (config.verbose) {
                std::ostringstream cycles_csv;
                write_cycle_csv_header(cycles_csv);
                for (const TraceEntry& e : job.trace.entries) {
                    for (std::size_t k = 0; k < e.cycles.size(); ++k) {
                        write_cycle_csv_rows(cycles_csv, e.iteration, k + 1, e.cycles[k]);
                    }
                }
                write_file_atomic(config.output_dir / ("cycles_" + stem + ".csv"), cycles_csv.str());
            }
        }

        bool wrote_comparison = false;
        for (std::uint64_t seed : config.seeds) {
            const auto sh = by_key.find({seed, Policy::SingleHop});
            const auto emh = by_key.find({seed, Policy::Emh});
            if (sh == by_key.end() || emh == by_key.end()) {
                continue;
            }
            const ComparisonSeries series = compare(*sh->second, *emh->second);
            std::ostringstream csv;
            write_comparison_csv(csv, series);
            write_file_atomic(config.output_dir / ("comparison_seed" + std::to_string(seed) + ".csv"), csv.str());
            wrote_comparison = true;

            const auto life_sh = estimate_lifetime(*sh->second, config.deployment);
            const auto life_emh = estimate_lifetime(*emh->second, config.deployment);
            auto show = [](const std::optional<double>& v) {
                std::ostringstream os;
                if (v) {
                    os << std::fixed << std::setprecision(0) << *v;
                } else {
                    os << "unbounded";
                }
                return os.str();
            };
            out << "seed " << seed << ": rho(" << series.size() << ") = " << std::setprecision(6)
                << series.rho.back() << "  E_sh = " << std::setprecision(9) << series.historic_sh.back()
                << " J  E_emh = " << series.historic_emh.back() << " J  lifetime_sh = " << show(life_sh)
                << " it  lifetime_emh = " << show(life_emh) << " it\n";
        }
        if (wrote_comparison) {
            write_file_atomic(config.output_dir / "plot.gp", plot_script(config.seeds.front()));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err,
               const std::optional<std::filesystem::path>& output_dir)
{
    std::vector<RankedRouting> ranked;
    try {
        ranked = rank_all_routings(config.deployment, config.cycles, config.enumeration_limit);
    } catch (const SpaceTooLargeError& e) {
        err << "refused: constrained space cardinality " << e.cardinality().str() << " exceeds limit "
            << config.enumeration_limit << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::ostringstream table;
    table << "rank,routing,e_b_J,optimal\n";
    table << std::setprecision(9);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        table << (i + 1) << ',' << ranked[i].routing.to_string(';') << ',' << ranked[i].bottleneck_energy << ','
              << (i == 0 ? "yes" : "") << '\n';
    }
    out << table.str();
    if (output_dir) {
        try {
            std::filesystem::create_directories(*output_dir);
            write_file_atomic(*output_dir / "oracle.csv", table.str());
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}

namespace {

// Brute-force count of parent vectors over n nodes that form a tree and,
// when gamma is given, respect the RSSI order with id tie-break.
std::size_t brute_force_trees(std::size_t n, const RssiVector* gamma)
{
    const std::size_t stations = n - 1;
    std::vector<NodeId> parents(stations, 0);
    std::size_t count = 0;
    while (true) {
        bool ok = true;
        for (NodeId s = 1; s <= stations && ok; ++s) {
            const NodeId p = parents[s - 1];
            if (p == s) {
                ok = false;
            } else if (gamma && p != kGateway) {
                const double gs = gamma->of(s);
                const double gp = gamma->of(p);
                ok = gp > gs || (gp == gs && p < s);
            }
        }
        if (ok && validate_routing(RoutingVector(parents), n)) {
            ++count;
        }
        std::size_t pos = 0;
        while (pos < stations && ++parents[pos] == n) {
            parents[pos++] = 0;
        }
        if (pos == stations) {
            return count;
        }
    }
}

}  // namespace

int cmd_validate(std::ostream& out, const std::optional<Deployment>& deployment)
{
    int failures = 0;
    auto check = [&](const std::string& name, const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) {
            out << " (" << detail << ')';
        }
        out << '\n';
        failures += ok ? 0 : 1;
    };

    check("tree validity", [](std::string&) {
        return validate_routing(RoutingVector({0, 0, 2, 2, 4, 4, 2, 7, 7}), 10) &&
               validate_routing(RoutingVector({0, 5, 2, 0, 1, 1, 5, 6, 2}), 10) &&
               validate_routing(RoutingVector::star(9), 10) && !validate_routing(RoutingVector({2, 1}), 3);
    });

    check("Cayley counts n=2..6", [](std::string& detail) {
        for (std::size_t n = 2; n <= 6; ++n) {
            if (count_all_routings(n) != brute_force_trees(n, nullptr)) {
                detail = "mismatch at n=" + std::to_string(n);
                return false;
            }
        }
        detail = "n=4 -> " + count_all_routings(4).str() + ", n=10 -> " + count_all_routings(10).str();
        return count_all_routings(4) == 16 && count_all_routings(10) == 100'000'000;
    });

    check("constrained-space count n<=5", [](std::string& detail) {
        Rng rng(2024);
        std::uniform_int_distribution<int> level(-90, -40);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 3 + trial % 3;
            RssiVector gamma;
            for (std::size_t s = 1; s < n; ++s) {
                gamma.gamma.push_back(level(rng));
            }
            if (build_constrained_space(gamma).cardinality() != brute_force_trees(n, &gamma)) {
                detail = "mismatch on trial " + std::to_string(trial);
                return false;
            }
        }
        return true;
    });

    check("epsilon schedule", [](std::string&) {
        LearnerState state;
        MeasurementResult m;
        m.routing = RoutingVector::star(1);
        m.bottleneck_energy = 1.0;
        for (std::size_t t = 1; t <= 110; ++t) {
            update(state, m.routing, m, ActionKind::Explore);
            if (std::abs(state.epsilon - 1.0 / std::sqrt(static_cast<double>(t))) > 1e-12) {
                return false;
            }
        }
        return true;
    });

    check("energy formula spot checks", [](std::string&) {
        const RadioParams radio;
        StateTimes cpu;
        cpu.t_cpu = 1.0;
        StateTimes tx;
        tx.t_tx = 43.0 * 8.0 / 50'000.0;
        const double e_cpu = microprocessor_energy(cpu, 3.3, radio);
        const double e_tx = radio_energy(tx, 3.3, radio, 14.0);
        return std::abs(e_cpu - 42.9e-3) <= 1e-12 * 42.9e-3 && std::abs(e_tx - 3.3 * 0.061 * 6.88e-3) <= 1e-15;
    });

    if (deployment) {
        check("deployment invariants", [&](std::string&) {
            validate_deployment(*deployment);
            return true;
        });
        check("energy invariants on deployment", [&](std::string& detail) {
            const RadioParams& r = deployment->radio;
            for (double current : {r.i_cpu, r.i_lpm, r.i_rx, r.i_sl, r.i_tx_min, r.i_tx_max}) {
                if (!(current >= 0.0)) {
                    detail = "negative operational-state current";
                    return false;
                }
            }
            const std::size_t stations = deployment->station_count();
            const RoutingVector star = RoutingVector::star(stations);
            const LinkBudget links(*deployment, deployment->scene_seed);
            const std::vector<double> powers = link_tx_powers(*deployment, links, star);
            const std::vector<double> once(stations, 1.0);
            const std::vector<double> twice(stations, 2.0);
            const CycleReport a = account_cycle(*deployment, star, once, powers, true);
            const CycleReport b = account_cycle(*deployment, star, twice, powers, true);
            for (std::size_t i = 0; i < stations; ++i) {
                const auto& st = a.stations[i];
                if (!(st.energy >= 0.0) || recompute_energy(st, *deployment) != st.energy ||
                    b.stations[i].energy < st.energy) {
                    detail = "station " + std::to_string(i + 1);
                    return false;
                }
            }
            return true;
        });
        check("single-hop reachability", [&](std::string&) {
            estimate_rssi_vector(*deployment, deployment->scene_seed);
            return true;
        });
    }

    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace emh
