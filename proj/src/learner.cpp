#include "emh/learner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "emh/channel.hpp"

namespace emh {

std::string to_string(Policy p)
{
    return p == Policy::SingleHop ? "SH" : "EMH";
}

std::string to_string(ActionKind k)
{
    switch (k) {
    case ActionKind::Explore:
        return "explore";
    case ActionKind::Exploit:
        return "exploit";
    case ActionKind::Fixed:
        return "fixed";
    }
    return "unknown";
}

Policy policy_from_string(const std::string& s)
{
    if (s == "SH" || s == "sh") {
        return Policy::SingleHop;
    }
    if (s == "EMH" || s == "emh") {
        return Policy::Emh;
    }
    throw std::invalid_argument("unknown policy '" + s + "' (expected SH or EMH)");
}

double LearnerState::payoff(const RoutingVector& r) const
{
    const auto it = bottleneck_estimates.find(r);
    return it == bottleneck_estimates.end() ? 0.0 : 1.0 / it->second;
}

std::set<RoutingVector> LearnerState::explored_set() const
{
    std::set<RoutingVector> out;
    for (const auto& [r, e] : bottleneck_estimates) {
        out.insert(out.end(), r);
    }
    return out;
}

std::optional<RoutingVector> best_explored(const LearnerState& state, const ConstrainedSpace& space)
{
    std::optional<RoutingVector> best;
    double best_payoff = 0.0;
    // Map order is lexicographic, so a strict comparison keeps the smallest vector on ties.
    for (const auto& [r, e_b] : state.bottleneck_estimates) {
        if (!space.contains(r)) {
            continue;
        }
        const double p = 1.0 / e_b;
        if (!best || p > best_payoff) {
            best = r;
            best_payoff = p;
        }
    }
    return best;
}

Action choose_action(const LearnerState& state, const ConstrainedSpace& space, Rng& rng)
{
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::optional<RoutingVector> best = best_explored(state, space);

    if (u < state.epsilon || !best) {
        if (auto fresh = sample_unexplored(space, state.explored_set(), rng, state.config.enumeration_limit)) {
            return {std::move(*fresh), ActionKind::Explore};
        }
        if (!best) {
            throw Error("choose_action: constrained space has neither explored nor unexplored routings");
        }
    }
    return {std::move(*best), ActionKind::Exploit};
}

void update(LearnerState& state, const RoutingVector& r, const MeasurementResult& m, ActionKind kind)
{
    if (m.routing != r) {
        throw std::invalid_argument("update: measurement belongs to routing " + m.routing.to_string() + ", not " +
                                    r.to_string());
    }
    if (!(m.bottleneck_energy > 0.0)) {
        throw MeasurementError("update: bottleneck energy must be positive");
    }

    auto it = state.bottleneck_estimates.find(r);
    if (it == state.bottleneck_estimates.end()) {
        state.bottleneck_estimates.emplace(r, m.bottleneck_energy);
    } else if (state.config.exploit_update == ExploitUpdate::Average) {
        const double w = state.config.exploit_weight;
        it->second = (1.0 - w) * it->second + w * m.bottleneck_energy;
    }

    ++state.t;
    state.history.push_back({state.t, r, m.bottleneck_energy, kind});
    state.epsilon = state.config.decay ? state.config.epsilon0 / std::sqrt(static_cast<double>(state.t))
                                       : state.config.epsilon0;
}

ExperimentTrace run_experiment(const Deployment& d, Policy policy, std::size_t iterations, int cycles,
                               std::uint64_t seed, const ExperimentOptions& options)
{
    if (iterations < 1) {
        throw std::invalid_argument("run_experiment needs T >= 1");
    }
    if (cycles < 1) {
        throw std::invalid_argument("run_experiment needs K >= 1");
    }
    validate_deployment(d);

    const LinkBudget links(d, d.scene_seed);
    Rng rng(seed);
    LearnerState state(options.learner);

    ExperimentTrace trace;
    trace.policy = policy;
    trace.seed = seed;
    trace.cycles_per_iteration = cycles;
    trace.entries.reserve(iterations);

    const RoutingVector star = RoutingVector::star(d.station_count());
    for (std::size_t i = 1; i <= iterations; ++i) {
        const RssiVector gamma = estimate_rssi_vector(d, links);

        Action action{star, ActionKind::Fixed};
        if (policy == Policy::Emh) {
            action = choose_action(state, build_constrained_space(gamma), rng);
        }

        MeasurementResult m = measure_routing(d, links, action.routing, cycles, rng);

        TraceEntry entry;
        entry.iteration = i;
        entry.kind = action.kind;
        entry.bottleneck_energy = m.bottleneck_energy;
        entry.bottleneck_station = m.bottleneck_station;
        entry.failures = m.delivery_failures;
        if (policy == Policy::Emh) {
            update(state, action.routing, m, action.kind);
            entry.epsilon = state.epsilon;
        }
        entry.routing = std::move(action.routing);
        entry.station_energy = std::move(m.per_station_mean_energy);
        if (options.keep_cycle_reports) {
            entry.cycles = std::move(m.cycle_reports);
        }
        trace.entries.push_back(std::move(entry));
    }
    return trace;
}

Deployment deterministic_channel(Deployment d)
{
    d.channel.shadowing_sigma = 0.0;
    d.channel.per_enabled = false;
    return d;
}

std::vector<RankedRouting> rank_all_routings(const Deployment& d, int cycles, std::size_t limit)
{
    const Deployment det = deterministic_channel(d);
    validate_deployment(det);
    const LinkBudget links(det, det.scene_seed);
    const ConstrainedSpace space = build_constrained_space(estimate_rssi_vector(det, links));

    std::vector<RankedRouting> ranked;
    for (auto& r : enumerate_constrained(space, limit)) {
        Rng rng(0);
        const MeasurementResult m = measure_routing(det, links, r, cycles, rng);
        ranked.push_back({std::move(r), m.bottleneck_energy});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedRouting& a, const RankedRouting& b) {
        const double pa = 1.0 / a.bottleneck_energy;
        const double pb = 1.0 / b.bottleneck_energy;
        if (pa != pb) {
            return pa > pb;
        }
        return a.routing < b.routing;
    });
    return ranked;
}

void write_trace_csv(std::ostream& os, const ExperimentTrace& trace)
{
    os << "iteration,action_kind,routing,eps,e_b_J,bottleneck_station,failures\n";
    const auto old_precision = os.precision();
    for (const TraceEntry& e : trace.entries) {
        os << e.iteration << ',' << to_string(e.kind) << ',' << e.routing.to_string(';') << ',';
        if (e.epsilon) {
            os << std::setprecision(17) << *e.epsilon;
        }
        os << ',' << std::setprecision(9) << e.bottleneck_energy << ',' << e.bottleneck_station << ',' << e.failures
           << '\n';
    }
    os.precision(old_precision);
}

}  // namespace emh
