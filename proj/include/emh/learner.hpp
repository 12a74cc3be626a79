#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "emh/model.hpp"
#include "emh/routing_space.hpp"
#include "emh/simulator.hpp"

namespace emh {

class MeasurementError : public Error {
public:
    using Error::Error;
};

enum class Policy { SingleHop, Emh };
enum class ActionKind { Explore, Exploit, Fixed };

std::string to_string(Policy p);
std::string to_string(ActionKind k);
Policy policy_from_string(const std::string& s);

/// What an exploit re-measurement does to the stored bottleneck estimate.
enum class ExploitUpdate {
    Average,  // exponential moving average with exploit_weight
    Freeze,   // keep the value from the single exploration
};

struct LearnerConfig {
    double epsilon0 = 1.0;
    // false keeps epsilon at epsilon0 forever.
    bool decay = true;
    ExploitUpdate exploit_update = ExploitUpdate::Average;
    double exploit_weight = 0.5;
    std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

struct HistoryEntry {
    std::size_t t = 0;
    RoutingVector routing;
    double bottleneck_energy = 0.0;
    ActionKind kind = ActionKind::Explore;
};

/// Epsilon-greedy state. A routing is explored iff it has a bottleneck
/// estimate; its payoff is the reciprocal of that estimate.
struct LearnerState {
    explicit LearnerState(LearnerConfig cfg = {}) : config(cfg), epsilon(cfg.epsilon0) {}

    LearnerConfig config;
    std::size_t t = 0;
    double epsilon;
    std::map<RoutingVector, double> bottleneck_estimates;
    std::vector<HistoryEntry> history;

    bool explored(const RoutingVector& r) const { return bottleneck_estimates.count(r) > 0; }
    /// 0 for unexplored routings.
    double payoff(const RoutingVector& r) const;
    std::set<RoutingVector> explored_set() const;
};

struct Action {
    RoutingVector routing;
    ActionKind kind = ActionKind::Explore;
};

/// Best explored routing inside the space: highest payoff, ties to the
/// lexicographically smallest vector. nullopt when nothing in the space is explored.
std::optional<RoutingVector> best_explored(const LearnerState& state, const ConstrainedSpace& space);

/// One uniform draw decides explore (below epsilon) or exploit. Exploration
/// is forced while nothing in the space is explored, exploitation once the
/// space is exhausted.
Action choose_action(const LearnerState& state, const ConstrainedSpace& space, Rng& rng);

/// Stores 1/e_b for r, appends to history, advances t and sets epsilon to
/// epsilon0 / sqrt(t) with the incremented t. Throws MeasurementError when
/// e_b <= 0 and std::invalid_argument when m does not belong to r.
void update(LearnerState& state, const RoutingVector& r, const MeasurementResult& m, ActionKind kind);

struct TraceEntry {
    std::size_t iteration = 0;  // 1-based
    ActionKind kind = ActionKind::Fixed;
    RoutingVector routing;
    std::optional<double> epsilon;  // value after this iteration's update; EMH only
    double bottleneck_energy = 0.0;
    NodeId bottleneck_station = 0;
    int failures = 0;
    std::vector<double> station_energy;  // K-cycle mean per station
    std::vector<CycleReport> cycles;     // only with keep_cycle_reports
};

struct ExperimentTrace {
    Policy policy = Policy::SingleHop;
    std::uint64_t seed = 0;
    int cycles_per_iteration = 0;
    std::vector<TraceEntry> entries;

    std::size_t size() const { return entries.size(); }
};

struct ExperimentOptions {
    LearnerConfig learner;
    bool keep_cycle_reports = false;
};

/// Runs T iterations: estimate RSSI, build the constrained space, pick a
/// routing (EMH) or the star (SH), measure it for K cycles, and update.
/// Identical inputs give identical traces.
ExperimentTrace run_experiment(const Deployment& d, Policy policy, std::size_t iterations, int cycles,
                               std::uint64_t seed, const ExperimentOptions& options = {});

struct RankedRouting {
    RoutingVector routing;
    double bottleneck_energy = 0.0;
};

/// Every constrained routing measured under the deterministic version of the
/// deployment's channel (no shadowing, no packet errors), best first by
/// payoff with ties to the lexicographically smallest vector.
/// Throws SpaceTooLargeError above limit.
std::vector<RankedRouting> rank_all_routings(const Deployment& d, int cycles,
                                             std::size_t limit = kDefaultEnumerationLimit);

/// The deployment with shadowing and packet errors switched off.
Deployment deterministic_channel(Deployment d);

void write_trace_csv(std::ostream& os, const ExperimentTrace& trace);

}  // namespace emh
