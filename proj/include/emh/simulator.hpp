#pragma once

#include <cstdint>
#include <vector>

#include "emh/channel.hpp"
#include "emh/energy.hpp"
#include "emh/model.hpp"

namespace emh {

struct MeasurementResult {
    RoutingVector routing;
    std::vector<double> per_station_mean_energy;  // joules, entry s-1 for station s
    double bottleneck_energy = 0.0;               // max over stations of the K-cycle mean
    NodeId bottleneck_station = 0;
    std::vector<CycleReport> cycle_reports;
    int delivery_failures = 0;
    double delivery_failure_rate = 0.0;
};

/// Runs K operation cycles under routing r.
///
/// Link powers come from the frozen link budget; per-cycle attempt counts are
/// drawn from rng. Every link whose parent has f children carries
/// contention_alpha * (f - 1) extra expected attempts, capped at
/// 1 + max_retransmissions. When the deployment charges association cost,
/// it lands on the first cycle. Deterministic given the state of rng.
MeasurementResult measure_routing(const Deployment& d, const LinkBudget& links, const RoutingVector& r, int cycles,
                                  Rng& rng);

/// Convenience form over the deployment's own scene and a fresh stream.
MeasurementResult measure_routing(const Deployment& d, const RoutingVector& r, int cycles, std::uint64_t seed);

MeasurementResult measure_single_hop(const Deployment& d, const LinkBudget& links, int cycles, Rng& rng);
MeasurementResult measure_single_hop(const Deployment& d, int cycles, std::uint64_t seed);

/// Per-link transmission power under routing r, entry s-1 for station s.
std::vector<double> link_tx_powers(const Deployment& d, const LinkBudget& links, const RoutingVector& r);

}  // namespace emh
