#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace emh {

using NodeId = std::size_t;
inline constexpr NodeId kGateway = 0;

/// Random engine shared by every stochastic operation. Callers own seeding.
using Rng = std::mt19937_64;

/// Derives an independent stream seed from a master seed and a run index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A routing vector or link list that does not describe a tree over the network.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A deployment violating one of its invariants; the message names the invariant.
class DeploymentError : public Error {
public:
    using Error::Error;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct RadioParams {
    double i_cpu = 13e-3;
    double i_lpm = 0.4e-6;
    double i_rx = 19e-3;
    double i_sl = 0.12e-6;
    // TX current is linear in dBm between these two points, anchored at the
    // lowest and highest power level.
    double i_tx_min = 39e-3;
    double i_tx_max = 61e-3;
    std::vector<double> tx_power_levels = default_power_levels();
    double data_rate = 50'000.0;
    double sensitivity = -95.0;

    double min_power() const { return tx_power_levels.front(); }
    double max_power() const { return tx_power_levels.back(); }

    /// -16..14 dBm in 1 dB steps.
    static std::vector<double> default_power_levels();
};

struct ChannelParams {
    double path_loss_exponent = 3.0;
    double reference_loss = 40.0;
    double shadowing_sigma = 0.0;
    double noise_floor = -110.0;
    double per_steepness = 0.5;
    // When false every link above sensitivity succeeds on its first attempt.
    bool per_enabled = true;
    double link_margin = 10.0;
    int max_retransmissions = 3;
    // Expected extra attempts per additional child sharing the same parent.
    double contention_alpha = 0.1;
};

/// X-MAC style per-transmission constants, in seconds.
struct TimingParams {
    double preamble_time = 0.050;
    double wake_window = 0.100;
    double processing_overhead = 0.010;
};

struct Deployment {
    std::vector<Position> positions;  // index 0 is the gateway
    double supply_voltage = 3.3;
    double battery_capacity_mah = 800.0;
    RadioParams radio;
    ChannelParams channel;
    TimingParams timing;
    double cycle_duration = 120.0;
    std::size_t payload_size = 43;
    int averaging_cycles = 10;
    // Seed of the frozen per-link shadowing realization (the static scene).
    std::uint64_t scene_seed = 1;
    // Charge one max-power association TX and one broadcast RX wake per iteration.
    bool association_cost = true;

    std::size_t node_count() const { return positions.size(); }
    std::size_t station_count() const { return positions.empty() ? 0 : positions.size() - 1; }
};

/// Checks every deployment invariant except single-hop reachability (which
/// depends on the channel realization). Throws DeploymentError.
void validate_deployment(const Deployment& d);

/// Parent assignment for stations 1..n-1; immutable, ordered lexicographically.
class RoutingVector {
public:
    RoutingVector() = default;
    explicit RoutingVector(std::vector<NodeId> parents) : parents_(std::move(parents)) {}

    /// The single-hop routing: every station's parent is the gateway.
    static RoutingVector star(std::size_t station_count);

    std::size_t station_count() const { return parents_.size(); }
    std::size_t node_count() const { return parents_.size() + 1; }
    std::span<const NodeId> parents() const { return parents_; }

    /// Throws std::out_of_range for s == 0 or s > station_count().
    NodeId parent_of(NodeId s) const;

    bool is_star() const;
    std::string to_string(char sep = ',') const;

    friend auto operator<=>(const RoutingVector&, const RoutingVector&) = default;
    friend bool operator==(const RoutingVector&, const RoutingVector&) = default;

private:
    std::vector<NodeId> parents_;
};

/// Gateway-perceived single-hop RSSI per station, entry s-1 for station s.
struct RssiVector {
    std::vector<double> gamma;

    double of(NodeId s) const { return gamma.at(s - 1); }
    std::size_t station_count() const { return gamma.size(); }
};

/// True iff r is an arborescence into the gateway over n nodes.
/// Throws StructuralError on length mismatch or out-of-range entries.
bool validate_routing(const RoutingVector& r, std::size_t n);

NodeId parent_of(const RoutingVector& r, NodeId s);

/// Stations whose parent is v, ascending.
std::vector<NodeId> children_of(const RoutingVector& r, NodeId v);

/// Hop count from s to the gateway. Requires a valid routing.
std::size_t depth_of(const RoutingVector& r, NodeId s);

/// Number of stations in the subtree rooted at s, excluding s.
std::vector<std::size_t> descendant_counts(const RoutingVector& r);

}  // namespace emh

template <>
struct std::hash<emh::RoutingVector> {
    std::size_t operator()(const emh::RoutingVector& r) const noexcept;
};
