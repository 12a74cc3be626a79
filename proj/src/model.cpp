#include "emh/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emh {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t out[2];
    seq.generate(std::begin(out), std::end(out));
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<double> RadioParams::default_power_levels()
{
    std::vector<double> levels;
    for (int p = -16; p <= 14; ++p) {
        levels.push_back(static_cast<double>(p));
    }
    return levels;
}

void validate_deployment(const Deployment& d)
{
    auto fail = [](const std::string& what) { throw DeploymentError("invalid deployment: " + what); };

    if (d.positions.size() < 2) {
        fail("n >= 2 (at least one station besides the gateway)");
    }
    if (!(d.cycle_duration > 0.0)) {
        fail("cycle_duration > 0");
    }
    if (d.payload_size == 0) {
        fail("payload_size > 0");
    }
    if (d.averaging_cycles < 1) {
        fail("averaging_cycles K >= 1");
    }
    if (!(d.supply_voltage > 0.0)) {
        fail("supply_voltage > 0");
    }
    if (!(d.battery_capacity_mah > 0.0)) {
        fail("battery_capacity > 0");
    }

    const RadioParams& radio = d.radio;
    for (double current : {radio.i_cpu, radio.i_lpm, radio.i_rx, radio.i_sl, radio.i_tx_min, radio.i_tx_max}) {
        if (!(current >= 0.0) || !std::isfinite(current)) {
            fail("operational-state currents must be finite and nonnegative");
        }
    }
    if (radio.i_tx_max < radio.i_tx_min) {
        fail("I_TX must be nondecreasing in transmission power");
    }
    if (radio.tx_power_levels.empty()) {
        fail("tx_power_levels nonempty");
    }
    if (!std::is_sorted(radio.tx_power_levels.begin(), radio.tx_power_levels.end()) ||
        std::adjacent_find(radio.tx_power_levels.begin(), radio.tx_power_levels.end()) !=
            radio.tx_power_levels.end()) {
        fail("tx_power_levels sorted strictly ascending");
    }
    if (!(radio.data_rate > 0.0)) {
        fail("data_rate > 0");
    }

    const ChannelParams& ch = d.channel;
    if (!(ch.shadowing_sigma >= 0.0)) {
        fail("shadowing_sigma >= 0");
    }
    if (ch.max_retransmissions < 0) {
        fail("max_retransmissions >= 0");
    }
    if (!(ch.path_loss_exponent > 0.0)) {
        fail("path_loss_exponent > 0");
    }
    if (!(ch.per_steepness > 0.0)) {
        fail("per_steepness > 0");
    }
    if (!(ch.contention_alpha >= 0.0)) {
        fail("contention_alpha >= 0");
    }

    const TimingParams& tm = d.timing;
    if (!(tm.preamble_time >= 0.0) || !(tm.wake_window >= 0.0) || !(tm.processing_overhead >= 0.0)) {
        fail("timing constants >= 0");
    }

    for (std::size_t i = 0; i < d.positions.size(); ++i) {
        for (std::size_t j = i + 1; j < d.positions.size(); ++j) {
            if (distance(d.positions[i], d.positions[j]) <= 0.0) {
                fail("node positions distinct (nodes " + std::to_string(i) + " and " + std::to_string(j) + ")");
            }
        }
    }
}

RoutingVector RoutingVector::star(std::size_t station_count)
{
    return RoutingVector(std::vector<NodeId>(station_count, kGateway));
}

NodeId RoutingVector::parent_of(NodeId s) const
{
    if (s == kGateway) {
        throw std::out_of_range("gateway has no parent");
    }
    if (s > parents_.size()) {
        throw std::out_of_range("station " + std::to_string(s) + " not in routing");
    }
    return parents_[s - 1];
}

bool RoutingVector::is_star() const
{
    return std::all_of(parents_.begin(), parents_.end(), [](NodeId p) { return p == kGateway; });
}

std::string RoutingVector::to_string(char sep) const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < parents_.size(); ++i) {
        if (i) {
            os << sep;
        }
        os << parents_[i];
    }
    return os.str();
}

bool validate_routing(const RoutingVector& r, std::size_t n)
{
    if (n < 2 || r.station_count() != n - 1) {
        throw StructuralError("routing length " + std::to_string(r.station_count()) + " does not match " +
                              std::to_string(n) + " nodes");
    }
    const auto parents = r.parents();
    for (NodeId p : parents) {
        if (p >= n) {
            throw StructuralError("parent id " + std::to_string(p) + " out of range");
        }
    }

    // 0 = unvisited, 1 = on current walk, 2 = known to reach the gateway.
    std::vector<int> state(n, 0);
    state[kGateway] = 2;
    std::vector<NodeId> walk;
    for (NodeId s = 1; s < n; ++s) {
        walk.clear();
        NodeId v = s;
        while (state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = parents[v - 1];
        }
        if (state[v] == 1) {
            return false;
        }
        for (NodeId w : walk) {
            state[w] = 2;
        }
    }
    return true;
}

NodeId parent_of(const RoutingVector& r, NodeId s)
{
    return r.parent_of(s);
}

std::vector<NodeId> children_of(const RoutingVector& r, NodeId v)
{
    std::vector<NodeId> out;
    const auto parents = r.parents();
    for (std::size_t i = 0; i < parents.size(); ++i) {
        if (parents[i] == v) {
            out.push_back(i + 1);
        }
    }
    return out;
}

std::size_t depth_of(const RoutingVector& r, NodeId s)
{
    std::size_t depth = 0;
    for (NodeId v = s; v != kGateway; v = r.parent_of(v)) {
        if (++depth > r.station_count()) {
            throw StructuralError("routing contains a cycle");
        }
    }
    return depth;
}

std::vector<std::size_t> descendant_counts(const RoutingVector& r)
{
    const std::size_t n = r.node_count();
    std::vector<std::size_t> counts(n, 0);
    for (NodeId s = 1; s < n; ++s) {
        std::size_t hops = 0;
        for (NodeId v = r.parent_of(s); v != kGateway; v = r.parent_of(v)) {
            ++counts[v];
            if (++hops > n) {
                throw StructuralError("routing contains a cycle");
            }
        }
    }
    return counts;
}

}  // namespace emh

std::size_t std::hash<emh::RoutingVector>::operator()(const emh::RoutingVector& r) const noexcept
{
    // FNV-1a over the parent ids.
    std::size_t h = 1469598103934665603ULL;
    for (emh::NodeId p : r.parents()) {
        h ^= p;
        h *= 1099511628211ULL;
    }
    return h;
}
