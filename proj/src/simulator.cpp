#include "emh/simulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace emh {

std::vector<double> link_tx_powers(const Deployment& d, const LinkBudget& links, const RoutingVector& r)
{
    std::vector<double> powers(r.station_count());
    for (NodeId s = 1; s <= r.station_count(); ++s) {
        powers[s - 1] = select_tx_power(links.rssi_at_max(s, r.parent_of(s)), d.channel, d.radio);
    }
    return powers;
}

MeasurementResult measure_routing(const Deployment& d, const LinkBudget& links, const RoutingVector& r, int cycles,
                                  Rng& rng)
{
    const std::size_t n = d.node_count();
    if (!validate_routing(r, n)) {
        throw StructuralError("measure_routing: routing " + r.to_string() + " is not a tree into the gateway");
    }
    if (cycles < 1) {
        throw std::invalid_argument("measure_routing needs K >= 1");
    }
    const std::size_t stations = n - 1;
    const ChannelParams& ch = d.channel;

    const std::vector<double> powers = link_tx_powers(d, links, r);
    std::vector<double> link_rssi(stations);
    std::vector<double> contention(stations);
    std::vector<std::size_t> fan_in(n, 0);
    for (NodeId s = 1; s < n; ++s) {
        ++fan_in[r.parent_of(s)];
    }
    for (NodeId s = 1; s < n; ++s) {
        const NodeId parent = r.parent_of(s);
        link_rssi[s - 1] = links.rssi_at_max(s, parent) - (d.radio.max_power() - powers[s - 1]);
        contention[s - 1] = ch.contention_alpha * static_cast<double>(fan_in[parent] - 1);
    }
    const double max_attempts = 1.0 + ch.max_retransmissions;

    MeasurementResult result;
    result.routing = r;
    result.per_station_mean_energy.assign(stations, 0.0);
    result.cycle_reports.reserve(cycles);

    std::vector<double> attempts(stations);
    std::vector<bool> delivered(stations);
    for (int k = 0; k < cycles; ++k) {
        for (std::size_t i = 0; i < stations; ++i) {
            const TransmissionOutcome outcome = draw_transmission_attempts(link_rssi[i], ch, d.radio.sensitivity, rng);
            attempts[i] = std::min(outcome.attempts + contention[i], max_attempts);
            delivered[i] = outcome.delivered;
        }
        CycleReport report = account_cycle(d, r, attempts, powers, d.association_cost && k == 0);
        for (std::size_t i = 0; i < stations; ++i) {
            report.stations[i].delivered = delivered[i];
            if (!delivered[i]) {
                ++report.delivery_failures;
            }
            result.per_station_mean_energy[i] += report.stations[i].energy;
        }
        result.delivery_failures += report.delivery_failures;
        result.cycle_reports.push_back(std::move(report));
    }

    for (double& e : result.per_station_mean_energy) {
        e /= cycles;
    }
    const auto worst = std::max_element(result.per_station_mean_energy.begin(), result.per_station_mean_energy.end());
    result.bottleneck_energy = *worst;
    result.bottleneck_station = static_cast<NodeId>(worst - result.per_station_mean_energy.begin()) + 1;
    result.delivery_failure_rate =
        static_cast<double>(result.delivery_failures) / (static_cast<double>(cycles) * static_cast<double>(stations));
    return result;
}

MeasurementResult measure_routing(const Deployment& d, const RoutingVector& r, int cycles, std::uint64_t seed)
{
    const LinkBudget links(d, d.scene_seed);
    Rng rng(seed);
    return measure_routing(d, links, r, cycles, rng);
}

MeasurementResult measure_single_hop(const Deployment& d, const LinkBudget& links, int cycles, Rng& rng)
{
    return measure_routing(d, links, RoutingVector::star(d.station_count()), cycles, rng);
}

MeasurementResult measure_single_hop(const Deployment& d, int cycles, std::uint64_t seed)
{
    return measure_routing(d, RoutingVector::star(d.station_count()), cycles, seed);
}

}  // namespace emh
