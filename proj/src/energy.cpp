#include "emh/energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace emh {

namespace {

void require_nonnegative(const StateTimes& t)
{
    if (t.t_cpu < 0.0 || t.t_lpm < 0.0 || t.t_rx < 0.0 || t.t_tx < 0.0 || t.t_sl < 0.0) {
        throw std::invalid_argument("state times must be nonnegative");
    }
}

}  // namespace

double tx_current(const RadioParams& radio, double tx_power_dbm)
{
    const auto& levels = radio.tx_power_levels;
    const bool known = std::any_of(levels.begin(), levels.end(),
                                   [&](double level) { return std::abs(level - tx_power_dbm) < 1e-9; });
    if (!known) {
        throw std::invalid_argument("unknown transmission power level " + std::to_string(tx_power_dbm) + " dBm");
    }
    const double lo = radio.min_power();
    const double hi = radio.max_power();
    if (hi == lo) {
        return radio.i_tx_max;
    }
    return radio.i_tx_min + (radio.i_tx_max - radio.i_tx_min) * (tx_power_dbm - lo) / (hi - lo);
}

double microprocessor_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio)
{
    require_nonnegative(t);
    return supply_voltage * (t.t_cpu * radio.i_cpu + t.t_lpm * radio.i_lpm);
}

double radio_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio, double tx_power_dbm)
{
    require_nonnegative(t);
    return supply_voltage * (t.t_rx * radio.i_rx + t.t_tx * tx_current(radio, tx_power_dbm) + t.t_sl * radio.i_sl);
}

double station_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio, double tx_power_dbm)
{
    return microprocessor_energy(t, supply_voltage, radio) + radio_energy(t, supply_voltage, radio, tx_power_dbm);
}

double airtime(std::size_t bytes, const RadioParams& radio)
{
    return static_cast<double>(bytes) * 8.0 / radio.data_rate;
}

CycleReport account_cycle(const Deployment& d, const RoutingVector& r, std::span<const double> attempts,
                          std::span<const double> tx_powers, bool association_phase)
{
    const std::size_t n = d.node_count();
    if (!validate_routing(r, n)) {
        throw StructuralError("account_cycle: routing is not a tree into the gateway");
    }
    if (attempts.size() != n - 1 || tx_powers.size() != n - 1) {
        throw StructuralError("account_cycle: link lists do not match the routing");
    }
    for (double a : attempts) {
        if (!(a >= 1.0)) {
            throw StructuralError("account_cycle: every link needs at least one attempt");
        }
    }

    const TimingParams& tm = d.timing;
    const std::vector<std::size_t> descendants = descendant_counts(r);
    auto aggregate_airtime = [&](NodeId s) { return airtime(d.payload_size * (1 + descendants[s]), d.radio); };

    StateTimes association;
    double association_energy = 0.0;
    if (association_phase) {
        association.t_tx = tm.preamble_time + airtime(d.payload_size, d.radio);
        association.t_rx = tm.wake_window;
        association_energy = radio_energy(association, d.supply_voltage, d.radio, d.radio.max_power());
    }

    CycleReport report;
    report.stations.resize(n - 1);
    std::vector<std::size_t> child_count(n, 0);
    for (NodeId s = 1; s < n; ++s) {
        ++child_count[r.parent_of(s)];
    }
    for (NodeId s = 1; s < n; ++s) {
        StationCycle& st = report.stations[s - 1];
        st.tx_power_dbm = tx_powers[s - 1];
        st.attempts = attempts[s - 1];
        st.times.t_tx = st.attempts * (tm.preamble_time + aggregate_airtime(s));
        st.times.t_cpu = tm.processing_overhead * static_cast<double>(1 + child_count[s]);
    }
    for (NodeId c = 1; c < n; ++c) {
        const NodeId parent = r.parent_of(c);
        if (parent != kGateway) {
            report.stations[parent - 1].times.t_rx += attempts[c - 1] * (tm.wake_window + aggregate_airtime(c));
        }
    }
    for (NodeId s = 1; s < n; ++s) {
        StationCycle& st = report.stations[s - 1];
        st.times.t_sl = d.cycle_duration - st.times.t_rx - st.times.t_tx;
        st.times.t_lpm = d.cycle_duration - st.times.t_cpu;
        if (st.times.t_sl < 0.0 || st.times.t_lpm < 0.0) {
            throw Error("station " + std::to_string(s) + " activity exceeds the cycle duration");
        }
        st.association_energy = association_energy;
        st.energy = station_energy(st.times, d.supply_voltage, d.radio, st.tx_power_dbm) + association_energy;
    }
    return report;
}

double recompute_energy(const StationCycle& station, const Deployment& d)
{
    return station_energy(station.times, d.supply_voltage, d.radio, station.tx_power_dbm) +
           station.association_energy;
}

void write_cycle_csv_header(std::ostream& os)
{
    os << "iteration,cycle,station,t_CPU,t_LPM,t_RX,t_TX,t_SL,tx_power_dbm,energy_J\n";
}

void write_cycle_csv_rows(std::ostream& os, std::size_t iteration, std::size_t cycle, const CycleReport& report)
{
    const auto old_precision = os.precision(9);
    for (std::size_t i = 0; i < report.stations.size(); ++i) {
        const StationCycle& st = report.stations[i];
        os << iteration << ',' << cycle << ',' << (i + 1) << ',' << st.times.t_cpu << ',' << st.times.t_lpm << ','
           << st.times.t_rx << ',' << st.times.t_tx << ',' << st.times.t_sl << ',' << st.tx_power_dbm << ','
           << st.energy << '\n';
    }
    os.precision(old_precision);
}

}  // namespace emh
