#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "emh/model.hpp"

namespace emh {

/// Seconds spent per operational state. Microprocessor: CPU/LPM. Radio: RX/TX/SL.
struct StateTimes {
    double t_cpu = 0.0;
    double t_lpm = 0.0;
    double t_rx = 0.0;
    double t_tx = 0.0;
    double t_sl = 0.0;
};

/// V_DD (t_CPU I_CPU + t_LPM I_LPM). Throws std::invalid_argument on negative times.
double microprocessor_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio);

/// V_DD (t_RX I_RX + t_TX I_TX(p) + t_SL I_SL). Throws std::invalid_argument on
/// negative times or a power level that is not one of radio.tx_power_levels.
double radio_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio, double tx_power_dbm);

double station_energy(const StateTimes& t, double supply_voltage, const RadioParams& radio, double tx_power_dbm);

/// TX current at a configured power level, linear in dBm between the end levels.
double tx_current(const RadioParams& radio, double tx_power_dbm);

/// On-air time of a packet in seconds.
double airtime(std::size_t bytes, const RadioParams& radio);

struct StationCycle {
    StateTimes times;          // whole-cycle accounting, sums to cycle_duration
    double tx_power_dbm = 0.0;
    double attempts = 1.0;     // effective attempts, contention included
    double association_energy = 0.0;
    double energy = 0.0;       // station_energy(times, tx_power_dbm) + association_energy
    bool delivered = true;
};

struct CycleReport {
    std::vector<StationCycle> stations;  // entry s-1 for station s
    int delivery_failures = 0;

    double energy_of(NodeId s) const { return stations.at(s - 1).energy; }
};

/// Time-in-state bookkeeping for one cycle under routing r.
///
/// attempts[s-1] and tx_powers[s-1] describe the uplink of station s to its
/// parent. A station transmits one aggregate packet (its own payload plus all
/// descendant payloads) per attempt, each preceded by a strobed preamble; a
/// parent keeps its receiver on for one wake window plus the child's airtime
/// per child attempt. With association_phase set, one max-power single-hop
/// transmission and one broadcast reception are added on top and reported in
/// association_energy.
///
/// Throws StructuralError for an invalid routing or mismatched link lists, and
/// Error when the radio activity does not fit in the cycle.
CycleReport account_cycle(const Deployment& d, const RoutingVector& r, std::span<const double> attempts,
                          std::span<const double> tx_powers, bool association_phase = false);

/// Energy recomputed from a station's recorded times; equals its energy field.
double recompute_energy(const StationCycle& station, const Deployment& d);

void write_cycle_csv_header(std::ostream& os);
void write_cycle_csv_rows(std::ostream& os, std::size_t iteration, std::size_t cycle, const CycleReport& report);

}  // namespace emh
