#pragma once

#include <cstdint>
#include <vector>

#include "emh/model.hpp"

namespace emh {

/// Log-distance received power: tx_power - reference_loss - 10 n log10(d) + shadowing.
/// Throws std::domain_error for coincident positions.
double rssi(const Position& tx, const Position& rx, double tx_power_dbm, const ChannelParams& params,
            double shadowing_db = 0.0);

/// Same, with a lognormal shadowing sample drawn from rng (nothing is drawn when sigma is 0).
double rssi(const Position& tx, const Position& rx, double tx_power_dbm, const ChannelParams& params, Rng& rng);

/// Frozen link budget of a static scene: every unordered node pair gets one
/// shadowing sample at construction, and all link RSSIs are quoted at the
/// radio's maximum power level.
class LinkBudget {
public:
    LinkBudget(const Deployment& d, std::uint64_t scene_seed);

    std::size_t node_count() const { return n_; }

    /// RSSI perceived at b when a transmits at maximum power. Symmetric.
    double rssi_at_max(NodeId a, NodeId b) const { return table_[a * n_ + b]; }

    /// Gateway-perceived RSSI of every station at maximum power.
    RssiVector gateway_rssi() const;

private:
    std::size_t n_;
    std::vector<double> table_;
};

/// Association-phase RSSI estimate: single-hop at maximum power. Throws
/// DeploymentError when a station cannot reach the gateway at maximum power.
RssiVector estimate_rssi_vector(const Deployment& d, std::uint64_t scene_seed);
RssiVector estimate_rssi_vector(const Deployment& d, const LinkBudget& links);

/// Smallest power level whose predicted receiver RSSI reaches
/// sensitivity + link_margin; the maximum level when none does.
double select_tx_power(double link_rssi_at_max, const ChannelParams& params, const RadioParams& radio);

/// Per-attempt delivery probability, logistic in the margin over sensitivity.
double success_probability(double link_rssi, const ChannelParams& params, double sensitivity);

struct TransmissionOutcome {
    int attempts = 1;
    bool delivered = true;
};

/// Attempts until the first success, truncated at 1 + max_retransmissions.
TransmissionOutcome draw_transmission_attempts(double link_rssi, const ChannelParams& params, double sensitivity,
                                               Rng& rng);

}  // namespace emh
