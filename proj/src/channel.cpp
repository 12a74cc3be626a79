#include "emh/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emh {

double rssi(const Position& tx, const Position& rx, double tx_power_dbm, const ChannelParams& params,
            double shadowing_db)
{
    const double d = distance(tx, rx);
    if (!(d > 0.0)) {
        throw std::domain_error("rssi: transmitter and receiver positions coincide");
    }
    return tx_power_dbm - params.reference_loss - 10.0 * params.path_loss_exponent * std::log10(d) + shadowing_db;
}

double rssi(const Position& tx, const Position& rx, double tx_power_dbm, const ChannelParams& params, Rng& rng)
{
    double shadowing = 0.0;
    if (params.shadowing_sigma > 0.0) {
        shadowing = std::normal_distribution<double>(0.0, params.shadowing_sigma)(rng);
    }
    return rssi(tx, rx, tx_power_dbm, params, shadowing);
}

LinkBudget::LinkBudget(const Deployment& d, std::uint64_t scene_seed)
    : n_(d.node_count()), table_(n_ * n_, 0.0)
{
    Rng rng(scene_seed);
    const double p_max = d.radio.max_power();
    for (NodeId a = 0; a < n_; ++a) {
        for (NodeId b = a + 1; b < n_; ++b) {
            const double value = rssi(d.positions[a], d.positions[b], p_max, d.channel, rng);
            table_[a * n_ + b] = value;
            table_[b * n_ + a] = value;
        }
    }
}

RssiVector LinkBudget::gateway_rssi() const
{
    RssiVector out;
    for (NodeId s = 1; s < n_; ++s) {
        out.gamma.push_back(rssi_at_max(s, kGateway));
    }
    return out;
}

RssiVector estimate_rssi_vector(const Deployment& d, const LinkBudget& links)
{
    RssiVector gamma = links.gateway_rssi();
    for (NodeId s = 1; s <= gamma.station_count(); ++s) {
        if (gamma.of(s) < d.radio.sensitivity) {
            throw DeploymentError("invalid deployment: station " + std::to_string(s) +
                                  " cannot reach the gateway single-hop at maximum power (RSSI " +
                                  std::to_string(gamma.of(s)) + " dBm below sensitivity)");
        }
    }
    return gamma;
}

RssiVector estimate_rssi_vector(const Deployment& d, std::uint64_t scene_seed)
{
    return estimate_rssi_vector(d, LinkBudget(d, scene_seed));
}

double select_tx_power(double link_rssi_at_max, const ChannelParams& params, const RadioParams& radio)
{
    const double required = radio.sensitivity + params.link_margin;
    const double p_max = radio.max_power();
    for (double level : radio.tx_power_levels) {
        if (link_rssi_at_max - (p_max - level) >= required) {
            return level;
        }
    }
    return p_max;
}

double success_probability(double link_rssi, const ChannelParams& params, double sensitivity)
{
    const double margin = link_rssi - sensitivity;
    if (!params.per_enabled) {
        return margin >= 0.0 ? 1.0 : 0.0;
    }
    return 1.0 / (1.0 + std::exp(-params.per_steepness * margin));
}

TransmissionOutcome draw_transmission_attempts(double link_rssi, const ChannelParams& params, double sensitivity,
                                               Rng& rng)
{
    const double q = success_probability(link_rssi, params, sensitivity);
    const int max_attempts = 1 + params.max_retransmissions;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (q >= 1.0 || uniform(rng) < q) {
            return {attempt, true};
        }
    }
    return {max_attempts, false};
}

}  // namespace emh
