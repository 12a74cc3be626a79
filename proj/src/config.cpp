#include "emh/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace emh {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> known)
{
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw DeploymentError(std::string("unknown key '") + item.key() + "' in " + where);
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end()) {
        out = it->get<T>();
    }
}

RadioParams radio_from_json(const json& j)
{
    reject_unknown(j, "radio",
                   {"i_cpu", "i_lpm", "i_rx", "i_sl", "i_tx_min", "i_tx_max", "tx_power_levels", "data_rate",
                    "sensitivity"});
    RadioParams r;
    read(j, "i_cpu", r.i_cpu);
    read(j, "i_lpm", r.i_lpm);
    read(j, "i_rx", r.i_rx);
    read(j, "i_sl", r.i_sl);
    read(j, "i_tx_min", r.i_tx_min);
    read(j, "i_tx_max", r.i_tx_max);
    read(j, "data_rate", r.data_rate);
    read(j, "sensitivity", r.sensitivity);
    if (auto it = j.find("tx_power_levels"); it != j.end()) {
        if (it->is_array()) {
            r.tx_power_levels = it->get<std::vector<double>>();
        } else {
            // {"min": -16, "max": 14, "step": 1}
            const double lo = it->at("min").get<double>();
            const double hi = it->at("max").get<double>();
            const double step = it->value("step", 1.0);
            if (!(step > 0.0) || hi < lo) {
                throw DeploymentError("tx_power_levels range needs step > 0 and max >= min");
            }
            r.tx_power_levels.clear();
            for (int i = 0; lo + i * step <= hi + 1e-9; ++i) {
                r.tx_power_levels.push_back(lo + i * step);
            }
        }
    }
    return r;
}

ChannelParams channel_from_json(const json& j)
{
    reject_unknown(j, "channel",
                   {"path_loss_exponent", "reference_loss", "shadowing_sigma", "noise_floor", "per_steepness",
                    "per_enabled", "link_margin", "max_retransmissions", "contention_alpha"});
    ChannelParams c;
    read(j, "path_loss_exponent", c.path_loss_exponent);
    read(j, "reference_loss", c.reference_loss);
    read(j, "shadowing_sigma", c.shadowing_sigma);
    read(j, "noise_floor", c.noise_floor);
    read(j, "per_steepness", c.per_steepness);
    read(j, "per_enabled", c.per_enabled);
    read(j, "link_margin", c.link_margin);
    read(j, "max_retransmissions", c.max_retransmissions);
    read(j, "contention_alpha", c.contention_alpha);
    return c;
}

TimingParams timing_from_json(const json& j)
{
    reject_unknown(j, "timing", {"preamble_time", "wake_window", "processing_overhead"});
    TimingParams t;
    read(j, "preamble_time", t.preamble_time);
    read(j, "wake_window", t.wake_window);
    read(j, "processing_overhead", t.processing_overhead);
    return t;
}

}  // namespace

Deployment deployment_from_json(const json& j, bool check_invariants)
{
    if (!j.is_object()) {
        throw DeploymentError("deployment must be a JSON object");
    }
    reject_unknown(j, "deployment",
                   {"positions", "supply_voltage", "battery_capacity_mah", "radio", "channel", "timing",
                    "cycle_duration", "payload_size", "averaging_cycles", "scene_seed", "association_cost",
                    "description"});
    Deployment d;
    try {
        for (const auto& p : j.at("positions")) {
            if (!p.is_array() || p.size() != 2) {
                throw DeploymentError("each position must be an [x, y] pair");
            }
            d.positions.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        read(j, "supply_voltage", d.supply_voltage);
        read(j, "battery_capacity_mah", d.battery_capacity_mah);
        read(j, "cycle_duration", d.cycle_duration);
        read(j, "payload_size", d.payload_size);
        read(j, "averaging_cycles", d.averaging_cycles);
        read(j, "scene_seed", d.scene_seed);
        read(j, "association_cost", d.association_cost);
        if (auto it = j.find("radio"); it != j.end()) {
            d.radio = radio_from_json(*it);
        }
        if (auto it = j.find("channel"); it != j.end()) {
            d.channel = channel_from_json(*it);
        }
        if (auto it = j.find("timing"); it != j.end()) {
            d.timing = timing_from_json(*it);
        }
    } catch (const json::exception& e) {
        throw DeploymentError(std::string("malformed deployment: ") + e.what());
    }
    if (check_invariants) {
        validate_deployment(d);
    }
    return d;
}

json deployment_to_json(const Deployment& d)
{
    json positions = json::array();
    for (const auto& p : d.positions) {
        positions.push_back({p.x, p.y});
    }
    const RadioParams& r = d.radio;
    const ChannelParams& c = d.channel;
    const TimingParams& t = d.timing;
    return {
        {"positions", positions},
        {"supply_voltage", d.supply_voltage},
        {"battery_capacity_mah", d.battery_capacity_mah},
        {"cycle_duration", d.cycle_duration},
        {"payload_size", d.payload_size},
        {"averaging_cycles", d.averaging_cycles},
        {"scene_seed", d.scene_seed},
        {"association_cost", d.association_cost},
        {"radio",
         {{"i_cpu", r.i_cpu},
          {"i_lpm", r.i_lpm},
          {"i_rx", r.i_rx},
          {"i_sl", r.i_sl},
          {"i_tx_min", r.i_tx_min},
          {"i_tx_max", r.i_tx_max},
          {"tx_power_levels", r.tx_power_levels},
          {"data_rate", r.data_rate},
          {"sensitivity", r.sensitivity}}},
        {"channel",
         {{"path_loss_exponent", c.path_loss_exponent},
          {"reference_loss", c.reference_loss},
          {"shadowing_sigma", c.shadowing_sigma},
          {"noise_floor", c.noise_floor},
          {"per_steepness", c.per_steepness},
          {"per_enabled", c.per_enabled},
          {"link_margin", c.link_margin},
          {"max_retransmissions", c.max_retransmissions},
          {"contention_alpha", c.contention_alpha}}},
        {"timing",
         {{"preamble_time", t.preamble_time},
          {"wake_window", t.wake_window},
          {"processing_overhead", t.processing_overhead}}},
    };
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("cannot parse '" + path.string() + "': " + e.what());
    }
}

Deployment load_deployment(const std::filesystem::path& path, bool check_invariants)
{
    const json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("deployment")) {
        return deployment_from_json(doc.at("deployment"), check_invariants);
    }
    return deployment_from_json(doc, check_invariants);
}

json routing_to_json(const RoutingVector& r)
{
    const auto parents = r.parents();
    return json(std::vector<NodeId>(parents.begin(), parents.end()));
}

RoutingVector routing_from_json(const json& j)
{
    if (!j.is_array()) {
        throw StructuralError("routing must be an integer array");
    }
    std::vector<NodeId> parents;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw StructuralError("routing entries must be nonnegative integers");
        }
        parents.push_back(v.get<NodeId>());
    }
    return RoutingVector(std::move(parents));
}

}  // namespace emh
