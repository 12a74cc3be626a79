#pragma once

#include <filesystem>
#include <string>

#include "emh/config.hpp"
#include "emh/model.hpp"

namespace emh::test {

inline std::filesystem::path config_path(const std::string& name)
{
    return std::filesystem::path(EMH_CONFIG_DIR) / name;
}

/// Gateway at the origin, stations on the x axis at the given distances.
inline Deployment line_deployment(std::initializer_list<double> xs)
{
    Deployment d;
    d.positions.push_back({0.0, 0.0});
    for (double x : xs) {
        d.positions.push_back({x, 0.0});
    }
    return d;
}

/// No shadowing, no packet errors.
inline Deployment deterministic(Deployment d)
{
    d.channel.shadowing_sigma = 0.0;
    d.channel.per_enabled = false;
    return d;
}

}  // namespace emh::test
