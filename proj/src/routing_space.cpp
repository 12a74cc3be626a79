#include "emh/routing_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace emh {

BigCount count_all_routings(std::size_t n)
{
    if (n < 2) {
        throw std::invalid_argument("count_all_routings needs n >= 2");
    }
    BigCount result = 1;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        result *= n;
    }
    return result;
}

ConstrainedSpace::ConstrainedSpace(const RssiVector& gamma)
{
    const std::size_t stations = gamma.station_count();
    order_.resize(stations);
    std::iota(order_.begin(), order_.end(), NodeId{1});
    std::sort(order_.begin(), order_.end(), [&](NodeId a, NodeId b) {
        if (gamma.of(a) != gamma.of(b)) {
            return gamma.of(a) > gamma.of(b);
        }
        return a < b;
    });

    rank_.assign(stations + 1, 0);
    for (std::size_t i = 0; i < stations; ++i) {
        rank_[order_[i]] = i + 1;
    }

    candidates_.resize(stations);
    cardinality_ = 1;
    for (NodeId s = 1; s <= stations; ++s) {
        auto& cands = candidates_[s - 1];
        cands.push_back(kGateway);
        for (std::size_t i = 0; i + 1 < rank_[s]; ++i) {
            cands.push_back(order_[i]);
        }
        cardinality_ *= cands.size();
    }
}

bool ConstrainedSpace::contains(const RoutingVector& r) const
{
    if (r.station_count() != station_count()) {
        return false;
    }
    const auto parents = r.parents();
    for (NodeId s = 1; s <= parents.size(); ++s) {
        const NodeId p = parents[s - 1];
        if (p == kGateway) {
            continue;
        }
        if (p > station_count() || rank_[p] >= rank_[s]) {
            return false;
        }
    }
    return true;
}

RoutingVector ConstrainedSpace::draw(Rng& rng) const
{
    std::vector<NodeId> parents(station_count());
    for (NodeId s = 1; s <= station_count(); ++s) {
        const auto& cands = candidates_[s - 1];
        std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
        parents[s - 1] = cands[pick(rng)];
    }
    return RoutingVector(std::move(parents));
}

ConstrainedSpace build_constrained_space(const RssiVector& gamma)
{
    return ConstrainedSpace(gamma);
}

SpaceTooLargeError::SpaceTooLargeError(const BigCount& cardinality, std::size_t limit)
    : Error("constrained space holds " + cardinality.str() + " routings, above the enumeration limit of " +
            std::to_string(limit)),
      cardinality_(cardinality)
{
}

std::vector<RoutingVector> enumerate_constrained(const ConstrainedSpace& space, std::size_t limit)
{
    if (!space.enumerable(limit)) {
        throw SpaceTooLargeError(space.cardinality(), limit);
    }
    const std::size_t stations = space.station_count();
    std::vector<RoutingVector> out;
    out.reserve(space.cardinality().convert_to<std::size_t>());

    // Odometer over candidate indices, last station fastest.
    std::vector<std::size_t> digit(stations, 0);
    std::vector<NodeId> parents(stations, kGateway);
    while (true) {
        for (NodeId s = 1; s <= stations; ++s) {
            parents[s - 1] = space.candidate_parents(s)[digit[s - 1]];
        }
        out.emplace_back(parents);

        std::size_t pos = stations;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < space.candidate_parents(pos + 1).size()) {
                break;
            }
            digit[pos] = 0;
            if (pos == 0) {
                return out;
            }
        }
        if (stations == 0) {
            return out;
        }
    }
}

std::optional<RoutingVector> sample_unexplored(const ConstrainedSpace& space, const std::set<RoutingVector>& explored,
                                               Rng& rng, std::size_t enumeration_limit)
{
    const auto explored_in_space = static_cast<std::size_t>(
        std::count_if(explored.begin(), explored.end(), [&](const RoutingVector& r) { return space.contains(r); }));
    if (space.cardinality() == explored_in_space) {
        return std::nullopt;
    }

    if (space.enumerable(enumeration_limit) && 2 * BigCount(explored_in_space) > space.cardinality()) {
        std::vector<RoutingVector> complement;
        for (auto& r : enumerate_constrained(space, enumeration_limit)) {
            if (!explored.count(r)) {
                complement.push_back(std::move(r));
            }
        }
        std::uniform_int_distribution<std::size_t> pick(0, complement.size() - 1);
        return complement[pick(rng)];
    }

    while (true) {
        RoutingVector candidate = space.draw(rng);
        if (!explored.count(candidate)) {
            return candidate;
        }
    }
}

}  // namespace emh
