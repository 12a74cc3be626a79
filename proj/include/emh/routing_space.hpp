#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "emh/model.hpp"

namespace emh {

using BigCount = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultEnumerationLimit = 10'080;

/// Number of labeled trees on n vertices, n^(n-2). Throws std::invalid_argument for n < 2.
BigCount count_all_routings(std::size_t n);

/// The RSSI-constrained routing set. Stations are ranked by gateway RSSI,
/// strongest first, ties going to the lower id; a station may only hang off
/// the gateway or a strictly higher-ranked station. Under that strict order
/// every independent choice of parents is acyclic, so the set is a product
/// space and its size is the product of the candidate-set sizes.
class ConstrainedSpace {
public:
    explicit ConstrainedSpace(const RssiVector& gamma);

    std::size_t station_count() const { return order_.size(); }
    std::size_t node_count() const { return order_.size() + 1; }

    /// Stations strongest first.
    const std::vector<NodeId>& order() const { return order_; }

    /// 1-based position of station s in order().
    std::size_t rank_of(NodeId s) const { return rank_.at(s); }

    /// Gateway first, then allowed stations in rank order.
    const std::vector<NodeId>& candidate_parents(NodeId s) const { return candidates_.at(s - 1); }

    const BigCount& cardinality() const { return cardinality_; }

    /// Whether the cardinality fits under limit.
    bool enumerable(std::size_t limit) const { return cardinality_ <= limit; }

    /// Membership test; false for routings of the wrong length.
    bool contains(const RoutingVector& r) const;

    /// One routing drawn uniformly from the whole space.
    RoutingVector draw(Rng& rng) const;

private:
    std::vector<NodeId> order_;
    std::vector<std::size_t> rank_;  // indexed by NodeId, rank_[0] = 0
    std::vector<std::vector<NodeId>> candidates_;
    BigCount cardinality_;
};

ConstrainedSpace build_constrained_space(const RssiVector& gamma);

/// Enumeration refused because the space holds more routings than allowed.
class SpaceTooLargeError : public Error {
public:
    SpaceTooLargeError(const BigCount& cardinality, std::size_t limit);
    const BigCount& cardinality() const { return cardinality_; }

private:
    BigCount cardinality_;
};

/// Every routing of the space once, lexicographic in candidate indices with
/// station 1 as the most significant digit.
std::vector<RoutingVector> enumerate_constrained(const ConstrainedSpace& space,
                                                 std::size_t limit = kDefaultEnumerationLimit);

/// Uniform draw over space \ explored, or nullopt when every routing of the
/// space has been explored. Rejection-samples the product space; once more
/// than half of an enumerable space is explored it draws from the explicit
/// complement instead.
std::optional<RoutingVector> sample_unexplored(const ConstrainedSpace& space, const std::set<RoutingVector>& explored,
                                               Rng& rng, std::size_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace emh
