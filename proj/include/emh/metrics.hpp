#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "emh/learner.hpp"
#include "emh/model.hpp"

namespace emh {

inline constexpr std::size_t kMovingAverageWindow = 15;
inline constexpr std::size_t kLifetimeWindow = 30;

/// e_b(t) for t = 1..T.
std::vector<double> bottleneck_series(const ExperimentTrace& trace);

/// Historic bottleneck energy through iteration t (1-based): the largest
/// per-station cumulative sum of K-cycle mean energies. This is a max of
/// sums, never larger than the sum of per-iteration maxima.
/// Throws std::invalid_argument for an empty trace or t outside 1..T.
double historic_bottleneck(const ExperimentTrace& trace, std::size_t t);

/// historic_bottleneck for every t, in one pass.
std::vector<double> historic_series(const ExperimentTrace& trace);

/// (E_SH(t) - E_EMH(t)) / E_SH(t). Throws std::domain_error when E_SH(t) is 0.
double saving_ratio(const ExperimentTrace& sh, const ExperimentTrace& emh, std::size_t t);
double saving_ratio(double historic_sh, double historic_emh);

/// Trailing mean over the last min(window, available) entries.
std::vector<double> moving_average(const std::vector<double>& series, std::size_t window = kMovingAverageWindow);

/// Battery energy over the mean per-iteration growth of the historic
/// bottleneck across the trailing window, in iterations. nullopt when the
/// growth is zero (unbounded).
std::optional<double> estimate_lifetime(const ExperimentTrace& trace, const Deployment& d,
                                        std::size_t window = kLifetimeWindow);

struct ComparisonSeries {
    std::vector<double> e_b_sh;
    std::vector<double> e_b_emh;
    std::vector<double> historic_sh;
    std::vector<double> historic_emh;
    std::vector<double> rho;
    std::vector<double> e_b_emh_smoothed;

    std::size_t size() const { return rho.size(); }
};

/// Aligns two traces over their common length.
ComparisonSeries compare(const ExperimentTrace& sh, const ExperimentTrace& emh,
                         std::size_t window = kMovingAverageWindow);

void write_comparison_csv(std::ostream& os, const ComparisonSeries& series);

}  // namespace emh
