#include "emh/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace emh {

std::vector<double> bottleneck_series(const ExperimentTrace& trace)
{
    std::vector<double> out;
    out.reserve(trace.size());
    for (const auto& e : trace.entries) {
        out.push_back(e.bottleneck_energy);
    }
    return out;
}

std::vector<double> historic_series(const ExperimentTrace& trace)
{
    std::vector<double> out;
    if (trace.entries.empty()) {
        return out;
    }
    std::vector<double> cumulative(trace.entries.front().station_energy.size(), 0.0);
    out.reserve(trace.size());
    for (const auto& e : trace.entries) {
        if (e.station_energy.size() != cumulative.size()) {
            throw std::invalid_argument("trace entries disagree on station count");
        }
        for (std::size_t s = 0; s < cumulative.size(); ++s) {
            cumulative[s] += e.station_energy[s];
        }
        out.push_back(*std::max_element(cumulative.begin(), cumulative.end()));
    }
    return out;
}

double historic_bottleneck(const ExperimentTrace& trace, std::size_t t)
{
    if (trace.entries.empty()) {
        throw std::invalid_argument("historic_bottleneck: empty trace");
    }
    if (t < 1 || t > trace.size()) {
        throw std::invalid_argument("historic_bottleneck: iteration outside the trace");
    }
    std::vector<double> cumulative(trace.entries.front().station_energy.size(), 0.0);
    for (std::size_t i = 0; i < t; ++i) {
        const auto& energies = trace.entries[i].station_energy;
        for (std::size_t s = 0; s < cumulative.size(); ++s) {
            cumulative[s] += energies.at(s);
        }
    }
    return *std::max_element(cumulative.begin(), cumulative.end());
}

double saving_ratio(double historic_sh, double historic_emh)
{
    if (historic_sh == 0.0) {
        throw std::domain_error("saving_ratio: single-hop historic bottleneck is zero");
    }
    return (historic_sh - historic_emh) / historic_sh;
}

double saving_ratio(const ExperimentTrace& sh, const ExperimentTrace& emh, std::size_t t)
{
    return saving_ratio(historic_bottleneck(sh, t), historic_bottleneck(emh, t));
}

std::vector<double> moving_average(const std::vector<double>& series, std::size_t window)
{
    if (window < 1) {
        throw std::invalid_argument("moving_average: window must be >= 1");
    }
    std::vector<double> out;
    out.reserve(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= window) {
            sum -= series[i - window];
        }
        const std::size_t count = std::min(window, i + 1);
        out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

std::optional<double> estimate_lifetime(const ExperimentTrace& trace, const Deployment& d, std::size_t window)
{
    if (trace.entries.empty()) {
        throw std::invalid_argument("estimate_lifetime: empty trace");
    }
    const std::vector<double> historic = historic_series(trace);
    const std::size_t t = historic.size();
    const std::size_t span = std::min(window, t);
    const double before = t > span ? historic[t - span - 1] : 0.0;
    const double increment = (historic.back() - before) / static_cast<double>(span);
    if (!(increment > 0.0)) {
        return std::nullopt;
    }
    const double battery_joules = d.battery_capacity_mah * 3.6 * d.supply_voltage;
    return battery_joules / increment;
}

ComparisonSeries compare(const ExperimentTrace& sh, const ExperimentTrace& emh, std::size_t window)
{
    const std::size_t t = std::min(sh.size(), emh.size());
    ComparisonSeries out;
    out.e_b_sh = bottleneck_series(sh);
    out.e_b_emh = bottleneck_series(emh);
    out.historic_sh = historic_series(sh);
    out.historic_emh = historic_series(emh);
    for (auto* v : {&out.e_b_sh, &out.e_b_emh, &out.historic_sh, &out.historic_emh}) {
        v->resize(t);
    }
    out.rho.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        out.rho.push_back(saving_ratio(out.historic_sh[i], out.historic_emh[i]));
    }
    out.e_b_emh_smoothed = moving_average(out.e_b_emh, window);
    return out;
}

void write_comparison_csv(std::ostream& os, const ComparisonSeries& series)
{
    os << "iteration,e_b_sh,e_b_emh,E_sh,E_emh,rho,e_b_emh_ma15\n";
    const auto old_precision = os.precision(9);
    for (std::size_t i = 0; i < series.size(); ++i) {
        os << (i + 1) << ',' << series.e_b_sh[i] << ',' << series.e_b_emh[i] << ',' << series.historic_sh[i] << ','
           << series.historic_emh[i] << ',' << series.rho[i] << ',' << series.e_b_emh_smoothed[i] << '\n';
    }
    os.precision(old_precision);
}

}  // namespace emh
