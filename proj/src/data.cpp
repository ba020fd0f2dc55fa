#include "fitkit/data.hpp"

#include <cmath>

namespace fitkit {

TimeSeries TimeSeries::build(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size()) {
        throw LengthMismatch("times and values differ in length (" +
                             std::to_string(times.size()) + " vs " +
                             std::to_string(values.size()) + ")");
    }
    if (times.empty()) {
        throw LengthMismatch("a series needs at least one observation");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
            throw NonFinite("non-finite entry at index " + std::to_string(i));
        }
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw NonMonotonicTime("times must be strictly increasing; violation at index " +
                                   std::to_string(i));
        }
    }
    return TimeSeries(std::move(times), std::move(values));
}

TimeSeries build_series(std::vector<double> times, std::vector<double> values) {
    return TimeSeries::build(std::move(times), std::move(values));
}

SummaryStats series_stats(const TimeSeries& s) {
    SummaryStats st;
    st.n = s.n();
    double sum = 0.0;
    for (double y : s.values()) sum += y;
    st.mean = sum / static_cast<double>(st.n);
    double sst = 0.0;
    for (double y : s.values()) {
        const double d = y - st.mean;
        sst += d * d;
    }
    st.sst = sst;
    return st;
}

}  // namespace fitkit
