#pragma once

#include <cstddef>
#include <vector>

#include "fitkit/errors.hpp"

namespace fitkit {

// Ordered (t, y) observations. Times are strictly increasing and every
// entry is finite; instances are immutable once built.
class TimeSeries {
public:
    static TimeSeries build(std::vector<double> times, std::vector<double> values);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t n() const { return times_.size(); }

    double time(std::size_t i) const { return times_[i]; }
    double value(std::size_t i) const { return values_[i]; }

private:
    TimeSeries(std::vector<double> t, std::vector<double> y)
        : times_(std::move(t)), values_(std::move(y)) {}

    std::vector<double> times_;
    std::vector<double> values_;
};

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sst = 0.0;  // total sum of squares about the mean
};

TimeSeries build_series(std::vector<double> times, std::vector<double> values);
SummaryStats series_stats(const TimeSeries& s);

}  // namespace fitkit
