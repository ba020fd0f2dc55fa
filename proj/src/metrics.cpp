#include "fitkit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fitkit/solver.hpp"

namespace fitkit {

double sse(const std::vector<double>& residuals) {
    if (residuals.empty()) throw EmptyResiduals("sse of an empty residual vector");
    double acc = 0.0;
    for (double r : residuals) acc += r * r;
    return acc;
}

double r_squared(double sse, double sst) {
    if (!(sst > 0.0)) throw ZeroVariance("sst must be positive for R^2");
    return 1.0 - sse / sst;
}

std::size_t dfe(std::size_t n, std::size_t k) {
    if (n <= k) throw NonPositiveDfe("n must exceed k for a positive dfe");
    return n - k;
}

double rmse(double sse, std::size_t dfe) {
    if (dfe < 1) throw NonPositiveDfe("rmse needs dfe >= 1");
    return std::sqrt(sse / static_cast<double>(dfe));
}

double adj_r_squared(double r2, std::size_t n, std::size_t dfe) {
    if (dfe < 1) throw NonPositiveDfe("adjusted R^2 needs dfe >= 1");
    return 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(dfe);
}

FitStatistics make_statistics(double sse_value, double sst, std::size_t n, std::size_t k) {
    FitStatistics st;
    st.sse = sse_value;
    st.sst = sst;
    st.n = n;
    st.k = k;
    st.dfe = dfe(n, k);
    st.r_squared = r_squared(sse_value, sst);
    st.adj_r_squared = adj_r_squared(st.r_squared, n, st.dfe);
    st.rmse = rmse(sse_value, st.dfe);
    return st;
}

FitStatistics fit_statistics(const std::string& model_id, const ParamVector& params,
                             const TimeSeries& s) {
    const auto r = residuals(model_id, params, s);
    const auto stats = series_stats(s);
    return make_statistics(sse(r), stats.sst, s.n(), model(model_id).k());
}

std::vector<FitResult> rank_models(std::vector<FitResult> results) {
    if (results.empty()) throw EmptyResiduals("rank_models on an empty result list");
    const std::size_t n0 = results.front().statistics.n;
    const double sst0 = results.front().statistics.sst;
    for (const auto& r : results) {
        const double rel = std::abs(r.statistics.sst - sst0) /
                           std::max(std::abs(sst0), std::numeric_limits<double>::min());
        if (r.statistics.n != n0 || rel > 1e-12) {
            throw MixedDatasets("fit results describe different datasets");
        }
    }
    std::sort(results.begin(), results.end(), [](const FitResult& a, const FitResult& b) {
        if (a.statistics.adj_r_squared != b.statistics.adj_r_squared) {
            return a.statistics.adj_r_squared > b.statistics.adj_r_squared;
        }
        if (a.statistics.rmse != b.statistics.rmse) {
            return a.statistics.rmse < b.statistics.rmse;
        }
        return a.model_id < b.model_id;
    });
    return results;
}

}  // namespace fitkit
