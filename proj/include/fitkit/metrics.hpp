#pragma once

#include <cstddef>
#include <vector>

#include "fitkit/data.hpp"
#include "fitkit/errors.hpp"
#include "fitkit/models.hpp"

namespace fitkit {

struct FitResult;

struct FitStatistics {
    double sse = 0.0;
    double sst = 0.0;
    double r_squared = 0.0;
    std::size_t dfe = 0;
    double adj_r_squared = 0.0;
    double rmse = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
};

double sse(const std::vector<double>& residuals);
double r_squared(double sse, double sst);
std::size_t dfe(std::size_t n, std::size_t k);
double rmse(double sse, std::size_t dfe);
double adj_r_squared(double r2, std::size_t n, std::size_t dfe);

// The five statistics from raw ingredients.
FitStatistics make_statistics(double sse, double sst, std::size_t n, std::size_t k);

FitStatistics fit_statistics(const std::string& model_id, const ParamVector& params,
                             const TimeSeries& s);

// Sorted by adjusted R^2 descending, ties by lower RMSE then model id.
// All results must describe the same dataset (same n, same sst).
std::vector<FitResult> rank_models(std::vector<FitResult> results);

}  // namespace fitkit
