#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fitkit/data.hpp"
#include "fitkit/errors.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/models.hpp"

namespace fitkit {

struct FitOptions {
    int max_iterations = 200;
    double cost_tolerance = 1e-10;   // relative SSE change on an accepted step
    double param_tolerance = 1e-10;  // relative step norm
    double initial_damping = 1e-3;
    double damping_up_factor = 10.0;
    double damping_down_factor = 10.0;
    double max_damping = 1e12;
    double sse_floor_rel = 1e-12;  // SSE below this fraction of SST counts as converged
    int starts = 20;
    double perturbation_scale = 0.5;  // relative spread of start perturbations
    std::uint64_t seed = 0;
};

enum class TerminationReason { cost_tol, param_tol, max_iter, damping_max, domain_failure };

const char* to_string(TerminationReason r);

struct FitResult {
    std::string model_id;
    ParamVector params;
    bool converged = false;
    int iterations = 0;
    double final_sse = 0.0;
    TerminationReason termination_reason = TerminationReason::max_iter;
    int start_index = 0;
    FitStatistics statistics;
    std::vector<double> sse_trace;  // SSE at the initial guess and after each accepted step
};

// Minimal surface the optimizer needs; catalog models and ad-hoc test
// models both adapt to it.
struct FitModel {
    std::string id;
    std::size_t k = 0;
    std::function<double(std::span<const double>, double)> eval;
};

FitModel fit_model(const std::string& id);

// r_i = y_i - f(params, t_i)
std::vector<double> residuals(const FitModel& m, std::span<const double> params,
                              const TimeSeries& s);
std::vector<double> residuals(const std::string& model_id, const ParamVector& params,
                              const TimeSeries& s);

// Central differences with step sqrt(eps)*max(|p_j|, 1); falls back to a
// one-sided difference when a probe leaves the model domain.
Eigen::MatrixXd jacobian_fd(const FitModel& m, std::span<const double> params,
                            const std::vector<double>& times);
Eigen::MatrixXd jacobian_fd(const std::string& model_id, const ParamVector& params,
                            const std::vector<double>& times);

// Damped Gauss-Newton (Levenberg-Marquardt) from a single start.
FitResult fit(const FitModel& m, const TimeSeries& s, std::span<const double> init,
              const FitOptions& opts);
FitResult fit(const std::string& model_id, const TimeSeries& s, const ParamVector& init,
              const FitOptions& opts);

// Deterministic multi-start: start 0 is the default guess, later starts
// scale each component by exp(u), u uniform in +-perturbation_scale, with
// one PRNG stream per (seed, start_index). Best final SSE wins; ties go
// to the lowest start index.
FitResult multi_start_fit(const std::string& model_id, const TimeSeries& s,
                          const FitOptions& opts);

}  // namespace fitkit
