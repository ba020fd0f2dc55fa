#include "fitkit/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "fitkit/rng.hpp"

namespace fitkit {

namespace {

double sum_of_squares(const std::vector<double>& r) {
    double acc = 0.0;
    for (double v : r) acc += v * v;
    return acc;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Residuals for a trial point; nullopt when the point is unusable
// (domain violation or overflow), which the caller treats as a rejected step.
std::optional<std::vector<double>> try_residuals(const FitModel& m, std::span<const double> p,
                                                 const TimeSeries& s) {
    try {
        auto r = residuals(m, p, s);
        if (!all_finite(r)) return std::nullopt;
        return r;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::cost_tol: return "cost_tol";
        case TerminationReason::param_tol: return "param_tol";
        case TerminationReason::max_iter: return "max_iter";
        case TerminationReason::damping_max: return "damping_max";
        case TerminationReason::domain_failure: return "domain_failure";
    }
    return "unknown";
}

FitModel fit_model(const std::string& id) {
    const ModelSpec& spec = model(id);
    return FitModel{spec.id, spec.k(), spec.eval};
}

std::vector<double> residuals(const FitModel& m, std::span<const double> params,
                              const TimeSeries& s) {
    std::vector<double> out;
    out.reserve(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) {
        try {
            out.push_back(s.value(i) - m.eval(params, s.time(i)));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (index " + std::to_string(i) + ")",
                              s.time(i));
        }
    }
    return out;
}

std::vector<double> residuals(const std::string& model_id, const ParamVector& params,
                              const TimeSeries& s) {
    return residuals(fit_model(model_id), params.values(), s);
}

Eigen::MatrixXd jacobian_fd(const FitModel& m, std::span<const double> params,
                            const std::vector<double>& times) {
    const auto n = static_cast<Eigen::Index>(times.size());
    const auto k = static_cast<Eigen::Index>(m.k);
    Eigen::MatrixXd J(n, k);
    std::vector<double> p(params.begin(), params.end());

    auto column = [&](const std::vector<double>& probe) {
        std::vector<double> vals(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) vals[i] = m.eval(probe, times[i]);
        return vals;
    };

    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    std::optional<std::vector<double>> base;  // only evaluated for one-sided fallback
    for (Eigen::Index j = 0; j < k; ++j) {
        const double pj = p[static_cast<std::size_t>(j)];
        const double h = sqrt_eps * std::max(std::abs(pj), 1.0);
        std::optional<std::vector<double>> plus, minus;
        p[static_cast<std::size_t>(j)] = pj + h;
        try {
            plus = column(p);
        } catch (const DomainError&) {
        }
        p[static_cast<std::size_t>(j)] = pj - h;
        try {
            minus = column(p);
        } catch (const DomainError&) {
        }
        p[static_cast<std::size_t>(j)] = pj;

        if (plus && minus) {
            for (Eigen::Index i = 0; i < n; ++i) {
                J(i, j) = ((*plus)[static_cast<std::size_t>(i)] -
                           (*minus)[static_cast<std::size_t>(i)]) /
                          (2.0 * h);
            }
            continue;
        }
        if (!plus && !minus) {
            throw DomainError("jacobian probe left the model domain on both sides of parameter " +
                                  std::to_string(j),
                              times.empty() ? 0.0 : times.front());
        }
        if (!base) base = column(p);
        const auto& side = plus ? *plus : *minus;
        const double sign = plus ? 1.0 : -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            J(i, j) = sign * (side[static_cast<std::size_t>(i)] -
                              (*base)[static_cast<std::size_t>(i)]) / h;
        }
    }
    return J;
}

Eigen::MatrixXd jacobian_fd(const std::string& model_id, const ParamVector& params,
                            const std::vector<double>& times) {
    return jacobian_fd(fit_model(model_id), params.values(), times);
}

FitResult fit(const FitModel& m, const TimeSeries& s, std::span<const double> init,
              const FitOptions& opts) {
    if (s.n() <= m.k) {
        throw TooFewPoints("model '" + m.id + "' needs more than " + std::to_string(m.k) +
                           " points, series has " + std::to_string(s.n()));
    }
    std::vector<double> p(init.begin(), init.end());
    if (p.size() != m.k) {
        throw IncompleteParams("model '" + m.id + "' expects " + std::to_string(m.k) +
                               " parameters, got " + std::to_string(p.size()));
    }

    auto r_opt = try_residuals(m, p, s);
    if (!r_opt) throw InitDomainError("initial guess is outside the model domain for '" + m.id + "'");
    std::vector<double> r = std::move(*r_opt);
    double sse_cur = sum_of_squares(r);
    if (!std::isfinite(sse_cur)) {
        throw InitDomainError("initial guess gives a non-finite SSE for '" + m.id + "'");
    }

    FitResult result;
    result.model_id = m.id;
    result.converged = false;
    result.termination_reason = TerminationReason::max_iter;
    result.sse_trace.push_back(sse_cur);

    const auto k = static_cast<Eigen::Index>(m.k);
    const double sst = series_stats(s).sst;
    const double sse_floor = opts.sse_floor_rel * sst;
    double mu = opts.initial_damping;
    int iter = 0;

    if (sse_cur <= sse_floor) {
        result.converged = true;
        result.termination_reason = TerminationReason::cost_tol;
    }

    while (!result.converged && iter < opts.max_iterations) {
        ++iter;
        Eigen::MatrixXd J;
        try {
            J = jacobian_fd(m, p, s.times());
        } catch (const DomainError&) {
            result.termination_reason = TerminationReason::domain_failure;
            break;
        }
        if (!J.allFinite()) {
            result.termination_reason = TerminationReason::domain_failure;
            break;
        }
        Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
        const Eigen::MatrixXd N = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * rv;

        bool accepted = false;
        bool terminated = false;
        while (!accepted) {
            Eigen::MatrixXd damped = N;
            damped.diagonal().array() += mu;
            Eigen::LLT<Eigen::MatrixXd> llt(damped);
            bool solvable = (llt.info() == Eigen::Success);
            Eigen::VectorXd delta = Eigen::VectorXd::Zero(k);
            if (solvable) {
                delta = llt.solve(g);
                solvable = delta.allFinite();
            }
            if (solvable) {
                std::vector<double> trial(p);
                for (Eigen::Index j = 0; j < k; ++j) trial[static_cast<std::size_t>(j)] += delta(j);
                auto rt = try_residuals(m, trial, s);
                if (rt) {
                    const double sse_trial = sum_of_squares(*rt);
                    if (std::isfinite(sse_trial) && sse_trial < sse_cur) {
                        const double drop = sse_cur - sse_trial;
                        const double step_norm = delta.norm();
                        double p_norm = 0.0;
                        for (double v : trial) p_norm += v * v;
                        p_norm = std::sqrt(p_norm);
                        p = std::move(trial);
                        r = std::move(*rt);
                        sse_cur = sse_trial;
                        result.sse_trace.push_back(sse_cur);
                        mu = std::max(mu / opts.damping_down_factor, 1e-18);
                        accepted = true;
                        if (sse_cur <= sse_floor) {
                            result.converged = true;
                            result.termination_reason = TerminationReason::cost_tol;
                            terminated = true;
                        } else if (drop <= opts.cost_tolerance *
                                        std::max(sse_cur, std::numeric_limits<double>::min())) {
                            result.converged = true;
                            result.termination_reason = TerminationReason::cost_tol;
                            terminated = true;
                        } else if (step_norm <= opts.param_tolerance * (p_norm + opts.param_tolerance)) {
                            result.converged = true;
                            result.termination_reason = TerminationReason::param_tol;
                            terminated = true;
                        }
                        break;
                    }
                }
            }
            mu *= opts.damping_up_factor;
            if (mu > opts.max_damping) {
                // no strictly decreasing step exists at this scale; an
                // essentially perfect fit still counts as converged
                if (sse_cur <= sse_floor) {
                    result.converged = true;
                    result.termination_reason = TerminationReason::cost_tol;
                } else {
                    result.termination_reason = TerminationReason::damping_max;
                }
                terminated = true;
                break;
            }
        }
        if (terminated) break;
    }

    result.iterations = iter;
    result.final_sse = sse_cur;
    result.params = ParamVector(std::vector<std::string>(m.k, ""), p);
    result.statistics = make_statistics(sse_cur, sst, s.n(), m.k);
    return result;
}

FitResult fit(const std::string& model_id, const TimeSeries& s, const ParamVector& init,
              const FitOptions& opts) {
    const ModelSpec& spec = model(model_id);
    FitResult res = fit(fit_model(model_id), s, init.values(), opts);
    res.params = spec.make_params(res.params.values());
    return res;
}

FitResult multi_start_fit(const std::string& model_id, const TimeSeries& s,
                          const FitOptions& opts) {
    const ModelSpec& spec = model(model_id);
    if (s.n() <= spec.k()) {
        throw TooFewPoints("model '" + model_id + "' needs more than " +
                           std::to_string(spec.k()) + " points, series has " +
                           std::to_string(s.n()));
    }
    const ParamVector guess = initial_guess(model_id, s);

    std::optional<FitResult> best;
    for (int start = 0; start < opts.starts; ++start) {
        std::vector<double> p0 = guess.values();
        if (start > 0) {
            auto rng = seeded_stream(opts.seed, static_cast<std::uint64_t>(start));
            for (double& v : p0) {
                v *= std::exp(uniform(rng, -opts.perturbation_scale, opts.perturbation_scale));
            }
        }
        try {
            FitResult res = fit(fit_model(model_id), s, p0, opts);
            res.start_index = start;
            if (!best || res.final_sse < best->final_sse) best = std::move(res);
        } catch (const Error&) {
            // this start failed outright; others may still succeed
        }
    }
    if (!best) throw AllStartsFailed("every start failed for model '" + model_id + "'");
    best->params = spec.make_params(best->params.values());
    return *best;
}

}  // namespace fitkit
