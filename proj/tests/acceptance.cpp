// End-to-end acceptance suite. Each criterion prints a single PASS/FAIL
// line; the process exits with the number of failed criteria.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fitkit/data.hpp"
#include "fitkit/io.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/models.hpp"
#include "fitkit/rng.hpp"
#include "fitkit/scenarios.hpp"
#include "fitkit/solver.hpp"

namespace fs = std::filesystem;
using namespace fitkit;

namespace {

struct Check {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void close(double got, double want, double rel_tol, const std::string& what) {
        const double denom = std::max(std::abs(want), 1e-300);
        if (!(std::abs(got - want) / denom <= rel_tol)) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s: got %.10g, want %.10g (rel tol %g)", what.c_str(),
                          got, want, rel_tol);
            failures.push_back(buf);
        }
    }
    void within(double got, double want, double abs_tol, const std::string& what) {
        if (!(std::abs(got - want) <= abs_tol)) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s: got %.10g, want %.10g (abs tol %g)", what.c_str(),
                          got, want, abs_tol);
            failures.push_back(buf);
        }
    }
};

int g_failed_criteria = 0;

void criterion(int num, const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("unexpected exception: ") + e.what());
    }
    if (c.failures.empty()) {
        std::printf("criterion %d PASS: %s\n", num, name.c_str());
    } else {
        ++g_failed_criteria;
        std::printf("criterion %d FAIL: %s\n", num, name.c_str());
        for (const auto& f : c.failures) std::printf("    - %s\n", f.c_str());
    }
    std::fflush(stdout);
}

// Reference fit statistics for the three case-study datasets.
struct RefRow {
    const char* id;
    double sse;
    double r2;
    std::size_t dfe;
    double adj;
    double rmse;
    std::size_t k;
};

const std::vector<RefRow> kPopulationRows{
    // n = 124 for every row
    {"nelder1961", 2.5654e4, 0.9667, 120, 0.9659, 14.6213, 4},
    {"mcmillan1980", 1.2049e4, 0.9844, 121, 0.9841, 9.9787, 3},
    {"mcmillan1970", 2.3576e5, 0.6940, 119, 0.6837, 44.5107, 5},
    {"mcnally1971", 9.4469e3, 0.9877, 121, 0.9875, 8.8359, 3},
    {"yang1989", 6.5912e3, 0.9914, 120, 0.9912, 7.4113, 4},
};

const std::vector<RefRow> kTemperatureRows{
    // n = 50 for every row
    {"exp_sin", 90.3373, 0.6374, 43, 0.5868, 1.4494, 5},
    {"fourier2", 17.9502, 0.9279, 44, 0.9198, 1.6387, 6},
    {"gauss2", 62.3698, 0.7496, 44, 0.7212, 1.1906, 6},
    {"exp2", 157.3684, 0.3683, 46, 0.3271, 1.8496, 4},
    {"sin3", 16.5269, 0.9337, 41, 0.9207, 0.6349, 9},
};

const std::vector<RefRow> kPriceRows{
    // n = 21 for every row
    {"distr_exp", 484.5365, 0.8645, 16, 0.8306, 5.5030, 5},
    {"rat21", 1.5589e3, 0.5640, 17, 0.4871, 9.5760, 4},
    {"gauss2", 620.5019, 0.8265, 15, 0.7686, 6.4317, 6},
    {"exp2", 594.7089, 0.8337, 17, 0.8043, 5.9146, 4},
    {"sin3", 207.8827, 0.9419, 12, 0.9031, 4.1622, 9},
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return t;
}

TimeSeries noiseless(const std::string& id, const std::vector<double>& values,
                     const std::vector<double>& times) {
    const auto p = model(id).make_params(values);
    return build_series(times, evaluate_series(id, p, times));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FITKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion bodies ------------------------------------------------------

void check_rmse_identity(Check& c) {
    auto sweep = [&](const std::vector<RefRow>& rows, const std::string& tag) {
        for (const auto& row : rows) {
            const double calc = rmse(row.sse, row.dfe);
            if (tag == "temperature" && std::string(row.id) == "fourier2") {
                // recorded value 1.6387 is inconsistent with sqrt(SSE/dfe);
                // the identity-consistent value is 0.6387
                c.close(calc, 0.6387, 5e-3, tag + "/" + row.id + " corrected rmse");
                c.require(std::abs(calc - row.rmse) / row.rmse > 0.5,
                          tag + "/" + row.id + " known rmse inconsistency vanished");
                continue;
            }
            c.close(calc, row.rmse, 5e-3, tag + "/" + row.id + " rmse");
        }
    };
    sweep(kPopulationRows, "population");
    sweep(kTemperatureRows, "temperature");
    sweep(kPriceRows, "price");
}

void check_adj_identity(Check& c) {
    auto sweep = [&](const std::vector<RefRow>& rows, std::size_t n, const std::string& tag) {
        for (const auto& row : rows) {
            if (tag == "temperature" && std::string(row.id) == "exp_sin") {
                // this row's dfe (43) disagrees with the dataset size (50 - 5 = 45);
                // the recorded adjusted value matches n = 50, not n = dfe + k
                const double via_dfe = adj_r_squared(row.r2, row.dfe + row.k, row.dfe);
                c.require(std::abs(via_dfe - row.adj) > 2e-3,
                          tag + "/" + row.id + " known adj inconsistency vanished");
                c.within(adj_r_squared(row.r2, 50, row.dfe), row.adj, 2e-3,
                         tag + "/" + row.id + " adj (n = 50)");
                continue;
            }
            c.within(adj_r_squared(row.r2, row.dfe + row.k, row.dfe), row.adj, 2e-3,
                     tag + "/" + row.id + " adj");
            c.require(row.dfe + row.k == n, tag + "/" + row.id + " dfe + k != n");
        }
    };
    sweep(kPopulationRows, 124, "population");
    sweep(kTemperatureRows, 50, "temperature");
    sweep(kPriceRows, 21, "price");
}

void check_sst_consistency(Check& c) {
    auto sweep = [&](const std::vector<RefRow>& rows, const std::string& tag) {
        double lo = 1e300, hi = 0.0;
        for (const auto& row : rows) {
            const double sst = row.sse / (1.0 - row.r2);
            lo = std::min(lo, sst);
            hi = std::max(hi, sst);
        }
        c.require(hi / lo - 1.0 <= 0.01, tag + ": implied SSTs spread by " +
                                             std::to_string((hi / lo - 1.0) * 100.0) + "%");
    };
    sweep(kPopulationRows, "population");
    sweep(kTemperatureRows, "temperature");
    sweep(kPriceRows, "price");
}

void check_ode_oracle(Check& c) {
    const double step = 1e-3;

    // logistic growth
    const PopulationConfig pop = eq7_preset();
    c.require(logistic(pop, 0.0) == 76.09, "logistic value at t = 0 is not exactly 76.09");
    const auto pop_rhs = oracle::logistic_rhs(pop);
    double t_prev = 0.0, y = logistic(pop, 0.0);
    for (double t : {25.0, 50.0, 75.0, 100.0, 123.0}) {
        y = oracle::rk4_integrate(pop_rhs, y, t_prev, t, step);
        t_prev = t;
        c.close(logistic(pop, t), y, 1e-4, "logistic vs RK4 at t = " + std::to_string(t));
    }

    // building temperature
    const BuildingConfig bld = eq18_preset();
    c.require(building_temperature(bld, 0.0) == 32.09,
              "temperature value at t = 0 is not exactly 32.09");
    const auto bld_rhs = oracle::building_rhs(bld);
    t_prev = 0.0;
    y = building_temperature(bld, 0.0);
    for (double t : {3.0, 6.0, 12.0, 18.0, 24.0}) {
        y = oracle::rk4_integrate(bld_rhs, y, t_prev, t, step);
        t_prev = t;
        c.within(building_temperature(bld, t), y, 1e-3,
                 "temperature vs RK4 at t = " + std::to_string(t));
    }

    // price adjustment without expectation terms
    MarketConfig mkt;
    mkt.d0 = 40.0;
    mkt.d1 = 2.0;
    mkt.s0 = 20.0;
    mkt.s1 = 1.0;
    mkt.lambda = 0.5;
    mkt.p_init = 30.0;
    const auto mkt_rhs = oracle::price_linear_rhs(mkt);
    t_prev = 0.0;
    y = mkt.p_init;
    c.require(market_price_linear(mkt, 0.0) == mkt.p_init, "price value at t = 0 is not exact");
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        y = oracle::rk4_integrate(mkt_rhs, y, t_prev, t, step);
        t_prev = t;
        c.close(market_price_linear(mkt, t), y, 1e-4, "price vs RK4 at t = " + std::to_string(t));
    }

    // the expectations variant degenerates to the same law when d2 = s2 = 0
    MarketConfig expect = mkt;
    expect.p_init = 30.0;
    for (double t : {0.5, 1.0, 2.0}) {
        c.close(market_price_expectations(expect, t), market_price_linear(mkt, t), 1e-12,
                "expectations closed form at t = " + std::to_string(t));
    }
}

struct RoundTrip {
    const char* id;
    std::vector<double> truth;
    double t0, t1;
    std::size_t n;
    bool recover;           // also require parameter recovery at 1e-4
    int starts = 24;        // search breadth; the 9-parameter family needs more
    double spread = 0.5;
    int max_iterations = 500;
};

bool matches(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    for (std::size_t i = 0; i < want.size(); ++i) {
        const double denom = std::max(std::abs(want[i]), 1e-12);
        if (std::abs(got[i] - want[i]) / denom > tol) return false;
    }
    return true;
}

void check_round_trips(Check& c) {
    const std::vector<RoundTrip> cases{
        {"nelder1961", {300.0, 0.5, 2.0, 5.0}, 0.0, 123.0, 124, false},
        {"mcmillan1980", {88.42, 1.689, -0.01136}, 0.0, 123.0, 124, true},
        {"mcmillan1970", {80.0, 0.4, 0.25, 1.0, 1.2}, 0.0, 20.0, 50, false},
        {"mcnally1971", {65.4, 0.1047, -0.009579}, 0.0, 123.0, 124, true},
        {"yang1989", {87.99, -0.0114, 0.05, 60.0}, 0.0, 123.0, 124, true},
        {"exp_sin", {34.6, 0.4055, 2.636, 2.795, -0.003493}, 0.0, 24.0, 50, false},
        {"fourier2", {33.23, -1.456, 2.644, 0.2962, 0.2962, 0.3532}, 0.0, 24.0, 50, true},
        {"gauss2", {35.94, 5.404, 16.7, 22.41, 22.87, 6.083}, 0.0, 24.0, 50, true},
        {"exp2", {36.07, -0.01017, 0.01805, 0.2604}, 0.0, 24.0, 50, true},
        {"sin3",
         {38.29, 0.001099, 1.039, 3.117, 0.3428, -0.4052, 1.508, 0.7265, 1.175},
         0.0, 24.0, 50, false, 60, 1.0, 800},
        {"distr_exp", {0.1348, -5.402, 55.84, 0.0109, 1.933}, 0.0, 20.0, 21, false},
        {"rat21", {4.821e4, -9.299e5, 1.074e7, 1.805e5}, 0.0, 20.0, 21, false},
    };

    c.require(catalog().size() == cases.size(), "round-trip coverage != catalog size");

    for (const auto& rt : cases) {
        FitOptions opts;
        opts.seed = 42;
        opts.starts = rt.starts;
        opts.perturbation_scale = rt.spread;
        opts.max_iterations = rt.max_iterations;
        const auto s = noiseless(rt.id, rt.truth, linspace(rt.t0, rt.t1, rt.n));
        FitResult res;
        try {
            res = multi_start_fit(rt.id, s, opts);
        } catch (const Error& e) {
            c.require(false, std::string(rt.id) + ": fit failed (" + e.what() + ")");
            continue;
        }
        c.require(res.converged, std::string(rt.id) + ": best start did not converge");
        const double sst = series_stats(s).sst;
        c.require(res.final_sse <= 1e-8 * sst,
                  std::string(rt.id) + ": final SSE " + std::to_string(res.final_sse) +
                      " above 1e-8 * SST (" + std::to_string(1e-8 * sst) + ")");
        if (!rt.recover) continue;

        std::vector<double> got = res.params.values();
        const std::string id(rt.id);
        if (id == "gauss2") {
            // the two terms commute and the width enters squared
            for (std::size_t j : {2, 5}) got[j] = std::abs(got[j]);
            std::vector<double> want = rt.truth;
            std::vector<double> swapped{want[3], want[4], want[5], want[0], want[1], want[2]};
            c.require(matches(got, want, 1e-4) || matches(got, swapped, 1e-4),
                      id + ": parameters not recovered (up to term swap / width sign)");
        } else if (id == "exp2") {
            const std::vector<double>& want = rt.truth;
            std::vector<double> swapped{want[2], want[3], want[0], want[1]};
            c.require(matches(got, want, 1e-4) || matches(got, swapped, 1e-4),
                      id + ": parameters not recovered (up to term swap)");
        } else if (id == "fourier2") {
            if (got[5] < 0.0) {  // w -> -w mirrors the sine coefficients
                got[5] = -got[5];
                got[2] = -got[2];
                got[4] = -got[4];
            }
            c.require(matches(got, rt.truth, 1e-4), id + ": parameters not recovered");
        } else {
            c.require(matches(got, rt.truth, 1e-4), id + ": parameters not recovered");
        }
    }
}

void check_rankings(Check& c) {
    auto rows_to_results = [](const std::vector<RefRow>& rows, std::size_t n, double sst) {
        std::vector<FitResult> out;
        for (const auto& row : rows) {
            FitResult r;
            r.model_id = row.id;
            r.converged = true;
            r.final_sse = row.sse;
            r.statistics.sse = row.sse;
            r.statistics.sst = sst;
            r.statistics.r_squared = row.r2;
            r.statistics.dfe = row.dfe;
            r.statistics.adj_r_squared = row.adj;
            r.statistics.rmse = row.rmse;
            r.statistics.n = n;
            r.statistics.k = row.k;
            out.push_back(r);
        }
        return out;
    };

    const auto pop = rank_models(rows_to_results(kPopulationRows, 124, 7.7e5));
    c.require(pop.front().model_id == "yang1989",
              "population ranking puts " + pop.front().model_id + " first");
    std::vector<std::string> pop_want{"yang1989", "mcnally1971", "mcmillan1980", "nelder1961",
                                      "mcmillan1970"};
    for (std::size_t i = 0; i < pop.size(); ++i) {
        c.require(pop[i].model_id == pop_want[i], "population rank " + std::to_string(i) +
                                                      " is " + pop[i].model_id);
    }

    const auto price = rank_models(rows_to_results(kPriceRows, 21, 3576.0));
    c.require(price.front().model_id == "sin3",
              "price ranking puts " + price.front().model_id + " first");
    std::vector<std::string> price_want{"sin3", "distr_exp", "exp2", "gauss2", "rat21"};
    for (std::size_t i = 0; i < price.size(); ++i) {
        c.require(price[i].model_id == price_want[i],
                  "price rank " + std::to_string(i) + " is " + price[i].model_id);
    }
}

void check_solver_invariants(Check& c) {
    // 1. accepted-step SSE sequences are strictly decreasing: 100 randomized fits
    auto rng = seeded_stream(7, 0);
    const std::vector<std::pair<std::string, std::vector<double>>> targets{
        {"mcmillan1980", {88.42, 1.689, -0.01136}},
        {"yang1989", {87.99, -0.0114, 0.05, 60.0}},
        {"exp2", {36.07, -0.01017, 0.01805, 0.2604}},
        {"sin3", {38.29, 0.001099, 1.039, 3.117, 0.3428, -0.4052, 1.508, 0.7265, 1.175}},
    };
    int fits_done = 0;
    for (const auto& [id, truth] : targets) {
        const double t1 = (id == "mcmillan1980" || id == "yang1989") ? 123.0 : 24.0;
        const auto s = noiseless(id, truth, linspace(0.0, t1, 60));
        const auto base = initial_guess(id, s).values();
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<double> init = base;
            for (double& v : init) v *= std::exp(uniform(rng, -1.0, 1.0));
            FitOptions opts;
            opts.max_iterations = 60;
            const auto res = fit(fit_model(id), s, init, opts);
            ++fits_done;
            for (std::size_t i = 1; i < res.sse_trace.size(); ++i) {
                c.require(res.sse_trace[i] < res.sse_trace[i - 1],
                          id + ": SSE trace not strictly decreasing at step " + std::to_string(i));
            }
            c.require(res.final_sse == res.sse_trace.back(), id + ": final SSE != trace back");
        }
    }
    c.require(fits_done == 100, "expected 100 randomized fits");

    // 2. finite-difference Jacobian vs analytic derivatives
    auto mixed_ok = [](double fd, double an) {
        return std::abs(fd - an) <= 1e-4 * std::max(1.0, std::abs(an));
    };
    const FitModel malthus{"malthusian", 2, [](std::span<const double> p, double t) {
                               return p[0] * std::exp(p[1] * t);
                           }};
    auto jrng = seeded_stream(11, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const double p0 = uniform(jrng, 5.0, 120.0);
        const double k = uniform(jrng, -0.02, 0.02);
        const double t = uniform(jrng, 0.0, 100.0);
        const auto J = jacobian_fd(malthus, std::vector<double>{p0, k}, {t});
        c.require(mixed_ok(J(0, 0), std::exp(k * t)), "malthusian dJ/dp0");
        c.require(mixed_ok(J(0, 1), p0 * t * std::exp(k * t)), "malthusian dJ/dk");
    }
    for (int rep = 0; rep < 20; ++rep) {
        const double a = uniform(jrng, 1.0, 40.0), b = uniform(jrng, -0.1, 0.1);
        const double cc = uniform(jrng, 0.1, 5.0), d = uniform(jrng, -0.2, 0.2);
        const double t = uniform(jrng, 0.0, 24.0);
        const auto J = jacobian_fd(fit_model("exp2"), std::vector<double>{a, b, cc, d}, {t});
        c.require(mixed_ok(J(0, 0), std::exp(b * t)), "exp2 dJ/da");
        c.require(mixed_ok(J(0, 1), a * t * std::exp(b * t)), "exp2 dJ/db");
        c.require(mixed_ok(J(0, 2), std::exp(d * t)), "exp2 dJ/dc");
        c.require(mixed_ok(J(0, 3), cc * t * std::exp(d * t)), "exp2 dJ/dd");
    }
    for (int rep = 0; rep < 20; ++rep) {
        const std::vector<double> p{uniform(jrng, 5.0, 40.0), uniform(jrng, 0.0, 24.0),
                                    uniform(jrng, 2.0, 10.0), uniform(jrng, 5.0, 40.0),
                                    uniform(jrng, 0.0, 24.0), uniform(jrng, 2.0, 10.0)};
        const double t = uniform(jrng, 0.0, 24.0);
        const auto J = jacobian_fd(fit_model("gauss2"), p, {t});
        for (int term = 0; term < 2; ++term) {
            const double a = p[3 * term], bt = p[3 * term + 1], w = p[3 * term + 2];
            const double u = (t - bt) / w;
            const double e = std::exp(-u * u);
            c.require(mixed_ok(J(0, 3 * term), e), "gauss2 dJ/da");
            c.require(mixed_ok(J(0, 3 * term + 1), a * e * 2.0 * u / w), "gauss2 dJ/db");
            c.require(mixed_ok(J(0, 3 * term + 2), a * e * 2.0 * u * u / w), "gauss2 dJ/dc");
        }
    }
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> p(9);
        for (int j = 0; j < 3; ++j) {
            p[3 * j] = uniform(jrng, 0.5, 30.0);
            p[3 * j + 1] = uniform(jrng, 0.05, 2.0);
            p[3 * j + 2] = uniform(jrng, -3.0, 3.0);
        }
        const double t = uniform(jrng, 0.0, 24.0);
        const auto J = jacobian_fd(fit_model("sin3"), p, {t});
        for (int j = 0; j < 3; ++j) {
            const double a = p[3 * j], b = p[3 * j + 1], ph = p[3 * j + 2];
            c.require(mixed_ok(J(0, 3 * j), std::sin(b * t + ph)), "sin3 dJ/da");
            c.require(mixed_ok(J(0, 3 * j + 1), a * t * std::cos(b * t + ph)), "sin3 dJ/db");
            c.require(mixed_ok(J(0, 3 * j + 2), a * std::cos(b * t + ph)), "sin3 dJ/dc");
        }
    }

    // 3. multi-start determinism
    const auto s = noiseless("yang1989", {87.99, -0.0114, 0.05, 60.0}, linspace(0.0, 123.0, 80));
    FitOptions opts;
    opts.starts = 12;
    opts.seed = 99;
    const auto a = multi_start_fit("yang1989", s, opts);
    const auto b = multi_start_fit("yang1989", s, opts);
    c.require(a.final_sse == b.final_sse, "multi-start reruns differ in SSE");
    c.require(a.start_index == b.start_index, "multi-start reruns differ in winning start");
    c.require(a.params.values() == b.params.values(), "multi-start reruns differ in parameters");
}

void check_cli_pipelines(Check& c) {
    const fs::path dir =
        fs::temp_directory_path() / ("fitkit_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    struct Pipeline {
        const char* scenario;
        const char* preset;
        const char* grid;
        const char* noise_sd;
        const char* models;
    };
    const std::vector<Pipeline> pipelines{
        {"malthusian", "eq4", "0:123:124", "2", "mcmillan1980,mcnally1971,yang1989"},
        {"logistic", "eq7", "0:123:124", "5", "nelder1961,mcmillan1980,mcnally1971,yang1989"},
        {"temperature", "eq18", "0:24:50", "0.5", "exp_sin,fourier2,gauss2,exp2,sin3"},
        {"price_expectations", "eq24", "0:20:21", "1", "distr_exp,rat21,gauss2,exp2,sin3"},
    };

    for (const auto& pl : pipelines) {
        const std::string tag(pl.scenario);
        const auto csv = (dir / (tag + ".csv")).string();
        const auto rep1 = (dir / (tag + "_1.json")).string();
        const auto rep2 = (dir / (tag + "_2.json")).string();

        const int gen = run_cli("generate --scenario " + tag + " --preset " + pl.preset +
                                " --grid " + pl.grid + " --noise-sd " + pl.noise_sd +
                                " --seed 5 --out " + csv);
        if (gen != 0) {
            c.require(false, tag + ": generate exited " + std::to_string(gen));
            continue;
        }
        const std::string cmp = "compare --data " + csv + " --models " + pl.models +
                                " --starts 8 --seed 9 --out ";
        const int e1 = run_cli(cmp + rep1);
        const int e2 = run_cli(cmp + rep2);
        c.require(e1 == 0, tag + ": compare exited " + std::to_string(e1));
        c.require(e2 == 0, tag + ": compare rerun exited " + std::to_string(e2));
        if (e1 != 0 || e2 != 0) continue;
        c.require(slurp(rep1) == slurp(rep2), tag + ": compare reruns are not byte-identical");

        const Report report = read_report(slurp(rep1));
        c.require(report.n > 0, tag + ": empty dataset in report");
        bool any_converged = false;
        for (const auto& entry : report.entries) {
            if (!entry.statistics) continue;
            const auto& st = *entry.statistics;
            any_converged = any_converged || entry.converged;
            c.require(st.n == report.n, tag + "/" + entry.model_id + ": n mismatch");
            c.require(st.sst == report.sst, tag + "/" + entry.model_id + ": sst mismatch");
            c.require(st.dfe == st.n - st.k, tag + "/" + entry.model_id + ": dfe identity");
            c.close(st.r_squared, 1.0 - st.sse / st.sst, 1e-9,
                    tag + "/" + entry.model_id + ": R^2 identity");
            c.close(st.rmse, std::sqrt(st.sse / static_cast<double>(st.dfe)), 1e-9,
                    tag + "/" + entry.model_id + ": RMSE identity");
            c.close(st.adj_r_squared,
                    1.0 - (1.0 - st.r_squared) * static_cast<double>(st.n - 1) /
                              static_cast<double>(st.dfe),
                    1e-9, tag + "/" + entry.model_id + ": adjusted R^2 identity");
        }
        c.require(any_converged, tag + ": no model converged");

        // ranking lists every model once, converged entries ordered by adjusted R^2
        c.require(report.ranking.size() == report.entries.size(),
                  tag + ": ranking size mismatch");
        double prev_adj = 1e300;
        bool seen_failed = false;
        for (const auto& id : report.ranking) {
            const auto it = std::find_if(report.entries.begin(), report.entries.end(),
                                         [&](const ReportEntry& e) { return e.model_id == id; });
            c.require(it != report.entries.end(), tag + ": ranked id " + id + " not in entries");
            if (it == report.entries.end()) continue;
            if (it->statistics) {
                c.require(!seen_failed, tag + ": fitted model ranked after a failed one");
                c.require(it->statistics->adj_r_squared <= prev_adj + 1e-12,
                          tag + ": ranking not sorted by adjusted R^2");
                prev_adj = it->statistics->adj_r_squared;
            } else {
                seen_failed = true;
            }
        }
    }
    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion(1, "reference RMSE values satisfy sqrt(SSE / dfe)", check_rmse_identity);
    criterion(2, "reference adjusted R^2 values satisfy the adjustment identity",
              check_adj_identity);
    criterion(3, "SSE and R^2 imply a consistent SST within each dataset", check_sst_consistency);
    criterion(4, "closed-form scenario curves agree with an RK4 integrator", check_ode_oracle);
    criterion(5, "noiseless round-trip fits succeed for every model family", check_round_trips);
    criterion(6, "model ranking reproduces the reference orderings", check_rankings);
    criterion(7, "solver invariants: monotone SSE, Jacobian accuracy, determinism",
              check_solver_invariants);
    criterion(8, "CLI generate/compare pipelines validate and reproduce byte-for-byte",
              check_cli_pipelines);
    return g_failed_criteria;
}
