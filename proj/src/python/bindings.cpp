#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fitkit/data.hpp"
#include "fitkit/io.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/models.hpp"
#include "fitkit/scenarios.hpp"
#include "fitkit/solver.hpp"
#include "fitkit/version.hpp"

namespace py = pybind11;
using namespace fitkit;

namespace {

ParamVector params_from_dict(const std::string& id, const py::dict& d) {
    const ModelSpec& spec = model(id);
    std::vector<double> values;
    for (const auto& name : spec.param_names) {
        if (!d.contains(name.c_str())) {
            throw IncompleteParams("missing parameter '" + name + "' for model '" + id + "'");
        }
        values.push_back(d[name.c_str()].cast<double>());
    }
    return spec.make_params(std::move(values));
}

py::dict params_to_dict(const ParamVector& p) {
    py::dict d;
    for (std::size_t i = 0; i < p.size(); ++i) d[p.names()[i].c_str()] = p.values()[i];
    return d;
}

py::dict stats_to_dict(const FitStatistics& st) {
    py::dict d;
    d["sse"] = st.sse;
    d["sst"] = st.sst;
    d["r2"] = st.r_squared;
    d["dfe"] = st.dfe;
    d["adj_r2"] = st.adj_r_squared;
    d["rmse"] = st.rmse;
    d["n"] = st.n;
    d["k"] = st.k;
    return d;
}

py::dict result_to_dict(const FitResult& res) {
    py::dict d;
    d["model_id"] = res.model_id;
    d["params"] = params_to_dict(res.params);
    d["converged"] = res.converged;
    d["iterations"] = res.iterations;
    d["final_sse"] = res.final_sse;
    d["termination_reason"] = std::string(to_string(res.termination_reason));
    d["start_index"] = res.start_index;
    d["stats"] = stats_to_dict(res.statistics);
    return d;
}

FitOptions options_from_kwargs(int starts, std::uint64_t seed, int max_iterations) {
    FitOptions opts;
    opts.starts = starts;
    opts.seed = seed;
    opts.max_iterations = max_iterations;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_fitkit, m) {
    m.doc() = "curve-fitting and model-selection toolkit";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FitkitError");

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_property_readonly("times", &TimeSeries::times)
        .def_property_readonly("values", &TimeSeries::values)
        .def_property_readonly("n", &TimeSeries::n);

    m.def("build_series", &build_series, py::arg("times"), py::arg("values"));
    m.def("series_stats", [](const TimeSeries& s) {
        const auto st = series_stats(s);
        py::dict d;
        d["n"] = st.n;
        d["mean"] = st.mean;
        d["sst"] = st.sst;
        return d;
    });

    m.def("model_ids", [] {
        std::vector<std::string> ids;
        for (const auto& spec : catalog()) ids.push_back(spec.id);
        return ids;
    });
    m.def("param_names",
          [](const std::string& id) { return model(id).param_names; });
    m.def("evaluate",
          [](const std::string& id, const py::dict& params, double t) {
              return evaluate(id, params_from_dict(id, params), t);
          },
          py::arg("model_id"), py::arg("params"), py::arg("t"));
    m.def("evaluate_series",
          [](const std::string& id, const py::dict& params, const std::vector<double>& times) {
              return evaluate_series(id, params_from_dict(id, params), times);
          });
    m.def("initial_guess", [](const std::string& id, const TimeSeries& s) {
        return params_to_dict(initial_guess(id, s));
    });

    m.def("malthusian", [](double p0, double k, double t) {
        return malthusian(PopulationConfig{p0, k, 0.0, 0.0}, t);
    });
    m.def("logistic", [](double p0, double p1, double A, double t) {
        return logistic(PopulationConfig{p0, 0.0, p1, A}, t);
    });
    m.def("generate",
          [](const std::string& scenario, const std::string& preset,
             const std::vector<double>& times, double noise_sd, std::uint64_t seed) {
              ScenarioConfig cfg;
              if (preset == "eq4") cfg = eq4_preset();
              else if (preset == "eq7") cfg = eq7_preset();
              else if (preset == "eq18") cfg = eq18_preset();
              else if (preset == "eq24") cfg = eq24_preset();
              else throw UnknownModel("unknown preset '" + preset + "'");
              return generate(scenario, cfg, times, NoiseConfig{noise_sd, seed});
          },
          py::arg("scenario"), py::arg("preset"), py::arg("times"), py::arg("noise_sd") = 0.0,
          py::arg("seed") = 0);

    m.def("fit",
          [](const std::string& id, const TimeSeries& s, const py::dict& init, int starts,
             std::uint64_t seed, int max_iterations) {
              const auto opts = options_from_kwargs(starts, seed, max_iterations);
              return result_to_dict(fit(id, s, params_from_dict(id, init), opts));
          },
          py::arg("model_id"), py::arg("series"), py::arg("init"), py::arg("starts") = 1,
          py::arg("seed") = 0, py::arg("max_iterations") = 200);
    m.def("multi_start_fit",
          [](const std::string& id, const TimeSeries& s, int starts, std::uint64_t seed,
             int max_iterations) {
              const auto opts = options_from_kwargs(starts, seed, max_iterations);
              return result_to_dict(multi_start_fit(id, s, opts));
          },
          py::arg("model_id"), py::arg("series"), py::arg("starts") = 20, py::arg("seed") = 0,
          py::arg("max_iterations") = 200);

    m.def("fit_statistics", [](const std::string& id, const py::dict& params, const TimeSeries& s) {
        return stats_to_dict(fit_statistics(id, params_from_dict(id, params), s));
    });
}
