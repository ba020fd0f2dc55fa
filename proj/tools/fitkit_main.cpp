#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fitkit/io.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/models.hpp"
#include "fitkit/scenarios.hpp"
#include "fitkit/solver.hpp"
#include "fitkit/version.hpp"

namespace {

// exit codes: 0 ok, 1 usage, 2 data/parse, 3 nothing converged, 4 domain error
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitDomain = 4;

struct Grid {
    double start = 0.0;
    double end = 0.0;
    std::size_t count = 0;
};

Grid parse_grid(const std::string& text) {
    Grid g;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw fitkit::InvalidGrid("grid must be start:end:count");
    }
    try {
        g.start = std::stod(text.substr(0, c1));
        g.end = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        g.count = std::stoul(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw fitkit::InvalidGrid("grid must be start:end:count with numeric fields");
    }
    if (g.count < 2 || !(g.start < g.end)) {
        throw fitkit::InvalidGrid("grid needs count >= 2 and start < end");
    }
    return g;
}

std::vector<double> grid_times(const Grid& g) {
    std::vector<double> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        t[i] = (i + 1 == g.count)
                   ? g.end
                   : g.start + (g.end - g.start) * static_cast<double>(i) /
                                   static_cast<double>(g.count - 1);
    }
    return t;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fitkit::ParseError("cannot open '" + path + "' for writing", 0);
    out << content;
}

fitkit::ScenarioConfig resolve_preset(const std::string& scenario, const std::string& preset) {
    using namespace fitkit;
    if (preset == "eq4") return eq4_preset();
    if (preset == "eq7") return eq7_preset();
    if (preset == "eq18") return eq18_preset();
    if (preset == "eq24") return eq24_preset();
    std::ifstream in(preset);
    if (!in) throw ParseError("cannot open preset file '" + preset + "'", 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("preset JSON: ") + e.what(), 0);
    }
    return scenario_config_from_json(scenario, j);
}

std::vector<std::string> resolve_model_list(const std::string& spec) {
    std::vector<std::string> ids;
    if (spec == "all") {
        for (const auto& m : fitkit::catalog()) ids.push_back(m.id);
        return ids;
    }
    std::stringstream ss(spec);
    std::string id;
    while (std::getline(ss, id, ',')) {
        if (!id.empty()) ids.push_back(id);
    }
    for (const auto& i : ids) fitkit::model(i);  // throws UnknownModel early
    return ids;
}

int cmd_generate(const std::string& scenario, const std::string& preset, const std::string& grid,
                 double noise_sd, std::uint64_t seed, const std::string& out_path) {
    const auto cfg = resolve_preset(scenario, preset);
    const auto times = grid_times(parse_grid(grid));
    const auto series = fitkit::generate(scenario, cfg, times, fitkit::NoiseConfig{noise_sd, seed});
    std::ostringstream csv;
    csv << "t,y\n";
    for (std::size_t i = 0; i < series.n(); ++i) {
        csv << fitkit::format_double(series.time(i)) << ','
            << fitkit::format_double(series.value(i)) << '\n';
    }
    write_file(out_path, csv.str());
    return kExitOk;
}

fitkit::ReportEntry entry_from(const fitkit::FitResult& res) {
    fitkit::ReportEntry e;
    e.model_id = res.model_id;
    e.params = res.params;
    e.converged = res.converged;
    e.termination_reason = fitkit::to_string(res.termination_reason);
    e.start_index = res.start_index;
    e.statistics = res.statistics;
    return e;
}

int run_fits(const std::string& data_path, const std::vector<std::string>& ids,
             const fitkit::FitOptions& opts, const std::string& out_path,
             const std::string& curves_dir) {
    using namespace fitkit;
    const TimeSeries series = read_csv_file(data_path);
    const auto stats = series_stats(series);

    Report report;
    report.source = data_path;
    report.n = series.n();
    report.sst = stats.sst;
    report.version = kVersion;
    report.seed = opts.seed;

    std::vector<FitResult> ranked_inputs;
    std::vector<std::string> failed;
    for (const auto& id : ids) {
        if (model(id).literal_rendering) {
            std::cerr << "warning: model '" << id
                      << "' is a literal rendering of a garbled source formula\n";
        }
        try {
            FitResult res = multi_start_fit(id, series, opts);
            report.entries.push_back(entry_from(res));
            ranked_inputs.push_back(std::move(res));
        } catch (const Error& e) {
            std::cerr << "warning: model '" << id << "' failed: " << e.what() << '\n';
            ReportEntry entry;
            entry.model_id = id;
            entry.converged = false;
            entry.termination_reason = "all_starts_failed";
            report.entries.push_back(std::move(entry));
            failed.push_back(id);
        }
    }

    if (!ranked_inputs.empty()) {
        for (const auto& r : rank_models(ranked_inputs)) report.ranking.push_back(r.model_id);
    }
    // models with no usable fit rank last, by id
    std::sort(failed.begin(), failed.end());
    for (const auto& id : failed) report.ranking.push_back(id);

    write_file(out_path, write_report(report));

    if (!curves_dir.empty()) {
        std::filesystem::create_directories(curves_dir);
        for (const auto& res : ranked_inputs) {
            const auto csv = emit_curve(res.model_id, res.params, series.times().front(),
                                        series.times().back(), std::max<std::size_t>(series.n(), 2));
            write_file(curves_dir + "/" + res.model_id + ".csv", csv);
        }
    }

    bool any_converged = false;
    for (const auto& e : report.entries) any_converged = any_converged || e.converged;
    return any_converged ? kExitOk : kExitNoConvergence;
}

int cmd_eval(const std::string& id, const std::string& params_path, const std::string& grid,
             const std::string& out_path) {
    using namespace fitkit;
    const ModelSpec& spec = model(id);
    std::ifstream in(params_path);
    if (!in) throw ParseError("cannot open params file '" + params_path + "'", 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("params JSON: ") + e.what(), 0);
    }
    std::vector<double> values;
    for (const auto& name : spec.param_names) {
        if (!j.contains(name) || !j.at(name).is_number()) {
            throw IncompleteParams("params file is missing numeric '" + name + "' for model '" +
                                   id + "'");
        }
        values.push_back(j.at(name).get<double>());
    }
    const Grid g = parse_grid(grid);
    write_file(out_path, emit_curve(id, spec.make_params(values), g.start, g.end, g.count - 1));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curve-fitting and model-selection toolkit"};
    app.set_version_flag("--version", fitkit::kVersion);
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "sample a scenario closed form to CSV");
    std::string gen_scenario, gen_preset, gen_grid, gen_out;
    double gen_noise_sd = 0.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--scenario", gen_scenario,
                    "malthusian|logistic|temperature|price_linear|price_expectations")
        ->required()
        ->check(CLI::IsMember(
            {"malthusian", "logistic", "temperature", "price_linear", "price_expectations"}));
    gen->add_option("--preset", gen_preset, "eq4|eq7|eq18|eq24|<file.json>")->required();
    gen->add_option("--grid", gen_grid, "start:end:count")->required();
    gen->add_option("--noise-sd", gen_noise_sd, "Gaussian noise standard deviation");
    gen->add_option("--seed", gen_seed, "noise PRNG seed");
    gen->add_option("--out", gen_out, "output CSV path")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit one model to a CSV dataset");
    std::string fit_data, fit_model_id, fit_out;
    fitkit::FitOptions fit_opts;
    fit_cmd->add_option("--data", fit_data, "input CSV")->required();
    fit_cmd->add_option("--model", fit_model_id, "model id")->required();
    fit_cmd->add_option("--starts", fit_opts.starts, "multi-start count");
    fit_cmd->add_option("--seed", fit_opts.seed, "multi-start PRNG seed");
    fit_cmd->add_option("--max-iter", fit_opts.max_iterations, "iteration cap");
    fit_cmd->add_option("--out", fit_out, "output report path")->required();

    // compare
    auto* cmp = app.add_subcommand("compare", "fit several models and rank them");
    std::string cmp_data, cmp_models, cmp_out, cmp_curves_dir;
    fitkit::FitOptions cmp_opts;
    cmp->add_option("--data", cmp_data, "input CSV")->required();
    cmp->add_option("--models", cmp_models, "comma-separated ids or 'all'")->required();
    cmp->add_option("--starts", cmp_opts.starts, "multi-start count");
    cmp->add_option("--seed", cmp_opts.seed, "multi-start PRNG seed");
    cmp->add_option("--max-iter", cmp_opts.max_iterations, "iteration cap");
    cmp->add_option("--out", cmp_out, "output report path")->required();
    cmp->add_option("--curves-dir", cmp_curves_dir, "emit one curve CSV per model here");

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate a model on a grid");
    std::string ev_model, ev_params, ev_grid, ev_out;
    ev->add_option("--model", ev_model, "model id")->required();
    ev->add_option("--params", ev_params, "JSON file with parameter values")->required();
    ev->add_option("--grid", ev_grid, "start:end:count")->required();
    ev->add_option("--out", ev_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_scenario, gen_preset, gen_grid, gen_noise_sd, gen_seed, gen_out);
        }
        if (fit_cmd->parsed()) {
            return run_fits(fit_data, resolve_model_list(fit_model_id), fit_opts, fit_out, "");
        }
        if (cmp->parsed()) {
            return run_fits(cmp_data, resolve_model_list(cmp_models), cmp_opts, cmp_out,
                            cmp_curves_dir);
        }
        if (ev->parsed()) return cmd_eval(ev_model, ev_params, ev_grid, ev_out);
    } catch (const fitkit::UnknownModel& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fitkit::InvalidGrid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fitkit::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const fitkit::PoleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const fitkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
