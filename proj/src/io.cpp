#include "fitkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fitkit {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& token, std::size_t line_no) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseError("empty numeric field", line_no);
    const char* begin = t.data();
    const char* end = begin + t.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("cannot parse '" + t + "' as a number", line_no);
    }
    return value;
}

nlohmann::json stats_to_json(const FitStatistics& st) {
    // fixed public statistic names
    return {{"sse", st.sse},         {"r2", st.r_squared}, {"dfe", st.dfe},
            {"adj_r2", st.adj_r_squared}, {"rmse", st.rmse},    {"sst", st.sst},
            {"n", st.n},             {"k", st.k}};
}

FitStatistics stats_from_json(const nlohmann::json& j) {
    FitStatistics st;
    st.sse = j.at("sse").get<double>();
    st.r_squared = j.at("r2").get<double>();
    st.dfe = j.at("dfe").get<std::size_t>();
    st.adj_r_squared = j.at("adj_r2").get<double>();
    st.rmse = j.at("rmse").get<double>();
    st.sst = j.at("sst").get<double>();
    st.n = j.at("n").get<std::size_t>();
    st.k = j.at("k").get<std::size_t>();
    return st;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

TimeSeries read_csv(std::istream& in) {
    std::vector<double> times, values;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (first_data_line && t == "t,y") {
            first_data_line = false;
            continue;
        }
        first_data_line = false;
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw ParseError("expected exactly two comma-separated fields", line_no);
        }
        times.push_back(parse_number(t.substr(0, comma), line_no));
        values.push_back(parse_number(t.substr(comma + 1), line_no));
    }
    return build_series(std::move(times), std::move(values));
}

TimeSeries read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return read_csv(in);
}

std::string write_report(const Report& report) {
    nlohmann::json doc;
    doc["dataset"] = {{"source", report.source}, {"n", report.n}, {"sst", report.sst}};
    doc["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json je;
        je["model_id"] = e.model_id;
        nlohmann::json params = nlohmann::json::object();
        for (std::size_t i = 0; i < e.params.size(); ++i) {
            params[e.params.names()[i]] = e.params.values()[i];
        }
        je["params"] = params;
        je["converged"] = e.converged;
        je["termination_reason"] = e.termination_reason;
        je["start_index"] = e.start_index;
        if (e.statistics) je["stats"] = stats_to_json(*e.statistics);
        doc["entries"].push_back(je);
    }
    doc["ranking"] = report.ranking;
    doc["version"] = report.version;
    doc["seed"] = report.seed;
    return doc.dump(2) + "\n";
}

Report read_report(const std::string& json_text) {
    const nlohmann::json doc = nlohmann::json::parse(json_text);
    Report report;
    report.source = doc.at("dataset").at("source").get<std::string>();
    report.n = doc.at("dataset").at("n").get<std::size_t>();
    report.sst = doc.at("dataset").at("sst").get<double>();
    for (const auto& je : doc.at("entries")) {
        ReportEntry e;
        e.model_id = je.at("model_id").get<std::string>();
        std::vector<std::string> names;
        std::vector<double> values;
        for (const auto& [name, value] : je.at("params").items()) {
            names.push_back(name);
            values.push_back(value.get<double>());
        }
        e.params = ParamVector(std::move(names), std::move(values));
        e.converged = je.at("converged").get<bool>();
        e.termination_reason = je.at("termination_reason").get<std::string>();
        e.start_index = je.at("start_index").get<int>();
        if (je.contains("stats")) e.statistics = stats_from_json(je.at("stats"));
        report.entries.push_back(std::move(e));
    }
    report.ranking = doc.at("ranking").get<std::vector<std::string>>();
    report.version = doc.at("version").get<std::string>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    return report;
}

std::string emit_curve(const std::string& model_id, const ParamVector& params, double t_start,
                       double t_end, std::size_t steps) {
    if (steps < 2) throw InvalidGrid("curve grid needs steps >= 2");
    if (!(t_start < t_end)) throw InvalidGrid("curve grid needs t_start < t_end");
    std::ostringstream out;
    out << "t,y\n";
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = (i == steps)
                             ? t_end
                             : t_start + (t_end - t_start) * static_cast<double>(i) /
                                             static_cast<double>(steps);
        const double y = evaluate(model_id, params, t);
        out << format_double(t) << ',' << format_double(y) << '\n';
    }
    return out.str();
}

}  // namespace fitkit
