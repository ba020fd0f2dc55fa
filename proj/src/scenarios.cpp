#include "fitkit/scenarios.hpp"

#include <cmath>

#include "fitkit/rng.hpp"

namespace fitkit {

namespace {

double require_k1(const BuildingConfig& cfg) {
    const double k1 = cfg.k1();
    if (k1 == 0.0) throw DegenerateConfig("building config has K + K_U = 0");
    return k1;
}

double f1(const BuildingConfig& cfg, double t) {
    const double k1 = require_k1(cfg);
    const double r = BuildingConfig::omega / k1;
    return (std::cos(BuildingConfig::omega * t) + r * std::sin(BuildingConfig::omega * t)) /
           (1.0 + r * r);
}

}  // namespace

double BuildingConfig::B2() const {
    const double kk = k1();
    if (kk == 0.0) throw DegenerateConfig("building config has K + K_U = 0");
    return (K_U * T_D + K * M0 + H0) / kk;
}

double BuildingConfig::B1() const {
    const double kk = k1();
    if (kk == 0.0) throw DegenerateConfig("building config has K + K_U = 0");
    return B * K / kk;
}

double BuildingConfig::C() const { return T0 - B2() + B1() * f1(*this, 0.0); }

double MarketConfig::D() const {
    if (D_override) return *D_override;
    if (b() == 0.0) throw DegenerateConfig("market config has d1 + s1 = 0");
    return p_init - a() / b();
}

double malthusian(const PopulationConfig& cfg, double t) { return cfg.p0 * std::exp(cfg.k * t); }

double logistic(const PopulationConfig& cfg, double t) {
    const double denom = cfg.p0 + (cfg.p1 - cfg.p0) * std::exp(-cfg.A * cfg.p1 * t);
    if (std::abs(denom) < 1e-9 * std::abs(cfg.p0 * cfg.p1)) {
        throw PoleError("logistic denominator vanishes near t = " + std::to_string(t));
    }
    return cfg.p0 * cfg.p1 / denom;
}

double building_temperature(const BuildingConfig& cfg, double t) {
    const double k1 = require_k1(cfg);
    return cfg.B2() - cfg.B1() * f1(cfg, t) + cfg.C() * std::exp(-k1 * t);
}

double equilibrium_price(double d0, double d1, double s0, double s1) {
    if (d1 + s1 == 0.0) throw DegenerateConfig("d1 + s1 = 0 has no equilibrium price");
    return (d0 + s0) / (d1 + s1);
}

std::pair<double, double> market_quantities(const MarketConfig& cfg, double p, double p_dot) {
    const double qd = cfg.d0 - cfg.d1 * p + cfg.d2 * p_dot;
    const double qs = cfg.strict_eq21_signs ? -cfg.s0 - cfg.s1 * p - cfg.s2 * p_dot
                                            : -cfg.s0 + cfg.s1 * p + cfg.s2 * p_dot;
    return {qd, qs};
}

double market_price_linear(const MarketConfig& cfg, double t) {
    const double p_hat = equilibrium_price(cfg.d0, cfg.d1, cfg.s0, cfg.s1);
    const double c = -cfg.lambda * (cfg.d1 + cfg.s1);
    return (cfg.p_init - p_hat) * std::exp(c * t) + p_hat;
}

double market_price_expectations(const MarketConfig& cfg, double t) {
    if (cfg.b() == 0.0) throw DegenerateConfig("market config has d1 + s1 = 0");
    const double denom = cfg.c() * cfg.lambda - 1.0;
    if (denom == 0.0) throw DegenerateConfig("market config has c*lambda = 1");
    return cfg.D() * std::exp(cfg.lambda * cfg.b() * t / denom) + cfg.a() / cfg.b();
}

double scenario_value(const std::string& scenario_id, const ScenarioConfig& cfg, double t) {
    if (scenario_id == "malthusian") return malthusian(std::get<PopulationConfig>(cfg), t);
    if (scenario_id == "logistic") return logistic(std::get<PopulationConfig>(cfg), t);
    if (scenario_id == "temperature") return building_temperature(std::get<BuildingConfig>(cfg), t);
    if (scenario_id == "price_linear") return market_price_linear(std::get<MarketConfig>(cfg), t);
    if (scenario_id == "price_expectations") {
        return market_price_expectations(std::get<MarketConfig>(cfg), t);
    }
    throw UnknownModel("unknown scenario id '" + scenario_id + "'");
}

TimeSeries generate(const std::string& scenario_id, const ScenarioConfig& cfg,
                    const std::vector<double>& times, const NoiseConfig& noise) {
    std::vector<double> values;
    values.reserve(times.size());
    auto rng = seeded_stream(noise.seed, 0);
    for (double t : times) {
        double y = scenario_value(scenario_id, cfg, t);
        if (noise.sd > 0.0) y += noise.sd * standard_normal(rng);
        values.push_back(y);
    }
    return build_series(times, std::move(values));
}

PopulationConfig eq4_preset() { return PopulationConfig{76.09, 0.00065528, 0.0, 0.0}; }

PopulationConfig eq7_preset() {
    // k carries the growth rate implied by a year-2000 population of 275.4,
    // ln(275.4/76.09)/100; the logistic constants are the printed ones.
    return PopulationConfig{76.09, 0.012863077361061231, -2.921e4, -4.382e-7};
}

BuildingConfig eq18_preset() {
    BuildingConfig cfg;
    cfg.K = 1.11;
    cfg.K_U = -0.898;
    cfg.T_D = 76.41;
    cfg.H0 = 86.61;
    cfg.M0 = -9.56;
    cfg.B = -1.04;
    cfg.T0 = 32.09;
    return cfg;
}

MarketConfig eq24_preset() {
    MarketConfig cfg;
    cfg.d0 = 36.07;
    cfg.d1 = -0.01;
    cfg.d2 = 0.018;
    cfg.s0 = 0.0;
    cfg.s1 = 0.0;
    cfg.s2 = 0.0;
    cfg.lambda = -7.314;
    cfg.D_override = 3.282e-8;
    cfg.p_init = 3.282e-8 + 36.07 / -0.01;  // D + a/b
    return cfg;
}

nlohmann::json to_json(const PopulationConfig& cfg) {
    return {{"p0", cfg.p0}, {"k", cfg.k}, {"p1", cfg.p1}, {"A", cfg.A}};
}

nlohmann::json to_json(const BuildingConfig& cfg) {
    return {{"K", cfg.K},   {"K_U", cfg.K_U}, {"T_D", cfg.T_D}, {"H0", cfg.H0},
            {"M0", cfg.M0}, {"B", cfg.B},     {"T0", cfg.T0}};
}

nlohmann::json to_json(const MarketConfig& cfg) {
    nlohmann::json j{{"d0", cfg.d0},         {"d1", cfg.d1},
                     {"d2", cfg.d2},         {"s0", cfg.s0},
                     {"s1", cfg.s1},         {"s2", cfg.s2},
                     {"lambda", cfg.lambda}, {"p_init", cfg.p_init},
                     {"strict_eq21_signs", cfg.strict_eq21_signs}};
    if (cfg.D_override) j["D"] = *cfg.D_override;
    return j;
}

namespace {

double get_num(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ParseError(std::string("missing or non-numeric field '") + key + "'", 0);
    }
    return j.at(key).get<double>();
}

}  // namespace

PopulationConfig population_from_json(const nlohmann::json& j) {
    PopulationConfig cfg{get_num(j, "p0"), get_num(j, "k"), get_num(j, "p1"), get_num(j, "A")};
    if (!(cfg.p0 > 0.0)) throw DegenerateConfig("population config requires p0 > 0");
    return cfg;
}

BuildingConfig building_from_json(const nlohmann::json& j) {
    BuildingConfig cfg;
    cfg.K = get_num(j, "K");
    cfg.K_U = get_num(j, "K_U");
    cfg.T_D = get_num(j, "T_D");
    cfg.H0 = get_num(j, "H0");
    cfg.M0 = get_num(j, "M0");
    cfg.B = get_num(j, "B");
    cfg.T0 = get_num(j, "T0");
    return cfg;
}

MarketConfig market_from_json(const nlohmann::json& j) {
    MarketConfig cfg;
    cfg.d0 = get_num(j, "d0");
    cfg.d1 = get_num(j, "d1");
    cfg.d2 = get_num(j, "d2");
    cfg.s0 = get_num(j, "s0");
    cfg.s1 = get_num(j, "s1");
    cfg.s2 = get_num(j, "s2");
    cfg.lambda = get_num(j, "lambda");
    cfg.p_init = get_num(j, "p_init");
    if (j.contains("strict_eq21_signs")) cfg.strict_eq21_signs = j.at("strict_eq21_signs").get<bool>();
    if (j.contains("D")) cfg.D_override = get_num(j, "D");
    return cfg;
}

ScenarioConfig scenario_config_from_json(const std::string& scenario_id, const nlohmann::json& j) {
    if (scenario_id == "malthusian" || scenario_id == "logistic") return population_from_json(j);
    if (scenario_id == "temperature") return building_from_json(j);
    if (scenario_id == "price_linear" || scenario_id == "price_expectations") {
        return market_from_json(j);
    }
    throw UnknownModel("unknown scenario id '" + scenario_id + "'");
}

namespace oracle {

double rk4_integrate(const std::function<double(double, double)>& rhs, double y0, double t0,
                     double t1, double step) {
    double t = t0;
    double y = y0;
    while (t < t1) {
        const double h = std::min(step, t1 - t);
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + h / 2.0, y + h / 2.0 * k1);
        const double k3 = rhs(t + h / 2.0, y + h / 2.0 * k2);
        const double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return y;
}

std::function<double(double, double)> logistic_rhs(const PopulationConfig& cfg) {
    return [cfg](double, double p) { return -cfg.A * p * (p - cfg.p1); };
}

std::function<double(double, double)> building_rhs(const BuildingConfig& cfg) {
    return [cfg](double t, double T) {
        const double M = cfg.M0 - cfg.B * std::cos(BuildingConfig::omega * t);
        return cfg.K * (M - T) + cfg.H0 + cfg.K_U * (cfg.T_D - T);
    };
}

std::function<double(double, double)> price_linear_rhs(const MarketConfig& cfg) {
    return [cfg](double, double p) {
        MarketConfig flat = cfg;
        flat.d2 = flat.s2 = 0.0;
        auto [qd, qs] = market_quantities(flat, p, 0.0);
        return cfg.lambda * (qd - qs);
    };
}

}  // namespace oracle

}  // namespace fitkit
