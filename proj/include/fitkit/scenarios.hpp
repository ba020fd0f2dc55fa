#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fitkit/data.hpp"
#include "fitkit/errors.hpp"

namespace fitkit {

// Population case study. Time unit: years since 1900, values in millions.
struct PopulationConfig {
    double p0 = 0.0;  // initial population (millions)
    double k = 0.0;   // Malthusian rate (1/year)
    double p1 = 0.0;  // logistic second root (millions)
    double A = 0.0;   // logistic coefficient (1/(millions*year))
};

// Building temperature case study. Time unit: hours since midnight.
struct BuildingConfig {
    double K = 0.0;    // building transfer constant (1/hr)
    double K_U = 0.0;  // furnace/AC proportionality constant (1/hr)
    double T_D = 0.0;  // desired temperature (deg)
    double H0 = 0.0;   // constant internal heating rate (deg/hr)
    double M0 = 0.0;   // mean outside temperature (deg)
    double B = 0.0;    // outside-temperature amplitude (deg)
    double T0 = 0.0;   // initial inside temperature (deg)

    static constexpr double omega = std::numbers::pi / 12.0;  // rad/hr

    double k1() const { return K + K_U; }
    double B2() const;  // steady offset (K_U*T_D + K*M0 + H0)/k1
    double B1() const;  // forcing amplitude B*K/k1
    double C() const;   // chosen so that T(0) = T0
};

// Market price case study. Time unit: months.
struct MarketConfig {
    double d0 = 0.0, d1 = 0.0, d2 = 0.0;  // demand intercept/slope/expectation
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;  // supply counterparts
    double lambda = 1.0;                  // adjustment speed
    double p_init = 0.0;                  // p(0)
    bool strict_eq21_signs = false;       // literal supply-sign variant
    std::optional<double> D_override;     // explicit integration constant

    double a() const { return d0 + s0; }
    double b() const { return d1 + s1; }
    double c() const { return d2 + s2; }
    double D() const;  // p_init - a/b unless overridden
};

struct NoiseConfig {
    double sd = 0.0;
    std::uint64_t seed = 0;
};

using ScenarioConfig = std::variant<PopulationConfig, BuildingConfig, MarketConfig>;

double malthusian(const PopulationConfig& cfg, double t);
double logistic(const PopulationConfig& cfg, double t);  // PoleError near the denominator root
double building_temperature(const BuildingConfig& cfg, double t);
double equilibrium_price(double d0, double d1, double s0, double s1);
// (quantity demanded, quantity supplied) at (p, p_dot)
std::pair<double, double> market_quantities(const MarketConfig& cfg, double p, double p_dot);
double market_price_linear(const MarketConfig& cfg, double t);
double market_price_expectations(const MarketConfig& cfg, double t);

// Closed-form value of a named scenario at t. Ids: malthusian, logistic,
// temperature, price_linear, price_expectations.
double scenario_value(const std::string& scenario_id, const ScenarioConfig& cfg, double t);

// Closed-form samples plus seeded Gaussian noise (mt19937_64 + Box-Muller;
// sd = 0 reproduces the closed form exactly).
TimeSeries generate(const std::string& scenario_id, const ScenarioConfig& cfg,
                    const std::vector<double>& times, const NoiseConfig& noise);

// Case-study presets.
PopulationConfig eq4_preset();   // Malthusian constants
PopulationConfig eq7_preset();   // logistic constants (k carries the implied ~0.0129 rate)
BuildingConfig eq18_preset();
MarketConfig eq24_preset();

// Scenario config <-> JSON with the exact field names of the structs above.
nlohmann::json to_json(const PopulationConfig& cfg);
nlohmann::json to_json(const BuildingConfig& cfg);
nlohmann::json to_json(const MarketConfig& cfg);
PopulationConfig population_from_json(const nlohmann::json& j);
BuildingConfig building_from_json(const nlohmann::json& j);
MarketConfig market_from_json(const nlohmann::json& j);
ScenarioConfig scenario_config_from_json(const std::string& scenario_id, const nlohmann::json& j);

namespace oracle {

// Fixed-step classic Runge-Kutta; verification oracle for the closed forms.
double rk4_integrate(const std::function<double(double, double)>& rhs, double y0, double t0,
                     double t1, double step);

std::function<double(double, double)> logistic_rhs(const PopulationConfig& cfg);
std::function<double(double, double)> building_rhs(const BuildingConfig& cfg);
// Price adjustment without expectation terms (d2 = s2 = 0 path).
std::function<double(double, double)> price_linear_rhs(const MarketConfig& cfg);

}  // namespace oracle

}  // namespace fitkit
