#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fitkit/data.hpp"
#include "fitkit/errors.hpp"

namespace fitkit {

// Named parameter values for one model instance. Order follows the
// model's param_names.
class ParamVector {
public:
    ParamVector() = default;
    ParamVector(std::vector<std::string> names, std::vector<double> values);

    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    double at(const std::string& name) const;
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
};

// One parametric family: identifier, parameter list, evaluation rule and
// default-guess rule. The eval callable throws DomainError where the
// formula is undefined.
struct ModelSpec {
    std::string id;
    std::vector<std::string> param_names;
    bool literal_rendering = false;  // printed-as-in-source formulas with known issues
    std::function<double(std::span<const double>, double)> eval;
    std::function<std::vector<double>(const TimeSeries&)> guess;

    std::size_t k() const { return param_names.size(); }
    ParamVector make_params(std::vector<double> values) const;
};

// All distinct model families, stable order. gauss2/exp2/sin3 are shared
// between the temperature and price catalogs and appear once.
const std::vector<ModelSpec>& catalog();

const ModelSpec& model(const std::string& id);  // throws UnknownModel

double evaluate(const std::string& id, const ParamVector& params, double t);
double evaluate(const ModelSpec& spec, std::span<const double> params, double t);

std::vector<double> evaluate_series(const std::string& id, const ParamVector& params,
                                    const std::vector<double>& times);

ParamVector initial_guess(const std::string& id, const TimeSeries& s);  // throws TooFewPoints

}  // namespace fitkit
