#include "fitkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace fitkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared ingredients for the default-guess heuristics.
struct SeriesShape {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double amp = 0.0;          // (max - min) / 2
    double rate = 0.0;         // ln(y_n/y_1)/(t_n - t_1) when y shares sign, else 0
    double span = 1.0;         // t_n - t_1 (1 for a single point)
    double t_first = 0.0;
    double t_mid = 0.0;
    double peak1_t = 0.0;      // abscissa of the largest value
    double peak2_t = 0.0;      // abscissa of the largest value at least span/8 away
};

SeriesShape shape_of(const TimeSeries& s) {
    SeriesShape sh;
    const auto& y = s.values();
    const auto& t = s.times();
    const std::size_t n = s.n();
    double sum = 0.0;
    sh.min = sh.max = y[0];
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += y[i];
        if (y[i] < sh.min) sh.min = y[i];
        if (y[i] > sh.max) {
            sh.max = y[i];
            imax = i;
        }
    }
    sh.mean = sum / static_cast<double>(n);
    sh.amp = (sh.max - sh.min) / 2.0;
    sh.t_first = t.front();
    if (n > 1) {
        sh.span = t.back() - t.front();
        sh.t_mid = t.front() + sh.span / 2.0;
        const double y1 = y.front();
        const double yn = y.back();
        if (y1 * yn > 0.0) sh.rate = std::log(yn / y1) / sh.span;
    } else {
        sh.t_mid = t.front();
    }
    sh.peak1_t = t[imax];
    sh.peak2_t = sh.peak1_t;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(t[i] - sh.peak1_t) < sh.span / 8.0) continue;
        if (y[i] > best) {
            best = y[i];
            sh.peak2_t = t[i];
        }
    }
    return sh;
}

// ln y = ln a + b ln t - c t on the points where both are positive.
std::vector<double> mcnally_guess(const TimeSeries& s, const SeriesShape& sh) {
    std::vector<double> lt, lly, tt;
    for (std::size_t i = 0; i < s.n(); ++i) {
        if (s.time(i) > 0.0 && s.value(i) > 0.0) {
            lt.push_back(std::log(s.time(i)));
            tt.push_back(s.time(i));
            lly.push_back(std::log(s.value(i)));
        }
    }
    if (lt.size() < 3) return {std::max(sh.max, 1.0), 0.5, -sh.rate};
    const auto m = static_cast<Eigen::Index>(lt.size());
    Eigen::MatrixXd X(m, 3);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = lt[static_cast<std::size_t>(i)];
        X(i, 2) = tt[static_cast<std::size_t>(i)];
        b(i) = lly[static_cast<std::size_t>(i)];
    }
    Eigen::Vector3d c = (X.transpose() * X).ldlt().solve(X.transpose() * b);
    if (!c.allFinite()) return {std::max(sh.max, 1.0), 0.5, -sh.rate};
    double expo = c(1);
    // a sample at t = 0 demands b > 0; nudge a degenerate LSQ exponent inside
    if (s.time(0) == 0.0 && expo <= 0.0) expo = 0.1;
    return {std::exp(c(0)), expo, -c(2)};
}

double guarded_pow(double base, double expo, double t) {
    if (base < 0.0) throw DomainError("negative base raised to real power", t);
    return std::pow(base, expo);
}

std::vector<ModelSpec> make_catalog() {
    std::vector<ModelSpec> out;

    // --- population families -------------------------------------------------

    out.push_back(ModelSpec{
        "nelder1961",
        {"A", "k", "lambda", "theta"},
        true,
        [](std::span<const double> p, double t) {
            const double A = p[0], k = p[1], lambda = p[2], theta = p[3];
            return A * std::pow(1.0 + std::exp(-(lambda * k * t) / theta), -theta);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{std::max(sh.max, 1.0), 1.0, sh.rate, 1.0};
        }});

    out.push_back(ModelSpec{
        "mcmillan1980",
        {"A", "k1", "k2"},
        false,
        [](std::span<const double> p, double t) {
            const double A = p[0], k1 = p[1], k2 = p[2];
            return A * (std::exp(-k2 * t) - std::exp(-k1 * t));
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{std::max(sh.max, 1.0), 1.0, -sh.rate};
        }});

    out.push_back(ModelSpec{
        "mcmillan1970",
        {"a", "x", "c", "d", "c1"},
        true,
        [](std::span<const double> p, double t) {
            const double a = p[0], x = p[1], c = p[2], d = p[3], c1 = p[4];
            if (x + c1 == 0.0) throw DomainError("mcmillan1970: x + c1 = 0", t);
            const double denom = (x + c) - std::exp(-x * t) / (x + c1);
            if (denom == 0.0) throw DomainError("mcmillan1970: zero denominator", t);
            return a * std::exp(-x * t - c * t + c * d) / denom;
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{std::max(sh.max, 1.0), 0.5, 0.3, 0.0, 1.0};
        }});

    out.push_back(ModelSpec{
        "mcnally1971",
        {"a", "b", "c"},
        false,
        [](std::span<const double> p, double t) {
            const double a = p[0], b = p[1], c = p[2];
            if (t < 0.0) throw DomainError("mcnally1971: t < 0", t);
            if (t == 0.0) {
                // convention: 0^b = 0 for b > 0, undefined otherwise
                if (b > 0.0) return 0.0;
                throw DomainError("mcnally1971: t = 0 with b <= 0", t);
            }
            return a * std::pow(t, b) * std::exp(-c * t);
        },
        [](const TimeSeries& s) { return mcnally_guess(s, shape_of(s)); }});

    out.push_back(ModelSpec{
        "yang1989",
        {"a", "x", "c", "d"},
        false,
        [](std::span<const double> p, double t) {
            const double a = p[0], x = p[1], c = p[2], d = p[3];
            return a * std::exp(-x * t) / (1.0 + std::exp(-c * (t - d)));
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{std::max(sh.max, 1.0), -sh.rate, 1.0, sh.t_mid};
        }});

    // --- temperature families ------------------------------------------------

    out.push_back(ModelSpec{
        "exp_sin",
        {"a0", "a1", "a2", "b1", "f"},
        false,
        [](std::span<const double> p, double t) {
            const double a0 = p[0], a1 = p[1], a2 = p[2], b1 = p[3], f = p[4];
            return (a0 + b1 * std::sin(a1 * t - a2)) * std::exp(f * t);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{sh.mean, kTwoPi / sh.span, 0.0, sh.amp, 0.0};
        }});

    out.push_back(ModelSpec{
        "fourier2",
        {"a0", "a1", "b1", "a2", "b2", "w"},
        false,
        [](std::span<const double> p, double t) {
            const double a0 = p[0], a1 = p[1], b1 = p[2], a2 = p[3], b2 = p[4], w = p[5];
            return a0 + a1 * std::cos(w * t) + b1 * std::sin(w * t) +
                   a2 * std::cos(2.0 * w * t) + b2 * std::sin(2.0 * w * t);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{sh.mean, sh.amp, sh.amp, 0.0, 0.0, kTwoPi / sh.span};
        }});

    out.push_back(ModelSpec{
        "gauss2",
        {"a1", "b1", "c1", "a2", "b2", "c2"},
        false,
        [](std::span<const double> p, double t) {
            const double a1 = p[0], b1 = p[1], c1 = p[2];
            const double a2 = p[3], b2 = p[4], c2 = p[5];
            if (c1 == 0.0 || c2 == 0.0) throw DomainError("gauss2: zero width", t);
            const double u1 = (t - b1) / c1;
            const double u2 = (t - b2) / c2;
            return a1 * std::exp(-u1 * u1) + a2 * std::exp(-u2 * u2);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            const double w = sh.span / 4.0;
            return std::vector<double>{sh.max, sh.peak1_t, w, sh.max, sh.peak2_t, w};
        }});

    out.push_back(ModelSpec{
        "exp2",
        {"a", "b", "c", "d"},
        false,
        [](std::span<const double> p, double t) {
            const double a = p[0], b = p[1], c = p[2], d = p[3];
            return a * std::exp(b * t) + c * std::exp(d * t);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            const double amp = sh.amp != 0.0 ? sh.amp : 1.0;
            return std::vector<double>{sh.mean, sh.rate, 0.1 * amp, 4.0 / sh.span};
        }});

    out.push_back(ModelSpec{
        "sin3",
        {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"},
        false,
        [](std::span<const double> p, double t) {
            return p[0] * std::sin(p[1] * t + p[2]) + p[3] * std::sin(p[4] * t + p[5]) +
                   p[6] * std::sin(p[7] * t + p[8]);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            const double w = kTwoPi / sh.span;
            return std::vector<double>{sh.amp,       w,           0.0,
                                       sh.amp / 2.0, 2.0 * w,     0.0,
                                       sh.amp / 3.0, 3.0 * w,     0.0};
        }});

    // --- price families ------------------------------------------------------

    out.push_back(ModelSpec{
        "distr_exp",
        {"A", "B", "C", "F", "G"},
        true,
        [](std::span<const double> p, double t) {
            const double A = p[0], B = p[1], C = p[2], F = p[3], G = p[4];
            if (t < 0.0) throw DomainError("distr_exp: t < 0", t);
            const double base = A * t * t + B * t + C;
            if (base <= 0.0) throw DomainError("distr_exp: non-positive base", t);
            const double expo = (t == 0.0) ? 0.0 : F * std::pow(t, G);
            return guarded_pow(base, expo, t);
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            return std::vector<double>{0.0, 0.0, std::max(std::abs(sh.mean), 1.0), 0.01, 1.0};
        }});

    out.push_back(ModelSpec{
        "rat21",
        {"p1", "p2", "p3", "q1"},
        false,
        [](std::span<const double> p, double t) {
            const double p1 = p[0], p2 = p[1], p3 = p[2], q1 = p[3];
            const double denom = t + q1;
            if (denom == 0.0) throw DomainError("rat21: pole at t = -q1", t);
            return (p1 * t * t + p2 * t + p3) / denom;
        },
        [](const TimeSeries& s) {
            const auto sh = shape_of(s);
            const double q1 = sh.span + 1.0 - sh.t_first;
            return std::vector<double>{0.0, 0.0, s.value(0) * (sh.t_first + q1), q1};
        }});

    return out;
}

}  // namespace

ParamVector::ParamVector(std::vector<std::string> names, std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (names_.size() != values_.size()) {
        throw IncompleteParams("parameter names and values differ in length");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw NonFinite("non-finite parameter value");
    }
}

double ParamVector::at(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return values_[i];
    }
    throw IncompleteParams("no parameter named '" + name + "'");
}

ParamVector ModelSpec::make_params(std::vector<double> values) const {
    if (values.size() != param_names.size()) {
        throw IncompleteParams("model '" + id + "' expects " +
                               std::to_string(param_names.size()) + " parameters, got " +
                               std::to_string(values.size()));
    }
    return ParamVector(param_names, std::move(values));
}

const std::vector<ModelSpec>& catalog() {
    static const std::vector<ModelSpec> specs = make_catalog();
    return specs;
}

const ModelSpec& model(const std::string& id) {
    for (const auto& m : catalog()) {
        if (m.id == id) return m;
    }
    throw UnknownModel("unknown model id '" + id + "'");
}

double evaluate(const ModelSpec& spec, std::span<const double> params, double t) {
    if (params.size() != spec.k()) {
        throw IncompleteParams("model '" + spec.id + "' expects " + std::to_string(spec.k()) +
                               " parameters, got " + std::to_string(params.size()));
    }
    return spec.eval(params, t);
}

double evaluate(const std::string& id, const ParamVector& params, double t) {
    return evaluate(model(id), params.values(), t);
}

std::vector<double> evaluate_series(const std::string& id, const ParamVector& params,
                                    const std::vector<double>& times) {
    const ModelSpec& spec = model(id);
    std::vector<double> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        try {
            out.push_back(evaluate(spec, params.values(), times[i]));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (index " + std::to_string(i) + ")",
                              times[i]);
        }
    }
    return out;
}

ParamVector initial_guess(const std::string& id, const TimeSeries& s) {
    const ModelSpec& spec = model(id);
    if (s.n() < spec.k()) {
        throw TooFewPoints("model '" + id + "' needs at least " + std::to_string(spec.k()) +
                           " points, series has " + std::to_string(s.n()));
    }
    return spec.make_params(spec.guess(s));
}

}  // namespace fitkit
