#pragma once

// Parametric event/censoring families used by the simulation engine, with
// survival, density, quantile and sampling, plus crossing-point search and
// censoring-rate calibration.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "survtest/error.hpp"
#include "survtest/random.hpp"

namespace survtest {

namespace detail {
inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
}  // namespace detail

struct Exponential {
    double rate;
    explicit Exponential(double r) : rate(r) {
        detail::require(r > 0.0 && std::isfinite(r), "exponential: rate must be > 0");
    }
    friend bool operator==(const Exponential&, const Exponential&) = default;
};

/// S(t) = exp(-((t - location) / scale)^shape) for t > location, 1 otherwise.
struct Weibull3 {
    double location;
    double scale;
    double shape;
    Weibull3(double loc, double sc, double sh) : location(loc), scale(sc), shape(sh) {
        detail::require(loc >= 0.0 && std::isfinite(loc), "weibull3: location must be >= 0");
        detail::require(sc > 0.0 && std::isfinite(sc), "weibull3: scale must be > 0");
        detail::require(sh > 0.0 && std::isfinite(sh), "weibull3: shape must be > 0");
    }
    friend bool operator==(const Weibull3&, const Weibull3&) = default;
};

struct Gamma {
    double shape;
    double rate;
    Gamma(double k, double beta) : shape(k), rate(beta) {
        detail::require(k > 0.0 && std::isfinite(k), "gamma: shape must be > 0");
        detail::require(beta > 0.0 && std::isfinite(beta), "gamma: rate must be > 0");
    }
    static Gamma with_scale(double k, double scale) {
        detail::require(scale > 0.0 && std::isfinite(scale), "gamma: scale must be > 0");
        return {k, 1.0 / scale};
    }
    friend bool operator==(const Gamma&, const Gamma&) = default;
};

struct LogNormal {
    double meanlog;
    double sdlog;
    LogNormal(double mu, double sigma) : meanlog(mu), sdlog(sigma) {
        detail::require(std::isfinite(mu), "lognormal: meanlog must be finite");
        detail::require(sigma > 0.0 && std::isfinite(sigma), "lognormal: sdlog must be > 0");
    }
    friend bool operator==(const LogNormal&, const LogNormal&) = default;
};

/// S(t) = 1 / (1 + (t / scale)^shape).
struct LogLogistic {
    double shape;
    double scale;
    LogLogistic(double b, double a) : shape(b), scale(a) {
        detail::require(b > 0.0 && std::isfinite(b), "loglogistic: shape must be > 0");
        detail::require(a > 0.0 && std::isfinite(a), "loglogistic: scale must be > 0");
    }
    friend bool operator==(const LogLogistic&, const LogLogistic&) = default;
};

/// Uniform on (0, theta).
struct Uniform {
    double theta;
    explicit Uniform(double th) : theta(th) {
        detail::require(th > 0.0 && std::isfinite(th), "uniform: theta must be > 0");
    }
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

using DistributionSpec = std::variant<Exponential, Weibull3, Gamma, LogNormal, LogLogistic, Uniform>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double std_normal_quantile(double p) {
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

/// Lower end of the support.
inline double location(const DistributionSpec& d) noexcept {
    if (const auto* w = std::get_if<Weibull3>(&d)) return w->location;
    return 0.0;
}

inline double survival(const DistributionSpec& spec, double t) {
    if (t <= location(spec)) return 1.0;
    return std::visit(
        overloaded{
            [t](const Exponential& d) { return std::exp(-d.rate * t); },
            [t](const Weibull3& d) {
                return std::exp(-std::pow((t - d.location) / d.scale, d.shape));
            },
            [t](const Gamma& d) { return boost::math::gamma_q(d.shape, d.rate * t); },
            [t](const LogNormal& d) {
                return 0.5 * std::erfc((std::log(t) - d.meanlog) / (d.sdlog * std::sqrt(2.0)));
            },
            [t](const LogLogistic& d) { return 1.0 / (1.0 + std::pow(t / d.scale, d.shape)); },
            [t](const Uniform& d) { return t >= d.theta ? 0.0 : 1.0 - t / d.theta; },
        },
        spec);
}

inline double density(const DistributionSpec& spec, double t) {
    if (t < location(spec) || t <= 0.0) return 0.0;
    return std::visit(
        overloaded{
            [t](const Exponential& d) { return d.rate * std::exp(-d.rate * t); },
            [t](const Weibull3& d) {
                if (t == d.location) return 0.0;
                const double z = (t - d.location) / d.scale;
                return d.shape / d.scale * std::pow(z, d.shape - 1.0) *
                       std::exp(-std::pow(z, d.shape));
            },
            [t](const Gamma& d) {
                return d.rate * boost::math::gamma_p_derivative(d.shape, d.rate * t);
            },
            [t](const LogNormal& d) {
                const double z = (std::log(t) - d.meanlog) / d.sdlog;
                return std::exp(-0.5 * z * z) / (t * d.sdlog * std::sqrt(2.0 * M_PI));
            },
            [t](const LogLogistic& d) {
                const double z = std::pow(t / d.scale, d.shape);
                return d.shape / t * z / ((1.0 + z) * (1.0 + z));
            },
            [t](const Uniform& d) { return t < d.theta ? 1.0 / d.theta : 0.0; },
        },
        spec);
}

/// Inverse CDF: the t with P(T <= t) = p.
inline double quantile(const DistributionSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("quantile: p must lie in (0, 1)");
    }
    const double tail = -std::log1p(-p);  // -log S
    return std::visit(
        overloaded{
            [&](const Exponential& d) { return tail / d.rate; },
            [&](const Weibull3& d) { return d.location + d.scale * std::pow(tail, 1.0 / d.shape); },
            [&](const Gamma& d) { return boost::math::gamma_p_inv(d.shape, p) / d.rate; },
            [&](const LogNormal& d) {
                return std::exp(d.meanlog + d.sdlog * std_normal_quantile(p));
            },
            [&](const LogLogistic& d) { return d.scale * std::pow(p / (1.0 - p), 1.0 / d.shape); },
            [&](const Uniform& d) { return p * d.theta; },
        },
        spec);
}

namespace detail {

/// Marsaglia-Tsang; shapes below one use the u^(1/k) boost.
inline double sample_gamma_unit(double k, RandomStream& rng) {
    if (k < 1.0) {
        const double g = sample_gamma_unit(k + 1.0, rng);
        return g * std::pow(rng.uniform(), 1.0 / k);
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace detail

inline double sample_one(const DistributionSpec& spec, RandomStream& rng) {
    return std::visit(
        overloaded{
            [&](const Gamma& d) { return detail::sample_gamma_unit(d.shape, rng) / d.rate; },
            [&](const LogNormal& d) { return std::exp(d.meanlog + d.sdlog * rng.normal()); },
            [&](const auto&) { return quantile(spec, rng.uniform()); },
        },
        spec);
}

inline std::vector<double> sample(const DistributionSpec& spec, std::size_t n, RandomStream& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = sample_one(spec, rng);
    return out;
}

// ---------------------------------------------------------------------------
// Crossing points
// ---------------------------------------------------------------------------

struct CrossingReport {
    std::vector<double> times;
    double lo = 0.0;
    double hi = 0.0;
    double tolerance = 0.0;  // worst |S_a - S_b| over the reported roots
};

/// [max location + 1e-9, 0.999-quantile of the longer-tailed distribution].
inline std::pair<double, double> default_crossing_bracket(const DistributionSpec& a,
                                                          const DistributionSpec& b) {
    return {std::max(location(a), location(b)) + 1e-9,
            std::max(quantile(a, 0.999), quantile(b, 0.999))};
}

/// Scans S_a - S_b on `grid_points` equally spaced points and bisects each
/// sign-change cell until the bracket is narrower than `tol` and the curves
/// agree to within `tol`.
inline CrossingReport find_crossings(const DistributionSpec& a, const DistributionSpec& b,
                                     double lo, double hi, double tol,
                                     std::size_t grid_points = 10000) {
    if (!(lo < hi)) throw std::invalid_argument("find_crossings: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("find_crossings: need tol > 0");
    grid_points = std::max<std::size_t>(grid_points, 2);

    auto diff = [&](double t) { return survival(a, t) - survival(b, t); };
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

    CrossingReport report{{}, lo, hi, 0.0};
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    // last nonzero sign seen, to catch roots sitting exactly on a grid point
    int s_last = sign(diff(lo));
    double t_last = lo;
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double t = i + 1 == grid_points ? hi : lo + step * static_cast<double>(i);
        const double d = diff(t);
        const int s = sign(d);
        if (s != 0 && s_last != 0 && s != s_last) {
            double left = t_last;
            double right = t;
            double d_left = diff(left);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (left + right);
                const double d_mid = diff(mid);
                if ((right - left) < tol && std::fabs(d_mid) <= tol) break;
                if (sign(d_mid) == sign(d_left)) {
                    left = mid;
                    d_left = d_mid;
                } else {
                    right = mid;
                }
            }
            const double root = 0.5 * (left + right);
            report.times.push_back(root);
            report.tolerance = std::max(report.tolerance, std::fabs(diff(root)));
        }
        if (s != 0) {
            s_last = s;
            t_last = t;
        }
    }
    return report;
}

inline CrossingReport find_crossings(const DistributionSpec& a, const DistributionSpec& b,
                                     double tol) {
    const auto [lo, hi] = default_crossing_bracket(a, b);
    return find_crossings(a, b, lo, hi, tol);
}

// ---------------------------------------------------------------------------
// Censoring rates
// ---------------------------------------------------------------------------

/// P(C < T) = integral of f_C(c) S_T(c) over the support of C.
inline double censoring_fraction(const DistributionSpec& event, const DistributionSpec& cens) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double c) { return density(cens, c) * survival(event, c); };

    const double lo = location(cens);
    double hi = std::numeric_limits<double>::infinity();
    if (const auto* u = std::get_if<Uniform>(&cens)) hi = u->theta;

    // Split at the kinks of the integrand so each piece is smooth.
    std::vector<double> cuts{lo};
    const double event_loc = location(event);
    if (event_loc > lo && event_loc < hi) cuts.push_back(event_loc);
    if (std::isinf(hi)) {
        const double body = quantile(cens, 0.999999);
        if (body > cuts.back()) cuts.push_back(body);
    }
    cuts.push_back(hi);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-12);
    }
    return std::clamp(total, 0.0, 1.0);
}

/// theta such that Uniform(0, theta) censoring of `event` hits `target`.
inline double calibrate_uniform_theta(const DistributionSpec& event, double target) {
    if (!(target > 0.0 && target < 1.0)) {
        throw std::invalid_argument("calibrate: target must lie in (0, 1)");
    }
    auto excess = [&](double theta) {
        return censoring_fraction(event, Uniform{theta}) - target;
    };
    // Censoring falls from 1 (theta -> 0) towards 0 as theta grows.
    double lo = 1e-8;
    double hi = 1.0;
    if (excess(lo) <= 0.0) throw CalibrationError("calibrate: target above attainable censoring");
    for (int i = 0; excess(hi) > 0.0; ++i) {
        if (i == 200) throw CalibrationError("calibrate: cannot bracket target censoring");
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double theta = 0.5 * (lo + hi);
    if (std::fabs(excess(theta)) > 1e-4) {
        throw CalibrationError("calibrate: root finder did not converge");
    }
    return theta;
}

// ---------------------------------------------------------------------------
// Text form: family(p1, p2, ...), e.g. "weibull3(0, 2, 2)" or
// "gamma(shape=3.12154, scale=0.557706)".
// ---------------------------------------------------------------------------

inline std::string to_string(const DistributionSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Exponential& d) { os << "exponential(" << d.rate << ")"; },
                   [&](const Weibull3& d) {
                       os << "weibull3(" << d.location << ", " << d.scale << ", " << d.shape
                          << ")";
                   },
                   [&](const Gamma& d) { os << "gamma(" << d.shape << ", " << d.rate << ")"; },
                   [&](const LogNormal& d) {
                       os << "lognormal(" << d.meanlog << ", " << d.sdlog << ")";
                   },
                   [&](const LogLogistic& d) {
                       os << "loglogistic(" << d.shape << ", " << d.scale << ")";
                   },
                   [&](const Uniform& d) { os << "uniform(" << d.theta << ")"; },
               },
               spec);
    return os.str();
}

namespace detail {

inline std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_number(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw std::invalid_argument(context + ": '" + text + "' is not a number");
    }
    return v;
}

}  // namespace detail

inline DistributionSpec parse_distribution(const std::string& text) {
    const std::string s = detail::trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw std::invalid_argument("distribution '" + s + "': expected family(params)");
    }
    std::string family = detail::trim(s.substr(0, open));
    std::transform(family.begin(), family.end(), family.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    std::vector<double> args;
    std::vector<std::string> names;
    std::stringstream body(s.substr(open + 1, s.size() - open - 2));
    for (std::string item; std::getline(body, item, ',');) {
        item = detail::trim(item);
        std::string name;
        if (const auto eq = item.find('='); eq != std::string::npos) {
            name = detail::trim(item.substr(0, eq));
            item = detail::trim(item.substr(eq + 1));
        }
        names.push_back(name);
        args.push_back(detail::parse_number(item, family));
    }
    auto arity = [&](std::size_t n) {
        if (args.size() != n) {
            throw std::invalid_argument(family + ": expected " + std::to_string(n) +
                                        " parameters, got " + std::to_string(args.size()));
        }
    };

    if (family == "exponential" || family == "exp") {
        arity(1);
        return Exponential{args[0]};
    }
    if (family == "weibull3" || family == "weibull") {
        if (args.size() == 2) return Weibull3{0.0, args[0], args[1]};
        arity(3);
        return Weibull3{args[0], args[1], args[2]};
    }
    if (family == "gamma") {
        arity(2);
        if (names[1] == "scale") return Gamma::with_scale(args[0], args[1]);
        if (!names[1].empty() && names[1] != "rate") {
            throw std::invalid_argument("gamma: second parameter must be rate or scale");
        }
        return Gamma{args[0], args[1]};
    }
    if (family == "lognormal") {
        arity(2);
        return LogNormal{args[0], args[1]};
    }
    if (family == "loglogistic") {
        arity(2);
        return LogLogistic{args[0], args[1]};
    }
    if (family == "uniform") {
        if (args.size() == 2) {
            if (args[0] != 0.0) throw std::invalid_argument("uniform: lower bound must be 0");
            return Uniform{args[1]};
        }
        arity(1);
        return Uniform{args[0]};
    }
    throw std::invalid_argument("unknown distribution family '" + family + "'");
}

}  // namespace survtest
