#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace survtest {

enum class Method { gehan, cox_mantel, logrank, peto_peto, proposed };

inline constexpr std::array<Method, 5> all_methods{Method::gehan, Method::cox_mantel,
                                                   Method::logrank, Method::peto_peto,
                                                   Method::proposed};

inline constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::gehan: return "gehan";
        case Method::cox_mantel: return "cox_mantel";
        case Method::logrank: return "logrank";
        case Method::peto_peto: return "peto_peto";
        case Method::proposed: return "proposed";
    }
    return "?";
}

inline std::optional<Method> method_from_string(std::string_view s) noexcept {
    for (Method m : all_methods) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

/// Upper tail of the standard normal.
inline double normal_sf(double z) noexcept { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline double two_sided_normal_p(double z) noexcept {
    return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

/// Upper tail of chi-square with one degree of freedom.
inline double chi2_1_sf(double x) noexcept {
    return x <= 0.0 ? 1.0 : std::erfc(std::sqrt(0.5 * x));
}

/// Result of one two-sample test. `standardized` is z for the normal-reference
/// tests and X^2 for the log-rank test.
struct TestOutcome {
    Method method;
    double statistic;
    double null_expectation;
    double null_variance;
    double standardized;
    double p_value;
    bool small_sample = false;  // asymptotic reference suspect, min(n1, n2) < 10
};

inline TestOutcome normal_outcome(Method m, double stat, double mean, double var) {
    const double z = (stat - mean) / std::sqrt(var);
    return {m, stat, mean, var, z, two_sided_normal_p(z)};
}

}  // namespace survtest
