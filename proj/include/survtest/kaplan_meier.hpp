#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "survtest/observation.hpp"

namespace survtest {

struct KMStep {
    double time;
    std::size_t at_risk;
    std::size_t events;
    double survival;  // value from `time` onwards

    friend bool operator==(const KMStep&, const KMStep&) = default;
};

/// Right-continuous product-limit curve, S = 1 before the first step.
struct KMCurve {
    std::vector<KMStep> steps;
};

enum class Side { left, right };

/// Product-limit estimate over the distinct event times. Censorings tied with
/// an event time stay in that time's risk set.
inline KMCurve km_fit(std::span<const Observation> observations) {
    if (observations.empty()) {
        throw std::invalid_argument("km_fit: no observations");
    }
    std::vector<Observation> sorted(observations.begin(), observations.end());
    std::sort(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
        return a.time < b.time;
    });

    KMCurve curve;
    double surv = 1.0;
    std::size_t at_risk = sorted.size();
    for (std::size_t i = 0; i < sorted.size();) {
        const double t = sorted[i].time;
        std::size_t events = 0;
        std::size_t j = i;
        for (; j < sorted.size() && sorted[j].time == t; ++j) {
            if (sorted[j].event) ++events;
        }
        if (events > 0) {
            surv *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
            curve.steps.push_back({t, at_risk, events, surv});
        }
        at_risk -= j - i;
        i = j;
    }
    return curve;
}

/// S(t) for Side::right, S(t-) for Side::left.
inline double km_eval(const KMCurve& curve, double t, Side side) noexcept {
    const auto& s = curve.steps;
    auto it = side == Side::right
                  ? std::upper_bound(s.begin(), s.end(), t,
                                     [](double v, const KMStep& st) { return v < st.time; })
                  : std::lower_bound(s.begin(), s.end(), t,
                                     [](const KMStep& st, double v) { return st.time < v; });
    return it == s.begin() ? 1.0 : std::prev(it)->survival;
}

}  // namespace survtest
