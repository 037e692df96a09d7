#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace survtest {

/// One subject: observed time min(T, C) and whether the event was seen.
struct Observation {
    double time = 0.0;
    bool event = true;

    Observation() = default;
    Observation(double t, bool ev) : time(t), event(ev) {
        if (!std::isfinite(t) || t < 0.0) {
            throw std::invalid_argument("observation time must be finite and >= 0, got " +
                                        std::to_string(t));
        }
    }

    friend bool operator==(const Observation&, const Observation&) = default;
};

inline Observation event_at(double t) { return {t, true}; }
inline Observation censored_at(double t) { return {t, false}; }

/// Two labelled samples. Both groups are non-empty and fixed after construction.
class TwoSampleDataset {
public:
    TwoSampleDataset(std::vector<Observation> group1, std::vector<Observation> group2)
        : group1_(std::move(group1)), group2_(std::move(group2)) {
        if (group1_.empty() || group2_.empty()) {
            throw std::invalid_argument("both groups must contain at least one observation");
        }
    }

    std::span<const Observation> group1() const noexcept { return group1_; }
    std::span<const Observation> group2() const noexcept { return group2_; }
    std::size_t n1() const noexcept { return group1_.size(); }
    std::size_t n2() const noexcept { return group2_.size(); }
    std::size_t size() const noexcept { return group1_.size() + group2_.size(); }

    /// Group 1 followed by group 2.
    std::vector<Observation> pooled() const {
        std::vector<Observation> all(group1_);
        all.insert(all.end(), group2_.begin(), group2_.end());
        return all;
    }

    TwoSampleDataset swapped() const { return {group2_, group1_}; }

private:
    std::vector<Observation> group1_;
    std::vector<Observation> group2_;
};

enum class Comparison { yes, no, indeterminate };

/// Whether `a` is known to outlast `b` given right censoring: a's time exceeds
/// an observed event of b, or the two tie with a censored and b an event.
inline Comparison definitely_greater(const Observation& a, const Observation& b) noexcept {
    auto greater = [](const Observation& x, const Observation& y) {
        return (x.time > y.time && y.event) || (x.time == y.time && !x.event && y.event);
    };
    if (greater(a, b)) return Comparison::yes;
    if (greater(b, a)) return Comparison::no;
    return Comparison::indeterminate;
}

}  // namespace survtest
