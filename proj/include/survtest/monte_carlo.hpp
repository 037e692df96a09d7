#pragma once

// Monte Carlo size/power engine. Replication i of a scenario always draws from
// RandomStream::substream(master_seed, i), and workers only add integer
// counts, so a StudyResult is bit-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "survtest/builtin_data.hpp"
#include "survtest/distributions.hpp"
#include "survtest/observation.hpp"
#include "survtest/random.hpp"
#include "survtest/scenario.hpp"
#include "survtest/two_sample.hpp"

namespace survtest {

/// Seed for a named scenario within a study seeded by `seed`.
inline std::uint64_t scenario_seed(std::uint64_t seed, std::string_view id) noexcept {
    return mix_key(seed, fnv1a64(id));
}

struct ReplicationDraw {
    std::vector<double> event1;
    std::vector<double> cens1;  // empty when group 1 is uncensored
    std::vector<double> event2;
    std::vector<double> cens2;
    TwoSampleDataset data;
};

namespace detail {

inline std::vector<Observation> observe(const std::vector<double>& events,
                                        const std::vector<double>& cens) {
    std::vector<Observation> out;
    out.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (cens.empty() || events[i] <= cens[i]) {
            out.emplace_back(events[i], true);
        } else {
            out.emplace_back(cens[i], false);
        }
    }
    return out;
}

}  // namespace detail

/// Draw order: group-1 events, group-1 censorings, group-2 events, group-2 censorings.
inline ReplicationDraw simulate_once(const ScenarioConfig& cfg, RandomStream& stream) {
    auto e1 = sample(cfg.event1, cfg.n1, stream);
    auto c1 = cfg.cens1 ? sample(*cfg.cens1, cfg.n1, stream) : std::vector<double>{};
    auto e2 = sample(cfg.event2, cfg.n2, stream);
    auto c2 = cfg.cens2 ? sample(*cfg.cens2, cfg.n2, stream) : std::vector<double>{};
    TwoSampleDataset ds(detail::observe(e1, c1), detail::observe(e2, c2));
    return {std::move(e1), std::move(c1), std::move(e2), std::move(c2), std::move(ds)};
}

struct MethodTally {
    Method method;
    std::size_t rejections = 0;
    std::size_t degenerate = 0;
};

struct StudyResult {
    std::string scenario_id;
    std::size_t replications = 0;
    double alpha = 0.05;
    std::vector<MethodTally> tallies;
    std::size_t censored1 = 0;  // censored subjects summed over replications
    std::size_t censored2 = 0;
    std::size_t subjects1 = 0;
    std::size_t subjects2 = 0;
    std::optional<double> reference_censoring;

    /// Replications in which the method produced a p-value.
    std::size_t effective(const MethodTally& t) const noexcept {
        return replications - t.degenerate;
    }
    bool usable(const MethodTally& t) const noexcept { return effective(t) > 0; }
    double rate(const MethodTally& t) const noexcept {
        return usable(t) ? static_cast<double>(t.rejections) / static_cast<double>(effective(t))
                         : std::nan("");
    }
    double mc_se(const MethodTally& t) const noexcept {
        const double r = rate(t);
        return std::sqrt(r * (1.0 - r) / static_cast<double>(effective(t)));
    }
    const MethodTally& tally(Method m) const {
        for (const auto& t : tallies) {
            if (t.method == m) return t;
        }
        throw std::out_of_range("method not part of this study");
    }
    double rate(Method m) const { return rate(tally(m)); }
    double censoring_fraction1() const noexcept {
        return static_cast<double>(censored1) / static_cast<double>(subjects1);
    }
    double censoring_fraction2() const noexcept {
        return static_cast<double>(censored2) / static_cast<double>(subjects2);
    }
};

/// Runs cfg.replications replications on `workers` threads (0 = hardware
/// concurrency). Degenerate tests are counted apart and left out of the rate.
inline StudyResult rejection_rates(const ScenarioConfig& cfg, unsigned workers = 0) {
    cfg.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(1, cfg.replications / 64)));

    struct Partial {
        std::vector<MethodTally> tallies;
        std::size_t censored1 = 0;
        std::size_t censored2 = 0;
    };
    std::vector<Partial> partials(workers);
    std::atomic<std::size_t> next{0};
    constexpr std::size_t chunk = 64;

    auto work = [&](Partial& local) {
        for (Method m : cfg.methods) local.tallies.push_back({m});
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= cfg.replications) break;
            const std::size_t end = std::min(begin + chunk, cfg.replications);
            for (std::size_t i = begin; i < end; ++i) {
                auto stream = RandomStream::substream(cfg.master_seed, i);
                const auto draw = simulate_once(cfg, stream);
                for (const auto& o : draw.data.group1()) local.censored1 += !o.event;
                for (const auto& o : draw.data.group2()) local.censored2 += !o.event;
                for (auto& t : local.tallies) {
                    try {
                        if (run_test(t.method, draw.data).p_value < cfg.alpha) ++t.rejections;
                    } catch (const DegenerateError&) {
                        ++t.degenerate;
                    }
                }
            }
        }
    };

    if (workers == 1) {
        work(partials[0]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (auto& p : partials) pool.emplace_back(work, std::ref(p));
    }

    StudyResult result;
    result.scenario_id = cfg.id;
    result.replications = cfg.replications;
    result.alpha = cfg.alpha;
    result.reference_censoring = cfg.reference_censoring;
    result.subjects1 = cfg.n1 * cfg.replications;
    result.subjects2 = cfg.n2 * cfg.replications;
    for (Method m : cfg.methods) result.tallies.push_back({m});
    for (const auto& p : partials) {
        result.censored1 += p.censored1;
        result.censored2 += p.censored2;
        for (std::size_t k = 0; k < p.tallies.size(); ++k) {
            result.tallies[k].rejections += p.tallies[k].rejections;
            result.tallies[k].degenerate += p.tallies[k].degenerate;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Built-in studies
// ---------------------------------------------------------------------------

struct AcceptanceInterval {
    double lo;
    double hi;
    bool contains(double r) const noexcept { return r > lo && r < hi; }
};

/// (alpha - 0.001 - z se, alpha + 0.001 + z se), se = sqrt(alpha (1 - alpha) / R);
/// (0.0447, 0.0553) at alpha = 0.05, R = 10000.
inline AcceptanceInterval size_acceptance_interval(double alpha, std::size_t replications) {
    constexpr double z975 = 1.959963984540054;
    const double half = z975 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(replications));
    return {alpha - 0.001 - half, alpha + 0.001 + half};
}

/// Table of the size grid: four families, no censoring plus four uniform
/// censoring levels, n1 = n2 = 50. Each row's seed is derived from `seed`
/// and the row id.
inline std::vector<ScenarioConfig> builtin_size_grid(std::size_t replications,
                                                     std::uint64_t seed) {
    auto grid = parse_scenarios(builtin::size_grid_scn);
    for (auto& cfg : grid) {
        cfg.replications = replications;
        cfg.master_seed = scenario_seed(seed, cfg.id);
    }
    return grid;
}

inline std::vector<StudyResult> size_study(const std::vector<ScenarioConfig>& grid,
                                           unsigned workers = 0) {
    std::vector<StudyResult> out;
    out.reserve(grid.size());
    for (const auto& cfg : grid) out.push_back(rejection_rates(cfg, workers));
    return out;
}

enum class PowerCase { I, II, III, IV, V };

inline std::string_view to_string(PowerCase c) noexcept {
    static constexpr std::string_view names[] = {"I", "II", "III", "IV", "V"};
    return names[static_cast<int>(c)];
}

inline std::optional<PowerCase> power_case_from_string(std::string_view s) noexcept {
    for (int i = 0; i < 5; ++i) {
        if (to_string(static_cast<PowerCase>(i)) == s) return static_cast<PowerCase>(i);
    }
    return std::nullopt;
}

inline constexpr std::size_t power_sizes[] = {50, 100, 200};
inline constexpr int power_censoring_levels[] = {0, 10, 20, 30, 40, 50};

inline std::string power_scenario_id(PowerCase c, int censoring_percent) {
    return "power/" + std::string(to_string(c)) + "/c" + std::to_string(censoring_percent);
}

/// Event specs for the case and group-wise Weibull censoring for the level.
inline ScenarioConfig power_scenario(PowerCase c, std::size_t n, int censoring_percent,
                                     std::size_t replications, std::uint64_t seed) {
    if (std::find(std::begin(power_sizes), std::end(power_sizes), n) == std::end(power_sizes)) {
        throw std::invalid_argument("power: n must be one of 50, 100, 200");
    }
    const auto id = power_scenario_id(c, censoring_percent);
    for (auto& cfg : parse_scenarios(builtin::power_cases_scn)) {
        if (cfg.id != id) continue;
        cfg.n1 = cfg.n2 = n;
        cfg.replications = replications;
        cfg.id = id + "/n" + std::to_string(n);
        cfg.master_seed = scenario_seed(seed, cfg.id);
        return cfg;
    }
    throw std::invalid_argument("power: censoring level must be one of 0, 10, 20, 30, 40, 50");
}

inline StudyResult power_study(PowerCase c, std::size_t n, int censoring_percent,
                               std::size_t replications, std::uint64_t seed,
                               unsigned workers = 0) {
    return rejection_rates(power_scenario(c, n, censoring_percent, replications, seed), workers);
}

}  // namespace survtest
