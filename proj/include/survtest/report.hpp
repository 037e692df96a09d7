#pragma once

// TSV and JSON renderings of test and simulation results. The JSON layouts are
// pinned by schema/test_report.schema.json and schema/study_report.schema.json.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "survtest/monte_carlo.hpp"
#include "survtest/two_sample.hpp"

namespace survtest {

struct MethodReport {
    Method method;
    std::optional<TestOutcome> outcome;
    std::string error;  // set when outcome is empty
};

/// Runs every requested method; a degenerate method is reported, not fatal.
inline std::vector<MethodReport> run_tests(const TwoSampleDataset& ds,
                                           const std::vector<Method>& methods) {
    std::vector<MethodReport> out;
    for (Method m : methods) {
        try {
            out.push_back({m, run_test(m, ds), {}});
        } catch (const DegenerateError& e) {
            out.push_back({m, std::nullopt, e.what()});
        }
    }
    return out;
}

inline std::string test_report_tsv(const std::vector<MethodReport>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "method\tstatistic\tstandardized\tp_value\tstatus\n";
    for (const auto& r : rows) {
        os << to_string(r.method) << '\t';
        if (r.outcome) {
            os << r.outcome->statistic << '\t' << r.outcome->standardized << '\t'
               << r.outcome->p_value << '\t' << (r.outcome->small_sample ? "small_sample" : "ok");
        } else {
            os << "NA\tNA\tNA\terror: " << r.error;
        }
        os << '\n';
    }
    return os.str();
}

inline nlohmann::json test_report_json(const std::string& dataset, const TwoSampleDataset& ds,
                                       const std::vector<MethodReport>& rows) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j{{"method", to_string(r.method)}};
        if (r.outcome) {
            j["statistic"] = r.outcome->statistic;
            j["null_expectation"] = r.outcome->null_expectation;
            j["null_variance"] = r.outcome->null_variance;
            j["standardized"] = r.outcome->standardized;
            j["p_value"] = r.outcome->p_value;
            j["small_sample"] = r.outcome->small_sample;
        } else {
            j["error"] = r.error;
        }
        results.push_back(std::move(j));
    }
    return {{"dataset", dataset}, {"n1", ds.n1()}, {"n2", ds.n2()}, {"results", results}};
}

inline std::string study_report_tsv(const std::vector<StudyResult>& studies) {
    std::ostringstream os;
    os.precision(10);
    os << "method\tscenario\trejections\treplications\trate\tmc_se\tdegenerate_count\n";
    for (const auto& s : studies) {
        for (const auto& t : s.tallies) {
            os << to_string(t.method) << '\t' << s.scenario_id << '\t' << t.rejections << '\t'
               << s.replications << '\t';
            if (s.usable(t)) {
                os << s.rate(t) << '\t' << s.mc_se(t);
            } else {
                os << "NA\tNA";
            }
            os << '\t' << t.degenerate << '\n';
        }
    }
    return os.str();
}

inline nlohmann::json study_report_json(const std::string& kind, std::uint64_t seed,
                                        const std::vector<StudyResult>& studies,
                                        const std::optional<AcceptanceInterval>& interval = {}) {
    nlohmann::json scenarios = nlohmann::json::array();
    for (const auto& s : studies) {
        nlohmann::json results = nlohmann::json::array();
        for (const auto& t : s.tallies) {
            const bool ok = s.usable(t);
            results.push_back({{"method", to_string(t.method)},
                               {"scenario", s.scenario_id},
                               {"rejections", t.rejections},
                               {"replications", s.replications},
                               {"rate", ok ? nlohmann::json(s.rate(t)) : nlohmann::json()},
                               {"mc_se", ok ? nlohmann::json(s.mc_se(t)) : nlohmann::json()},
                               {"degenerate_count", t.degenerate},
                               {"usable", ok}});
        }
        scenarios.push_back(
            {{"id", s.scenario_id},
             {"replications", s.replications},
             {"alpha", s.alpha},
             {"reference_censoring",
              s.reference_censoring ? nlohmann::json(*s.reference_censoring) : nlohmann::json()},
             {"realized_censoring",
              {{"group1", s.censoring_fraction1()}, {"group2", s.censoring_fraction2()}}},
             {"results", results}});
    }
    nlohmann::json out{{"study", kind}, {"seed", seed}, {"scenarios", scenarios}};
    if (interval) out["acceptance_interval"] = {{"lo", interval->lo}, {"hi", interval->hi}};
    return out;
}

}  // namespace survtest
