#pragma once

// Scenario files: line-oriented `key = value` entries grouped under
// `[scenario-id]` headers. `#` starts a comment. Recognised keys:
//
//   event, event1, event2      distribution text, e.g. weibull3(0, 2, 2)
//   cens, cens1, cens2         distribution text or `none`
//   n, n1, n2                  group sizes
//   alpha, replications, seed
//   methods                    comma-separated list or `all`
//   reference_censoring        tabulated censoring percentage (informational)
//
// `event` and `cens` set both groups. Keys before the first header form
// defaults inherited by every section.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "survtest/distributions.hpp"
#include "survtest/outcome.hpp"

namespace survtest {

struct ScenarioConfig {
    std::string id = "custom";
    DistributionSpec event1 = Exponential{1.0};
    DistributionSpec event2 = Exponential{1.0};
    std::optional<DistributionSpec> cens1;
    std::optional<DistributionSpec> cens2;
    std::size_t n1 = 50;
    std::size_t n2 = 50;
    double alpha = 0.05;
    std::size_t replications = 10000;
    std::uint64_t master_seed = 0;
    std::vector<Method> methods{all_methods.begin(), all_methods.end()};
    std::optional<double> reference_censoring;

    void validate() const {
        if (n1 < 2 || n2 < 2) throw std::invalid_argument(id + ": n1 and n2 must be >= 2");
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw std::invalid_argument(id + ": alpha must lie in (0, 1]");
        }
        if (replications < 1) throw std::invalid_argument(id + ": replications must be >= 1");
        if (methods.empty()) throw std::invalid_argument(id + ": no methods requested");
    }
};

class ScenarioParseError : public std::runtime_error {
public:
    ScenarioParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::vector<Method> parse_methods(const std::string& text) {
    const std::string t = detail::trim(text);
    if (t == "all") return {all_methods.begin(), all_methods.end()};
    std::vector<Method> out;
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');) {
        item = detail::trim(item);
        const auto m = method_from_string(item);
        if (!m) throw std::invalid_argument("unknown method '" + item + "'");
        out.push_back(*m);
    }
    return out;
}

namespace detail {

inline std::size_t parse_count(const std::string& v, const std::string& key) {
    const double d = parse_number(v, key);
    if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
        throw std::invalid_argument(key + ": '" + v + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(d);
}

inline void apply_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    auto cens = [&]() -> std::optional<DistributionSpec> {
        if (value == "none") return std::nullopt;
        return parse_distribution(value);
    };
    if (key == "event") {
        cfg.event1 = cfg.event2 = parse_distribution(value);
    } else if (key == "event1") {
        cfg.event1 = parse_distribution(value);
    } else if (key == "event2") {
        cfg.event2 = parse_distribution(value);
    } else if (key == "cens") {
        cfg.cens1 = cfg.cens2 = cens();
    } else if (key == "cens1") {
        cfg.cens1 = cens();
    } else if (key == "cens2") {
        cfg.cens2 = cens();
    } else if (key == "n") {
        cfg.n1 = cfg.n2 = parse_count(value, key);
    } else if (key == "n1") {
        cfg.n1 = parse_count(value, key);
    } else if (key == "n2") {
        cfg.n2 = parse_count(value, key);
    } else if (key == "alpha") {
        cfg.alpha = parse_number(value, key);
    } else if (key == "replications") {
        cfg.replications = parse_count(value, key);
    } else if (key == "seed") {
        cfg.master_seed = std::stoull(value);
    } else if (key == "methods") {
        cfg.methods = parse_methods(value);
    } else if (key == "reference_censoring") {
        cfg.reference_censoring = parse_number(value, key);
    } else {
        throw std::invalid_argument("unknown key '" + key + "'");
    }
}

}  // namespace detail

inline std::vector<ScenarioConfig> parse_scenarios(std::string_view text) {
    std::vector<ScenarioConfig> out;
    ScenarioConfig defaults;
    ScenarioConfig* current = &defaults;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ScenarioParseError(line_no, "malformed section header");
            }
            out.push_back(defaults);
            out.back().id = detail::trim(line.substr(1, line.size() - 2));
            current = &out.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ScenarioParseError(line_no, "expected key = value");
        try {
            detail::apply_key(*current, detail::trim(line.substr(0, eq)),
                              detail::trim(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw ScenarioParseError(line_no, e.what());
        }
    }
    if (out.empty()) out.push_back(defaults);
    for (const auto& cfg : out) cfg.validate();
    return out;
}

inline std::string format_scenario(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << '[' << cfg.id << "]\n";
    os << "event1 = " << to_string(cfg.event1) << '\n';
    os << "event2 = " << to_string(cfg.event2) << '\n';
    os << "cens1 = " << (cfg.cens1 ? to_string(*cfg.cens1) : "none") << '\n';
    os << "cens2 = " << (cfg.cens2 ? to_string(*cfg.cens2) : "none") << '\n';
    os << "n1 = " << cfg.n1 << "\nn2 = " << cfg.n2 << '\n';
    os << "alpha = " << cfg.alpha << '\n';
    os << "replications = " << cfg.replications << '\n';
    os << "seed = " << cfg.master_seed << '\n';
    os << "methods = ";
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        os << (i ? "," : "") << to_string(cfg.methods[i]);
    }
    os << '\n';
    if (cfg.reference_censoring) os << "reference_censoring = " << *cfg.reference_censoring << '\n';
    return os.str();
}

}  // namespace survtest
