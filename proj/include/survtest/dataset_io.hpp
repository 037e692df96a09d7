#pragma once

// CSV ingestion and export. Rows are `time,event,group` with event in {0,1}
// and group in {1,2}; a leading header row is detected and skipped.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "survtest/distributions.hpp"
#include "survtest/kaplan_meier.hpp"
#include "survtest/observation.hpp"

namespace survtest {

class DatasetParseError : public std::runtime_error {
public:
    DatasetParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline TwoSampleDataset parse_dataset_csv(std::string_view text) {
    std::vector<Observation> groups[2];
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    bool seen_row = false;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(detail::trim(f));

        if (!seen_row) {
            seen_row = true;
            // header: first field is not numeric
            bool numeric = true;
            try {
                detail::parse_number(fields.empty() ? "" : fields[0], "time");
            } catch (const std::invalid_argument&) {
                numeric = false;
            }
            if (!numeric) continue;
        }
        if (fields.size() != 3) {
            throw DatasetParseError(line_no, "expected 3 fields (time,event,group), got " +
                                                 std::to_string(fields.size()));
        }
        double time = 0.0;
        try {
            time = detail::parse_number(fields[0], "time");
        } catch (const std::invalid_argument& e) {
            throw DatasetParseError(line_no, std::string("field 1 (time): ") + e.what());
        }
        if (!std::isfinite(time) || time < 0.0) {
            throw DatasetParseError(line_no, "field 1 (time): must be finite and >= 0, got '" +
                                                 fields[0] + "'");
        }
        if (fields[1] != "0" && fields[1] != "1") {
            throw DatasetParseError(line_no, "field 2 (event): must be 0 or 1, got '" +
                                                 fields[1] + "'");
        }
        if (fields[2] != "1" && fields[2] != "2") {
            throw DatasetParseError(line_no, "field 3 (group): must be 1 or 2, got '" +
                                                 fields[2] + "'");
        }
        groups[fields[2] == "2"].emplace_back(time, fields[1] == "1");
    }
    if (groups[0].empty() || groups[1].empty()) {
        throw DatasetParseError(std::max<std::size_t>(line_no, 1), std::string("group ") + (groups[0].empty() ? "1" : "2") +
                                             " has no observations");
    }
    return {std::move(groups[0]), std::move(groups[1])};
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline TwoSampleDataset load_dataset(const std::filesystem::path& path) {
    return parse_dataset_csv(read_file(path));
}

inline std::string format_dataset_csv(const TwoSampleDataset& ds) {
    std::ostringstream os;
    os.precision(17);
    os << "time,event,group\n";
    for (const auto& o : ds.group1()) os << o.time << ',' << int(o.event) << ",1\n";
    for (const auto& o : ds.group2()) os << o.time << ',' << int(o.event) << ",2\n";
    return os.str();
}

/// Columns time, at_risk, events, survival. The first row is the curve's
/// origin (time 0, S = 1), so a curve without events is a single row.
inline std::string format_km_csv(const KMCurve& curve, std::size_t n) {
    std::ostringstream os;
    os.precision(17);
    os << "time,at_risk,events,survival\n";
    os << 0 << ',' << n << ',' << 0 << ',' << 1 << '\n';
    for (const auto& s : curve.steps) {
        os << s.time << ',' << s.at_risk << ',' << s.events << ',' << s.survival << '\n';
    }
    return os.str();
}

/// Writes <stem>_group1.csv and <stem>_group2.csv; returns their paths.
inline std::vector<std::filesystem::path> export_km(const TwoSampleDataset& ds,
                                                    const std::filesystem::path& stem) {
    std::vector<std::filesystem::path> written;
    const std::span<const Observation> groups[] = {ds.group1(), ds.group2()};
    for (int g = 0; g < 2; ++g) {
        auto path = stem;
        path += "_group" + std::to_string(g + 1) + ".csv";
        write_file(path, format_km_csv(km_fit(groups[g]), groups[g].size()));
        written.push_back(path);
    }
    return written;
}

}  // namespace survtest
