#pragma once

// Real-data examples shipped with the library (data/datasets/*.csv).

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "survtest/builtin_data.hpp"
#include "survtest/dataset_io.hpp"
#include "survtest/random.hpp"

namespace survtest {

struct EmbeddedDataset {
    std::string_view id;
    std::string_view title;
    std::string_view group1_label;
    std::string_view group2_label;
    std::string_view csv;
};

inline constexpr std::array<EmbeddedDataset, 4> embedded_datasets{{
    {"gastric", "Locally advanced nonresectable gastric carcinoma trial",
     "chemotherapy + radiation", "chemotherapy", builtin::gastric_csv},
    {"dmba_rats", "Vaginal cancer in rats exposed to DMBA", "group I", "group II",
     builtin::dmba_rats_csv},
    {"myeloma", "Multiple myeloma survival by gender", "male", "female", builtin::myeloma_csv},
    {"melanoma", "Resected melanoma immunotherapy", "BCG", "C. parvum", builtin::melanoma_csv},
}};

inline std::optional<EmbeddedDataset> find_embedded(std::string_view id) noexcept {
    for (const auto& d : embedded_datasets) {
        if (d.id == id) return d;
    }
    return std::nullopt;
}

inline TwoSampleDataset load_embedded(const EmbeddedDataset& d) { return parse_dataset_csv(d.csv); }

/// FNV-1a checksum recorded for `<id>.csv` in data/datasets/CHECKSUMS.
inline std::optional<std::uint64_t> recorded_checksum(std::string_view id) {
    std::istringstream in{std::string(builtin::dataset_checksums)};
    const std::string file = std::string(id) + ".csv";
    for (std::string hex, name; in >> hex >> name;) {
        if (name == file) return std::stoull(hex, nullptr, 16);
    }
    return std::nullopt;
}

inline bool checksum_matches(const EmbeddedDataset& d) {
    const auto rec = recorded_checksum(d.id);
    return rec && *rec == fnv1a64(d.csv);
}

}  // namespace survtest
