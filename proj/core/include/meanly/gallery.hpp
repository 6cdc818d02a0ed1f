#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meanly/report.hpp"

namespace meanly {

// Knobs shared by every gallery manifest. Reports echo the effective values
// in their config block, so a report is reproducible from its own JSON;
// timings appends per-block runtime notices and is the one switch that makes
// consecutive runs differ byte-for-byte.
struct GalleryOverrides {
    std::optional<int> k_max;         // profile depth where one applies
    std::optional<int64_t> horizon;   // scan horizon where one applies
    std::optional<int64_t> budget;    // evaluation budget for searches
    bool timings = false;
};

struct GalleryEntry {
    std::string name;
    std::string summary;
    CheckReport (*run)(const GalleryOverrides&);
};

// registry in stable order; names never change across releases
const std::vector<GalleryEntry>& gallery_entries();
std::vector<std::string> gallery_list();

// runs one manifest; unknown names raise DomainError
CheckReport gallery_run(const std::string& name,
                        const GalleryOverrides& overrides = {});

// Closed-form decay of the profile midpoints v_{j_k} = (2k)^{-1/6}(k+2)^{1/8}
// and v_{-j_k} = (2k+1)^{-1/6}(k+1)^{1/8}: one value entry per level (each
// checked nonincreasing against its predecessor) plus a threshold entry at
// the deepest level of each side.
CheckReport hypercyclicity_indicator(const std::vector<int>& ks,
                                     double threshold = 0.51);

}  // namespace meanly
