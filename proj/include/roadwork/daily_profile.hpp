#pragma once

#include "roadwork/calib.hpp"
#include "roadwork/store.hpp"

#include <vector>

namespace roadwork::feed {

// Average day built from a multi-day observation series: one bin per
// time-of-day slot, mean of the per-day quantified speeds.
struct DailyProfile {
    int bin_seconds = 0;
    struct Bin {
        bool missing = true;
        double mean_kmh = 0.0;
        int days = 0;   // days contributing at least one usable observation
    };
    std::vector<Bin> bins;   // 86400 / bin_seconds entries
};

// Quantifies each observation via the table and averages: first within
// each (day, bin), then across days. Unknown observations are skipped;
// bins nobody covers stay flagged missing. Output does not depend on the
// input ordering.
DailyProfile aggregate_daily_profile(const std::vector<Observation>& observations,
                                     int bin_seconds, const calib::QuantizationTable& table);

} // namespace roadwork::feed
