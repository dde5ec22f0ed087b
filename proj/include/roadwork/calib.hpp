#pragma once

#include "roadwork/classify.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace roadwork::calib {

using feed::TrafficStatus;

struct CalibrationSample {
    double speed_kmh = 0.0;
    TrafficStatus status = TrafficStatus::Unknown;   // one of the four levels
};

struct StatusGaussian {
    TrafficStatus status = TrafficStatus::Unknown;
    double mean_kmh = 0.0;
    double std_kmh = 0.0;
    int n = 0;
};

struct StatusRange {
    TrafficStatus status = TrafficStatus::Unknown;
    double lo_kmh = 0.0;    // inclusive
    double hi_kmh = 0.0;    // exclusive except for the top range
    double rep_kmh = 0.0;   // representative speed, the fitted mean
};

// Per-status speed ranges and representative speeds. Ranges are ordered
// Severe < Congested < Slow < Smooth and partition [0, v_max].
struct QuantizationTable {
    std::array<StatusRange, 4> ranges{};   // severe, congested, slow, smooth
    double v_max_kmh = 0.0;

    const StatusRange& range(TrafficStatus s) const;
};

// Per-status sample mean and sample standard deviation (n-1 denominator),
// returned in ascending order of mean. Each status present needs at least
// two samples and nonzero variance.
std::vector<StatusGaussian> fit_status_gaussians(const std::vector<CalibrationSample>& samples);

// Speed where the two fitted normal densities are equal, strictly between
// the two means (g1.mean < g2.mean required). Midpoint of the means when
// the deviations are equal.
double gaussian_boundary(const StatusGaussian& g1, const StatusGaussian& g2);

// Builds the table from four fits whose means are strictly ordered
// Severe < Congested < Slow < Smooth; boundaries are the three adjacent
// density intersections, representatives the means.
QuantizationTable build_table(const std::vector<StatusGaussian>& gaussians, double v_max_kmh);

// Representative speed for a status; Unknown is rejected.
double quantify(TrafficStatus status, const QuantizationTable& table);

// Upper bound for the table: design speed + 10 km/h unless an observed
// speed exceeds that.
double default_v_max(double design_speed_kmh, const std::vector<CalibrationSample>& samples);

// --- persistence -----------------------------------------------------------
// Table CSV: status,lo_kmh,hi_kmh,rep_kmh ; samples CSV: speed_kmh,status

void save_table_csv(const std::filesystem::path& path, const QuantizationTable& table);
QuantizationTable load_table_csv(const std::filesystem::path& path);
std::vector<CalibrationSample> load_samples_csv(const std::filesystem::path& path);
void save_samples_csv(const std::filesystem::path& path,
                      const std::vector<CalibrationSample>& samples);

} // namespace roadwork::calib
