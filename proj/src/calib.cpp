#include "roadwork/calib.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/stats.hpp"
#include "roadwork/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace roadwork::calib {

using feed::to_string;

const StatusRange& QuantizationTable::range(TrafficStatus s) const {
    for (const auto& r : ranges)
        if (r.status == s) return r;
    throw InputError("status not present in quantization table: " + to_string(s));
}

std::vector<StatusGaussian> fit_status_gaussians(const std::vector<CalibrationSample>& samples) {
    std::map<TrafficStatus, std::vector<double>> by_status;
    for (const auto& s : samples) {
        if (s.status == TrafficStatus::Unknown)
            throw InputError("calibration sample with Unknown status");
        if (!(s.speed_kmh >= 0) || !std::isfinite(s.speed_kmh))
            throw InputError("calibration sample speed must be finite and >= 0");
        by_status[s.status].push_back(s.speed_kmh);
    }
    if (by_status.empty()) throw InputError("no calibration samples");

    std::vector<StatusGaussian> fits;
    for (const auto& [status, speeds] : by_status) {
        if (speeds.size() < 2)
            throw InputError("status " + to_string(status) + " has fewer than 2 samples");
        StatusGaussian g;
        g.status = status;
        g.mean_kmh = stats::mean(speeds);
        g.std_kmh = stats::sample_std(speeds);
        g.n = static_cast<int>(speeds.size());
        if (!(g.std_kmh > 0))
            throw InputError("status " + to_string(status) + " has zero speed variance");
        fits.push_back(g);
    }
    std::sort(fits.begin(), fits.end(),
              [](const StatusGaussian& a, const StatusGaussian& b) { return a.mean_kmh < b.mean_kmh; });
    return fits;
}

double gaussian_boundary(const StatusGaussian& g1, const StatusGaussian& g2) {
    if (!(g1.mean_kmh < g2.mean_kmh))
        throw InputError("gaussian_boundary expects g1.mean < g2.mean");
    if (!(g1.std_kmh > 0) || !(g2.std_kmh > 0))
        throw InputError("gaussian_boundary expects positive deviations");

    const double m1 = g1.mean_kmh, s1 = g1.std_kmh;
    const double m2 = g2.mean_kmh, s2 = g2.std_kmh;

    // log f1(x) = log f2(x)  <=>  a x^2 + b x + c = 0
    const double a = s2 * s2 - s1 * s1;
    if (std::abs(a) < 1e-12 * s1 * s1) {
        // Equal deviations: densities cross at the midpoint.
        return 0.5 * (m1 + m2);
    }
    const double b = 2.0 * (s1 * s1 * m2 - s2 * s2 * m1);
    const double c =
        s2 * s2 * m1 * m1 - s1 * s1 * m2 * m2 - 2.0 * s1 * s1 * s2 * s2 * std::log(s2 / s1);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0)
        throw InputError("gaussian densities do not intersect between the means");
    const double sq = std::sqrt(disc);
    const double r1 = (-b - sq) / (2.0 * a);
    const double r2 = (-b + sq) / (2.0 * a);

    // Keep the root strictly between the means where f1 crosses from
    // above to below f2.
    auto log_ratio = [&](double x) {
        return std::log(s2 / s1) - 0.5 * ((x - m1) / s1) * ((x - m1) / s1) +
               0.5 * ((x - m2) / s2) * ((x - m2) / s2);
    };
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double r : {std::min(r1, r2), std::max(r1, r2)}) {
        if (!(r > m1 && r < m2)) continue;
        const double step = 1e-6 * (m2 - m1);
        if (log_ratio(r - step) > 0 && log_ratio(r + step) < 0) return r;
        if (std::isnan(best)) best = r;
    }
    if (std::isnan(best))
        throw InputError("gaussian densities do not intersect between the means");
    return best;
}

QuantizationTable build_table(const std::vector<StatusGaussian>& gaussians, double v_max_kmh) {
    if (gaussians.size() != 4)
        throw InputError("build_table needs exactly four status fits, got " +
                         std::to_string(gaussians.size()));

    auto sorted = gaussians;
    std::sort(sorted.begin(), sorted.end(),
              [](const StatusGaussian& a, const StatusGaussian& b) { return a.mean_kmh < b.mean_kmh; });

    const TrafficStatus expected[4] = {TrafficStatus::Severe, TrafficStatus::Congested,
                                       TrafficStatus::Slow, TrafficStatus::Smooth};
    for (int i = 0; i < 4; ++i) {
        if (sorted[i].status != expected[i])
            throw InputError("status means out of order: expected " + to_string(expected[i]) +
                             " at rank " + std::to_string(i) + ", got " +
                             to_string(sorted[i].status));
        if (i > 0 && !(sorted[i].mean_kmh > sorted[i - 1].mean_kmh))
            throw InputError("status means must be strictly increasing");
    }
    if (!(v_max_kmh > sorted[3].mean_kmh))
        throw InputError("v_max must exceed the smooth mean");

    const double b1 = gaussian_boundary(sorted[0], sorted[1]);
    const double b2 = gaussian_boundary(sorted[1], sorted[2]);
    const double b3 = gaussian_boundary(sorted[2], sorted[3]);

    QuantizationTable table;
    table.v_max_kmh = v_max_kmh;
    const double lo[4] = {0.0, b1, b2, b3};
    const double hi[4] = {b1, b2, b3, v_max_kmh};
    for (int i = 0; i < 4; ++i) {
        table.ranges[i] = {sorted[i].status, lo[i], hi[i], sorted[i].mean_kmh};
        if (!(sorted[i].mean_kmh >= lo[i] && sorted[i].mean_kmh <= hi[i]))
            throw InputError("representative speed for " + to_string(sorted[i].status) +
                             " falls outside its range");
    }
    return table;
}

double quantify(TrafficStatus status, const QuantizationTable& table) {
    if (status == TrafficStatus::Unknown)
        throw InputError("cannot quantify Unknown status");
    return table.range(status).rep_kmh;
}

double default_v_max(double design_speed_kmh, const std::vector<CalibrationSample>& samples) {
    double v = design_speed_kmh + 10.0;
    for (const auto& s : samples) v = std::max(v, s.speed_kmh);
    return v;
}

static const std::string kTableHeader = "status,lo_kmh,hi_kmh,rep_kmh";
static const std::string kSamplesHeader = "speed_kmh,status";

void save_table_csv(const std::filesystem::path& path, const QuantizationTable& table) {
    std::string body = kTableHeader + "\n";
    for (const auto& r : table.ranges) {
        body += util::csv_join({to_string(r.status), util::format_double(r.lo_kmh),
                                util::format_double(r.hi_kmh), util::format_double(r.rep_kmh)});
        body += '\n';
    }
    util::write_text_file(path, body);
}

QuantizationTable load_table_csv(const std::filesystem::path& path) {
    const auto rows = util::read_csv(path, kTableHeader);
    if (rows.size() != 4)
        throw InputError(path.string() + ": quantization table needs 4 rows, got " +
                         std::to_string(rows.size()));
    QuantizationTable table;
    std::vector<StatusRange> parsed;
    for (const auto& row : rows) {
        if (row.size() != 4)
            throw InputError(path.string() + ": expected 4 columns");
        StatusRange r;
        r.status = feed::status_from_string(row[0]);
        r.lo_kmh = util::parse_double(row[1]);
        r.hi_kmh = util::parse_double(row[2]);
        r.rep_kmh = util::parse_double(row[3]);
        parsed.push_back(r);
    }
    std::sort(parsed.begin(), parsed.end(),
              [](const StatusRange& a, const StatusRange& b) { return a.lo_kmh < b.lo_kmh; });
    for (int i = 0; i < 4; ++i) table.ranges[i] = parsed[i];
    table.v_max_kmh = table.ranges[3].hi_kmh;

    // Sanity: contiguous, ordered, representatives inside their ranges.
    if (table.ranges[0].lo_kmh != 0.0)
        throw InputError(path.string() + ": lowest range must start at 0");
    for (int i = 0; i < 4; ++i) {
        const auto& r = table.ranges[i];
        if (!(r.lo_kmh < r.hi_kmh))
            throw InputError(path.string() + ": empty range for " + to_string(r.status));
        if (i > 0 && table.ranges[i - 1].hi_kmh != r.lo_kmh)
            throw InputError(path.string() + ": ranges must be contiguous");
        if (!(r.rep_kmh >= r.lo_kmh && r.rep_kmh <= r.hi_kmh))
            throw InputError(path.string() + ": representative speed outside range for " +
                             to_string(r.status));
    }
    return table;
}

std::vector<CalibrationSample> load_samples_csv(const std::filesystem::path& path) {
    const auto rows = util::read_csv(path, kSamplesHeader);
    std::vector<CalibrationSample> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() != 2)
            throw InputError(path.string() + ": expected 2 columns");
        CalibrationSample s;
        s.speed_kmh = util::parse_double(row[0]);
        s.status = feed::status_from_string(row[1]);
        out.push_back(s);
    }
    return out;
}

void save_samples_csv(const std::filesystem::path& path,
                      const std::vector<CalibrationSample>& samples) {
    std::string body = kSamplesHeader + "\n";
    for (const auto& s : samples) {
        body += util::csv_join({util::format_double(s.speed_kmh), to_string(s.status)});
        body += '\n';
    }
    util::write_text_file(path, body);
}

} // namespace roadwork::calib
