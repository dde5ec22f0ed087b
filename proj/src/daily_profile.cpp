#include "roadwork/daily_profile.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <map>

namespace roadwork::feed {

DailyProfile aggregate_daily_profile(const std::vector<Observation>& observations,
                                     int bin_seconds, const calib::QuantizationTable& table) {
    if (bin_seconds <= 0 || 86400 % bin_seconds != 0)
        throw InputError("bin_seconds must divide 86400");

    const int n_bins = 86400 / bin_seconds;

    // (day, bin) -> sum and count of quantified speeds.
    struct Cell {
        double sum = 0;
        int count = 0;
    };
    std::map<std::pair<std::int64_t, int>, Cell> cells;
    for (const auto& obs : observations) {
        if (obs.status == TrafficStatus::Unknown) continue;
        const std::int64_t day = obs.timestamp_utc >= 0
                                     ? obs.timestamp_utc / 86400
                                     : (obs.timestamp_utc - 86399) / 86400;
        const int bin = util::seconds_of_day(obs.timestamp_utc) / bin_seconds;
        Cell& c = cells[{day, bin}];
        c.sum += calib::quantify(obs.status, table);
        c.count += 1;
    }

    DailyProfile profile;
    profile.bin_seconds = bin_seconds;
    profile.bins.resize(n_bins);

    std::vector<double> day_mean_sum(n_bins, 0.0);
    std::vector<int> day_count(n_bins, 0);
    for (const auto& [key, cell] : cells) {
        const int bin = key.second;
        day_mean_sum[bin] += cell.sum / cell.count;
        day_count[bin] += 1;
    }

    bool any = false;
    for (int i = 0; i < n_bins; ++i) {
        if (day_count[i] == 0) continue;
        profile.bins[i].missing = false;
        profile.bins[i].mean_kmh = day_mean_sum[i] / day_count[i];
        profile.bins[i].days = day_count[i];
        any = true;
    }
    if (!any) throw InputError("no usable observations: all bins missing");
    return profile;
}

} // namespace roadwork::feed
