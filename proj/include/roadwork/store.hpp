#pragma once

#include "roadwork/classify.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace roadwork::feed {

struct Observation {
    std::string point_id;
    std::int64_t timestamp_utc = 0;   // unix seconds
    TrafficStatus status = TrafficStatus::Unknown;
    int r = -1, g = -1, b = -1;       // -1 when no pixel was sampled
    std::string note;

    bool has_rgb() const { return r >= 0; }
};

// Append-only observation store: one CSV file per UTC day under a
// directory, header `point_id,timestamp_utc,status,r,g,b,note`.
// Appends are serialized (single-writer contract); timestamps must be
// monotone non-decreasing per point within this writer's lifetime.
class ObservationStore {
public:
    explicit ObservationStore(std::filesystem::path directory);

    void append(const Observation& obs);
    const std::filesystem::path& directory() const { return dir_; }

    static std::vector<Observation> read_file(const std::filesystem::path& csv_path);
    // All obs_*.csv files in the directory, in filename order.
    static std::vector<Observation> read_directory(const std::filesystem::path& directory);

private:
    std::filesystem::path dir_;
    std::mutex mutex_;
    std::map<std::string, std::int64_t> last_ts_;
};

} // namespace roadwork::feed
