#include "roadwork/store.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <algorithm>
#include <fstream>

namespace roadwork::feed {

static const std::string kHeader = "point_id,timestamp_utc,status,r,g,b,note";

ObservationStore::ObservationStore(std::filesystem::path directory) : dir_(std::move(directory)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
        throw Error("observation store: cannot create directory " + dir_.string());
}

void ObservationStore::append(const Observation& obs) {
    if (obs.point_id.empty()) throw InputError("observation without point_id");
    if (obs.status != TrafficStatus::Unknown && !obs.has_rgb())
        throw InputError("observation with status but no sampled rgb");

    std::string note = obs.note;
    for (char& c : note)
        if (c == '\n' || c == '\r') c = ' ';

    std::lock_guard<std::mutex> lock(mutex_);
    auto it = last_ts_.find(obs.point_id);
    if (it != last_ts_.end() && obs.timestamp_utc < it->second)
        throw InputError("observation timestamps must be non-decreasing per point (" +
                         obs.point_id + ")");
    last_ts_[obs.point_id] = obs.timestamp_utc;

    const auto file = dir_ / ("obs_" + util::utc_date(obs.timestamp_utc) + ".csv");
    const bool fresh = !std::filesystem::exists(file);
    std::ofstream out(file, std::ios::app);
    if (!out) throw Error("observation store: cannot open " + file.string());
    if (fresh) out << kHeader << '\n';
    out << util::csv_join({obs.point_id, std::to_string(obs.timestamp_utc),
                           to_string(obs.status), obs.has_rgb() ? std::to_string(obs.r) : "",
                           obs.has_rgb() ? std::to_string(obs.g) : "",
                           obs.has_rgb() ? std::to_string(obs.b) : "", note})
        << '\n';
    out.flush();
    if (!out) throw Error("observation store: write failed on " + file.string());
}

std::vector<Observation> ObservationStore::read_file(const std::filesystem::path& csv_path) {
    const auto rows = util::read_csv(csv_path, kHeader);
    std::vector<Observation> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() != 7)
            throw InputError(csv_path.string() + ": expected 7 columns, got " +
                             std::to_string(row.size()));
        Observation o;
        o.point_id = row[0];
        o.timestamp_utc = util::parse_int(row[1]);
        o.status = status_from_string(row[2]);
        if (!util::trim(row[3]).empty()) {
            o.r = static_cast<int>(util::parse_int(row[3]));
            o.g = static_cast<int>(util::parse_int(row[4]));
            o.b = static_cast<int>(util::parse_int(row[5]));
        }
        o.note = row[6];
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<Observation> ObservationStore::read_directory(const std::filesystem::path& directory) {
    if (!std::filesystem::is_directory(directory))
        throw InputError("not a directory: " + directory.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (util::starts_with(name, "obs_") && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Observation> out;
    for (const auto& f : files) {
        auto part = read_file(f);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace roadwork::feed
