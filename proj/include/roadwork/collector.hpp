#pragma once

#include "roadwork/classify.hpp"
#include "roadwork/store.hpp"
#include "roadwork/transport.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

namespace roadwork::feed {

// Time source for the collector; injected so tests replay instantly.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_until_ms(std::int64_t when_ms) = 0;
};

class SystemClock : public Clock {
public:
    std::int64_t now_ms() override;
    void sleep_until_ms(std::int64_t when_ms) override;
};

// Jumps straight to the requested time.
class SimulatedClock : public Clock {
public:
    explicit SimulatedClock(std::int64_t start_ms) : now_(start_ms) {}
    std::int64_t now_ms() override { return now_; }
    void sleep_until_ms(std::int64_t when_ms) override {
        if (when_ms > now_) now_ = when_ms;
    }

private:
    std::int64_t now_;
};

struct FetchJob {
    std::string point_id;
    geo::TileAddress tile;
    std::string url_template;
    double period_s = 60.0;
};

struct CollectorOptions {
    int radius_px = 4;
    ClassifierRules rules = default_classifier_rules();
    // Bounded run: observe for this many seconds, then return. Without it
    // the collector runs until `stop` is raised.
    std::optional<double> duration_s;
    std::atomic<bool>* stop = nullptr;
    int max_parallel_fetches = 4;
};

struct CollectorReport {
    long long observations = 0;
    long long fetch_failures = 0;
};

// Fires each job once per period (first firing one period after start),
// fetches the tile, samples the monitored pixel and appends one
// Observation per firing. Fetch or decode failures append an Unknown
// observation with a note and never stop the run; a store failure is
// fatal. Same-deadline fetches run concurrently; appends stay in job
// order, so replaying a fixture is deterministic.
CollectorReport run_collector(const std::vector<FetchJob>& jobs, Transport& transport,
                              ObservationStore& store, Clock& clock,
                              const CollectorOptions& options);

} // namespace roadwork::feed
