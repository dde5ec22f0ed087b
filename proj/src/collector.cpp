#include "roadwork/collector.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/image.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace roadwork::feed {

std::int64_t SystemClock::now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void SystemClock::sleep_until_ms(std::int64_t when_ms) {
    const std::int64_t now = now_ms();
    if (when_ms > now)
        std::this_thread::sleep_for(std::chrono::milliseconds(when_ms - now));
}

namespace {

Observation take_observation(const FetchJob& job, Transport& transport,
                             const CollectorOptions& options, std::int64_t fire_ms) {
    Observation obs;
    obs.point_id = job.point_id;
    obs.timestamp_utc = fire_ms / 1000;

    FetchResult fetched;
    try {
        const std::string url = build_request(job.tile, job.url_template, fire_ms);
        fetched = transport.fetch(url);
    } catch (const Error& e) {
        fetched = {false, {}, e.what()};
    }
    if (!fetched.ok) {
        obs.status = TrafficStatus::Unknown;
        obs.note = fetched.error.empty() ? "fetch failed" : fetched.error;
        return obs;
    }

    try {
        const img::Image tile = img::decode_png(fetched.body);
        const SampleResult sample =
            sample_point(tile, job.tile.offset_x, job.tile.offset_y, options.radius_px,
                         options.rules);
        obs.status = sample.status;
        if (sample.has_rgb) {
            obs.r = sample.r;
            obs.g = sample.g;
            obs.b = sample.b;
        }
    } catch (const Error& e) {
        obs.status = TrafficStatus::Unknown;
        obs.note = e.what();
    }
    return obs;
}

} // namespace

CollectorReport run_collector(const std::vector<FetchJob>& jobs, Transport& transport,
                              ObservationStore& store, Clock& clock,
                              const CollectorOptions& options) {
    if (jobs.empty()) throw InputError("collector needs at least one job");
    for (const auto& job : jobs)
        if (!(job.period_s > 0)) throw InputError("job period must be > 0: " + job.point_id);
    if (!options.duration_s && !options.stop)
        throw InputError("collector needs a duration or a stop signal");

    const std::int64_t start_ms = clock.now_ms();
    const std::int64_t end_ms =
        options.duration_s
            ? start_ms + static_cast<std::int64_t>(std::llround(*options.duration_s * 1000.0))
            : std::numeric_limits<std::int64_t>::max();

    // Next fire time per job; jobs fire a full period after start.
    std::vector<std::int64_t> next_fire(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i)
        next_fire[i] = start_ms + static_cast<std::int64_t>(std::llround(jobs[i].period_s * 1000.0));

    CollectorReport report;
    while (true) {
        if (options.stop && options.stop->load()) break;

        std::int64_t due = *std::min_element(next_fire.begin(), next_fire.end());
        if (due > end_ms) break;

        clock.sleep_until_ms(due);
        if (options.stop && options.stop->load()) break;

        // Everything due at this instant fires as one batch.
        std::vector<size_t> batch;
        for (size_t i = 0; i < jobs.size(); ++i)
            if (next_fire[i] == due) batch.push_back(i);

        std::vector<Observation> results(batch.size());
        const int parallel = std::max(1, options.max_parallel_fetches);
        for (size_t begin = 0; begin < batch.size(); begin += parallel) {
            const size_t count = std::min<size_t>(parallel, batch.size() - begin);
            std::vector<std::thread> workers;
            workers.reserve(count);
            for (size_t k = 0; k < count; ++k) {
                const size_t slot = begin + k;
                workers.emplace_back([&, slot] {
                    results[slot] =
                        take_observation(jobs[batch[slot]], transport, options, due);
                });
            }
            for (auto& w : workers) w.join();
        }

        // Store appends stay serialized in job order.
        for (const auto& obs : results) {
            store.append(obs);
            ++report.observations;
            if (!obs.note.empty()) ++report.fetch_failures;
        }

        for (size_t i : batch)
            next_fire[i] +=
                static_cast<std::int64_t>(std::llround(jobs[i].period_s * 1000.0));
    }
    return report;
}

} // namespace roadwork::feed
