#pragma once

#include "roadwork/geo.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace roadwork::feed {

// Substitutes {zoom}, {x}, {y} and {time} in the URL template. The time
// placeholder receives `now_ms` (unix milliseconds). All four
// placeholders must be present.
std::string build_request(const geo::TileAddress& tile, const std::string& url_template,
                          std::int64_t now_ms);

struct FetchResult {
    bool ok = false;
    std::vector<std::uint8_t> body;
    std::string error;
};

// Answers built request strings with raw image bytes.
class Transport {
public:
    virtual ~Transport() = default;
    virtual FetchResult fetch(const std::string& url) = 0;
};

struct LiveTransportOptions {
    double min_request_gap_s = 0.05;   // per host
    double timeout_s = 10.0;
};

// Plain HTTP GET of the built URL. Enforces a minimum inter-request gap
// per host.
class LiveTransport : public Transport {
public:
    explicit LiveTransport(LiveTransportOptions options = {});
    ~LiveTransport() override;
    FetchResult fetch(const std::string& url) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Serves tiles from a fixture directory: `<x>_<y>_<zoom>.png` images plus
// a manifest.json that names the URL query parameters carrying x, y and
// zoom (and may list explicit tile -> file entries). Requests for tiles
// with no fixture fail like an HTTP 404 would.
class ReplayTransport : public Transport {
public:
    explicit ReplayTransport(std::filesystem::path fixture_dir);
    FetchResult fetch(const std::string& url) override;

private:
    struct TileKey {
        long long x, y;
        int zoom;
        bool operator<(const TileKey& o) const;
    };
    std::filesystem::path dir_;
    std::string param_x_ = "x", param_y_ = "y", param_zoom_ = "zoom";
    std::map<TileKey, std::string> entries_;
};

} // namespace roadwork::feed
