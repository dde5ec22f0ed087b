#include "roadwork/transport.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <map>
#include <mutex>
#include <thread>

namespace roadwork::feed {

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

// Splits "http://host:port/path?query" into pieces httplib wants.
struct UrlParts {
    std::string scheme_host;   // "http://host:port"
    std::string path_query;    // "/path?query"
    std::string query;         // "query"
};

UrlParts split_url(const std::string& url) {
    UrlParts parts;
    auto scheme_end = url.find("://");
    const size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        parts.scheme_host = url;
        parts.path_query = "/";
    } else {
        parts.scheme_host = url.substr(0, path_start);
        parts.path_query = url.substr(path_start);
    }
    auto q = parts.path_query.find('?');
    if (q != std::string::npos) parts.query = parts.path_query.substr(q + 1);
    return parts;
}

std::map<std::string, std::string> parse_query(const std::string& query) {
    std::map<std::string, std::string> out;
    size_t pos = 0;
    while (pos < query.size()) {
        size_t amp = query.find('&', pos);
        if (amp == std::string::npos) amp = query.size();
        const std::string pair = query.substr(pos, amp - pos);
        auto eq = pair.find('=');
        if (eq != std::string::npos)
            out[pair.substr(0, eq)] = pair.substr(eq + 1);
        pos = amp + 1;
    }
    return out;
}

} // namespace

std::string build_request(const geo::TileAddress& tile, const std::string& url_template,
                          std::int64_t now_ms) {
    for (const char* ph : {"{zoom}", "{x}", "{y}", "{time}"}) {
        if (url_template.find(ph) == std::string::npos)
            throw ConfigError(std::string("url template missing required placeholder ") + ph);
    }
    std::string url = url_template;
    url = replace_all(url, "{zoom}", std::to_string(tile.zoom));
    url = replace_all(url, "{x}", std::to_string(tile.x));
    url = replace_all(url, "{y}", std::to_string(tile.y));
    url = replace_all(url, "{time}", std::to_string(now_ms));
    return url;
}

// --- live ------------------------------------------------------------------

struct LiveTransport::Impl {
    LiveTransportOptions options;
    std::mutex mutex;
    std::map<std::string, std::chrono::steady_clock::time_point> last_request;

    void rate_limit(const std::string& host) {
        std::chrono::steady_clock::time_point wait_until{};
        {
            std::lock_guard<std::mutex> lock(mutex);
            const auto now = std::chrono::steady_clock::now();
            const auto gap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(options.min_request_gap_s));
            auto it = last_request.find(host);
            wait_until = it == last_request.end() ? now : it->second + gap;
            if (wait_until < now) wait_until = now;
            last_request[host] = wait_until;
        }
        std::this_thread::sleep_until(wait_until);
    }
};

LiveTransport::LiveTransport(LiveTransportOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->options = options;
}

LiveTransport::~LiveTransport() = default;

FetchResult LiveTransport::fetch(const std::string& url) {
    const UrlParts parts = split_url(url);
    impl_->rate_limit(parts.scheme_host);

    httplib::Client client(parts.scheme_host);
    client.set_connection_timeout(std::chrono::duration<double>(impl_->options.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(impl_->options.timeout_s));

    auto res = client.Get(parts.path_query);
    if (!res)
        return {false, {}, "transport error: " + httplib::to_string(res.error())};
    if (res->status != 200)
        return {false, {}, "http status " + std::to_string(res->status)};
    FetchResult out;
    out.ok = true;
    out.body.assign(res->body.begin(), res->body.end());
    return out;
}

// --- replay ----------------------------------------------------------------

bool ReplayTransport::TileKey::operator<(const TileKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return zoom < o.zoom;
}

ReplayTransport::ReplayTransport(std::filesystem::path fixture_dir) : dir_(std::move(fixture_dir)) {
    const auto manifest_path = dir_ / "manifest.json";
    if (!std::filesystem::exists(manifest_path))
        throw ConfigError("replay fixture manifest not found: " + manifest_path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_text_file(manifest_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(manifest_path.string() + ": " + e.what());
    }
    param_x_ = j.value("param_x", "x");
    param_y_ = j.value("param_y", "y");
    param_zoom_ = j.value("param_zoom", "zoom");
    if (j.contains("tiles")) {
        for (const auto& t : j["tiles"]) {
            TileKey key{t.at("x").get<long long>(), t.at("y").get<long long>(),
                        t.at("zoom").get<int>()};
            entries_[key] = t.at("file").get<std::string>();
        }
    }
}

FetchResult ReplayTransport::fetch(const std::string& url) {
    const UrlParts parts = split_url(url);
    const auto params = parse_query(parts.query);
    auto need = [&](const std::string& name) -> std::string {
        auto it = params.find(name);
        if (it == params.end())
            throw InputError("replay: request lacks query parameter '" + name + "': " + url);
        return it->second;
    };
    TileKey key{};
    try {
        key.x = util::parse_int(need(param_x_));
        key.y = util::parse_int(need(param_y_));
        key.zoom = static_cast<int>(util::parse_int(need(param_zoom_)));
    } catch (const InputError& e) {
        return {false, {}, e.what()};
    }

    std::filesystem::path file;
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        file = dir_ / it->second;
    } else {
        file = dir_ / (std::to_string(key.x) + "_" + std::to_string(key.y) + "_" +
                       std::to_string(key.zoom) + ".png");
    }
    if (!std::filesystem::exists(file))
        return {false, {}, "no fixture for tile " + std::to_string(key.x) + "/" +
                               std::to_string(key.y) + "/" + std::to_string(key.zoom)};
    FetchResult out;
    out.ok = true;
    out.body = util::read_binary_file(file);
    return out;
}

} // namespace roadwork::feed
