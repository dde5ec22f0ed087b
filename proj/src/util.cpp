#include "roadwork/util.hpp"

#include "roadwork/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace roadwork::util {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    const std::string t = trim(s);
    try {
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw InputError("not a number: '" + s + "'");
    }
}

long long parse_int(const std::string& s) {
    const std::string t = trim(s);
    try {
        size_t pos = 0;
        long long v = std::stoll(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw InputError("not an integer: '" + s + "'");
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    return line;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
                else quoted = false;
            } else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expect_header) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && !expect_header.empty()) {
            first = false;
            std::string got = trim(line);
            if (got != expect_header)
                throw InputError(path.string() + ": expected header '" + expect_header +
                                 "', got '" + got + "'");
            continue;
        }
        first = false;
        if (trim(line).empty()) continue;
        rows.push_back(csv_split(line));
    }
    return rows;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    return from_string(read_text_file(path), path.string());
}

KeyValueFile KeyValueFile::from_string(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        kv.entries_[key] = val;
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& def) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? def : it->second;
}

double KeyValueFile::get_double(const std::string& key) const { return parse_double(get(key)); }

double KeyValueFile::get_double_or(const std::string& key, double def) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? def : parse_double(it->second);
}

long long KeyValueFile::get_int(const std::string& key) const { return parse_int(get(key)); }

long long KeyValueFile::get_int_or(const std::string& key, long long def) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? def : parse_int(it->second);
}

std::optional<std::string> KeyValueFile::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string utc_date(std::int64_t unix_seconds) {
    std::time_t t = static_cast<std::time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
    return buf;
}

int seconds_of_day(std::int64_t unix_seconds) {
    std::int64_t s = unix_seconds % 86400;
    if (s < 0) s += 86400;
    return static_cast<int>(s);
}

std::string format_hhmm(double hours_of_day) {
    double h = std::fmod(hours_of_day, 24.0);
    if (h < 0) h += 24.0;
    int minutes = static_cast<int>(std::llround(h * 60.0)) % (24 * 60);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

double parse_hhmm(const std::string& text) {
    const std::string t = trim(text);
    auto colon = t.find(':');
    if (colon == std::string::npos)
        throw InputError("expected HH:MM, got '" + text + "'");
    long long h = parse_int(t.substr(0, colon));
    long long m = parse_int(t.substr(colon + 1));
    if (h < 0 || h > 23 || m < 0 || m > 59)
        throw InputError("time of day out of range: '" + text + "'");
    return static_cast<double>(h) + static_cast<double>(m) / 60.0;
}

} // namespace roadwork::util
