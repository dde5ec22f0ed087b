#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace roadwork::util {

std::string trim(const std::string& s);
std::string to_lower(std::string s);
bool starts_with(const std::string& s, const std::string& prefix);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// Parse helpers; throw InputError with the offending text on failure.
double parse_double(const std::string& s);
long long parse_int(const std::string& s);

// --- CSV ---------------------------------------------------------------
// Minimal CSV: fields separated by commas, quoted with '"' when they
// contain a comma, quote or newline. Good enough for the numeric tables
// this toolkit exchanges; not a general CSV parser.

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);
std::vector<std::string> csv_split(const std::string& line);

// Reads all rows of a CSV file. If expect_header is non-empty the first
// line must match it exactly and is not returned.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expect_header = "");

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

// --- key = value files --------------------------------------------------
// Lines of `key = value`; '#' starts a comment; blank lines ignored.

class KeyValueFile {
public:
    static KeyValueFile load(const std::filesystem::path& path);
    static KeyValueFile from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;                       // throws ConfigError if absent
    std::string get_or(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long def) const;
    std::optional<std::string> find(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> entries_;
    std::string origin_;
};

// --- time ----------------------------------------------------------------

// UTC calendar date of a unix timestamp, formatted YYYY-MM-DD.
std::string utc_date(std::int64_t unix_seconds);
// Seconds elapsed since UTC midnight for a unix timestamp.
int seconds_of_day(std::int64_t unix_seconds);
// "HH:MM" from fractional hours of day (wraps modulo 24).
std::string format_hhmm(double hours_of_day);
// Parses "HH:MM" (or "H:MM") into fractional hours; throws InputError.
double parse_hhmm(const std::string& text);

} // namespace roadwork::util
