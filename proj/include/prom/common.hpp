#ifndef PROM_COMMON_HPP
#define PROM_COMMON_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prom {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

/// FNV-1a over raw bytes; used for content ids of quadratures and bases.
std::uint64_t fnv1a64(const void* data, std::size_t n_bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ull);

/// Fixed left-to-right pairwise (blocked) summation. The reduction tree
/// depends only on the length, so results are reproducible run to run.
double pairwise_sum(std::span<const double> values);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

/// Flat `key=value` text, one pair per line, `#` comments allowed.
/// Insertion order is preserved for byte-stable round trips.
class KeyValueText {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;          // throws format error
    std::string get_or(const std::string& key, std::string fallback) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;

    std::string serialize() const;
    static KeyValueText parse(std::string_view text);
    static KeyValueText parse_file(const std::string& path);

private:
    std::vector<std::pair<std::string, std::string>> pairs_;
};

/// RFC-4180 CSV writer (CRLF records). Numeric cells use shortest
/// round-trip formatting; string cells are quoted only when required.
class CsvWriter {
public:
    explicit CsvWriter(std::string path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void cell(std::string_view text);
    void cell(double value);
    void cell(std::int64_t value);
    void end_row();
    void close();                       // flushes; throws storage error on failure

private:
    std::string path_;
    std::string buffer_;
    bool row_open_ = false;
    bool closed_ = false;
};

} // namespace prom

#endif
