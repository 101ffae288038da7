#include "prom/common.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "prom/errors.hpp"

namespace prom {

std::uint64_t fnv1a64(const void* data, std::size_t n_bytes, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < n_bytes; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

namespace {

// Left-to-right blocked reduction: contiguous blocks of 32 summed
// sequentially, block sums combined pairwise over a fixed tree.
double pairwise_sum_range(std::span<const double> v) {
    if (v.size() <= 32) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_range(v.first(half)) + pairwise_sum_range(v.subspan(half));
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_range(values);
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

bool parse_int64(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

void KeyValueText::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : pairs_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    pairs_.emplace_back(key, value);
}

bool KeyValueText::has(const std::string& key) const {
    for (const auto& [k, v] : pairs_)
        if (k == key) return true;
    return false;
}

const std::string& KeyValueText::get(const std::string& key) const {
    for (const auto& [k, v] : pairs_)
        if (k == key) return v;
    fail(errc::format, "missing key '" + key + "'");
}

std::string KeyValueText::get_or(const std::string& key, std::string fallback) const {
    for (const auto& [k, v] : pairs_)
        if (k == key) return v;
    return fallback;
}

double KeyValueText::get_double(const std::string& key) const {
    double value = 0.0;
    if (!parse_double(get(key), value))
        fail(errc::format, "key '" + key + "' is not a number: '" + get(key) + "'");
    return value;
}

std::int64_t KeyValueText::get_int(const std::string& key) const {
    std::int64_t value = 0;
    if (!parse_int64(get(key), value))
        fail(errc::format, "key '" + key + "' is not an integer: '" + get(key) + "'");
    return value;
}

std::string KeyValueText::serialize() const {
    std::string out;
    for (const auto& [k, v] : pairs_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

KeyValueText KeyValueText::parse(std::string_view text) {
    KeyValueText kv;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        // trim leading spaces
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(errc::format, "malformed key=value line: '" + std::string(line) + "'");
        kv.pairs_.emplace_back(std::string(line.substr(0, eq)),
                               std::string(line.substr(eq + 1)));
    }
    return kv;
}

KeyValueText KeyValueText::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::storage, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void CsvWriter::cell(std::string_view text) {
    if (row_open_) buffer_ += ',';
    row_open_ = true;
    bool needs_quotes = text.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        buffer_ += text;
        return;
    }
    buffer_ += '"';
    for (char c : text) {
        if (c == '"') buffer_ += '"';
        buffer_ += c;
    }
    buffer_ += '"';
}

void CsvWriter::cell(double value) {
    cell(std::string_view(format_double(value)));
}

void CsvWriter::cell(std::int64_t value) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    cell(std::string_view(buf, std::size_t(res.ptr - buf)));
}

void CsvWriter::end_row() {
    buffer_ += "\r\n";
    row_open_ = false;
}

void CsvWriter::close() {
    closed_ = true;
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::storage, "cannot open for writing: " + path_);
    out.write(buffer_.data(), std::streamsize(buffer_.size()));
    if (!out) fail(errc::storage, "write failed: " + path_);
}

} // namespace prom
