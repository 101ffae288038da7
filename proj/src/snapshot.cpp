#include "prom/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "prom/errors.hpp"

namespace prom {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'N', 'A', 'P', '\0', 'v', '1'};

void check_name(const std::string& name) {
    if (name.empty() || name.find_first_of(":;=\n\r") != std::string::npos)
        fail(errc::format, "invalid field name: '" + name + "'");
}

} // namespace

FieldLayout::FieldLayout(std::vector<FieldBlock> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) {
        check_name(b.name);
        if (b.components <= 0 || b.points <= 0)
            fail(errc::format, "field block '" + b.name + "' has non-positive extent");
    }
}

FieldLayout FieldLayout::single(const std::string& name, int components, int points) {
    return FieldLayout({FieldBlock{name, components, points}});
}

Eigen::Index FieldLayout::total_dofs() const {
    Eigen::Index total = 0;
    for (const auto& b : blocks_) total += b.size();
    return total;
}

std::pair<Eigen::Index, Eigen::Index> FieldLayout::span_of(const std::string& name) const {
    Eigen::Index offset = 0;
    for (const auto& b : blocks_) {
        if (b.name == name) return {offset, b.size()};
        offset += b.size();
    }
    fail(errc::dimension_mismatch, "layout has no field named '" + name + "'");
}

bool FieldLayout::has_field(const std::string& name) const {
    for (const auto& b : blocks_)
        if (b.name == name) return true;
    return false;
}

std::string FieldLayout::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) out += ';';
        out += blocks_[i].name + ':' + std::to_string(blocks_[i].components) + ':' +
               std::to_string(blocks_[i].points);
    }
    return out;
}

FieldLayout FieldLayout::parse(std::string_view text) {
    std::vector<FieldBlock> blocks;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view triple = text.substr(pos, end - pos);
        pos = end + 1;
        std::size_t c1 = triple.find(':');
        std::size_t c2 = (c1 == std::string_view::npos) ? std::string_view::npos
                                                        : triple.find(':', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            fail(errc::format, "malformed field_layout triple: '" + std::string(triple) + "'");
        std::int64_t components = 0, points = 0;
        if (!parse_int64(triple.substr(c1 + 1, c2 - c1 - 1), components) ||
            !parse_int64(triple.substr(c2 + 1), points))
            fail(errc::format, "malformed field_layout counts: '" + std::string(triple) + "'");
        blocks.push_back(FieldBlock{std::string(triple.substr(0, c1)), int(components),
                                    int(points)});
    }
    return FieldLayout(std::move(blocks));
}

Quadrature::Quadrature(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    if (weights_.size() == 0)
        fail(errc::weights, "quadrature weights are empty");
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            fail(errc::weights, "quadrature weight " + std::to_string(i) +
                                    " is not strictly positive");
    }
    sqrt_weights_ = weights_.array().sqrt();
    id_ = fnv1a64(weights_.data(), std::size_t(weights_.size()) * sizeof(double));
}

Quadrature Quadrature::uniform(Eigen::Index n, double weight) {
    return Quadrature(Eigen::VectorXd::Constant(n, weight));
}

SnapshotSet::SnapshotSet(Eigen::MatrixXd data, FieldLayout layout, double parameter,
                         double t0, double dt_snap)
    : data_(std::move(data)), layout_(std::move(layout)), parameter_(parameter),
      t0_(t0), dt_snap_(dt_snap) {
    if (data_.rows() == 0 || data_.cols() == 0)
        fail(errc::dimension_mismatch, "snapshot matrix is empty");
    if (layout_.total_dofs() != data_.rows())
        fail(errc::dimension_mismatch,
             "field_layout covers " + std::to_string(layout_.total_dofs()) +
                 " dofs but data has " + std::to_string(data_.rows()) + " rows");
    if (!(dt_snap_ > 0.0) || !std::isfinite(dt_snap_))
        fail(errc::dimension_mismatch, "snapshot spacing must be positive");
}

Eigen::VectorXd SnapshotSet::times() const {
    Eigen::VectorXd t(n_snap());
    for (Eigen::Index j = 0; j < n_snap(); ++j) t[j] = time_at(j);
    return t;
}

double weighted_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const Quadrature& w) {
    if (a.size() != b.size() || a.size() != w.size())
        fail(errc::dimension_mismatch,
             "weighted_inner length mismatch: " + std::to_string(a.size()) + ", " +
                 std::to_string(b.size()) + ", " + std::to_string(w.size()));
    // (a*b)*w keeps the product bit-symmetric in a and b.
    Eigen::VectorXd terms = (a.array() * b.array() * w.weights().array()).matrix();
    return pairwise_sum(std::span<const double>(terms.data(), std::size_t(terms.size())));
}

// ---------------------------------------------------------------------------
// PSNAP
// ---------------------------------------------------------------------------

namespace {

std::string build_header_text(const PsnapHeader& h) {
    KeyValueText kv;
    kv.set("n_dof", std::to_string(h.n_dof));
    kv.set("n_snap", std::to_string(h.n_snap));
    kv.set("parameter", format_double(h.parameter));
    kv.set("dt_snap", format_double(h.dt_snap));
    kv.set("t0", format_double(h.t0));
    kv.set("field_layout", h.layout.serialize());
    kv.set("has_weights", h.has_weights ? "1" : "0");
    std::string text = kv.serialize();
    text += h.extras.serialize();
    return text;
}

PsnapHeader parse_header_text(std::string_view text, const std::string& path) {
    KeyValueText kv;
    try {
        kv = KeyValueText::parse(text);
    } catch (const Error& e) {
        fail(errc::format, path + ": bad header: " + e.what());
    }
    PsnapHeader h;
    try {
        h.n_dof = Eigen::Index(kv.get_int("n_dof"));
        h.n_snap = Eigen::Index(kv.get_int("n_snap"));
        h.parameter = kv.get_double("parameter");
        h.dt_snap = kv.get_double("dt_snap");
        h.t0 = kv.get_double("t0");
        h.layout = FieldLayout::parse(kv.get("field_layout"));
        h.has_weights = kv.get_int("has_weights") != 0;
    } catch (const Error& e) {
        fail(errc::format, path + ": bad header: " + e.what());
    }
    if (h.n_dof <= 0 || h.n_snap <= 0)
        fail(errc::format, path + ": non-positive matrix extents in header");
    static const char* standard[] = {"n_dof",        "n_snap", "parameter", "dt_snap",
                                     "t0",           "field_layout", "has_weights"};
    // auxiliary lines (content tags, singular values, ...) survive a round trip
    KeyValueText extras;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view linesv = text.substr(pos, eol - pos);
        pos = eol + 1;
        std::size_t eq = linesv.find('=');
        if (eq == std::string_view::npos) continue;
        std::string key(linesv.substr(0, eq));
        bool is_standard = false;
        for (const char* s : standard)
            if (key == s) is_standard = true;
        if (!is_standard) extras.set(key, std::string(linesv.substr(eq + 1)));
    }
    h.extras = extras;
    return h;
}

void write_all(std::ofstream& out, const void* data, std::size_t n, const std::string& path) {
    out.write(static_cast<const char*>(data), std::streamsize(n));
    if (!out) fail(errc::storage, "write failed: " + path);
}

void read_exact(std::ifstream& in, void* data, std::size_t n, const std::string& path,
                const std::string& what) {
    in.read(static_cast<char*>(data), std::streamsize(n));
    if (std::size_t(in.gcount()) != n)
        fail(errc::format, path + ": truncated " + what + " (wanted " + std::to_string(n) +
                               " bytes, got " + std::to_string(in.gcount()) + ")");
}

} // namespace

void write_psnap(const std::string& path, const PsnapHeader& header,
                 const Eigen::MatrixXd& payload, const Eigen::VectorXd* weights) {
    if (payload.rows() != header.n_dof || payload.cols() != header.n_snap)
        fail(errc::dimension_mismatch, "psnap payload shape disagrees with header");
    if (header.has_weights != (weights != nullptr))
        fail(errc::dimension_mismatch, "psnap has_weights flag disagrees with payload");
    if (weights && weights->size() != header.n_dof)
        fail(errc::dimension_mismatch, "psnap weights length disagrees with n_dof");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::storage, "cannot open for writing: " + path);

    const std::string text = build_header_text(header);
    const std::uint32_t header_len = std::uint32_t(text.size());
    write_all(out, kMagic, sizeof(kMagic), path);
    write_all(out, &header_len, sizeof(header_len), path);
    write_all(out, text.data(), text.size(), path);
    // column-major doubles; Eigen's default storage is already column-major
    write_all(out, payload.data(), std::size_t(payload.size()) * sizeof(double), path);
    if (weights)
        write_all(out, weights->data(), std::size_t(weights->size()) * sizeof(double), path);
    out.flush();
    if (!out) fail(errc::storage, "write failed: " + path);
}

namespace {

PsnapHeader read_header_stream(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (in.gcount() != sizeof(magic))
        fail(errc::format, path + ": truncated magic (offset 0)");
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        fail(errc::format, path + ": bad magic string at offset 0");
    std::uint32_t header_len = 0;
    read_exact(in, &header_len, sizeof(header_len), path, "header length (offset 8)");
    std::string text(header_len, '\0');
    read_exact(in, text.data(), header_len, path, "header text (offset 12)");
    return parse_header_text(text, path);
}

} // namespace

std::pair<PsnapHeader, Eigen::MatrixXd> read_psnap(const std::string& path,
                                                   Eigen::VectorXd* weights_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::format, path + ": file missing or unreadable");
    PsnapHeader h = read_header_stream(in, path);
    Eigen::MatrixXd payload(h.n_dof, h.n_snap);
    read_exact(in, payload.data(), std::size_t(payload.size()) * sizeof(double), path,
               "matrix payload");
    if (weights_out) {
        if (h.has_weights) {
            weights_out->resize(h.n_dof);
            read_exact(in, weights_out->data(), std::size_t(h.n_dof) * sizeof(double), path,
                       "weights payload");
        } else {
            weights_out->resize(0);
        }
    }
    return {std::move(h), std::move(payload)};
}

PsnapHeader read_snapshot_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::format, path + ": file missing or unreadable");
    return read_header_stream(in, path);
}

void write_snapshots(const SnapshotSet& s, const Quadrature& w, const std::string& path) {
    if (w.size() != s.n_dof())
        fail(errc::dimension_mismatch, "weights length disagrees with snapshot dofs");
    PsnapHeader h;
    h.n_dof = s.n_dof();
    h.n_snap = s.n_snap();
    h.parameter = s.parameter();
    h.dt_snap = s.dt_snap();
    h.t0 = s.t0();
    h.layout = s.layout();
    h.has_weights = true;
    write_psnap(path, h, s.data(), &w.weights());
}

std::pair<SnapshotSet, Quadrature> read_snapshots(const std::string& path) {
    Eigen::VectorXd weights;
    auto [h, payload] = read_psnap(path, &weights);
    if (!h.has_weights)
        fail(errc::format, path + ": snapshot file carries no quadrature weights");
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (!(weights[i] > 0.0))
            fail(errc::format,
                 path + ": non-positive quadrature weight at index " + std::to_string(i));
    SnapshotSet s(std::move(payload), h.layout, h.parameter, h.t0, h.dt_snap);
    return {std::move(s), Quadrature(std::move(weights))};
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& column_names) {
    CsvWriter csv(path);
    if (!column_names.empty()) {
        if (Eigen::Index(column_names.size()) != m.cols())
            fail(errc::dimension_mismatch, "csv column names disagree with matrix shape");
        for (const auto& name : column_names) csv.cell(name);
        csv.end_row();
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) csv.cell(m(i, j));
        csv.end_row();
    }
    csv.close();
}

} // namespace prom
