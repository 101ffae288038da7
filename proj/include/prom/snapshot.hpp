#ifndef PROM_SNAPSHOT_HPP
#define PROM_SNAPSHOT_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prom/common.hpp"

namespace prom {

/// One block of the stacked state vector: `components` stacked sub-vectors
/// of `points` entries each, `components * points` dofs in total.
struct FieldBlock {
    std::string name;
    int components = 1;
    int points = 0;

    Eigen::Index size() const { return Eigen::Index(components) * points; }
    bool operator==(const FieldBlock&) const = default;
};

/// Ordered description of how fields stack into a snapshot column.
class FieldLayout {
public:
    FieldLayout() = default;
    explicit FieldLayout(std::vector<FieldBlock> blocks);

    static FieldLayout single(const std::string& name, int components, int points);

    Eigen::Index total_dofs() const;
    const std::vector<FieldBlock>& blocks() const { return blocks_; }

    /// Offset/extent of a named block in the stacked vector; throws if absent.
    std::pair<Eigen::Index, Eigen::Index> span_of(const std::string& name) const;
    bool has_field(const std::string& name) const;

    std::string serialize() const;                     // name:components:points;...
    static FieldLayout parse(std::string_view text);

    bool operator==(const FieldLayout&) const = default;

private:
    std::vector<FieldBlock> blocks_;
};

/// Diagonal quadrature weights defining the weighted inner product.
class Quadrature {
public:
    explicit Quadrature(Eigen::VectorXd weights);
    static Quadrature uniform(Eigen::Index n, double weight);

    const Eigen::VectorXd& weights() const { return weights_; }
    const Eigen::VectorXd& sqrt_weights() const { return sqrt_weights_; }
    Eigen::Index size() const { return weights_.size(); }

    /// Content hash; bases record it to pin the weights they were built with.
    std::uint64_t id() const { return id_; }

private:
    Eigen::VectorXd weights_;
    Eigen::VectorXd sqrt_weights_;
    std::uint64_t id_;
};

/// Snapshot matrix plus grid metadata. Columns are states at uniformly
/// spaced times t0 + j*dt_snap; immutable after construction.
class SnapshotSet {
public:
    SnapshotSet(Eigen::MatrixXd data, FieldLayout layout, double parameter,
                double t0, double dt_snap);

    Eigen::Index n_dof() const { return data_.rows(); }
    Eigen::Index n_snap() const { return data_.cols(); }
    const Eigen::MatrixXd& data() const { return data_; }
    Eigen::VectorXd column(Eigen::Index j) const { return data_.col(j); }
    const FieldLayout& layout() const { return layout_; }
    double parameter() const { return parameter_; }
    double t0() const { return t0_; }
    double dt_snap() const { return dt_snap_; }
    double time_at(Eigen::Index j) const { return t0_ + dt_snap_ * double(j); }
    Eigen::VectorXd times() const;

private:
    Eigen::MatrixXd data_;
    FieldLayout layout_;
    double parameter_;
    double t0_;
    double dt_snap_;
};

/// <a, b>_W = sum_i a[i] w[i] b[i], fixed pairwise summation order.
/// Exactly symmetric in a and b.
double weighted_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const Quadrature& w);

// ---------------------------------------------------------------------------
// PSNAP container (bit-exact round trips)
// ---------------------------------------------------------------------------

struct PsnapHeader {
    Eigen::Index n_dof = 0;
    Eigen::Index n_snap = 0;
    double parameter = 0.0;
    double dt_snap = 0.0;
    double t0 = 0.0;
    FieldLayout layout;
    bool has_weights = false;
    KeyValueText extras;        // unknown/auxiliary lines, order preserved
};

void write_snapshots(const SnapshotSet& s, const Quadrature& w, const std::string& path);
std::pair<SnapshotSet, Quadrature> read_snapshots(const std::string& path);

/// Header-only metadata query; does not load payloads.
PsnapHeader read_snapshot_header(const std::string& path);

/// Low-level writer shared with the POD basis container. `extras` lines are
/// appended after the standard keys.
void write_psnap(const std::string& path, const PsnapHeader& header,
                 const Eigen::MatrixXd& payload,
                 const Eigen::VectorXd* weights);
std::pair<PsnapHeader, Eigen::MatrixXd> read_psnap(const std::string& path,
                                                   Eigen::VectorXd* weights_out);

/// Matrix export, one record per row, shortest round-trip decimals.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& column_names = {});

} // namespace prom

#endif
