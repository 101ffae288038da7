#ifndef PROM_POD_HPP
#define PROM_POD_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>

#include "prom/snapshot.hpp"

namespace prom {

/// Truncated weighted POD basis. `modes` columns are W-orthonormal,
/// ordered by non-increasing singular value, sign-fixed so each mode's
/// largest-magnitude entry is positive.
struct PodBasis {
    Eigen::MatrixXd modes;               // N_n x N_r
    Eigen::VectorXd singular_values;     // length N_r, non-increasing
    Eigen::MatrixXd temporal;            // N_s x N_r right singular vectors;
                                         // empty for interpolated bases
    double parameter = 0.0;
    FieldLayout layout;
    std::uint64_t weights_id = 0;
    std::shared_ptr<const Quadrature> quadrature;   // W recovered via weights_id
    bool sv_authoritative = true;        // false when copied from a reference

    Eigen::Index n_dof() const { return modes.rows(); }
    Eigen::Index n_rank() const { return modes.cols(); }

    /// Content hash over modes, parameter and weights id.
    std::uint64_t content_id() const;

    /// Leading-r sub-basis (same modes, truncated).
    PodBasis truncated(Eigen::Index r) const;
};

enum class PodMethod {
    snapshots,     // Gram-matrix eigendecomposition (method of snapshots)
    direct_svd,    // thin SVD of the weighted data matrix; cross-check path
};

struct PodOptions {
    PodMethod method = PodMethod::snapshots;
    bool subtract_mean = false;    // off: SVD applies to the raw data matrix
};

/// Weighted POD of a snapshot set, truncated to n_rank.
PodBasis compute_pod(const SnapshotSet& s, const Quadrature& w, Eigen::Index n_rank,
                     const PodOptions& options = {});

/// Coefficients of the W-orthogonal projection of q onto the basis.
Eigen::VectorXd project(const Eigen::VectorXd& q, const PodBasis& basis,
                        const Quadrature& w);

/// PSNAP container for bases: payload = modes, plus header lines
/// content=pod_modes and singular_values=...
void write_pod_basis(const PodBasis& basis, const std::string& path);
PodBasis read_pod_basis(const std::string& path);

/// True when the file at `path` holds a POD basis rather than snapshots.
bool is_pod_basis_file(const std::string& path);

} // namespace prom

#endif
