#ifndef PROM_MRPWI_HPP
#define PROM_MRPWI_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prom/pod.hpp"

namespace prom {

/// Complex-paired POD modes. Column 1 is the first mode with zero imaginary
/// part, column k pairs modes 2k-2 and 2k-1 (requires odd N_r). Columns are
/// held in W^{1/2} coordinates so plain complex dot products realize the
/// weighted inner product.
struct ComplexModePack {
    Eigen::MatrixXcd cmodes;        // N_n x (N_r + 1) / 2
    double parameter = 0.0;
    std::uint64_t weights_id = 0;
    std::optional<std::uint64_t> aligned_to;          // reference pack content id
    std::vector<double> applied_angles;               // radians, one per column
    std::vector<std::pair<int, int>> applied_signs;   // (re, im) per column

    Eigen::Index n_dof() const { return cmodes.rows(); }
    Eigen::Index n_pairs() const { return cmodes.cols(); }
    Eigen::Index n_rank() const { return 2 * cmodes.cols() - 1; }
    std::uint64_t content_id() const;
};

/// Pack a basis into complex pairs; parity error for even N_r.
ComplexModePack complexify(const PodBasis& basis);

/// Flip real/imaginary parts of each column so their dot products with the
/// reference column's parts are non-negative; sgn(0) counts as +1.
ComplexModePack sign_align(const ComplexModePack& reference, ComplexModePack pack);

/// arg <a, b> with <a, b> = a^* b; range [-pi, pi]. Undefined-angle error
/// when |<a, b>| <= 1e-12 ||a|| ||b||.
double kasner_angle(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Multiply each column by e^{-i phi}, phi the Kasner pseudo-angle to the
/// reference column; afterwards the angle to the reference is zero.
ComplexModePack rotation_align(const ComplexModePack& reference, ComplexModePack pack);

/// Real modes recovered from a pack (Re/Im unpacking, W^{-1/2} applied).
Eigen::MatrixXd recover_modes(const ComplexModePack& pack, const Quadrature& w);

struct MrpwiOptions {
    bool reorthonormalize = false;  // off: the interpolant is returned as-is
};

/// Mode-realigned pointwise interpolation: complexify, sign- and
/// rotation-align each case to the reference, Lagrange-interpolate
/// entrywise, recover real modes. Output singular values are copied from
/// the reference and flagged non-authoritative.
PodBasis mrpwi_interpolate(const std::vector<PodBasis>& bases, std::size_t reference_index,
                           double target_param, const MrpwiOptions& options = {});

/// sigma_{2k-2} / sigma_{2k-1} per pair; ratios off 1 by more than 20%
/// signal that the traveling-wave pairing premise may not hold.
std::vector<double> pair_integrity_ratios(const PodBasis& basis);

/// Diagnostics export: case, column, sign_re, sign_im, angle rows.
void write_alignment_csv(const std::vector<ComplexModePack>& packs, const std::string& path);

} // namespace prom

#endif
