#ifndef PROM_GRASSMANN_HPP
#define PROM_GRASSMANN_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "prom/pod.hpp"

namespace prom {

/// Tangent-space representative of a basis relative to a reference.
/// `gamma` is stored in mode coordinates (the W^{-1/2} image of the
/// tangent matrix computed in orthonormal coordinates).
struct TangentImage {
    Eigen::MatrixXd gamma;          // N_n x N_r
    std::uint64_t reference_id = 0; // content id of the reference basis
    double parameter = 0.0;
};

/// Logarithmic map of `target` into the tangent space at `reference`.
///
/// Computed in U = W^{1/2} Phi coordinates, where the weighted
/// orthonormality becomes Euclidean: with A = U0^T Uj,
///   (I - U0 U0^T) Uj A^{-1} = M Xi N^T  (thin SVD),
///   Gamma = M atan(Xi) N^T,
/// and the result is mapped back through W^{-1/2}.
TangentImage log_map(const PodBasis& reference, const PodBasis& target);

/// Exponential map back onto the manifold:
///   Gamma = M Xi N^T (thin SVD),  Phi = (U0 N cos(Xi) + M sin(Xi)) N^T.
/// Output is W-orthonormal; Xi entries at or beyond pi/2 emit a warning
/// since the tangent left the injectivity region.
PodBasis exp_map(const PodBasis& reference, const TangentImage& tangent);

/// Grassmann manifold interpolation: log at the reference, Lagrange-weighted
/// tangent average, exp back. Sample parameters must be pairwise distinct.
PodBasis gmi_interpolate(const std::vector<PodBasis>& bases, std::size_t reference_index,
                         double target_param);

} // namespace prom

#endif
