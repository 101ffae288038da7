#include "prom/grassmann.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "prom/errors.hpp"
#include "prom/params.hpp"

namespace prom {

namespace {

void check_pairing(const PodBasis& reference, const PodBasis& target) {
    if (reference.n_dof() != target.n_dof() || reference.n_rank() != target.n_rank())
        fail(errc::dimension_mismatch, "bases have different shapes");
    if (reference.weights_id != target.weights_id)
        fail(errc::pairing, "bases were built with different quadrature weights");
    if (!reference.quadrature)
        fail(errc::pairing, "reference basis carries no quadrature");
}

Eigen::MatrixXd to_orthonormal_coords(const PodBasis& basis) {
    return basis.quadrature->sqrt_weights().asDiagonal() * basis.modes;
}

} // namespace

TangentImage log_map(const PodBasis& reference, const PodBasis& target) {
    check_pairing(reference, target);

    const Eigen::MatrixXd u0 = to_orthonormal_coords(reference);
    const Eigen::MatrixXd uj = to_orthonormal_coords(target);

    // alignment factor A = U0^T Uj; an SVD-based solve keeps near-singular
    // alignment diagnosable instead of amplifying noise
    Eigen::MatrixXd a = u0.transpose() * uj;
    Eigen::JacobiSVD<Eigen::MatrixXd> a_svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smallest = a_svd.singularValues().minCoeff();
    if (smallest <= 1e-10)
        fail(errc::geodesic_domain,
             "subspaces are too close to orthogonal: smallest alignment singular value " +
                 format_double(smallest));

    Eigen::MatrixXd b = uj * a_svd.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
    Eigen::MatrixXd c = b - u0 * (u0.transpose() * b);      // (I - U0 U0^T) Uj A^{-1}

    Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd angles = svd.singularValues().array().atan();
    Eigen::MatrixXd gamma_u =
        svd.matrixU() * angles.asDiagonal() * svd.matrixV().transpose();

    TangentImage image;
    image.gamma = reference.quadrature->sqrt_weights().cwiseInverse().asDiagonal() * gamma_u;
    image.reference_id = reference.content_id();
    image.parameter = target.parameter;
    return image;
}

PodBasis exp_map(const PodBasis& reference, const TangentImage& tangent) {
    if (!reference.quadrature)
        fail(errc::pairing, "reference basis carries no quadrature");
    if (tangent.reference_id != reference.content_id())
        fail(errc::pairing, "tangent image belongs to a different reference basis");
    if (tangent.gamma.rows() != reference.n_dof() ||
        tangent.gamma.cols() != reference.n_rank())
        fail(errc::dimension_mismatch, "tangent image shape disagrees with the reference");

    const Eigen::MatrixXd u0 = to_orthonormal_coords(reference);
    Eigen::MatrixXd gamma_u =
        reference.quadrature->sqrt_weights().asDiagonal() * tangent.gamma;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(gamma_u, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd xi = svd.singularValues();
    if (xi.size() > 0 && xi.maxCoeff() >= std::numbers::pi / 2.0)
        std::cerr << "[prom] warning: tangent image reaches principal angle "
                  << format_double(xi.maxCoeff())
                  << " >= pi/2; the interpolant left the injectivity region\n";

    Eigen::MatrixXd phi_u =
        (u0 * svd.matrixV() * xi.array().cos().matrix().asDiagonal() +
         svd.matrixU() * xi.array().sin().matrix().asDiagonal()) *
        svd.matrixV().transpose();

    PodBasis out;
    out.modes = reference.quadrature->sqrt_weights().cwiseInverse().asDiagonal() * phi_u;
    out.singular_values = reference.singular_values;
    out.sv_authoritative = false;
    out.temporal.resize(0, 0);
    out.parameter = tangent.parameter;
    out.layout = reference.layout;
    out.weights_id = reference.weights_id;
    out.quadrature = reference.quadrature;
    return out;
}

PodBasis gmi_interpolate(const std::vector<PodBasis>& bases, std::size_t reference_index,
                         double target_param) {
    if (bases.size() < 2)
        fail(errc::catalog, "need at least two bases to interpolate");
    if (reference_index >= bases.size())
        fail(errc::catalog, "reference index out of range");

    std::vector<double> params;
    params.reserve(bases.size());
    for (const auto& b : bases) params.push_back(b.parameter);
    const std::vector<double> sigma = lagrange_weights(params, target_param);

    const PodBasis& reference = bases[reference_index];
    Eigen::MatrixXd gamma_bar =
        Eigen::MatrixXd::Zero(reference.n_dof(), reference.n_rank());
    for (std::size_t j = 0; j < bases.size(); ++j) {
        try {
            TangentImage image = log_map(reference, bases[j]);
            gamma_bar += sigma[j] * image.gamma;
        } catch (const Error& e) {
            if (e.code() == errc::geodesic_domain)
                fail(errc::geodesic_domain,
                     "case " + std::to_string(j) + " (parameter " +
                         format_double(params[j]) + "): " + e.what());
            throw;
        }
    }

    TangentImage mean;
    mean.gamma = std::move(gamma_bar);
    mean.reference_id = reference.content_id();
    mean.parameter = target_param;
    return exp_map(reference, mean);
}

} // namespace prom
