#ifndef PROM_TESTS_SUPPORT_HPP
#define PROM_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <Eigen/QR>

#include <memory>
#include <random>
#include <vector>

#include "prom/pod.hpp"
#include "prom/snapshot.hpp"

namespace prom::test {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
    return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
    return random_matrix(n, 1, seed).col(0);
}

inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols,
                                          std::uint64_t seed) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rows, cols, seed));
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

inline Quadrature random_quadrature(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> positive(0.2, 2.0);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = positive(rng);
    return Quadrature(w);
}

/// Wraps explicit mode columns into a PodBasis; columns are made exactly
/// W-orthonormal via QR in W^{1/2} coordinates unless `orthonormalize` is off.
inline PodBasis make_basis(const Eigen::MatrixXd& columns, const Quadrature& w,
                           double parameter, bool orthonormalize = true) {
    PodBasis basis;
    if (orthonormalize) {
        Eigen::MatrixXd u = w.sqrt_weights().asDiagonal() * columns;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
        Eigen::MatrixXd q =
            qr.householderQ() * Eigen::MatrixXd::Identity(u.rows(), u.cols());
        basis.modes = w.sqrt_weights().cwiseInverse().asDiagonal() * q;
    } else {
        basis.modes = columns;
    }
    basis.singular_values =
        Eigen::VectorXd::LinSpaced(columns.cols(), double(columns.cols()), 1.0);
    basis.temporal.resize(0, 0);
    basis.parameter = parameter;
    basis.layout = FieldLayout::single("state", 1, int(columns.rows()));
    basis.weights_id = w.id();
    basis.quadrature = std::make_shared<Quadrature>(w);
    return basis;
}

inline PodBasis random_basis(Eigen::Index n_dof, Eigen::Index n_rank, const Quadrature& w,
                             double parameter, std::uint64_t seed) {
    return make_basis(random_matrix(n_dof, n_rank, seed), w, parameter);
}

inline double max_abs(const Eigen::MatrixXd& m) {
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

/// max |Phi^T W Phi - I|
inline double orthonormality_defect(const PodBasis& basis) {
    Eigen::MatrixXd gram = basis.modes.transpose() *
                           (basis.quadrature->weights().asDiagonal() * basis.modes);
    return max_abs(gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
}

} // namespace prom::test

#endif
