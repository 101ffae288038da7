#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <filesystem>

#include "prom/errors.hpp"
#include "prom/pod.hpp"
#include "support.hpp"

using namespace prom;

namespace {

SnapshotSet wrap(const Eigen::MatrixXd& data, double parameter = 0.0) {
    return SnapshotSet(data, FieldLayout::single("u", 1, int(data.rows())), parameter, 0.0,
                       0.1);
}

} // namespace

TEST_CASE("pod of rank-1 data recovers the repeated column") {
    const Eigen::Index n = 12, s = 5;
    Eigen::VectorXd c = test::random_vector(n, 3);
    c /= c.norm();
    Eigen::MatrixXd q(n, s);
    for (Eigen::Index j = 0; j < s; ++j) q.col(j) = c;

    PodBasis basis = compute_pod(wrap(q), Quadrature::uniform(n, 1.0), 1);
    CHECK(basis.singular_values[0] == doctest::Approx(std::sqrt(double(s))).epsilon(1e-12));
    // mode equals +-c; the sign convention fixes one of them deterministically
    const double align = std::abs(basis.modes.col(0).dot(c));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pod of a diagonal matrix returns canonical modes in order") {
    const Eigen::Index n = 8, r = 3;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, r);
    q(0, 0) = 3.0;
    q(1, 1) = 2.0;
    q(2, 2) = 1.0;

    PodBasis basis = compute_pod(wrap(q), Quadrature::uniform(n, 1.0), r);
    CHECK(basis.singular_values[0] == doctest::Approx(3.0));
    CHECK(basis.singular_values[1] == doctest::Approx(2.0));
    CHECK(basis.singular_values[2] == doctest::Approx(1.0));
    for (Eigen::Index k = 0; k < r; ++k) {
        CHECK(basis.modes(k, k) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(basis.modes.col(k).cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("pod satisfies weighted orthonormality and the tail-energy identity") {
    const Eigen::Index n = 20, s = 10;
    Eigen::MatrixXd q = test::random_matrix(n, s, 17);
    Quadrature w = test::random_quadrature(n, 23);
    PodBasis basis = compute_pod(wrap(q), w, s);

    CHECK(test::orthonormality_defect(basis) <= 1e-10);

    // reconstruction error at rank r equals the tail singular-value norm
    Eigen::MatrixXd y = w.sqrt_weights().asDiagonal() * q;
    for (Eigen::Index r = 1; r < s; ++r) {
        Eigen::MatrixXd uy = w.sqrt_weights().asDiagonal() * basis.modes.leftCols(r);
        Eigen::MatrixXd residual = y - uy * (uy.transpose() * y);
        double tail = 0.0;
        for (Eigen::Index k = r; k < s; ++k)
            tail += basis.singular_values[k] * basis.singular_values[k];
        CHECK(residual.norm() == doctest::Approx(std::sqrt(tail)).epsilon(1e-9));
    }
}

TEST_CASE("gram and direct svd routes agree") {
    const Eigen::Index n = 30, s = 12, r = 6;
    // controlled spectrum keeps the mode comparison well-posed
    Eigen::MatrixXd left = test::random_orthonormal(n, s, 5);
    Eigen::MatrixXd right = test::random_orthonormal(s, s, 6);
    Eigen::VectorXd spectrum(s);
    for (Eigen::Index k = 0; k < s; ++k) spectrum[k] = std::pow(0.5, double(k));
    Eigen::MatrixXd q = left * spectrum.asDiagonal() * right.transpose();

    Quadrature w = test::random_quadrature(n, 8);
    // undo the weighting so the weighted problem has the planted spectrum
    Eigen::MatrixXd q_unweighted = w.sqrt_weights().cwiseInverse().asDiagonal() * q;

    PodOptions gram_opts, svd_opts;
    gram_opts.method = PodMethod::snapshots;
    svd_opts.method = PodMethod::direct_svd;
    PodBasis a = compute_pod(wrap(q_unweighted), w, r, gram_opts);
    PodBasis b = compute_pod(wrap(q_unweighted), w, r, svd_opts);

    CHECK(test::max_abs(a.modes - b.modes) <= 1e-9);
    CHECK(test::max_abs(a.singular_values - b.singular_values) <= 1e-9);
    for (Eigen::Index k = 0; k < r; ++k)
        CHECK(a.singular_values[k] == doctest::Approx(spectrum[k]).epsilon(1e-10));
}

TEST_CASE("pod is deterministic") {
    Eigen::MatrixXd q = test::random_matrix(15, 6, 31);
    Quadrature w = test::random_quadrature(15, 32);
    PodBasis a = compute_pod(wrap(q), w, 4);
    PodBasis b = compute_pod(wrap(q), w, 4);
    CHECK(std::memcmp(a.modes.data(), b.modes.data(),
                      sizeof(double) * std::size_t(a.modes.size())) == 0);
    CHECK(std::memcmp(a.singular_values.data(), b.singular_values.data(),
                      sizeof(double) * std::size_t(a.singular_values.size())) == 0);
}

TEST_CASE("pod validates rank and data") {
    Eigen::MatrixXd q = test::random_matrix(10, 4, 1);
    Quadrature w = Quadrature::uniform(10, 1.0);
    CHECK_THROWS_AS(compute_pod(wrap(q), w, 5), Error);    // rank > n_snap
    CHECK_THROWS_AS(compute_pod(wrap(q), w, 0), Error);

    Eigen::MatrixXd bad = q;
    bad(2, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(compute_pod(wrap(bad), w, 2), Error);

    // rank-1 data: requesting the noise tail is a rank error
    Eigen::MatrixXd degenerate(10, 4);
    Eigen::VectorXd c = test::random_vector(10, 9);
    for (int j = 0; j < 4; ++j) degenerate.col(j) = double(j + 1) * c;
    CHECK_THROWS_AS(compute_pod(wrap(degenerate), w, 3), Error);
}

TEST_CASE("sign convention: largest-magnitude entry is positive") {
    Eigen::MatrixXd q = test::random_matrix(18, 7, 77);
    PodBasis basis = compute_pod(wrap(q), Quadrature::uniform(18, 1.0), 5);
    for (Eigen::Index k = 0; k < basis.n_rank(); ++k) {
        Eigen::Index arg = 0;
        basis.modes.col(k).cwiseAbs().maxCoeff(&arg);
        CHECK(basis.modes(arg, k) > 0.0);
    }
}

TEST_CASE("projection behaves like a W-orthogonal projector") {
    const Eigen::Index n = 25, r = 3;
    Quadrature w = test::random_quadrature(n, 4);
    PodBasis basis = test::random_basis(n, r, w, 0.0, 41);

    // a mode projects to its own coordinate
    Eigen::VectorXd alpha = project(basis.modes.col(0), basis, w);
    CHECK(test::max_abs(alpha - Eigen::VectorXd::Unit(r, 0)) <= 1e-10);

    // a W-orthogonal vector projects to zero
    Eigen::VectorXd q = test::random_vector(n, 42);
    Eigen::VectorXd proj_coeff = project(q, basis, w);
    Eigen::VectorXd orth = q - basis.modes * proj_coeff;
    CHECK(test::max_abs(project(orth, basis, w)) <= 1e-10);

    // residual is W-orthogonal to every mode
    for (Eigen::Index l = 0; l < r; ++l)
        CHECK(std::abs(weighted_inner(basis.modes.col(l), orth, w)) <= 1e-10);

    // weights pairing is enforced
    Quadrature other = test::random_quadrature(n, 5);
    CHECK_THROWS_AS(project(q, basis, other), Error);
}

TEST_CASE("pod basis file round trips") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "prom_tests";
    fs::create_directories(dir);
    auto path = (dir / "basis.psnap").string();

    Eigen::MatrixXd q = test::random_matrix(14, 6, 55);
    Quadrature w = test::random_quadrature(14, 56);
    PodBasis basis = compute_pod(wrap(q, 125.0), w, 5);
    write_pod_basis(basis, path);

    CHECK(is_pod_basis_file(path));
    PodBasis loaded = read_pod_basis(path);
    CHECK(std::memcmp(loaded.modes.data(), basis.modes.data(),
                      sizeof(double) * std::size_t(basis.modes.size())) == 0);
    CHECK(std::memcmp(loaded.singular_values.data(), basis.singular_values.data(),
                      sizeof(double) * std::size_t(basis.n_rank())) == 0);
    CHECK(loaded.parameter == 125.0);
    CHECK(loaded.weights_id == basis.weights_id);
    CHECK(loaded.sv_authoritative == basis.sv_authoritative);
    CHECK(loaded.layout == basis.layout);
}

TEST_CASE("mean subtraction flag defaults off") {
    Eigen::MatrixXd q = test::random_matrix(10, 5, 60);
    Quadrature w = Quadrature::uniform(10, 1.0);
    PodBasis raw = compute_pod(wrap(q), w, 3);
    PodOptions centered;
    centered.subtract_mean = true;
    PodBasis mean_free = compute_pod(wrap(q), w, 3, centered);
    // centering changes the leading mode for generic data
    CHECK(test::max_abs(raw.modes.col(0) - mean_free.modes.col(0)) > 1e-6);
}
