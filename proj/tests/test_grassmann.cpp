#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "prom/errors.hpp"
#include "prom/fom.hpp"
#include "prom/grassmann.hpp"
#include "prom/metrics.hpp"
#include "support.hpp"

using namespace prom;

namespace {

constexpr double kPi = std::numbers::pi;

PodBasis planar_basis(double theta, const Quadrature& w) {
    Eigen::MatrixXd col(2, 1);
    col << std::cos(theta), std::sin(theta);
    return test::make_basis(col, w, theta, false);
}

} // namespace

TEST_CASE("log map sends the base point to the origin") {
    Quadrature w = test::random_quadrature(20, 1);
    PodBasis basis = test::random_basis(20, 4, w, 0.0, 2);
    TangentImage image = log_map(basis, basis);
    CHECK(test::max_abs(image.gamma) <= 1e-12);
}

TEST_CASE("hand-worked 1-D geodesic at pi/6") {
    Quadrature w = Quadrature::uniform(2, 1.0);
    PodBasis ref = planar_basis(0.0, w);
    PodBasis rotated = planar_basis(kPi / 6.0, w);

    TangentImage image = log_map(ref, rotated);
    Eigen::MatrixXd expected(2, 1);
    expected << 0.0, kPi / 6.0;
    CHECK(test::max_abs(image.gamma - expected) <= 1e-12);

    PodBasis back = exp_map(ref, image);
    // span must match (cos pi/6, sin pi/6)
    const double cross = back.modes(0, 0) * std::sin(kPi / 6.0) -
                         back.modes(1, 0) * std::cos(kPi / 6.0);
    CHECK(std::abs(cross) <= 1e-12);
}

TEST_CASE("subspace rotations map to the zero tangent") {
    Quadrature w = test::random_quadrature(15, 3);
    PodBasis basis = test::random_basis(15, 3, w, 0.0, 4);
    Eigen::MatrixXd rot = test::random_orthonormal(3, 3, 5);
    PodBasis same_span = basis;
    same_span.modes = basis.modes * rot;
    TangentImage image = log_map(basis, same_span);
    CHECK(test::max_abs(image.gamma) <= 1e-10);
}

TEST_CASE("exp map of the zero tangent returns the reference") {
    Quadrature w = test::random_quadrature(12, 6);
    PodBasis basis = test::random_basis(12, 3, w, 0.0, 7);
    TangentImage zero;
    zero.gamma = Eigen::MatrixXd::Zero(12, 3);
    zero.reference_id = basis.content_id();
    zero.parameter = basis.parameter;
    PodBasis back = exp_map(basis, zero);
    CHECK(test::max_abs(back.modes - basis.modes) <= 1e-12);
}

TEST_CASE("exp map validates the reference id") {
    Quadrature w = test::random_quadrature(10, 8);
    PodBasis a = test::random_basis(10, 2, w, 0.0, 9);
    PodBasis b = test::random_basis(10, 2, w, 1.0, 10);
    TangentImage image = log_map(a, b);
    CHECK_THROWS_AS(exp_map(b, image), Error);
}

TEST_CASE("roundtrip reproduces the subspace") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 40 + Eigen::Index(rng() % 60);
        const Eigen::Index r = 1 + Eigen::Index(rng() % 6);
        // alternate plain and weighted geometry
        Quadrature w = (trial % 2) ? test::random_quadrature(n, rng())
                                   : Quadrature::uniform(n, 1.0);
        PodBasis ref = test::random_basis(n, r, w, 0.0, rng());
        PodBasis target = test::random_basis(n, r, w, 1.0, rng());

        TangentImage image = log_map(ref, target);
        PodBasis back = exp_map(ref, image);

        CHECK(test::orthonormality_defect(back) <= 1e-9);
        CHECK(max_principal_angle(back, target) <= 1e-8);
    }
}

TEST_CASE("tangent images are horizontal at the reference") {
    Quadrature w = test::random_quadrature(30, 14);
    PodBasis ref = test::random_basis(30, 5, w, 0.0, 15);
    PodBasis target = test::random_basis(30, 5, w, 1.0, 16);
    TangentImage image = log_map(ref, target);
    // Phi0^T W Gamma = 0
    Eigen::MatrixXd horizontality =
        ref.modes.transpose() * (w.weights().asDiagonal() * image.gamma);
    CHECK(test::max_abs(horizontality) <= 1e-8);
}

TEST_CASE("log map diagnoses near-orthogonal subspaces") {
    Quadrature w = Quadrature::uniform(4, 1.0);
    Eigen::MatrixXd a(4, 1), b(4, 1);
    a << 1, 0, 0, 0;
    b << 0, 1, 0, 0;
    PodBasis ref = test::make_basis(a, w, 0.0, false);
    PodBasis orth = test::make_basis(b, w, 1.0, false);
    CHECK_THROWS_WITH_AS(log_map(ref, orth), doctest::Contains("singular value"), Error);
}

TEST_CASE("gmi reproduces sample subspaces at the nodes") {
    ManufacturedFamily family;
    family.n_dof = 50;
    family.n_rank = 5;
    std::vector<double> params{0.0, 1.0, 2.0, 3.0};
    auto bases = manufactured_bases(family, params);

    for (std::size_t node = 0; node < params.size(); ++node) {
        PodBasis result = gmi_interpolate(bases, 1, params[node]);
        CHECK(max_principal_angle(result, bases[node]) <= 1e-8);
        CHECK(test::orthonormality_defect(result) <= 1e-9);
    }
}

TEST_CASE("gmi midpoint of two 1-D subspaces is the angle bisector") {
    Quadrature w = Quadrature::uniform(2, 1.0);
    std::vector<PodBasis> bases{planar_basis(0.0, w), planar_basis(kPi / 3.0, w)};
    bases[0].parameter = 0.0;
    bases[1].parameter = 1.0;
    PodBasis mid = gmi_interpolate(bases, 0, 0.5);
    const double angle = std::atan2(mid.modes(1, 0), mid.modes(0, 0));
    CHECK(std::abs(angle - kPi / 6.0) <= 1e-10);
}

TEST_CASE("gmi error shrinks with more manufactured nodes") {
    ManufacturedFamily family;
    family.n_dof = 60;
    family.n_rank = 5;
    const double target = 1.7;

    auto subspace_error = [&](const std::vector<double>& params) {
        auto bases = manufactured_bases(family, params);
        std::size_t ref = params.size() / 2;
        PodBasis result = gmi_interpolate(bases, ref, target);
        PodBasis exact = test::make_basis(manufactured_subspace(family, target),
                                          *bases[0].quadrature, target, false);
        return max_principal_angle(result, exact);
    };

    const double err2 = subspace_error({1.0, 2.0});
    const double err4 = subspace_error({0.0, 1.0, 2.0, 3.0});
    CHECK(err4 < err2);
    CHECK(err4 <= 1e-3);
}

TEST_CASE("gmi validates inputs") {
    ManufacturedFamily family;
    auto bases = manufactured_bases(family, {0.0, 1.0});
    CHECK_THROWS_AS(gmi_interpolate({bases[0]}, 0, 0.5), Error);
    auto duplicated = manufactured_bases(family, {1.0, 1.0});
    CHECK_THROWS_AS(gmi_interpolate(duplicated, 0, 0.5), Error);
}
