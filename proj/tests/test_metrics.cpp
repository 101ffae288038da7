#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "prom/errors.hpp"
#include "prom/fom.hpp"
#include "prom/metrics.hpp"
#include "support.hpp"

using namespace prom;

namespace {

SnapshotSet wrap(const Eigen::MatrixXd& data, double t0 = 0.0) {
    return SnapshotSet(data, FieldLayout::single("u", 1, int(data.rows())), 0.0, t0, 0.1);
}

} // namespace

TEST_CASE("rle closed forms") {
    Eigen::MatrixXd truth = test::random_matrix(6, 4, 1);
    CHECK(rle(wrap(truth), wrap(truth)).rle == 0.0);
    CHECK(rle(wrap(truth), wrap((2.0 * truth).eval())).rle == doctest::Approx(1.0));
}

TEST_CASE("rle matches the naive double loop") {
    Eigen::MatrixXd truth = test::random_matrix(5, 4, 2);
    Eigen::MatrixXd pred = test::random_matrix(5, 4, 3);
    double num = 0.0, den = 0.0;
    for (Eigen::Index j = 0; j < 4; ++j)
        for (Eigen::Index i = 0; i < 5; ++i) {
            num += (pred(i, j) - truth(i, j)) * (pred(i, j) - truth(i, j));
            den += truth(i, j) * truth(i, j);
        }
    CHECK(rle(wrap(truth), wrap(pred)).rle ==
          doctest::Approx(std::sqrt(num / den)).epsilon(1e-14));
}

TEST_CASE("rle is invariant under simultaneous column permutation") {
    Eigen::MatrixXd truth = test::random_matrix(6, 5, 4);
    Eigen::MatrixXd pred = test::random_matrix(6, 5, 5);
    std::vector<Eigen::Index> perm{3, 0, 4, 1, 2};
    Eigen::MatrixXd truth_p(6, 5), pred_p(6, 5);
    for (Eigen::Index j = 0; j < 5; ++j) {
        truth_p.col(j) = truth.col(perm[std::size_t(j)]);
        pred_p.col(j) = pred.col(perm[std::size_t(j)]);
    }
    CHECK(rle(wrap(truth), wrap(pred)).rle ==
          doctest::Approx(rle(wrap(truth_p), wrap(pred_p)).rle).epsilon(1e-14));
}

TEST_CASE("rle shrinks with the perturbation") {
    Eigen::MatrixXd truth = test::random_matrix(8, 3, 6);
    Eigen::MatrixXd direction = test::random_matrix(8, 3, 7);
    double previous = std::numeric_limits<double>::infinity();
    for (double scale : {1.0, 0.1, 0.01, 1e-4, 1e-8}) {
        const double value =
            rle(wrap(truth), wrap((truth + scale * direction).eval())).rle;
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("rle per-field restriction uses the layout mask") {
    Eigen::MatrixXd data(6, 2);
    data.setZero();
    data.block(0, 0, 3, 2).setConstant(1.0);    // "u" block
    data.block(3, 0, 3, 2).setConstant(2.0);    // "p" block
    FieldLayout layout({FieldBlock{"u", 1, 3}, FieldBlock{"p", 1, 3}});
    SnapshotSet truth(data, layout, 0.0, 0.0, 0.1);

    Eigen::MatrixXd pred_data = data;
    pred_data.block(3, 0, 3, 2).setConstant(2.2);    // only "p" off by 10%
    SnapshotSet pred(pred_data, layout, 0.0, 0.0, 0.1);

    RleReport report = rle(truth, pred);
    CHECK(report.per_field.at("u") == 0.0);
    CHECK(report.per_field.at("p") == doctest::Approx(0.1));
    CHECK(rle(truth, pred, "p").rle == doctest::Approx(0.1));
    CHECK_THROWS_AS(rle(truth, pred, "missing"), Error);
}

TEST_CASE("rle validates inputs") {
    Eigen::MatrixXd truth = test::random_matrix(4, 3, 8);
    CHECK_THROWS_AS(rle(wrap(truth), wrap(test::random_matrix(4, 2, 9))), Error);
    CHECK_THROWS_AS(rle(wrap(truth), wrap(truth, 5.0)), Error);    // shifted times
    Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(4, 3);
    CHECK_THROWS_WITH_AS(rle(wrap(zeros), wrap(truth)), doctest::Contains("zero"), Error);
}

TEST_CASE("principal angles closed forms") {
    Quadrature w2 = Quadrature::uniform(2, 1.0);
    Eigen::MatrixXd e1(2, 1), rot(2, 1);
    e1 << 1.0, 0.0;
    const double theta = std::numbers::pi / 4.0;
    rot << std::cos(theta), std::sin(theta);
    PodBasis a = test::make_basis(e1, w2, 0.0, false);
    PodBasis b = test::make_basis(rot, w2, 0.0, false);
    Eigen::VectorXd angles = principal_angles(a, b);
    CHECK(angles.size() == 1);
    CHECK(angles[0] == doctest::Approx(theta).epsilon(1e-12));

    // identical bases and rotated spans are indistinguishable
    Quadrature w = test::random_quadrature(30, 10);
    PodBasis basis = test::random_basis(30, 5, w, 0.0, 11);
    CHECK(max_principal_angle(basis, basis) <= 1e-7);
    PodBasis rotated = basis;
    rotated.modes = basis.modes * test::random_orthonormal(5, 5, 12);
    CHECK(max_principal_angle(basis, rotated) <= 1e-7);
}

TEST_CASE("principal angles are symmetric and accurate near zero") {
    Quadrature w = test::random_quadrature(40, 13);
    PodBasis a = test::random_basis(40, 4, w, 0.0, 14);
    PodBasis b = test::random_basis(40, 4, w, 0.0, 15);
    Eigen::VectorXd ab = principal_angles(a, b);
    Eigen::VectorXd ba = principal_angles(b, a);
    CHECK(test::max_abs(ab - ba) <= 1e-10);

    // a tiny rotation must be resolved well below the acos noise floor
    PodBasis nearly = a;
    Eigen::MatrixXd bump = a.modes;
    Eigen::VectorXd extra = test::random_vector(40, 16);
    bump.col(0) += 1e-9 * extra;
    nearly = test::make_basis(bump, w, 0.0, true);
    CHECK(max_principal_angle(a, nearly) <= 1e-7);
    CHECK(max_principal_angle(a, nearly) > 0.0);
}

TEST_CASE("benchmark harness enforces repetitions and reports medians") {
    ManufacturedFamily family;
    family.n_dof = 200;
    family.n_rank = 5;
    auto bases = manufactured_bases(family, {0.0, 1.0, 2.0, 3.0});

    CHECK_THROWS_AS(benchmark_interpolation("mrpwi", bases, 1, 1.5, 4), Error);
    CHECK_THROWS_AS(benchmark_interpolation("nope", bases, 1, 1.5, 5), Error);

    TimingReport report = benchmark_interpolation("mrpwi", bases, 1, 1.5, 5);
    CHECK(report.wall_seconds > 0.0);
    CHECK(report.repetitions == 5);
    CHECK(report.n_dof == 200);
    CHECK(report.method == "mrpwi");
}
