#include "prom/metrics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "prom/errors.hpp"
#include "prom/grassmann.hpp"
#include "prom/mrpwi.hpp"

namespace prom {

RleReport rle(const SnapshotSet& truth, const SnapshotSet& prediction,
              const std::string& field, const std::string& method_tag) {
    if (truth.n_dof() != prediction.n_dof() || truth.n_snap() != prediction.n_snap())
        fail(errc::dimension_mismatch, "truth and prediction shapes disagree");
    for (Eigen::Index j = 0; j < truth.n_snap(); ++j) {
        const double a = truth.time_at(j), b = prediction.time_at(j);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
            fail(errc::dimension_mismatch,
                 "time stamps disagree at snapshot " + std::to_string(j));
    }

    auto block_rle = [&](Eigen::Index offset, Eigen::Index size) {
        double num = 0.0, den = 0.0;
        for (Eigen::Index j = 0; j < truth.n_snap(); ++j) {
            num += (prediction.data().block(offset, j, size, 1) -
                    truth.data().block(offset, j, size, 1))
                       .squaredNorm();
            den += truth.data().block(offset, j, size, 1).squaredNorm();
        }
        if (den == 0.0)
            fail(errc::degenerate_truth, "truth snapshots have zero norm; RLE undefined");
        return std::sqrt(num / den);
    };

    RleReport report;
    report.n_snapshots_used = truth.n_snap();
    report.method_tag = method_tag;
    for (const auto& b : truth.layout().blocks()) {
        auto [offset, size] = truth.layout().span_of(b.name);
        report.per_field[b.name] = block_rle(offset, size);
    }
    if (field.empty()) {
        report.rle = block_rle(0, truth.n_dof());
    } else {
        auto [offset, size] = truth.layout().span_of(field);
        report.rle = block_rle(offset, size);
    }
    return report;
}

Eigen::VectorXd principal_angles(const PodBasis& a, const PodBasis& b) {
    if (a.n_dof() != b.n_dof() || a.n_rank() != b.n_rank())
        fail(errc::dimension_mismatch, "bases have different shapes");
    if (a.weights_id != b.weights_id)
        fail(errc::pairing, "bases were built with different quadrature weights");
    if (!a.quadrature) fail(errc::pairing, "basis carries no quadrature");

    const Eigen::VectorXd& s = a.quadrature->sqrt_weights();
    Eigen::MatrixXd ua = s.asDiagonal() * a.modes;
    Eigen::MatrixXd ub = s.asDiagonal() * b.modes;

    // interpolated bases may be slightly non-orthonormal; orthonormalize the
    // coordinates first so the angles are between the spans
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(ua), qb(ub);
    ua = qa.householderQ() * Eigen::MatrixXd::Identity(ua.rows(), ua.cols());
    ub = qb.householderQ() * Eigen::MatrixXd::Identity(ub.rows(), ub.cols());

    Eigen::MatrixXd cross = ua.transpose() * ub;
    Eigen::BDCSVD<Eigen::MatrixXd> cos_svd(cross);
    Eigen::VectorXd cosines = cos_svd.singularValues();   // descending

    // sine route (Knyazev-Argentati): accurate for small angles where
    // acos(cos) loses half the digits
    Eigen::MatrixXd residual = ub - ua * cross;
    Eigen::BDCSVD<Eigen::MatrixXd> sin_svd(residual);
    Eigen::VectorXd sines = sin_svd.singularValues();     // descending

    const Eigen::Index r = cosines.size();
    Eigen::VectorXd angles(r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const double c = std::clamp(cosines[k], 0.0, 1.0);
        const double sn = std::clamp(sines[r - 1 - k], 0.0, 1.0);   // ascending pairing
        angles[k] = (c * c > 0.5) ? std::asin(sn) : std::acos(c);
    }
    std::sort(angles.data(), angles.data() + r);
    return angles;
}

double max_principal_angle(const PodBasis& a, const PodBasis& b) {
    const Eigen::VectorXd angles = principal_angles(a, b);
    return angles.size() ? angles[angles.size() - 1] : 0.0;
}

TimingReport benchmark_interpolation(const std::string& method,
                                     const std::vector<PodBasis>& bases,
                                     std::size_t reference_index, double target,
                                     int repetitions) {
    if (repetitions < 5)
        fail(errc::config, "benchmark needs at least 5 repetitions, got " +
                               std::to_string(repetitions));
    if (bases.empty()) fail(errc::catalog, "benchmark needs input bases");

    auto run = [&]() {
        if (method == "gmi") {
            volatile double sink = gmi_interpolate(bases, reference_index, target).modes(0, 0);
            (void)sink;
        } else if (method == "mrpwi") {
            volatile double sink =
                mrpwi_interpolate(bases, reference_index, target).modes(0, 0);
            (void)sink;
        } else {
            fail(errc::config, "unknown interpolation method: " + method);
        }
    };

    run();   // warm-up, untimed
    std::vector<double> samples;
    samples.reserve(std::size_t(repetitions));
    for (int i = 0; i < repetitions; ++i) {
        auto start = std::chrono::steady_clock::now();
        run();
        auto stop = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    const double median = (samples.size() % 2) ? samples[mid]
                                               : 0.5 * (samples[mid - 1] + samples[mid]);

    TimingReport report;
    report.method = method;
    report.n_dof = bases[0].n_dof();
    report.n_rank = bases[0].n_rank();
    report.n_neighbors = int(bases.size());
    report.wall_seconds = median;
    report.repetitions = repetitions;
    return report;
}

void write_rle_header(CsvWriter& csv) {
    csv.cell("method");
    csv.cell("n_rank");
    csv.cell("delta_param");
    csv.cell("n_neighbors");
    csv.cell("field");
    csv.cell("rle");
    csv.end_row();
}

void write_rle_row(CsvWriter& csv, const std::string& method, Eigen::Index n_rank,
                   double delta_param, int n_neighbors, const std::string& field,
                   double value) {
    csv.cell(method);
    csv.cell(std::int64_t(n_rank));
    csv.cell(delta_param);
    csv.cell(std::int64_t(n_neighbors));
    csv.cell(field);
    csv.cell(value);
    csv.end_row();
}

void write_timing_header(CsvWriter& csv) {
    csv.cell("method");
    csv.cell("n_dof");
    csv.cell("n_rank");
    csv.cell("n_neighbors");
    csv.cell("wall_seconds");
    csv.end_row();
}

void write_timing_row(CsvWriter& csv, const TimingReport& report) {
    csv.cell(report.method);
    csv.cell(std::int64_t(report.n_dof));
    csv.cell(std::int64_t(report.n_rank));
    csv.cell(std::int64_t(report.n_neighbors));
    csv.cell(report.wall_seconds);
    csv.end_row();
}

} // namespace prom
