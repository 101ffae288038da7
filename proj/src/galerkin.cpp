#include "prom/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "prom/errors.hpp"

namespace prom {

Eigen::VectorXd DiscreteModel::velocity_part(const Eigen::VectorXd& state) const {
    auto [offset, size] = velocity_span();
    return state.segment(offset, size);
}

Eigen::VectorXd DiscreteModel::velocity_weights() const {
    auto [offset, size] = velocity_span();
    return quadrature().weights().segment(offset, size);
}

GalerkinOperators assemble_operators(const PodBasis& basis, const DiscreteModel& model,
                                     double viscosity) {
    if (basis.n_dof() != model.layout().total_dofs())
        fail(errc::pairing, "basis dofs disagree with the model layout");
    if (basis.layout != model.layout())
        fail(errc::pairing, "basis field layout disagrees with the model layout");
    if (basis.weights_id != model.quadrature().id())
        fail(errc::pairing, "basis was built with different quadrature weights");

    const Eigen::Index n_rank = basis.n_rank();
    auto [v_off, v_size] = model.velocity_span();
    const Eigen::VectorXd wv = model.velocity_weights();

    // velocity blocks of the modes, pre-scaled by the weights for projections
    Eigen::MatrixXd vel = basis.modes.middleRows(v_off, v_size);
    Eigen::MatrixXd vel_w = wv.asDiagonal() * vel;

    GalerkinOperators ops;
    ops.n_rank = n_rank;
    ops.viscosity = viscosity;
    ops.mass = vel_w.transpose() * vel;
    ops.mass = 0.5 * (ops.mass + ops.mass.transpose().eval());    // symmetrize roundoff

    Eigen::MatrixXd lin(v_size, n_rank);
    for (Eigen::Index m = 0; m < n_rank; ++m)
        lin.col(m) = model.apply_linear(basis.modes.col(m), viscosity);
    ops.linear = vel_w.transpose() * lin;

    ops.quadratic.assign(std::size_t(n_rank), Eigen::MatrixXd::Zero(n_rank, n_rank));
    for (Eigen::Index m = 0; m < n_rank; ++m) {
        for (Eigen::Index n = 0; n < n_rank; ++n) {
            Eigen::VectorXd qmn = model.apply_quadratic(basis.modes.col(m), basis.modes.col(n));
            Eigen::VectorXd proj = vel_w.transpose() * qmn;
            for (Eigen::Index l = 0; l < n_rank; ++l) ops.quadratic[std::size_t(l)](m, n) = proj[l];
        }
    }

    ops.finalize_mass();
    return ops;
}

void GalerkinOperators::finalize_mass() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mass);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    mass_condition = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    mass_ldlt.compute(mass);
}

Eigen::VectorXd rom_rhs(const GalerkinOperators& ops, const Eigen::VectorXd& alpha) {
    if (alpha.size() != ops.n_rank)
        fail(errc::dimension_mismatch, "coefficient vector length disagrees with rank");
    if (!(ops.mass_condition < 1e12))
        fail(errc::mass_matrix, "mass matrix condition estimate " +
                                    format_double(ops.mass_condition) + " exceeds 1e12");
    Eigen::VectorXd rhs(ops.n_rank);
    for (Eigen::Index l = 0; l < ops.n_rank; ++l)
        rhs[l] = alpha.dot(ops.quadratic[std::size_t(l)] * alpha);
    rhs += ops.linear * alpha;
    return ops.mass_ldlt.solve(rhs);
}

RomTrajectory integrate_rom(const GalerkinOperators& ops, const Eigen::VectorXd& alpha0,
                            double dt, Eigen::Index n_steps, Eigen::Index stride,
                            double t0) {
    if (!(dt > 0.0)) fail(errc::dimension_mismatch, "integration step must be positive");
    if (n_steps < 1) fail(errc::dimension_mismatch, "need at least one step");
    if (stride < 1 || n_steps % stride != 0)
        fail(errc::dimension_mismatch, "recording stride must divide n_steps");

    const Eigen::Index n_records = n_steps / stride + 1;
    RomTrajectory traj;
    traj.dt = dt;
    traj.stride = stride;
    traj.coefficients.resize(n_records, ops.n_rank);
    traj.times.resize(n_records);

    Eigen::VectorXd alpha = alpha0;
    traj.coefficients.row(0) = alpha.transpose();
    traj.times[0] = t0;

    Eigen::Index record = 1;
    for (Eigen::Index step = 1; step <= n_steps; ++step) {
        Eigen::VectorXd k1 = rom_rhs(ops, alpha);
        Eigen::VectorXd k2 = rom_rhs(ops, alpha + 0.5 * dt * k1);
        Eigen::VectorXd k3 = rom_rhs(ops, alpha + 0.5 * dt * k2);
        Eigen::VectorXd k4 = rom_rhs(ops, alpha + dt * k3);
        alpha += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!alpha.allFinite())
            fail(errc::divergence,
                 "trajectory diverged at step " + std::to_string(step) + " (t = " +
                     format_double(t0 + double(step) * dt) + ")");
        if (step % stride == 0) {
            traj.coefficients.row(record) = alpha.transpose();
            traj.times[record] = t0 + double(step) * dt;
            ++record;
        }
    }
    return traj;
}

SnapshotSet reconstruct(const PodBasis& basis, const RomTrajectory& traj) {
    if (traj.coefficients.cols() != basis.n_rank())
        fail(errc::dimension_mismatch, "trajectory rank disagrees with basis rank");
    Eigen::MatrixXd data = basis.modes * traj.coefficients.transpose();
    const double dt_record = traj.dt * double(traj.stride);
    return SnapshotSet(std::move(data), basis.layout, basis.parameter, traj.times[0],
                       dt_record);
}

void write_operators_csv(const GalerkinOperators& ops, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    write_matrix_csv(ops.mass, (fs::path(directory) / "mass.csv").string());
    write_matrix_csv(ops.linear, (fs::path(directory) / "linear.csv").string());
    CsvWriter csv((fs::path(directory) / "quadratic.csv").string());
    csv.cell("l");
    csv.cell("m");
    csv.cell("n");
    csv.cell("value");
    csv.end_row();
    for (Eigen::Index l = 0; l < ops.n_rank; ++l)
        for (Eigen::Index m = 0; m < ops.n_rank; ++m)
            for (Eigen::Index n = 0; n < ops.n_rank; ++n) {
                csv.cell(std::int64_t(l));
                csv.cell(std::int64_t(m));
                csv.cell(std::int64_t(n));
                csv.cell(ops.quadratic[std::size_t(l)](m, n));
                csv.end_row();
            }
    csv.close();
}

void write_trajectory_csv(const RomTrajectory& traj, const std::string& path) {
    CsvWriter csv(path);
    csv.cell("time");
    for (Eigen::Index k = 0; k < traj.coefficients.cols(); ++k)
        csv.cell("alpha_" + std::to_string(k + 1));
    csv.end_row();
    for (Eigen::Index i = 0; i < traj.coefficients.rows(); ++i) {
        csv.cell(traj.times[i]);
        for (Eigen::Index k = 0; k < traj.coefficients.cols(); ++k)
            csv.cell(traj.coefficients(i, k));
        csv.end_row();
    }
    csv.close();
}

} // namespace prom
