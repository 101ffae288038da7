#ifndef PROM_FOM_HPP
#define PROM_FOM_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "prom/galerkin.hpp"
#include "prom/pod.hpp"
#include "prom/snapshot.hpp"

namespace prom {

/// 1-D periodic viscous Burgers full-order model,
/// u_t = -u u_x + nu u_xx, second-order central differences, RK4.
struct BurgersConfig {
    int n_points = 512;              // power of two, >= 64
    double domain_length = 2.0 * 3.14159265358979323846;
    double viscosity = 1.0 / 130.0;  // nu = 1/Re
    double dt_fom = 1e-3;
    int n_transient = 2000;          // steps discarded before recording
    int n_snapshots = 101;
    int snapshot_stride = 100;       // FOM steps per snapshot
    std::uint64_t init_seed = 2025;
    double parameter = 130.0;        // gamma recorded with the snapshots (Re)

    static BurgersConfig for_reynolds(double reynolds);
};

/// Reproducible multi-harmonic initial condition shared across parameters.
Eigen::VectorXd burgers_initial_condition(const BurgersConfig& cfg);

/// Integrates the FOM, discards the transient, records n_snapshots columns.
/// Quadrature weights are uniform cell widths dx.
std::pair<SnapshotSet, Quadrature> burgers_run(const BurgersConfig& cfg);

/// Same run from an explicit initial state (test and validation hook).
std::pair<SnapshotSet, Quadrature> burgers_run_from(const BurgersConfig& cfg,
                                                    const Eigen::VectorXd& u0);

/// Discrete RHS pieces matching burgers_run exactly:
/// apply_linear(m, nu) = nu D2 m, apply_quadratic(m, n) = -m .* (D1 n).
std::unique_ptr<DiscreteModel> burgers_model(const BurgersConfig& cfg);

/// Manufactured family of orthonormal bases with analytically known
/// subspaces: mode pairs rotate within their 2-planes at rate k per pair
/// (exercising realignment without moving the span) while the first mode
/// drifts toward a fixed extra direction at angle 0.1 * angle_rate * gamma
/// (moving the subspace itself).
struct ManufacturedFamily {
    Eigen::Index n_dof = 60;
    int n_rank = 5;                  // odd
    double angle_rate = 0.3;         // radians per unit parameter
    std::uint64_t base_seed = 7;
};

std::vector<PodBasis> manufactured_bases(const ManufacturedFamily& family,
                                         const std::vector<double>& params);

/// Exact subspace of the family at an arbitrary parameter (oracle).
Eigen::MatrixXd manufactured_subspace(const ManufacturedFamily& family, double param);

} // namespace prom

#endif
