#ifndef PROM_GALERKIN_HPP
#define PROM_GALERKIN_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <string>
#include <vector>

#include "prom/pod.hpp"
#include "prom/snapshot.hpp"

namespace prom {

/// Discrete right-hand-side contract of a full-order model with quadratic
/// plus linear structure. apply_* take full-state mode vectors and return
/// velocity-block vectors.
class DiscreteModel {
public:
    virtual ~DiscreteModel() = default;

    virtual const Quadrature& quadrature() const = 0;
    virtual const FieldLayout& layout() const = 0;

    /// Indices [offset, offset+size) of the velocity block in the state.
    virtual std::pair<Eigen::Index, Eigen::Index> velocity_span() const = 0;

    /// nu * laplacian(velocity part) - grad(pressure part), velocity block.
    virtual Eigen::VectorXd apply_linear(const Eigen::VectorXd& mode,
                                         double viscosity) const = 0;

    /// -velocity(mode_m) . grad(velocity(mode_n)), velocity block. Bilinear.
    virtual Eigen::VectorXd apply_quadratic(const Eigen::VectorXd& mode_m,
                                            const Eigen::VectorXd& mode_n) const = 0;

    Eigen::VectorXd velocity_part(const Eigen::VectorXd& state) const;
    Eigen::VectorXd velocity_weights() const;
};

/// Projected ROM operators: M a' = Q:aa + L a.
struct GalerkinOperators {
    Eigen::MatrixXd mass;                   // M_lm
    Eigen::MatrixXd linear;                 // L_lm
    std::vector<Eigen::MatrixXd> quadratic; // quadratic[l](m, n) = Q_lmn
    double viscosity = 0.0;
    Eigen::Index n_rank = 0;

    Eigen::LDLT<Eigen::MatrixXd> mass_ldlt; // factorized once at assembly
    double mass_condition = 0.0;

    /// Factorizes `mass` and records its condition estimate. Called by
    /// assemble_operators; required after filling the fields by hand.
    void finalize_mass();
};

GalerkinOperators assemble_operators(const PodBasis& basis, const DiscreteModel& model,
                                     double viscosity);

/// d alpha/dt = M^{-1} (Q:aa + L a).
Eigen::VectorXd rom_rhs(const GalerkinOperators& ops, const Eigen::VectorXd& alpha);

struct RomTrajectory {
    Eigen::MatrixXd coefficients;   // N_t x N_r, row k = alpha(times[k])
    Eigen::VectorXd times;
    double dt = 0.0;                // integration step; recorded spacing is dt*stride
    Eigen::Index stride = 1;
};

/// Classical RK4 from t0; records the state every `stride` steps
/// (including step 0), n_steps/stride + 1 rows total.
RomTrajectory integrate_rom(const GalerkinOperators& ops, const Eigen::VectorXd& alpha0,
                            double dt, Eigen::Index n_steps, Eigen::Index stride = 1,
                            double t0 = 0.0);

/// Column k of the result is modes * alpha(t_k).
SnapshotSet reconstruct(const PodBasis& basis, const RomTrajectory& traj);

/// CSV bundle (mass.csv, linear.csv, quadratic.csv with l,m,n,value rows).
void write_operators_csv(const GalerkinOperators& ops, const std::string& directory);
void write_trajectory_csv(const RomTrajectory& traj, const std::string& path);

} // namespace prom

#endif
