#include "prom/fom.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>
#include <string>

#include "prom/errors.hpp"

namespace prom {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// periodic second-order central differences
Eigen::VectorXd d1_periodic(const Eigen::VectorXd& u, double dx) {
    const Eigen::Index n = u.size();
    Eigen::VectorXd out(n);
    const double scale = 1.0 / (2.0 * dx);
    out[0] = (u[1] - u[n - 1]) * scale;
    for (Eigen::Index i = 1; i < n - 1; ++i) out[i] = (u[i + 1] - u[i - 1]) * scale;
    out[n - 1] = (u[0] - u[n - 2]) * scale;
    return out;
}

Eigen::VectorXd d2_periodic(const Eigen::VectorXd& u, double dx) {
    const Eigen::Index n = u.size();
    Eigen::VectorXd out(n);
    const double scale = 1.0 / (dx * dx);
    out[0] = (u[1] - 2.0 * u[0] + u[n - 1]) * scale;
    for (Eigen::Index i = 1; i < n - 1; ++i)
        out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * scale;
    out[n - 1] = (u[0] - 2.0 * u[n - 1] + u[n - 2]) * scale;
    return out;
}

Eigen::VectorXd burgers_rhs(const Eigen::VectorXd& u, double dx, double viscosity) {
    return (-u.array() * d1_periodic(u, dx).array()).matrix() +
           viscosity * d2_periodic(u, dx);
}

void validate_config(const BurgersConfig& cfg, double max_speed) {
    if (!is_power_of_two(cfg.n_points) || cfg.n_points < 64)
        fail(errc::config, "n_points must be a power of two >= 64, got " +
                               std::to_string(cfg.n_points));
    if (cfg.viscosity < 0.0)
        fail(errc::config, "viscosity must be non-negative");
    if (cfg.n_snapshots < 1 || cfg.snapshot_stride < 1 || cfg.n_transient < 0)
        fail(errc::config, "snapshot counts must be positive");
    const double dx = cfg.domain_length / cfg.n_points;
    const double advective = 0.5 * dx / std::max(max_speed, 1e-12);
    if (cfg.dt_fom > advective)
        fail(errc::stability, "dt_fom " + format_double(cfg.dt_fom) +
                                  " violates the advective CFL bound " +
                                  format_double(advective));
    if (cfg.viscosity > 0.0) {
        const double diffusive = 0.25 * dx * dx / cfg.viscosity;
        if (cfg.dt_fom > diffusive)
            fail(errc::stability, "dt_fom " + format_double(cfg.dt_fom) +
                                      " violates the diffusive bound " +
                                      format_double(diffusive));
    }
}

class BurgersModel final : public DiscreteModel {
public:
    explicit BurgersModel(const BurgersConfig& cfg)
        : dx_(cfg.domain_length / cfg.n_points),
          layout_(FieldLayout::single("u", 1, cfg.n_points)),
          quadrature_(Quadrature::uniform(cfg.n_points, cfg.domain_length / cfg.n_points)) {}

    const Quadrature& quadrature() const override { return quadrature_; }
    const FieldLayout& layout() const override { return layout_; }
    std::pair<Eigen::Index, Eigen::Index> velocity_span() const override {
        return {0, layout_.total_dofs()};
    }
    Eigen::VectorXd apply_linear(const Eigen::VectorXd& mode, double viscosity) const override {
        return viscosity * d2_periodic(mode, dx_);
    }
    Eigen::VectorXd apply_quadratic(const Eigen::VectorXd& mode_m,
                                    const Eigen::VectorXd& mode_n) const override {
        return (-mode_m.array() * d1_periodic(mode_n, dx_).array()).matrix();
    }

private:
    double dx_;
    FieldLayout layout_;
    Quadrature quadrature_;
};

} // namespace

BurgersConfig BurgersConfig::for_reynolds(double reynolds) {
    BurgersConfig cfg;
    cfg.viscosity = 1.0 / reynolds;
    cfg.parameter = reynolds;
    return cfg;
}

Eigen::VectorXd burgers_initial_condition(const BurgersConfig& cfg) {
    // three harmonics with seeded phases plus a mean drift; every parameter
    // case shares the profile so coherent structures persist across the grid
    static constexpr double kAmplitudes[3] = {0.5, 0.25, 0.125};
    static constexpr double kMeanDrift = 0.4;
    std::mt19937_64 rng(cfg.init_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
    double phases[3];
    for (double& p : phases) p = phase(rng);

    const double dx = cfg.domain_length / cfg.n_points;
    const double wave = 2.0 * 3.14159265358979323846 / cfg.domain_length;
    Eigen::VectorXd u0(cfg.n_points);
    for (int i = 0; i < cfg.n_points; ++i) {
        const double x = dx * i;
        double value = kMeanDrift;
        for (int k = 0; k < 3; ++k)
            value += kAmplitudes[k] * std::sin(wave * (k + 1) * x + phases[k]);
        u0[i] = value;
    }
    return u0;
}

std::pair<SnapshotSet, Quadrature> burgers_run(const BurgersConfig& cfg) {
    return burgers_run_from(cfg, burgers_initial_condition(cfg));
}

std::pair<SnapshotSet, Quadrature> burgers_run_from(const BurgersConfig& cfg,
                                                    const Eigen::VectorXd& u0) {
    if (u0.size() != cfg.n_points)
        fail(errc::dimension_mismatch, "initial state length disagrees with n_points");
    Eigen::VectorXd u = u0;
    validate_config(cfg, u.cwiseAbs().maxCoeff());

    const double dx = cfg.domain_length / cfg.n_points;
    auto step = [&](Eigen::VectorXd& state) {
        const Eigen::VectorXd k1 = burgers_rhs(state, dx, cfg.viscosity);
        const Eigen::VectorXd k2 = burgers_rhs(state + 0.5 * cfg.dt_fom * k1, dx, cfg.viscosity);
        const Eigen::VectorXd k3 = burgers_rhs(state + 0.5 * cfg.dt_fom * k2, dx, cfg.viscosity);
        const Eigen::VectorXd k4 = burgers_rhs(state + cfg.dt_fom * k3, dx, cfg.viscosity);
        state += (cfg.dt_fom / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    for (int i = 0; i < cfg.n_transient; ++i) {
        step(u);
        if (!u.allFinite())
            fail(errc::divergence, "FOM diverged during the transient at step " +
                                       std::to_string(i + 1));
    }

    Eigen::MatrixXd data(cfg.n_points, cfg.n_snapshots);
    data.col(0) = u;
    for (int s = 1; s < cfg.n_snapshots; ++s) {
        for (int i = 0; i < cfg.snapshot_stride; ++i) step(u);
        if (!u.allFinite())
            fail(errc::divergence,
                 "FOM diverged before snapshot " + std::to_string(s + 1));
        data.col(s) = u;
    }

    const double t0 = cfg.dt_fom * cfg.n_transient;
    const double dt_snap = cfg.dt_fom * cfg.snapshot_stride;
    SnapshotSet snapshots(std::move(data), FieldLayout::single("u", 1, cfg.n_points),
                          cfg.parameter, t0, dt_snap);
    return {std::move(snapshots), Quadrature::uniform(cfg.n_points, dx)};
}

std::unique_ptr<DiscreteModel> burgers_model(const BurgersConfig& cfg) {
    if (!is_power_of_two(cfg.n_points) || cfg.n_points < 64)
        fail(errc::config, "n_points must be a power of two >= 64, got " +
                               std::to_string(cfg.n_points));
    return std::make_unique<BurgersModel>(cfg);
}

// ---------------------------------------------------------------------------
// manufactured family
// ---------------------------------------------------------------------------

namespace {

// seed basis with one extra drift column, exactly orthonormal
Eigen::MatrixXd seed_frame(const ManufacturedFamily& family) {
    std::mt19937_64 rng(family.base_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd raw(family.n_dof, family.n_rank + 1);
    for (Eigen::Index j = 0; j < raw.cols(); ++j)
        for (Eigen::Index i = 0; i < raw.rows(); ++i) raw(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(family.n_dof,
                                                                      family.n_rank + 1);
    // deterministic column signs
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (q(0, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Eigen::MatrixXd family_modes(const ManufacturedFamily& family, double param) {
    const Eigen::MatrixXd frame = seed_frame(family);
    const Eigen::Index n_rank = family.n_rank;
    Eigen::MatrixXd modes(family.n_dof, n_rank);

    // first mode drifts toward the extra direction: the span itself moves
    const double beta = 0.1 * param * family.angle_rate;
    modes.col(0) = std::cos(beta) * frame.col(0) + std::sin(beta) * frame.col(n_rank);

    // pairs rotate inside their own 2-planes: spans fixed, alignment varies
    for (Eigen::Index k = 1; 2 * k < n_rank; ++k) {
        const double delta = param * family.angle_rate * double(k);
        const Eigen::VectorXd a = frame.col(2 * k - 1);
        const Eigen::VectorXd b = frame.col(2 * k);
        modes.col(2 * k - 1) = std::cos(delta) * a + std::sin(delta) * b;
        modes.col(2 * k) = -std::sin(delta) * a + std::cos(delta) * b;
    }
    return modes;
}

} // namespace

std::vector<PodBasis> manufactured_bases(const ManufacturedFamily& family,
                                         const std::vector<double>& params) {
    if (family.n_rank % 2 == 0)
        fail(errc::parity, "manufactured family rank must be odd");
    if (family.n_rank < 1 || Eigen::Index(family.n_rank) > family.n_dof / 2)
        fail(errc::rank, "manufactured family rank must lie in 1..n_dof/2");

    auto quadrature = std::make_shared<Quadrature>(
        Quadrature::uniform(family.n_dof, 1.0));
    FieldLayout layout = FieldLayout::single("state", 1, int(family.n_dof));

    // descending singular value placeholders with near-equal pairs
    Eigen::VectorXd sv(family.n_rank);
    sv[0] = 1.0;
    for (Eigen::Index k = 1; 2 * k <= family.n_rank; ++k) {
        const double base = std::pow(0.7, double(k));
        sv[2 * k - 1] = base;
        if (2 * k < family.n_rank) sv[2 * k] = base * 0.98;
    }

    std::vector<PodBasis> bases;
    bases.reserve(params.size());
    for (double gamma : params) {
        PodBasis basis;
        basis.modes = family_modes(family, gamma);
        basis.singular_values = sv;
        basis.temporal.resize(0, 0);
        basis.parameter = gamma;
        basis.layout = layout;
        basis.weights_id = quadrature->id();
        basis.quadrature = quadrature;
        bases.push_back(std::move(basis));
    }
    return bases;
}

Eigen::MatrixXd manufactured_subspace(const ManufacturedFamily& family, double param) {
    return family_modes(family, param);
}

} // namespace prom
