#include "prom/pod.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "prom/errors.hpp"

namespace prom {

std::uint64_t PodBasis::content_id() const {
    std::uint64_t h = fnv1a64(modes.data(), std::size_t(modes.size()) * sizeof(double));
    h = fnv1a64(&parameter, sizeof(parameter), h);
    h = fnv1a64(&weights_id, sizeof(weights_id), h);
    return h;
}

PodBasis PodBasis::truncated(Eigen::Index r) const {
    if (r <= 0 || r > n_rank())
        fail(errc::rank, "truncation rank " + std::to_string(r) + " outside 1.." +
                             std::to_string(n_rank()));
    PodBasis out = *this;
    out.modes = modes.leftCols(r);
    out.singular_values = singular_values.head(r);
    if (temporal.size() > 0) out.temporal = temporal.leftCols(r);
    return out;
}

namespace {

// Deterministic sign convention: the entry of largest magnitude ends up
// positive, ties broken toward the lowest index.
void apply_sign_convention(Eigen::MatrixXd& modes, Eigen::MatrixXd& temporal) {
    for (Eigen::Index k = 0; k < modes.cols(); ++k) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < modes.rows(); ++i) {
            double mag = std::abs(modes(i, k));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (modes(arg, k) < 0.0) {
            modes.col(k) = -modes.col(k);
            if (temporal.size() > 0) temporal.col(k) = -temporal.col(k);
        }
    }
}

// Requested modes below the noise floor are a rank error, not noise output.
void check_tail(const Eigen::VectorXd& sigma, Eigen::Index n_rank) {
    const double floor = 1e-12 * sigma[0];
    for (Eigen::Index k = 0; k < n_rank; ++k) {
        if (sigma[k] < floor)
            fail(errc::rank, "singular value " + std::to_string(k + 1) + " (" +
                                 format_double(sigma[k]) +
                                 ") is below 1e-12 of the leading one; reduce the rank");
    }
}

// Loewdin orthonormalization in W^{1/2} coordinates: U <- U (U^T U)^{-1/2}.
// Minimal-rotation polish; the Gram-recovered left vectors lose
// orthonormality by eps * (sigma_1/sigma_k)^2 at trailing singular values.
void polish_orthonormality(Eigen::MatrixXd& u_coords) {
    Eigen::MatrixXd gram = u_coords.transpose() * u_coords;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
        fail(errc::data, "orthonormality polish failed to converge");
    Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    u_coords = u_coords * (eig.eigenvectors() * inv_sqrt.asDiagonal() *
                           eig.eigenvectors().transpose());
}

} // namespace

PodBasis compute_pod(const SnapshotSet& s, const Quadrature& w, Eigen::Index n_rank,
                     const PodOptions& options) {
    const Eigen::Index n_dof = s.n_dof();
    const Eigen::Index n_snap = s.n_snap();
    if (w.size() != n_dof)
        fail(errc::dimension_mismatch, "quadrature length disagrees with snapshot dofs");
    if (n_rank <= 0 || n_rank > std::min(n_dof, n_snap))
        fail(errc::rank, "requested rank " + std::to_string(n_rank) +
                             " exceeds min(n_dof, n_snap) = " +
                             std::to_string(std::min(n_dof, n_snap)));
    if (!s.data().allFinite())
        fail(errc::data, "snapshot matrix contains non-finite entries");

    Eigen::MatrixXd q = s.data();
    if (options.subtract_mean) {
        Eigen::VectorXd mean = q.rowwise().mean();
        q.colwise() -= mean;
    }

    // weighted data matrix Y = W^{1/2} Q
    Eigen::MatrixXd y = w.sqrt_weights().asDiagonal() * q;

    Eigen::VectorXd sigma;          // full spectrum, descending
    Eigen::MatrixXd u_coords;       // N_n x n_rank, orthonormal
    Eigen::MatrixXd temporal;       // N_s x n_rank

    if (options.method == PodMethod::snapshots) {
        // method of snapshots: eigendecompose the N_s x N_s Gram matrix
        Eigen::MatrixXd gram = y.transpose() * y;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        if (eig.info() != Eigen::Success)
            fail(errc::data, "Gram eigendecomposition failed to converge");
        sigma.resize(n_snap);
        for (Eigen::Index k = 0; k < n_snap; ++k) {
            double lambda = eig.eigenvalues()[n_snap - 1 - k];
            sigma[k] = std::sqrt(std::max(lambda, 0.0));
        }
        check_tail(sigma, n_rank);
        temporal.resize(n_snap, n_rank);
        for (Eigen::Index k = 0; k < n_rank; ++k)
            temporal.col(k) = eig.eigenvectors().col(n_snap - 1 - k);
        u_coords = y * temporal;
        for (Eigen::Index k = 0; k < n_rank; ++k) u_coords.col(k) /= sigma[k];
        polish_orthonormality(u_coords);
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
        sigma = svd.singularValues();
        check_tail(sigma, n_rank);
        u_coords = svd.matrixU().leftCols(n_rank);
        temporal = svd.matrixV().leftCols(n_rank);
    }

    PodBasis basis;
    basis.modes = w.sqrt_weights().cwiseInverse().asDiagonal() * u_coords;
    basis.temporal = std::move(temporal);
    basis.singular_values = sigma.head(n_rank);
    basis.parameter = s.parameter();
    basis.layout = s.layout();
    basis.weights_id = w.id();
    basis.quadrature = std::make_shared<Quadrature>(w);
    apply_sign_convention(basis.modes, basis.temporal);
    return basis;
}

Eigen::VectorXd project(const Eigen::VectorXd& q, const PodBasis& basis,
                        const Quadrature& w) {
    if (basis.weights_id != w.id())
        fail(errc::pairing, "basis was built with different quadrature weights");
    if (q.size() != basis.n_dof())
        fail(errc::dimension_mismatch, "state length disagrees with basis dofs");
    return basis.modes.transpose() * (w.weights().asDiagonal() * q);
}

void write_pod_basis(const PodBasis& basis, const std::string& path) {
    if (!basis.quadrature)
        fail(errc::pairing, "basis carries no quadrature; cannot serialize");
    PsnapHeader h;
    h.n_dof = basis.n_dof();
    h.n_snap = basis.n_rank();
    h.parameter = basis.parameter;
    h.dt_snap = 1.0;
    h.t0 = 0.0;
    h.layout = basis.layout;
    h.has_weights = true;
    h.extras.set("content", "pod_modes");
    std::string sv;
    for (Eigen::Index k = 0; k < basis.singular_values.size(); ++k) {
        if (k) sv += ',';
        sv += format_double(basis.singular_values[k]);
    }
    h.extras.set("singular_values", sv);
    h.extras.set("sv_authoritative", basis.sv_authoritative ? "1" : "0");
    write_psnap(path, h, basis.modes, &basis.quadrature->weights());
}

PodBasis read_pod_basis(const std::string& path) {
    Eigen::VectorXd weights;
    auto [h, payload] = read_psnap(path, &weights);
    if (h.extras.get_or("content", "") != "pod_modes")
        fail(errc::format, path + ": not a POD basis file (content tag missing)");
    if (!h.has_weights)
        fail(errc::format, path + ": basis file carries no quadrature weights");

    PodBasis basis;
    basis.modes = std::move(payload);
    basis.parameter = h.parameter;
    basis.layout = h.layout;
    auto quad = std::make_shared<Quadrature>(std::move(weights));
    basis.weights_id = quad->id();
    basis.quadrature = std::move(quad);
    basis.sv_authoritative = h.extras.get_or("sv_authoritative", "1") != "0";

    const std::string& sv_text = h.extras.get("singular_values");
    std::vector<double> sv;
    std::size_t pos = 0;
    while (pos <= sv_text.size() && !sv_text.empty()) {
        std::size_t comma = sv_text.find(',', pos);
        if (comma == std::string::npos) comma = sv_text.size();
        double value = 0.0;
        if (!parse_double(std::string_view(sv_text).substr(pos, comma - pos), value))
            fail(errc::format, path + ": malformed singular_values header line");
        sv.push_back(value);
        pos = comma + 1;
        if (comma == sv_text.size()) break;
    }
    if (Eigen::Index(sv.size()) != basis.modes.cols())
        fail(errc::format, path + ": singular value count disagrees with mode count");
    basis.singular_values = Eigen::Map<Eigen::VectorXd>(sv.data(), Eigen::Index(sv.size()));
    return basis;
}

bool is_pod_basis_file(const std::string& path) {
    PsnapHeader h = read_snapshot_header(path);
    return h.extras.get_or("content", "") == "pod_modes";
}

} // namespace prom
