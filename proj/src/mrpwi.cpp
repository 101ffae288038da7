#include "prom/mrpwi.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "prom/errors.hpp"
#include "prom/params.hpp"

namespace prom {

std::uint64_t ComplexModePack::content_id() const {
    std::uint64_t h =
        fnv1a64(cmodes.data(), std::size_t(cmodes.size()) * sizeof(std::complex<double>));
    h = fnv1a64(&parameter, sizeof(parameter), h);
    h = fnv1a64(&weights_id, sizeof(weights_id), h);
    return h;
}

ComplexModePack complexify(const PodBasis& basis) {
    if (basis.n_rank() % 2 == 0)
        fail(errc::parity, "mode pairing needs an odd mode count, got " +
                               std::to_string(basis.n_rank()) +
                               "; change the rank to an odd value");
    if (!basis.quadrature)
        fail(errc::pairing, "basis carries no quadrature");

    const Eigen::Index n_pairs = (basis.n_rank() + 1) / 2;
    // W^{1/2} coordinates so alignment dot products see the weighted geometry
    Eigen::MatrixXd u = basis.quadrature->sqrt_weights().asDiagonal() * basis.modes;

    ComplexModePack pack;
    pack.cmodes.resize(basis.n_dof(), n_pairs);
    pack.cmodes.col(0).real() = u.col(0);
    pack.cmodes.col(0).imag().setZero();
    for (Eigen::Index k = 1; k < n_pairs; ++k) {
        pack.cmodes.col(k).real() = u.col(2 * k - 1);
        pack.cmodes.col(k).imag() = u.col(2 * k);
    }
    pack.parameter = basis.parameter;
    pack.weights_id = basis.weights_id;
    return pack;
}

namespace {

void check_shapes(const ComplexModePack& reference, const ComplexModePack& pack) {
    if (reference.cmodes.rows() != pack.cmodes.rows() ||
        reference.cmodes.cols() != pack.cmodes.cols())
        fail(errc::dimension_mismatch, "mode packs have different shapes");
    if (reference.weights_id != pack.weights_id)
        fail(errc::pairing, "mode packs use different weights conventions");
}

inline int sgn_or_plus(double x) { return x < 0.0 ? -1 : 1; }   // sgn(0) := +1

} // namespace

ComplexModePack sign_align(const ComplexModePack& reference, ComplexModePack pack) {
    check_shapes(reference, pack);
    const Eigen::Index n_pairs = pack.n_pairs();
    pack.applied_signs.resize(std::size_t(n_pairs));
    for (Eigen::Index k = 0; k < n_pairs; ++k) {
        const double dot_re =
            reference.cmodes.col(k).real().dot(pack.cmodes.col(k).real());
        const double dot_im =
            reference.cmodes.col(k).imag().dot(pack.cmodes.col(k).imag());
        const int s_re = sgn_or_plus(dot_re);
        const int s_im = sgn_or_plus(dot_im);
        if (s_re < 0) pack.cmodes.col(k).real() *= -1.0;
        if (s_im < 0) pack.cmodes.col(k).imag() *= -1.0;
        pack.applied_signs[std::size_t(k)] = {s_re, s_im};
    }
    pack.aligned_to = reference.content_id();
    return pack;
}

double kasner_angle(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size())
        fail(errc::dimension_mismatch, "kasner_angle length mismatch");
    const std::complex<double> inner = a.dot(b);    // conjugates a: a^* b
    const double magnitude = std::abs(inner);
    if (magnitude <= 1e-12 * a.norm() * b.norm())
        fail(errc::undefined_angle,
             "inner product magnitude " + format_double(magnitude) +
                 " is too small; the pseudo-angle is undefined for this mode pair");
    return std::atan2(inner.imag(), inner.real());
}

ComplexModePack rotation_align(const ComplexModePack& reference, ComplexModePack pack) {
    check_shapes(reference, pack);
    if (!pack.aligned_to || *pack.aligned_to != reference.content_id())
        fail(errc::pairing, "pack must be sign-aligned to this reference first");

    const Eigen::Index n_pairs = pack.n_pairs();
    pack.applied_angles.resize(std::size_t(n_pairs));
    for (Eigen::Index k = 0; k < n_pairs; ++k) {
        double angle;
        try {
            angle = kasner_angle(reference.cmodes.col(k), pack.cmodes.col(k));
        } catch (const Error& e) {
            if (e.code() == errc::undefined_angle)
                fail(errc::undefined_angle, "column " + std::to_string(k + 1) + ": " + e.what());
            throw;
        }
        pack.cmodes.col(k) *= std::exp(std::complex<double>(0.0, -angle));
        pack.applied_angles[std::size_t(k)] = angle;
    }
    return pack;
}

Eigen::MatrixXd recover_modes(const ComplexModePack& pack, const Quadrature& w) {
    if (pack.weights_id != w.id())
        fail(errc::pairing, "pack was built with different quadrature weights");
    if (pack.n_dof() != w.size())
        fail(errc::dimension_mismatch, "pack dofs disagree with quadrature length");

    const Eigen::Index n_pairs = pack.n_pairs();
    Eigen::MatrixXd u(pack.n_dof(), pack.n_rank());
    u.col(0) = pack.cmodes.col(0).real();
    for (Eigen::Index k = 1; k < n_pairs; ++k) {
        u.col(2 * k - 1) = pack.cmodes.col(k).real();
        u.col(2 * k) = pack.cmodes.col(k).imag();
    }
    return w.sqrt_weights().cwiseInverse().asDiagonal() * u;
}

namespace {

// Minimal-rotation orthonormalization, used only behind the option flag.
Eigen::MatrixXd loewdin(const Eigen::MatrixXd& u) {
    Eigen::MatrixXd gram = u.transpose() * u;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    return u * (eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose());
}

} // namespace

PodBasis mrpwi_interpolate(const std::vector<PodBasis>& bases, std::size_t reference_index,
                           double target_param, const MrpwiOptions& options) {
    if (bases.size() < 2)
        fail(errc::catalog, "need at least two bases to interpolate");
    if (reference_index >= bases.size())
        fail(errc::catalog, "reference index out of range");

    std::vector<double> params;
    params.reserve(bases.size());
    for (const auto& b : bases) params.push_back(b.parameter);
    const std::vector<double> sigma = lagrange_weights(params, target_param);

    const PodBasis& reference = bases[reference_index];
    const ComplexModePack ref_pack = complexify(reference);

    Eigen::MatrixXcd accumulated =
        Eigen::MatrixXcd::Zero(ref_pack.n_dof(), ref_pack.n_pairs());
    for (std::size_t j = 0; j < bases.size(); ++j) {
        try {
            ComplexModePack pack = complexify(bases[j]);
            pack = sign_align(ref_pack, pack);
            pack = rotation_align(ref_pack, pack);
            accumulated += sigma[j] * pack.cmodes;
        } catch (const Error& e) {
            if (e.code() == errc::parity || e.code() == errc::undefined_angle ||
                e.code() == errc::pairing)
                fail(e.code(), "case " + std::to_string(j) + " (parameter " +
                                   format_double(params[j]) + "): " + e.what());
            throw;
        }
    }

    ComplexModePack mean;
    mean.cmodes = std::move(accumulated);
    mean.parameter = target_param;
    mean.weights_id = reference.weights_id;

    PodBasis out;
    out.modes = recover_modes(mean, *reference.quadrature);
    if (options.reorthonormalize) {
        Eigen::MatrixXd u = reference.quadrature->sqrt_weights().asDiagonal() * out.modes;
        out.modes = reference.quadrature->sqrt_weights().cwiseInverse().asDiagonal() *
                    loewdin(u);
    }
    out.singular_values = reference.singular_values;   // placeholders
    out.sv_authoritative = false;
    out.temporal.resize(0, 0);
    out.parameter = target_param;
    out.layout = reference.layout;
    out.weights_id = reference.weights_id;
    out.quadrature = reference.quadrature;
    return out;
}

std::vector<double> pair_integrity_ratios(const PodBasis& basis) {
    std::vector<double> ratios;
    const Eigen::Index n_rank = basis.n_rank();
    for (Eigen::Index k = 1; 2 * k < n_rank; ++k) {
        const double hi = basis.singular_values[2 * k - 1];
        const double lo = basis.singular_values[2 * k];
        ratios.push_back(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
    return ratios;
}

void write_alignment_csv(const std::vector<ComplexModePack>& packs, const std::string& path) {
    CsvWriter csv(path);
    csv.cell("case");
    csv.cell("column");
    csv.cell("sign_re");
    csv.cell("sign_im");
    csv.cell("angle");
    csv.end_row();
    for (std::size_t j = 0; j < packs.size(); ++j) {
        const auto& pack = packs[j];
        for (std::size_t k = 0; k < pack.applied_signs.size(); ++k) {
            csv.cell(std::int64_t(j));
            csv.cell(std::int64_t(k + 1));
            csv.cell(std::int64_t(pack.applied_signs[k].first));
            csv.cell(std::int64_t(pack.applied_signs[k].second));
            csv.cell(k < pack.applied_angles.size() ? pack.applied_angles[k] : 0.0);
            csv.end_row();
        }
    }
    csv.close();
}

} // namespace prom
