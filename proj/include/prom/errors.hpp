#ifndef PROM_ERRORS_HPP
#define PROM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prom {

/// Error categories raised by the toolkit. The CLI maps them to exit codes:
/// validation/usage failures exit with 2, numerical failures with 3.
enum class errc {
    dimension_mismatch,
    format,
    storage,
    rank,
    data,
    pairing,
    weights,
    parity,
    undefined_angle,
    geodesic_domain,
    catalog,
    mass_matrix,
    divergence,
    stability,
    degenerate_truth,
    config,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

    /// True for failures of the numerics rather than of the inputs.
    bool numerical() const noexcept {
        switch (code_) {
        case errc::geodesic_domain:
        case errc::mass_matrix:
        case errc::divergence:
        case errc::stability:
        case errc::undefined_angle:
        case errc::degenerate_truth:
        case errc::data:
            return true;
        default:
            return false;
        }
    }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace prom

#endif
