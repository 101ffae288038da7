#ifndef PROM_PARAMS_HPP
#define PROM_PARAMS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace prom {

struct CatalogEntry {
    double parameter = 0.0;
    std::string path;       // snapshot or basis file backing the case
};

/// Available cases, the target parameter, and the neighbor count.
struct CaseCatalog {
    std::vector<CatalogEntry> entries;
    double target = 0.0;
    int n_neighbors = 0;
    bool allow_extrapolation = false;
    bool include_exact = false;     // validation runs may keep the exact-match case
};

/// The n_neighbors cases closest to the target (ties toward the smaller
/// parameter), returned as catalog indices sorted by parameter ascending.
/// A case matching the target exactly is skipped unless include_exact.
std::vector<std::size_t> select_neighbors(const CaseCatalog& catalog);

/// The neighbor nearest the target; ties toward the smaller parameter.
std::size_t select_reference(const std::vector<std::size_t>& neighbors,
                             const CaseCatalog& catalog);

/// Lagrange interpolation weights sigma_j = prod_{m != j} (t - p_m)/(p_j - p_m).
std::vector<double> lagrange_weights(const std::vector<double>& params, double target);

/// Manifest file: one case per line, `parameter<TAB>path`, `#` comments.
std::vector<CatalogEntry> read_catalog_manifest(const std::string& path);

} // namespace prom

#endif
