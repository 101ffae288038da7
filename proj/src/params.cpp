#include "prom/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "prom/common.hpp"
#include "prom/errors.hpp"

namespace prom {

namespace {

void validate_catalog(const CaseCatalog& catalog) {
    if (catalog.entries.empty())
        fail(errc::catalog, "catalog has no cases");
    if (catalog.n_neighbors < 1)
        fail(errc::catalog, "n_neighbors must be at least 1");
    for (std::size_t i = 0; i < catalog.entries.size(); ++i)
        for (std::size_t j = i + 1; j < catalog.entries.size(); ++j)
            if (catalog.entries[i].parameter == catalog.entries[j].parameter)
                fail(errc::catalog, "duplicate case parameter " +
                                        format_double(catalog.entries[i].parameter));
    double lo = catalog.entries[0].parameter, hi = lo;
    for (const auto& e : catalog.entries) {
        lo = std::min(lo, e.parameter);
        hi = std::max(hi, e.parameter);
    }
    if (!catalog.allow_extrapolation && (catalog.target < lo || catalog.target > hi))
        fail(errc::catalog, "target " + format_double(catalog.target) +
                                " lies outside the case hull [" + format_double(lo) + ", " +
                                format_double(hi) + "]; pass the extrapolation flag to allow");
}

} // namespace

std::vector<std::size_t> select_neighbors(const CaseCatalog& catalog) {
    validate_catalog(catalog);

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
        if (!catalog.include_exact && catalog.entries[i].parameter == catalog.target)
            continue;
        eligible.push_back(i);
    }
    if (eligible.size() < std::size_t(catalog.n_neighbors))
        fail(errc::catalog, "only " + std::to_string(eligible.size()) +
                                " eligible cases for n_neighbors = " +
                                std::to_string(catalog.n_neighbors));

    std::stable_sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
        double da = std::abs(catalog.entries[a].parameter - catalog.target);
        double db = std::abs(catalog.entries[b].parameter - catalog.target);
        if (da != db) return da < db;
        return catalog.entries[a].parameter < catalog.entries[b].parameter;
    });
    eligible.resize(std::size_t(catalog.n_neighbors));
    std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
        return catalog.entries[a].parameter < catalog.entries[b].parameter;
    });
    return eligible;
}

std::size_t select_reference(const std::vector<std::size_t>& neighbors,
                             const CaseCatalog& catalog) {
    if (neighbors.empty())
        fail(errc::catalog, "cannot pick a reference from an empty neighbor set");
    std::size_t best = neighbors[0];
    for (std::size_t idx : neighbors) {
        double d = std::abs(catalog.entries[idx].parameter - catalog.target);
        double db = std::abs(catalog.entries[best].parameter - catalog.target);
        if (d < db || (d == db && catalog.entries[idx].parameter <
                                      catalog.entries[best].parameter))
            best = idx;
    }
    return best;
}

std::vector<double> lagrange_weights(const std::vector<double>& params, double target) {
    const std::size_t n = params.size();
    if (n == 0) fail(errc::weights, "no interpolation nodes");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (params[i] == params[j])
                fail(errc::weights,
                     "duplicate interpolation node " + format_double(params[i]));

    std::vector<double> sigma(n, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m)
            if (m != j) sigma[j] *= (target - params[m]) / (params[j] - params[m]);
    return sigma;
}

std::vector<CatalogEntry> read_catalog_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::storage, "cannot open manifest: " + path);
    std::vector<CatalogEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos)
            fail(errc::format, path + ":" + std::to_string(line_no) +
                                   ": expected `parameter<TAB>path`");
        double parameter = 0.0;
        if (!parse_double(std::string_view(line).substr(start, tab - start), parameter))
            fail(errc::format, path + ":" + std::to_string(line_no) +
                                   ": malformed parameter value");
        entries.push_back(CatalogEntry{parameter, line.substr(tab + 1)});
    }
    return entries;
}

} // namespace prom
