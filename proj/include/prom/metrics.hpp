#ifndef PROM_METRICS_HPP
#define PROM_METRICS_HPP

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "prom/pod.hpp"
#include "prom/snapshot.hpp"

namespace prom {

/// Relative L2 error, snapshot-aggregated.
struct RleReport {
    double rle = 0.0;
    Eigen::Index n_snapshots_used = 0;
    std::map<std::string, double> per_field;    // block name -> restricted RLE
    std::string method_tag;
};

/// sqrt( sum_j |pred_j - truth_j|^2 / sum_j |truth_j|^2 ), plain Euclidean
/// norms on the stacked state. `field` restricts the headline value to one
/// layout block; per-field values are always reported.
RleReport rle(const SnapshotSet& truth, const SnapshotSet& prediction,
              const std::string& field = "", const std::string& method_tag = "");

/// Principal angles between the spans, radians ascending, computed in
/// W^{1/2} coordinates. Small angles use the sine route so they are
/// accurate near zero.
Eigen::VectorXd principal_angles(const PodBasis& a, const PodBasis& b);

/// Largest principal angle (subspace distance proxy).
double max_principal_angle(const PodBasis& a, const PodBasis& b);

struct TimingReport {
    std::string method;
    Eigen::Index n_dof = 0;
    Eigen::Index n_rank = 0;
    int n_neighbors = 0;
    double wall_seconds = 0.0;      // median over the timed repetitions
    int repetitions = 0;
};

/// Median wall time of the named interpolation ("gmi" or "mrpwi") over
/// `repetitions` timed runs after one untimed warm-up. repetitions < 5 is
/// rejected.
TimingReport benchmark_interpolation(const std::string& method,
                                     const std::vector<PodBasis>& bases,
                                     std::size_t reference_index, double target,
                                     int repetitions = 7);

/// CSV row schemas used by the sweep outputs.
void write_rle_header(class CsvWriter& csv);
void write_rle_row(class CsvWriter& csv, const std::string& method, Eigen::Index n_rank,
                   double delta_param, int n_neighbors, const std::string& field,
                   double value);
void write_timing_header(class CsvWriter& csv);
void write_timing_row(class CsvWriter& csv, const TimingReport& report);

} // namespace prom

#endif
