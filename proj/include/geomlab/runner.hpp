#pragma once

#include "geomlab/report.hpp"

namespace geomlab {

struct RunResult {
  bool pass = false;
  std::string summary_json;  // report content also written to disk
};

/// Dispatches one of: curvature-scan, convex-path, inj-estimate, ift-certify,
/// polar-path, all. Writes CSV/JSON artifacts (and a plot script) under
/// <out>/<command>/. The GEOMLAB_OUT environment variable overrides the
/// configured output directory.
RunResult run_command(const ExperimentConfig& config);

/// Deterministic sample grid: regular lattice points of the chart ball scaled
/// to the given fraction of the radius, kept if inside, in lexicographic
/// order.
std::vector<VectorXd> sample_grid(const struct ChartDomain& domain, int per_axis,
                                  double fraction);

/// Seeded uniform samples in the scaled chart ball.
std::vector<VectorXd> sample_random(const struct ChartDomain& domain, int count, double fraction,
                                    uint64_t seed);

}  // namespace geomlab
