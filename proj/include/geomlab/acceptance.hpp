#pragma once

#include <filesystem>
#include <ostream>

#include "geomlab/common.hpp"

namespace geomlab {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceSummary {
  std::vector<CriterionResult> results;
  bool all_pass = false;
  double wall_seconds = 0.0;
  std::string report_json;
};

/// Runs the full acceptance suite: every criterion at its pinned tolerance,
/// artifacts written twice (run_a/, run_b/) for the byte-identity check, and
/// a summary report at <outdir>/acceptance_report.json.
AcceptanceSummary run_acceptance(const std::filesystem::path& outdir, int workers = 1);

void print_acceptance(const AcceptanceSummary& summary, std::ostream& os);

}  // namespace geomlab
