#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geomlab/common.hpp"

namespace geomlab {

inline constexpr const char* kVersionStamp = "geomlab 0.1.0";

/// Experiment configuration: flat key-value text with typed sections, written
/// and parsed losslessly. CLI flags override file keys.
struct ExperimentConfig {
  std::string command;
  std::string metric_a;
  std::string metric_b;
  int dim = 2;
  double radius = 0.0;  // 0 = gallery default chart
  int grid = 5;
  int s_steps = 11;
  uint64_t seed = 42;
  double tol = 1e-6;
  std::string out = "out";
  int workers = 1;
  std::map<std::string, std::string> extras;  // section "extra"

  std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  void validate() const;
  double extra_or(const std::string& key, double def) const;
  int extra_int_or(const std::string& key, int def) const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// CSV table with mandatory header and 17-significant-digit numeric cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Deterministic gnuplot-dialect plotting script referencing an emitted CSV.
std::string plot_script(const std::string& title, const std::string& csv_name,
                        const std::vector<std::pair<int, int>>& xy_columns,
                        const std::vector<std::string>& labels);

}  // namespace geomlab
