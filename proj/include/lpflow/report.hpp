#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpflow/norms.hpp"

namespace lpflow {

/// Column-named numeric table, written as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::vector<double> column(const std::string& name) const;
  void write_csv(const std::filesystem::path& path) const;
};

/// A line chart written as a small standalone SVG file.
struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> series;

  void write_svg(const std::filesystem::path& path) const;
};

struct ExperimentReport {
  std::string estimate_id;
  double s = 0.0;
  double p = 0.0;
  double q = 0.0;
  int d = 2;
  int n = 64;
  std::vector<std::uint64_t> seeds;
  std::vector<double> ratios;
  std::optional<double> calibration_max;
  std::map<std::string, Table> tables;
  std::map<std::string, Plot> plots;
  std::vector<std::string> notes;
  nlohmann::json extra = nlohmann::json::object();

  double max() const;
  double min() const;
  nlohmann::json to_json() const;
};

nlohmann::json to_json(const RatioReport& r);

/// report.json, tables/<name>.csv and plots/<name>.svg under dir.
void write_report(const ExperimentReport& r, const std::filesystem::path& dir);
void write_report(const RatioReport& r, const std::filesystem::path& dir);

/// JSON number that survives NaN and infinities (encoded as strings).
nlohmann::json json_number(double x);

}  // namespace lpflow
