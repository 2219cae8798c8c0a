#pragma once

#include <string>
#include <vector>

#include "nlshom/field.hpp"

namespace nlshom {

// Shortest round-trippable decimal form (printf %.17g trimmed); all file
// output goes through this so reruns are byte identical.
std::string format_double(double x);

void write_field_csv(const SpectralField& f, const std::string& path);
SpectralField read_field_csv(const std::string& path);

void write_field_json(const SpectralField& f, const std::string& path);
SpectralField read_field_json(const std::string& path);

// Column-oriented CSV table writer with deterministic formatting.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& row);
  void write(const std::string& path) const;
  std::string to_string() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace nlshom
