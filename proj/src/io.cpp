#include "nlshom/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nlshom/fft.hpp"

namespace nlshom {

std::string format_double(double x) {
  char buf[40];
  // %.17g is always enough to round trip a double; prefer the shorter %.16g
  // form when it already does, to keep files readable.
  std::snprintf(buf, sizeof buf, "%.16g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back != x) std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

void write_field_csv(const SpectralField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  out << "x,re,im\n";
  for (std::size_t m = 0; m < f.size(); ++m) {
    out << format_double(f.x(m)) << ',' << format_double(f[m].real()) << ','
        << format_double(f[m].imag()) << '\n';
  }
}

SpectralField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("io: empty csv " + path);
  std::vector<cd> v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x = 0, re = 0, im = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3) {
      throw std::runtime_error("io: malformed csv row in " + path);
    }
    v.emplace_back(re, im);
  }
  return SpectralField::from_values(std::move(v));
}

void write_field_json(const SpectralField& f, const std::string& path) {
  nlohmann::json j;
  j["n"] = f.size();
  nlohmann::json modes = nlohmann::json::array();
  const std::vector<cd> hat = f.modes();
  for (std::size_t i = 0; i < hat.size(); ++i) {
    modes.push_back({fft_wavenumber(i, hat.size()), hat[i].real(), hat[i].imag()});
  }
  j["modes"] = modes;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

SpectralField read_field_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  nlohmann::json j;
  in >> j;
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<cd> hat(n, cd(0.0, 0.0));
  for (const auto& row : j.at("modes")) {
    const int k = row.at(0).get<int>();
    hat[fft_index(k, n)] = cd(row.at(1).get<double>(), row.at(2).get<double>());
  }
  return SpectralField::from_modes(hat);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("csv: row width mismatch");
  }
  rows_.push_back(row);
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out << columns_[c] << (c + 1 < columns_.size() ? ',' : '\n');
  }
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << format_double(row[c]) << (c + 1 < row.size() ? ',' : '\n');
    }
  }
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  out << to_string();
}

}  // namespace nlshom
