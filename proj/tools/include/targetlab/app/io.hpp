#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "targetlab/radial_grid.hpp"
#include "targetlab/spectral2d.hpp"

namespace targetlab::app {

namespace fs = std::filesystem;
using nlohmann::json;

// 17 significant digits, '.' decimal point regardless of locale.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  // Mixed rows; numbers go through format_number.
  void raw_row(const std::vector<std::string>& cells);
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // throws Error(io)
};

CsvTable read_csv(const fs::path& path);

void write_json(const fs::path& path, const json& j);
json read_json(const fs::path& path);

// Flat little-endian float64 samples (row-major, values[iy * N + ix]) plus a
// JSON sidecar with the grid metadata. `stem` gets ".bin" and ".json".
void write_field(const fs::path& stem, const spectral::Field2D& field, const json& extra = {});
spectral::Field2D read_field(const fs::path& path);  // either the .bin or the .json

void write_profile_csv(const fs::path& path, const radial::RadialProfile& profile,
                       const std::string& value_name);

std::string sha256_file(const fs::path& path);

}  // namespace targetlab::app
